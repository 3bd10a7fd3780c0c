//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) these run on the rayon pool;
//! without it they are plain loops. Every helper returns results in index
//! order, and floating-point reductions go through [`tree_sum`], so the
//! output never depends on the number of worker threads.

use std::ops::Add;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f)` collected in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `items.iter().map(f)` collected in order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// The result of `f` at the smallest index where it returns `Some`.
pub fn find_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// Exact integer sum of `f` over `0..n`.
pub fn sum_u128<F>(n: usize, f: F) -> u128
where
    F: Fn(usize) -> u128 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).sum()
    }
}

/// Pairwise summation in a fixed shape determined only by `xs.len()`.
pub fn tree_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

/// Index of the first entry within `tol` of the maximum.
pub fn argmax_first(values: &[f64], tol: f64) -> Option<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().position(|&v| v >= max - tol)
}

/// Runs `f` on a pool with `threads` workers (0 means the global default).
pub fn with_threads<T, F>(threads: usize, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            return f();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_results() {
        let v = map_range(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        assert_eq!(find_first(100, |i| (i % 7 == 6).then_some(i)), Some(6));
        assert_eq!(sum_u128(10, |i| i as u128), 45);
    }

    #[test]
    fn tree_sum_is_thread_independent() {
        let xs: Vec<f64> = (0..999).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let a = with_threads(1, || tree_sum(&map_slice(&xs, |x| x * 3.0)));
        let b = with_threads(4, || tree_sum(&map_slice(&xs, |x| x * 3.0)));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn argmax_ties_go_first() {
        assert_eq!(argmax_first(&[1.0, 3.0, 3.0 - 1e-12, 2.0], 1e-9), Some(1));
        assert_eq!(argmax_first(&[], 1e-9), None);
    }
}
