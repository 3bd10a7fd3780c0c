//! Seeded instance generators.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)` and a stream number selected with `set_stream`, so a
//! given (seed, stream) reproduces the same instance on every platform.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Fp, FpMatrix, FpVector, LinearForm, Subspace};
use crate::harmonic::{DenseFunction, PointSet};
use crate::quadsets::{tuple_rank, QuadTuple, QuadraticPoly};

pub fn rng_from_seed(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_element<R: Rng>(rng: &mut R, fp: Fp) -> u8 {
    rng.gen_range(0..fp.p())
}

pub fn random_vector<R: Rng>(rng: &mut R, fp: Fp, n: usize) -> FpVector {
    FpVector::new((0..n).map(|_| random_element(rng, fp)).collect())
}

pub fn random_form<R: Rng>(rng: &mut R, fp: Fp, n: usize) -> LinearForm {
    LinearForm::new(random_vector(rng, fp, n).coords)
}

pub fn random_matrix<R: Rng>(rng: &mut R, fp: Fp, rows: usize, cols: usize) -> FpMatrix {
    FpMatrix::from_flat(
        rows,
        cols,
        (0..rows * cols).map(|_| random_element(rng, fp)).collect(),
    )
    .expect("shape")
}

pub fn random_symmetric<R: Rng>(rng: &mut R, fp: Fp, n: usize) -> FpMatrix {
    let mut m = FpMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = random_element(rng, fp);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

pub fn random_poly<R: Rng>(rng: &mut R, fp: Fp, n: usize, homogeneous: bool) -> QuadraticPoly {
    let b = random_symmetric(rng, fp, n);
    if homogeneous {
        QuadraticPoly::homogeneous(b)
    } else {
        QuadraticPoly {
            b,
            l: random_form(rng, fp, n),
            c: random_element(rng, fp),
        }
    }
}

pub fn random_tuple<R: Rng>(rng: &mut R, domain: Subspace, d: usize, homogeneous: bool) -> QuadTuple {
    let fp = domain.fp();
    let k = domain.dim();
    let polys = (0..d).map(|_| random_poly(rng, fp, k, homogeneous)).collect();
    QuadTuple::new(domain, polys).expect("polys match the domain dimension")
}

/// Rejection sampling until the tuple has rank at least `min_rank`.
pub fn random_tuple_with_min_rank<R: Rng>(
    rng: &mut R,
    domain: Subspace,
    d: usize,
    min_rank: usize,
    homogeneous: bool,
    max_tries: usize,
) -> Result<QuadTuple> {
    if min_rank > domain.dim() && d > 0 {
        return Err(Error::BadParams(format!(
            "rank {min_rank} is impossible on a space of dimension {}",
            domain.dim()
        )));
    }
    for _ in 0..max_tries {
        let q = random_tuple(rng, domain.clone(), d, homogeneous);
        if tuple_rank(&q)?.at_least(min_rank) {
            return Ok(q);
        }
    }
    Err(Error::BadParams(format!(
        "no tuple of rank {min_rank} found in {max_tries} draws"
    )))
}

/// Values uniform in the closed unit disc (by radius and angle).
pub fn random_bounded_function<R: Rng>(rng: &mut R, domain: Subspace) -> DenseFunction {
    let n = domain.size() as usize;
    let values = (0..n)
        .map(|_| {
            let r: f64 = rng.gen_range(0.0..=1.0);
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, t)
        })
        .collect();
    DenseFunction::new(domain, values).expect("length matches")
}

/// A bounded function supported on `set`.
pub fn random_bounded_on<R: Rng>(rng: &mut R, set: &PointSet) -> DenseFunction {
    let f = random_bounded_function(rng, set.domain().clone());
    let mask = set.mask().to_vec();
    let values = f
        .values()
        .iter()
        .zip(&mask)
        .map(|(&v, &m)| if m { v } else { Complex64::new(0.0, 0.0) })
        .collect();
    DenseFunction::new(set.domain().clone(), values).expect("length matches")
}

/// Independent ±1 values on `set`, zero elsewhere.
pub fn random_signs_on<R: Rng>(rng: &mut R, set: &PointSet) -> DenseFunction {
    let values = set
        .mask()
        .iter()
        .map(|&m| {
            let v = if !m {
                0.0
            } else if rng.gen_bool(0.5) {
                1.0
            } else {
                -1.0
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    DenseFunction::new(set.domain().clone(), values).expect("length matches")
}

/// Each point kept with probability `prob`.
pub fn random_subset<R: Rng>(rng: &mut R, domain: Subspace, prob: f64) -> PointSet {
    let n = domain.size() as usize;
    let mask = (0..n).map(|_| rng.gen_bool(prob)).collect();
    PointSet::from_mask(domain, mask).expect("length matches")
}

/// A uniformly chosen subset of exactly `size` points.
pub fn random_subset_of_size<R: Rng>(rng: &mut R, domain: Subspace, size: usize) -> PointSet {
    let n = domain.size() as usize;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut mask = vec![false; n];
    for &i in idx.iter().take(size.min(n)) {
        mask[i] = true;
    }
    PointSet::from_mask(domain, mask).expect("length matches")
}

/// A random subspace of F_p^n of exactly the given dimension.
pub fn random_subspace<R: Rng>(rng: &mut R, fp: Fp, n: usize, dim: usize) -> Subspace {
    assert!(dim <= n);
    loop {
        let vs: Vec<FpVector> = (0..dim).map(|_| random_vector(rng, fp, n)).collect();
        if let Ok(s) = Subspace::from_basis(fp, n, &vs) {
            return s;
        }
    }
}

/// A colouring of the nonzero points of F_p^n with colours 1..=r.
pub fn random_colors<R: Rng>(rng: &mut R, fp: Fp, n: usize, r: usize) -> Vec<usize> {
    let count = fp.power_count(n) as usize - 1;
    (0..count).map(|_| rng.gen_range(1..=r)).collect()
}
