use num_complex::Complex64;
use proptest::prelude::*;

use qfa_core::complexity2::{ci_coefficients, project};
use qfa_core::gf::{Fp, Grid, Subspace};
use qfa_core::harmonic::{dft, dft_direct, inverse_dft, u2_norm_fourth, u2_norm_fourth_direct, DenseFunction, PointSet};
use qfa_core::increment::{check_density_preservation, high_rank_partition, max_level_density, DensityOptions};
use qfa_core::quadsets::{tuple_rank, zero_set};
use qfa_core::random::{random_bounded_function, random_poly, random_subset, random_tuple, rng_from_seed};

fn space() -> impl Strategy<Value = (Fp, usize)> {
    prop_oneof![
        (1usize..=4).prop_map(|n| (Fp::new(3).unwrap(), n)),
        (1usize..=2).prop_map(|n| (Fp::new(5).unwrap(), n)),
        Just((Fp::new(7).unwrap(), 1)),
    ]
}

fn small_space() -> impl Strategy<Value = (Fp, usize)> {
    prop_oneof![
        (1usize..=3).prop_map(|n| (Fp::new(3).unwrap(), n)),
        Just((Fp::new(5).unwrap(), 1)),
    ]
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval((fp, n) in space(), seed in any::<u64>()) {
        let f = random_bounded_function(&mut rng_from_seed(seed, 0), Subspace::full(fp, n));
        let fh = dft(&f).unwrap();
        let lhs: f64 = fh.values().iter().map(|v| v.norm_sqr()).sum();
        prop_assert!(rel_close(lhs, f.len() as f64 * f.l2_squared(), 1e-9));
    }

    #[test]
    fn dft_inverts_and_matches_definition((fp, n) in space(), seed in any::<u64>()) {
        let f = random_bounded_function(&mut rng_from_seed(seed, 0), Subspace::full(fp, n));
        let fh = dft(&f).unwrap();
        let back = inverse_dft(&fh).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            prop_assert!((a - b).norm() < 1e-9);
        }
        for (a, b) in fh.values().iter().zip(dft_direct(&f).values()) {
            prop_assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn u2_by_both_routes((fp, n) in small_space(), seed in any::<u64>()) {
        let f = random_bounded_function(&mut rng_from_seed(seed, 0), Subspace::full(fp, n));
        let a = u2_norm_fourth(&f).unwrap();
        let b = u2_norm_fourth_direct(&f, 1 << 24).unwrap();
        prop_assert!(rel_close(a, b, 1e-8));
    }

    #[test]
    fn projection_is_idempotent_and_keeps_fibre_sums((fp, n) in small_space(), d in 0usize..=2, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed, 0);
        let h = Subspace::full(fp, n);
        let q = random_tuple(&mut rng, h.clone(), d, false);
        let f = random_bounded_function(&mut rng, h);
        let pf = project(&f, &q).unwrap();
        let again = project(&pf.function(&q).unwrap(), &q).unwrap();
        for (a, b) in pf.values.iter().zip(&again.values) {
            prop_assert!((a - b).norm() < 1e-9);
        }
        let codes = q.level_codes().unwrap();
        let mut diff = vec![Complex64::new(0.0, 0.0); pf.fiber_sizes.len()];
        for ((&c, &a), &b) in codes.iter().zip(f.values()).zip(&pf.values) {
            diff[c] += a - b;
        }
        prop_assert!(diff.iter().all(|v| v.norm() < 1e-9));
        prop_assert_eq!(pf.fiber_sizes.iter().sum::<u64>() as usize, f.len());
    }

    #[test]
    fn zero_set_is_where_every_poly_vanishes((fp, n) in small_space(), d in 0usize..=3, seed in any::<u64>()) {
        let q = random_tuple(&mut rng_from_seed(seed, 0), Subspace::full(fp, n), d, false);
        let z = zero_set(&q).unwrap();
        let points = q.domain().enumerate_points(1 << 20).unwrap();
        for (i, x) in points.iter().enumerate() {
            let on = q.eval(x).unwrap().iter().all(|&v| v == 0);
            prop_assert_eq!(on, z.contains_index(i));
        }
    }

    #[test]
    fn density_never_drops_when_a_form_is_added((fp, n) in small_space(), d in 0usize..=1, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed, 0);
        let h = Subspace::full(fp, n);
        let q = random_tuple(&mut rng, h.clone(), d, true);
        let a = random_subset(&mut rng, h, 0.4);
        let extra = random_poly(&mut rng, fp, n, true);
        let c = check_density_preservation(&a, &q, &extra, &DensityOptions::default()).unwrap();
        prop_assert!(c.pass);
        prop_assert!(c.after.delta >= c.before.delta);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_guarantees(n in 1usize..=3, d in 1usize..=2, r in 1usize..=2, rank in 1usize..=3, seed in any::<u64>()) {
        let fp = Fp::new(3).unwrap();
        let mut rng = rng_from_seed(seed, 0);
        let h = Subspace::full(fp, n);
        let q = random_tuple(&mut rng, h.clone(), d, true);
        let sets: Vec<PointSet> = (0..r).map(|_| random_subset(&mut rng, h.clone(), 0.4)).collect();
        let opts = DensityOptions::default();
        let res = high_rank_partition(&q, rank, &sets, &opts).unwrap();
        prop_assert!(tuple_rank(&res.tuple).unwrap().at_least(rank));
        prop_assert!(res.tuple.d() <= d);
        prop_assert!(res.domain().codim() <= (rank + r - 1) * d);
        for a in &sets {
            let before = max_level_density(a, &q, &opts).unwrap().delta;
            let after = max_level_density(a, &res.tuple, &opts).unwrap().delta;
            prop_assert!(after >= before);
        }
    }
}

#[test]
fn ci_coefficients_sum_to_zero() {
    for p in [3i64, 5, 7] {
        let fp = Fp::new(p).unwrap();
        for c1 in 1..fp.p() {
            for c2 in 1..fp.p() {
                for c3 in 1..fp.p() {
                    if c1 == c2 || c2 == c3 || c1 == c3 {
                        continue;
                    }
                    let c = ci_coefficients(fp, c1, c2, c3).unwrap();
                    assert_eq!(c.iter().fold(0, |s, &x| fp.add(s, x)), 0, "{c1} {c2} {c3}");
                    assert!(!c.contains(&0));
                }
            }
        }
    }
}

#[test]
fn grid_and_subspace_enumerate_alike() {
    let fp = Fp::new(5).unwrap();
    let grid = Grid::new(fp, 2);
    let points = Subspace::full(fp, 2).enumerate_points(1 << 10).unwrap();
    for (i, x) in points.iter().enumerate() {
        assert_eq!(grid.coords(i), x.coords);
    }
    let f = DenseFunction::from_fn(Subspace::full(fp, 2), |x| Complex64::new(x.coords[0] as f64, 0.0));
    assert_eq!(f.values()[5].re, 1.0);
}
