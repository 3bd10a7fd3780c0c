//! Verification suites. Each battery appends records to a [`Recorder`]; the
//! acceptance tests call the same batteries with larger counts.

use std::collections::HashSet;

use anyhow::Result;
use num_complex::Complex64;
use rand::Rng;

use qfa_core::brauer::{
    check_counting_lemma, check_u3_control, find_monochromatic_brauer, lower_bound_coloring, Coloring,
    EMPIRICAL_COUNTING_CONSTANT,
};
use qfa_core::complexity2::{
    ci_coefficients, complexity_check, kernel_sum_check, project, weighted_solution_count, check_von_neumann,
    LinearSystem,
};
use qfa_core::gf::{annihilator, Fp, FpMatrix, FpVector, Grid, LinearForm, Subspace};
use qfa_core::harmonic::{
    check_moment_inverse, check_restriction, check_spectral_estimate, dft, dft_direct, fourier_uniformity,
    inverse_dft, roots_of_unity, u2_inverse_witness, u2_norm, u2_norm_fourth, u2_norm_fourth_direct, u3_norm,
    DenseFunction, PointSet,
};
use qfa_core::increment::{
    check_density_preservation, high_rank_partition, max_level_density, run_iteration, verify_certificate,
    Certificate, DensityMode, DensityOptions,
};
use qfa_core::inverse_lab::{planted_phase, quadratic_witness_search, InverseBranch, InverseOptions};
use qfa_core::par;
use qfa_core::quadsets::{
    check_coset_uniformity, differenced_set, generic_codim_census, once_differenced_census,
    thrice_differenced_census, tuple_rank, weyl_sum, zero_set, QuadTuple, QuadraticPoly,
};
use qfa_core::random::{
    random_bounded_function, random_bounded_on, random_form, random_poly, random_signs_on, random_subset,
    random_subspace, random_tuple, random_tuple_with_min_rank, random_vector, rng_from_seed,
};
use qfa_core::tolerance::close_rel;
use qfa_core::Error;

use crate::config::RunConfig;
use crate::gen::{pinned_coloring, pinned_iteration_config, pinned_tuple, MAX_TRIES};
use crate::report::{num, rat, Outcome, Recorder, ReportRecord};

pub const SUITES: [&str; 7] = ["fourier", "u2u3", "levelsets", "brauer", "increment", "inverse", "appendix"];

/// Samples of the thrice-differenced census in the default run.
pub const CENSUS_SAMPLES: usize = 200;

type CoreResult<T> = qfa_core::Result<T>;

fn full(fp: Fp, n: usize) -> Subspace {
    Subspace::full(fp, n)
}

/// Stream `tag << 32 | i` of the run seed.
fn rng_for(cfg: &RunConfig, tag: u64, i: usize) -> impl Rng {
    rng_from_seed(cfg.seed, (tag << 32) | i as u64)
}

fn inst(fp: Fp, n: usize, i: usize) -> String {
    format!("p{}n{}#{i}", fp.p(), n)
}

fn budget(what: &'static str, requested: u128, budget: u128) -> CoreResult<()> {
    if requested > budget {
        Err(Error::BudgetExceeded {
            what,
            requested,
            budget,
        })
    } else {
        Ok(())
    }
}

fn symmetric_from_upper(k: usize, upper: &[u8]) -> FpMatrix {
    let mut m = FpMatrix::zeros(k, k);
    let mut it = upper.iter();
    for i in 0..k {
        for j in i..k {
            let v = *it.next().expect("k(k+1)/2 entries");
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A tuple of at least the given rank on F_p^n with nonempty zero set.
fn level_set_instance(rng: &mut impl Rng, fp: Fp, n: usize, d: usize, rank: usize) -> CoreResult<(QuadTuple, PointSet)> {
    for _ in 0..100 {
        let q = random_tuple_with_min_rank(rng, full(fp, n), d, rank.min(n), false, MAX_TRIES)?;
        let z = zero_set(&q)?;
        if !z.is_empty() {
            return Ok((q, z));
        }
    }
    Err(Error::EmptyLevelSet)
}

fn density_opts(cfg: &RunConfig) -> DensityOptions {
    DensityOptions {
        mode: DensityMode::Exhaustive,
        budget: cfg.budgets.density,
    }
}

// ---------------------------------------------------------------- fourier

/// Parseval, the two U² routes, inverse transform, direct transform and
/// modulation covariance on random bounded functions.
pub fn fourier_identities(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, count: usize) {
    let h = full(fp, n);
    let tol = &cfg.tolerances;
    let grid = Grid::new(fp, n);
    for i in 0..count {
        let mut rng = rng_for(cfg, 1, i);
        let f = random_bounded_function(&mut rng, h.clone());
        let l0 = random_vector(&mut rng, fp, n).coords;
        let id = inst(fp, n, i);
        rec.run("parseval", &id, || {
            let fh = dft(&f)?;
            let lhs = f.l2_squared();
            let rhs = fh.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / h.size() as f64;
            Ok(Outcome::check(num(lhs), num(rhs), close_rel(lhs, rhs, tol.identity_rel)))
        });
        rec.run("u2-dual-path", &id, || {
            let fast = u2_norm_fourth(&f)?;
            let direct = u2_norm_fourth_direct(&f, cfg.budgets.enumeration)?;
            Ok(Outcome::check(num(fast), num(direct), close_rel(fast, direct, tol.identity_rel)))
        });
        rec.run("dft-roundtrip", &id, || {
            let back = inverse_dft(&dft(&f)?)?;
            let err = max_abs_diff(back.values(), f.values());
            Ok(Outcome::check(num(err), num(tol.roundtrip_abs), err <= tol.roundtrip_abs))
        });
        rec.run("dft-direct", &id, || {
            let err = max_abs_diff(dft(&f)?.values(), dft_direct(&f).values());
            let bound = tol.identity_rel * h.size() as f64;
            Ok(Outcome::check(num(err), num(bound), err <= bound))
        });
        rec.run("modulation-covariance", &id, || {
            let fh = dft(&f)?;
            let gh = dft(&f.modulate(&l0))?;
            let shift = grid.index(&l0);
            let err = (0..grid.size())
                .map(|l| (gh.values()[l] - fh.values()[grid.add(l, shift)]).norm())
                .fold(0.0, f64::max);
            let bound = tol.roundtrip_abs * h.size() as f64;
            Ok(Outcome::check(num(err), num(bound), err <= bound))
        });
    }
}

// ---------------------------------------------------------------- u2u3

/// The large-spectrum size bound with spectrum threshold at or above the
/// one required, on level sets of rank at least `rank`. Instance 0 uses the
/// indicator of the level set.
pub fn spectral_estimate(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, rank: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 2, i);
        rec.run("spectrum-size-bound", inst(fp, n, i), || {
            let (_, phi) = level_set_instance(&mut rng, fp, n, 1, rank)?;
            let f = if i == 0 {
                phi.indicator()
            } else {
                random_bounded_on(&mut rng, &phi)
            };
            let eps = fourier_uniformity(&phi)?.epsilon;
            let threshold = (2.0 * eps * phi.len() as f64).sqrt() * f.l2_norm();
            let u: f64 = rng.gen_range(0.0..1.0);
            let k = if threshold > 0.0 { threshold * (1.0 + u) } else { 1.0 + u };
            let c = check_spectral_estimate(&f, &phi, k)?;
            Ok(Outcome::check(c.spec_size.to_string(), num(c.bound), c.pass && c.precondition_met)
                .with_ratio(c.spec_size as f64 / c.bound))
        });
    }
}

/// Linear phases times a level-set indicator must correlate with a
/// character at least `½η⁴|Φ|`; random signs are only reported.
pub fn u2_inverse(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, rank: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 3, i);
        let id = inst(fp, n, i);
        let instance = level_set_instance(&mut rng, fp, n, 1, rank);
        let l0 = random_vector(&mut rng, fp, n).coords;
        rec.run("u2-inverse-planted", &id, || {
            let (_, phi) = instance.clone()?;
            let f = phi.indicator().modulate(&l0);
            let w = u2_inverse_witness(&f, &phi)?;
            let target = 0.5 * w.eta.powi(4) * phi.len() as f64;
            let out = Outcome::check(num(w.correlation), num(target), w.meets(0.5, phi.len()));
            Ok(if w.hypothesis_met { out } else { out.with_note("uniformity hypothesis not met") })
        });
        rec.run("u2-inverse-random", &id, || {
            let (_, phi) = instance.clone()?;
            let f = random_signs_on(&mut rng, &phi);
            let w = u2_inverse_witness(&f, &phi)?;
            let scale = w.eta.powi(4) * phi.len() as f64;
            let ratio = if scale > 0.0 { w.correlation / scale } else { 0.0 };
            Ok(Outcome::report(num(w.correlation), num(scale), ratio))
        });
    }
}

/// Restriction and moment estimates, whose constants are implicit.
pub fn restriction_reports(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, rank: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 4, i);
        let id = inst(fp, n, i);
        let instance = level_set_instance(&mut rng, fp, n, 1, rank)
            .map(|(_, phi)| (random_bounded_on(&mut rng, &phi), phi));
        rec.run("restriction-ratio", &id, || {
            let (f, phi) = instance.clone()?;
            let r = check_restriction(&f, &phi, 4.0)?;
            Ok(Outcome::report(num(r.lhs), num(r.rhs), r.ratio))
        });
        rec.run("moment-inverse-ratio", &id, || {
            let (f, phi) = instance.clone()?;
            let r = check_moment_inverse(&f, &phi, 4.0)?;
            let out = Outcome::report(num(r.moment_ratio), num(r.sup_ratio_power), r.ratio);
            Ok(if r.hypothesis_met { out } else { out.with_note("hypothesis not met") })
        });
    }
}

/// Quadratic phases have the U³ norm of the constant function, and the
/// normalized U² norm never exceeds the normalized U³ norm.
pub fn u3_identities(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, count: usize) {
    let h = full(fp, n);
    let roots = roots_of_unity(fp);
    let size = h.size() as f64;
    let tol = cfg.tolerances.identity_rel;
    for i in 0..count {
        let mut rng = rng_for(cfg, 5, i);
        let id = inst(fp, n, i);
        let q = random_poly(&mut rng, fp, n, false);
        let g = random_bounded_function(&mut rng, h.clone());
        rec.run("u3-quadratic-phase", &id, || {
            let f = DenseFunction::from_fn(h.clone(), |x| roots[q.eval(fp, &x.coords) as usize]);
            let one = DenseFunction::constant(h.clone(), Complex64::new(1.0, 0.0));
            let a = u3_norm(&f, cfg.budgets.u3)?;
            let b = u3_norm(&one, cfg.budgets.u3)?;
            Ok(Outcome::check(num(a), num(b), close_rel(a, b, tol)))
        });
        rec.run("u2-below-u3", &id, || {
            let n2 = u2_norm(&g)? / size.powf(0.75);
            let n3 = u3_norm(&g, cfg.budgets.u3)? / size.sqrt();
            Ok(Outcome::check(num(n2), num(n3), n2 <= n3 * (1.0 + tol)))
        });
    }
}

// ---------------------------------------------------------------- level sets

/// Every homogeneous quadratic form on F_p^n, summed over the whole space.
pub fn weyl_exhaustive(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize) {
    let tri = n * (n + 1) / 2;
    let forms = fp.power_count(tri);
    rec.run("weyl-bound", format!("p{}n{}:all-{forms}-forms", fp.p(), n), || {
        budget("homogeneous forms", forms * fp.power_count(n), cfg.budgets.enumeration)?;
        let h = full(fp, n);
        let grid = Grid::new(fp, tri);
        let checks = par::map_range(grid.size(), |c| {
            weyl_sum(&QuadraticPoly::homogeneous(symmetric_from_upper(n, grid.digits(c))), &h, &h)
        });
        let checks = checks.into_iter().collect::<CoreResult<Vec<_>>>()?;
        let violations = checks.iter().filter(|c| !c.pass).count();
        let worst = checks.iter().map(|c| c.magnitude / c.bound).fold(0.0, f64::max);
        Ok(Outcome::check(violations.to_string(), "0", violations == 0).with_ratio(worst))
    });
}

/// Random polynomials summed over random cosets.
pub fn weyl_random(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, count: usize) {
    let h = full(fp, n);
    for i in 0..count {
        let mut rng = rng_for(cfg, 6, i);
        let q = random_poly(&mut rng, fp, n, false);
        let dim = rng.gen_range(0..=n);
        let v = random_subspace(&mut rng, fp, n, dim);
        let x0 = random_vector(&mut rng, fp, n);
        rec.run("weyl-bound", inst(fp, n, i), || {
            let w = weyl_sum(&q, &h, &v.with_offset(&x0)?)?;
            Ok(Outcome::check(num(w.magnitude), num(w.bound), w.pass).with_ratio(w.magnitude / w.bound))
        });
    }
}

/// `|Σ_{x∈F_3} e_3(x²)| = √3`.
pub fn gauss_sum(rec: &mut Recorder, cfg: &RunConfig) {
    rec.run("gauss-sum", "p3n1", || {
        let fp = Fp::new(3)?;
        let h = full(fp, 1);
        let q = QuadraticPoly::homogeneous(FpMatrix::identity(1));
        let w = weyl_sum(&q, &h, &h)?;
        let target = 3f64.sqrt();
        Ok(Outcome::check(
            num(w.magnitude),
            num(target),
            (w.magnitude - target).abs() <= cfg.tolerances.char_sum_abs,
        ))
    });
}

/// `{x : Q(x) = 0, Q(x+u_i) = 0, Q(v_j−x) = 0}` by vector arithmetic.
fn differenced_oracle(q: &QuadTuple, points: &[FpVector], u: &[FpVector], v: &[FpVector]) -> CoreResult<Vec<bool>> {
    let fp = q.fp();
    let zero = vec![0u8; q.d()];
    let on = |x: &FpVector| -> CoreResult<bool> { Ok(q.eval(x)? == zero) };
    points
        .iter()
        .map(|x| {
            let mut inside = on(x)?;
            for ui in u {
                inside = inside && on(&x.add(fp, ui))?;
            }
            for vj in v {
                inside = inside && on(&vj.sub(fp, x))?;
            }
            Ok(inside)
        })
        .collect()
}

fn differenced_matches(q: &QuadTuple, points: &[FpVector], u: &[FpVector], v: &[FpVector]) -> CoreResult<(usize, usize, bool)> {
    let ds = differenced_set(q, u, v)?;
    let oracle = differenced_oracle(q, points, u, v)?;
    let size = oracle.iter().filter(|&&b| b).count();
    Ok((ds.phi.len(), size, ds.phi.mask() == oracle.as_slice()))
}

/// The differenced-set identity on `configs` random `(u, v)` configurations
/// (up to two of each) for each of `tuples` random tuples.
#[allow(clippy::too_many_arguments)]
pub fn differenced_sets(
    rec: &mut Recorder,
    cfg: &RunConfig,
    fp: Fp,
    n: usize,
    d: usize,
    rank: usize,
    tuples: usize,
    configs: usize,
) {
    let points = match full(fp, n).enumerate_points(cfg.budgets.enumeration) {
        Ok(p) => p,
        Err(e) => {
            rec.run("differenced-set-identity", format!("p{}n{}", fp.p(), n), || Err(e));
            return;
        }
    };
    for t in 0..tuples {
        let mut rng = rng_for(cfg, 7, t);
        let q = match random_tuple_with_min_rank(&mut rng, full(fp, n), d, rank.min(n), false, MAX_TRIES) {
            Ok(q) => q,
            Err(e) => {
                rec.run("differenced-set-identity", inst(fp, n, t), || Err(e));
                continue;
            }
        };
        for c in 0..configs {
            let a = rng.gen_range(0..=2);
            let b = rng.gen_range(0..=2);
            let u: Vec<FpVector> = (0..a).map(|_| random_vector(&mut rng, fp, n)).collect();
            let v: Vec<FpVector> = (0..b).map(|_| random_vector(&mut rng, fp, n)).collect();
            rec.run("differenced-set-identity", format!("{}/{c}", inst(fp, n, t)), || {
                let (got, want, same) = differenced_matches(&q, &points, &u, &v)?;
                Ok(Outcome::check(got.to_string(), want.to_string(), same))
            });
        }
    }
}

/// Every single-`u`, single-`v` pair on one tuple.
pub fn differenced_exhaustive(rec: &mut Recorder, cfg: &RunConfig, q: &QuadTuple, label: &str) {
    let size = q.domain().size();
    rec.run("differenced-set-identity", format!("{label}:all-{}-pairs", size * size), || {
        budget("differenced pairs", size * size * size, cfg.budgets.enumeration * 16)?;
        let points = q.domain().enumerate_points(cfg.budgets.enumeration)?;
        let m = points.len();
        let results = par::map_range(m * m, |i| {
            let u = [points[i / m].clone()];
            let v = [points[i % m].clone()];
            differenced_matches(q, &points, &u, &v).map(|r| r.2)
        });
        let results = results.into_iter().collect::<CoreResult<Vec<_>>>()?;
        let mismatches = results.iter().filter(|&&ok| !ok).count();
        Ok(Outcome::check(mismatches.to_string(), "0", mismatches == 0))
    });
}

/// Character sums over level sets intersected with random cosets; half of
/// the characters are drawn from the annihilator of the coset direction.
#[allow(clippy::too_many_arguments)]
pub fn coset_uniformity(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, d: usize, rank: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 8, i);
        let q = random_tuple_with_min_rank(&mut rng, full(fp, n), d, rank.min(n), false, MAX_TRIES);
        let dim = rng.gen_range(0..=n);
        let v = random_subspace(&mut rng, fp, n, dim);
        let h = random_vector(&mut rng, fp, n);
        let l = if rng.gen_bool(0.5) {
            let ann = annihilator(&v);
            LinearForm::new(ann.point(&random_vector(&mut rng, fp, ann.dim()).coords).coords)
        } else {
            random_form(&mut rng, fp, n)
        };
        rec.run("coset-uniformity", inst(fp, n, i), || {
            let c = check_coset_uniformity(&q?, &v, &h, &l)?;
            let ratio = if c.bound > 0.0 { c.error / c.bound } else { 0.0 };
            Ok(if c.vacuous {
                Outcome::report(num(c.error), num(c.bound), ratio).with_note("vacuous hypothesis")
            } else {
                Outcome::check(num(c.error), num(c.bound), c.pass).with_ratio(ratio)
            })
        });
    }
}

/// Exceptional-tuple counts and differenced character sums on one tuple:
/// every `h` once, `samples` sampled triples, and exhaustive generic-codim
/// censuses for `k = 1, 2` with random linear parts.
pub fn censuses(rec: &mut Recorder, cfg: &RunConfig, q: &QuadTuple, label: &str, samples: usize) {
    let mut once = None;
    rec.run("once-differenced-degenerate", label, || {
        let c = once_differenced_census(q)?;
        let worst = c.degenerate_phi.max(c.degenerate_psi);
        let out = Outcome::check(worst.to_string(), num(c.cap), worst as f64 <= c.cap);
        once = Some(c);
        Ok(out)
    });
    if let Some(c) = once {
        rec.run("once-differenced-uniformity", label, || {
            Ok(Outcome::check(num(c.max_error_nondegenerate), num(c.bound), c.failing_nondegenerate_h == 0)
                .with_note(format!("{} of {} h fail", c.failing_nondegenerate_h, c.h_count)))
        });
    }
    let mut thrice = None;
    let mut rng = rng_for(cfg, 9, 0);
    rec.run("thrice-differenced", label, || {
        let c = thrice_differenced_census(q, samples, &mut rng, None)?;
        let out = Outcome::check(num(c.max_error_nondegenerate), num(c.bound), c.pass)
            .with_note(format!("{} samples, {} degenerate", c.samples, c.degenerate_sampled));
        thrice = Some(c);
        Ok(out)
    });
    if let Some(c) = thrice {
        rec.run("thrice-differenced-positive-exponent", label, || {
            let ratio = if c.bound_positive_exponent > 0.0 {
                c.max_error_nondegenerate / c.bound_positive_exponent
            } else {
                0.0
            };
            Ok(Outcome::report(num(c.max_error_nondegenerate), num(c.bound_positive_exponent), ratio))
        });
    }
    let fp = q.fp();
    for k in 1..=2 {
        let mut rng = rng_for(cfg, 10, k);
        let ls: Vec<Vec<LinearForm>> = (0..k)
            .map(|_| (0..q.d()).map(|_| random_form(&mut rng, fp, q.k())).collect())
            .collect();
        rec.run("generic-codim", format!("{label}:k{k}"), || {
            let c = generic_codim_census(fp, &q.forms(), &ls, cfg.budgets.enumeration)?;
            Ok(Outcome::check(c.degenerate.to_string(), num(c.cap), c.pass))
        });
    }
}

// ---------------------------------------------------------------- brauer

/// Plain double loop over `(x, y)` with `y ∈ A` and `x, x+y, x+2y ∈ Q⁻¹(0)`.
fn brauer_oracle(q: &QuadTuple, a: &PointSet) -> CoreResult<u64> {
    let fp = q.fp();
    let points = q.domain().enumerate_points(1 << 20)?;
    let zero = vec![0u8; q.d()];
    let members: HashSet<FpVector> = a.points().into_iter().collect();
    let mut on = Vec::with_capacity(points.len());
    for x in &points {
        on.push(q.eval(x)? == zero);
    }
    let mut hits = 0;
    for (x, &x_on) in points.iter().zip(&on) {
        if !x_on {
            continue;
        }
        for y in &members {
            let xy = x.add(fp, y);
            let x2y = xy.add(fp, y);
            if q.eval(&xy)? == zero && q.eval(&x2y)? == zero {
                hits += 1;
            }
        }
    }
    Ok(hits)
}

/// Exact Brauer counts on level sets against the nested-loop oracle, and the
/// normalized error against the empirical constant.
pub fn brauer_counting(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, d: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 11, i);
        let id = inst(fp, n, i);
        let q = random_tuple(&mut rng, full(fp, n), d, false);
        let keep: Vec<bool> = (0..fp.power_count(n)).map(|_| rng.gen_bool(0.5)).collect();
        let mut check = None;
        rec.run("brauer-count-oracle", &id, || {
            let z0 = zero_set(&q.homogeneous())?;
            let mask = z0.mask().iter().zip(&keep).map(|(&a, &b)| a && b).collect();
            let a = PointSet::from_mask(q.domain().clone(), mask)?;
            let c = check_counting_lemma(&q, &a)?;
            let oracle = brauer_oracle(&q, &a)?;
            let out = Outcome::check(c.count.to_string(), oracle.to_string(), c.count == oracle as u128);
            check = Some(c);
            Ok(out)
        });
        if let Some(c) = check {
            rec.run("brauer-count-error", &id, || {
                Ok(Outcome::check(num(c.normalized_error), num(EMPIRICAL_COUNTING_CONSTANT), c.within_empirical)
                    .with_ratio(c.normalized_error / EMPIRICAL_COUNTING_CONSTANT))
            });
        }
    }
}

fn monochromatic_quadruples(c: &Coloring) -> CoreResult<u64> {
    let fp = c.p;
    let points = full(fp, c.n).enumerate_points(1 << 20)?;
    let mut hits = 0;
    for x in &points {
        for y in &points {
            let xy = x.add(fp, y);
            let x2y = xy.add(fp, y);
            let colours: Vec<Option<usize>> = [x, y, &xy, &x2y].iter().map(|z| c.color_of(z)).collect();
            if colours.iter().all(|k| k.is_some() && *k == colours[0]) {
                hits += 1;
            }
        }
    }
    Ok(hits)
}

/// The explicit colouring of F_3^n \ {0} with n colours, for n up to `nmax`.
pub fn lower_bound_colorings(rec: &mut Recorder, nmax: usize) {
    for n in 1..=nmax {
        rec.run("lower-bound-coloring", format!("p3n{n}r{n}"), || {
            let c = lower_bound_coloring(Fp::new(3)?, n, n)?;
            let found = find_monochromatic_brauer(&c);
            let oracle = monochromatic_quadruples(&c)?;
            Ok(Outcome::check(
                u8::from(found.is_some()).to_string(),
                oracle.to_string(),
                found.is_none() && oracle == 0,
            ))
        });
    }
}

/// A one-colour colouring always contains a monochromatic quadruple.
pub fn monochrome_witness(rec: &mut Recorder, nmax: usize) {
    for n in 2..=nmax {
        rec.run("monochrome-witness", format!("p3n{n}"), || {
            let fp = Fp::new(3)?;
            let c = Coloring::monochrome(fp, n);
            let valid = find_monochromatic_brauer(&c).is_some_and(|w| {
                let xy = w.x.add(fp, &w.y);
                let x2y = xy.add(fp, &w.y);
                [&w.x, &w.y, &xy, &x2y].iter().all(|z| !z.is_zero())
            });
            Ok(Outcome::check(u8::from(valid).to_string(), "1", valid))
        });
    }
}

/// U³ control of the Brauer count: asserted for quadratic phases on the
/// level set, reported for random functions.
#[allow(clippy::too_many_arguments)]
pub fn u3_control(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, d: usize, rank: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 12, i);
        let id = inst(fp, n, i);
        let instance = level_set_instance(&mut rng, fp, n, d, rank);
        let phases: Vec<QuadraticPoly> = (0..3).map(|_| random_poly(&mut rng, fp, n, false)).collect();
        rec.run("u3-control-structured", &id, || {
            let (q, _) = instance.clone()?;
            let fs = phases.iter().map(|ph| planted_phase(&q, ph)).collect::<CoreResult<Vec<_>>>()?;
            let g = zero_set(&q.homogeneous())?.indicator();
            let r = check_u3_control(&fs[0], &fs[1], &fs[2], &g, &q)?;
            Ok(Outcome::check(num(r.min_ratio), num(r.eta / 4.0), r.structured_bound_holds))
        });
        rec.run("u3-control-random", &id, || {
            let (q, z) = instance.clone()?;
            let fs: Vec<DenseFunction> = (0..3).map(|_| random_bounded_on(&mut rng, &z)).collect();
            let g = zero_set(&q.homogeneous())?.indicator();
            let r = check_u3_control(&fs[0], &fs[1], &fs[2], &g, &q)?;
            let ratio = if r.eta > 0.0 { r.min_ratio / (r.eta / 4.0) } else { 0.0 };
            Ok(Outcome::report(num(r.min_ratio), num(r.eta / 4.0), ratio))
        });
    }
}

// ---------------------------------------------------------------- increment

/// `δ_{Q,q}(A) ≥ δ_Q(A)` for random homogeneous `Q` (d ≤ 1), `q` and `A`.
pub fn density_preservation(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, count: usize) {
    let opts = density_opts(cfg);
    for i in 0..count {
        let mut rng = rng_for(cfg, 13, i);
        let q = random_tuple(&mut rng, full(fp, n), i % 2, true);
        let a = random_subset(&mut rng, full(fp, n), 0.4);
        let extra = random_poly(&mut rng, fp, n, true);
        rec.run("density-preservation", inst(fp, n, i), || {
            let c = check_density_preservation(&a, &q, &extra, &opts)?;
            Ok(Outcome::check(rat(c.after.delta), rat(c.before.delta), c.pass))
        });
    }
}

/// Random homogeneous `(Q, A_1..A_r)` with `d ∈ {1, 2}` and `r ∈ {1, 2}`,
/// a third of them with `q_2` a multiple of `q_1`. The four output
/// guarantees are recomputed from the returned tuple.
pub fn partition(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, rank: usize, count: usize) {
    let opts = density_opts(cfg);
    for i in 0..count {
        let mut rng = rng_for(cfg, 14, i);
        let id = inst(fp, n, i);
        let d = 1 + i % 2;
        let r = 1 + (i / 2) % 2;
        let mut q = random_tuple(&mut rng, full(fp, n), d, true);
        if d == 2 && i % 3 == 0 {
            let q1 = q.polys()[0].clone();
            let s = rng.gen_range(1..fp.p());
            q = QuadTuple::new(full(fp, n), vec![q1.clone(), q1.scale(fp, s)]).expect("same domain");
        }
        let sets: Vec<PointSet> = (0..r)
            .map(|_| {
                let prob = rng.gen_range(0.2..0.6);
                random_subset(&mut rng, full(fp, n), prob)
            })
            .collect();
        let mut out = None;
        rec.run("partition-run", &id, || {
            let res = high_rank_partition(&q, rank, &sets, &opts)?;
            let o = Outcome::check(res.stats.steps.len().to_string(), "", true)
                .with_note(format!("d={d} r={r} R={rank}"));
            out = Some(res);
            Ok(o)
        });
        let Some(res) = out else { continue };
        for (j, a) in sets.iter().enumerate() {
            rec.run("partition-density", format!("{id}/A{j}"), || {
                let before = max_level_density(a, &q, &opts)?.delta;
                let after = max_level_density(a, &res.tuple, &opts)?.delta;
                Ok(Outcome::check(rat(after), rat(before), after >= before))
            });
        }
        rec.run("partition-rank", &id, || {
            let cert = tuple_rank(&res.tuple)?;
            let shown = cert.rank.map_or("inf".to_string(), |k| k.to_string());
            Ok(Outcome::check(shown, rank.to_string(), cert.at_least(rank)))
        });
        rec.run("partition-codim", &id, || {
            let codim = res.domain().codim() - q.domain().codim();
            let bound = (rank + r - 1) * d;
            Ok(Outcome::check(codim.to_string(), bound.to_string(), codim <= bound))
        });
        rec.run("partition-degree", &id, || {
            Ok(Outcome::check(res.tuple.d().to_string(), d.to_string(), res.tuple.d() <= d))
        });
    }
}

/// The pinned two-colouring run through the density-increment iteration;
/// the certificate is re-verified after a JSON round trip.
pub fn iteration(rec: &mut Recorder, cfg: &RunConfig) {
    let coloring = pinned_coloring();
    let sets: Vec<PointSet> = (1..=coloring.r).map(|c| coloring.class(c)).collect();
    let mut it = pinned_iteration_config();
    it.density = density_opts(cfg);
    it.increment.density = density_opts(cfg);
    it.increment.budget = cfg.budgets.increment;
    let mut run = None;
    rec.run("iteration-run", "pinned", || {
        let r = run_iteration(&sets, &it)?;
        let out = Outcome::check(r.trace.len().to_string(), it.max_stages.to_string(), r.certificate.is_some());
        run = Some(r);
        Ok(out)
    });
    let Some(run) = run else { return };
    for s in &run.trace {
        rec.run("chevalley-warning", format!("pinned/m{}", s.m), || {
            let ok = !s.zero_set_trivial || s.dim <= 2 * s.d;
            Ok(Outcome::check(s.dim.to_string(), (2 * s.d).to_string(), ok))
        });
    }
    if let Some(cert) = &run.certificate {
        rec.run("certificate", "pinned", || {
            let text = serde_json::to_string(cert).map_err(|e| Error::Malformed(e.to_string()))?;
            let back: Certificate = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
            let c = verify_certificate(&back, &sets)?;
            let ok = c.per_set.iter().filter(|&&b| b).count();
            Ok(Outcome::check(ok.to_string(), c.per_set.len().to_string(), c.pass))
        });
    }
}

// ---------------------------------------------------------------- inverse

/// Quadratic phases planted on level sets of rank at least `rank`: the
/// exhaustive search must reach half the level-set size and `η = 1`.
pub fn inverse_planted(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, rank: usize, count: usize) {
    let opts = InverseOptions {
        budget: cfg.budgets.witness,
        ..Default::default()
    };
    for i in 0..count {
        let mut rng = rng_for(cfg, 15, i);
        let id = format!("{}r{}", inst(fp, n, i), rank);
        let instance = level_set_instance(&mut rng, fp, n, 1, rank);
        let planted = random_poly(&mut rng, fp, n, false);
        let mut verdict = None;
        rec.run("inverse-planted-witness", &id, || {
            let (q, z) = instance.clone()?;
            if !tuple_rank(&q)?.at_least(rank) {
                return Err(Error::PreconditionUnmet(format!("rank below {rank}")));
            }
            let f = planted_phase(&q, &planted)?;
            let v = quadratic_witness_search(&f, &q, &opts)?;
            let target = 0.5 * z.len() as f64;
            let found = matches!(v.branch, InverseBranch::QuadraticWitness(_));
            let out = Outcome::check(num(v.best.correlation), num(target), found);
            verdict = Some(v);
            Ok(out)
        });
        if let Some(v) = verdict {
            rec.run("inverse-planted-eta", &id, || {
                Ok(Outcome::check(num(v.eta), "1", (v.eta - 1.0).abs() <= cfg.tolerances.accum_rel))
            });
        }
    }
}

/// Random signs on level sets: best correlation relative to the level set.
pub fn inverse_random(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, rank: usize, count: usize) {
    let opts = InverseOptions {
        budget: cfg.budgets.witness,
        ..Default::default()
    };
    for i in 0..count {
        let mut rng = rng_for(cfg, 16, i);
        rec.run("inverse-random", inst(fp, n, i), || {
            let (q, z) = level_set_instance(&mut rng, fp, n, 1, rank)?;
            let f = random_signs_on(&mut rng, &z);
            let v = quadratic_witness_search(&f, &q, &opts)?;
            let size = z.len() as f64;
            Ok(Outcome::report(num(v.best.correlation), num(size), v.best.correlation / size)
                .with_note(format!("eta={}", num(v.eta))))
        });
    }
}

// ---------------------------------------------------------------- appendix

/// Nonzero `(c_0..c_3)` summing to zero.
fn random_weights(rng: &mut impl Rng, fp: Fp) -> [u8; 4] {
    loop {
        let c: Vec<u8> = (0..3).map(|_| rng.gen_range(1..fp.p())).collect();
        let last = fp.neg(fp.add(fp.add(c[0], c[1]), c[2]));
        if last != 0 {
            return [c[0], c[1], c[2], last];
        }
    }
}

/// Fourier against brute force for weighted solution counts, cycling
/// through `spaces`.
pub fn solution_counts(rec: &mut Recorder, cfg: &RunConfig, spaces: &[(Fp, usize)], count: usize) {
    for i in 0..count {
        let (fp, n) = spaces[i % spaces.len()];
        let mut rng = rng_for(cfg, 17, i);
        let c = random_weights(&mut rng, fp);
        let values: Vec<f64> = (0..fp.power_count(n)).map(|_| rng.gen_range(0.0..1.0)).collect();
        rec.run("solution-count", inst(fp, n, i), || {
            let f = DenseFunction::from_real(full(fp, n), &values)?;
            let s = weighted_solution_count(&f, &c, cfg.budgets.solutions)?;
            match (s.brute, s.rel_err) {
                (Some(b), Some(e)) => {
                    Ok(Outcome::check(num(s.fourier), num(b), e <= cfg.tolerances.accum_rel).with_ratio(e))
                }
                _ => Err(Error::BudgetExceeded {
                    what: "solution loop",
                    requested: full(fp, n).size().pow(3),
                    budget: cfg.budgets.solutions,
                }),
            }
        });
    }
}

/// Every distinct nonzero `(c_1, c_2, c_3)` over F_p.
pub fn ci_exhaustive(rec: &mut Recorder, p: i64) {
    rec.run("ci-sum-zero", format!("p{p}:all-triples"), || {
        let fp = Fp::new(p)?;
        let mut failures = 0;
        let mut triples = 0;
        for c1 in 1..fp.p() {
            for c2 in 1..fp.p() {
                for c3 in 1..fp.p() {
                    if c1 == c2 || c1 == c3 || c2 == c3 {
                        continue;
                    }
                    triples += 1;
                    match ci_coefficients(fp, c1, c2, c3) {
                        Ok(c) => {
                            let sum: u32 = c.iter().map(|&x| x as u32).sum();
                            if sum % p as u32 != 0 || c.contains(&0) {
                                failures += 1;
                            }
                        }
                        Err(_) => failures += 1,
                    }
                }
            }
        }
        Ok(Outcome::check(failures.to_string(), "0", failures == 0).with_note(format!("{triples} triples")))
    });
}

/// The Brauer system `(x, x+y, x+2y, y)` over F_3: its tensor-cube matrix
/// and complexity by three rank routines; the 4-term progression over F_5
/// for the kernel-sum property.
pub fn linear_systems(rec: &mut Recorder) {
    const CUBE: [[u8; 8]; 4] = [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 2, 2, 1, 2, 1, 1, 2],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ];
    let brauer = |p: i64| LinearSystem::new(Fp::new(p)?, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]);
    let four_ap = |p: i64| LinearSystem::new(Fp::new(p)?, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]);
    rec.run("brauer-tensor-cube", "p3", || {
        let rows = brauer(3)?.tensor_power_rows(3);
        let same = rows.iter().zip(CUBE.iter()).all(|(a, b)| a.as_slice() == b.as_slice()) && rows.len() == 4;
        Ok(Outcome::check(format!("{rows:?}"), format!("{CUBE:?}"), same))
    });
    for (name, sys) in [("brauer-p3", brauer(3)), ("brauer-p5", brauer(5)), ("four-ap-p5", four_ap(5))] {
        rec.run("complexity-two", name, || {
            let c = complexity_check(&sys?)?;
            let agree = c.rank == c.rank_incremental && c.rank == c.rank_transposed;
            Ok(Outcome::check(c.rank.to_string(), c.rank_incremental.to_string(), agree && c.at_most_two))
        });
    }
    rec.run("kernel-sum", "four-ap-p5", || {
        let c = kernel_sum_check(&four_ap(5)?)?;
        Ok(Outcome::check(c.kernel_basis.len().to_string(), "", c.pass && !c.vacuous))
    });
}

/// Projection onto level sets is idempotent and keeps fibre sums.
pub fn projection(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, d: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 18, i);
        let q = random_tuple(&mut rng, full(fp, n), d, false);
        let f = random_bounded_function(&mut rng, full(fp, n));
        rec.run("projection", inst(fp, n, i), || {
            let pf = project(&f, &q)?;
            let ppf = project(&pf.function(&q)?, &q)?;
            let idem = max_abs_diff(&pf.values, &ppf.values);
            let codes = q.level_codes()?;
            let mut sums = vec![Complex64::new(0.0, 0.0); 2 * pf.fiber_means.len()];
            for ((&c, &a), &b) in codes.iter().zip(f.values()).zip(&pf.values) {
                sums[2 * c] += a;
                sums[2 * c + 1] += b;
            }
            let fibre = sums.chunks(2).map(|s| (s[0] - s[1]).norm()).fold(0.0, f64::max);
            let err = idem.max(fibre);
            let bound = cfg.tolerances.roundtrip_abs * f.len() as f64;
            Ok(Outcome::check(num(err), num(bound), err <= bound))
        });
    }
}

/// Configuration counts of `f` against its projection, with the trivial
/// bound asserted and the U³ ratio reported alongside.
pub fn von_neumann(rec: &mut Recorder, cfg: &RunConfig, fp: Fp, n: usize, d: usize, count: usize) {
    for i in 0..count {
        let mut rng = rng_for(cfg, 19, i);
        let q = random_tuple(&mut rng, full(fp, n), d, false);
        let f = random_bounded_function(&mut rng, full(fp, n));
        let c: Vec<u8> = (0..3).map(|_| rng.gen_range(1..fp.p())).collect();
        rec.run("von-neumann", inst(fp, n, i), || {
            let r = check_von_neumann(&f, &q, c[0], c[1], c[2])?;
            Ok(Outcome::check(num(r.difference), "1", r.pass).with_ratio(r.ratio))
        });
    }
}

// ---------------------------------------------------------------- driver

fn run_one(name: &str, cfg: &RunConfig, timed: bool) -> Vec<ReportRecord> {
    let fp = cfg.fp();
    let (n, d, k) = (cfg.n, cfg.d, cfg.instances);
    let rank = cfg.min_rank();
    let mut rec = Recorder::new(name, timed);
    let r = &mut rec;
    match name {
        "fourier" => fourier_identities(r, cfg, fp, n, k),
        "u2u3" => {
            spectral_estimate(r, cfg, fp, n, rank, k);
            u2_inverse(r, cfg, fp, n, rank, k);
            restriction_reports(r, cfg, fp, n, rank, k);
            u3_identities(r, cfg, fp, n, k);
        }
        "levelsets" => {
            weyl_exhaustive(r, cfg, fp, n);
            weyl_random(r, cfg, fp, n, k);
            gauss_sum(r, cfg);
            differenced_sets(r, cfg, fp, n, d, rank, 2, k);
            coset_uniformity(r, cfg, fp, n, d, rank, k);
            let pinned = pinned_tuple();
            differenced_exhaustive(r, cfg, &pinned, "pinned");
            censuses(r, cfg, &pinned, "pinned", CENSUS_SAMPLES);
        }
        "brauer" => {
            brauer_counting(r, cfg, fp, n.min(3), d, k);
            lower_bound_colorings(r, n.min(4));
            monochrome_witness(r, n.min(4));
            u3_control(r, cfg, fp, n, d, rank, k);
        }
        "increment" => {
            density_preservation(r, cfg, fp, n, k);
            partition(r, cfg, fp, n, rank, k);
            iteration(r, cfg);
        }
        "inverse" => {
            inverse_planted(r, cfg, fp, n, rank, k);
            inverse_random(r, cfg, fp, n, rank, k);
        }
        "appendix" => {
            solution_counts(r, cfg, &[(fp, n)], k);
            ci_exhaustive(r, 5);
            ci_exhaustive(r, 7);
            linear_systems(r);
            projection(r, cfg, fp, n, d, k);
            von_neumann(r, cfg, fp, n, d, k);
        }
        _ => unreachable!("suite names are checked by run_suite"),
    }
    rec.finish()
}

/// Runs one suite, or every suite for `all`, on `cfg.threads` workers.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<ReportRecord>> {
    cfg.validate()?;
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Error::UnknownSuite(s.to_string()).into()),
    };
    let timed = !cfg.deterministic;
    Ok(par::with_threads(cfg.threads, || {
        names.iter().flat_map(|s| run_one(s, cfg, timed)).collect()
    }))
}
