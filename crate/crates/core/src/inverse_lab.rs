//! Brute-force check of the relative U³ inverse statement on small spaces:
//! either `f` correlates with a quadratic phase, or some combination of `Q`
//! has low rank.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};
use crate::gf::{FpMatrix, Grid, LinearForm};
use crate::harmonic::{dft, roots_of_unity, u3_norm, DenseFunction, U3_BUDGET};
use crate::par;
use crate::quadsets::{tuple_rank, zero_set, QuadTuple, QuadraticPoly};
use crate::random::rng_from_seed;
use crate::tolerance::CHAR_SUM_ABS;

/// Default cap on `p^{k(k+1)/2 + k}` quadratic polynomials searched.
pub const WITNESS_BUDGET: u128 = 1 << 21;

/// `‖f‖_{U³} / ‖1_{Q⁻¹(0)}‖_{U³}` for `f` supported on `Q⁻¹(0)`.
pub fn u3_relative_ratio(f: &DenseFunction, q: &QuadTuple) -> Result<f64> {
    if f.domain() != q.domain() {
        return Err(Error::NotInDomain);
    }
    let z = zero_set(q)?;
    if z.is_empty() {
        return Err(Error::EmptyLevelSet);
    }
    f.check_support(&z)?;
    let base = u3_norm(&z.indicator(), U3_BUDGET)?;
    Ok(u3_norm(f, U3_BUDGET)? / base)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseOptions {
    pub mode: SearchMode,
    pub budget: u128,
    /// A witness counts when its correlation is at least this fraction of `|Q⁻¹(0)|`.
    pub witness_fraction: f64,
    /// Largest rank reported as a low-rank certificate.
    pub rank_cutoff: usize,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions {
            mode: SearchMode::Exhaustive,
            budget: WITNESS_BUDGET,
            witness_fraction: 0.5,
            rank_cutoff: 0,
        }
    }
}

/// `q(x) = xᵀBx + Lx` on the domain coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticWitness {
    pub b: Vec<Vec<u8>>,
    pub l: Vec<u8>,
    /// `|Σ_x f(x) e_p(q(x))|`.
    pub correlation: f64,
}

impl QuadraticWitness {
    pub fn poly(&self) -> Result<QuadraticPoly> {
        let b = FpMatrix::from_rows(&self.b)?;
        Ok(QuadraticPoly {
            b,
            l: LinearForm::new(self.l.clone()),
            c: 0,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowRankCertificate {
    pub lambda: Vec<u8>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum InverseBranch {
    QuadraticWitness(QuadraticWitness),
    LowRankCertificate(LowRankCertificate),
    NoWitnessFound { best_correlation: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseVerdict {
    pub eta: f64,
    pub level_set_size: usize,
    pub best: QuadraticWitness,
    pub low_rank: Option<LowRankCertificate>,
    pub branch: InverseBranch,
    pub sampled: bool,
}

/// `λ` and the rank of `Σ λ_i b_i` when that rank is at most `cutoff`.
pub fn low_rank_certificate(q: &QuadTuple, cutoff: usize) -> Result<Option<LowRankCertificate>> {
    let cert = tuple_rank(q)?;
    Ok(match (cert.rank, cert.minimizing_lambda) {
        (Some(rank), Some(lambda)) if rank <= cutoff => Some(LowRankCertificate { lambda, rank }),
        _ => None,
    })
}

/// `|Σ_x f(x) e_p(q(x))|` by direct summation.
pub fn correlation(f: &DenseFunction, q: &QuadraticPoly) -> f64 {
    let fp = f.domain().fp();
    let roots = roots_of_unity(fp);
    let grid = f.grid();
    let terms: Vec<Complex64> = (0..grid.size())
        .map(|i| f.values()[i] * roots[q.eval(fp, grid.digits(i)) as usize])
        .collect();
    par::tree_sum(&terms).norm()
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

/// Maximises `|Σ f(x) e_p(xᵀBx + Lx)|` over homogeneous parts `B` and linear
/// parts `L`; the constant term only rotates the sum. For each `B` the best
/// `L` comes from one Fourier transform of `f·e_p(xᵀBx)`.
pub fn quadratic_witness_search(f: &DenseFunction, q: &QuadTuple, opts: &InverseOptions) -> Result<InverseVerdict> {
    let eta = u3_relative_ratio(f, q)?;
    let fp = q.fp();
    let k = q.k();
    let tri = k * (k + 1) / 2;
    let forms = Grid::new(fp, tri);
    let candidates: Vec<usize> = match opts.mode {
        SearchMode::Exhaustive => {
            budget_check("quadratic witness search", fp.power_count(tri + k), opts.budget)?;
            (0..forms.size()).collect()
        }
        SearchMode::Sampled { samples, seed } => {
            let mut rng = rng_from_seed(seed, 2);
            let mut v = vec![0];
            v.extend((1..samples.max(1)).map(|_| rng.gen_range(0..forms.size())));
            v
        }
    };
    let roots = roots_of_unity(fp);
    let grid = f.grid();
    let per_form = par::map_slice(&candidates, |&c| -> Result<(f64, usize)> {
        let b = symmetric_from_upper(k, forms.digits(c));
        let values = (0..grid.size())
            .map(|i| {
                let x = grid.digits(i);
                f.values()[i] * roots[b.bilinear(fp, x, x) as usize]
            })
            .collect();
        let g = DenseFunction::new(f.domain().clone(), values)?;
        let mags: Vec<f64> = dft(&g)?.values().iter().map(|v| v.norm()).collect();
        let j = par::argmax_first(&mags, CHAR_SUM_ABS).expect("nonempty dual");
        Ok((mags[j], j))
    });
    let per_form = per_form.into_iter().collect::<Result<Vec<_>>>()?;
    let mags: Vec<f64> = per_form.iter().map(|r| r.0).collect();
    let ci = par::argmax_first(&mags, CHAR_SUM_ABS).expect("at least one form");
    let b = symmetric_from_upper(k, forms.digits(candidates[ci]));
    let best = QuadraticWitness {
        b: b.to_rows(),
        l: grid.coords(per_form[ci].1),
        correlation: per_form[ci].0,
    };
    let direct = correlation(f, &best.poly()?);
    if (direct - best.correlation).abs() > CHAR_SUM_ABS * (1.0 + direct) {
        return Err(Error::InvariantViolation(format!(
            "witness correlation {} disagrees with direct sum {direct}",
            best.correlation
        )));
    }
    let level_set_size = zero_set(q)?.len();
    let low_rank = low_rank_certificate(q, opts.rank_cutoff)?;
    let branch = if best.correlation >= opts.witness_fraction * level_set_size as f64 - CHAR_SUM_ABS {
        InverseBranch::QuadraticWitness(best.clone())
    } else if let Some(c) = &low_rank {
        InverseBranch::LowRankCertificate(c.clone())
    } else {
        InverseBranch::NoWitnessFound {
            best_correlation: best.correlation,
        }
    };
    Ok(InverseVerdict {
        eta,
        level_set_size,
        best,
        low_rank,
        branch,
        sampled: matches!(opts.mode, SearchMode::Sampled { .. }),
    })
}

/// `e_p(q(x))·1_{Q⁻¹(0)}(x)`.
pub fn planted_phase(q: &QuadTuple, phase: &QuadraticPoly) -> Result<DenseFunction> {
    let z = zero_set(q)?;
    let fp = q.fp();
    let roots = roots_of_unity(fp);
    let grid = Grid::new(fp, q.k());
    let values = (0..grid.size())
        .map(|i| {
            if z.contains_index(i) {
                roots[phase.eval(fp, grid.digits(i)) as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    DenseFunction::new(q.domain().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Fp, Subspace};
    use crate::random::{random_poly, random_signs_on, random_tuple, random_tuple_with_min_rank};

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn ratio_examples() {
        let mut rng = rng_from_seed(1, 0);
        let q = random_tuple(&mut rng, Subspace::full(f3(), 3), 1, true);
        let ind = zero_set(&q).unwrap().indicator();
        assert!((u3_relative_ratio(&ind, &q).unwrap() - 1.0).abs() < 1e-9);
        let zero = DenseFunction::zero(q.domain().clone());
        assert_eq!(u3_relative_ratio(&zero, &q).unwrap(), 0.0);
        let phase = random_poly(&mut rng, f3(), 3, false);
        let f = planted_phase(&q, &phase).unwrap();
        assert!((u3_relative_ratio(&f, &q).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn indicator_gives_zero_witness() {
        let mut rng = rng_from_seed(2, 0);
        let q = random_tuple_with_min_rank(&mut rng, Subspace::full(f3(), 3), 1, 3, true, 100).unwrap();
        let ind = zero_set(&q).unwrap().indicator();
        let v = quadratic_witness_search(&ind, &q, &InverseOptions::default()).unwrap();
        let size = zero_set(&q).unwrap().len() as f64;
        assert!((v.best.correlation - size).abs() < 1e-9);
        assert!(v.best.b.iter().flatten().all(|&x| x == 0) && v.best.l.iter().all(|&x| x == 0));
        assert!(matches!(v.branch, InverseBranch::QuadraticWitness(_)));
    }

    #[test]
    fn planted_witness_is_recovered() {
        let fp = f3();
        for s in 0..5 {
            let mut rng = rng_from_seed(3, s);
            let q = random_tuple_with_min_rank(&mut rng, Subspace::full(fp, 3), 1, 3, true, 100).unwrap();
            let planted = random_poly(&mut rng, fp, 3, false);
            let f = planted_phase(&q, &planted).unwrap();
            let v = quadratic_witness_search(&f, &q, &InverseOptions::default()).unwrap();
            let size = zero_set(&q).unwrap().len() as f64;
            assert!((v.best.correlation - size).abs() < 1e-9);
            // the witness undoes the planted phase on the level set
            let w = v.best.poly().unwrap();
            let z = zero_set(&q).unwrap();
            let grid = Grid::new(fp, 3);
            let shifts: Vec<u8> = z
                .indices()
                .iter()
                .map(|&i| fp.add(w.eval(fp, grid.digits(i)), planted.eval(fp, grid.digits(i))))
                .collect();
            assert!(shifts.iter().all(|&c| c == shifts[0]));
        }
    }

    #[test]
    fn correlation_is_invariant_under_adding_q() {
        let fp = f3();
        let mut rng = rng_from_seed(4, 0);
        let q = random_tuple(&mut rng, Subspace::full(fp, 3), 2, true);
        let z = zero_set(&q).unwrap();
        let f = random_signs_on(&mut rng, &z);
        let phase = random_poly(&mut rng, fp, 3, false);
        for mu in [[1u8, 0], [2, 1], [0, 2]] {
            let shifted = phase.add(fp, &q.combine(&mu));
            assert!((correlation(&f, &phase) - correlation(&f, &shifted)).abs() < 1e-9);
        }
    }

    #[test]
    fn low_rank_examples() {
        let fp = f3();
        let mut rng = rng_from_seed(5, 0);
        let q1 = random_poly(&mut rng, fp, 3, true);
        let pair = QuadTuple::new(Subspace::full(fp, 3), vec![q1.clone(), q1.scale(fp, 2)]).unwrap();
        let c = low_rank_certificate(&pair, 0).unwrap().unwrap();
        assert_eq!(c.rank, 0);
        let single = QuadTuple::new(Subspace::full(fp, 3), vec![QuadraticPoly::homogeneous(FpMatrix::identity(3))]).unwrap();
        assert!(low_rank_certificate(&single, 2).unwrap().is_none());
    }

    #[test]
    fn random_signs_find_no_witness() {
        let fp = f3();
        let mut rng = rng_from_seed(0, 0);
        let q = random_tuple_with_min_rank(&mut rng, Subspace::full(fp, 3), 1, 3, true, 100).unwrap();
        let f = random_signs_on(&mut rng, &zero_set(&q).unwrap());
        let v = quadratic_witness_search(&f, &q, &InverseOptions::default()).unwrap();
        assert!(v.eta < 1.0);
        assert!(v.best.correlation <= v.level_set_size as f64);
    }
}
