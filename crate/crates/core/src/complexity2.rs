//! Translation-invariant linear systems, their complexity, projection onto
//! quadratic level sets, and counting four-point configurations
//! `x, x+c₁y, x+c₂y, x+c₃y`.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};
use crate::gf::{rank_incremental, Fp, FpMatrix};
use crate::harmonic::{dft, u3_norm, DenseFunction, PointSet, U3_BUDGET};
use crate::par;
use crate::quadsets::QuadTuple;
use crate::tolerance::CHAR_SUM_ABS;

/// Default cap on the `p^{3n}` brute-force solution loop.
pub const SOLUTION_BUDGET: u128 = 1 << 24;

/// Default cap on `|H|²` pairs in [`config_count`].
pub const PAIR_BUDGET: u128 = 1 << 26;

/// Rows `φ_1, …, φ_k ∈ F_p^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub fp: Fp,
    pub rows: Vec<Vec<u8>>,
}

impl LinearSystem {
    pub fn new(fp: Fp, rows: Vec<Vec<u8>>) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || d == 0 {
            return Err(Error::BadParams("a system needs k ≥ 1 rows of length d ≥ 1".into()));
        }
        for r in &rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: r.len() });
            }
            for &v in r {
                fp.check(v as i64)?;
            }
        }
        Ok(LinearSystem { fp, rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.rows[0].len()
    }

    /// Rows `φ_i^{⊗m}`, entries indexed lexicographically.
    pub fn tensor_power_rows(&self, m: u32) -> Vec<Vec<u8>> {
        let fp = self.fp;
        self.rows
            .iter()
            .map(|r| {
                let mut acc = vec![1u8];
                for _ in 0..m {
                    acc = acc.iter().flat_map(|&a| r.iter().map(move |&b| fp.mul(a, b))).collect();
                }
                acc
            })
            .collect()
    }
}

/// Whether `(1, …, 1)` lies in the row space of `Φ = [φ_1 … φ_k]`, i.e. some
/// `λ ∈ F_p^d` has `λ·φ_i = 1` for every `i`.
pub fn is_translation_invariant(s: &LinearSystem) -> bool {
    let m = FpMatrix::from_rows(&s.rows).expect("rows have equal length");
    m.solve(s.fp, &vec![1; s.k()]).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityCheck {
    pub rank: usize,
    pub rank_incremental: usize,
    pub rank_transposed: usize,
    pub at_most_two: bool,
}

/// Whether the tensor cubes `φ_i^{⊗3}` are linearly independent, with the
/// rank computed by three independent routes.
pub fn complexity_check(s: &LinearSystem) -> Result<ComplexityCheck> {
    let cube = s.d().pow(3);
    if s.k() > cube {
        return Err(Error::TooManyRows { rows: s.k(), max: cube });
    }
    let rows = s.tensor_power_rows(3);
    let m = FpMatrix::from_rows(&rows)?;
    let r1 = m.rank(s.fp);
    let r2 = rank_incremental(s.fp, &rows);
    let r3 = m.transpose().rank(s.fp);
    if r1 != r2 || r1 != r3 {
        return Err(Error::InvariantViolation(format!(
            "tensor-cube rank disagrees between routines: {r1}, {r2}, {r3}"
        )));
    }
    Ok(ComplexityCheck {
        rank: r1,
        rank_incremental: r2,
        rank_transposed: r3,
        at_most_two: r1 == s.k(),
    })
}

pub fn complexity_at_most_two(s: &LinearSystem) -> Result<bool> {
    Ok(complexity_check(s)?.at_most_two)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSumCheck {
    pub kernel_basis: Vec<Vec<u8>>,
    pub sums: Vec<u8>,
    pub vacuous: bool,
    pub pass: bool,
}

/// Every `μ` with `Σ μ_i φ_i^{⊗2} = 0` has `Σ μ_i = 0`.
pub fn kernel_sum_check(s: &LinearSystem) -> Result<KernelSumCheck> {
    if !is_translation_invariant(s) {
        return Err(Error::PreconditionUnmet("the system is not translation-invariant".into()));
    }
    let fp = s.fp;
    let sq = FpMatrix::from_rows(&s.tensor_power_rows(2))?;
    // μᵀ M = 0  <=>  Mᵀ μ = 0
    let kernel_basis = sq.transpose().nullspace(fp);
    let sums: Vec<u8> = kernel_basis
        .iter()
        .map(|mu| mu.iter().fold(0u8, |a, &b| fp.add(a, b)))
        .collect();
    Ok(KernelSumCheck {
        vacuous: kernel_basis.is_empty(),
        pass: sums.iter().all(|&x| x == 0),
        kernel_basis,
        sums,
    })
}

/// `Π_Q f`: the mean of `f` on each fibre `Q⁻¹(a)`, spread back over the fibre.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectedFunction {
    /// `f_Q(a)` indexed by `a ∈ F_p^d` in lexicographic order; 0 on empty fibres.
    pub fiber_means: Vec<Complex64>,
    pub fiber_sizes: Vec<u64>,
    /// Values of `Π_Q f` on the domain in enumeration order.
    pub values: Vec<Complex64>,
}

impl ProjectedFunction {
    pub fn function(&self, q: &QuadTuple) -> Result<DenseFunction> {
        DenseFunction::new(q.domain().clone(), self.values.clone())
    }
}

pub fn project(f: &DenseFunction, q: &QuadTuple) -> Result<ProjectedFunction> {
    if f.domain() != q.domain() {
        return Err(Error::NotInDomain);
    }
    let codes = q.level_codes()?;
    let cells = q.fp().power_count(q.d()) as usize;
    let mut sums = vec![Complex64::new(0.0, 0.0); cells];
    let mut sizes = vec![0u64; cells];
    for (&c, &v) in codes.iter().zip(f.values()) {
        sums[c] += v;
        sizes[c] += 1;
    }
    let fiber_means: Vec<Complex64> = sums
        .iter()
        .zip(&sizes)
        .map(|(&s, &n)| if n == 0 { Complex64::new(0.0, 0.0) } else { s / n as f64 })
        .collect();
    let values = codes.iter().map(|&c| fiber_means[c]).collect();
    Ok(ProjectedFunction {
        fiber_means,
        fiber_sizes: sizes,
        values,
    })
}

/// Exact fibre densities `|B ∩ Q⁻¹(a)| / |Q⁻¹(a)|` of a set (0 on empty fibres).
pub fn project_indicator(b: &PointSet, q: &QuadTuple) -> Result<Vec<Rational64>> {
    if b.domain() != q.domain() {
        return Err(Error::NotInDomain);
    }
    let codes = q.level_codes()?;
    let cells = q.fp().power_count(q.d()) as usize;
    let mut hits = vec![0i64; cells];
    let mut sizes = vec![0i64; cells];
    for (i, &c) in codes.iter().enumerate() {
        sizes[c] += 1;
        if b.contains_index(i) {
            hits[c] += 1;
        }
    }
    Ok(hits
        .iter()
        .zip(&sizes)
        .map(|(&h, &n)| if n == 0 { Rational64::from_integer(0) } else { Rational64::new(h, n) })
        .collect())
}

/// `(C₀, C₁, C₂, C₃)` with `C₀ = 1`, `C₁ = −c₂c₃/((c₁−c₂)(c₁−c₃))`,
/// `C₂ = c₁c₃/((c₁−c₂)(c₂−c₃))`, `C₃ = −c₁c₂/((c₁−c₃)(c₂−c₃))`.
pub fn ci_coefficients(fp: Fp, c1: u8, c2: u8, c3: u8) -> Result<[u8; 4]> {
    for c in [c1, c2, c3] {
        fp.check(c as i64)?;
    }
    if c1 == 0 || c2 == 0 || c3 == 0 || c1 == c2 || c1 == c3 || c2 == c3 {
        return Err(Error::DegenerateCoefficients(format!(
            "({c1}, {c2}, {c3}) must be distinct and nonzero"
        )));
    }
    let frac = |num: u8, den: u8| -> Result<u8> { Ok(fp.mul(num, fp.inv(den)?)) };
    let c = [
        1,
        fp.neg(frac(fp.mul(c2, c3), fp.mul(fp.sub(c1, c2), fp.sub(c1, c3)))?),
        frac(fp.mul(c1, c3), fp.mul(fp.sub(c1, c2), fp.sub(c2, c3)))?,
        fp.neg(frac(fp.mul(c1, c2), fp.mul(fp.sub(c1, c3), fp.sub(c2, c3)))?),
    ];
    let sum = c.iter().fold(0u8, |a, &b| fp.add(a, b));
    if sum != 0 || c.contains(&0) {
        return Err(Error::InvariantViolation(format!("coefficients {c:?} sum to {sum}")));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionCount {
    pub fourier: f64,
    pub brute: Option<f64>,
    pub rel_err: Option<f64>,
}

fn check_weights(f: &DenseFunction, c: &[u8; 4]) -> Result<Fp> {
    let fp = f.domain().fp();
    if f.domain().is_coset() {
        return Err(Error::PreconditionUnmet("weights must live on a linear subspace".into()));
    }
    let sum = c.iter().fold(0u8, |a, &b| fp.add(a, b % fp.p()));
    if sum != 0 {
        return Err(Error::CoefficientSumNonzero(sum));
    }
    if c.iter().any(|&x| x % fp.p() == 0) {
        return Err(Error::DegenerateCoefficients("coefficients must be nonzero".into()));
    }
    Ok(fp)
}

/// `Σ_{C₀x₀+C₁x₁+C₂x₂+C₃x₃=0} ∏ f(x_i)` as `E_ℓ ∏ f̂(C_iℓ)`.
pub fn weighted_solution_count_fourier(f: &DenseFunction, c: &[u8; 4]) -> Result<f64> {
    check_weights(f, c)?;
    let fh = dft(f)?;
    let grid = f.grid();
    let terms: Vec<Complex64> = (0..grid.size())
        .map(|l| c.iter().map(|&ci| fh.values()[grid.scale(ci, l)]).product())
        .collect();
    let total = par::tree_sum(&terms) / grid.size() as f64;
    if total.im.abs() > CHAR_SUM_ABS * (1.0 + total.norm()) && f.values().iter().all(|v| v.im == 0.0) {
        return Err(Error::InvariantViolation(format!(
            "solution count has imaginary part {}",
            total.im
        )));
    }
    Ok(total.re)
}

/// The same count by looping over `x₀, x₁, x₂` and solving for `x₃`.
pub fn weighted_solution_count_brute(f: &DenseFunction, c: &[u8; 4], budget: u128) -> Result<f64> {
    let fp = check_weights(f, c)?;
    budget_check("solution loop", f.domain().size().pow(3), budget)?;
    let grid = f.grid();
    let n = grid.size();
    let neg_inv = fp.neg(fp.inv(c[3])?);
    let v = f.values();
    let per_x0 = par::map_range(n, |x0| {
        let mut acc = Complex64::new(0.0, 0.0);
        let a0 = grid.scale(c[0], x0);
        for x1 in 0..n {
            let a1 = grid.add(a0, grid.scale(c[1], x1));
            for x2 in 0..n {
                let s = grid.add(a1, grid.scale(c[2], x2));
                let x3 = grid.scale(neg_inv, s);
                acc += v[x0] * v[x1] * v[x2] * v[x3];
            }
        }
        acc
    });
    Ok(par::tree_sum(&per_x0).re)
}

/// Both routes when the brute-force loop fits the budget.
pub fn weighted_solution_count(f: &DenseFunction, c: &[u8; 4], budget: u128) -> Result<SolutionCount> {
    let fourier = weighted_solution_count_fourier(f, c)?;
    let brute = match weighted_solution_count_brute(f, c, budget) {
        Ok(b) => Some(b),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let rel_err = brute.map(|b| (fourier - b).abs() / b.abs().max(1.0));
    Ok(SolutionCount { fourier, brute, rel_err })
}

/// `E_{x,y∈H} f₀(x) f₁(x+c₁y) f₂(x+c₂y) f₃(x+c₃y)`.
pub fn config_count(fs: [&DenseFunction; 4], c1: u8, c2: u8, c3: u8) -> Result<Complex64> {
    let h = fs[0].domain();
    if fs.iter().any(|f| f.domain() != h) {
        return Err(Error::NotInDomain);
    }
    if h.is_coset() {
        return Err(Error::PreconditionUnmet("the domain must be a linear subspace".into()));
    }
    budget_check("configuration pairs", h.size().pow(2), PAIR_BUDGET)?;
    let grid = fs[0].grid();
    let n = grid.size();
    let per_x = par::map_range(n, |x| {
        let terms: Vec<Complex64> = (0..n)
            .map(|y| {
                fs[0].values()[x]
                    * fs[1].values()[grid.add(x, grid.scale(c1, y))]
                    * fs[2].values()[grid.add(x, grid.scale(c2, y))]
                    * fs[3].values()[grid.add(x, grid.scale(c3, y))]
            })
            .collect();
        par::tree_sum(&terms)
    });
    Ok(par::tree_sum(&per_x) / (n as f64 * n as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VonNeumannRecord {
    pub count_full: f64,
    pub count_projected: f64,
    pub difference: f64,
    /// `‖f − Π_Q f‖_{U³} / ‖1_H‖_{U³}`.
    pub u3_ratio: f64,
    /// `difference / u3_ratio`, or 0 when both vanish.
    pub ratio: f64,
    pub pass: bool,
}

/// Compares the configuration count of `f` with that of `Π_Q f` against the
/// U³ distance between them. Only the trivial bound is asserted.
pub fn check_von_neumann(f: &DenseFunction, q: &QuadTuple, c1: u8, c2: u8, c3: u8) -> Result<VonNeumannRecord> {
    let pf = project(f, q)?.function(q)?;
    let full = config_count([f, f, f, f], c1, c2, c3)?;
    let proj = config_count([&pf, &pf, &pf, &pf], c1, c2, c3)?;
    let difference = (full - proj).norm();
    let one = DenseFunction::constant(q.domain().clone(), Complex64::new(1.0, 0.0));
    let u3_ratio = u3_norm(&f.sub(&pf)?, U3_BUDGET)? / u3_norm(&one, U3_BUDGET)?;
    let ratio = if u3_ratio > CHAR_SUM_ABS {
        difference / u3_ratio
    } else if difference <= CHAR_SUM_ABS {
        0.0
    } else {
        f64::INFINITY
    };
    let pass = ratio.is_finite() && difference <= 1.0 + CHAR_SUM_ABS;
    Ok(VonNeumannRecord {
        count_full: full.re,
        count_projected: proj.re,
        difference,
        u3_ratio,
        ratio,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Grid, Subspace};
    use crate::random::{random_subset, random_tuple, rng_from_seed};

    fn fp(p: i64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn four_ap(p: i64) -> LinearSystem {
        LinearSystem::new(fp(p), vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]).unwrap()
    }

    fn brauer_system(p: i64) -> LinearSystem {
        LinearSystem::new(fp(p), vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]).unwrap()
    }

    #[test]
    fn translation_invariance_examples() {
        assert!(is_translation_invariant(&four_ap(5)));
        assert!(!is_translation_invariant(&brauer_system(5)));
        assert!(is_translation_invariant(&LinearSystem::new(fp(3), vec![vec![1]]).unwrap()));
    }

    #[test]
    fn brauer_cubes() {
        let s = brauer_system(3);
        let rows = s.tensor_power_rows(3);
        assert_eq!(rows[0], vec![1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(rows[1], vec![1; 8]);
        assert_eq!(rows[2], vec![1, 2, 2, 1, 2, 1, 1, 2]);
        assert_eq!(rows[3], vec![0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(complexity_at_most_two(&s).unwrap());
        assert!(complexity_at_most_two(&four_ap(5)).unwrap());
        let rep = LinearSystem::new(fp(5), vec![vec![1, 2], vec![1, 2]]).unwrap();
        assert!(!complexity_at_most_two(&rep).unwrap());
        let many = LinearSystem::new(fp(3), vec![vec![1]; 2]).unwrap();
        assert!(matches!(complexity_at_most_two(&many), Err(Error::TooManyRows { .. })));
    }

    #[test]
    fn kernel_sums() {
        let c = kernel_sum_check(&four_ap(5)).unwrap();
        assert!(c.pass && !c.vacuous);
        let doubled = LinearSystem::new(fp(5), vec![vec![1, 0], vec![1, 0], vec![1, 1]]).unwrap();
        let c = kernel_sum_check(&doubled).unwrap();
        assert!(c.pass && !c.vacuous);
        let ind = LinearSystem::new(fp(5), vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert!(kernel_sum_check(&ind).unwrap().vacuous);
        assert!(matches!(kernel_sum_check(&brauer_system(5)), Err(Error::PreconditionUnmet(_))));
    }

    #[test]
    fn coefficients() {
        assert_eq!(ci_coefficients(fp(5), 1, 2, 3).unwrap(), [1, 2, 3, 4]);
        let c = ci_coefficients(fp(7), 1, 2, 4).unwrap();
        assert_eq!(c.iter().map(|&x| x as u32).sum::<u32>() % 7, 0);
        assert!(ci_coefficients(fp(5), 1, 1, 3).is_err());
        assert!(ci_coefficients(fp(5), 0, 1, 3).is_err());
    }

    #[test]
    fn coefficients_solve_the_character_system() {
        // γ_i = C_i γ_0 solves Σγ_i = Σc_iγ_i = Σc_i²γ_i = 0 (c_0 = 0)
        for p in [5i64, 7] {
            let f = fp(p);
            for c1 in 1..p as u8 {
                for c2 in 1..p as u8 {
                    for c3 in 1..p as u8 {
                        let Ok(c) = ci_coefficients(f, c1, c2, c3) else { continue };
                        let cs = [0, c1, c2, c3];
                        for pow in 0..3u32 {
                            let s = (0..4).fold(0u8, |a, i| f.add(a, f.mul(f.pow(cs[i], pow), c[i])));
                            assert_eq!(s, 0, "p={p} c=({c1},{c2},{c3}) power {pow}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn projection_properties() {
        let mut rng = rng_from_seed(1, 0);
        let h = Subspace::full(fp(3), 3);
        let q = random_tuple(&mut rng, h.clone(), 2, true);
        let f = crate::random::random_bounded_function(&mut rng, h.clone());
        let pf = project(&f, &q).unwrap().function(&q).unwrap();
        let ppf = project(&pf, &q).unwrap().function(&q).unwrap();
        for (a, b) in pf.values().iter().zip(ppf.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let codes = q.level_codes().unwrap();
        for cell in 0..9 {
            let s1: Complex64 = codes.iter().zip(f.values()).filter(|(&c, _)| c == cell).map(|(_, v)| v).sum();
            let s2: Complex64 = codes.iter().zip(pf.values()).filter(|(&c, _)| c == cell).map(|(_, v)| v).sum();
            assert!((s1 - s2).norm() < 1e-9);
        }
        let c = DenseFunction::constant(h.clone(), Complex64::new(0.3, 0.0));
        let pc = project(&c, &q).unwrap().function(&q).unwrap();
        assert!(pc.values().iter().all(|v| (v - Complex64::new(0.3, 0.0)).norm() < 1e-12));
        let empty = QuadTuple::empty(h.clone());
        let mean: Complex64 = f.values().iter().sum::<Complex64>() / 27.0;
        assert!(project(&f, &empty).unwrap().values.iter().all(|v| (v - mean).norm() < 1e-12));
        let b = random_subset(&mut rng, h, 0.5);
        let exact = project_indicator(&b, &q).unwrap();
        let approx = project(&b.indicator(), &q).unwrap();
        for (e, a) in exact.iter().zip(&approx.fiber_means) {
            assert!((*e.numer() as f64 / *e.denom() as f64 - a.re).abs() < 1e-12);
        }
    }

    #[test]
    fn solution_counts() {
        let f5 = fp(5);
        let h = Subspace::full(f5, 1);
        let c = [1, 2, 3, 4];
        let one = DenseFunction::constant(h.clone(), Complex64::new(1.0, 0.0));
        let r = weighted_solution_count(&one, &c, SOLUTION_BUDGET).unwrap();
        assert!((r.fourier - 125.0).abs() < 1e-9);
        assert_eq!(r.brute, Some(125.0));
        let delta = DenseFunction::from_real(h.clone(), &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((weighted_solution_count_fourier(&delta, &c).unwrap() - 1.0).abs() < 1e-9);
        let mut rng = rng_from_seed(2, 0);
        for n in 1..=2 {
            let a = random_subset(&mut rng, Subspace::full(f5, n), 0.5);
            let r = weighted_solution_count(&a.indicator(), &c, SOLUTION_BUDGET).unwrap();
            assert!(r.rel_err.unwrap() < 1e-6);
        }
        assert!(matches!(
            weighted_solution_count_fourier(&one, &[1, 1, 1, 1]),
            Err(Error::CoefficientSumNonzero(4))
        ));
    }

    #[test]
    fn config_counts() {
        let f5 = fp(5);
        let h = Subspace::full(f5, 2);
        let one = DenseFunction::constant(h.clone(), Complex64::new(1.0, 0.0));
        assert!((config_count([&one; 4], 1, 2, 3).unwrap().re - 1.0).abs() < 1e-12);
        let mut d = vec![0.0; 25];
        d[0] = 1.0;
        let delta = DenseFunction::from_real(h.clone(), &d).unwrap();
        assert!((config_count([&delta; 4], 1, 2, 3).unwrap().re - 1.0 / 625.0).abs() < 1e-15);
        let mut rng = rng_from_seed(3, 0);
        let sets: Vec<_> = (0..4).map(|_| random_subset(&mut rng, h.clone(), 0.5)).collect();
        let fs: Vec<DenseFunction> = sets.iter().map(|s| s.indicator()).collect();
        let got = config_count([&fs[0], &fs[1], &fs[2], &fs[3]], 1, 2, 3).unwrap().re;
        let pts = h.enumerate_points(100).unwrap();
        let grid = Grid::new(f5, 2);
        let mut hits = 0;
        for x in &pts {
            for y in &pts {
                let at = |c: u8| grid.index(&x.add(f5, &y.scale(f5, c)).coords);
                if sets[0].contains_index(at(0)) && sets[1].contains_index(at(1)) && sets[2].contains_index(at(2)) && sets[3].contains_index(at(3)) {
                    hits += 1;
                }
            }
        }
        assert!((got - hits as f64 / 625.0).abs() < 1e-12);
    }

    #[test]
    fn von_neumann_trivial_cases() {
        let mut rng = rng_from_seed(4, 0);
        let h = Subspace::full(fp(5), 2);
        let q = random_tuple(&mut rng, h.clone(), 1, true);
        let one = DenseFunction::constant(h.clone(), Complex64::new(1.0, 0.0));
        let r = check_von_neumann(&one, &q, 1, 2, 3).unwrap();
        assert!(r.pass && r.difference < 1e-12 && r.ratio == 0.0);
        let b = random_subset(&mut rng, h, 0.5).indicator();
        let pb = project(&b, &q).unwrap().function(&q).unwrap();
        let r = check_von_neumann(&pb, &q, 1, 2, 3).unwrap();
        assert!(r.pass && r.difference < 1e-12);
        assert!(check_von_neumann(&b, &q, 1, 2, 3).unwrap().pass);
    }
}
