//! Fourier analysis on a subspace H of F_p^n.
//!
//! Functions on H are stored densely, indexed by H's point enumeration order.
//! Linear forms on H are indexed the same way through their coefficients on
//! H's basis, so `f̂(ℓ) = Σ_c f(t + Σ c_i b_i) e_p(ℓ·c)`. For a linear domain
//! (no offset) this is the usual transform `Σ_x f(x) e_p(ℓx)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};
use crate::gf::{Fp, FpVector, Grid, LinearForm, Subspace};
use crate::par;

/// Default cap on |H| for the U³ norm.
pub const U3_BUDGET: u128 = 6561;

/// Default cap on |H| for a transform.
pub const DFT_BUDGET: u128 = 1 << 22;

/// Above this size a single transform runs its passes in parallel.
const PARALLEL_DFT_MIN: usize = 2048;

/// `e_p(v) = exp(2πi v / p)` for v in 0..p.
pub fn roots_of_unity(fp: Fp) -> Vec<Complex64> {
    let p = fp.p() as f64;
    (0..fp.p())
        .map(|v| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * v as f64 / p))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseFunction {
    domain: Subspace,
    values: Vec<Complex64>,
}

impl DenseFunction {
    pub fn new(domain: Subspace, values: Vec<Complex64>) -> Result<Self> {
        let size = domain.size();
        if values.len() as u128 != size {
            return Err(Error::DimensionMismatch {
                expected: size as usize,
                got: values.len(),
            });
        }
        Ok(DenseFunction { domain, values })
    }

    pub fn zero(domain: Subspace) -> Self {
        let n = domain.size() as usize;
        DenseFunction {
            domain,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(domain: Subspace, c: Complex64) -> Self {
        let n = domain.size() as usize;
        DenseFunction {
            domain,
            values: vec![c; n],
        }
    }

    pub fn from_real(domain: Subspace, values: &[f64]) -> Result<Self> {
        DenseFunction::new(
            domain,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Builds `x -> g(x)` from the points of the domain in enumeration order.
    pub fn from_fn(domain: Subspace, g: impl Fn(&FpVector) -> Complex64) -> Self {
        let grid = Grid::new(domain.fp(), domain.dim());
        let values = (0..grid.size())
            .map(|i| g(&domain.point(grid.digits(i))))
            .collect();
        DenseFunction { domain, values }
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.domain.fp(), self.domain.dim())
    }

    pub fn at(&self, x: &FpVector) -> Result<Complex64> {
        let c = self.domain.coords_of(x).ok_or(Error::NotInDomain)?;
        Ok(self.values[self.grid().index(&c)])
    }

    /// Sum of |f|², the square of the unnormalized L² norm.
    pub fn l2_squared(&self) -> f64 {
        par::tree_sum(&self.values.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>())
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_squared().sqrt()
    }

    pub fn is_bounded(&self) -> bool {
        self.values.iter().all(|v| v.norm() <= 1.0 + 1e-12)
    }

    /// True when every value is exactly 0 or 1.
    pub fn is_indicator(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.im == 0.0 && (v.re == 0.0 || v.re == 1.0))
    }

    pub fn support_mask(&self) -> Vec<bool> {
        self.values.iter().map(|v| *v != Complex64::new(0.0, 0.0)).collect()
    }

    /// Fails unless `f` vanishes off `set`.
    pub fn check_support(&self, set: &PointSet) -> Result<()> {
        if set.domain() != &self.domain {
            return Err(Error::SupportViolation(
                "function and set live on different domains".into(),
            ));
        }
        match self
            .values
            .iter()
            .zip(set.mask())
            .position(|(v, &m)| !m && *v != Complex64::new(0.0, 0.0))
        {
            None => Ok(()),
            Some(i) => Err(Error::SupportViolation(format!(
                "value at {:?} is nonzero outside the declared set",
                self.domain.point(self.grid().digits(i)).coords
            ))),
        }
    }

    pub fn map(&self, g: impl Fn(Complex64) -> Complex64) -> DenseFunction {
        DenseFunction {
            domain: self.domain.clone(),
            values: self.values.iter().map(|&v| g(v)).collect(),
        }
    }

    pub fn mul(&self, other: &DenseFunction) -> Result<DenseFunction> {
        if other.domain != self.domain {
            return Err(Error::NotInDomain);
        }
        Ok(DenseFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseFunction) -> Result<DenseFunction> {
        if other.domain != self.domain {
            return Err(Error::NotInDomain);
        }
        Ok(DenseFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `f(x) e_p(ℓ·x)` with `ℓ` given by its coefficients on the domain basis.
    pub fn modulate(&self, coeffs: &[u8]) -> DenseFunction {
        let grid = self.grid();
        let roots = roots_of_unity(self.domain.fp());
        let fp = self.domain.fp();
        DenseFunction {
            domain: self.domain.clone(),
            values: (0..grid.size())
                .map(|i| self.values[i] * roots[fp.dot(coeffs, grid.digits(i)) as usize])
                .collect(),
        }
    }
}

/// A subset of a domain H, stored as a membership mask in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    domain: Subspace,
    mask: Vec<bool>,
    count: usize,
}

impl PointSet {
    pub fn from_mask(domain: Subspace, mask: Vec<bool>) -> Result<Self> {
        if mask.len() as u128 != domain.size() {
            return Err(Error::DimensionMismatch {
                expected: domain.size() as usize,
                got: mask.len(),
            });
        }
        let count = mask.iter().filter(|&&m| m).count();
        Ok(PointSet {
            domain,
            mask,
            count,
        })
    }

    pub fn from_points(domain: Subspace, points: &[FpVector]) -> Result<Self> {
        let grid = Grid::new(domain.fp(), domain.dim());
        let mut mask = vec![false; grid.size()];
        for x in points {
            let c = domain.coords_of(x).ok_or(Error::NotInDomain)?;
            mask[grid.index(&c)] = true;
        }
        PointSet::from_mask(domain, mask)
    }

    pub fn empty(domain: Subspace) -> Self {
        let n = domain.size() as usize;
        PointSet {
            domain,
            mask: vec![false; n],
            count: 0,
        }
    }

    pub fn full(domain: Subspace) -> Self {
        let n = domain.size() as usize;
        PointSet {
            domain,
            mask: vec![true; n],
            count: n,
        }
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&i| self.mask[i]).collect()
    }

    pub fn points(&self) -> Vec<FpVector> {
        let grid = Grid::new(self.domain.fp(), self.domain.dim());
        self.indices()
            .into_iter()
            .map(|i| self.domain.point(grid.digits(i)))
            .collect()
    }

    pub fn indicator(&self) -> DenseFunction {
        DenseFunction {
            domain: self.domain.clone(),
            values: self
                .mask
                .iter()
                .map(|&m| Complex64::new(if m { 1.0 } else { 0.0 }, 0.0))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &PointSet) -> Result<PointSet> {
        if other.domain != self.domain {
            return Err(Error::NotInDomain);
        }
        PointSet::from_mask(
            self.domain.clone(),
            self.mask.iter().zip(&other.mask).map(|(&a, &b)| a && b).collect(),
        )
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.domain == other.domain && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }
}

/// Values of f̂ indexed by linear forms on H in enumeration order of their
/// basis coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFunction {
    domain: Subspace,
    values: Vec<Complex64>,
}

impl DualFunction {
    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Coefficients of the `j`-th form on the domain basis.
    pub fn form_coeffs(&self, j: usize) -> Vec<u8> {
        Grid::new(self.domain.fp(), self.domain.dim()).coords(j)
    }

    /// A form on the ambient space whose restriction to H is the `j`-th form.
    pub fn ambient_form(&self, j: usize) -> LinearForm {
        ambient_form(&self.domain, &self.form_coeffs(j))
    }

    /// `E_ℓ |f̂(ℓ)|^q`.
    pub fn moment(&self, q: f64) -> f64 {
        let terms: Vec<f64> = self.values.iter().map(|v| v.norm().powf(q)).collect();
        par::tree_sum(&terms) / self.values.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// An ambient covector `ℓ` with `ℓ(b_i) = coeffs_i` on the basis of `h`.
pub fn ambient_form(h: &Subspace, coeffs: &[u8]) -> LinearForm {
    let fp = h.fp();
    let m = h.basis_matrix();
    let sol = m
        .solve(fp, coeffs)
        .expect("basis rows are independent, so every restriction is attained");
    LinearForm::new(sol)
}

/// Restriction of an ambient form to `h`, as coefficients on h's basis.
pub fn restrict_form(h: &Subspace, form: &LinearForm) -> Vec<u8> {
    h.basis().iter().map(|b| form.apply(h.fp(), &b.coords)).collect()
}

fn axis_pass(
    grid: &Grid,
    roots: &[Complex64],
    src: &[Complex64],
    axis: usize,
    conj: bool,
    i: usize,
) -> Complex64 {
    let p = grid.fp().order();
    let s = grid.strides()[axis];
    let m = grid.digits(i)[axis] as usize;
    let base = i - m * s;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..p {
        let w = roots[(m * a) % p];
        acc += src[base + a * s] * if conj { w.conj() } else { w };
    }
    acc
}

fn transform(grid: &Grid, values: &[Complex64], conj: bool) -> Vec<Complex64> {
    let roots = roots_of_unity(grid.fp());
    let mut cur = values.to_vec();
    for axis in 0..grid.dim() {
        cur = if grid.size() >= PARALLEL_DFT_MIN {
            par::map_range(grid.size(), |i| axis_pass(grid, &roots, &cur, axis, conj, i))
        } else {
            (0..grid.size())
                .map(|i| axis_pass(grid, &roots, &cur, axis, conj, i))
                .collect()
        };
    }
    cur
}

/// `f̂(ℓ) = Σ_x f(x) e_p(ℓx)` by one radix-p pass per coordinate.
pub fn dft(f: &DenseFunction) -> Result<DualFunction> {
    budget_check("fourier transform", f.domain.size(), DFT_BUDGET)?;
    let grid = f.grid();
    Ok(DualFunction {
        domain: f.domain.clone(),
        values: transform(&grid, &f.values, false),
    })
}

/// `f(x) = |H|^{-1} Σ_ℓ f̂(ℓ) e_p(-ℓx)`.
pub fn inverse_dft(fh: &DualFunction) -> Result<DenseFunction> {
    budget_check("fourier transform", fh.domain.size(), DFT_BUDGET)?;
    let grid = Grid::new(fh.domain.fp(), fh.domain.dim());
    let scale = 1.0 / grid.size() as f64;
    let values = transform(&grid, &fh.values, true)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    Ok(DenseFunction {
        domain: fh.domain.clone(),
        values,
    })
}

/// Definitional transform, O(|H|²), for cross-checks.
pub fn dft_direct(f: &DenseFunction) -> DualFunction {
    let grid = f.grid();
    let roots = roots_of_unity(f.domain.fp());
    let values = par::map_range(grid.size(), |l| {
        let terms: Vec<Complex64> = (0..grid.size())
            .map(|x| f.values[x] * roots[grid.dot(l, x) as usize])
            .collect();
        par::tree_sum(&terms)
    });
    DualFunction {
        domain: f.domain.clone(),
        values,
    }
}

fn u2_fourth_of_values(grid: &Grid, values: &[Complex64]) -> f64 {
    let fh = transform(grid, values, false);
    let terms: Vec<f64> = fh.iter().map(|v| v.norm_sqr() * v.norm_sqr()).collect();
    par::tree_sum(&terms) / grid.size() as f64
}

/// `‖f‖_{U²}⁴ = E_ℓ |f̂(ℓ)|⁴`.
pub fn u2_norm_fourth(f: &DenseFunction) -> Result<f64> {
    budget_check("fourier transform", f.domain.size(), DFT_BUDGET)?;
    Ok(u2_fourth_of_values(&f.grid(), &f.values))
}

pub fn u2_norm(f: &DenseFunction) -> Result<f64> {
    Ok(u2_norm_fourth(f)?.max(0.0).powf(0.25))
}

/// `Σ_{x,h₁,h₂} f(x) conj f(x+h₁) conj f(x+h₂) f(x+h₁+h₂)` evaluated term by term.
pub fn u2_norm_fourth_direct(f: &DenseFunction, budget: u128) -> Result<f64> {
    let size = f.domain.size();
    budget_check("direct U2 sum", size.pow(3), budget)?;
    let grid = f.grid();
    let v = &f.values;
    let per_x = par::map_range(grid.size(), |x| {
        let mut rows = Vec::with_capacity(grid.size());
        for h1 in 0..grid.size() {
            let x1 = grid.add(x, h1);
            let mut acc = Complex64::new(0.0, 0.0);
            for h2 in 0..grid.size() {
                let x2 = grid.add(x, h2);
                let x12 = grid.add(x1, h2);
                acc += v[x2].conj() * v[x12];
            }
            rows.push(v[x] * v[x1].conj() * acc);
        }
        par::tree_sum(&rows)
    });
    Ok(par::tree_sum(&per_x).re)
}

pub fn u2_norm_direct(f: &DenseFunction, budget: u128) -> Result<f64> {
    Ok(u2_norm_fourth_direct(f, budget)?.max(0.0).powf(0.25))
}

fn difference_values(grid: &Grid, values: &[Complex64], h: usize) -> Vec<Complex64> {
    (0..grid.size())
        .map(|x| values[x] * values[grid.add(x, h)].conj())
        .collect()
}

/// `Δ_h f(x) = f(x) conj f(x+h)`, with f read as zero off its domain.
pub fn difference_fn(f: &DenseFunction, h: &FpVector) -> DenseFunction {
    let lin = f.domain.linear_part();
    match lin.coords_of(h) {
        Some(c) => {
            let grid = f.grid();
            DenseFunction {
                domain: f.domain.clone(),
                values: difference_values(&grid, &f.values, grid.index(&c)),
            }
        }
        None => DenseFunction::zero(f.domain.clone()),
    }
}

/// `‖f‖_{U³}⁸ = Σ_h ‖Δ_h f‖_{U²}⁴`.
pub fn u3_norm_eighth(f: &DenseFunction, budget: u128) -> Result<f64> {
    budget_check("U3 norm", f.domain.size(), budget)?;
    let grid = f.grid();
    let terms = par::map_range(grid.size(), |h| {
        u2_fourth_of_values(&grid, &difference_values(&grid, &f.values, h))
    });
    Ok(par::tree_sum(&terms))
}

pub fn u3_norm(f: &DenseFunction, budget: u128) -> Result<f64> {
    Ok(u3_norm_eighth(f, budget)?.max(0.0).powf(0.125))
}

/// Indices of `{ℓ : |f̂(ℓ)| ≥ K}`.
pub fn spectrum_indices(fh: &DualFunction, k: f64) -> Vec<usize> {
    (0..fh.values.len())
        .filter(|&j| fh.values[j].norm() >= k)
        .collect()
}

/// The large spectrum `{ℓ : |f̂(ℓ)| ≥ K}` as forms on H's basis coordinates.
pub fn spectrum(f: &DenseFunction, k: f64) -> Result<Vec<LinearForm>> {
    if !(k > 0.0) {
        return Err(Error::BadParams(format!("spectrum threshold must be positive, got {k}")));
    }
    let fh = dft(f)?;
    Ok(spectrum_indices(&fh, k)
        .into_iter()
        .map(|j| LinearForm::new(fh.form_coeffs(j)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub density: f64,
    pub epsilon: f64,
    /// Basis coefficients of the first nonzero form attaining `epsilon`; absent when dim H = 0.
    pub max_witness: Option<LinearForm>,
}

/// `max_{ℓ≠0} |1̂_Φ(ℓ)| / |Φ|` with its first maximizer.
pub fn fourier_uniformity(phi: &PointSet) -> Result<UniformityReport> {
    if phi.is_empty() {
        return Err(Error::EmptySet);
    }
    let fh = dft(&phi.indicator())?;
    let size = phi.len() as f64;
    let normalized: Vec<f64> = fh.values[1..].iter().map(|v| v.norm() / size).collect();
    let (epsilon, max_witness) = match par::argmax_first(&normalized, 1e-12) {
        Some(j) => (normalized[j], Some(LinearForm::new(fh.form_coeffs(j + 1)))),
        None => (0.0, None),
    };
    Ok(UniformityReport {
        density: size / phi.domain().size() as f64,
        epsilon,
        max_witness,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCheck {
    pub k: f64,
    pub epsilon: f64,
    pub threshold: f64,
    pub precondition_met: bool,
    pub spec_size: usize,
    pub bound: f64,
    pub pass: bool,
}

/// `|Spec(f,K)| ≤ 2|Φ|‖f‖₂²/K²` for `supp f ⊆ Φ`, `K ≥ (2ε|Φ|)^{1/2}‖f‖₂`.
pub fn check_spectral_estimate(f: &DenseFunction, phi: &PointSet, k: f64) -> Result<SpectralCheck> {
    if !(k > 0.0) {
        return Err(Error::BadParams(format!("spectrum threshold must be positive, got {k}")));
    }
    f.check_support(phi)?;
    let epsilon = fourier_uniformity(phi)?.epsilon;
    let l2sq = f.l2_squared();
    let size = phi.len() as f64;
    let threshold = (2.0 * epsilon * size).sqrt() * l2sq.sqrt();
    let fh = dft(f)?;
    let spec_size = spectrum_indices(&fh, k).len();
    let bound = 2.0 * size * l2sq / (k * k);
    Ok(SpectralCheck {
        k,
        epsilon,
        threshold,
        precondition_met: k >= threshold,
        spec_size,
        bound,
        pass: spec_size as f64 <= bound * (1.0 + 1e-9) + 1e-9,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub epsilon: f64,
}

/// Ratio of `E_ℓ|f̂|^q` to `‖f‖₂^q |Φ|^{q/2} (|H|^{-1} + ε^{q/2-1}|Φ|^{-1})`.
pub fn check_restriction(f: &DenseFunction, phi: &PointSet, q: f64) -> Result<RestrictionReport> {
    if !(q > 2.0) {
        return Err(Error::BadParams(format!("restriction exponent must exceed 2, got {q}")));
    }
    f.check_support(phi)?;
    let epsilon = fourier_uniformity(phi)?.epsilon;
    let lhs = dft(f)?.moment(q);
    let size = phi.len() as f64;
    let rhs = f.l2_norm().powf(q)
        * size.powf(q / 2.0)
        * (1.0 / phi.domain().size() as f64 + epsilon.powf(q / 2.0 - 1.0) / size);
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(RestrictionReport {
        q,
        lhs,
        rhs,
        ratio,
        epsilon,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentInverseReport {
    pub q: f64,
    pub hypothesis_met: bool,
    pub moment_ratio: f64,
    pub sup_ratio_power: f64,
    pub ratio: f64,
}

/// Compares `‖f̂‖_q/‖1̂_Φ‖_q` with `(‖f̂‖_∞/‖1̂_Φ‖_∞)^{(q-2)/2q}`; report only.
pub fn check_moment_inverse(f: &DenseFunction, phi: &PointSet, q: f64) -> Result<MomentInverseReport> {
    if !(q > 2.0) {
        return Err(Error::BadParams(format!("moment exponent must exceed 2, got {q}")));
    }
    f.check_support(phi)?;
    let uni = fourier_uniformity(phi)?;
    let fh = dft(f)?;
    let ih = dft(&phi.indicator())?;
    let moment_ratio = (fh.moment(q) / ih.moment(q)).powf(1.0 / q);
    let sup_ratio_power = (fh.sup_norm() / ih.sup_norm()).powf((q - 2.0) / (2.0 * q));
    Ok(MomentInverseReport {
        q,
        hypothesis_met: uni.epsilon <= uni.density.powf(4.0 / (q - 2.0)) + 1e-12,
        moment_ratio,
        sup_ratio_power,
        ratio: if sup_ratio_power > 0.0 {
            moment_ratio / sup_ratio_power
        } else {
            0.0
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct U2InverseWitness {
    /// Basis coefficients of the maximizing form.
    pub witness: LinearForm,
    pub correlation: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub density: f64,
    /// Whether `ε ≤ δ²`.
    pub hypothesis_met: bool,
}

impl U2InverseWitness {
    /// `correlation ≥ c η⁴ |Φ|`.
    pub fn meets(&self, c: f64, set_size: usize) -> bool {
        self.correlation + 1e-9 >= c * self.eta.powi(4) * set_size as f64
    }
}

/// The form maximizing `|Σ_{x∈Φ} f(x) e_p(ℓx)|`, with `η = ‖f‖_{U²}/‖1_Φ‖_{U²}`.
pub fn u2_inverse_witness(f: &DenseFunction, phi: &PointSet) -> Result<U2InverseWitness> {
    f.check_support(phi)?;
    let uni = fourier_uniformity(phi)?;
    let fh = dft(f)?;
    let mags: Vec<f64> = fh.values.iter().map(|v| v.norm()).collect();
    let j = par::argmax_first(&mags, 1e-9).expect("dual space is nonempty");
    let eta = u2_norm(f)? / u2_norm(&phi.indicator())?;
    Ok(U2InverseWitness {
        witness: LinearForm::new(fh.form_coeffs(j)),
        correlation: mags[j],
        eta,
        epsilon: uni.epsilon,
        density: uni.density,
        hypothesis_met: uni.epsilon <= uni.density * uni.density + 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_bounded_function, rng_from_seed};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn space(p: i64, n: usize) -> Subspace {
        Subspace::full(Fp::new(p).unwrap(), n)
    }

    fn delta0(h: Subspace) -> DenseFunction {
        let mut f = DenseFunction::zero(h);
        f.values[0] = c(1.0);
        f
    }

    #[test]
    fn dft_examples() {
        let h = space(3, 3);
        let fh = dft(&delta0(h.clone())).unwrap();
        assert!(fh.values().iter().all(|v| (v - c(1.0)).norm() < 1e-12));
        let ones = dft(&DenseFunction::constant(h, c(1.0))).unwrap();
        assert!((ones.values()[0] - c(27.0)).norm() < 1e-9);
        assert!(ones.values()[1..].iter().all(|v| v.norm() < 1e-9));
    }

    #[test]
    fn dft_matches_definition_and_inverts() {
        let mut rng = rng_from_seed(3, 0);
        for (p, n) in [(3, 3), (5, 2), (7, 2)] {
            let f = random_bounded_function(&mut rng, space(p, n));
            let fast = dft(&f).unwrap();
            let slow = dft_direct(&f);
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!((a - b).norm() < 1e-9);
            }
            let back = inverse_dft(&fast).unwrap();
            for (a, b) in back.values().iter().zip(f.values()) {
                assert!((a - b).norm() < crate::tolerance::ROUNDTRIP_ABS);
            }
        }
    }

    #[test]
    fn u2_examples() {
        let ones = DenseFunction::constant(space(3, 1), c(1.0));
        assert!((u2_norm(&ones).unwrap() - 27f64.powf(0.25)).abs() < 1e-12);
        assert!((u2_norm_direct(&ones, 1 << 20).unwrap() - 27f64.powf(0.25)).abs() < 1e-12);
        assert!((u2_norm(&delta0(space(3, 2))).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u3_examples() {
        let ones = DenseFunction::constant(space(3, 1), c(1.0));
        assert!((u3_norm(&ones, U3_BUDGET).unwrap() - 81f64.powf(0.125)).abs() < 1e-12);
        assert_eq!(u3_norm(&DenseFunction::zero(space(3, 2)), U3_BUDGET).unwrap(), 0.0);
        assert!(u3_norm(&DenseFunction::zero(space(3, 9)), U3_BUDGET).is_err());
    }

    #[test]
    fn difference_examples() {
        let fp = Fp::new(3).unwrap();
        let h = space(3, 2);
        let f = DenseFunction::constant(h.clone(), c(1.0)).modulate(&[1, 2]);
        let d = difference_fn(&f, &FpVector::new(vec![1, 1]));
        // ℓh = 1 + 2 = 0 mod 3
        assert!(d.values().iter().all(|v| (v - c(1.0)).norm() < 1e-12));
        let d = difference_fn(&f, &FpVector::new(vec![1, 0]));
        let expect = roots_of_unity(fp)[2];
        assert!(d.values().iter().all(|v| (v - expect).norm() < 1e-12));
        let d0 = difference_fn(&f, &FpVector::zero(2));
        assert!(d0.values().iter().all(|v| (v - c(1.0)).norm() < 1e-12));
    }

    #[test]
    fn uniformity_examples() {
        let fp = Fp::new(3).unwrap();
        let h = space(3, 2);
        assert!(fourier_uniformity(&PointSet::full(h.clone())).unwrap().epsilon < 1e-12);
        let single = PointSet::from_points(h.clone(), &[FpVector::new(vec![1, 2])]).unwrap();
        assert!((fourier_uniformity(&single).unwrap().epsilon - 1.0).abs() < 1e-12);
        let line = Subspace::span(fp, 2, &[FpVector::new(vec![1, 0])])
            .unwrap()
            .with_offset(&FpVector::new(vec![0, 1]))
            .unwrap();
        let pts = line.enumerate_points(100).unwrap();
        let hyper = PointSet::from_points(h.clone(), &pts).unwrap();
        assert!((fourier_uniformity(&hyper).unwrap().epsilon - 1.0).abs() < 1e-12);
        assert!(matches!(fourier_uniformity(&PointSet::empty(h)), Err(Error::EmptySet)));
    }

    #[test]
    fn spectrum_examples() {
        let h = space(3, 2);
        let phi = PointSet::from_mask(h.clone(), (0..9).map(|i| i % 2 == 0).collect()).unwrap();
        let f = phi.indicator();
        let s = spectrum(&f, phi.len() as f64).unwrap();
        assert!(s.contains(&LinearForm::zero(2)));
        assert!(spectrum(&f, phi.len() as f64 + 0.5).unwrap().is_empty());
        let zero = DenseFunction::zero(h);
        let chk = check_spectral_estimate(&zero, &phi, 1.0).unwrap();
        assert_eq!(chk.spec_size, 0);
        assert!(chk.pass);
    }

    #[test]
    fn inverse_witness_examples() {
        let h = space(3, 3);
        let phi = PointSet::from_mask(h.clone(), (0..27).map(|i| i % 3 != 1).collect()).unwrap();
        let w = u2_inverse_witness(&phi.indicator(), &phi).unwrap();
        assert_eq!(w.witness, LinearForm::zero(3));
        assert!((w.correlation - phi.len() as f64).abs() < 1e-9);
        assert!((w.eta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn restriction_zero_function() {
        let h = space(3, 2);
        let phi = PointSet::full(h.clone());
        let r = check_restriction(&DenseFunction::zero(h), &phi, 4.0).unwrap();
        assert_eq!(r.ratio, 0.0);
    }
}
