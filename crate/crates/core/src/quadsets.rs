//! Quadratic polynomials, tuples of them, their rank, level sets, Weyl sums
//! and the pseudorandomness estimates for (differenced) level sets.
//!
//! A [`QuadTuple`] lives on a domain subspace H and its polynomials are
//! written in H's basis coordinates. When H is the whole space these are the
//! usual coordinates.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};
use crate::gf::{rank, symmetrize, Fp, FpMatrix, FpVector, Grid, LinearForm, Subspace};
use crate::harmonic::{dft, roots_of_unity, DenseFunction, PointSet};
use crate::par;
use crate::tolerance::CHAR_SUM_ABS;

/// Default cap on p^d for the λ search in [`tuple_rank`].
pub const LAMBDA_BUDGET: u128 = 2187;

/// Default cap on the number of points enumerated.
pub const ENUM_BUDGET: u128 = 1 << 22;

/// `q(x) = xᵀBx + Lx + c` with `B` symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticPoly {
    pub b: FpMatrix,
    pub l: LinearForm,
    pub c: u8,
}

impl QuadraticPoly {
    pub fn new(fp: Fp, b: FpMatrix, l: LinearForm, c: u8) -> Result<Self> {
        if b.rows() != b.cols() || l.len() != b.rows() {
            return Err(Error::DimensionMismatch {
                expected: b.rows(),
                got: l.len(),
            });
        }
        let b = if b.is_symmetric() { b } else { symmetrize(fp, &b) };
        Ok(QuadraticPoly { b, l, c: c % fp.p() })
    }

    pub fn zero(k: usize) -> Self {
        QuadraticPoly {
            b: FpMatrix::zeros(k, k),
            l: LinearForm::zero(k),
            c: 0,
        }
    }

    pub fn homogeneous(b: FpMatrix) -> Self {
        let k = b.rows();
        QuadraticPoly {
            b,
            l: LinearForm::zero(k),
            c: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn eval(&self, fp: Fp, x: &[u8]) -> u8 {
        let quad = self.b.bilinear(fp, x, x);
        fp.add(fp.add(quad, self.l.apply(fp, x)), self.c)
    }

    pub fn homogeneous_part(&self) -> QuadraticPoly {
        QuadraticPoly::homogeneous(self.b.clone())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.l.is_zero() && self.c == 0
    }

    pub fn add(&self, fp: Fp, other: &QuadraticPoly) -> QuadraticPoly {
        QuadraticPoly {
            b: self.b.add(fp, &other.b),
            l: self.l.add(fp, &other.l),
            c: fp.add(self.c, other.c),
        }
    }

    pub fn scale(&self, fp: Fp, s: u8) -> QuadraticPoly {
        QuadraticPoly {
            b: self.b.scale(fp, s),
            l: self.l.scale(fp, s),
            c: fp.mul(self.c, s),
        }
    }

    /// `y -> q(My + s)` for a `k × m` matrix `M`.
    pub fn compose_affine(&self, fp: Fp, m: &FpMatrix, s: &[u8]) -> QuadraticPoly {
        let mt = m.transpose();
        let b = mt.mul(fp, &self.b).mul(fp, m);
        // (2 sᵀB + L) M
        let sb = self.b.vec_mul(fp, s);
        let lin: Vec<u8> = sb
            .iter()
            .zip(&self.l.coeffs)
            .map(|(&a, &l)| fp.add(fp.mul(2, a), l))
            .collect();
        let l = LinearForm::new(m.vec_mul(fp, &lin));
        QuadraticPoly {
            b,
            l,
            c: self.eval(fp, s),
        }
    }
}

/// A d-tuple of quadratic polynomials on a domain H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadTuple {
    domain: Subspace,
    polys: Vec<QuadraticPoly>,
}

impl QuadTuple {
    pub fn new(domain: Subspace, polys: Vec<QuadraticPoly>) -> Result<Self> {
        for q in &polys {
            if q.dim() != domain.dim() || q.b.rows() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim(),
                    got: q.dim(),
                });
            }
        }
        Ok(QuadTuple { domain, polys })
    }

    pub fn empty(domain: Subspace) -> Self {
        QuadTuple {
            domain,
            polys: Vec::new(),
        }
    }

    pub fn fp(&self) -> Fp {
        self.domain.fp()
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn polys(&self) -> &[QuadraticPoly] {
        &self.polys
    }

    pub fn d(&self) -> usize {
        self.polys.len()
    }

    /// Dimension of the domain.
    pub fn k(&self) -> usize {
        self.domain.dim()
    }

    pub fn forms(&self) -> Vec<FpMatrix> {
        self.polys.iter().map(|q| q.b.clone()).collect()
    }

    pub fn linear_parts(&self) -> Vec<LinearForm> {
        self.polys.iter().map(|q| q.l.clone()).collect()
    }

    pub fn homogeneous(&self) -> QuadTuple {
        QuadTuple {
            domain: self.domain.clone(),
            polys: self.polys.iter().map(|q| q.homogeneous_part()).collect(),
        }
    }

    pub fn push(&self, q: QuadraticPoly) -> Result<QuadTuple> {
        let mut polys = self.polys.clone();
        polys.push(q);
        QuadTuple::new(self.domain.clone(), polys)
    }

    /// `Q(x)` for `x` given in domain coordinates.
    pub fn eval_coords(&self, x: &[u8]) -> Vec<u8> {
        let fp = self.fp();
        self.polys.iter().map(|q| q.eval(fp, x)).collect()
    }

    pub fn eval(&self, x: &FpVector) -> Result<Vec<u8>> {
        let c = self.domain.coords_of(x).ok_or(Error::NotInDomain)?;
        Ok(self.eval_coords(&c))
    }

    /// For every domain point (enumeration order), the index of `Q(x)` in F_p^d.
    pub fn level_codes(&self) -> Result<Vec<usize>> {
        budget_check("level set enumeration", self.domain.size(), ENUM_BUDGET)?;
        let grid = Grid::new(self.fp(), self.k());
        let vg = Grid::new(self.fp(), self.d());
        Ok(par::map_range(grid.size(), |i| vg.index(&self.eval_coords(grid.digits(i)))))
    }

    /// The homogeneous quadratic part of `Σ λ_i q_i`, as a matrix.
    pub fn combine_forms(&self, lambda: &[u8]) -> FpMatrix {
        let fp = self.fp();
        let mut acc = FpMatrix::zeros(self.k(), self.k());
        for (q, &l) in self.polys.iter().zip(lambda) {
            if l != 0 {
                acc = acc.add(fp, &q.b.scale(fp, l));
            }
        }
        acc
    }

    pub fn combine(&self, lambda: &[u8]) -> QuadraticPoly {
        let fp = self.fp();
        let mut acc = QuadraticPoly::zero(self.k());
        for (q, &l) in self.polys.iter().zip(lambda) {
            if l != 0 {
                acc = acc.add(fp, &q.scale(fp, l));
            }
        }
        acc
    }

    /// The tuple of linear forms `hᵀB` (coordinates) for `h` in coordinates.
    pub fn bilinear_forms_at(&self, h: &[u8]) -> Vec<LinearForm> {
        let fp = self.fp();
        self.polys
            .iter()
            .map(|q| LinearForm::new(q.b.vec_mul(fp, h)))
            .collect()
    }

    /// Coordinates of an ambient point of the domain's linear part.
    pub fn coords(&self, x: &FpVector) -> Result<Vec<u8>> {
        self.domain
            .linear_part()
            .coords_of(x)
            .ok_or(Error::NotInDomain)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    /// `None` stands for the rank of the empty tuple, which exceeds every bound.
    pub rank: Option<usize>,
    pub minimizing_lambda: Option<Vec<u8>>,
}

impl RankCertificate {
    pub fn at_least(&self, r: usize) -> bool {
        self.rank.map_or(true, |k| k >= r)
    }
}

/// Nonzero vectors of F_p^d with first nonzero coordinate 1, in lexicographic order.
pub fn projective_points(fp: Fp, d: usize) -> Vec<Vec<u8>> {
    let grid = Grid::new(fp, d);
    (1..grid.size())
        .map(|i| grid.coords(i))
        .filter(|c| c.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

/// Minimum rank of `Σ λ_i b_i` over nonzero λ, with the lexicographically first minimizer.
pub fn tuple_rank_with_budget(q: &QuadTuple, budget: u128) -> Result<RankCertificate> {
    if q.d() == 0 {
        return Ok(RankCertificate {
            rank: None,
            minimizing_lambda: None,
        });
    }
    let fp = q.fp();
    budget_check("rank lambda search", fp.power_count(q.d()), budget)?;
    let mut best: Option<(usize, Vec<u8>)> = None;
    for lambda in projective_points(fp, q.d()) {
        let r = rank(fp, &q.combine_forms(&lambda));
        if best.as_ref().map_or(true, |(b, _)| r < *b) {
            best = Some((r, lambda));
            if r == 0 {
                break;
            }
        }
    }
    let (r, lambda) = best.expect("d >= 1 gives at least one lambda");
    Ok(RankCertificate {
        rank: Some(r),
        minimizing_lambda: Some(lambda),
    })
}

pub fn tuple_rank(q: &QuadTuple) -> Result<RankCertificate> {
    tuple_rank_with_budget(q, LAMBDA_BUDGET)
}

/// The tuple pulled back to `v`, expressed in `v`'s coordinates. No rank check.
pub fn restrict_unchecked(q: &QuadTuple, v: &Subspace) -> Result<QuadTuple> {
    let fp = q.fp();
    let h = q.domain();
    if !h.contains_subspace(v) {
        return Err(Error::NotInDomain);
    }
    let m = h.coordinate_matrix(v)?;
    let s = match v.offset() {
        Some(t) => h.coords_of(t).ok_or(Error::NotInDomain)?,
        None if h.is_coset() => return Err(Error::NotInDomain),
        None => vec![0; h.dim()],
    };
    let polys = q
        .polys
        .iter()
        .map(|p| p.compose_affine(fp, &m, &s))
        .collect();
    QuadTuple::new(v.clone(), polys)
}

/// Restriction to `v ≤ H`, asserting that the rank drops by at most `2 codim v`.
pub fn restrict(q: &QuadTuple, v: &Subspace) -> Result<QuadTuple> {
    let out = restrict_unchecked(q, v)?;
    let before = tuple_rank(q)?;
    let after = tuple_rank(&out)?;
    let codim = q.k() - v.dim();
    if let (Some(r0), Some(r1)) = (before.rank, after.rank) {
        if r1 + 2 * codim < r0 {
            return Err(Error::InvariantViolation(format!(
                "rank {r1} after restriction to codimension {codim} from rank {r0}"
            )));
        }
    }
    Ok(out)
}

/// `{x ∈ H : Q(x) = a}`.
pub fn level_set(q: &QuadTuple, a: &[u8]) -> Result<PointSet> {
    if a.len() != q.d() {
        return Err(Error::DimensionMismatch {
            expected: q.d(),
            got: a.len(),
        });
    }
    let target = Grid::new(q.fp(), q.d()).index(a);
    let codes = q.level_codes()?;
    PointSet::from_mask(q.domain().clone(), codes.iter().map(|&c| c == target).collect())
}

pub fn zero_set(q: &QuadTuple) -> Result<PointSet> {
    level_set(q, &vec![0; q.d()])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylCheck {
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
    pub rank: usize,
    pub codim: usize,
    pub coset_size: u128,
    pub bound: f64,
    pub pass: bool,
}

/// `Σ_{x∈V+x₀} e_p(q(x))` against `|V| p^{D - R/2}`.
///
/// `q` is written in the coordinates of `h`, and `coset` is a coset of a
/// subspace of `h` (in ambient coordinates).
pub fn weyl_sum(q: &QuadraticPoly, h: &Subspace, coset: &Subspace) -> Result<WeylCheck> {
    let fp = h.fp();
    if !h.contains_subspace(coset) {
        return Err(Error::NotInDomain);
    }
    let points = coset.enumerate_points(ENUM_BUDGET)?;
    let roots = roots_of_unity(fp);
    let terms: Vec<Complex64> = points
        .iter()
        .map(|x| {
            let c = h.coords_of(x).ok_or(Error::NotInDomain)?;
            Ok(roots[q.eval(fp, &c) as usize])
        })
        .collect::<Result<_>>()?;
    let s = par::tree_sum(&terms);
    let r = rank(fp, &q.b);
    let codim = h.dim() - coset.dim();
    let bound = coset.size() as f64 * (fp.p() as f64).powf(codim as f64 - r as f64 / 2.0);
    Ok(WeylCheck {
        re: s.re,
        im: s.im,
        magnitude: s.norm(),
        rank: r,
        codim,
        coset_size: coset.size(),
        bound,
        pass: s.norm() <= bound + CHAR_SUM_ABS,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferencedSet {
    pub phi: PointSet,
    pub v_uv: Subspace,
}

fn check_same_len(a: &FpVector, k: usize) -> Result<()> {
    if a.len() != k {
        Err(Error::DimensionMismatch {
            expected: k,
            got: a.len(),
        })
    } else {
        Ok(())
    }
}

/// `Φ_{u,v}` by its intersection definition together with the subspace
/// `V_{u,v} = {x : B(u_i,x) = 0, B(v_j,x) + Lx = 0}`.
///
/// `u` and `v` are given in domain coordinates. Fails if
/// `Φ_{u,v} = Q⁻¹(0) ∩ (V_{u,v} + x₀)` is false for some `x₀ ∈ Φ_{u,v}`.
pub fn differenced_set(q: &QuadTuple, u: &[FpVector], v: &[FpVector]) -> Result<DifferencedSet> {
    let fp = q.fp();
    let k = q.k();
    for w in u.iter().chain(v) {
        check_same_len(w, k)?;
    }
    let grid = Grid::new(fp, k);
    let codes = q.level_codes()?;
    let zero_mask: Vec<bool> = codes.iter().map(|&c| c == 0).collect();
    let u_idx: Vec<usize> = u.iter().map(|w| grid.index(&w.coords)).collect();
    let v_idx: Vec<usize> = v.iter().map(|w| grid.index(&w.coords)).collect();
    let phi_mask: Vec<bool> = (0..grid.size())
        .map(|x| {
            zero_mask[x]
                && u_idx.iter().all(|&ui| zero_mask[grid.add(x, ui)])
                && v_idx.iter().all(|&vj| zero_mask[grid.sub(vj, x)])
        })
        .collect();

    let mut forms = Vec::new();
    for w in u {
        forms.extend(q.bilinear_forms_at(&w.coords));
    }
    let ls = q.linear_parts();
    for w in v {
        for (f, l) in q.bilinear_forms_at(&w.coords).iter().zip(&ls) {
            forms.push(f.add(fp, l));
        }
    }
    let coord_space = Subspace::full(fp, k);
    let v_coords = crate::gf::kernel(&forms, &coord_space);
    let in_v: Vec<bool> = (0..grid.size())
        .map(|i| v_coords.contains(&FpVector::new(grid.coords(i))))
        .collect();

    for x0 in (0..grid.size()).filter(|&i| phi_mask[i]) {
        for x in 0..grid.size() {
            let expect = zero_mask[x] && in_v[grid.sub(x, x0)];
            if expect != phi_mask[x] {
                return Err(Error::InvariantViolation(format!(
                    "differenced set identity fails at base point {:?}, point {:?}",
                    grid.coords(x0),
                    grid.coords(x)
                )));
            }
        }
    }
    let basis: Vec<Vec<u8>> = v_coords.basis().iter().map(|b| b.coords.clone()).collect();
    Ok(DifferencedSet {
        phi: PointSet::from_mask(q.domain().clone(), phi_mask)?,
        v_uv: q.domain().linear_part().embed(&basis)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub k: usize,
    pub tuples: u128,
    pub degenerate: u128,
    /// `|H|^k p^{kd-R}`, or 0 when the rank is unbounded.
    pub cap: f64,
    pub pass: bool,
}

/// Whether the `forms` (rows) are linearly independent.
fn independent(fp: Fp, forms: &[Vec<u8>]) -> bool {
    crate::gf::rank_incremental(fp, forms) == forms.len()
}

/// Counts `(h_1..h_k) ∈ H^k` for which the forms `h_jᵀb_i + ℓ_ij` are dependent.
///
/// `forms` are symmetric matrices on a space of dimension `m`; `ls[j][i]` is `ℓ_ij`.
pub fn generic_codim_census(
    fp: Fp,
    forms: &[FpMatrix],
    ls: &[Vec<LinearForm>],
    budget: u128,
) -> Result<CensusRecord> {
    let d = forms.len();
    let k = ls.len();
    let m = forms.first().map_or_else(|| ls.iter().flatten().next().map_or(0, |l| l.len()), |b| b.rows());
    for lj in ls {
        if lj.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: lj.len() });
        }
    }
    let hsize = fp.power_count(m);
    let tuples = hsize.pow(k as u32);
    budget_check("generic codimension census", tuples, budget)?;
    let grid = Grid::new(fp, m);
    let tuple_grid_size = tuples as usize;
    let degenerate = par::sum_u128(tuple_grid_size, |t| {
        let mut rows = Vec::with_capacity(k * d);
        let mut rest = t;
        let mut hs = vec![0usize; k];
        for j in (0..k).rev() {
            hs[j] = rest % grid.size();
            rest /= grid.size();
        }
        for (j, &h) in hs.iter().enumerate() {
            let hv = grid.digits(h);
            for (i, b) in forms.iter().enumerate() {
                let hb = b.vec_mul(fp, hv);
                rows.push(
                    hb.iter()
                        .zip(&ls[j][i].coeffs)
                        .map(|(&a, &l)| fp.add(a, l))
                        .collect(),
                );
            }
        }
        u128::from(!independent(fp, &rows))
    });
    let tuple = QuadTuple::new(
        Subspace::full(fp, m),
        forms.iter().map(|b| QuadraticPoly::homogeneous(b.clone())).collect(),
    )?;
    let r = tuple_rank(&tuple)?.rank;
    let (cap, pass) = match r {
        None => (0.0, degenerate == 0),
        Some(r) => {
            let cap = tuples as f64 * (fp.p() as f64).powi((k * d) as i32 - r as i32);
            // degenerate · p^R ≤ |H|^k p^{kd}
            let pass = degenerate * fp.power_count(r) <= tuples * fp.power_count(k * d);
            (cap, pass)
        }
    };
    Ok(CensusRecord {
        k,
        tuples,
        degenerate,
        cap,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetUniformityCheck {
    pub re: f64,
    pub im: f64,
    pub main_re: f64,
    pub main_im: f64,
    pub error: f64,
    pub bound: f64,
    pub trivial_bound: f64,
    pub vacuous: bool,
    pub pass: bool,
}

/// `|Σ_{x∈Q⁻¹(0)∩(V+h)} e_p(ℓx) − 1_{V⊥}(ℓ) e_p(ℓh) |V| p^{-d}| ≤ |H| p^{-R/2}`.
///
/// `v` is a subspace of the coordinate space of Q's domain; `h` and `l` are
/// in domain coordinates as well.
pub fn check_coset_uniformity(
    q: &QuadTuple,
    v: &Subspace,
    h: &FpVector,
    l: &LinearForm,
) -> Result<CosetUniformityCheck> {
    let fp = q.fp();
    let k = q.k();
    if v.ambient_dim() != k || h.len() != k || l.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: v.ambient_dim(),
        });
    }
    let roots = roots_of_unity(fp);
    let coset = v.linear_part().with_offset(h)?;
    let zero = vec![0u8; q.d()];
    let terms: Vec<Complex64> = coset
        .enumerate_points(ENUM_BUDGET)?
        .iter()
        .filter(|x| q.eval_coords(&x.coords) == zero)
        .map(|x| roots[l.apply(fp, &x.coords) as usize])
        .collect();
    let s = par::tree_sum(&terms);
    let in_perp = v.basis().iter().all(|b| l.apply(fp, &b.coords) == 0);
    let main = if in_perp {
        roots[l.apply(fp, &h.coords) as usize]
            * (v.size() as f64 * (fp.p() as f64).powi(-(q.d() as i32)))
    } else {
        Complex64::new(0.0, 0.0)
    };
    let error = (s - main).norm();
    let bound = match tuple_rank(q)?.rank {
        None => 0.0,
        Some(r) => q.domain().size() as f64 * (fp.p() as f64).powf(-(r as f64) / 2.0),
    };
    let trivial = v.size() as f64;
    Ok(CosetUniformityCheck {
        re: s.re,
        im: s.im,
        main_re: main.re,
        main_im: main.im,
        error,
        bound,
        trivial_bound: trivial,
        vacuous: bound >= trivial,
        pass: error <= bound + CHAR_SUM_ABS,
    })
}

/// `Σ_{x∈S} e_p(ℓ(x − x₀))` for every ℓ, in coordinates.
fn centered_char_sums(domain: &Subspace, mask: &[bool], x0: Option<usize>) -> Result<Vec<Complex64>> {
    let grid = Grid::new(domain.fp(), domain.dim());
    let ind = PointSet::from_mask(domain.clone(), mask.to_vec())?.indicator();
    let coord_dom = DenseFunction::new(Subspace::full(domain.fp(), domain.dim()), ind.values().to_vec())?;
    let fh = dft(&coord_dom)?;
    let roots = roots_of_unity(domain.fp());
    Ok(fh
        .values()
        .iter()
        .enumerate()
        .map(|(l, v)| match x0 {
            Some(x0) => v * roots[domain.fp().neg(grid.dot(l, x0)) as usize],
            None => *v,
        })
        .collect())
}

fn span_membership(fp: Fp, k: usize, forms: &[LinearForm]) -> Vec<bool> {
    let span = Subspace::span(
        fp,
        k,
        &forms.iter().map(|f| FpVector::new(f.coeffs.clone())).collect::<Vec<_>>(),
    )
    .expect("forms have domain length");
    let grid = Grid::new(fp, k);
    (0..grid.size())
        .map(|l| span.contains(&FpVector::new(grid.coords(l))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OnceDifferencedCensus {
    pub h_count: u128,
    pub degenerate_phi: u128,
    pub degenerate_psi: u128,
    pub degenerate_either: u128,
    /// `|H| p^{d-R}`, applied to each of the two families separately.
    pub cap: f64,
    pub failing_h: u128,
    pub failing_nondegenerate_h: u128,
    pub max_error_nondegenerate: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThriceDifferencedCensus {
    pub samples: usize,
    pub degenerate_sampled: usize,
    pub failing_nondegenerate: usize,
    pub max_error_nondegenerate: f64,
    /// `|H| p^{-R/2}`.
    pub bound: f64,
    /// `|H| p^{R/2}`, the bound with the opposite sign in the exponent.
    pub bound_positive_exponent: f64,
    pub pass_positive_exponent: bool,
    pub exhaustive: Option<CensusRecord>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferencedUniformityCensus {
    pub once: OnceDifferencedCensus,
    pub thrice: ThriceDifferencedCensus,
}

fn rank_bound(fp: Fp, hsize: u128, r: Option<usize>) -> f64 {
    match r {
        None => 0.0,
        Some(r) => hsize as f64 * (fp.p() as f64).powf(-(r as f64) / 2.0),
    }
}

/// Every `h`: the sums over `Φ_h = Q⁻¹(0) ∩ (Q⁻¹(0) − h)` and
/// `Ψ_h = Q⁻¹(0) ∩ (h − Q⁻¹(0))` against their main terms.
pub fn once_differenced_census(q: &QuadTuple) -> Result<OnceDifferencedCensus> {
    let fp = q.fp();
    let k = q.k();
    let d = q.d();
    let grid = Grid::new(fp, k);
    let hsize = grid.size() as u128;
    let r = tuple_rank(q)?.rank;
    let bound = rank_bound(fp, hsize, r);
    let main_size = hsize as f64 * (fp.p() as f64).powi(-2 * d as i32);
    let codes = q.level_codes()?;
    let zero_mask: Vec<bool> = codes.iter().map(|&c| c == 0).collect();
    let ls = q.linear_parts();

    struct PerH {
        deg_phi: bool,
        deg_psi: bool,
        fails: bool,
        err: f64,
    }
    let rows: Vec<Result<PerH>> = par::map_range(grid.size(), |h| {
        let hb = q.bilinear_forms_at(grid.digits(h));
        let hbl: Vec<LinearForm> = hb.iter().zip(&ls).map(|(a, l)| a.add(fp, l)).collect();
        let deg_phi = !independent(fp, &hb.iter().map(|f| f.coeffs.clone()).collect::<Vec<_>>());
        let deg_psi = !independent(fp, &hbl.iter().map(|f| f.coeffs.clone()).collect::<Vec<_>>());
        let phi: Vec<bool> = (0..grid.size())
            .map(|x| zero_mask[x] && zero_mask[grid.add(x, h)])
            .collect();
        let psi: Vec<bool> = (0..grid.size())
            .map(|x| zero_mask[x] && zero_mask[grid.sub(h, x)])
            .collect();
        let mut err: f64 = 0.0;
        for (mask, forms) in [(&phi, &hb), (&psi, &hbl)] {
            let x0 = mask.iter().position(|&m| m);
            let sums = centered_char_sums(q.domain(), mask, x0)?;
            let member = span_membership(fp, k, forms);
            for (l, s) in sums.iter().enumerate() {
                let main = if member[l] { main_size } else { 0.0 };
                err = err.max((s - Complex64::new(main, 0.0)).norm());
            }
        }
        Ok(PerH {
            deg_phi,
            deg_psi,
            fails: err > bound + CHAR_SUM_ABS,
            err,
        })
    });
    let rows: Vec<PerH> = rows.into_iter().collect::<Result<_>>()?;
    let count = |f: &dyn Fn(&PerH) -> bool| rows.iter().filter(|r| f(r)).count() as u128;
    let degenerate_phi = count(&|r| r.deg_phi);
    let degenerate_psi = count(&|r| r.deg_psi);
    let degenerate_either = count(&|r| r.deg_phi || r.deg_psi);
    let failing_h = count(&|r| r.fails);
    let failing_nondegenerate_h = count(&|r| r.fails && !r.deg_phi && !r.deg_psi);
    let max_error_nondegenerate = rows
        .iter()
        .filter(|r| !r.deg_phi && !r.deg_psi)
        .map(|r| r.err)
        .fold(0.0, f64::max);
    let (cap, caps_ok) = match r {
        None => (0.0, degenerate_either == 0),
        Some(r) => {
            let cap = hsize as f64 * (fp.p() as f64).powi(d as i32 - r as i32);
            let lim = hsize * fp.power_count(d);
            let pr = fp.power_count(r);
            (cap, degenerate_phi * pr <= lim && degenerate_psi * pr <= lim)
        }
    };
    Ok(OnceDifferencedCensus {
        h_count: hsize,
        degenerate_phi,
        degenerate_psi,
        degenerate_either,
        cap,
        failing_h,
        failing_nondegenerate_h,
        max_error_nondegenerate,
        bound,
        pass: caps_ok && failing_nondegenerate_h == 0,
    })
}

/// Sampled triples `(h₁,h₂,h₃)` and base points `x₀`: the sum over
/// `Q⁻¹(0) ∩ (V_{h₁,h₂,h₃} + x₀)` against `1_{ℓ∈⟨h_jᵀB⟩} |H| p^{-4d}`.
pub fn thrice_differenced_census<R: Rng>(
    q: &QuadTuple,
    samples: usize,
    rng: &mut R,
    exhaustive_budget: Option<u128>,
) -> Result<ThriceDifferencedCensus> {
    let fp = q.fp();
    let k = q.k();
    let d = q.d();
    let grid = Grid::new(fp, k);
    let hsize = grid.size() as u128;
    let r = tuple_rank(q)?.rank;
    let bound = rank_bound(fp, hsize, r);
    let bound_pos = match r {
        None => 0.0,
        Some(r) => hsize as f64 * (fp.p() as f64).powf(r as f64 / 2.0),
    };
    let main_size = hsize as f64 * (fp.p() as f64).powi(-4 * d as i32);
    let zero_mask: Vec<bool> = q.level_codes()?.iter().map(|&c| c == 0).collect();
    let draws: Vec<[usize; 4]> = (0..samples)
        .map(|_| {
            [
                rng.gen_range(0..grid.size()),
                rng.gen_range(0..grid.size()),
                rng.gen_range(0..grid.size()),
                rng.gen_range(0..grid.size()),
            ]
        })
        .collect();
    let coord_space = Subspace::full(fp, k);
    let rows: Vec<Result<(bool, f64)>> = par::map_slice(&draws, |&[h1, h2, h3, x0]| {
        let mut forms = Vec::new();
        for h in [h1, h2, h3] {
            forms.extend(q.bilinear_forms_at(grid.digits(h)));
        }
        let degenerate = !independent(fp, &forms.iter().map(|f| f.coeffs.clone()).collect::<Vec<_>>());
        let v = crate::gf::kernel(&forms, &coord_space);
        let mask: Vec<bool> = (0..grid.size())
            .map(|x| zero_mask[x] && v.contains(&FpVector::new(grid.coords(grid.sub(x, x0)))))
            .collect();
        let sums = centered_char_sums(q.domain(), &mask, Some(x0))?;
        let member = span_membership(fp, k, &forms);
        let err = sums
            .iter()
            .enumerate()
            .map(|(l, s)| (s - Complex64::new(if member[l] { main_size } else { 0.0 }, 0.0)).norm())
            .fold(0.0, f64::max);
        Ok((degenerate, err))
    });
    let rows: Vec<(bool, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let degenerate_sampled = rows.iter().filter(|r| r.0).count();
    let failing_nondegenerate = rows
        .iter()
        .filter(|r| !r.0 && r.1 > bound + CHAR_SUM_ABS)
        .count();
    let max_error_nondegenerate = rows.iter().filter(|r| !r.0).map(|r| r.1).fold(0.0, f64::max);
    let pass_positive_exponent = rows
        .iter()
        .filter(|r| !r.0)
        .all(|r| r.1 <= bound_pos + CHAR_SUM_ABS);
    let exhaustive = match exhaustive_budget {
        Some(b) => Some(generic_codim_census(
            fp,
            &q.forms(),
            &vec![vec![LinearForm::zero(k); d]; 3],
            b,
        )?),
        None => None,
    };
    let pass = failing_nondegenerate == 0 && exhaustive.as_ref().map_or(true, |c| c.pass);
    Ok(ThriceDifferencedCensus {
        samples,
        degenerate_sampled,
        failing_nondegenerate,
        max_error_nondegenerate,
        bound,
        bound_positive_exponent: bound_pos,
        pass_positive_exponent,
        exhaustive,
        pass,
    })
}

pub fn differenced_uniformity_census<R: Rng>(
    q: &QuadTuple,
    samples: usize,
    rng: &mut R,
    exhaustive_budget: Option<u128>,
) -> Result<DifferencedUniformityCensus> {
    Ok(DifferencedUniformityCensus {
        once: once_differenced_census(q)?,
        thrice: thrice_differenced_census(q, samples, rng, exhaustive_budget)?,
    })
}
