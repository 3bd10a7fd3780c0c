//! Maximal level-set density, partitioning a tuple into high-rank level sets,
//! and the sparsity-expansion density-increment iteration.
//!
//! Sets `A` are subsets of the whole space F_p^n. Tuples `Q` are homogeneous
//! and live on a linear subspace H, written in H's coordinates. Linear shifts
//! `L` are forms on H, also in H's coordinates. All densities are exact.

use num_rational::Rational64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::brauer::expansion_set;
use crate::error::{budget_check, Error, Result};
use crate::gf::{Fp, FpMatrix, FpVector, Grid, LinearForm, Subspace};
use crate::harmonic::PointSet;
use crate::par;
use crate::quadsets::{restrict_unchecked, tuple_rank, zero_set, QuadTuple, QuadraticPoly};
use crate::random::rng_from_seed;

/// Default cap on cell evaluations for one density maximisation.
pub const DENSITY_BUDGET: u128 = 1 << 29;

/// Default cap on cell evaluations summed over an increment search.
pub const INCREMENT_BUDGET: u128 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    /// Translates range over coset representatives of H. Same maximum as
    /// `Literal`, since a translate inside H is absorbed into `(L, a)`.
    Exhaustive,
    /// Translates range over all of F_p^n, as in the definition.
    Literal,
    /// Random shift tuples; the result is only a lower bound.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityOptions {
    pub mode: DensityMode,
    pub budget: u128,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            mode: DensityMode::Exhaustive,
            budget: DENSITY_BUDGET,
        }
    }
}

/// `|(A−x) ∩ (Q+L)⁻¹(a)| / |(Q+L)⁻¹(a)|` at a maximising `(x, L, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub delta: Rational64,
    pub hits: u64,
    pub cell_size: u64,
    pub translate: FpVector,
    pub shifts: Vec<LinearForm>,
    pub value: Vec<u8>,
    /// Set when the search was sampled, so `delta` is only a lower bound.
    pub sampled: bool,
}

fn ratio(num: u64, den: u64) -> Rational64 {
    Rational64::new(num as i64, den as i64)
}

fn better(n1: u64, d1: u64, n2: u64, d2: u64) -> bool {
    (n1 as u128) * (d2 as u128) > (n2 as u128) * (d1 as u128)
}

fn check_inputs(a: &PointSet, q: &QuadTuple) -> Result<()> {
    let fp = q.fp();
    let n = q.domain().ambient_dim();
    if a.domain() != &Subspace::full(fp, n) {
        return Err(Error::NotInDomain);
    }
    if q.domain().is_coset() {
        return Err(Error::PreconditionUnmet(
            "the tuple must live on a linear subspace".into(),
        ));
    }
    if !q.polys().iter().all(|p| p.is_homogeneous()) {
        return Err(Error::PreconditionUnmet("the tuple must be homogeneous".into()));
    }
    Ok(())
}

/// Precomputed evaluation data for cells of `Q` on H.
struct Cells {
    fp: Fp,
    d: usize,
    amb: Grid,
    hgrid: Grid,
    /// Ambient index of each point of H.
    h_amb: Vec<usize>,
    /// `qv[j][h] = q_j(h)`.
    qv: Vec<Vec<u8>>,
}

impl Cells {
    fn new(q: &QuadTuple) -> Self {
        let fp = q.fp();
        let k = q.k();
        let amb = Grid::new(fp, q.domain().ambient_dim());
        let hgrid = Grid::new(fp, k);
        let h_amb = (0..hgrid.size())
            .map(|i| amb.index(&q.domain().point(hgrid.digits(i)).coords))
            .collect();
        let qv = q
            .polys()
            .iter()
            .map(|p| (0..hgrid.size()).map(|i| p.eval(fp, hgrid.digits(i))).collect())
            .collect();
        Cells {
            fp,
            d: q.d(),
            amb,
            hgrid,
            h_amb,
            qv,
        }
    }

    /// Index in F_p^d of `(Q+L)(h)` for every point of H.
    fn codes(&self, shifts: &[&[u8]]) -> Vec<usize> {
        let fp = self.fp;
        let p = fp.p() as usize;
        (0..self.hgrid.size())
            .map(|h| {
                let x = self.hgrid.digits(h);
                let mut code = 0;
                for j in 0..self.d {
                    let v = fp.add(self.qv[j][h], fp.dot(shifts[j], x));
                    code = code * p + v as usize;
                }
                code
            })
            .collect()
    }

    /// First maximiser over translates (in the given order), then values.
    fn best(&self, codes: &[usize], translates: &[usize], amask: &[bool]) -> (u64, u64, usize, usize) {
        let cells = self.fp.power_count(self.d) as usize;
        let mut den = vec![0u64; cells];
        for &c in codes {
            den[c] += 1;
        }
        let mut best: Option<(u64, u64, usize, usize)> = None;
        let mut num = vec![0u64; cells];
        for (ti, &x) in translates.iter().enumerate() {
            num.iter_mut().for_each(|v| *v = 0);
            for (h, &c) in codes.iter().enumerate() {
                if amask[self.amb.add(self.h_amb[h], x)] {
                    num[c] += 1;
                }
            }
            for c in 0..cells {
                if den[c] == 0 {
                    continue;
                }
                if best.map_or(true, |(bn, bd, _, _)| better(num[c], den[c], bn, bd)) {
                    best = Some((num[c], den[c], ti, c));
                }
            }
        }
        best.expect("the cell containing 0 is nonempty")
    }
}

/// `δ_Q(A)`: the largest relative density of a translate of `A` in a cell
/// `(Q+L)⁻¹(a)`, with the first maximiser in (translate, L, a) order.
pub fn max_level_density(a: &PointSet, q: &QuadTuple, opts: &DensityOptions) -> Result<DensityWitness> {
    check_inputs(a, q)?;
    let fp = q.fp();
    let n = q.domain().ambient_dim();
    let (k, d) = (q.k(), q.d());
    let cells = Cells::new(q);
    let translates: Vec<FpVector> = match opts.mode {
        DensityMode::Literal => Subspace::full(fp, n).enumerate_points(opts.budget)?,
        _ => q.domain().coset_representatives(opts.budget)?,
    };
    let t_idx: Vec<usize> = translates.iter().map(|x| cells.amb.index(&x.coords)).collect();
    let shift_grid = Grid::new(fp, k * d);
    let shift_indices: Vec<usize> = match opts.mode {
        DensityMode::Sampled { samples, seed } => {
            let mut rng = rng_from_seed(seed, 0);
            let mut v = vec![0];
            v.extend((1..samples.max(1)).map(|_| rng.gen_range(0..shift_grid.size())));
            v
        }
        _ => {
            budget_check("shift tuples", fp.power_count(k * d), opts.budget)?;
            (0..shift_grid.size()).collect()
        }
    };
    let work = shift_indices.len() as u128 * t_idx.len() as u128 * cells.hgrid.size() as u128;
    budget_check("maximal level density", work, opts.budget)?;

    let amask = a.mask();
    let per_shift = par::map_slice(&shift_indices, |&s| {
        let digits = shift_grid.digits(s);
        let shifts: Vec<&[u8]> = (0..d).map(|j| &digits[j * k..(j + 1) * k]).collect();
        cells.best(&cells.codes(&shifts), &t_idx, amask)
    });
    // lexicographic (translate, L, a) among maximisers
    let mut best = (0usize, per_shift[0]);
    for (si, &cand) in per_shift.iter().enumerate().skip(1) {
        let (bn, bd, bt, _) = best.1;
        let (cn, cd, ct, _) = cand;
        if better(cn, cd, bn, bd) || (!better(bn, bd, cn, cd) && ct < bt) {
            best = (si, cand);
        }
    }
    let (si, (num, den, ti, code)) = best;
    let digits = shift_grid.coords(shift_indices[si]);
    Ok(DensityWitness {
        delta: ratio(num, den),
        hits: num,
        cell_size: den,
        translate: translates[ti].clone(),
        shifts: (0..d)
            .map(|j| LinearForm::new(digits[j * k..(j + 1) * k].to_vec()))
            .collect(),
        value: Grid::new(fp, d).coords(code),
        sampled: matches!(opts.mode, DensityMode::Sampled { .. }),
    })
}

/// `(|(A−x) ∩ (Q+L)⁻¹(a)|, |(Q+L)⁻¹(a)|)` by direct enumeration.
pub fn cell_counts(
    a: &PointSet,
    q: &QuadTuple,
    translate: &FpVector,
    shifts: &[LinearForm],
    value: &[u8],
) -> Result<(u64, u64)> {
    if shifts.len() != q.d() || value.len() != q.d() {
        return Err(Error::DimensionMismatch {
            expected: q.d(),
            got: shifts.len().min(value.len()),
        });
    }
    let fp = q.fp();
    let amb = Grid::new(fp, q.domain().ambient_dim());
    let grid = Grid::new(fp, q.k());
    let mut hits = 0;
    let mut size = 0;
    for i in 0..grid.size() {
        let h = grid.digits(i);
        let inside = q
            .polys()
            .iter()
            .zip(shifts)
            .zip(value)
            .all(|((p, l), &v)| fp.add(p.eval(fp, h), l.apply(fp, h)) == v);
        if inside {
            size += 1;
            let y = q.domain().point(h).add(fp, translate);
            if a.contains_index(amb.index(&y.coords)) {
                hits += 1;
            }
        }
    }
    Ok((hits, size))
}

/// Recomputes the witness's ratio and compares it with the stored one.
pub fn verify_witness(a: &PointSet, q: &QuadTuple, w: &DensityWitness) -> Result<bool> {
    let (hits, size) = cell_counts(a, q, &w.translate, &w.shifts, &w.value)?;
    Ok(size > 0 && hits == w.hits && size == w.cell_size && ratio(hits, size) == w.delta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityPreservationCheck {
    pub before: DensityWitness,
    pub after: DensityWitness,
    pub pass: bool,
}

/// `δ_{Q,q}(A) ≥ δ_Q(A)` for a homogeneous `q` on the same domain.
pub fn check_density_preservation(
    a: &PointSet,
    q: &QuadTuple,
    extra: &QuadraticPoly,
    opts: &DensityOptions,
) -> Result<DensityPreservationCheck> {
    let before = max_level_density(a, q, opts)?;
    let after = max_level_density(a, &q.push(extra.clone())?, opts)?;
    let pass = after.delta >= before.delta;
    Ok(DensityPreservationCheck { before, after, pass })
}

/// One round of the partitioning recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionStep {
    pub d: usize,
    pub rank: usize,
    /// The minimising combination after reindexing, with last entry `p − 1`.
    pub lambda: Vec<u8>,
    /// Position moved to the end.
    pub swapped: usize,
    pub radical_codim: usize,
    pub slice_codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionStats {
    pub codim_increase: usize,
    pub d_in: usize,
    pub d_out: usize,
    pub rank_achieved: Option<usize>,
    pub initial: Vec<DensityWitness>,
    pub witnesses: Vec<DensityWitness>,
    pub steps: Vec<PartitionStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    /// The new tuple; its domain is the new subspace.
    pub tuple: QuadTuple,
    pub stats: PartitionStats,
}

impl PartitionResult {
    pub fn domain(&self) -> &Subspace {
        self.tuple.domain()
    }
}

fn violation(msg: String) -> Error {
    Error::InvariantViolation(msg)
}

/// Witness data `(x, L, a)` relative to the current tuple's domain.
#[derive(Clone, Debug)]
struct Cell {
    x: FpVector,
    shifts: Vec<Vec<u8>>,
    value: Vec<u8>,
}

/// Counts for the cell, summed over the points `base + v` with `v` in `sub`
/// (both in coordinates of `q`'s domain).
fn coset_counts(a: &PointSet, q: &QuadTuple, cell: &Cell, base: &[u8], sub: &[Vec<u8>]) -> (u64, u64) {
    let fp = q.fp();
    let amb = Grid::new(fp, q.domain().ambient_dim());
    let grid = Grid::new(fp, sub.len());
    let mut hits = 0;
    let mut size = 0;
    for i in 0..grid.size() {
        let mut h = base.to_vec();
        for (v, &c) in sub.iter().zip(grid.digits(i)) {
            for (hh, &vv) in h.iter_mut().zip(v) {
                *hh = fp.add(*hh, fp.mul(c, vv));
            }
        }
        let inside = q
            .polys()
            .iter()
            .zip(&cell.shifts)
            .zip(&cell.value)
            .all(|((p, l), &v)| fp.add(p.eval(fp, &h), fp.dot(l, &h)) == v);
        if inside {
            size += 1;
            let y = q.domain().point(&h).add(fp, &cell.x);
            if a.contains_index(amb.index(&y.coords)) {
                hits += 1;
            }
        }
    }
    (hits, size)
}

/// Moves the cell to the coset `t + V` and rewrites it on `V`:
/// for `v ∈ V`, `Q(t+Mv) + L(t+Mv) = a` iff `Q_V(v) + L̃(v) = ã`.
fn rewrite_cell(q: &QuadTuple, cell: &Cell, t: &[u8], v: &Subspace) -> Result<Cell> {
    let fp = q.fp();
    let m = q.domain().coordinate_matrix(v)?;
    let mut shifts = Vec::with_capacity(q.d());
    let mut value = Vec::with_capacity(q.d());
    for ((p, l), &a) in q.polys().iter().zip(&cell.shifts).zip(&cell.value) {
        let moved = p.compose_affine(fp, &m, t);
        let lm = m.vec_mul(fp, l);
        let lin: Vec<u8> = moved.l.coeffs.iter().zip(&lm).map(|(&x, &y)| fp.add(x, y)).collect();
        shifts.push(lin);
        value.push(fp.sub(fp.sub(a, moved.c), fp.dot(l, t)));
    }
    Ok(Cell {
        x: cell.x.add(fp, &q.domain().point(t)),
        shifts,
        value,
    })
}

/// Best coset `t + V` of `V ≤ dom(q)` for the cell, restricted to representatives
/// passing `keep`; returns the rewritten cell on `V` and its counts.
fn best_coset(
    a: &PointSet,
    q: &QuadTuple,
    cell: &Cell,
    v_coords: &Subspace,
    keep: impl Fn(&[u8]) -> bool,
) -> Result<Option<(Vec<u8>, u64, u64)>> {
    let sub: Vec<Vec<u8>> = v_coords.basis().iter().map(|b| b.coords.clone()).collect();
    let reps = v_coords.coset_representatives(DENSITY_BUDGET)?;
    let mut best: Option<(Vec<u8>, u64, u64)> = None;
    for t in reps {
        if !keep(&t.coords) {
            continue;
        }
        let (h, s) = coset_counts(a, q, cell, &t.coords, &sub);
        if s == 0 {
            continue;
        }
        if best.as_ref().map_or(true, |(_, bh, bs)| better(h, s, *bh, *bs)) {
            best = Some((t.coords, h, s));
        }
    }
    Ok(best)
}

fn cell_of(w: &DensityWitness) -> Cell {
    Cell {
        x: w.translate.clone(),
        shifts: w.shifts.iter().map(|l| l.coeffs.clone()).collect(),
        value: w.value.clone(),
    }
}

/// Restricts `Q` to subspaces until its rank is at least `min_rank`, keeping
/// every `δ_Q(A_i)` from decreasing. Follows the inductive construction:
/// a low-rank combination `q_d = Σ_{j<d} λ_j q_j` on the radical K of
/// `b_λ`, the `q_d` constraint turned into a linear form on K, and the
/// best coset chosen by pigeonhole at both steps.
pub fn high_rank_partition(
    q: &QuadTuple,
    min_rank: usize,
    sets: &[PointSet],
    opts: &DensityOptions,
) -> Result<PartitionResult> {
    for a in sets {
        check_inputs(a, q)?;
    }
    let fp = q.fp();
    let r = sets.len();
    let initial: Vec<DensityWitness> = sets
        .iter()
        .map(|a| max_level_density(a, q, opts))
        .collect::<Result<_>>()?;
    let mut cur = q.clone();
    let mut steps = Vec::new();
    loop {
        let cert = tuple_rank(&cur)?;
        if cert.at_least(min_rank) {
            break;
        }
        let d = cur.d();
        let mut lambda = cert.minimizing_lambda.expect("d >= 1 when the rank is finite");
        let j = lambda.iter().rposition(|&x| x != 0).expect("λ is nonzero");
        let mut polys = cur.polys().to_vec();
        polys.swap(j, d - 1);
        lambda.swap(j, d - 1);
        let s = fp.neg(fp.inv(lambda[d - 1])?);
        lambda.iter_mut().for_each(|x| *x = fp.mul(*x, s));
        cur = QuadTuple::new(cur.domain().clone(), polys)?;

        let b_lambda = cur.combine_forms(&lambda);
        let rad: Vec<Vec<u8>> = b_lambda.nullspace(fp);
        let k_coords = Subspace::span(fp, cur.k(), &rad.iter().cloned().map(FpVector::new).collect::<Vec<_>>())?;
        let k_sub = cur.domain().embed(&rad)?;
        let rad_codim = cur.k() - k_sub.dim();
        if rad_codim >= min_rank {
            return Err(violation(format!(
                "radical codimension {rad_codim} is not below {min_rank}"
            )));
        }
        let qk = restrict_unchecked(&cur, &k_sub)?;
        // on K the last form is the λ-combination of the others
        let kgrid = Grid::new(fp, qk.k());
        for i in 0..kgrid.size() {
            let vals = qk.eval_coords(kgrid.digits(i));
            let comb = (0..d - 1).fold(0u8, |acc, jj| fp.add(acc, fp.mul(lambda[jj], vals[jj])));
            if comb != vals[d - 1] {
                return Err(violation(format!("q_d is not the λ-combination on K at point {i}")));
            }
        }

        // per set: best K-coset, then the q_d constraint as a linear form on K
        let mut on_k = Vec::with_capacity(r);
        let mut ell = Vec::with_capacity(r);
        for a in sets {
            let w = max_level_density(a, &cur, opts)?;
            let cell = cell_of(&w);
            let (t, h, s) = best_coset(a, &cur, &cell, &k_coords, |_| true)?
                .ok_or_else(|| violation("no nonempty K-coset in the witness cell".into()))?;
            if ratio(h, s) < w.delta {
                return Err(violation("pigeonhole over K-cosets lost density".into()));
            }
            let kc = rewrite_cell(&cur, &cell, &t, &k_sub)?;
            let all: Vec<Vec<u8>> = (0..qk.k()).map(|i| FpVector::unit(qk.k(), i).coords).collect();
            if coset_counts(a, &qk, &kc, &vec![0; qk.k()], &all) != (h, s) {
                return Err(violation("rewritten K-cell has different counts".into()));
            }
            let mut form = kc.shifts[d - 1].clone();
            let mut b = kc.value[d - 1];
            for jj in 0..d - 1 {
                for (f, &c) in form.iter_mut().zip(&kc.shifts[jj]) {
                    *f = fp.sub(*f, fp.mul(lambda[jj], c));
                }
                b = fp.sub(b, fp.mul(lambda[jj], kc.value[jj]));
            }
            if form.iter().all(|&c| c == 0) && b != 0 {
                return Err(violation("nonempty cell forces an inconsistent linear constraint".into()));
            }
            on_k.push((kc, ratio(h, s)));
            ell.push((form, b));
        }

        // K̂ = K ∩ ⋂ ker ℓ_i, then the best K̂-coset inside each ℓ_i⁻¹(b_i)
        let forms = FpMatrix::from_rows(&ell.iter().map(|(f, _)| f.clone()).collect::<Vec<_>>())?;
        let khat_in_k = forms.nullspace(fp);
        let khat_coords = Subspace::span(fp, qk.k(), &khat_in_k.iter().cloned().map(FpVector::new).collect::<Vec<_>>())?;
        let khat_sub = k_sub.embed(&khat_in_k)?;
        let next = QuadTuple::new(khat_sub.clone(), restrict_unchecked(&qk, &khat_sub)?.polys()[..d - 1].to_vec())?;
        for (a, ((kc, rho), (form, b))) in sets.iter().zip(on_k.iter().zip(&ell)) {
            let (y, h, s) = best_coset(a, &qk, kc, &khat_coords, |y| fp.dot(form, y) == *b)?
                .ok_or_else(|| violation("no nonempty K̂-coset in the K-cell".into()))?;
            if ratio(h, s) < *rho {
                return Err(violation("pigeonhole over K̂-cosets lost density".into()));
            }
            let moved = rewrite_cell(&qk, kc, &y, &khat_sub)?;
            let dropped = Cell {
                x: moved.x,
                shifts: moved.shifts[..d - 1].to_vec(),
                value: moved.value[..d - 1].to_vec(),
            };
            let all: Vec<Vec<u8>> = (0..next.k()).map(|i| FpVector::unit(next.k(), i).coords).collect();
            if coset_counts(a, &next, &dropped, &vec![0; next.k()], &all) != (h, s) {
                return Err(violation("dropping q_d changed the K̂-cell".into()));
            }
        }
        steps.push(PartitionStep {
            d,
            rank: cert.rank.expect("finite"),
            lambda,
            swapped: j,
            radical_codim: rad_codim,
            slice_codim: k_sub.dim() - khat_sub.dim(),
        });
        cur = next;
    }

    let witnesses: Vec<DensityWitness> = sets
        .iter()
        .map(|a| max_level_density(a, &cur, opts))
        .collect::<Result<_>>()?;
    for (i, (w0, w1)) in initial.iter().zip(&witnesses).enumerate() {
        if w1.delta < w0.delta {
            return Err(violation(format!("density of set {i} dropped from {} to {}", w0.delta, w1.delta)));
        }
    }
    let rank_achieved = tuple_rank(&cur)?.rank;
    if !tuple_rank(&cur)?.at_least(min_rank) {
        return Err(violation("output rank below the target".into()));
    }
    let codim_increase = q.k() - cur.k();
    let cap = (min_rank + r).saturating_sub(1) * q.d();
    if codim_increase > cap {
        return Err(violation(format!("codimension {codim_increase} exceeds {cap}")));
    }
    if cur.d() > q.d() {
        return Err(violation("tuple length grew".into()));
    }
    Ok(PartitionResult {
        stats: PartitionStats {
            codim_increase,
            d_in: q.d(),
            d_out: cur.d(),
            rank_achieved,
            initial,
            witnesses,
            steps,
        },
        tuple: cur,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetClass {
    Sparse,
    DenseExpanding,
    DenseNonExpanding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: SetClass,
    pub density: DensityWitness,
    pub expansion_size: u64,
    pub zero_set_size: u64,
}

fn sparse_holds(delta: Rational64, alpha: Rational64) -> bool {
    delta < alpha
}

/// `E > (1−β) Z`, exactly.
fn expanding_holds(e: u64, z: u64, beta: Rational64) -> bool {
    Rational64::from_integer(e as i64) > (Rational64::from_integer(1) - beta) * Rational64::from_integer(z as i64)
}

fn check_unit_interval(name: &str, x: Rational64) -> Result<()> {
    if x <= Rational64::from_integer(0) || x > Rational64::from_integer(1) {
        return Err(Error::BadParams(format!("{name} = {x} must lie in (0, 1]")));
    }
    Ok(())
}

/// Sparse if `δ_Q(A) < α`; otherwise expanding if the expansion set has more
/// than `(1−β)|H ∩ Q⁻¹(0)|` points; otherwise dense and non-expanding.
pub fn classify(
    a: &PointSet,
    q: &QuadTuple,
    alpha: Rational64,
    beta: Rational64,
    opts: &DensityOptions,
) -> Result<Classification> {
    check_unit_interval("alpha", alpha)?;
    check_unit_interval("beta", beta)?;
    let density = max_level_density(a, q, opts)?;
    let zero_set_size = zero_set(q)?.len() as u64;
    let expansion_size = expansion_set(a, q)?.len() as u64;
    let class = if sparse_holds(density.delta, alpha) {
        SetClass::Sparse
    } else if expanding_holds(expansion_size, zero_set_size, beta) {
        SetClass::DenseExpanding
    } else {
        SetClass::DenseNonExpanding
    };
    Ok(Classification {
        class,
        density,
        expansion_size,
        zero_set_size,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncrementOptions {
    pub density: DensityOptions,
    /// Sample this many forms (with a seed) instead of trying them all.
    pub form_samples: Option<(usize, u64)>,
    pub budget: u128,
}

impl Default for IncrementOptions {
    fn default() -> Self {
        IncrementOptions {
            density: DensityOptions::default(),
            form_samples: None,
            budget: INCREMENT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Increment {
    pub q: QuadraticPoly,
    pub gain: Rational64,
    pub before: DensityWitness,
    pub after: DensityWitness,
}

/// Symmetric matrix from its upper-triangular entries, row by row.
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

/// The homogeneous `q` on H maximising `δ_{Q,q}(A)`, if it gains at least
/// `gain_threshold` over `δ_Q(A)`. Linear parts are not searched: the
/// density already maximises over linear shifts of every coordinate.
pub fn find_increment(
    a: &PointSet,
    q: &QuadTuple,
    gain_threshold: Rational64,
    opts: &IncrementOptions,
) -> Result<Option<Increment>> {
    if gain_threshold <= Rational64::from_integer(0) {
        return Err(Error::BadParams("the gain threshold must be positive".into()));
    }
    check_inputs(a, q)?;
    let fp = q.fp();
    let k = q.k();
    let tri = k * (k + 1) / 2;
    let form_grid = Grid::new(fp, tri);
    let candidates: Vec<usize> = match opts.form_samples {
        Some((samples, seed)) => {
            let mut rng = rng_from_seed(seed, 1);
            (0..samples).map(|_| rng.gen_range(0..form_grid.size())).collect()
        }
        None => (0..form_grid.size()).collect(),
    };
    let per_form = fp.power_count(k * (q.d() + 1) + q.domain().ambient_dim());
    budget_check("increment search", candidates.len() as u128 * per_form, opts.budget)?;
    let before = max_level_density(a, q, &opts.density)?;
    let results = par::map_slice(&candidates, |&c| {
        let b = symmetric_from_upper(k, form_grid.digits(c));
        let poly = QuadraticPoly::homogeneous(b);
        let after = max_level_density(a, &q.push(poly.clone())?, &opts.density)?;
        Ok((poly, after))
    });
    let mut best: Option<(QuadraticPoly, DensityWitness)> = None;
    for r in results {
        let (poly, after) = r?;
        if best.as_ref().map_or(true, |(_, w)| after.delta > w.delta) {
            best = Some((poly, after));
        }
    }
    let (poly, after) = best.expect("at least the zero form is tried");
    let gain = after.delta - before.delta;
    Ok((gain >= gain_threshold).then_some(Increment {
        q: poly,
        gain,
        before,
        after,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub rank: usize,
    pub gain_threshold: Rational64,
    pub max_stages: usize,
    pub density: DensityOptions,
    pub increment: IncrementOptions,
}

impl IterationConfig {
    pub fn new(alpha: Rational64, beta: Rational64, rank: usize) -> Self {
        IterationConfig {
            alpha,
            beta,
            rank,
            gain_threshold: Rational64::new(1, 1000),
            max_stages: 64,
            density: DensityOptions::default(),
            increment: IncrementOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StageAction {
    Certify,
    Increment {
        set: usize,
        q: Vec<Vec<u8>>,
        gain: Rational64,
        codim_increase: usize,
        d_out: usize,
    },
    NoIncrement {
        set: usize,
    },
}

/// One stage of the iteration, after the bookkeeping checks have passed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationState {
    pub m: usize,
    pub d: usize,
    pub dim: usize,
    pub codim: usize,
    pub rank: Option<usize>,
    pub classifications: Vec<SetClass>,
    pub densities: Vec<Rational64>,
    pub density_sum: Rational64,
    pub zero_set_size: u64,
    /// Whether `H ∩ Q⁻¹(0) = {0}`, in which case `dim H ≤ 2d` was checked.
    pub zero_set_trivial: bool,
    pub action: StageAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Sparse,
    Expanding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetVerdict {
    pub set: usize,
    pub verdict: Verdict,
    /// `|A ∩ H ∩ Q⁻¹(0)|`.
    pub level_hits: u64,
    pub expansion_size: u64,
}

/// A subspace H and homogeneous tuple Q on it such that every set is either
/// sparse or expanding on `H ∩ Q⁻¹(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: u8,
    pub n: usize,
    pub domain_basis: Vec<Vec<u8>>,
    /// Symmetric matrices in the domain basis coordinates.
    pub forms: Vec<Vec<Vec<u8>>>,
    pub alpha: Rational64,
    pub beta: Rational64,
    pub zero_set_size: u64,
    pub verdicts: Vec<SetVerdict>,
}

impl Certificate {
    pub fn tuple(&self) -> Result<QuadTuple> {
        let fp = Fp::new(self.p as i64)?;
        for row in self.domain_basis.iter().flatten() {
            fp.check(*row as i64)?;
        }
        let basis: Vec<FpVector> = self.domain_basis.iter().cloned().map(FpVector::new).collect();
        let h = Subspace::from_basis(fp, self.n, &basis)?;
        let polys = self
            .forms
            .iter()
            .map(|rows| {
                let m = FpMatrix::from_rows(rows)?;
                QuadraticPoly::new(fp, m.clone(), LinearForm::zero(m.rows()), 0)
            })
            .collect::<Result<Vec<_>>>()?;
        QuadTuple::new(h, polys)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub zero_set_size: u64,
    pub per_set: Vec<bool>,
    pub pass: bool,
}

/// Recomputes the sparse / expanding inequality for every set from scratch.
pub fn verify_certificate(cert: &Certificate, sets: &[PointSet]) -> Result<CertificateCheck> {
    let q = cert.tuple()?;
    if sets.len() != cert.verdicts.len() {
        return Err(Error::DimensionMismatch {
            expected: cert.verdicts.len(),
            got: sets.len(),
        });
    }
    let z = zero_set(&q)?;
    let zsize = z.len() as u64;
    let amb = Grid::new(q.fp(), q.domain().ambient_dim());
    let zero_amb: Vec<usize> = z
        .points()
        .iter()
        .map(|x| amb.index(&x.coords))
        .collect();
    let mut per_set = Vec::with_capacity(sets.len());
    for (a, v) in sets.iter().zip(&cert.verdicts) {
        let hits = zero_amb.iter().filter(|&&i| a.contains_index(i)).count() as u64;
        let e = expansion_set(a, &q)?.len() as u64;
        let sparse = Rational64::from_integer(hits as i64) < cert.alpha * Rational64::from_integer(zsize as i64);
        let expanding = expanding_holds(e, zsize, cert.beta);
        let claimed = match v.verdict {
            Verdict::Sparse => sparse,
            Verdict::Expanding => expanding,
        };
        per_set.push(claimed && hits == v.level_hits && e == v.expansion_size);
    }
    let pass = zsize == cert.zero_set_size && per_set.iter().all(|&b| b);
    Ok(CertificateCheck {
        zero_set_size: zsize,
        per_set,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRun {
    pub trace: Vec<IterationState>,
    pub certificate: Option<Certificate>,
}

fn certificate_for(q: &QuadTuple, sets: &[PointSet], cls: &[Classification], cfg: &IterationConfig) -> Result<Certificate> {
    let z = zero_set(q)?;
    let amb = Grid::new(q.fp(), q.domain().ambient_dim());
    let zero_amb: Vec<usize> = z.points().iter().map(|x| amb.index(&x.coords)).collect();
    let verdicts = sets
        .iter()
        .zip(cls)
        .enumerate()
        .map(|(i, (a, c))| {
            let level_hits = zero_amb.iter().filter(|&&j| a.contains_index(j)).count() as u64;
            let verdict = match c.class {
                SetClass::Sparse => Verdict::Sparse,
                SetClass::DenseExpanding => Verdict::Expanding,
                SetClass::DenseNonExpanding => unreachable!("only certified without dense non-expanding sets"),
            };
            SetVerdict {
                set: i,
                verdict,
                level_hits,
                expansion_size: c.expansion_size,
            }
        })
        .collect();
    Ok(Certificate {
        p: q.fp().p(),
        n: q.domain().ambient_dim(),
        domain_basis: q.domain().basis().iter().map(|b| b.coords.clone()).collect(),
        forms: q.polys().iter().map(|p| p.b.to_rows()).collect(),
        alpha: cfg.alpha,
        beta: cfg.beta,
        zero_set_size: z.len() as u64,
        verdicts,
    })
}

/// Runs the iteration until no set is dense and non-expanding, or no
/// increment of the required size can be found. Stage bookkeeping
/// (`d ≤ m`, rank, codimension, monotone density sum, and `dim H ≤ 2d`
/// whenever the zero set is trivial) is checked at every stage.
pub fn run_iteration(sets: &[PointSet], cfg: &IterationConfig) -> Result<IterationRun> {
    let first = sets.first().ok_or(Error::EmptySet)?;
    let fp = first.domain().fp();
    let n = first.domain().ambient_dim();
    let r = sets.len();
    let mut q = QuadTuple::empty(Subspace::full(fp, n));
    let mut trace = Vec::new();
    let mut prev_sum: Option<Rational64> = None;
    for m in 0.. {
        if m > cfg.max_stages {
            return Err(Error::BudgetExceeded {
                what: "iteration stages",
                requested: m as u128,
                budget: cfg.max_stages as u128,
            });
        }
        let rank = tuple_rank(&q)?;
        let codim = q.domain().codim();
        let codim_cap = (cfg.rank + r - 1) * m * (m + 1) / 2;
        if q.d() > m || !rank.at_least(cfg.rank) || codim > codim_cap {
            return Err(violation(format!(
                "stage {m}: d = {}, rank = {:?}, codim = {codim} (cap {codim_cap})",
                q.d(),
                rank.rank
            )));
        }
        let zero = zero_set(&q)?;
        let zero_set_trivial = zero.len() == 1;
        if zero_set_trivial && q.k() > 2 * q.d() {
            return Err(violation(format!(
                "stage {m}: zero set is trivial but dim H = {} > 2d = {}",
                q.k(),
                2 * q.d()
            )));
        }
        let cls: Vec<Classification> = sets
            .iter()
            .map(|a| classify(a, &q, cfg.alpha, cfg.beta, &cfg.density))
            .collect::<Result<_>>()?;
        let densities: Vec<Rational64> = cls.iter().map(|c| c.density.delta).collect();
        let density_sum = densities.iter().copied().sum::<Rational64>();
        if prev_sum.is_some_and(|s| density_sum < s) {
            return Err(violation(format!("stage {m}: density sum decreased")));
        }
        prev_sum = Some(density_sum);
        let mut state = IterationState {
            m,
            d: q.d(),
            dim: q.k(),
            codim,
            rank: rank.rank,
            classifications: cls.iter().map(|c| c.class).collect(),
            densities,
            density_sum,
            zero_set_size: zero.len() as u64,
            zero_set_trivial,
            action: StageAction::Certify,
        };
        let Some(target) = cls.iter().position(|c| c.class == SetClass::DenseNonExpanding) else {
            let cert = certificate_for(&q, sets, &cls, cfg)?;
            if !verify_certificate(&cert, sets)?.pass {
                return Err(violation("certificate failed recomputation".into()));
            }
            trace.push(state);
            return Ok(IterationRun {
                trace,
                certificate: Some(cert),
            });
        };
        let Some(inc) = find_increment(&sets[target], &q, cfg.gain_threshold, &cfg.increment)? else {
            state.action = StageAction::NoIncrement { set: target };
            trace.push(state);
            return Ok(IterationRun {
                trace,
                certificate: None,
            });
        };
        let grown = q.push(inc.q.clone())?;
        let part = high_rank_partition(&grown, cfg.rank, sets, &cfg.density)?;
        state.action = StageAction::Increment {
            set: target,
            q: inc.q.b.to_rows(),
            gain: inc.gain,
            codim_increase: part.stats.codim_increase,
            d_out: part.stats.d_out,
        };
        trace.push(state);
        q = part.tuple;
    }
    unreachable!("the stage loop only exits by returning")
}

/// [`run_iteration`], failing with `IncrementNotFound` when it stalls.
pub fn sparsity_expansion_iterate(sets: &[PointSet], cfg: &IterationConfig) -> Result<(IterationRun, Certificate)> {
    let run = run_iteration(sets, cfg)?;
    match run.certificate.clone() {
        Some(c) => Ok((run, c)),
        None => Err(Error::IncrementNotFound {
            threshold: cfg.gain_threshold.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_subset, random_tuple, rng_from_seed};

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    fn full(n: usize) -> Subspace {
        Subspace::full(f3(), n)
    }

    /// Literal maximum over every x, L and a via direct cell counting.
    fn density_oracle(a: &PointSet, q: &QuadTuple) -> Rational64 {
        let fp = q.fp();
        let (k, d) = (q.k(), q.d());
        let xs = full(q.domain().ambient_dim()).enumerate_points(1 << 20).unwrap();
        let lg = Grid::new(fp, k * d);
        let vg = Grid::new(fp, d);
        let mut best = Rational64::from_integer(0);
        for x in &xs {
            for li in 0..lg.size() {
                let dig = lg.coords(li);
                let shifts: Vec<LinearForm> = (0..d).map(|j| LinearForm::new(dig[j * k..(j + 1) * k].to_vec())).collect();
                for vi in 0..vg.size() {
                    let (h, s) = cell_counts(a, q, x, &shifts, &vg.coords(vi)).unwrap();
                    if s > 0 && ratio(h, s) > best {
                        best = ratio(h, s);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn trivial_densities() {
        let mut rng = rng_from_seed(1, 0);
        let q = random_tuple(&mut rng, full(3), 1, true);
        let opts = DensityOptions::default();
        assert_eq!(max_level_density(&PointSet::empty(full(3)), &q, &opts).unwrap().delta, 0.into());
        assert_eq!(max_level_density(&PointSet::full(full(3)), &q, &opts).unwrap().delta, 1.into());
    }

    #[test]
    fn empty_tuple_is_best_translate_of_h() {
        let mut rng = rng_from_seed(2, 0);
        let fp = f3();
        let h = Subspace::span(fp, 3, &[FpVector::new(vec![1, 2, 0]), FpVector::new(vec![0, 1, 1])]).unwrap();
        let q = QuadTuple::empty(h.clone());
        for _ in 0..5 {
            let a = random_subset(&mut rng, full(3), 0.4);
            let w = max_level_density(&a, &q, &DensityOptions::default()).unwrap();
            let hp = h.enumerate_points(100).unwrap();
            let mut best = 0;
            for x in full(3).enumerate_points(100).unwrap() {
                let c = hp.iter().filter(|y| a.points().contains(&y.add(fp, &x))).count();
                best = best.max(c);
            }
            assert_eq!(w.delta, Rational64::new(best as i64, 9));
        }
    }

    #[test]
    fn exhaustive_matches_literal_and_oracle() {
        let mut rng = rng_from_seed(3, 0);
        let fp = f3();
        let h = Subspace::span(fp, 3, &[FpVector::new(vec![1, 0, 1]), FpVector::new(vec![0, 1, 2])]).unwrap();
        for _ in 0..4 {
            let q = random_tuple(&mut rng, h.clone(), 1, true);
            let a = random_subset(&mut rng, full(3), 0.5);
            let e = max_level_density(&a, &q, &DensityOptions::default()).unwrap();
            let lit = DensityOptions {
                mode: DensityMode::Literal,
                budget: DENSITY_BUDGET,
            };
            let l = max_level_density(&a, &q, &lit).unwrap();
            assert_eq!(e.delta, l.delta);
            assert_eq!(e.delta, density_oracle(&a, &q));
            assert!(verify_witness(&a, &q, &e).unwrap());
            assert!(verify_witness(&a, &q, &l).unwrap());
        }
    }

    #[test]
    fn sampled_is_a_flagged_lower_bound() {
        let mut rng = rng_from_seed(4, 0);
        let q = random_tuple(&mut rng, full(3), 2, true);
        let a = random_subset(&mut rng, full(3), 0.5);
        let s = DensityOptions {
            mode: DensityMode::Sampled { samples: 20, seed: 9 },
            budget: DENSITY_BUDGET,
        };
        let ws = max_level_density(&a, &q, &s).unwrap();
        let we = max_level_density(&a, &q, &DensityOptions::default()).unwrap();
        assert!(ws.sampled && !we.sampled);
        assert!(ws.delta <= we.delta);
        assert!(verify_witness(&a, &q, &ws).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let mut rng = rng_from_seed(5, 0);
        let q = random_tuple(&mut rng, full(3), 2, true);
        let a = random_subset(&mut rng, full(3), 0.5);
        let tiny = DensityOptions {
            mode: DensityMode::Exhaustive,
            budget: 100,
        };
        assert!(matches!(max_level_density(&a, &q, &tiny), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn preservation_examples() {
        let mut rng = rng_from_seed(6, 0);
        let q0 = QuadTuple::empty(full(3));
        let zero = QuadraticPoly::zero(3);
        let a = random_subset(&mut rng, full(3), 0.3);
        let c = check_density_preservation(&a, &q0, &zero, &DensityOptions::default()).unwrap();
        assert!(c.pass);
        // the new coordinate still carries a free linear shift, so the zero form
        // can only help: its cells include affine hyperplanes
        assert_eq!(c.before.delta, Rational64::new(a.len() as i64, 27));
        let planes = PointSet::from_mask(full(3), (0..27).map(|i| i % 3 == 0).collect()).unwrap();
        let c = check_density_preservation(&planes, &q0, &zero, &DensityOptions::default()).unwrap();
        assert_eq!((c.before.delta, c.after.delta), (Rational64::new(1, 3), 1.into()));
        let single = PointSet::from_points(full(3), &[FpVector::new(vec![1, 1, 0])]).unwrap();
        for _ in 0..5 {
            let q = random_tuple(&mut rng, full(3), 1, true);
            let c = check_density_preservation(&single, &q0, &q.polys()[0], &DensityOptions::default()).unwrap();
            assert!(c.pass);
            assert_eq!(c.after.delta, Rational64::new(1, c.after.cell_size as i64));
        }
    }

    #[test]
    fn partition_identity_when_rank_is_high() {
        let mut rng = rng_from_seed(7, 0);
        let b = FpMatrix::identity(3);
        let q = QuadTuple::new(full(3), vec![QuadraticPoly::homogeneous(b)]).unwrap();
        let a = random_subset(&mut rng, full(3), 0.5);
        let out = high_rank_partition(&q, 3, &[a], &DensityOptions::default()).unwrap();
        assert_eq!(out.tuple, q);
        assert!(out.stats.steps.is_empty());
    }

    #[test]
    fn partition_of_zero_form() {
        let mut rng = rng_from_seed(8, 0);
        let q = QuadTuple::new(full(3), vec![QuadraticPoly::zero(3)]).unwrap();
        let a = random_subset(&mut rng, full(3), 0.5);
        let before = max_level_density(&a, &q, &DensityOptions::default()).unwrap();
        let out = high_rank_partition(&q, 1, &[a.clone()], &DensityOptions::default()).unwrap();
        assert_eq!(out.stats.d_out, 0);
        assert_eq!(out.stats.steps[0].radical_codim, 0);
        assert!(out.stats.codim_increase <= 1);
        assert!(out.stats.witnesses[0].delta >= before.delta);
        assert!(verify_witness(&a, &out.tuple, &out.stats.witnesses[0]).unwrap());
    }

    #[test]
    fn partition_of_dependent_pair() {
        let fp = f3();
        for seed in 0..4 {
            let mut rng = rng_from_seed(9, seed);
            let q1 = random_tuple(&mut rng, Subspace::full(fp, 4), 1, true).polys()[0].clone();
            let q = QuadTuple::new(Subspace::full(fp, 4), vec![q1.clone(), q1]).unwrap();
            let a = random_subset(&mut rng, Subspace::full(fp, 4), 0.4);
            let out = high_rank_partition(&q, 2, &[a.clone()], &DensityOptions::default()).unwrap();
            assert!(out.stats.d_out <= 2);
            assert!(out.stats.codim_increase <= 2 * 2);
            assert!(tuple_rank(&out.tuple).unwrap().at_least(2));
            assert!(out.stats.witnesses[0].delta >= out.stats.initial[0].delta);
        }
    }

    #[test]
    fn classify_trivial() {
        let mut rng = rng_from_seed(10, 0);
        let q = random_tuple(&mut rng, full(3), 1, true);
        let quarter = Rational64::new(1, 4);
        let o = DensityOptions::default();
        assert_eq!(classify(&PointSet::empty(full(3)), &q, quarter, quarter, &o).unwrap().class, SetClass::Sparse);
        assert_eq!(
            classify(&PointSet::full(full(3)), &q, quarter, quarter, &o).unwrap().class,
            SetClass::DenseExpanding
        );
    }

    #[test]
    fn increment_on_planted_level_set() {
        let fp = f3();
        let mut b = FpMatrix::zeros(3, 3);
        b.set(0, 0, 1);
        b.set(1, 2, 1);
        b.set(2, 1, 1);
        let planted = QuadraticPoly::homogeneous(b);
        let mask = full(3)
            .enumerate_points(100)
            .unwrap()
            .iter()
            .map(|x| planted.eval(fp, &x.coords) == 0)
            .collect();
        let a = PointSet::from_mask(full(3), mask).unwrap();
        let q0 = QuadTuple::empty(full(3));
        let inc = find_increment(&a, &q0, Rational64::new(1, 100), &IncrementOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(inc.after.delta, 1.into());
        let whole = find_increment(&PointSet::full(full(3)), &q0, Rational64::new(1, 100), &IncrementOptions::default()).unwrap();
        assert!(whole.is_none());
    }

    #[test]
    fn iteration_stops_immediately_on_trivial_sets() {
        let q = Rational64::new(1, 4);
        let cfg = IterationConfig::new(q, q, 1);
        let (run, cert) = sparsity_expansion_iterate(&[PointSet::empty(full(3))], &cfg).unwrap();
        assert_eq!(run.trace.len(), 1);
        assert_eq!(cert.verdicts[0].verdict, Verdict::Sparse);
        let (run, cert) = sparsity_expansion_iterate(&[PointSet::full(full(3))], &cfg).unwrap();
        assert_eq!(run.trace[0].m, 0);
        assert_eq!(cert.verdicts[0].verdict, Verdict::Expanding);
        assert!(verify_certificate(&cert, &[PointSet::full(full(3))]).unwrap().pass);
    }
}
