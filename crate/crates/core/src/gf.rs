//! Exact arithmetic and linear algebra over the prime fields F_3, F_5, F_7.
//!
//! Vectors and matrices store reduced residues as bytes and take the field as
//! an explicit [`Fp`] handle. Subspaces carry their field and keep their basis
//! in reduced row-echelon form, so two subspaces are equal exactly when their
//! representations are equal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{budget_check, Error, Result};

/// Handle for the prime field F_p with p in {3, 5, 7}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Fp {
    p: u8,
}

impl TryFrom<i64> for Fp {
    type Error = Error;
    fn try_from(p: i64) -> Result<Self> {
        Fp::new(p)
    }
}

impl From<Fp> for i64 {
    fn from(fp: Fp) -> i64 {
        fp.p as i64
    }
}

impl Fp {
    pub fn new(p: i64) -> Result<Self> {
        match p {
            3 | 5 | 7 => Ok(Fp { p: p as u8 }),
            _ => Err(Error::UnsupportedPrime(p)),
        }
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn order(self) -> usize {
        self.p as usize
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn inv(self, a: u8) -> Result<u8> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p as u32 - 2))
    }

    pub fn pow(self, a: u8, mut e: u32) -> u8 {
        let mut base = a % self.p;
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduces an arbitrary integer into [0, p).
    #[inline]
    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    /// Accepts `v` only if it already lies in [0, p).
    pub fn check(self, v: i64) -> Result<u8> {
        if (0..self.p as i64).contains(&v) {
            Ok(v as u8)
        } else {
            Err(Error::OutOfRange { value: v, p: self.p })
        }
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        0..self.p
    }

    pub fn dot(self, a: &[u8], b: &[u8]) -> u8 {
        debug_assert_eq!(a.len(), b.len());
        let s: u32 = a.iter().zip(b).map(|(&x, &y)| x as u32 * y as u32).sum();
        (s % self.p as u32) as u8
    }

    /// `p^e` as an exact integer.
    pub fn power_count(self, e: usize) -> u128 {
        (self.p as u128).pow(e as u32)
    }
}

/// A single residue tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u8,
    field: Fp,
}

impl FpScalar {
    pub fn new(field: Fp, value: i64) -> Self {
        FpScalar {
            value: field.reduce(value),
            field,
        }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn field(self) -> Fp {
        self.field
    }

    pub fn inv(self) -> Result<FpScalar> {
        fp_inv(self)
    }
}

impl std::ops::Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        FpScalar {
            value: self.field.add(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        FpScalar {
            value: self.field.sub(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        FpScalar {
            value: self.field.mul(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl std::ops::Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

pub fn fp_inv(a: FpScalar) -> Result<FpScalar> {
    Ok(FpScalar {
        value: a.field.inv(a.value)?,
        field: a.field,
    })
}

/// A point of F_p^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FpVector {
    pub coords: Vec<u8>,
}

impl FpVector {
    pub fn new(coords: Vec<u8>) -> Self {
        FpVector { coords }
    }

    pub fn zero(n: usize) -> Self {
        FpVector { coords: vec![0; n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut coords = vec![0; n];
        coords[i] = 1;
        FpVector { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, fp: Fp, other: &FpVector) -> FpVector {
        FpVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| fp.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, fp: Fp, other: &FpVector) -> FpVector {
        FpVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| fp.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, fp: Fp, c: u8) -> FpVector {
        FpVector {
            coords: self.coords.iter().map(|&a| fp.mul(a, c)).collect(),
        }
    }
}

impl From<Vec<u8>> for FpVector {
    fn from(coords: Vec<u8>) -> Self {
        FpVector { coords }
    }
}

/// An element of the dual space, acting by `x -> sum coeffs_i * x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    pub coeffs: Vec<u8>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<u8>) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn apply(&self, fp: Fp, x: &[u8]) -> u8 {
        fp.dot(&self.coeffs, x)
    }

    pub fn add(&self, fp: Fp, other: &LinearForm) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| fp.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, fp: Fp, c: u8) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|&a| fp.mul(a, c)).collect(),
        }
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FpMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(FpMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix with explicit shape; needed when `rows == 0`.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(FpMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, fp: Fp, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = FpMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = 0u32;
                for t in 0..self.cols {
                    s += self.get(i, t) as u32 * other.get(t, j) as u32;
                }
                out.set(i, j, (s % fp.p() as u32) as u8);
            }
        }
        out
    }

    pub fn mul_vec(&self, fp: Fp, x: &[u8]) -> Vec<u8> {
        (0..self.rows).map(|i| fp.dot(self.row(i), x)).collect()
    }

    /// `x^T M` as a row vector.
    pub fn vec_mul(&self, fp: Fp, x: &[u8]) -> Vec<u8> {
        (0..self.cols)
            .map(|j| {
                let s: u32 = (0..self.rows)
                    .map(|i| x[i] as u32 * self.get(i, j) as u32)
                    .sum();
                (s % fp.p() as u32) as u8
            })
            .collect()
    }

    /// The bilinear value `x^T M y`.
    pub fn bilinear(&self, fp: Fp, x: &[u8], y: &[u8]) -> u8 {
        let mut s = 0u32;
        for i in 0..self.rows {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0u32;
            for j in 0..self.cols {
                row += self.get(i, j) as u32 * y[j] as u32;
            }
            s += x[i] as u32 * (row % fp.p() as u32);
        }
        (s % fp.p() as u32) as u8
    }

    pub fn add(&self, fp: Fp, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| fp.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, fp: Fp, c: u8) -> FpMatrix {
        FpMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| fp.mul(a, c)).collect(),
        }
    }

    /// Reduced row-echelon form and the pivot column of each nonzero row.
    pub fn rref(&self, fp: Fp) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = fp.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = fp.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = fp.sub(m.get(i, j), fp.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, fp: Fp) -> usize {
        rank(fp, self)
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn nullspace(&self, fp: Fp) -> Vec<Vec<u8>> {
        let (r, pivots) = self.rref(fp);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u8; self.cols];
                x[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = fp.neg(r.get(row, f));
                }
                x
            })
            .collect()
    }

    /// One solution of `M x = b`, if any.
    pub fn solve(&self, fp: Fp, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(fp);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }
}

/// Row rank by Gaussian elimination.
pub fn rank(fp: Fp, m: &FpMatrix) -> usize {
    m.rref(fp).1.len()
}

/// Rank by incremental insertion of rows into an echelon basis.
///
/// Deliberately a separate routine from [`rank`] so the two can be
/// cross-checked.
pub fn rank_incremental(fp: Fp, rows: &[Vec<u8>]) -> usize {
    // basis rows keyed by their leading column, each normalized to lead with 1
    let mut basis: Vec<(usize, Vec<u8>)> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        for (lead, b) in &basis {
            let c = v[*lead];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = fp.sub(*x, fp.mul(c, y));
                }
            }
        }
        if let Some(lead) = v.iter().position(|&c| c != 0) {
            let inv = fp.inv(v[lead]).expect("nonzero lead");
            for x in v.iter_mut() {
                *x = fp.mul(*x, inv);
            }
            // keep earlier basis rows reduced against the new lead
            for (_, b) in basis.iter_mut() {
                let c = b[lead];
                if c != 0 {
                    for (x, &y) in b.iter_mut().zip(&v) {
                        *x = fp.sub(*x, fp.mul(c, y));
                    }
                }
            }
            basis.push((lead, v));
        }
    }
    basis.len()
}

/// `(M + M^T) / 2`, the symmetric matrix with the same quadratic values.
pub fn symmetrize(fp: Fp, m: &FpMatrix) -> FpMatrix {
    assert_eq!(m.rows, m.cols, "symmetrize needs a square matrix");
    let half = fp.inv(2).expect("p is odd");
    let t = m.transpose();
    m.add(fp, &t).scale(fp, half)
}

/// A linear subspace of F_p^n, or a coset of one when `offset` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    fp: Fp,
    ambient_dim: usize,
    basis: Vec<FpVector>,
    pivots: Vec<usize>,
    offset: Option<FpVector>,
}

impl Subspace {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(fp: Fp, ambient_dim: usize, vectors: &[FpVector]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        let m = FpMatrix::from_flat(
            vectors.len(),
            ambient_dim,
            vectors.iter().flat_map(|v| v.coords.iter().copied()).collect(),
        )?;
        let (r, pivots) = m.rref(fp);
        let basis = (0..pivots.len())
            .map(|i| FpVector::new(r.row(i).to_vec()))
            .collect();
        Ok(Subspace {
            fp,
            ambient_dim,
            basis,
            pivots,
            offset: None,
        })
    }

    /// Span of vectors that must be linearly independent.
    pub fn from_basis(fp: Fp, ambient_dim: usize, vectors: &[FpVector]) -> Result<Self> {
        let s = Subspace::span(fp, ambient_dim, vectors)?;
        if s.dim() != vectors.len() {
            return Err(Error::NotIndependent);
        }
        Ok(s)
    }

    pub fn full(fp: Fp, n: usize) -> Self {
        Subspace {
            fp,
            ambient_dim: n,
            basis: (0..n).map(|i| FpVector::unit(n, i)).collect(),
            pivots: (0..n).collect(),
            offset: None,
        }
    }

    pub fn zero(fp: Fp, n: usize) -> Self {
        Subspace {
            fp,
            ambient_dim: n,
            basis: Vec::new(),
            pivots: Vec::new(),
            offset: None,
        }
    }

    /// The coset `self + t`, with the offset reduced to a canonical representative.
    pub fn with_offset(&self, t: &FpVector) -> Result<Self> {
        if t.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: t.len(),
            });
        }
        let fp = self.fp;
        let mut rep = t.clone();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = rep.coords[pc];
            if c != 0 {
                rep = rep.sub(fp, &b.scale(fp, c));
            }
        }
        let mut s = self.linear_part();
        s.offset = if rep.is_zero() { None } else { Some(rep) };
        Ok(s)
    }

    pub fn linear_part(&self) -> Self {
        Subspace {
            offset: None,
            ..self.clone()
        }
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn offset(&self) -> Option<&FpVector> {
        self.offset.as_ref()
    }

    pub fn is_coset(&self) -> bool {
        self.offset.is_some()
    }

    /// `p^dim` as an exact integer.
    pub fn size(&self) -> u128 {
        self.fp.power_count(self.dim())
    }

    /// Rows are the basis vectors.
    pub fn basis_matrix(&self) -> FpMatrix {
        FpMatrix::from_flat(
            self.dim(),
            self.ambient_dim,
            self.basis.iter().flat_map(|v| v.coords.iter().copied()).collect(),
        )
        .expect("basis shape is consistent")
    }

    /// The point `offset + sum coords_i * basis_i`.
    pub fn point(&self, coords: &[u8]) -> FpVector {
        let fp = self.fp;
        let mut out = self
            .offset
            .clone()
            .unwrap_or_else(|| FpVector::zero(self.ambient_dim));
        for (b, &c) in self.basis.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (o, &bv) in out.coords.iter_mut().zip(&b.coords) {
                *o = fp.add(*o, fp.mul(c, bv));
            }
        }
        out
    }

    /// Coordinates of `x` relative to the (offset and) basis, if `x` lies in the set.
    pub fn coords_of(&self, x: &FpVector) -> Option<Vec<u8>> {
        if x.len() != self.ambient_dim {
            return None;
        }
        let rel = match &self.offset {
            Some(t) => x.sub(self.fp, t),
            None => x.clone(),
        };
        // RREF basis: the coordinate along basis_i is the entry at pivot_i
        let coords: Vec<u8> = self.pivots.iter().map(|&pc| rel.coords[pc]).collect();
        let back = self.linear_part().point(&coords);
        (back == rel).then_some(coords)
    }

    pub fn contains(&self, x: &FpVector) -> bool {
        self.coords_of(x).is_some()
    }

    /// Linear subspace containment (offsets ignored).
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.linear_part().contains(b))
    }

    /// All points in lexicographic order of their coordinates, first coordinate most significant.
    pub fn enumerate_points(&self, budget: u128) -> Result<Vec<FpVector>> {
        budget_check("subspace enumeration", self.size(), budget)?;
        let grid = Grid::new(self.fp, self.dim());
        Ok((0..grid.size())
            .map(|i| self.point(&grid.coords(i)))
            .collect())
    }

    /// One representative per coset of the linear part, in lexicographic order.
    ///
    /// These are the points vanishing at every pivot column of the echelon basis.
    pub fn coset_representatives(&self, budget: u128) -> Result<Vec<FpVector>> {
        let free: Vec<usize> = (0..self.ambient_dim)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        budget_check("coset representatives", self.fp.power_count(free.len()), budget)?;
        let grid = Grid::new(self.fp, free.len());
        Ok((0..grid.size())
            .map(|i| {
                let mut v = vec![0u8; self.ambient_dim];
                for (&c, &x) in free.iter().zip(grid.digits(i)) {
                    v[c] = x;
                }
                FpVector::new(v)
            })
            .collect())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x in self ∩ other  <=>  annihilators of both vanish on x
        let mut forms: Vec<LinearForm> = annihilator(self)
            .basis
            .iter()
            .map(|v| LinearForm::new(v.coords.clone()))
            .collect();
        forms.extend(
            annihilator(other)
                .basis
                .iter()
                .map(|v| LinearForm::new(v.coords.clone())),
        );
        kernel(&forms, &Subspace::full(self.fp, self.ambient_dim))
    }

    /// The subspace spanned by the given vectors expressed in this subspace's
    /// coordinates, mapped back to the ambient space.
    pub fn embed(&self, coord_vectors: &[Vec<u8>]) -> Result<Subspace> {
        let lin = self.linear_part();
        let vs: Vec<FpVector> = coord_vectors.iter().map(|c| lin.point(c)).collect();
        Subspace::span(self.fp, self.ambient_dim, &vs)
    }

    /// Matrix whose columns are the coordinates of `sub`'s basis vectors in this basis.
    pub fn coordinate_matrix(&self, sub: &Subspace) -> Result<FpMatrix> {
        let lin = self.linear_part();
        let mut m = FpMatrix::zeros(self.dim(), sub.dim());
        for (j, b) in sub.basis.iter().enumerate() {
            let c = lin.coords_of(b).ok_or(Error::NotInDomain)?;
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

/// `{l in (F_p^n)^* : l v = 0 for all v in V}`, with covectors stored as vectors.
pub fn annihilator(v: &Subspace) -> Subspace {
    let fp = v.fp;
    let vs: Vec<FpVector> = v
        .basis_matrix()
        .nullspace(fp)
        .into_iter()
        .map(FpVector::new)
        .collect();
    Subspace::span(fp, v.ambient_dim, &vs).expect("nullspace vectors have ambient length")
}

/// `{x in V : l x = 0 for every form}`; offsets of `V` are ignored.
pub fn kernel(forms: &[LinearForm], v: &Subspace) -> Subspace {
    let fp = v.fp;
    let lin = v.linear_part();
    if forms.is_empty() {
        return lin;
    }
    // restrict each form to V in V's coordinates
    let restricted = FpMatrix::from_flat(
        forms.len(),
        v.dim(),
        forms
            .iter()
            .flat_map(|f| lin.basis.iter().map(move |b| f.apply(fp, &b.coords)))
            .collect(),
    )
    .expect("shape");
    let vs: Vec<FpVector> = restricted
        .nullspace(fp)
        .iter()
        .map(|c| lin.point(c))
        .collect();
    Subspace::span(fp, v.ambient_dim, &vs).expect("kernel vectors have ambient length")
}

/// Index arithmetic on F_p^k with points numbered lexicographically,
/// first coordinate most significant.
#[derive(Clone, Debug)]
pub struct Grid {
    fp: Fp,
    dim: usize,
    size: usize,
    strides: Vec<usize>,
    digits: Vec<u8>,
}

impl Grid {
    pub fn new(fp: Fp, dim: usize) -> Self {
        let p = fp.order();
        let size = p.pow(dim as u32);
        let strides: Vec<usize> = (0..dim).map(|t| p.pow((dim - 1 - t) as u32)).collect();
        let mut digits = vec![0u8; size * dim];
        for i in 0..size {
            for t in 0..dim {
                digits[i * dim + t] = ((i / strides[t]) % p) as u8;
            }
        }
        Grid {
            fp,
            dim,
            size,
            strides,
            digits,
        }
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    #[inline]
    pub fn digits(&self, i: usize) -> &[u8] {
        &self.digits[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self, i: usize) -> Vec<u8> {
        self.digits(i).to_vec()
    }

    #[inline]
    pub fn index(&self, coords: &[u8]) -> usize {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.digits(i), self.digits(j));
        let mut out = 0;
        for t in 0..self.dim {
            out += self.fp.add(a[t], b[t]) as usize * self.strides[t];
        }
        out
    }

    #[inline]
    pub fn sub(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.digits(i), self.digits(j));
        let mut out = 0;
        for t in 0..self.dim {
            out += self.fp.sub(a[t], b[t]) as usize * self.strides[t];
        }
        out
    }

    #[inline]
    pub fn neg(&self, i: usize) -> usize {
        let a = self.digits(i);
        let mut out = 0;
        for t in 0..self.dim {
            out += self.fp.neg(a[t]) as usize * self.strides[t];
        }
        out
    }

    #[inline]
    pub fn scale(&self, c: u8, i: usize) -> usize {
        let a = self.digits(i);
        let mut out = 0;
        for t in 0..self.dim {
            out += self.fp.mul(c, a[t]) as usize * self.strides[t];
        }
        out
    }

    /// The pairing `l . x` of two indices.
    #[inline]
    pub fn dot(&self, i: usize, j: usize) -> u8 {
        self.fp.dot(self.digits(i), self.digits(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn inverses() {
        let f7 = Fp::new(7).unwrap();
        assert_eq!(fp_inv(FpScalar::new(f3(), 2)).unwrap().value(), 2);
        assert_eq!(fp_inv(FpScalar::new(f7, 1)).unwrap().value(), 1);
        assert_eq!(fp_inv(FpScalar::new(f7, 3)).unwrap().value(), 5);
        assert_eq!(fp_inv(FpScalar::new(f7, 0)), Err(Error::ZeroInverse));
        for p in [3, 5, 7] {
            let fp = Fp::new(p).unwrap();
            for a in 1..fp.p() {
                assert_eq!(fp.mul(a, fp.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn unsupported_primes() {
        assert!(Fp::new(2).is_err());
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(11).is_err());
    }

    #[test]
    fn rank_examples() {
        let fp = f3();
        assert_eq!(FpMatrix::identity(3).rank(fp), 3);
        assert_eq!(FpMatrix::zeros(3, 4).rank(fp), 0);
        let m = FpMatrix::from_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        // [[1,2],[2,4]] reduced mod 3
        assert_eq!(m.rank(fp), 1);
    }

    #[test]
    fn annihilator_examples() {
        let fp = f3();
        assert_eq!(annihilator(&Subspace::full(fp, 3)).dim(), 0);
        assert_eq!(annihilator(&Subspace::zero(fp, 3)), Subspace::full(fp, 3));
        let v = Subspace::span(fp, 2, &[FpVector::new(vec![1, 0])]).unwrap();
        let ann = annihilator(&v);
        assert_eq!(ann.basis(), &[FpVector::new(vec![0, 1])]);
    }

    #[test]
    fn kernel_examples() {
        let fp = f3();
        let full = Subspace::full(fp, 3);
        assert_eq!(kernel(&[], &full), full);
        let all: Vec<LinearForm> = (0..3)
            .map(|i| LinearForm::new(FpVector::unit(3, i).coords))
            .collect();
        assert_eq!(kernel(&all, &full).dim(), 0);
        let k = kernel(&[LinearForm::new(vec![1, 1, 2])], &full);
        assert_eq!(k.dim(), 2);
        for b in k.basis() {
            assert_eq!(LinearForm::new(vec![1, 1, 2]).apply(fp, &b.coords), 0);
        }
    }

    #[test]
    fn symmetrize_examples() {
        let fp = f3();
        let m = FpMatrix::from_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let s = symmetrize(fp, &m);
        assert_eq!(s.to_rows(), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(symmetrize(fp, &s), s);
    }

    #[test]
    fn enumeration_examples() {
        let fp = f3();
        let t = FpVector::new(vec![1, 2]);
        let pt = Subspace::zero(fp, 2).with_offset(&t).unwrap();
        assert_eq!(pt.enumerate_points(10).unwrap(), vec![t]);
        let line = Subspace::full(fp, 1).enumerate_points(10).unwrap();
        assert_eq!(line, vec![FpVector::new(vec![0]), FpVector::new(vec![1]), FpVector::new(vec![2])]);
        let diag = Subspace::span(fp, 2, &[FpVector::new(vec![1, 1])]).unwrap();
        assert_eq!(
            diag.enumerate_points(10).unwrap(),
            vec![FpVector::new(vec![0, 0]), FpVector::new(vec![1, 1]), FpVector::new(vec![2, 2])]
        );
        assert!(matches!(
            Subspace::full(fp, 4).enumerate_points(80),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn coset_offsets_are_canonical() {
        let fp = f3();
        let v = Subspace::span(fp, 2, &[FpVector::new(vec![1, 1])]).unwrap();
        let a = v.with_offset(&FpVector::new(vec![1, 2])).unwrap();
        let b = v.with_offset(&FpVector::new(vec![2, 0])).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&FpVector::new(vec![0, 1])));
        assert!(!a.contains(&FpVector::new(vec![0, 0])));
    }

    #[test]
    fn grid_arithmetic() {
        let fp = Fp::new(5).unwrap();
        let g = Grid::new(fp, 3);
        for i in (0..g.size()).step_by(7) {
            for j in (0..g.size()).step_by(11) {
                let s = g.add(i, j);
                assert_eq!(g.sub(s, j), i);
                assert_eq!(g.add(i, g.neg(i)), 0);
                let expect: Vec<u8> = g
                    .digits(i)
                    .iter()
                    .zip(g.digits(j))
                    .map(|(&a, &b)| fp.add(a, b))
                    .collect();
                assert_eq!(g.coords(s), expect);
            }
        }
        assert_eq!(g.index(&[1, 0, 0]), 25);
    }

    #[test]
    fn solve_and_nullspace() {
        let fp = Fp::new(5).unwrap();
        let m = FpMatrix::from_rows(&[vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]).unwrap();
        let x = m.solve(fp, &[1, 1, 1, 1]).unwrap();
        assert_eq!(x, vec![1, 0]);
        let brauer = FpMatrix::from_rows(&[vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]).unwrap();
        assert!(brauer.solve(fp, &[1, 1, 1, 1]).is_none());
        for v in m.transpose().nullspace(fp) {
            assert!(m.transpose().mul_vec(fp, &v).iter().all(|&c| c == 0));
        }
    }
}
