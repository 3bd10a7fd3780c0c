//! JSON instance files.
//!
//! Field entries are written as integers in `[0, p)`; anything else is
//! rejected on load rather than reduced. Polynomials on a subspace H are
//! written in H's basis coordinates. A missing `domain_basis` means the whole
//! space.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qfa_core::brauer::Coloring;
use qfa_core::complexity2::LinearSystem;
use qfa_core::gf::{Fp, FpMatrix, FpVector, LinearForm, Subspace};
use qfa_core::harmonic::{DenseFunction, PointSet};
use qfa_core::quadsets::{QuadTuple, QuadraticPoly};

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn field(p: i64) -> Result<Fp> {
    Ok(Fp::new(p)?)
}

fn entries(fp: Fp, xs: &[i64]) -> Result<Vec<u8>> {
    Ok(xs.iter().map(|&x| fp.check(x)).collect::<qfa_core::Result<Vec<u8>>>()?)
}

fn rows_of(fp: Fp, rows: &[Vec<i64>]) -> Result<Vec<Vec<u8>>> {
    rows.iter().map(|r| entries(fp, r)).collect()
}

fn widen(xs: &[u8]) -> Vec<i64> {
    xs.iter().map(|&x| x as i64).collect()
}

fn widen_rows(rows: &[Vec<u8>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| widen(r)).collect()
}

fn domain_of(fp: Fp, n: usize, basis: &Option<Vec<Vec<i64>>>) -> Result<Subspace> {
    match basis {
        None => Ok(Subspace::full(fp, n)),
        Some(rows) => {
            let vs: Vec<FpVector> = rows_of(fp, rows)?.into_iter().map(FpVector::new).collect();
            Ok(Subspace::from_basis(fp, n, &vs)?)
        }
    }
}

fn basis_of(h: &Subspace) -> Option<Vec<Vec<i64>>> {
    if h.dim() == h.ambient_dim() {
        None
    } else {
        Some(h.basis().iter().map(|b| widen(&b.coords)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyFile {
    pub b: Vec<Vec<i64>>,
    #[serde(default)]
    pub l: Option<Vec<i64>>,
    #[serde(default)]
    pub c: i64,
}

impl PolyFile {
    pub fn from_poly(q: &QuadraticPoly) -> Self {
        PolyFile {
            b: widen_rows(&q.b.to_rows()),
            l: Some(widen(&q.l.coeffs)),
            c: q.c as i64,
        }
    }

    pub fn to_poly(&self, fp: Fp, k: usize) -> Result<QuadraticPoly> {
        let b = FpMatrix::from_rows(&rows_of(fp, &self.b)?)?;
        if b.rows() != k || b.cols() != k {
            bail!("quadratic form is {}x{}, expected {k}x{k}", b.rows(), b.cols());
        }
        if !b.is_symmetric() {
            bail!("quadratic form matrix must be symmetric");
        }
        let l = match &self.l {
            Some(l) => LinearForm::new(entries(fp, l)?),
            None => LinearForm::zero(k),
        };
        Ok(QuadraticPoly::new(fp, b, l, fp.check(self.c)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub p: i64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_basis: Option<Vec<Vec<i64>>>,
    pub polys: Vec<PolyFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl TupleFile {
    pub fn from_tuple(q: &QuadTuple) -> Self {
        TupleFile {
            p: q.fp().p() as i64,
            n: q.domain().ambient_dim(),
            domain_basis: basis_of(q.domain()),
            polys: q.polys().iter().map(PolyFile::from_poly).collect(),
            metadata: None,
        }
    }

    pub fn to_tuple(&self) -> Result<QuadTuple> {
        let fp = field(self.p)?;
        let h = domain_of(fp, self.n, &self.domain_basis)?;
        let polys = self
            .polys
            .iter()
            .map(|q| q.to_poly(fp, h.dim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuadTuple::new(h, polys)?)
    }
}

/// Values in enumeration order of the domain; `imag` may be omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub p: i64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_basis: Option<Vec<Vec<i64>>>,
    pub real: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl FunctionFile {
    pub fn from_function(f: &DenseFunction) -> Self {
        let imag: Vec<f64> = f.values().iter().map(|v| v.im).collect();
        FunctionFile {
            p: f.domain().fp().p() as i64,
            n: f.domain().ambient_dim(),
            domain_basis: basis_of(f.domain()),
            real: f.values().iter().map(|v| v.re).collect(),
            imag: imag.iter().any(|&x| x != 0.0).then_some(imag),
            metadata: None,
        }
    }

    pub fn to_function(&self) -> Result<DenseFunction> {
        let fp = field(self.p)?;
        let h = domain_of(fp, self.n, &self.domain_basis)?;
        let values = match &self.imag {
            None => self.real.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            Some(im) => {
                if im.len() != self.real.len() {
                    bail!("real and imaginary parts differ in length");
                }
                self.real.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
            }
        };
        Ok(DenseFunction::new(h, values)?)
    }
}

/// Subsets of F_p^n listed by their points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetsFile {
    pub p: i64,
    pub n: usize,
    pub sets: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl SetsFile {
    pub fn from_sets(sets: &[PointSet]) -> Self {
        let h = sets[0].domain();
        SetsFile {
            p: h.fp().p() as i64,
            n: h.ambient_dim(),
            sets: sets
                .iter()
                .map(|s| s.points().iter().map(|x| widen(&x.coords)).collect())
                .collect(),
            metadata: None,
        }
    }

    pub fn to_sets(&self) -> Result<Vec<PointSet>> {
        let fp = field(self.p)?;
        let h = Subspace::full(fp, self.n);
        if self.sets.is_empty() {
            bail!("no sets given");
        }
        self.sets
            .iter()
            .map(|pts| {
                let vs = pts
                    .iter()
                    .map(|x| {
                        if x.len() != self.n {
                            bail!("point {x:?} does not have {} coordinates", self.n);
                        }
                        Ok(FpVector::new(entries(fp, x)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PointSet::from_points(h.clone(), &vs)?)
            })
            .collect()
    }
}

/// Colours `1..=r` of the nonzero points of F_p^n in enumeration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub p: i64,
    pub n: usize,
    pub r: usize,
    pub colors: Vec<usize>,
}

impl ColoringFile {
    pub fn from_coloring(c: &Coloring) -> Self {
        ColoringFile {
            p: c.p.p() as i64,
            n: c.n,
            r: c.r,
            colors: c.colors.clone(),
        }
    }

    pub fn to_coloring(&self) -> Result<Coloring> {
        Ok(Coloring::new(field(self.p)?, self.n, self.r, self.colors.clone())?)
    }

    /// Colour classes as subsets of F_p^n.
    pub fn classes(&self) -> Result<Vec<PointSet>> {
        let c = self.to_coloring()?;
        Ok((1..=c.r).map(|k| c.class(k)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub p: i64,
    pub rows: Vec<Vec<i64>>,
}

impl SystemFile {
    pub fn to_system(&self) -> Result<LinearSystem> {
        let fp = field(self.p)?;
        Ok(LinearSystem::new(fp, rows_of(fp, &self.rows)?)?)
    }
}
