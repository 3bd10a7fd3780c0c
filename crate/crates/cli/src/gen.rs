//! Seeded instance generators and the pinned instances used by the suites.

use anyhow::{bail, Result};
use clap::ValueEnum;
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use qfa_core::brauer::{lower_bound_coloring, Coloring};
use qfa_core::gf::{Fp, Subspace};
use qfa_core::increment::IterationConfig;
use qfa_core::inverse_lab::planted_phase;
use qfa_core::quadsets::{tuple_rank, zero_set, QuadTuple, QuadraticPoly, RankCertificate};
use qfa_core::random::{random_colors, random_poly, random_tuple_with_min_rank, rng_from_seed};

use crate::io::{ColoringFile, FunctionFile, PolyFile, SetsFile, TupleFile};

/// Rejection-sampling cap for rank-constrained tuples.
pub const MAX_TRIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    RandomQuadtuple,
    PlantedPhase,
    RandomColoring,
    LowerBoundColoring,
    PlantedDensitySet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub p: i64,
    pub n: usize,
    pub d: usize,
    pub rank: Option<usize>,
    /// Colours, or planted sets.
    pub r: usize,
    pub seed: u64,
    pub homogeneous: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            p: 3,
            n: 3,
            d: 1,
            rank: None,
            r: 2,
            seed: 0,
            homogeneous: false,
        }
    }
}

/// A tuple on F_p^n drawn from stream 0 of the seed, redrawn until its rank
/// reaches `params.rank`.
pub fn random_tuple_instance(params: &GenParams) -> Result<(QuadTuple, RankCertificate)> {
    let fp = Fp::new(params.p)?;
    let mut rng = rng_from_seed(params.seed, 0);
    let q = random_tuple_with_min_rank(
        &mut rng,
        Subspace::full(fp, params.n),
        params.d,
        params.rank.unwrap_or(0),
        params.homogeneous,
        MAX_TRIES,
    )?;
    let cert = tuple_rank(&q)?;
    Ok((q, cert))
}

/// The F_3^4 tuple with d = 1 and rank 4 drawn from seed 7.
pub fn pinned_tuple() -> QuadTuple {
    let params = GenParams {
        n: 4,
        rank: Some(4),
        seed: 7,
        ..Default::default()
    };
    random_tuple_instance(&params).expect("seed 7 yields a rank-4 tuple").0
}

/// The 2-colouring of F_3^3 \ {0} drawn from seed 4.
pub fn pinned_coloring() -> Coloring {
    let fp = Fp::new(3).expect("3 is supported");
    let colors = random_colors(&mut rng_from_seed(4, 0), fp, 3, 2);
    Coloring::new(fp, 3, 2, colors).expect("valid colouring")
}

/// α = β = 1/4 and rank 2.
pub fn pinned_iteration_config() -> IterationConfig {
    IterationConfig::new(Rational64::new(1, 4), Rational64::new(1, 4), 2)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// Instance file contents. `tuple` overrides the generated tuple for
/// `planted-phase`.
pub fn generate_instance(kind: InstanceKind, params: &GenParams, tuple: Option<&QuadTuple>) -> Result<Value> {
    let fp = Fp::new(params.p)?;
    let meta_base = json!({ "kind": kind, "seed": params.seed });
    match kind {
        InstanceKind::RandomQuadtuple => {
            let (q, cert) = random_tuple_instance(params)?;
            let mut file = TupleFile::from_tuple(&q);
            let mut meta = meta_base;
            meta["rank_certificate"] = to_value(&cert)?;
            meta["min_rank"] = json!(params.rank.unwrap_or(0));
            file.metadata = Some(meta);
            to_value(&file)
        }
        InstanceKind::PlantedPhase => {
            let q = match tuple {
                Some(q) => q.clone(),
                None => random_tuple_instance(params)?.0,
            };
            if zero_set(&q)?.is_empty() {
                bail!("the tuple has an empty zero set");
            }
            let mut rng = rng_from_seed(params.seed, 1);
            let phase = random_poly(&mut rng, q.fp(), q.k(), false);
            let f = planted_phase(&q, &phase)?;
            let mut file = FunctionFile::from_function(&f);
            let mut meta = meta_base;
            meta["tuple"] = to_value(&TupleFile::from_tuple(&q))?;
            meta["planted"] = to_value(&PolyFile::from_poly(&phase))?;
            meta["eta"] = json!(1);
            file.metadata = Some(meta);
            to_value(&file)
        }
        InstanceKind::RandomColoring => {
            if params.r == 0 {
                bail!("need at least one colour");
            }
            let colors = random_colors(&mut rng_from_seed(params.seed, 0), fp, params.n, params.r);
            to_value(&ColoringFile::from_coloring(&Coloring::new(fp, params.n, params.r, colors)?))
        }
        InstanceKind::LowerBoundColoring => {
            to_value(&ColoringFile::from_coloring(&lower_bound_coloring(fp, params.n, params.r)?))
        }
        InstanceKind::PlantedDensitySet => {
            if params.r == 0 {
                bail!("need at least one set");
            }
            let mut rng = rng_from_seed(params.seed, 2);
            let h = Subspace::full(fp, params.n);
            let mut forms = Vec::new();
            let mut sets = Vec::new();
            while forms.len() < params.r {
                let q = random_poly(&mut rng, fp, params.n, true);
                if q.b.is_zero() {
                    continue;
                }
                let t = QuadTuple::new(h.clone(), vec![q.clone()])?;
                sets.push(zero_set(&t)?);
                forms.push(q);
            }
            let mut file = SetsFile::from_sets(&sets);
            let mut meta = meta_base;
            meta["planted"] = to_value(&forms.iter().map(PolyFile::from_poly).collect::<Vec<_>>())?;
            // each set is a whole level set of its planted form
            meta["planted_density"] = json!("1");
            file.metadata = Some(meta);
            to_value(&file)
        }
    }
}

/// Reads the planted polynomial back from a planted-phase file.
pub fn planted_from_metadata(file: &FunctionFile) -> Result<(QuadTuple, QuadraticPoly)> {
    let Some(meta) = &file.metadata else {
        bail!("no metadata");
    };
    let t: TupleFile = serde_json::from_value(meta["tuple"].clone())?;
    let q = t.to_tuple()?;
    let planted: PolyFile = serde_json::from_value(meta["planted"].clone())?;
    let phase = planted.to_poly(q.fp(), q.k())?;
    Ok((q, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfa_core::brauer::find_monochromatic_brauer;

    #[test]
    fn pinned_instances() {
        let q = pinned_tuple();
        assert_eq!((q.k(), q.d()), (4, 1));
        assert!(tuple_rank(&q).unwrap().at_least(4));
        assert_eq!(pinned_coloring().colors.len(), 26);
    }

    #[test]
    fn generation_is_deterministic() {
        let params = GenParams {
            n: 4,
            rank: Some(4),
            seed: 7,
            ..Default::default()
        };
        for kind in InstanceKind::value_variants() {
            let mut p = params.clone();
            if *kind == InstanceKind::LowerBoundColoring {
                p.r = 4;
            }
            let a = generate_instance(*kind, &p, None).unwrap();
            let b = generate_instance(*kind, &p, None).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn lower_bound_coloring_file() {
        let params = GenParams {
            n: 2,
            r: 2,
            ..Default::default()
        };
        let v = generate_instance(InstanceKind::LowerBoundColoring, &params, None).unwrap();
        let c: ColoringFile = serde_json::from_value(v).unwrap();
        // colour = position of the last nonzero coordinate
        assert_eq!(c.colors, vec![2, 2, 1, 2, 2, 1, 2, 2]);
        assert!(find_monochromatic_brauer(&c.to_coloring().unwrap()).is_none());
    }

    #[test]
    fn planted_phase_roundtrip() {
        let params = GenParams {
            rank: Some(3),
            seed: 5,
            ..Default::default()
        };
        let v = generate_instance(InstanceKind::PlantedPhase, &params, None).unwrap();
        let file: FunctionFile = serde_json::from_value(v).unwrap();
        let (q, phase) = planted_from_metadata(&file).unwrap();
        assert_eq!(file.to_function().unwrap(), planted_phase(&q, &phase).unwrap());
    }
}
