//! Run configuration shared by the verification suites and subcommands.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use qfa_core::gf::Fp;
use qfa_core::{complexity2, increment, quadsets, tolerance};

/// Per-operation caps on the number of enumerated items.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    pub enumeration: u128,
    pub density: u128,
    pub increment: u128,
    pub witness: u128,
    pub solutions: u128,
    pub u3: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: quadsets::ENUM_BUDGET,
            density: increment::DENSITY_BUDGET,
            increment: increment::INCREMENT_BUDGET,
            // k = 4 over F_3 needs 3^14 candidates
            witness: 1 << 23,
            solutions: complexity2::SOLUTION_BUDGET,
            u3: qfa_core::harmonic::U3_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub identity_rel: f64,
    pub accum_rel: f64,
    pub char_sum_abs: f64,
    pub roundtrip_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity_rel: tolerance::IDENTITY_REL,
            accum_rel: tolerance::ACCUM_REL,
            char_sum_abs: tolerance::CHAR_SUM_ABS,
            roundtrip_abs: tolerance::ROUNDTRIP_ABS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub p: i64,
    pub n: usize,
    pub d: usize,
    /// Minimum rank for generated tuples; `None` picks `min(n, 4)`.
    pub rank: Option<usize>,
    pub seed: u64,
    /// Worker threads; 0 uses the default pool.
    pub threads: usize,
    /// Drops wall-clock times so that reports are byte-identical across runs.
    pub deterministic: bool,
    /// Seeded instances per battery in `verify`.
    pub instances: usize,
    pub budgets: Budgets,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            n: 3,
            d: 1,
            rank: None,
            seed: 0,
            threads: 0,
            deterministic: false,
            instances: 10,
            budgets: Budgets::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        Fp::new(self.p)?;
        if self.n == 0 {
            bail!("n must be positive");
        }
        if self.instances == 0 {
            bail!("instances must be positive");
        }
        let b = &self.budgets;
        if [b.enumeration, b.density, b.increment, b.witness, b.solutions, b.u3].contains(&0) {
            bail!("budgets must be positive");
        }
        let t = &self.tolerances;
        if ![t.identity_rel, t.accum_rel, t.char_sum_abs, t.roundtrip_abs]
            .iter()
            .all(|&x| x > 0.0 && x.is_finite())
        {
            bail!("tolerances must be positive");
        }
        Ok(())
    }

    pub fn fp(&self) -> Fp {
        Fp::new(self.p).expect("validated prime")
    }

    pub fn min_rank(&self) -> usize {
        self.rank.unwrap_or(self.n.min(4))
    }
}
