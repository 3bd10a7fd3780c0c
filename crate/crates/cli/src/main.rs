use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use qfa_core::brauer::{check_counting_lemma, find_monochromatic_brauer, lower_bound_coloring};
use qfa_core::complexity2::{complexity_check, is_translation_invariant, kernel_sum_check, weighted_solution_count};
use qfa_core::gf::Fp;
use qfa_core::harmonic::{fourier_uniformity, u2_norm, u2_norm_fourth_direct, u3_norm, PointSet};
use qfa_core::increment::{
    high_rank_partition, run_iteration, verify_certificate, Certificate, DensityMode, DensityOptions, IterationConfig,
};
use qfa_core::inverse_lab::{quadratic_witness_search, InverseOptions};
use qfa_core::par::with_threads;
use qfa_core::quadsets::{tuple_rank, zero_set, QuadTuple};
use qfa_core::Error;

use qfa_cli::config::RunConfig;
use qfa_cli::gen::{generate_instance, planted_from_metadata, GenParams, InstanceKind};
use qfa_cli::io::{read_json, write_json, ColoringFile, FunctionFile, SetsFile, SystemFile, TupleFile};
use qfa_cli::report::{summarize, write_reports};
use qfa_cli::suites::run_suite;

/// Verification toolkit for quadratic Fourier analysis over F_p^n.
#[derive(Parser, Debug)]
#[command(name = "qfa", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON run configuration; flags and QFA_* variables take precedence.
    #[arg(long, global = true, env = "QFA_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "QFA_P")]
    p: Option<i64>,
    #[arg(long, global = true, env = "QFA_N")]
    n: Option<usize>,
    #[arg(long, global = true, env = "QFA_D")]
    d: Option<usize>,
    #[arg(long, global = true, env = "QFA_RANK")]
    rank: Option<usize>,
    #[arg(long, global = true, env = "QFA_SEED")]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "QFA_THREADS")]
    threads: Option<usize>,
    /// Omit wall-clock times so report files are byte-identical.
    #[arg(long, global = true, env = "QFA_DETERMINISTIC")]
    deterministic: bool,
    /// Seeded instances per battery in `verify`.
    #[arg(long, global = true, env = "QFA_INSTANCES")]
    instances: Option<usize>,
    #[arg(long, global = true, env = "QFA_BUDGET_ENUMERATION")]
    budget_enumeration: Option<u128>,
    #[arg(long, global = true, env = "QFA_BUDGET_DENSITY")]
    budget_density: Option<u128>,
    #[arg(long, global = true, env = "QFA_BUDGET_INCREMENT")]
    budget_increment: Option<u128>,
    #[arg(long, global = true, env = "QFA_BUDGET_WITNESS")]
    budget_witness: Option<u128>,
    #[arg(long, global = true, env = "QFA_BUDGET_SOLUTIONS")]
    budget_solutions: Option<u128>,
    #[arg(long, global = true, env = "QFA_BUDGET_U3")]
    budget_u3: Option<u128>,
    /// Output directory.
    #[arg(long, global = true, env = "QFA_OUT", default_value = "qfa-out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite: fourier, u2u3, levelsets, brauer, increment, inverse, appendix or all.
    Verify { suite: String },
    /// Norms and Fourier uniformity of a function file.
    Norms {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rank certificate and level-set sizes of a tuple file.
    Levelset {
        #[arg(long)]
        input: PathBuf,
    },
    #[command(subcommand)]
    Brauer(BrauerCmd),
    /// Refine the homogeneous part of a tuple until it reaches `--rank`, keeping set densities.
    Partition {
        #[arg(long)]
        input: PathBuf,
        /// Sets file or colouring file.
        #[arg(long)]
        sets: PathBuf,
    },
    #[command(subcommand)]
    Increment(IncrementCmd),
    #[command(subcommand)]
    Inverse(InverseCmd),
    #[command(subcommand)]
    Complexity(ComplexityCmd),
    /// Generate a seeded instance file.
    Gen {
        kind: InstanceKind,
        /// Number of colours or planted sets.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        homogeneous: bool,
        /// Tuple file to plant a phase on.
        #[arg(long)]
        tuple: Option<PathBuf>,
        /// Output file; defaults to `<out>/<kind>-<seed>.json`.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum BrauerCmd {
    /// The explicit n-colouring of F_3^n \ {0}, checked for monochromatic quadruples.
    LowerBound {
        #[arg(long)]
        r: Option<usize>,
    },
    /// Search a colouring file for a monochromatic quadruple.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Count Brauer quadruples on the zero set of a tuple.
    Count {
        #[arg(long)]
        input: PathBuf,
        /// Set of differences; defaults to the zero set of the homogeneous part.
        #[arg(long)]
        sets: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum IncrementCmd {
    /// Run the density-increment iteration on a sets or colouring file.
    Run {
        #[arg(long)]
        sets: PathBuf,
        #[arg(long, default_value = "1/4")]
        alpha: String,
        #[arg(long, default_value = "1/4")]
        beta: String,
        #[arg(long, default_value = "1/1000")]
        gain: String,
    },
    /// Re-verify a certificate against a sets or colouring file.
    VerifyCert {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        sets: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum InverseCmd {
    /// Exhaustive or sampled quadratic-phase witness search.
    Search {
        #[arg(long)]
        input: PathBuf,
        /// Tuple file; defaults to the tuple in the function's metadata.
        #[arg(long)]
        tuple: Option<PathBuf>,
        /// Sample this many forms instead of enumerating all of them.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexityCmd {
    /// Translation invariance, complexity at most two and kernel sums of a system file.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Weighted solution count of a function file, by both routes.
    Count {
        #[arg(long)]
        input: PathBuf,
        /// Four nonzero weights summing to zero, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<u8>,
    },
}

/// Exit status 1: a hard assert failed.
#[derive(Debug)]
struct AssertFailed(String);

impl std::fmt::Display for AssertFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AssertFailed {}

fn assert_failed(msg: impl Into<String>) -> anyhow::Error {
    AssertFailed(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<AssertFailed>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::InvariantViolation(_)) => 1,
        _ => 2,
    }
}

fn run_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg: RunConfig = match &g.config {
        Some(path) => read_json(path)?,
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($($flag:ident => $($field:ident).+),* $(,)?) => {
            $(if let Some(v) = g.$flag { cfg.$($field).+ = v; })*
        };
    }
    set!(
        p => p, n => n, d => d, seed => seed, threads => threads, instances => instances,
        budget_enumeration => budgets.enumeration, budget_density => budgets.density,
        budget_increment => budgets.increment, budget_witness => budgets.witness,
        budget_solutions => budgets.solutions, budget_u3 => budgets.u3,
    );
    if g.rank.is_some() {
        cfg.rank = g.rank;
    }
    cfg.deterministic |= g.deterministic;
    cfg.validate()?;
    Ok(cfg)
}

fn parse_ratio(s: &str) -> Result<Rational64> {
    s.parse::<Rational64>().map_err(|e| anyhow!("bad rational '{s}': {e}"))
}

/// Colour classes of a colouring file, or the sets of a sets file.
fn load_sets(path: &Path) -> Result<Vec<PointSet>> {
    let v: Value = read_json(path)?;
    if v.get("colors").is_some() {
        serde_json::from_value::<ColoringFile>(v)?.classes()
    } else {
        serde_json::from_value::<SetsFile>(v)?.to_sets()
    }
}

fn emit<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let path = out.join(format!("{name}.json"));
    write_json(&path, value)?;
    println!("{}", serde_json::to_string_pretty(value)?);
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn density_opts(cfg: &RunConfig) -> DensityOptions {
    DensityOptions {
        mode: DensityMode::Exhaustive,
        budget: cfg.budgets.density,
    }
}

fn verify(cfg: &RunConfig, suite: &str, out: &Path) -> Result<()> {
    let records = run_suite(suite, cfg)?;
    write_reports(out, &format!("report-{suite}"), &records)?;
    let s = summarize(&records);
    println!(
        "{suite}: {} pass, {} fail, {} report-only, {} skipped",
        s.pass, s.fail, s.report_only, s.skipped
    );
    for r in records.iter().filter(|r| r.is_failure()) {
        eprintln!("FAIL {} {} {}: lhs={} rhs={} {}", r.suite, r.anchor, r.instance, r.lhs, r.rhs, r.note);
    }
    if s.fail > 0 {
        return Err(assert_failed(format!("{} checks failed", s.fail)));
    }
    Ok(())
}

fn norms(cfg: &RunConfig, input: &Path, out: &Path) -> Result<()> {
    let f = read_json::<FunctionFile>(input)?.to_function()?;
    let support = PointSet::from_mask(f.domain().clone(), f.support_mask())?;
    let uniformity = if support.is_empty() {
        Value::Null
    } else {
        serde_json::to_value(fourier_uniformity(&support)?)?
    };
    let direct = match u2_norm_fourth_direct(&f, cfg.budgets.enumeration) {
        Ok(v) => json!(v.powf(0.25)),
        Err(Error::BudgetExceeded { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let u3 = match u3_norm(&f, cfg.budgets.u3) {
        Ok(v) => json!(v),
        Err(Error::BudgetExceeded { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    emit(
        out,
        "norms",
        &json!({
            "l2": f.l2_norm(),
            "u2": u2_norm(&f)?,
            "u2_direct": direct,
            "u3": u3,
            "support_size": support.len(),
            "support_uniformity": uniformity,
        }),
    )
}

fn levelset(input: &Path, out: &Path) -> Result<()> {
    let q = read_json::<TupleFile>(input)?.to_tuple()?;
    let cert = tuple_rank(&q)?;
    let codes = q.level_codes()?;
    let mut sizes = vec![0u64; q.fp().power_count(q.d()) as usize];
    for c in codes {
        sizes[c] += 1;
    }
    let z = zero_set(&q)?;
    let uniformity = if z.is_empty() {
        Value::Null
    } else {
        serde_json::to_value(fourier_uniformity(&z)?)?
    };
    emit(
        out,
        "levelset",
        &json!({
            "dim": q.k(),
            "d": q.d(),
            "rank": cert,
            "level_set_sizes": sizes,
            "zero_set_size": z.len(),
            "zero_set_uniformity": uniformity,
        }),
    )
}

fn brauer(cfg: &RunConfig, cmd: &BrauerCmd, out: &Path) -> Result<()> {
    match cmd {
        BrauerCmd::LowerBound { r } => {
            let c = lower_bound_coloring(cfg.fp(), cfg.n, r.unwrap_or(cfg.n))?;
            let witness = find_monochromatic_brauer(&c);
            emit(
                out,
                "brauer-lower-bound",
                &json!({ "coloring": ColoringFile::from_coloring(&c), "witness": witness }),
            )?;
            if let Some(w) = witness {
                return Err(assert_failed(format!("monochromatic quadruple {w:?}")));
            }
            Ok(())
        }
        BrauerCmd::Check { input } => {
            let c = read_json::<ColoringFile>(input)?.to_coloring()?;
            let witness = find_monochromatic_brauer(&c);
            emit(out, "brauer-check", &json!({ "witness": witness }))
        }
        BrauerCmd::Count { input, sets } => {
            let q = read_json::<TupleFile>(input)?.to_tuple()?;
            let a = match sets {
                Some(path) => load_sets(path)?.into_iter().next().ok_or_else(|| anyhow!("no sets"))?,
                None => zero_set(&q.homogeneous())?,
            };
            if a.domain() != q.domain() {
                bail!("the set must live on the tuple's domain");
            }
            emit(out, "brauer-count", &check_counting_lemma(&q, &a)?)
        }
    }
}

fn partition(cfg: &RunConfig, input: &Path, sets: &Path, out: &Path) -> Result<()> {
    // partitions are built from the quadratic parts only
    let q = read_json::<TupleFile>(input)?.to_tuple()?.homogeneous();
    let sets = load_sets(sets)?;
    if sets.iter().any(|a| a.domain() != q.domain()) {
        bail!("the sets must live on the tuple's domain");
    }
    let res = high_rank_partition(&q, cfg.min_rank(), &sets, &density_opts(cfg))?;
    let mut tuple = TupleFile::from_tuple(&res.tuple);
    tuple.metadata = Some(serde_json::to_value(&res.stats)?);
    emit(out, "partition", &tuple)
}

fn increment(cfg: &RunConfig, cmd: &IncrementCmd, out: &Path) -> Result<()> {
    match cmd {
        IncrementCmd::Run { sets, alpha, beta, gain } => {
            let sets = load_sets(sets)?;
            let mut it = IterationConfig::new(parse_ratio(alpha)?, parse_ratio(beta)?, cfg.min_rank());
            it.gain_threshold = parse_ratio(gain)?;
            it.density = density_opts(cfg);
            it.increment.density = density_opts(cfg);
            it.increment.budget = cfg.budgets.increment;
            let run = run_iteration(&sets, &it)?;
            write_json(&out.join("trace.json"), &run.trace)?;
            for s in &run.trace {
                println!(
                    "stage {}: d={} dim={} codim={} density_sum={} {}",
                    s.m,
                    s.d,
                    s.dim,
                    s.codim,
                    s.density_sum,
                    serde_json::to_string(&s.action)?
                );
            }
            match &run.certificate {
                Some(cert) => {
                    let path = out.join("certificate.json");
                    write_json(&path, cert)?;
                    eprintln!("wrote {}", path.display());
                    Ok(())
                }
                None => Err(Error::IncrementNotFound {
                    threshold: it.gain_threshold.to_string(),
                }
                .into()),
            }
        }
        IncrementCmd::VerifyCert { certificate, sets } => {
            let cert: Certificate = read_json(certificate)?;
            let sets = load_sets(sets)?;
            let check = verify_certificate(&cert, &sets)?;
            emit(out, "certificate-check", &check)?;
            if !check.pass {
                return Err(assert_failed("certificate does not verify"));
            }
            Ok(())
        }
    }
}

fn inverse(cfg: &RunConfig, cmd: &InverseCmd, out: &Path) -> Result<()> {
    let InverseCmd::Search { input, tuple, samples } = cmd;
    let file: FunctionFile = read_json(input)?;
    let f = file.to_function()?;
    let q: QuadTuple = match tuple {
        Some(path) => read_json::<TupleFile>(path)?.to_tuple()?,
        None => planted_from_metadata(&file)
            .context("no --tuple given and no tuple in the function's metadata")?
            .0,
    };
    let mut opts = InverseOptions {
        budget: cfg.budgets.witness,
        ..Default::default()
    };
    if let Some(s) = samples {
        opts.mode = qfa_core::inverse_lab::SearchMode::Sampled {
            samples: *s,
            seed: cfg.seed,
        };
    }
    emit(out, "inverse-search", &quadratic_witness_search(&f, &q, &opts)?)
}

fn complexity(cfg: &RunConfig, cmd: &ComplexityCmd, out: &Path) -> Result<()> {
    match cmd {
        ComplexityCmd::Check { input } => {
            let s = read_json::<SystemFile>(input)?.to_system()?;
            let invariant = is_translation_invariant(&s);
            let kernel = if invariant {
                serde_json::to_value(kernel_sum_check(&s)?)?
            } else {
                Value::Null
            };
            emit(
                out,
                "complexity-check",
                &json!({
                    "translation_invariant": invariant,
                    "complexity": complexity_check(&s)?,
                    "kernel_sums": kernel,
                }),
            )
        }
        ComplexityCmd::Count { input, c } => {
            let f = read_json::<FunctionFile>(input)?.to_function()?;
            let c: [u8; 4] = c.as_slice().try_into().map_err(|_| anyhow!("need four weights"))?;
            let count = weighted_solution_count(&f, &c, cfg.budgets.solutions)?;
            emit(out, "solution-count", &count)?;
            if count.rel_err.is_some_and(|e| e > cfg.tolerances.accum_rel) {
                return Err(assert_failed("Fourier and brute-force counts disagree"));
            }
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    cfg: &RunConfig,
    kind: InstanceKind,
    r: usize,
    homogeneous: bool,
    tuple: Option<&Path>,
    file: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let params = GenParams {
        p: cfg.p,
        n: cfg.n,
        d: cfg.d,
        rank: cfg.rank,
        r,
        seed: cfg.seed,
        homogeneous,
    };
    let tuple = tuple.map(|p| read_json::<TupleFile>(p)?.to_tuple()).transpose()?;
    let value = generate_instance(kind, &params, tuple.as_ref())?;
    let name = serde_json::to_value(kind)?.as_str().unwrap_or("instance").to_string();
    let path = match file {
        Some(p) => p.to_path_buf(),
        None => out.join(format!("{name}-{}.json", cfg.seed)),
    };
    write_json(&path, &value)?;
    println!("{}", path.display());
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<()> {
    let cfg = run_config(&cli.global)?;
    let out = cli.global.out.as_path();
    let _ = Fp::new(cfg.p)?;
    with_threads(cfg.threads, || match &cli.command {
        Command::Verify { suite } => verify(&cfg, suite, out),
        Command::Norms { input } => norms(&cfg, input, out),
        Command::Levelset { input } => levelset(input, out),
        Command::Brauer(cmd) => brauer(&cfg, cmd, out),
        Command::Partition { input, sets } => partition(&cfg, input, sets, out),
        Command::Increment(cmd) => increment(&cfg, cmd, out),
        Command::Inverse(cmd) => inverse(&cfg, cmd, out),
        Command::Complexity(cmd) => complexity(&cfg, cmd, out),
        Command::Gen {
            kind,
            r,
            homogeneous,
            tuple,
            file,
        } => gen(&cfg, *kind, *r, *homogeneous, tuple.as_deref(), file.as_deref(), out),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
