//! The `msrank` command line: `gen`, `solve`, `compare`, `verify` and
//! `calibrate`.
//!
//! Exit codes: 0 success, 1 error, 2 budget exhausted or family truncated,
//! 64 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::baselines::{
    brute_force_with, w_ordering, BruteForceOptions, DEFAULT_PERMUTATION_LIMIT,
};
use crate::calibration::{reservation_sequence, WeightDistribution};
use crate::error::{Error, Result};
use crate::hardness::{build_hardness_instance, ThreePartitionInstance};
use crate::io::{instance_to_string, read_instance, AnyInstance};
use crate::model::{market_share, Assignment, Instance};
use crate::ptas::{ptas_solve, GuessMode, PtasOptions, DEFAULT_GUESS_BUDGET};
use crate::random::{random_instance, RandomSpec, RNG_ALGORITHM};
use crate::reduction::{
    qptas_factor, quasi_ptas, BoundedRatioSolver, BruteForceSolver, PtasSolver,
};
use crate::report::SolveReport;
use crate::scalar::{NumericMode, Scalar};
use crate::verify::{run_suite, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Optimum is computed for reports when `n` is at most this.
pub const AUTO_OPT_MAX_N: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "msrank",
    version,
    about = "Market-share product ranking solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random or hardness instance as JSON.
    Gen(GenArgs),
    /// Solve an instance and write a report.
    Solve(SolveArgs),
    /// Run several algorithms on one instance.
    Compare(CompareArgs),
    /// Check an approximation guarantee on random trials; writes CSV.
    Verify(VerifyArgs),
    /// Turn search costs into reservation prices.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Random,
    Hardness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Numeric {
    Float,
    Rational,
}

impl From<Numeric> for NumericMode {
    fn from(n: Numeric) -> Self {
        match n {
            Numeric::Float => NumericMode::Float,
            Numeric::Rational => NumericMode::Rational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Brute,
    Worder,
    Qptas,
    Ptas,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Brute => "brute",
            Algo::Worder => "worder",
            Algo::Qptas => "qptas",
            Algo::Ptas => "ptas",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Inner {
    Brute,
    Ptas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Grid,
    Count,
    Oracle,
}

impl From<Mode> for GuessMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Grid => GuessMode::Grid,
            Mode::Count => GuessMode::Count,
            Mode::Oracle => GuessMode::Oracle,
        }
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    kind: Kind,
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Number of customer segments.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    w_lo: f64,
    #[arg(long, default_value_t = 2.0)]
    w_hi: f64,
    #[arg(long, default_value_t = 1.0)]
    price_scale: f64,
    #[arg(long, value_enum, default_value = "float")]
    numeric: Numeric,
    /// 3-partition integers, comma separated (hardness kind).
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    /// 3-partition target (hardness kind).
    #[arg(long)]
    t: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
struct SolverFlags {
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    #[arg(long, value_enum, default_value = "brute")]
    inner: Inner,
    #[arg(long, value_enum, default_value = "count")]
    mode: Mode,
    /// Permutation limit for brute force, guess limit for ptas.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Skip the brute-force optimum normally added for n <= 8.
    #[arg(long)]
    no_opt: bool,
    /// Leave wall-clock time out of reports so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Convert the instance to this backend before solving.
    #[arg(long, value_enum)]
    numeric: Option<Numeric>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "ptas")]
    algo: Algo,
    #[command(flatten)]
    flags: SolverFlags,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "brute,worder,qptas,ptas"
    )]
    algos: Vec<Algo>,
    #[command(flatten)]
    flags: SolverFlags,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 7)]
    n_max: usize,
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// JSON with "costs", "support" and "probabilities".
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
struct Done {
    truncated: bool,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(d) if d.truncated => {
            eprintln!("msrank: budget exhausted; result is truncated");
            EXIT_TRUNCATED
        }
        Ok(_) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("msrank: {m}");
            EXIT_USAGE
        }
        Err(Failure::Run(e @ Error::BudgetExceeded { .. })) => {
            eprintln!("msrank: {e}");
            EXIT_TRUNCATED
        }
        Err(Failure::Run(e)) => {
            eprintln!("msrank: {e}");
            EXIT_ERROR
        }
    }
}

fn run(cmd: Command) -> Result<Done, Failure> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Compare(a) => compare(a),
        Command::Verify(a) => verify(a),
        Command::Calibrate(a) => calibrate(a),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn gen(a: GenArgs) -> Result<Done, Failure> {
    let text = match a.kind {
        Kind::Random => {
            let spec = RandomSpec {
                n: a.n,
                k: a.k,
                seed: a.seed,
                w_lo: a.w_lo,
                w_hi: a.w_hi,
                price_scale: a.price_scale,
            };
            let inst = random_instance(&spec)?;
            let meta = json!({"generator": "random", "spec": spec, "rng": RNG_ALGORITHM});
            let any = AnyInstance::Float(inst).into_mode(a.numeric.into())?;
            let mut s = serde_json::to_string_pretty(&any.to_json(Some(&meta)))
                .expect("JSON values serialize");
            s.push('\n');
            s
        }
        Kind::Hardness => {
            let t =
                a.t.ok_or_else(|| Failure::Usage("--kind hardness needs --t".into()))?;
            if a.a.is_empty() {
                return Err(Failure::Usage("--kind hardness needs --a".into()));
            }
            let tp = ThreePartitionInstance::new(a.a.clone(), t)?;
            let h = build_hardness_instance(&tp)?;
            let meta = json!({
                "generator": "hardness",
                "a": a.a,
                "t": t,
                "big_weight": h.big_weight.to_string(),
                "alpha": h.alpha.to_json(),
                "threshold": h.threshold.to_json(),
            });
            instance_to_string(&h.instance, Some(&meta))
        }
    };
    emit(a.output.as_deref(), &text)?;
    Ok(Done { truncated: false })
}

fn check_flags(f: &SolverFlags) -> Result<(), Failure> {
    if !(f.eps > 0.0 && f.eps < 1.0) {
        return Err(Failure::Usage(format!(
            "--eps must lie in (0, 1), got {}",
            f.eps
        )));
    }
    if f.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    if f.budget == Some(0) {
        return Err(Failure::Usage("--budget must be at least 1".into()));
    }
    Ok(())
}

fn load(input: &Path, f: &SolverFlags) -> Result<(AnyInstance, Option<u64>)> {
    let doc = read_instance(input)?;
    let seed = doc
        .meta
        .as_ref()
        .and_then(|m| m.pointer("/spec/seed"))
        .and_then(Value::as_u64);
    let inst = match f.numeric {
        Some(n) => doc.instance.into_mode(n.into())?,
        None => doc.instance,
    };
    Ok((inst, seed))
}

fn run_algo(
    inst: &AnyInstance,
    algo: Algo,
    f: &SolverFlags,
    seed: Option<u64>,
) -> Result<SolveReport> {
    let mut r = match inst {
        AnyInstance::Float(i) => solve_typed(i, algo, f)?,
        AnyInstance::Rational(i) => solve_typed(i, algo, f)?,
    };
    r.seed = seed;
    r.rng = seed.map(|_| RNG_ALGORITHM.to_string());
    Ok(r)
}

/// Builds the report for one algorithm run.
fn solve_typed<S: Scalar>(inst: &Instance<S>, algo: Algo, f: &SolverFlags) -> Result<SolveReport> {
    let started = Instant::now();
    let brute_opts = |limit: Option<u64>| BruteForceOptions {
        limit: limit.unwrap_or(DEFAULT_PERMUTATION_LIMIT),
        threads: f.threads,
        ..Default::default()
    };
    let ptas_opts = PtasOptions {
        mode: f.mode.into(),
        budget: f.budget.unwrap_or(DEFAULT_GUESS_BUDGET),
        threads: f.threads,
        oracle_limit: DEFAULT_PERMUTATION_LIMIT,
    };
    let mut known_opt: Option<S> = None;
    let mut report = match algo {
        Algo::Brute => {
            let r = brute_force_with(inst, &brute_opts(f.budget))?;
            let mut rep = SolveReport::new(algo.name(), &r.best, &r.opt);
            rep.budget = Some(brute_opts(f.budget).limit);
            rep.guarantee = Some(1.0);
            known_opt = Some(r.opt);
            rep
        }
        Algo::Worder => {
            let a = w_ordering(inst);
            SolveReport::new(algo.name(), &a, &market_share(inst, &a))
        }
        Algo::Qptas => {
            let solver: Box<dyn BoundedRatioSolver<S>> = match f.inner {
                Inner::Brute => Box::new(BruteForceSolver {
                    options: brute_opts(f.budget),
                }),
                Inner::Ptas => Box::new(PtasSolver { options: ptas_opts }),
            };
            let out = quasi_ptas(inst, f.eps, solver.as_ref())?;
            let mut rep = SolveReport::new(algo.name(), &out.assignment, &out.share);
            rep.inner = Some(out.solver.to_string());
            rep.eps = Some(f.eps);
            rep.working_share = out.working_share.as_ref().map(Scalar::as_f64);
            rep.trivial_case = Some(out.trivial);
            rep.truncated = out.truncated;
            if f.inner == Inner::Ptas {
                rep.mode = Some(GuessMode::from(f.mode).as_str().into());
            }
            rep.budget = f.budget;
            rep.guarantee = (f.inner == Inner::Brute).then(|| qptas_factor(f.eps));
            rep
        }
        Algo::Ptas => {
            let out = ptas_solve(inst, f.eps, &ptas_opts)?;
            let mut rep = SolveReport::new(algo.name(), &out.assignment, &out.share);
            rep.eps = Some(f.eps);
            rep.mode = Some(out.mode.as_str().into());
            rep.budget = Some(ptas_opts.budget);
            rep.working_share = out.working_share.as_ref().map(Scalar::as_f64);
            rep.trivial_case = Some(out.trivial);
            rep.guesses_examined = Some(out.examined);
            rep.guesses_feasible = Some(out.feasible);
            rep.truncated = out.truncated;
            rep
        }
    };
    report.threads = f.threads;
    if known_opt.is_none() && !f.no_opt && inst.n() <= AUTO_OPT_MAX_N {
        known_opt = Some(brute_force_with(inst, &brute_opts(None))?.opt);
    }
    if let Some(o) = &known_opt {
        report = report.with_opt(o);
    }
    if !f.no_timing {
        report.duration_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    debug_assert_eq!(
        market_share(
            inst,
            &Assignment::from_one_based(&report.assignment).expect("valid")
        )
        .as_f64(),
        report.share
    );
    Ok(report)
}

fn solve(a: SolveArgs) -> Result<Done, Failure> {
    check_flags(&a.flags)?;
    let (inst, seed) = load(&a.input, &a.flags)?;
    let report = run_algo(&inst, a.algo, &a.flags, seed)?;
    emit(a.output.as_deref(), &pretty(&report))?;
    Ok(Done {
        truncated: report.truncated,
    })
}

fn compare(a: CompareArgs) -> Result<Done, Failure> {
    check_flags(&a.flags)?;
    if a.algos.is_empty() {
        return Err(Failure::Usage(
            "--algos must name at least one algorithm".into(),
        ));
    }
    let (inst, seed) = load(&a.input, &a.flags)?;
    let reports = a
        .algos
        .iter()
        .map(|&algo| run_algo(&inst, algo, &a.flags, seed))
        .collect::<Result<Vec<_>>>()?;
    emit(a.output.as_deref(), &pretty(&reports))?;
    Ok(Done {
        truncated: reports.iter().any(|r| r.truncated),
    })
}

fn verify(a: VerifyArgs) -> Result<Done, Failure> {
    let suite: Suite = a.suite.parse().map_err(Failure::Usage)?;
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if let Some(e) = a.eps {
        if !(e > 0.0 && e < 1.0) {
            return Err(Failure::Usage(format!("--eps must lie in (0, 1), got {e}")));
        }
    }
    let cfg = VerifyConfig {
        suite,
        trials: a.trials,
        seed: a.seed,
        n_max: a.n_max,
        k_max: a.k_max,
        eps: a.eps,
        threads: a.threads.max(1),
    };
    let out = run_suite(&cfg)?;
    emit(a.output.as_deref(), &out.to_csv()?)?;
    eprintln!(
        "{}: {} trials, {} failures, min margin {:.3e}, rng {RNG_ALGORITHM}",
        suite.name(),
        out.rows.len(),
        out.failures(),
        out.min_margin()
    );
    if out.passed() {
        Ok(Done { truncated: false })
    } else {
        Err(Failure::Run(Error::BadSpec(format!(
            "{} trials violate the bound beyond {}",
            out.failures(),
            out.tolerance
        ))))
    }
}

#[derive(Debug, Deserialize)]
struct CalibrationInput {
    costs: Vec<f64>,
    support: Vec<f64>,
    probabilities: Vec<f64>,
}

fn calibrate(a: CalibrateArgs) -> Result<Done, Failure> {
    if !(a.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let input: CalibrationInput =
        serde_json::from_str(&std::fs::read_to_string(&a.input).map_err(Error::from)?)
            .map_err(Error::from)?;
    let dist = WeightDistribution::new(input.support, input.probabilities)?;
    let seq = reservation_sequence(&input.costs, &dist, a.tol)?;
    let out = json!({
        "costs": input.costs,
        "prices": seq.prices,
        "floored": seq.floored,
        "tolerance": a.tol,
    });
    emit(a.output.as_deref(), &pretty(&out))?;
    Ok(Done { truncated: false })
}
