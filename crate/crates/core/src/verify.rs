//! Randomized checks of the approximation guarantees against brute force.
//!
//! Each suite draws seeded instances, computes the guaranteed lower bound
//! from an exact optimum, and records the margin `value - bound`. A trial
//! passes when its margin is at least `-tolerance`.

use rand::Rng;
use serde::Serialize;

use crate::baselines::{brute_force_opt, brute_force_sorted_within_class, w_ordering};
use crate::error::{Error, Result};
use crate::hardness::{decide_three_partition, ThreePartitionInstance};
use crate::model::{market_share, Instance};
use crate::ptas::{ptas_solve, GuessMode, PtasOptions};
use crate::random::{rng, sample, sample_bounded, RandomSpec};
use crate::reduction::{bounded_ratio_transform, quasi_ptas, BruteForceSolver};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The w-ordering bound is checked more tightly.
pub const WORDER_TOLERANCE: f64 = 1e-12;

/// Additive slack in the w-ordering guarantee.
pub const WORDER_GAP: f64 = 0.1716;

const PERMUTATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Worder,
    SortedClasses,
    Rounding,
    Composition,
    GoodPartition,
    OraclePipeline,
    Hardness,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Worder,
        Suite::SortedClasses,
        Suite::Rounding,
        Suite::Composition,
        Suite::GoodPartition,
        Suite::OraclePipeline,
        Suite::Hardness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Worder => "worder",
            Suite::SortedClasses => "sorted-classes",
            Suite::Rounding => "rounding",
            Suite::Composition => "composition",
            Suite::GoodPartition => "good-partition",
            Suite::OraclePipeline => "oracle-pipeline",
            Suite::Hardness => "hardness",
        }
    }

    /// Values of `eps` cycled through when none is given.
    pub fn default_eps(self) -> &'static [f64] {
        match self {
            Suite::Worder | Suite::Hardness => &[],
            Suite::SortedClasses => &[0.1, 0.3],
            Suite::Rounding | Suite::Composition => &[0.1, 0.25],
            Suite::GoodPartition | Suite::OraclePipeline => &[0.05, 0.1],
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Worder => WORDER_TOLERANCE,
            _ => DEFAULT_TOLERANCE,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub n_max: usize,
    pub k_max: usize,
    pub eps: Option<f64>,
    pub threads: usize,
}

impl VerifyConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64) -> Self {
        VerifyConfig {
            suite,
            trials,
            seed,
            n_max: 7,
            k_max: 4,
            eps: None,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub suite: &'static str,
    pub trial: usize,
    pub n: usize,
    pub k: usize,
    pub eps: Option<f64>,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub rows: Vec<TrialRow>,
    pub tolerance: f64,
}

impl VerifyOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn min_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

struct Trial {
    n: usize,
    k: usize,
    value: f64,
    bound: f64,
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyOutcome> {
    if cfg.trials == 0 {
        return Err(Error::BadSpec("trials must be at least 1".into()));
    }
    if cfg.n_max == 0 || cfg.k_max == 0 {
        return Err(Error::BadSpec("n_max and k_max must be at least 1".into()));
    }
    let tolerance = cfg.suite.tolerance();
    if cfg.suite == Suite::Hardness {
        return hardness_rows(cfg, tolerance);
    }
    let mut r = rng(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let eps = cfg.eps.or_else(|| {
            let list = cfg.suite.default_eps();
            (!list.is_empty()).then(|| list[trial % list.len()])
        });
        let n = r.random_range(1..=cfg.n_max);
        let k = r.random_range(1..=cfg.k_max);
        let spec = RandomSpec::new(n, k, cfg.seed);
        let t = run_trial(cfg, &spec, eps, &mut r)?;
        let margin = t.value - t.bound;
        rows.push(TrialRow {
            suite: cfg.suite.name(),
            trial,
            n: t.n,
            k: t.k,
            eps,
            value: t.value,
            bound: t.bound,
            margin,
            pass: margin >= -tolerance,
        });
    }
    Ok(VerifyOutcome { rows, tolerance })
}

fn opt_of(inst: &Instance<f64>) -> Result<f64> {
    Ok(brute_force_opt(inst, PERMUTATION_LIMIT)?.opt)
}

fn run_trial<R: Rng>(
    cfg: &VerifyConfig,
    spec: &RandomSpec,
    eps: Option<f64>,
    r: &mut R,
) -> Result<Trial> {
    let eps_or = |e: Option<f64>| e.ok_or_else(|| Error::BadSpec("suite needs eps".into()));
    let (inst, value, bound) = match cfg.suite {
        Suite::Worder => {
            let inst = sample(spec, r)?;
            let opt = opt_of(&inst)?;
            let m = market_share(&inst, &w_ordering(&inst));
            (inst, m, (opt / 2.0).max(opt - WORDER_GAP))
        }
        Suite::SortedClasses => {
            let e = eps_or(eps)?;
            let inst = sample_bounded(&spec.clone().weights(1e-4, 1.0 / e), e, r)?;
            let opt = opt_of(&inst)?;
            let swc = brute_force_sorted_within_class(&inst, e, PERMUTATION_LIMIT)?.opt;
            (inst, swc, (1.0 - e) * opt)
        }
        Suite::Rounding => {
            let e = eps_or(eps)?;
            let inst = sample(&spec.clone().weights(1e-4, 1.0 / e), r)?;
            let rounded = bounded_ratio_transform(&inst, e)?.modified;
            (inst.clone(), opt_of(&rounded)?, (1.0 - e) * opt_of(&inst)?)
        }
        Suite::Composition => {
            let e = eps_or(eps)?;
            let inst = sample(&spec.clone().weights(1e-4, 2.0 / e), r)?;
            let out = quasi_ptas(&inst, e, &BruteForceSolver::default())?;
            (inst.clone(), out.share, (1.0 - 3.0 * e) * opt_of(&inst)?)
        }
        Suite::GoodPartition => {
            let e = eps_or(eps)?;
            let inst = sample_bounded(&spec.clone().weights(1e-4, 1.0 / e), e, r)?;
            let out = ptas_solve(&inst, e, &oracle_options(cfg))?;
            let good = out
                .oracle
                .expect("oracle mode keeps its artifacts")
                .goodness;
            // A failed boolean property counts as a unit violation.
            let margin = if good.is_good() {
                good.weight_margin().min(1.0)
            } else {
                -1.0
            };
            (inst, margin, 0.0)
        }
        Suite::OraclePipeline => {
            let e = eps_or(eps)?;
            let inst = sample(&spec.clone().weights(1e-3, 1.0 / e), r)?;
            let out = ptas_solve(&inst, e, &oracle_options(cfg))?;
            (inst.clone(), out.share, (1.0 - 13.0 * e) * opt_of(&inst)?)
        }
        Suite::Hardness => unreachable!("handled separately"),
    };
    Ok(Trial {
        n: inst.n(),
        k: inst.k(),
        value,
        bound,
    })
}

fn oracle_options(cfg: &VerifyConfig) -> PtasOptions {
    PtasOptions {
        mode: GuessMode::Oracle,
        threads: cfg.threads,
        oracle_limit: PERMUTATION_LIMIT,
        ..Default::default()
    }
}

/// Fixed fixtures with known answers.
pub fn hardness_fixtures() -> Vec<(Vec<u64>, u64, bool)> {
    vec![
        (vec![3, 3, 3], 9, true),
        (vec![5, 5, 5, 5, 5, 5], 15, true),
        (vec![4, 4, 4, 6, 6, 6], 15, false),
        (vec![4, 5, 6, 4, 5, 6], 15, true),
    ]
}

fn hardness_rows(cfg: &VerifyConfig, tolerance: f64) -> Result<VerifyOutcome> {
    let mut rows = Vec::new();
    for (trial, (a, t, expected)) in hardness_fixtures().into_iter().enumerate() {
        let tp = ThreePartitionInstance::new(a, t)?;
        let d = decide_three_partition(&tp, PERMUTATION_LIMIT, cfg.threads)?;
        let margin = if d.yes == expected { 1.0 } else { -1.0 };
        rows.push(TrialRow {
            suite: Suite::Hardness.name(),
            trial,
            n: 4 * tp.k(),
            k: tp.k(),
            eps: None,
            value: crate::scalar::Scalar::as_f64(&d.opt),
            bound: crate::scalar::Scalar::as_f64(&d.threshold),
            margin,
            pass: margin >= -tolerance,
        });
    }
    Ok(VerifyOutcome { rows, tolerance })
}
