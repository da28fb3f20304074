//! Best-of-family solve.

use std::time::Instant;

use crate::baselines::{brute_force_with, BruteForceOptions, DEFAULT_PERMUTATION_LIMIT};
use crate::error::{Error, Result};
use crate::model::{market_share, share_into, Assignment, Instance};
use crate::ptas::blocks::{block_count, block_decompose, BlockStats};
use crate::ptas::classes::{build_classes, sorted_within_class, ClassStructure};
use crate::ptas::guesses::{enumerate_guesses, oracle_guess, GuessMode, StatGuess};
use crate::ptas::partition::{
    build_partition, is_good_partition, partition_to_assignment, CandidatePartition, GoodnessReport,
};
use crate::reduction::{bounded_ratio_transform, check_epsilon, trivial_case};
use crate::scalar::Scalar;

pub const DEFAULT_GUESS_BUDGET: u64 = 1_000_000;

const BATCH_PER_THREAD: usize = 512;

#[derive(Debug, Clone, Copy)]
pub struct PtasOptions {
    pub mode: GuessMode,
    /// Maximum number of guesses drawn from the stream.
    pub budget: u64,
    pub threads: usize,
    /// Permutation budget for the reference optimum in oracle mode.
    pub oracle_limit: u64,
}

impl Default for PtasOptions {
    fn default() -> Self {
        PtasOptions {
            mode: GuessMode::Count,
            budget: DEFAULT_GUESS_BUDGET,
            threads: 1,
            oracle_limit: DEFAULT_PERMUTATION_LIMIT,
        }
    }
}

/// What oracle mode builds on the rounded instance.
#[derive(Debug, Clone)]
pub struct OracleArtifacts<S> {
    /// Sorted-within-class optimum, the reference assignment.
    pub reference: Assignment,
    pub stats: BlockStats<S>,
    pub guess: StatGuess,
    pub partition: CandidatePartition,
    pub goodness: GoodnessReport<S>,
}

#[derive(Debug, Clone)]
pub struct PtasOutcome<S> {
    pub assignment: Assignment,
    /// Share on the original instance.
    pub share: S,
    /// Share on the rounded instance; absent in the trivial case.
    pub working_share: Option<S>,
    pub trivial: bool,
    pub mode: GuessMode,
    pub examined: u64,
    pub feasible: u64,
    pub truncated: bool,
    pub class_count: usize,
    pub block_count: usize,
    /// The rounded instance the family was built on.
    pub working: Option<Instance<S>>,
    pub classes: Option<ClassStructure<S>>,
    pub oracle: Option<OracleArtifacts<S>>,
    pub elapsed_ms: f64,
}

/// Returns the best assignment over the guess family, evaluated on `inst`.
/// Ties keep the earliest guess in stream order, independent of `threads`.
pub fn ptas_solve<S: Scalar>(
    inst: &Instance<S>,
    eps: f64,
    opts: &PtasOptions,
) -> Result<PtasOutcome<S>> {
    check_epsilon(eps)?;
    let started = Instant::now();
    if let Some(a) = trivial_case(inst, eps) {
        return Ok(PtasOutcome {
            share: market_share(inst, &a),
            assignment: a,
            working_share: None,
            trivial: true,
            mode: opts.mode,
            examined: 0,
            feasible: 0,
            truncated: false,
            class_count: 0,
            block_count: 0,
            working: None,
            classes: None,
            oracle: None,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        });
    }
    let working = bounded_ratio_transform(inst, eps)?.modified;
    let cs = build_classes(&working, eps)?;

    let (assignment, examined, feasible, truncated, oracle) = match opts.mode {
        GuessMode::Oracle => {
            let opt = brute_force_with(
                &working,
                &BruteForceOptions {
                    limit: opts.oracle_limit,
                    threads: opts.threads,
                    ..Default::default()
                },
            )?;
            let reference = sorted_within_class(&opt.best, &cs);
            let stats = block_decompose(&working, &reference, &cs)?;
            let guess = oracle_guess(&stats, &cs);
            let partition = build_partition(&cs, &guess)?;
            let assignment = partition_to_assignment(&partition, &cs)?;
            let goodness = is_good_partition(&partition, &stats, &cs);
            let artifacts = OracleArtifacts {
                reference,
                stats,
                guess,
                partition,
                goodness,
            };
            (assignment, 1, 1, false, Some(artifacts))
        }
        mode => {
            if opts.budget == 0 {
                return Err(Error::BudgetExceeded {
                    needed: 1,
                    limit: 0,
                });
            }
            let mut stream = enumerate_guesses(&cs, mode, opts.budget);
            let threads = opts.threads.max(1);
            let mut best: Option<Scored<S>> = None;
            let mut examined = 0;
            let mut feasible = 0;
            loop {
                let batch: Vec<StatGuess> =
                    stream.by_ref().take(BATCH_PER_THREAD * threads).collect();
                if batch.is_empty() {
                    break;
                }
                examined += batch.len() as u64;
                let scored = score_batch(inst, &cs, &batch, threads);
                feasible += scored.feasible;
                if let Some(s) = scored.best {
                    if best.as_ref().is_none_or(|b| s.share > b.share) {
                        best = Some(s);
                    }
                }
            }
            let best = best.expect("the all-zero guess is always feasible");
            (
                Assignment::from_order(best.order)?,
                examined,
                feasible,
                stream.truncated(),
                None,
            )
        }
    };

    Ok(PtasOutcome {
        share: market_share(inst, &assignment),
        working_share: Some(market_share(&working, &assignment)),
        assignment,
        trivial: false,
        mode: opts.mode,
        examined,
        feasible,
        truncated,
        class_count: cs.class_count(),
        block_count: block_count(eps),
        working: Some(working),
        classes: Some(cs),
        oracle,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

struct Scored<S> {
    share: S,
    order: Vec<usize>,
}

struct BatchResult<S> {
    best: Option<Scored<S>>,
    feasible: u64,
}

fn score_slice<S: Scalar>(
    inst: &Instance<S>,
    cs: &ClassStructure<S>,
    guesses: &[StatGuess],
) -> BatchResult<S> {
    let mut buf = Vec::with_capacity(inst.n());
    let mut best: Option<Scored<S>> = None;
    let mut feasible = 0;
    for g in guesses {
        let Ok(a) = build_partition(cs, g).and_then(|p| partition_to_assignment(&p, cs)) else {
            continue;
        };
        feasible += 1;
        let share = share_into(inst, a.order(), &mut buf);
        if best.as_ref().is_none_or(|b| share > b.share) {
            best = Some(Scored {
                share,
                order: a.order().to_vec(),
            });
        }
    }
    BatchResult { best, feasible }
}

fn score_batch<S: Scalar>(
    inst: &Instance<S>,
    cs: &ClassStructure<S>,
    batch: &[StatGuess],
    threads: usize,
) -> BatchResult<S> {
    if threads == 1 || batch.len() < 2 {
        return score_slice(inst, cs, batch);
    }
    let chunk = batch.len().div_ceil(threads);
    let parts: Vec<BatchResult<S>> = std::thread::scope(|scope| {
        let handles: Vec<_> = batch
            .chunks(chunk)
            .map(|c| scope.spawn(move || score_slice(inst, cs, c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scoring worker panicked"))
            .collect()
    });
    let mut out = BatchResult {
        best: None,
        feasible: 0,
    };
    for p in parts {
        out.feasible += p.feasible;
        if let Some(s) = p.best {
            if out.best.as_ref().is_none_or(|b| s.share > b.share) {
                out.best = Some(s);
            }
        }
    }
    out
}
