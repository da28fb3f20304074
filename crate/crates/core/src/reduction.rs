//! Reduction to bounded-ratio instances and the composed approximation.
//!
//! When `w_max > 1/eps` the heaviest product alone secures a `(1 - eps)`
//! fraction of the optimum, so any ranking that shows it first will do.
//! Otherwise every weight below `delta w_max`, `delta = eps^2/(2n)`, is
//! rounded up to `delta w_max`; an approximate ranking for the rounded
//! instance loses at most a further `2 eps` on the original.

use crate::baselines::{brute_force_with, w_ordering, BruteForceOptions};
use crate::error::{Error, Result};
use crate::model::{market_share, Assignment, Instance};
use crate::ptas::{ptas_solve, PtasOptions};
use crate::scalar::Scalar;

pub fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(eps))
    }
}

/// `eps^2 / (2n)`.
pub fn delta<S: Scalar>(n: usize, eps: f64) -> S {
    let e = S::lift(eps);
    e.clone() * e / S::from_usize(2 * n)
}

/// `delta w_max`, the rounding floor. Weight classes start at this value too,
/// so both are computed by this one expression.
pub fn weight_floor<S: Scalar>(w_max: &S, n: usize, eps: f64) -> S {
    delta::<S>(n, eps) * w_max.clone()
}

/// Heaviest-first ranking when `w_max > 1/eps`, otherwise `None`.
pub fn trivial_case<S: Scalar>(inst: &Instance<S>, eps: f64) -> Option<Assignment> {
    if inst.w_max() * S::lift(eps) > S::one() {
        Some(w_ordering(inst))
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub struct BoundedRatioTransform<S> {
    pub original: Instance<S>,
    pub modified: Instance<S>,
    pub delta: S,
    /// `delta w_max`.
    pub floor: S,
    /// 0-based products whose weight was raised.
    pub rounded: Vec<usize>,
}

pub fn bounded_ratio_transform<S: Scalar>(
    inst: &Instance<S>,
    eps: f64,
) -> Result<BoundedRatioTransform<S>> {
    check_epsilon(eps)?;
    let w_max = inst.w_max();
    if w_max.clone() * S::lift(eps) > S::one() {
        return Err(Error::TrivialCaseNotHandled);
    }
    let n = inst.n();
    let floor = weight_floor(&w_max, n, eps);
    let mut rounded = Vec::new();
    let weights = inst
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if *w < floor {
                rounded.push(i);
                floor.clone()
            } else {
                w.clone()
            }
        })
        .collect();
    Ok(BoundedRatioTransform {
        original: inst.clone(),
        modified: inst.with_weights(weights)?,
        delta: delta(n, eps),
        floor,
        rounded,
    })
}

#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub assignment: Assignment,
    /// The solver stopped early and its answer carries no guarantee.
    pub truncated: bool,
}

/// A solver for bounded-ratio instances, expected to return a
/// `(1 - eps)`-approximate ranking.
pub trait BoundedRatioSolver<S: Scalar> {
    fn name(&self) -> &'static str;
    fn solve(&self, inst: &Instance<S>, eps: f64) -> Result<SolverOutput>;
}

/// Exact optimum by enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceSolver {
    pub options: BruteForceOptions,
}

impl<S: Scalar> BoundedRatioSolver<S> for BruteForceSolver {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn solve(&self, inst: &Instance<S>, _eps: f64) -> Result<SolverOutput> {
        let r = brute_force_with(inst, &self.options)?;
        Ok(SolverOutput {
            assignment: r.best,
            truncated: false,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PtasSolver {
    pub options: PtasOptions,
}

impl<S: Scalar> BoundedRatioSolver<S> for PtasSolver {
    fn name(&self) -> &'static str {
        "ptas"
    }

    fn solve(&self, inst: &Instance<S>, eps: f64) -> Result<SolverOutput> {
        let out = ptas_solve(inst, eps, &self.options)?;
        Ok(SolverOutput {
            assignment: out.assignment,
            truncated: out.truncated,
        })
    }
}

#[derive(Debug, Clone)]
pub struct QptasOutcome<S> {
    pub assignment: Assignment,
    /// Share on the original instance.
    pub share: S,
    /// Share of the same ranking on the rounded instance; absent in the trivial case.
    pub working_share: Option<S>,
    pub trivial: bool,
    pub solver: &'static str,
    pub truncated: bool,
    pub transform: Option<BoundedRatioTransform<S>>,
}

/// The guaranteed factor `1 - 3 eps` of the composition.
pub fn qptas_factor(eps: f64) -> f64 {
    1.0 - 3.0 * eps
}

pub fn quasi_ptas<S: Scalar>(
    inst: &Instance<S>,
    eps: f64,
    solver: &dyn BoundedRatioSolver<S>,
) -> Result<QptasOutcome<S>> {
    check_epsilon(eps)?;
    if let Some(a) = trivial_case(inst, eps) {
        return Ok(QptasOutcome {
            share: market_share(inst, &a),
            assignment: a,
            working_share: None,
            trivial: true,
            solver: solver.name(),
            truncated: false,
            transform: None,
        });
    }
    let t = bounded_ratio_transform(inst, eps)?;
    let out = solver.solve(&t.modified, eps)?;
    Ok(QptasOutcome {
        share: market_share(inst, &out.assignment),
        working_share: Some(market_share(&t.modified, &out.assignment)),
        assignment: out.assignment,
        trivial: false,
        solver: solver.name(),
        truncated: out.truncated,
        transform: Some(t),
    })
}
