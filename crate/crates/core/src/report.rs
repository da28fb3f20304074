//! Serializable solver reports.

use serde::{Deserialize, Serialize};

use crate::model::Assignment;
use crate::scalar::{NumericMode, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub threads: usize,
    pub numeric_mode: NumericMode,
    /// 1-based products by position.
    pub assignment: Vec<usize>,
    pub share: f64,
    /// `p/q` in rational mode.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub share_exact: Option<String>,
    /// Share on the rounded instance, for algorithms that build one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub working_share: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub opt_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<f64>,
    /// Approximation factor the algorithm guarantees, when it has one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub guarantee: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trivial_case: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub guesses_examined: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub guesses_feasible: Option<u64>,
    pub truncated: bool,
    /// Wall-clock time; omitted when timing is switched off.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rng: Option<String>,
}

/// The exact `p/q` text of a rational value; `None` for floats.
pub fn exact_text<S: Scalar>(x: &S) -> Option<String> {
    match S::MODE {
        NumericMode::Rational => x.to_json().as_str().map(str::to_owned),
        NumericMode::Float => None,
    }
}

impl SolveReport {
    pub fn new<S: Scalar>(algorithm: &str, assignment: &Assignment, share: &S) -> Self {
        SolveReport {
            algorithm: algorithm.into(),
            inner: None,
            eps: None,
            mode: None,
            budget: None,
            seed: None,
            threads: 1,
            numeric_mode: S::MODE,
            assignment: assignment.to_one_based(),
            share: share.as_f64(),
            share_exact: exact_text(share),
            working_share: None,
            opt: None,
            opt_exact: None,
            ratio: None,
            guarantee: None,
            trivial_case: None,
            guesses_examined: None,
            guesses_feasible: None,
            truncated: false,
            duration_ms: None,
            rng: None,
        }
    }

    /// Records the optimum and the ratio `share / opt`.
    pub fn with_opt<S: Scalar>(mut self, opt: &S) -> Self {
        self.opt = Some(opt.as_f64());
        self.opt_exact = exact_text(opt);
        let o = opt.as_f64();
        self.ratio = Some(if o > 0.0 { self.share / o } else { 1.0 });
        self
    }
}
