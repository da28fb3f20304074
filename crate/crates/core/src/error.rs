use std::fmt;

/// A single broken invariant found while validating an instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyInstance,
    NoSegments,
    /// Product index is 1-based.
    NonPositiveWeight {
        product: usize,
    },
    /// Segment and position are 1-based; `position` is the first position whose price rises.
    PricesNotDecreasing {
        segment: usize,
        position: usize,
    },
    NegativePrice {
        segment: usize,
        position: usize,
    },
    NegativeProportion {
        segment: usize,
    },
    ProportionsNotNormalized {
        sum: f64,
    },
    LengthMismatch {
        segment: usize,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyInstance => write!(f, "instance has no products"),
            Violation::NoSegments => write!(f, "instance has no customer segments"),
            Violation::NonPositiveWeight { product } => {
                write!(f, "product {product} has a non-positive weight")
            }
            Violation::PricesNotDecreasing { segment, position } => write!(
                f,
                "segment {segment}: reservation price increases at position {position}"
            ),
            Violation::NegativePrice { segment, position } => {
                write!(
                    f,
                    "segment {segment}: negative price at position {position}"
                )
            }
            Violation::NegativeProportion { segment } => {
                write!(f, "segment {segment} has a negative proportion")
            }
            Violation::ProportionsNotNormalized { sum } => {
                write!(f, "segment proportions sum to {sum}, not 1")
            }
            Violation::LengthMismatch {
                segment,
                expected,
                found,
            } => write!(
                f,
                "segment {segment} has {found} prices, expected {expected}"
            ),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("search cost must be positive, got {0}")]
    NonPositiveCost(f64),
    #[error("search costs must be weakly increasing (position {position})")]
    CostsNotIncreasing { position: usize },
    #[error("no reservation price in the search bracket for cost {cost}")]
    BracketExhausted { cost: f64 },
    #[error("invalid weight distribution: {0}")]
    InvalidDistribution(String),
    #[error("prefix weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("enumeration needs {needed} candidates but the budget is {limit}")]
    BudgetExceeded { needed: u128, limit: u64 },
    #[error("instance is not bounded-ratio for epsilon {eps}: {reason}")]
    NotBoundedRatio { eps: f64, reason: String },
    #[error("w_max exceeds 1/epsilon; handle the trivial case first")]
    TrivialCaseNotHandled,
    #[error("statistics guess is infeasible: {0}")]
    GuessInfeasible(String),
    #[error("block {block} designates a head class with no product in its subset")]
    MissingHeadProduct { block: usize },
    #[error("malformed 3-partition instance: {0}")]
    MalformedThreePartition(String),
    #[error("not a valid 3-partition: {0}")]
    NotAValidPartition(String),
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
