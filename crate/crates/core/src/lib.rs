//! Ranking products to maximize MNL market share under reservation-price
//! search.
//!
//! Customers inspect a ranked list until the accumulated preference weight
//! of the inspected prefix meets a position-dependent reservation price, then
//! buy from that prefix according to a multinomial logit model. The crate
//! evaluates rankings exactly, computes optimal rankings by enumeration,
//! and implements the w-ordering heuristic, the bounded-ratio reduction and
//! a partition-enumeration approximation scheme. A generator for the
//! 3-partition hardness instances is included.
//!
//! All solvers are generic over [`Scalar`], with `f64` and exact
//! `BigRational` backends.

pub mod baselines;
pub mod calibration;
pub mod cli;
pub mod error;
pub mod hardness;
pub mod io;
pub mod model;
pub mod ptas;
pub mod random;
pub mod reduction;
pub mod report;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result, Violation};
pub use model::{
    evaluate, market_share, prefix_weights, stopping_point, Assignment, Evaluation, Instance,
    Segment,
};
pub use scalar::{NumericMode, Scalar};

/// Exact rational scalar.
pub type Rational = num::BigRational;
