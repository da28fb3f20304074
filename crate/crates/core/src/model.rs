//! Products, customer segments, assignments and market-share evaluation.
//!
//! Products are indexed `0..n` internally; every external format is 1-based.
//! A customer of segment `k` inspects positions in order and stops at the
//! first position `p` whose prefix weight reaches `r^k_p` (or at `n`). Her
//! consideration set is that prefix, and she buys with probability
//! `w(C) / (1 + w(C))`.

use crate::error::{Error, Result, Violation};
use crate::scalar::{NumericMode, Scalar};

/// Proportions must sum to one within this tolerance in float mode.
pub const PROPORTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Segment<S> {
    pub theta: S,
    pub prices: Vec<S>,
}

impl<S> Segment<S> {
    pub fn new(theta: S, prices: Vec<S>) -> Self {
        Segment { theta, prices }
    }
}

/// Unvalidated instance data, as read from a file or built by hand.
#[derive(Debug, Clone, PartialEq)]
pub struct RawInstance<S> {
    pub weights: Vec<S>,
    pub segments: Vec<Segment<S>>,
}

/// A validated market-share ranking instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    weights: Vec<S>,
    segments: Vec<Segment<S>>,
}

/// Checks every invariant and returns all violations at once.
pub fn validate_instance<S: Scalar>(raw: RawInstance<S>) -> Result<Instance<S>> {
    let mut violations = Vec::new();
    let n = raw.weights.len();
    if n == 0 {
        violations.push(Violation::EmptyInstance);
    }
    if raw.segments.is_empty() {
        violations.push(Violation::NoSegments);
    }
    for (i, w) in raw.weights.iter().enumerate() {
        if *w <= S::zero() {
            violations.push(Violation::NonPositiveWeight { product: i + 1 });
        }
    }
    let mut theta_sum = S::zero();
    for (k, seg) in raw.segments.iter().enumerate() {
        if seg.theta < S::zero() {
            violations.push(Violation::NegativeProportion { segment: k + 1 });
        }
        theta_sum = theta_sum + seg.theta.clone();
        if seg.prices.len() != n {
            violations.push(Violation::LengthMismatch {
                segment: k + 1,
                expected: n,
                found: seg.prices.len(),
            });
            continue;
        }
        if let Some(p) = seg.prices.windows(2).position(|w| w[1] > w[0]) {
            violations.push(Violation::PricesNotDecreasing {
                segment: k + 1,
                position: p + 2,
            });
        }
        if let Some(p) = seg.prices.iter().position(|r| *r < S::zero()) {
            violations.push(Violation::NegativePrice {
                segment: k + 1,
                position: p + 1,
            });
        }
    }
    if !raw.segments.is_empty() {
        let normalized = match S::MODE {
            NumericMode::Rational => theta_sum == S::one(),
            NumericMode::Float => (theta_sum.as_f64() - 1.0).abs() <= PROPORTION_TOLERANCE,
        };
        if !normalized {
            violations.push(Violation::ProportionsNotNormalized {
                sum: theta_sum.as_f64(),
            });
        }
    }
    if violations.is_empty() {
        Ok(Instance {
            weights: raw.weights,
            segments: raw.segments,
        })
    } else {
        Err(Error::InvalidInstance(violations))
    }
}

impl<S: Scalar> Instance<S> {
    pub fn new(weights: Vec<S>, segments: Vec<Segment<S>>) -> Result<Self> {
        validate_instance(RawInstance { weights, segments })
    }

    /// Same segments, different weights.
    pub fn with_weights(&self, weights: Vec<S>) -> Result<Self> {
        Self::new(weights, self.segments.clone())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn k(&self) -> usize {
        self.segments.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn weight(&self, product: usize) -> &S {
        &self.weights[product]
    }

    pub fn segments(&self) -> &[Segment<S>] {
        &self.segments
    }

    pub fn w_max(&self) -> S {
        self.weights
            .iter()
            .skip(1)
            .fold(self.weights[0].clone(), |m, w| S::max_of(&m, w))
    }

    pub fn w_min(&self) -> S {
        self.weights
            .iter()
            .skip(1)
            .fold(self.weights[0].clone(), |m, w| S::min_of(&m, w))
    }

    pub fn total_weight(&self) -> S {
        self.weights
            .iter()
            .fold(S::zero(), |acc, w| acc + w.clone())
    }

    pub fn into_raw(self) -> RawInstance<S> {
        RawInstance {
            weights: self.weights,
            segments: self.segments,
        }
    }

    /// Converts to another numeric backend (float to rational is exact).
    ///
    /// Rational targets re-normalize the last proportion so the sum is exactly one.
    pub fn convert<T: Scalar>(&self) -> Result<Instance<T>> {
        let weights = self.weights.iter().map(crate::scalar::convert).collect();
        let mut segments: Vec<Segment<T>> = self
            .segments
            .iter()
            .map(|s| Segment {
                theta: crate::scalar::convert(&s.theta),
                prices: s.prices.iter().map(crate::scalar::convert).collect(),
            })
            .collect();
        if T::MODE == NumericMode::Rational && S::MODE == NumericMode::Float {
            let (last, rest) = segments.split_last_mut().expect("at least one segment");
            let head = rest.iter().fold(T::zero(), |acc, s| acc + s.theta.clone());
            last.theta = T::one() - head;
        }
        Instance::new(weights, segments)
    }
}

/// A bijection from positions to products; `order[p]` is the product at
/// 0-based position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    order: Vec<usize>,
}

impl Assignment {
    pub fn identity(n: usize) -> Self {
        Assignment {
            order: (0..n).collect(),
        }
    }

    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::InvalidAssignment(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Assignment { order })
    }

    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::InvalidAssignment(
                "1-based product indices must be positive".into(),
            ));
        }
        Self::from_order(order.iter().map(|i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.order.iter().map(|i| i + 1).collect()
    }

    pub fn product_at(&self, position: usize) -> usize {
        self.order[position]
    }

    /// Inverse map: `positions()[i]` is the 0-based position of product `i`.
    pub fn positions(&self) -> Vec<usize> {
        let mut inv = vec![0; self.order.len()];
        for (p, &i) in self.order.iter().enumerate() {
            inv[i] = p;
        }
        inv
    }

    /// The first `len` products.
    pub fn prefix(&self, len: usize) -> &[usize] {
        &self.order[..len]
    }

    fn check<S>(&self, inst: &Instance<S>) {
        assert_eq!(
            self.order.len(),
            inst.weights.len(),
            "assignment and instance sizes differ"
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<S> {
    /// Stopping point of each segment, as a 1-based position (equivalently the
    /// size of its consideration set).
    pub stops: Vec<usize>,
    pub consideration_weights: Vec<S>,
    pub segment_shares: Vec<S>,
    pub share: S,
}

/// Entry `p` is the total weight of the first `p + 1` products.
pub fn prefix_weights<S: Scalar>(inst: &Instance<S>, a: &Assignment) -> Vec<S> {
    a.check(inst);
    let mut acc = S::zero();
    a.order
        .iter()
        .map(|&i| {
            acc = acc.clone() + inst.weights[i].clone();
            acc.clone()
        })
        .collect()
}

fn stop_from_prefix<S: Scalar>(prefix: &[S], prices: &[S]) -> usize {
    prefix
        .iter()
        .zip(prices)
        .position(|(w, r)| w >= r)
        .map_or(prefix.len(), |p| p + 1)
}

/// Minimal 1-based `p` with `w(A[1,p]) >= r^k_p`, or `n` when never met.
pub fn stopping_point<S: Scalar>(inst: &Instance<S>, a: &Assignment, segment: usize) -> usize {
    let prefix = prefix_weights(inst, a);
    stop_from_prefix(&prefix, &inst.segments[segment].prices)
}

/// `w / (1 + w)`.
pub fn share_of_weight<S: Scalar>(w: &S) -> S {
    w.clone() / (S::one() + w.clone())
}

pub fn evaluate<S: Scalar>(inst: &Instance<S>, a: &Assignment) -> Evaluation<S> {
    let prefix = prefix_weights(inst, a);
    evaluate_with_prefix(inst, &prefix)
}

pub(crate) fn evaluate_with_prefix<S: Scalar>(inst: &Instance<S>, prefix: &[S]) -> Evaluation<S> {
    let k = inst.segments.len();
    let mut stops = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    let mut shares = Vec::with_capacity(k);
    let mut share = S::zero();
    for seg in &inst.segments {
        let s = stop_from_prefix(prefix, &seg.prices);
        let w = prefix[s - 1].clone();
        let m = share_of_weight(&w);
        share = share + seg.theta.clone() * m.clone();
        stops.push(s);
        weights.push(w);
        shares.push(m);
    }
    Evaluation {
        stops,
        consideration_weights: weights,
        segment_shares: shares,
        share,
    }
}

/// Market share only; reuses `buf` for the prefix sums.
pub(crate) fn share_into<S: Scalar>(inst: &Instance<S>, order: &[usize], buf: &mut Vec<S>) -> S {
    buf.clear();
    let mut acc = S::zero();
    for &i in order {
        acc = acc + inst.weights[i].clone();
        buf.push(acc.clone());
    }
    let mut share = S::zero();
    for seg in &inst.segments {
        let s = stop_from_prefix(buf, &seg.prices);
        share = share + seg.theta.clone() * share_of_weight(&buf[s - 1]);
    }
    share
}

pub fn market_share<S: Scalar>(inst: &Instance<S>, a: &Assignment) -> S {
    a.check(inst);
    share_into(inst, &a.order, &mut Vec::with_capacity(a.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn e1() -> Instance<f64> {
        Instance::new(
            vec![2.0, 1.0, 0.5],
            vec![Segment::new(1.0, vec![3.0, 1.5, 0.0])],
        )
        .unwrap()
    }

    fn violations(err: Error) -> Vec<Violation> {
        match err {
            Error::InvalidInstance(v) => v,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn minimal_instance_is_valid() {
        let inst = Instance::new(vec![1.0], vec![Segment::new(1.0, vec![0.0])]).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.k(), 1);
    }

    #[test]
    fn increasing_prices_are_rejected() {
        let err =
            Instance::new(vec![1.0, 1.0], vec![Segment::new(1.0, vec![1.0, 2.0])]).unwrap_err();
        assert_eq!(
            violations(err),
            vec![Violation::PricesNotDecreasing {
                segment: 1,
                position: 2
            }]
        );
    }

    #[test]
    fn proportions_must_sum_to_one() {
        let err = Instance::new(
            vec![1.0],
            vec![Segment::new(0.5, vec![0.0]), Segment::new(0.4, vec![0.0])],
        )
        .unwrap_err();
        assert!(matches!(
            violations(err)[..],
            [Violation::ProportionsNotNormalized { .. }]
        ));
    }

    #[test]
    fn all_violations_are_reported() {
        let err = Instance::<f64>::new(vec![], vec![]).unwrap_err();
        let v = violations(err);
        assert!(v.contains(&Violation::EmptyInstance));
        assert!(v.contains(&Violation::NoSegments));
        let err =
            Instance::new(vec![0.0, -1.0], vec![Segment::new(1.0, vec![1.0, 0.0])]).unwrap_err();
        assert_eq!(
            violations(err),
            vec![
                Violation::NonPositiveWeight { product: 1 },
                Violation::NonPositiveWeight { product: 2 }
            ]
        );
    }

    #[test]
    fn zero_proportion_segments_are_allowed() {
        let inst = Instance::new(
            vec![1.0],
            vec![Segment::new(0.0, vec![5.0]), Segment::new(1.0, vec![0.0])],
        )
        .unwrap();
        assert_eq!(evaluate(&inst, &Assignment::identity(1)).share, 0.5);
    }

    #[test]
    fn rational_proportions_are_exact() {
        let third = BigRational::new(1.into(), 3.into());
        let one = BigRational::from_integer(1.into());
        let seg =
            |t: &BigRational| Segment::new(t.clone(), vec![BigRational::from_integer(0.into())]);
        assert!(Instance::new(
            vec![one.clone()],
            vec![seg(&third), seg(&third), seg(&third)]
        )
        .is_ok());
        let almost = BigRational::new(333.into(), 1000.into());
        assert!(Instance::new(vec![one], vec![seg(&almost), seg(&third), seg(&third)]).is_err());
    }

    #[test]
    fn stopping_rule_examples() {
        let inst = e1();
        let a = Assignment::identity(3);
        // prefix weights 2 < 3, then 3 >= 1.5
        assert_eq!(stopping_point(&inst, &a, 0), 2);

        let free = Instance::new(vec![0.1, 5.0], vec![Segment::new(1.0, vec![0.0, 0.0])]).unwrap();
        assert_eq!(stopping_point(&free, &Assignment::identity(2), 0), 1);

        let never =
            Instance::new(vec![1.0, 1.0], vec![Segment::new(1.0, vec![10.0, 10.0])]).unwrap();
        assert_eq!(stopping_point(&never, &Assignment::identity(2), 0), 2);
    }

    #[test]
    fn ties_stop_exactly() {
        let inst = Instance::new(vec![1.5, 1.0], vec![Segment::new(1.0, vec![1.5, 1.5])]).unwrap();
        assert_eq!(stopping_point(&inst, &Assignment::identity(2), 0), 1);
    }

    #[test]
    fn evaluate_examples() {
        let ev = evaluate(&e1(), &Assignment::identity(3));
        assert_eq!(ev.stops, vec![2]);
        assert_eq!(ev.consideration_weights, vec![3.0]);
        assert_eq!(ev.share, 0.75);

        let single = Instance::new(vec![1.0], vec![Segment::new(1.0, vec![0.0])]).unwrap();
        assert_eq!(evaluate(&single, &Assignment::identity(1)).share, 0.5);

        let twice = Instance::new(
            vec![2.0, 1.0, 0.5],
            vec![
                Segment::new(0.5, vec![3.0, 1.5, 0.0]),
                Segment::new(0.5, vec![3.0, 1.5, 0.0]),
            ],
        )
        .unwrap();
        assert_eq!(evaluate(&twice, &Assignment::identity(3)).share, 0.75);
    }

    #[test]
    fn prefix_weight_examples() {
        let a = Assignment::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(prefix_weights(&e1(), &a), vec![0.5, 2.5, 3.5]);
        let single = Instance::new(vec![1.25], vec![Segment::new(1.0, vec![0.0])]).unwrap();
        assert_eq!(
            prefix_weights(&single, &Assignment::identity(1)),
            vec![1.25]
        );
        let flat = Instance::new(vec![0.5; 4], vec![Segment::new(1.0, vec![0.0; 4])]).unwrap();
        assert_eq!(
            prefix_weights(&flat, &Assignment::identity(4)),
            vec![0.5, 1.0, 1.5, 2.0]
        );
    }

    #[test]
    fn assignment_validation_and_inverse() {
        assert!(Assignment::from_order(vec![0, 0]).is_err());
        assert!(Assignment::from_order(vec![0, 2]).is_err());
        assert!(Assignment::from_one_based(&[0, 1]).is_err());
        let a = Assignment::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(a.order(), &[1, 2, 0]);
        assert_eq!(a.positions(), vec![2, 0, 1]);
        assert_eq!(a.to_one_based(), vec![2, 3, 1]);
        assert_eq!(a.prefix(2), &[1, 2]);
    }

    #[test]
    fn float_to_rational_conversion_renormalizes() {
        let inst = Instance::new(
            vec![0.3, 0.7],
            vec![
                Segment::new(0.1, vec![1.0, 0.0]),
                Segment::new(0.2, vec![1.0, 0.0]),
                Segment::new(0.7, vec![0.5, 0.5]),
            ],
        )
        .unwrap();
        let exact: Instance<BigRational> = inst.convert().unwrap();
        assert_eq!(exact.n(), 2);
        let back: Instance<f64> = exact.convert().unwrap();
        assert_eq!(back.weights(), inst.weights());
    }
}
