//! Geometric weight classes of a bounded-ratio instance.
//!
//! Class `q` (1-based) holds the products with weight in
//! `[base (1+eps)^(q-1), base (1+eps)^q)`, where `base = eps^2/(2n) w_max`.
//! Classes from `q_min` upward are heavy; their products weigh at least
//! `eps^2 w_max`.

use std::ops::{Range, RangeInclusive};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance};
use crate::reduction::{check_epsilon, weight_floor};
use crate::scalar::Scalar;

/// Smallest `q` with `(1+eps)^q >= 2n/eps^3`.
pub fn class_count(n: usize, eps: f64) -> usize {
    let target = 2.0 * n as f64 / eps.powi(3);
    let mut q = 0;
    let mut power = 1.0;
    while power < target {
        power *= 1.0 + eps;
        q += 1;
    }
    q
}

/// Smallest `q >= 1` with `(1+eps)^(q-1) >= 2n`.
pub fn heavy_threshold(n: usize, eps: f64) -> usize {
    let target = 2.0 * n as f64;
    let mut q = 1;
    let mut power = 1.0;
    while power < target {
        power *= 1.0 + eps;
        q += 1;
    }
    q
}

#[derive(Debug, Clone)]
pub struct ClassStructure<S> {
    eps: f64,
    q_count: usize,
    q_min: usize,
    base: S,
    w_max: S,
    weights: Vec<S>,
    /// `lower[q-1]` is the inclusive lower end of class `q`; one extra entry
    /// closes class `Q`.
    lower: Vec<S>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

/// Requires `w_max <= 1/eps` and `w_min >= eps^2/(2n) w_max`.
pub fn build_classes<S: Scalar>(inst: &Instance<S>, eps: f64) -> Result<ClassStructure<S>> {
    check_epsilon(eps)?;
    let n = inst.n();
    let w_max = inst.w_max();
    let e = S::lift(eps);
    if w_max.clone() * e.clone() > S::one() {
        return Err(Error::NotBoundedRatio {
            eps,
            reason: format!("w_max = {} exceeds 1/eps", w_max.as_f64()),
        });
    }
    let base = weight_floor(&w_max, n, eps);
    let q_count = class_count(n, eps);
    let growth = S::one() + e;
    let mut lower = Vec::with_capacity(q_count + 1);
    lower.push(base.clone());
    for q in 1..=q_count {
        lower.push(lower[q - 1].clone() * growth.clone());
    }

    let mut class_of = Vec::with_capacity(n);
    for (i, w) in inst.weights().iter().enumerate() {
        if *w < base {
            return Err(Error::NotBoundedRatio {
                eps,
                reason: format!(
                    "product {} has weight {} below eps^2/(2n) w_max = {}",
                    i + 1,
                    w.as_f64(),
                    base.as_f64()
                ),
            });
        }
        let q = lower[..q_count].iter().take_while(|b| *b <= w).count();
        class_of.push(q.clamp(1, q_count));
    }

    let mut members = vec![Vec::new(); q_count];
    for (i, &q) in class_of.iter().enumerate() {
        members[q - 1].push(i);
    }
    for m in &mut members {
        m.sort_by(|&a, &b| {
            inst.weight(a)
                .partial_cmp(inst.weight(b))
                .expect("weights are comparable")
                .then(a.cmp(&b))
        });
    }
    let mut rank = vec![0; n];
    for m in &members {
        for (r, &i) in m.iter().enumerate() {
            rank[i] = r;
        }
    }

    Ok(ClassStructure {
        eps,
        q_count,
        q_min: heavy_threshold(n, eps),
        base,
        w_max,
        weights: inst.weights().to_vec(),
        lower,
        class_of,
        members,
        rank,
    })
}

impl<S: Scalar> ClassStructure<S> {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// `Q`, the number of classes.
    pub fn class_count(&self) -> usize {
        self.q_count
    }

    /// May exceed `Q`, in which case no class is heavy.
    pub fn q_min(&self) -> usize {
        self.q_min
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn w_max(&self) -> &S {
        &self.w_max
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn lower_bound(&self, q: usize) -> &S {
        &self.lower[q - 1]
    }

    pub fn upper_bound(&self, q: usize) -> &S {
        &self.lower[q]
    }

    pub fn is_heavy(&self, q: usize) -> bool {
        q >= self.q_min
    }

    pub fn heavy_classes(&self) -> RangeInclusive<usize> {
        self.q_min..=self.q_count
    }

    pub fn light_classes(&self) -> Range<usize> {
        1..self.q_min.min(self.q_count + 1)
    }

    /// 1-based class of a 0-based product.
    pub fn class_of(&self, product: usize) -> usize {
        self.class_of[product]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    /// Members of class `q`, by increasing weight then index.
    pub fn members(&self, q: usize) -> &[usize] {
        &self.members[q - 1]
    }

    /// 0-based rank of a product within its class.
    pub fn rank(&self, product: usize) -> usize {
        self.rank[product]
    }

    pub fn class_weight(&self, q: usize) -> S {
        self.members(q)
            .iter()
            .fold(S::zero(), |acc, &i| acc + self.weights[i].clone())
    }

    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.q_count).filter(|&q| !self.members[q - 1].is_empty())
    }

    pub fn is_sorted_within_class(&self, a: &Assignment) -> bool {
        let mut next = vec![0; self.q_count];
        a.order().iter().all(|&i| {
            let q = self.class_of[i] - 1;
            let ok = self.rank[i] == next[q];
            next[q] += 1;
            ok
        })
    }
}

/// Re-sorts every class inside the positions it occupies in `a`.
pub fn sorted_within_class<S: Scalar>(a: &Assignment, cs: &ClassStructure<S>) -> Assignment {
    let mut cursor = vec![0; cs.class_count()];
    let order = a
        .order()
        .iter()
        .map(|&i| {
            let q = cs.class_of(i);
            let product = cs.members(q)[cursor[q - 1]];
            cursor[q - 1] += 1;
            product
        })
        .collect();
    Assignment::from_order(order).expect("class re-sorting keeps a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Segment;
    use num::BigRational;

    fn flat<S: Scalar>(weights: Vec<S>) -> Instance<S> {
        let n = weights.len();
        Instance::new(weights, vec![Segment::new(S::one(), vec![S::zero(); n])]).unwrap()
    }

    #[test]
    fn worked_example() {
        let inst = flat(vec![1.0, 0.5, 0.1, 0.05]);
        let cs = build_classes(&inst, 0.5).unwrap();
        assert_eq!(*cs.base(), 0.03125);
        assert_eq!(cs.classes(), &[9, 7, 3, 2]);
        assert_eq!(cs.class_count(), 11);
        assert_eq!(cs.q_min(), 7);
        let heavy: Vec<usize> = (0..4).filter(|&i| cs.is_heavy(cs.class_of(i))).collect();
        assert_eq!(heavy, vec![0, 1]);
    }

    #[test]
    fn worked_example_rational() {
        let w = ["1", "1/2", "1/10", "1/20"]
            .iter()
            .map(|s| crate::scalar::parse_rational(s).unwrap())
            .collect();
        let cs = build_classes::<BigRational>(&flat(w), 0.5).unwrap();
        assert_eq!(cs.classes(), &[9, 7, 3, 2]);
    }

    #[test]
    fn equal_weights_share_one_class() {
        // w_max / base = 2n/eps^2 = 32 lies in [1.5^8, 1.5^9).
        let cs = build_classes(&flat(vec![1.0; 4]), 0.5).unwrap();
        assert_eq!(cs.occupied().collect::<Vec<_>>(), vec![9]);
        assert!(cs.class_of(0) < cs.class_count());
    }

    #[test]
    fn single_product() {
        let cs = build_classes(&flat(vec![0.7]), 0.3).unwrap();
        let q = cs.class_of(0);
        assert_eq!(cs.is_heavy(q), 0.7 >= 0.09 * 0.7);
    }

    #[test]
    fn unbounded_ratios_are_rejected() {
        assert!(matches!(
            build_classes(&flat(vec![1.0, 1e-6]), 0.5),
            Err(Error::NotBoundedRatio { .. })
        ));
        assert!(matches!(
            build_classes(&flat(vec![3.0]), 0.5),
            Err(Error::NotBoundedRatio { .. })
        ));
    }

    #[test]
    fn resorting_within_classes() {
        let inst = flat(vec![0.5, 0.52, 1.0]);
        let cs = build_classes(&inst, 0.5).unwrap();
        assert_eq!(cs.class_of(0), cs.class_of(1));
        let swapped = Assignment::from_order(vec![1, 2, 0]).unwrap();
        let fixed = sorted_within_class(&swapped, &cs);
        assert_eq!(fixed.order(), &[0, 2, 1]);
        assert!(cs.is_sorted_within_class(&fixed));
        assert_eq!(sorted_within_class(&fixed, &cs), fixed);
    }
}
