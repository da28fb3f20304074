//! Market-share instances built from 3-partition.
//!
//! Each of the `3K` integers becomes a small product of that weight, and `K`
//! large products of weight `L = 4(K^3 T + 1)` are added. Segment `k` has
//! price `(k-1) L + k T + 1/2` on positions `1..=4k-1` and zero afterwards,
//! so she reaches her price exactly when the first `4k` positions hold `k`
//! large products and small products of total weight `kT`. The instance
//! admits share `K alpha` if and only if the integers split into triplets
//! of sum `T`.

use num::{BigInt, BigRational, One, Zero};

use crate::baselines::{brute_force_with, BruteForceOptions};
use crate::error::{Error, Result};
use crate::model::{market_share, Assignment, Instance, Segment};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    a: Vec<u64>,
    t: u64,
}

impl ThreePartitionInstance {
    /// Requires `3K` integers strictly between `T/4` and `T/2` summing to `KT`.
    pub fn new(a: Vec<u64>, t: u64) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedThreePartition(m));
        if a.is_empty() || !a.len().is_multiple_of(3) {
            return bad(format!("need 3K integers with K >= 1, got {}", a.len()));
        }
        if t == 0 {
            return bad("T must be positive".into());
        }
        for (i, &x) in a.iter().enumerate() {
            if 4 * x <= t || 2 * x >= t {
                return bad(format!(
                    "a_{} = {x} is not strictly between T/4 and T/2 for T = {t}",
                    i + 1
                ));
            }
        }
        let k = (a.len() / 3) as u64;
        let sum: u64 = a.iter().sum();
        if sum != k * t {
            return bad(format!("integers sum to {sum}, expected K T = {}", k * t));
        }
        Ok(ThreePartitionInstance { a, t })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn k(&self) -> usize {
        self.a.len() / 3
    }
}

#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub instance: Instance<BigRational>,
    /// Weight of each large product.
    pub big_weight: BigInt,
    pub alpha: BigRational,
    /// `K alpha`.
    pub threshold: BigRational,
    pub source: ThreePartitionInstance,
}

impl HardnessInstance {
    pub fn k(&self) -> usize {
        self.source.k()
    }

    /// 0-based index of the `j`-th large product, `j` in `0..K`.
    pub fn large_product(&self, j: usize) -> usize {
        3 * self.k() + j
    }
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn build_hardness_instance(tp: &ThreePartitionInstance) -> Result<HardnessInstance> {
    let k = tp.k() as u64;
    let t = int(tp.t());
    let big = int(4) * (int(k).pow(3) * t.clone() + BigRational::one());
    let n = 4 * tp.k();
    let half = BigRational::new(1.into(), 2.into());

    // theta_k = alpha (k (L + T) + 1) / (k (L + T)); alpha normalizes.
    let raw: Vec<BigRational> = (1..=k)
        .map(|j| {
            let base = int(j) * (big.clone() + t.clone());
            (base.clone() + BigRational::one()) / base
        })
        .collect();
    let alpha = BigRational::one() / raw.iter().fold(BigRational::zero(), |acc, x| acc + x);

    let segments = raw
        .iter()
        .enumerate()
        .map(|(idx, r)| {
            let j = idx as u64 + 1;
            let price = int(j - 1) * big.clone() + int(j) * t.clone() + half.clone();
            let cut = 4 * (idx + 1) - 1;
            let prices = (1..=n)
                .map(|p| {
                    if p <= cut {
                        price.clone()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            Segment::new(alpha.clone() * r, prices)
        })
        .collect();

    let weights = tp
        .a()
        .iter()
        .map(|&x| int(x))
        .chain(std::iter::repeat_n(big.clone(), tp.k()))
        .collect();
    let instance = Instance::new(weights, segments)?;
    Ok(HardnessInstance {
        instance,
        big_weight: big.to_integer(),
        threshold: int(k) * alpha.clone(),
        alpha,
        source: tp.clone(),
    })
}

/// Triplet `k` (1-based small-product indices) at positions `4k-3..=4k-1`,
/// the `k`-th large product at `4k`.
pub fn canonical_yes_assignment(
    h: &HardnessInstance,
    triplets: &[[usize; 3]],
) -> Result<Assignment> {
    let k = h.k();
    let a = h.source.a();
    if triplets.len() != k {
        return Err(Error::NotAValidPartition(format!(
            "expected {k} triplets, got {}",
            triplets.len()
        )));
    }
    let mut used = vec![false; 3 * k];
    let mut order = Vec::with_capacity(4 * k);
    for (j, trip) in triplets.iter().enumerate() {
        let mut sum = 0;
        for &i in trip {
            if i == 0 || i > 3 * k {
                return Err(Error::NotAValidPartition(format!(
                    "{i} is not a small product"
                )));
            }
            if std::mem::replace(&mut used[i - 1], true) {
                return Err(Error::NotAValidPartition(format!("product {i} used twice")));
            }
            sum += a[i - 1];
            order.push(i - 1);
        }
        if sum != h.source.t() {
            return Err(Error::NotAValidPartition(format!(
                "triplet {} sums to {sum}, not {}",
                j + 1,
                h.source.t()
            )));
        }
        order.push(h.large_product(j));
    }
    Assignment::from_order(order)
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub yes: bool,
    pub opt: BigRational,
    pub threshold: BigRational,
    pub best: Assignment,
}

/// Brute-forces the optimum of the hardness instance and compares it with
/// `K alpha` exactly.
pub fn decide_three_partition(
    tp: &ThreePartitionInstance,
    budget: u64,
    threads: usize,
) -> Result<Decision> {
    let h = build_hardness_instance(tp)?;
    let r = brute_force_with(
        &h.instance,
        &BruteForceOptions {
            limit: budget,
            threads,
            ..Default::default()
        },
    )?;
    debug_assert_eq!(market_share(&h.instance, &r.best), r.opt);
    Ok(Decision {
        yes: r.opt >= h.threshold,
        opt: r.opt,
        threshold: h.threshold,
        best: r.best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn single_triplet_construction() {
        let tp = ThreePartitionInstance::new(vec![3, 3, 3], 9).unwrap();
        let h = build_hardness_instance(&tp).unwrap();
        assert_eq!(h.big_weight, BigInt::from(40));
        assert_eq!(h.alpha, q("49/50"));
        assert_eq!(h.threshold, q("49/50"));
        let prices = &h.instance.segments()[0].prices;
        assert_eq!(prices, &vec![q("19/2"), q("19/2"), q("19/2"), q("0")]);
        assert_eq!(h.instance.segments()[0].theta, q("1"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(ThreePartitionInstance::new(vec![1, 1, 1], 3).is_ok());
        assert!(matches!(
            ThreePartitionInstance::new(vec![1, 1, 4], 6),
            Err(Error::MalformedThreePartition(_))
        ));
        assert!(ThreePartitionInstance::new(vec![3, 3, 4], 9).is_err());
        assert!(ThreePartitionInstance::new(vec![3, 3], 6).is_err());
    }

    #[test]
    fn canonical_layouts_hit_the_threshold() {
        let tp = ThreePartitionInstance::new(vec![3, 3, 3], 9).unwrap();
        let h = build_hardness_instance(&tp).unwrap();
        let a = canonical_yes_assignment(&h, &[[1, 2, 3]]).unwrap();
        assert_eq!(a.to_one_based(), vec![1, 2, 3, 4]);
        assert_eq!(market_share(&h.instance, &a), q("49/50"));

        let tp = ThreePartitionInstance::new(vec![5; 6], 15).unwrap();
        let h = build_hardness_instance(&tp).unwrap();
        let a = canonical_yes_assignment(&h, &[[1, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!(market_share(&h.instance, &a), h.threshold);
        assert_eq!(h.threshold, int(2) * h.alpha.clone());
    }

    #[test]
    fn wrong_triplets_are_rejected() {
        let tp = ThreePartitionInstance::new(vec![4, 4, 4, 6, 6, 6], 15).unwrap();
        let h = build_hardness_instance(&tp).unwrap();
        assert!(matches!(
            canonical_yes_assignment(&h, &[[1, 2, 3], [4, 5, 6]]),
            Err(Error::NotAValidPartition(_))
        ));
        assert!(canonical_yes_assignment(&h, &[[1, 1, 4], [2, 5, 6]]).is_err());
    }

    #[test]
    fn decides_the_single_triplet() {
        let tp = ThreePartitionInstance::new(vec![3, 3, 3], 9).unwrap();
        let d = decide_three_partition(&tp, 100, 1).unwrap();
        assert!(d.yes);
        assert_eq!(d.opt, q("49/50"));
    }
}
