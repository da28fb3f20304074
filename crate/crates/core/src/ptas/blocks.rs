//! Block decomposition of an assignment.
//!
//! With thresholds `t_l = (1+eps)^l eps^3 w_max`, `p_l` is the number of
//! leading positions whose prefix weight stays below `t_l`. Block `B_0` is
//! positions `1..=p_0`, block `B_l` is `p_{l-1}+1..=p_l` for `l` in `1..=L`,
//! and `B_inf` holds everything after `p_L`.

use crate::error::Result;
use crate::model::{prefix_weights, stopping_point, Assignment, Instance};
use crate::ptas::classes::ClassStructure;
use crate::reduction::check_epsilon;
use crate::scalar::Scalar;

/// Smallest `l` with `(1+eps)^l eps^3 > 1/eps`.
pub fn block_count(eps: f64) -> usize {
    let target = 1.0 / eps.powi(4);
    let mut l = 0;
    let mut power = 1.0;
    while power <= target {
        power *= 1.0 + eps;
        l += 1;
    }
    l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Zero,
    /// 1-based block index in `1..=L`.
    Mid(usize),
    Infinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockLayout<S> {
    l_count: usize,
    thresholds: Vec<S>,
    ends: Vec<usize>,
    n: usize,
}

impl<S: Scalar> BlockLayout<S> {
    /// `L`.
    pub fn block_count(&self) -> usize {
        self.l_count
    }

    /// `t_0..=t_L`.
    pub fn thresholds(&self) -> &[S] {
        &self.thresholds
    }

    /// `p_0..=p_L`.
    pub fn ends(&self) -> &[usize] {
        &self.ends
    }

    /// 1-based position range of `B_l`, `l` in `0..=L`.
    pub fn positions(&self, l: usize) -> std::ops::RangeInclusive<usize> {
        let start = if l == 0 { 1 } else { self.ends[l - 1] + 1 };
        start..=self.ends[l]
    }

    pub fn infinity_positions(&self) -> std::ops::RangeInclusive<usize> {
        self.ends[self.l_count] + 1..=self.n
    }

    /// Block containing a 1-based position.
    pub fn block_of(&self, position: usize) -> Block {
        if position <= self.ends[0] {
            Block::Zero
        } else if position > self.ends[self.l_count] {
            Block::Infinity
        } else {
            Block::Mid(self.ends.partition_point(|&e| e < position))
        }
    }
}

pub fn block_layout<S: Scalar>(inst: &Instance<S>, a: &Assignment, eps: f64) -> BlockLayout<S> {
    let l_count = block_count(eps);
    let e = S::lift(eps);
    let growth = S::one() + e.clone();
    let mut thresholds = Vec::with_capacity(l_count + 1);
    thresholds.push(e.clone() * e.clone() * e * inst.w_max());
    for l in 1..=l_count {
        thresholds.push(thresholds[l - 1].clone() * growth.clone());
    }
    let prefix = prefix_weights(inst, a);
    let ends = thresholds
        .iter()
        .map(|t| prefix.partition_point(|w| w < t))
        .collect();
    BlockLayout {
        l_count,
        thresholds,
        ends,
        n: inst.n(),
    }
}

/// Per-block statistics of an assignment; block vectors are indexed by `l - 1`
/// for `l` in `1..=L`, class vectors by `q - 1`.
#[derive(Debug, Clone)]
pub struct BlockStats<S> {
    pub layout: BlockLayout<S>,
    pub order: Assignment,
    /// `beta_l`.
    pub sizes: Vec<usize>,
    /// `W_l`.
    pub weights: Vec<S>,
    /// `beta_{l,q}` for every class.
    pub class_counts: Vec<Vec<usize>>,
    /// `W_{l,q}` for every class.
    pub class_weights: Vec<Vec<S>>,
    /// `beta_{l,light}`.
    pub light_counts: Vec<usize>,
    /// `q_l`, the highest class present in block `l`.
    pub top_class: Vec<Option<usize>>,
    /// Products placed in `B_0`.
    pub zero_block: Vec<usize>,
    /// Products placed in `B_inf`.
    pub infinity_block: Vec<usize>,
}

impl<S: Scalar> BlockStats<S> {
    pub fn block_count(&self) -> usize {
        self.layout.block_count()
    }

    /// Products of `B_0..=B_L`, the prefix blocks.
    pub fn prefix_products(&self) -> &[usize] {
        &self.order.order()[..self.layout.ends()[self.block_count()]]
    }

    /// Products placed in `B_l`.
    pub fn block_products(&self, l: usize) -> &[usize] {
        let r = self.layout.positions(l);
        &self.order.order()[*r.start() - 1..*r.end()]
    }
}

pub fn block_decompose<S: Scalar>(
    inst: &Instance<S>,
    a: &Assignment,
    cs: &ClassStructure<S>,
) -> Result<BlockStats<S>> {
    let eps = cs.eps();
    check_epsilon(eps)?;
    let layout = block_layout(inst, a, eps);
    let l_count = layout.block_count();
    let q_count = cs.class_count();
    let mut stats = BlockStats {
        order: a.clone(),
        sizes: vec![0; l_count],
        weights: vec![S::zero(); l_count],
        class_counts: vec![vec![0; q_count]; l_count],
        class_weights: vec![vec![S::zero(); q_count]; l_count],
        light_counts: vec![0; l_count],
        top_class: vec![None; l_count],
        zero_block: Vec::new(),
        infinity_block: Vec::new(),
        layout,
    };
    for (p, &i) in a.order().iter().enumerate() {
        match stats.layout.block_of(p + 1) {
            Block::Zero => stats.zero_block.push(i),
            Block::Infinity => stats.infinity_block.push(i),
            Block::Mid(l) => {
                let q = cs.class_of(i);
                let w = inst.weight(i).clone();
                stats.sizes[l - 1] += 1;
                stats.weights[l - 1] = stats.weights[l - 1].clone() + w.clone();
                stats.class_counts[l - 1][q - 1] += 1;
                stats.class_weights[l - 1][q - 1] = stats.class_weights[l - 1][q - 1].clone() + w;
                if !cs.is_heavy(q) {
                    stats.light_counts[l - 1] += 1;
                }
                let top = &mut stats.top_class[l - 1];
                *top = Some(top.map_or(q, |t| t.max(q)));
            }
        }
    }
    Ok(stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopperClass {
    Early,
    /// Stops inside `B_l`.
    Midway(usize),
    Late,
}

/// Labels each segment by the block of `ref_a` containing its stopping point.
pub fn classify_stoppers<S: Scalar>(
    inst: &Instance<S>,
    ref_a: &Assignment,
    eps: f64,
) -> Result<Vec<StopperClass>> {
    check_epsilon(eps)?;
    let layout = block_layout(inst, ref_a, eps);
    Ok((0..inst.k())
        .map(|k| match layout.block_of(stopping_point(inst, ref_a, k)) {
            Block::Zero => StopperClass::Early,
            Block::Mid(l) => StopperClass::Midway(l),
            Block::Infinity => StopperClass::Late,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Segment;
    use crate::ptas::classes::build_classes;

    fn flat(weights: Vec<f64>) -> Instance<f64> {
        let n = weights.len();
        Instance::new(weights, vec![Segment::new(1.0, vec![0.0; n])]).unwrap()
    }

    #[test]
    fn block_count_examples() {
        assert_eq!(block_count(0.5), 7);
        // 1.1^l > 10^4 first at l = 97.
        assert_eq!(block_count(0.1), 97);
    }

    #[test]
    fn walked_example() {
        let inst = flat(vec![1.0, 0.2]);
        let a = Assignment::from_one_based(&[2, 1]).unwrap();
        let layout = block_layout(&inst, &a, 0.5);
        assert_eq!(layout.block_count(), 7);
        assert_eq!(layout.ends(), &[0, 0, 1, 1, 1, 1, 2, 2]);
        assert_eq!(layout.block_of(1), Block::Mid(2));
        assert_eq!(layout.block_of(2), Block::Mid(6));
        assert!(layout.infinity_positions().is_empty());

        let cs = build_classes(&inst, 0.5).unwrap();
        let stats = block_decompose(&inst, &a, &cs).unwrap();
        assert_eq!(stats.sizes, vec![0, 1, 0, 0, 0, 1, 0]);
        assert!(stats.zero_block.is_empty());
        assert_eq!(stats.block_products(2), &[1]);
        assert_eq!(stats.block_products(6), &[0]);
        assert_eq!(stats.top_class[1], Some(cs.class_of(1)));
    }

    #[test]
    fn heavy_tail_goes_to_infinity() {
        // eps = 0.5: t_7 = 1.5^7 * 0.125 * 2 = 4.27..., passed at position 3.
        let inst = flat(vec![2.0, 2.0, 2.0, 2.0]);
        let layout = block_layout(&inst, &Assignment::identity(4), 0.5);
        assert_eq!(layout.ends()[7], 2);
        assert_eq!(layout.infinity_positions(), 3..=4);
        assert_eq!(layout.block_of(3), Block::Infinity);
    }

    #[test]
    fn single_product_lands_in_first_block_above_it() {
        let inst = flat(vec![1.0]);
        let layout = block_layout(&inst, &Assignment::identity(1), 0.5);
        // 0.125 * 1.5^6 = 1.42 > 1 >= 0.125 * 1.5^5.
        assert_eq!(layout.block_of(1), Block::Mid(6));
    }

    #[test]
    fn stopper_labels() {
        let inst = Instance::new(
            vec![0.01, 1.0],
            vec![
                Segment::new(0.5, vec![0.0, 0.0]),
                Segment::new(0.5, vec![100.0, 100.0]),
            ],
        )
        .unwrap();
        let labels = classify_stoppers(&inst, &Assignment::identity(2), 0.5).unwrap();
        assert_eq!(labels, vec![StopperClass::Early, StopperClass::Midway(6)]);
        let inst = Instance::new(vec![2.0; 4], vec![Segment::new(1.0, vec![50.0; 4])]).unwrap();
        assert_eq!(
            classify_stoppers(&inst, &Assignment::identity(4), 0.5).unwrap(),
            vec![StopperClass::Late]
        );
    }
}
