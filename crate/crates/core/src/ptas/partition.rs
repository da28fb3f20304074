//! From a statistics guess to a candidate partition, goodness checks, and
//! the partition-to-assignment layout.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::Assignment;
use crate::ptas::blocks::BlockStats;
use crate::ptas::classes::ClassStructure;
use crate::ptas::guesses::{grid_unit, LightGuess, StatGuess};
use crate::scalar::Scalar;

/// Subsets `S_1..S_L` and `S_inf` of 0-based products, each sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidatePartition {
    pub subsets: Vec<Vec<usize>>,
    pub rest: Vec<usize>,
    /// Designated head class of each `S_l`, inferred from the heavy counts.
    pub head_classes: Vec<Option<usize>>,
    pub guess: StatGuess,
}

impl CandidatePartition {
    pub fn block_count(&self) -> usize {
        self.subsets.len()
    }

    /// The part that determines the layout (the provenance guess is dropped).
    pub fn key(&self) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
        (self.subsets.clone(), self.head_classes.clone())
    }

    fn finish(&mut self, n: usize) {
        let mut placed = vec![false; n];
        for s in &mut self.subsets {
            s.sort_unstable();
            for &i in s.iter() {
                placed[i] = true;
            }
        }
        self.rest = (0..n).filter(|&i| !placed[i]).collect();
    }
}

/// Heavy classes: consecutive ranges, lightest first, of the guessed sizes.
/// Light products all start in `S_inf`.
pub fn assign_heavy<S: Scalar>(
    cs: &ClassStructure<S>,
    g: &StatGuess,
) -> Result<CandidatePartition> {
    let l_count = g.block_count();
    let mut subsets = vec![Vec::new(); l_count];
    for q in cs.heavy_classes() {
        let members = cs.members(q);
        let row = &g.heavy[q - cs.q_min()];
        let total: usize = row.iter().sum();
        if total > members.len() {
            return Err(Error::GuessInfeasible(format!(
                "class {q} has {} products but the guess uses {total}",
                members.len()
            )));
        }
        let mut cursor = 0;
        for (l, &b) in row.iter().enumerate() {
            subsets[l].extend_from_slice(&members[cursor..cursor + b]);
            cursor += b;
        }
    }
    let mut p = CandidatePartition {
        subsets,
        rest: Vec::new(),
        head_classes: (1..=l_count).map(|l| g.head_class(cs.q_min(), l)).collect(),
        guess: g.clone(),
    };
    p.finish(cs.n());
    Ok(p)
}

/// Light classes: per block, the shortest next range meeting the guessed
/// weight after `(1 - eps)` slack (grid), or the guessed count (count mode).
pub fn assign_light<S: Scalar>(
    cs: &ClassStructure<S>,
    g: &StatGuess,
    mut partial: CandidatePartition,
) -> Result<CandidatePartition> {
    let weights = cs.weights();
    match &g.light {
        LightGuess::Counts(rows) => {
            for q in cs.light_classes() {
                let members = cs.members(q);
                let row = &rows[q - 1];
                let total: usize = row.iter().sum();
                if total > members.len() {
                    return Err(Error::GuessInfeasible(format!(
                        "class {q} has {} products but the guess uses {total}",
                        members.len()
                    )));
                }
                let mut cursor = 0;
                for (l, &c) in row.iter().enumerate() {
                    partial.subsets[l].extend_from_slice(&members[cursor..cursor + c]);
                    cursor += c;
                }
            }
        }
        LightGuess::Multiples(rows) => {
            let target_unit = grid_unit(cs) * (S::one() - S::lift(cs.eps()));
            for q in cs.light_classes() {
                let members = cs.members(q);
                let mut cursor = 0;
                for (l, &mu) in rows[q - 1].iter().enumerate() {
                    let target = target_unit.clone() * S::from_usize(mu as usize);
                    let mut acc = S::zero();
                    let mut end = cursor;
                    while acc < target {
                        if end == members.len() {
                            return Err(Error::GuessInfeasible(format!(
                                "class {q} cannot reach the weight guessed for block {}",
                                l + 1
                            )));
                        }
                        acc = acc + weights[members[end]].clone();
                        end += 1;
                    }
                    partial.subsets[l].extend_from_slice(&members[cursor..end]);
                    cursor = end;
                }
            }
        }
    }
    partial.finish(cs.n());
    Ok(partial)
}

pub fn build_partition<S: Scalar>(
    cs: &ClassStructure<S>,
    g: &StatGuess,
) -> Result<CandidatePartition> {
    assign_light(cs, g, assign_heavy(cs, g)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockCheck<S> {
    pub size: usize,
    pub reference_size: usize,
    pub weight: S,
    /// `(1 - eps) W_l - eps^4 w_max`.
    pub weight_lower: S,
    /// `W_l`.
    pub weight_upper: S,
    pub reference_top: Option<usize>,
    pub has_top: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessReport<S> {
    pub bounded_size: bool,
    pub bounded_weight: bool,
    pub highest_index: bool,
    pub prefix_subsets: bool,
    pub blocks: Vec<BlockCheck<S>>,
    /// Products of some `S_l` outside the reference prefix blocks.
    pub outside_prefix: Vec<usize>,
}

impl<S: Scalar> GoodnessReport<S> {
    pub fn is_good(&self) -> bool {
        self.bounded_size && self.bounded_weight && self.highest_index && self.prefix_subsets
    }

    /// Smallest slack of the weight band over all blocks.
    pub fn weight_margin(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let w = b.weight.as_f64();
                (w - b.weight_lower.as_f64()).min(b.weight_upper.as_f64() - w)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks the four good-partition properties against reference statistics.
/// Weight comparisons allow [`Scalar::slack`].
pub fn is_good_partition<S: Scalar>(
    p: &CandidatePartition,
    reference: &BlockStats<S>,
    cs: &ClassStructure<S>,
) -> GoodnessReport<S> {
    let e = S::lift(cs.eps());
    let e2 = e.clone() * e.clone();
    let band = e2.clone() * e2 * cs.w_max().clone();
    let slack = S::slack();
    let weights = cs.weights();
    let mut blocks = Vec::with_capacity(p.block_count());
    for (l, s) in p.subsets.iter().enumerate() {
        let weight = s.iter().fold(S::zero(), |acc, &i| acc + weights[i].clone());
        let upper = reference.weights[l].clone();
        let lower = (S::one() - e.clone()) * upper.clone() - band.clone();
        let top = reference.top_class[l];
        blocks.push(BlockCheck {
            size: s.len(),
            reference_size: reference.sizes[l],
            weight,
            weight_lower: lower,
            weight_upper: upper,
            reference_top: top,
            has_top: top.is_some_and(|q| s.iter().any(|&i| cs.class_of(i) == q)),
        });
    }
    let mut in_prefix = vec![false; cs.n()];
    for &i in reference.prefix_products() {
        in_prefix[i] = true;
    }
    let mut outside_prefix: Vec<usize> = p
        .subsets
        .iter()
        .flatten()
        .copied()
        .filter(|&i| !in_prefix[i])
        .collect();
    outside_prefix.sort_unstable();
    GoodnessReport {
        bounded_size: blocks.iter().all(|b| b.size <= b.reference_size),
        bounded_weight: blocks.iter().all(|b| {
            b.weight.clone() + slack.clone() >= b.weight_lower
                && b.weight <= b.weight_upper.clone() + slack.clone()
        }),
        highest_index: blocks
            .iter()
            .all(|b| !b.reference_top.is_some_and(|q| cs.is_heavy(q)) || b.has_top),
        prefix_subsets: outside_prefix.is_empty(),
        blocks,
        outside_prefix,
    }
}

/// Lays out `S_1, ..., S_L, S_inf`. A block with a heavy head class starts
/// with the smallest-index product of that class; the rest of the block
/// follows by index. `S_inf` is ordered by decreasing weight, ties by index.
pub fn partition_to_assignment<S: Scalar>(
    p: &CandidatePartition,
    cs: &ClassStructure<S>,
) -> Result<Assignment> {
    let mut order = Vec::with_capacity(cs.n());
    for (l, s) in p.subsets.iter().enumerate() {
        match p.head_classes[l] {
            Some(q) if cs.is_heavy(q) => {
                let head = s
                    .iter()
                    .copied()
                    .find(|&i| cs.class_of(i) == q)
                    .ok_or(Error::MissingHeadProduct { block: l + 1 })?;
                order.push(head);
                order.extend(s.iter().copied().filter(|&i| i != head));
            }
            _ => order.extend_from_slice(s),
        }
    }
    let weights = cs.weights();
    let mut tail = p.rest.clone();
    tail.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.extend(tail);
    Assignment::from_order(order)
}
