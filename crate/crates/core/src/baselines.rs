//! Exact optima by enumeration, and the w-ordering heuristic.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{share_into, share_of_weight, Assignment, Instance};
use crate::ptas::classes::{build_classes, ClassStructure};
use crate::scalar::Scalar;

pub const DEFAULT_PERMUTATION_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct OracleResult<S> {
    pub best: Assignment,
    pub opt: S,
    /// Assignments evaluated.
    pub examined: u64,
    /// Share of every permutation in lexicographic order, when requested.
    pub histogram: Option<Vec<S>>,
}

#[derive(Debug, Clone, Copy)]
pub struct BruteForceOptions {
    pub limit: u64,
    pub threads: usize,
    /// Stop once the best share reaches `w([n]) / (1 + w([n]))`, which no
    /// ranking can exceed. Ignored when a histogram is requested.
    pub prune: bool,
    pub histogram: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            limit: DEFAULT_PERMUTATION_LIMIT,
            threads: 1,
            prune: false,
            histogram: false,
        }
    }
}

/// `n!`, saturating.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128)
        .try_fold(1u128, |acc, k| acc.checked_mul(k))
        .unwrap_or(u128::MAX)
}

/// Advances to the lexicographic successor; returns `false` (leaving the
/// slice sorted ascending) once the last permutation has been passed.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn brute_force_opt<S: Scalar>(inst: &Instance<S>, limit: u64) -> Result<OracleResult<S>> {
    brute_force_with(
        inst,
        &BruteForceOptions {
            limit,
            ..Default::default()
        },
    )
}

struct Chunk<S> {
    best: Vec<usize>,
    value: S,
    examined: u64,
    histogram: Vec<S>,
}

/// Ties go to the lexicographically smallest permutation regardless of
/// `threads`.
pub fn brute_force_with<S: Scalar>(
    inst: &Instance<S>,
    opts: &BruteForceOptions,
) -> Result<OracleResult<S>> {
    let n = inst.n();
    let needed = factorial(n);
    if needed > opts.limit as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            limit: opts.limit,
        });
    }
    let histogram = opts.histogram;
    // Float prefix sums depend on summation order, so the bound gets slack.
    let bound =
        (opts.prune && !histogram).then(|| share_of_weight(&inst.total_weight()) + S::slack());

    // Chunk j holds the permutations that start with product j.
    let run_chunk = |j: usize| -> Chunk<S> {
        let mut order: Vec<usize> = std::iter::once(j)
            .chain((0..n).filter(|&i| i != j))
            .collect();
        let mut buf = Vec::with_capacity(n);
        let mut best = order.clone();
        let mut value = share_into(inst, &order, &mut buf);
        let mut examined = 1;
        let mut hist = Vec::new();
        if histogram {
            hist.push(value.clone());
        }
        while bound.as_ref().is_none_or(|b| value < *b) && next_permutation(&mut order[1..]) {
            let m = share_into(inst, &order, &mut buf);
            examined += 1;
            if histogram {
                hist.push(m.clone());
            }
            if m > value {
                value = m;
                best.copy_from_slice(&order);
            }
        }
        Chunk {
            best,
            value,
            examined,
            histogram: hist,
        }
    };

    let threads = opts.threads.clamp(1, n);
    let chunks: Vec<Chunk<S>> = if threads == 1 {
        (0..n).map(run_chunk).collect()
    } else {
        let mut slots: Vec<Option<Chunk<S>>> = (0..n).map(|_| None).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let run_chunk = &run_chunk;
                    scope.spawn(move || {
                        (t..n)
                            .step_by(threads)
                            .map(|j| (j, run_chunk(j)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (j, c) in h.join().expect("enumeration worker panicked") {
                    slots[j] = Some(c);
                }
            }
        });
        slots
            .into_iter()
            .map(|c| c.expect("every chunk ran"))
            .collect()
    };

    let mut chunks = chunks.into_iter();
    let first = chunks.next().expect("n >= 1");
    let mut best = first.best;
    let mut opt = first.value;
    let mut examined = first.examined;
    let mut hist = first.histogram;
    for c in chunks {
        examined += c.examined;
        hist.extend(c.histogram);
        if c.value > opt {
            opt = c.value;
            best = c.best;
        }
    }
    Ok(OracleResult {
        best: Assignment::from_order(best)?,
        opt,
        examined,
        histogram: histogram.then_some(hist),
    })
}

/// Weakly decreasing weight, ties by ascending index.
pub fn w_ordering<S: Scalar>(inst: &Instance<S>) -> Assignment {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&a, &b| {
        inst.weight(b)
            .partial_cmp(inst.weight(a))
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    Assignment::from_order(order).expect("sorted indices form a permutation")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassOracleStrategy {
    /// Enumerate all `n!` permutations and keep the sorted-within-class ones.
    Filter,
    /// Enumerate arrangements of class labels over positions; each fixes one
    /// sorted-within-class assignment.
    #[default]
    PositionSets,
}

/// `n! / prod(m_q!)`, saturating.
pub fn multinomial(parts: &[usize]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &m in parts {
        for k in 1..=m {
            total += 1;
            // acc * total / k stays integral: acc is a product of binomials.
            acc = match acc.checked_mul(total as u128) {
                Some(x) => x / k as u128,
                None => return u128::MAX,
            };
        }
    }
    acc
}

/// Best sorted-within-class assignment; ties go to the lexicographically
/// smallest permutation.
pub fn brute_force_sorted_within_class<S: Scalar>(
    inst: &Instance<S>,
    eps: f64,
    limit: u64,
) -> Result<OracleResult<S>> {
    sorted_within_class_oracle(inst, eps, limit, ClassOracleStrategy::default())
}

pub fn sorted_within_class_oracle<S: Scalar>(
    inst: &Instance<S>,
    eps: f64,
    limit: u64,
    strategy: ClassOracleStrategy,
) -> Result<OracleResult<S>> {
    let cs = build_classes(inst, eps)?;
    match strategy {
        ClassOracleStrategy::Filter => swc_filter(inst, &cs, limit),
        ClassOracleStrategy::PositionSets => swc_position_sets(inst, &cs, limit),
    }
}

fn swc_filter<S: Scalar>(
    inst: &Instance<S>,
    cs: &ClassStructure<S>,
    limit: u64,
) -> Result<OracleResult<S>> {
    let n = inst.n();
    let needed = factorial(n);
    if needed > limit as u128 {
        return Err(Error::BudgetExceeded { needed, limit });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut buf = Vec::with_capacity(n);
    let mut best: Option<(Vec<usize>, S)> = None;
    let mut examined = 0;
    loop {
        let a = Assignment::from_order(order.clone())?;
        if cs.is_sorted_within_class(&a) {
            let m = share_into(inst, &order, &mut buf);
            examined += 1;
            if best.as_ref().is_none_or(|(_, v)| m > *v) {
                best = Some((order.clone(), m));
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    let (best, opt) = best.expect("the class-sorted identity is always admissible");
    Ok(OracleResult {
        best: Assignment::from_order(best)?,
        opt,
        examined,
        histogram: None,
    })
}

fn swc_position_sets<S: Scalar>(
    inst: &Instance<S>,
    cs: &ClassStructure<S>,
    limit: u64,
) -> Result<OracleResult<S>> {
    let n = inst.n();
    let sizes: Vec<usize> = (1..=cs.class_count())
        .map(|q| cs.members(q).len())
        .collect();
    let needed = multinomial(&sizes);
    if needed > limit as u128 {
        return Err(Error::BudgetExceeded { needed, limit });
    }
    let mut labels: Vec<usize> = cs.classes().to_vec();
    labels.sort_unstable();
    let mut order = vec![0; n];
    let mut cursor = vec![0; cs.class_count()];
    let mut buf = Vec::with_capacity(n);
    let mut best: Option<(Vec<usize>, S)> = None;
    let mut examined = 0;
    loop {
        cursor.iter_mut().for_each(|c| *c = 0);
        for (p, &q) in labels.iter().enumerate() {
            order[p] = cs.members(q)[cursor[q - 1]];
            cursor[q - 1] += 1;
        }
        let m = share_into(inst, &order, &mut buf);
        examined += 1;
        // Label order is not permutation order, so exact ties compare the
        // permutations themselves.
        let better = match &best {
            None => true,
            Some((o, v)) => m > *v || (m == *v && order < *o),
        };
        if better {
            best = Some((order.clone(), m));
        }
        if !next_permutation(&mut labels) {
            break;
        }
    }
    let (best, opt) = best.expect("at least one arrangement");
    Ok(OracleResult {
        best: Assignment::from_order(best)?,
        opt,
        examined,
        histogram: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{market_share, Segment};

    fn e1() -> Instance<f64> {
        Instance::new(
            vec![2.0, 1.0, 0.5],
            vec![Segment::new(1.0, vec![3.0, 1.5, 0.0])],
        )
        .unwrap()
    }

    fn free(weights: Vec<f64>) -> Instance<f64> {
        let n = weights.len();
        Instance::new(weights, vec![Segment::new(1.0, vec![0.0; n])]).unwrap()
    }

    #[test]
    fn permutation_successor() {
        let mut v = vec![0, 1, 2];
        let mut all = vec![v.clone()];
        while next_permutation(&mut v) {
            all.push(v.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 2, 1]);
        assert_eq!(all[5], vec![2, 1, 0]);
        assert_eq!(v, vec![0, 1, 2]);
        let mut m = vec![1, 1, 2];
        let mut count = 1;
        while next_permutation(&mut m) {
            count += 1;
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn e1_optimum() {
        // The six shares by hand: (1,2,3) stops at 2 with w = 3.
        let r = brute_force_opt(&e1(), 100).unwrap();
        assert_eq!(r.opt, 0.75);
        assert_eq!(r.best.to_one_based(), vec![1, 2, 3]);
        assert_eq!(r.examined, 6);
    }

    #[test]
    fn single_product_and_budget() {
        let r = brute_force_opt(&free(vec![3.0]), 1).unwrap();
        assert_eq!(r.opt, 0.75);
        assert!(matches!(
            brute_force_opt(&free(vec![1.0; 10]), 1_000_000),
            Err(Error::BudgetExceeded {
                needed: 3_628_800,
                ..
            })
        ));
    }

    #[test]
    fn histogram_is_lexicographic() {
        let opts = BruteForceOptions {
            histogram: true,
            threads: 3,
            ..Default::default()
        };
        let r = brute_force_with(&e1(), &opts).unwrap();
        let hist = r.histogram.unwrap();
        assert_eq!(hist.len(), 6);
        let mut order = vec![0, 1, 2];
        for h in &hist {
            assert_eq!(
                *h,
                market_share(&e1(), &Assignment::from_order(order.clone()).unwrap())
            );
            next_permutation(&mut order);
        }
    }

    #[test]
    fn ties_pick_the_smallest_permutation() {
        let r = brute_force_opt(&free(vec![1.0; 4]), 100).unwrap();
        assert_eq!(r.best, Assignment::identity(4));
        let pruned = brute_force_with(
            &free(vec![1.0; 4]),
            &BruteForceOptions {
                prune: true,
                threads: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(pruned.best, Assignment::identity(4));
    }

    #[test]
    fn w_ordering_examples() {
        assert_eq!(
            w_ordering(&free(vec![1.0, 3.0, 2.0])).to_one_based(),
            vec![2, 3, 1]
        );
        assert_eq!(w_ordering(&free(vec![0.5; 4])), Assignment::identity(4));
        let a = w_ordering(&e1());
        assert_eq!(a.to_one_based(), vec![1, 2, 3]);
        assert_eq!(market_share(&e1(), &a), 0.75);
    }

    #[test]
    fn multinomial_counts() {
        assert_eq!(multinomial(&[1, 1, 1]), 6);
        assert_eq!(multinomial(&[2, 1]), 3);
        assert_eq!(multinomial(&[0, 3, 0]), 1);
        assert_eq!(multinomial(&[2, 2, 2]), 90);
    }

    #[test]
    fn class_oracle_strategies_agree() {
        let i = Instance::new(
            vec![1.0, 0.5, 0.1, 0.05],
            vec![
                Segment::new(0.5, vec![1.2, 0.6, 0.6, 0.0]),
                Segment::new(0.5, vec![0.3, 0.3, 0.1, 0.1]),
            ],
        )
        .unwrap();
        let a = sorted_within_class_oracle(&i, 0.5, 1000, ClassOracleStrategy::Filter).unwrap();
        let b =
            sorted_within_class_oracle(&i, 0.5, 1000, ClassOracleStrategy::PositionSets).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.opt, b.opt);
        // Distinct classes leave the constraint vacuous.
        assert_eq!(a.opt, brute_force_opt(&i, 1000).unwrap().opt);
        assert_eq!(a.examined, 24);
    }

    #[test]
    fn equal_weights_halve_the_space() {
        let i = free(vec![0.5, 0.5, 1.0]);
        let r = sorted_within_class_oracle(&i, 0.5, 100, ClassOracleStrategy::Filter).unwrap();
        assert_eq!(r.examined, 3);
        let r = brute_force_sorted_within_class(&i, 0.5, 100).unwrap();
        assert_eq!(r.examined, 3);
    }
}
