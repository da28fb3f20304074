//! Reference implementations shared by the integration tests. They work on
//! raw vectors and share no code with the library's evaluator.

#![allow(dead_code)]

use msrank::{Instance, Scalar};
use num::Num;

/// Plain data copy of an instance.
pub struct Raw<T> {
    pub weights: Vec<T>,
    pub thetas: Vec<T>,
    pub prices: Vec<Vec<T>>,
}

pub fn raw<S: Scalar>(inst: &Instance<S>) -> Raw<S> {
    Raw {
        weights: inst.weights().to_vec(),
        thetas: inst.segments().iter().map(|s| s.theta.clone()).collect(),
        prices: inst.segments().iter().map(|s| s.prices.clone()).collect(),
    }
}

/// Walks the ranking one position at a time; returns the 1-based stop and
/// the share `w / (1 + w)` of every segment.
pub fn simulate_segments<T: Num + Clone + PartialOrd>(
    r: &Raw<T>,
    order: &[usize],
) -> Vec<(usize, T)> {
    let n = order.len();
    r.prices
        .iter()
        .map(|prices| {
            let mut seen = T::zero();
            let mut stop = n;
            for p in 0..n {
                seen = seen + r.weights[order[p]].clone();
                if seen >= prices[p] {
                    stop = p + 1;
                    break;
                }
            }
            let share = seen.clone() / (T::one() + seen);
            (stop, share)
        })
        .collect()
}

pub fn simulate<T: Num + Clone + PartialOrd>(r: &Raw<T>, order: &[usize]) -> T {
    simulate_segments(r, order)
        .into_iter()
        .zip(&r.thetas)
        .fold(T::zero(), |acc, ((_, m), th)| acc + th.clone() * m)
}

/// Every permutation of `0..n`, by Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Optimum by exhaustive enumeration with the reference simulator.
pub fn reference_opt<T: Num + Clone + PartialOrd>(r: &Raw<T>) -> T {
    let n = r.weights.len();
    let mut best = T::zero();
    for p in permutations(n) {
        let m = simulate(r, &p);
        if m > best {
            best = m;
        }
    }
    best
}

/// Reference optimum of a library instance, in its own backend.
pub fn opt_of<S: Scalar>(inst: &Instance<S>) -> S {
    reference_opt(&raw(inst))
}

pub fn share_of<S: Scalar>(inst: &Instance<S>, order: &[usize]) -> S {
    simulate(&raw(inst), order)
}
