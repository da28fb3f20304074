//! Guesses of block statistics, and their lexicographic enumeration.
//!
//! A guess fixes, per block `l` and heavy class `q`, how many products of
//! `G_q` the reference assignment places in `B_l`. For light classes it fixes
//! either the count directly (count mode) or a multiple `mu` of the grid unit
//! `eps^4 w_max / Q` under-estimating the class weight in the block (grid
//! mode). Only occupied classes are enumerated; the rest are forced to zero.

use serde::{Deserialize, Serialize};

use crate::ptas::blocks::{block_count, BlockStats};
use crate::ptas::classes::ClassStructure;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GuessMode {
    Grid,
    #[default]
    Count,
    Oracle,
}

impl GuessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GuessMode::Grid => "grid",
            GuessMode::Count => "count",
            GuessMode::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for GuessMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grid" => Ok(GuessMode::Grid),
            "count" => Ok(GuessMode::Count),
            "oracle" => Ok(GuessMode::Oracle),
            other => Err(format!(
                "unknown mode {other:?} (expected grid, count or oracle)"
            )),
        }
    }
}

/// Light-class part of a guess; rows are indexed by `q - 1` for light `q`,
/// columns by `l - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LightGuess {
    Counts(Vec<Vec<usize>>),
    Multiples(Vec<Vec<u64>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatGuess {
    pub mode: GuessMode,
    /// Rows indexed by `q - q_min` for heavy `q`, columns by `l - 1`.
    pub heavy: Vec<Vec<usize>>,
    pub light: LightGuess,
}

impl StatGuess {
    pub fn block_count(&self) -> usize {
        self.heavy.first().map_or_else(
            || match &self.light {
                LightGuess::Counts(rows) => rows.first().map_or(0, Vec::len),
                LightGuess::Multiples(rows) => rows.first().map_or(0, Vec::len),
            },
            Vec::len,
        )
    }

    /// Guessed count of heavy class `q` in block `l`.
    pub fn heavy_count(&self, q_min: usize, q: usize, l: usize) -> usize {
        self.heavy[q - q_min][l - 1]
    }

    /// Highest heavy class with a positive guessed count in block `l`.
    pub fn head_class(&self, q_min: usize, l: usize) -> Option<usize> {
        self.heavy
            .iter()
            .enumerate()
            .rev()
            .find(|(_, row)| row[l - 1] >= 1)
            .map(|(j, _)| q_min + j)
    }
}

/// `eps^4 w_max / Q`.
pub fn grid_unit<S: Scalar>(cs: &ClassStructure<S>) -> S {
    let e = S::lift(cs.eps());
    let e2 = e.clone() * e;
    e2.clone() * e2 * cs.w_max().clone() / S::from_usize(cs.class_count())
}

/// `floor(2 Q / eps^5)`, the bound on the sum of all light multiples.
pub fn grid_global_cap(q_count: usize, eps: f64) -> u64 {
    (2.0 * q_count as f64 / eps.powi(5)).floor() as u64
}

/// The guess matching `stats` exactly. Light weights are floored to grid
/// multiples, so `W - unit < mu * unit <= W`.
pub fn oracle_guess<S: Scalar>(stats: &BlockStats<S>, cs: &ClassStructure<S>) -> StatGuess {
    let l_count = stats.block_count();
    let heavy = cs
        .heavy_classes()
        .map(|q| (0..l_count).map(|l| stats.class_counts[l][q - 1]).collect())
        .collect();
    let unit = grid_unit(cs);
    let light = cs
        .light_classes()
        .map(|q| {
            (0..l_count)
                .map(|l| stats.class_weights[l][q - 1].floor_div(&unit))
                .collect()
        })
        .collect();
    StatGuess {
        mode: GuessMode::Oracle,
        heavy,
        light: LightGuess::Multiples(light),
    }
}

/// The exact-count guess of `stats`, as count mode would enumerate it.
pub fn count_guess<S: Scalar>(stats: &BlockStats<S>, cs: &ClassStructure<S>) -> StatGuess {
    let l_count = stats.block_count();
    let heavy = cs
        .heavy_classes()
        .map(|q| (0..l_count).map(|l| stats.class_counts[l][q - 1]).collect())
        .collect();
    let light = cs
        .light_classes()
        .map(|q| (0..l_count).map(|l| stats.class_counts[l][q - 1]).collect())
        .collect();
    StatGuess {
        mode: GuessMode::Count,
        heavy,
        light: LightGuess::Counts(light),
    }
}

/// Enumerates vectors made of `groups` runs of `width` entries, each run
/// summing to at most its cap, and the whole vector to at most `global`.
/// Lexicographic order with the last entry moving fastest.
#[derive(Debug, Clone)]
pub struct Odometer {
    width: usize,
    caps: Vec<u64>,
    global: Option<u64>,
    entries: Vec<u64>,
    sums: Vec<u64>,
    total: u64,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(width: usize, caps: Vec<u64>, global: Option<u64>) -> Self {
        let groups = caps.len();
        Odometer {
            width,
            caps,
            global,
            entries: vec![0; groups * width],
            sums: vec![0; groups],
            total: 0,
            started: false,
            done: false,
        }
    }

    pub fn current(&self) -> &[u64] {
        &self.entries
    }

    /// Moves to the next vector; the first call yields the zero vector.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        for i in (0..self.entries.len()).rev() {
            let g = i / self.width;
            let fits = self.sums[g] < self.caps[g] && self.global.is_none_or(|c| self.total < c);
            if fits {
                self.entries[i] += 1;
                self.sums[g] += 1;
                self.total += 1;
                return true;
            }
            let v = std::mem::take(&mut self.entries[i]);
            self.sums[g] -= v;
            self.total -= v;
        }
        self.done = true;
        false
    }

    pub fn reset(&mut self) {
        self.entries.iter_mut().for_each(|e| *e = 0);
        self.sums.iter_mut().for_each(|s| *s = 0);
        self.total = 0;
        self.started = false;
        self.done = false;
    }
}

/// `C(m + L, L)` per occupied class, multiplied; saturating.
pub fn count_family_size<S: Scalar>(cs: &ClassStructure<S>) -> u128 {
    let l = block_count(cs.eps()) as u128;
    cs.occupied()
        .try_fold(1u128, |acc, q| {
            let m = cs.members(q).len() as u128;
            let mut c: u128 = 1;
            for j in 1..=l.min(m) {
                c = c.checked_mul(m + l + 1 - j)? / j;
            }
            acc.checked_mul(c)
        })
        .unwrap_or(u128::MAX)
}

/// Lazy, budgeted stream of guesses in lexicographic order: heavy part
/// outermost, light part fastest.
#[derive(Debug, Clone)]
pub struct GuessStream {
    mode: GuessMode,
    l_count: usize,
    q_min: usize,
    heavy_rows: usize,
    light_rows: usize,
    heavy_classes: Vec<usize>,
    light_classes: Vec<usize>,
    heavy: Odometer,
    light: Odometer,
    heavy_started: bool,
    budget: u64,
    yielded: u64,
    truncated: bool,
    finished: bool,
}

/// `mode` must be `Grid` or `Count`.
pub fn enumerate_guesses<S: Scalar>(
    cs: &ClassStructure<S>,
    mode: GuessMode,
    budget: u64,
) -> GuessStream {
    assert!(
        mode != GuessMode::Oracle,
        "the oracle guess is not enumerated"
    );
    let l_count = block_count(cs.eps());
    let heavy_classes: Vec<usize> = cs.occupied().filter(|&q| cs.is_heavy(q)).collect();
    let light_classes: Vec<usize> = cs.occupied().filter(|&q| !cs.is_heavy(q)).collect();
    let heavy_caps = heavy_classes
        .iter()
        .map(|&q| cs.members(q).len() as u64)
        .collect();
    let (light_caps, global) = match mode {
        GuessMode::Count => (
            light_classes
                .iter()
                .map(|&q| cs.members(q).len() as u64)
                .collect(),
            None,
        ),
        _ => {
            // A class can only absorb multiples worth up to its total weight
            // after the (1 - eps) slack; larger guesses are infeasible.
            let unit = grid_unit(cs) * (S::one() - S::lift(cs.eps()));
            (
                light_classes
                    .iter()
                    .map(|&q| cs.class_weight(q).floor_div(&unit))
                    .collect(),
                Some(grid_global_cap(cs.class_count(), cs.eps())),
            )
        }
    };
    GuessStream {
        mode,
        l_count,
        q_min: cs.q_min(),
        heavy_rows: cs.heavy_classes().count(),
        light_rows: cs.light_classes().count(),
        heavy: Odometer::new(l_count, heavy_caps, None),
        light: Odometer::new(l_count, light_caps, global),
        heavy_classes,
        light_classes,
        heavy_started: false,
        budget,
        yielded: 0,
        truncated: false,
        finished: false,
    }
}

impl GuessStream {
    /// Set once the budget stopped the stream before it was exhausted.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn yielded(&self) -> u64 {
        self.yielded
    }

    fn step(&mut self) -> bool {
        if !self.heavy_started {
            self.heavy_started = true;
            return self.heavy.advance() && self.light.advance();
        }
        if self.light.advance() {
            return true;
        }
        if !self.heavy.advance() {
            return false;
        }
        self.light.reset();
        self.light.advance()
    }

    fn build(&self) -> StatGuess {
        let mut heavy = vec![vec![0; self.l_count]; self.heavy_rows];
        for (g, &q) in self.heavy_classes.iter().enumerate() {
            let run = &self.heavy.current()[g * self.l_count..(g + 1) * self.l_count];
            heavy[q - self.q_min] = run.iter().map(|&x| x as usize).collect();
        }
        let runs = |g: usize| &self.light.current()[g * self.l_count..(g + 1) * self.l_count];
        let light = match self.mode {
            GuessMode::Count => {
                let mut rows = vec![vec![0; self.l_count]; self.light_rows];
                for (g, &q) in self.light_classes.iter().enumerate() {
                    rows[q - 1] = runs(g).iter().map(|&x| x as usize).collect();
                }
                LightGuess::Counts(rows)
            }
            _ => {
                let mut rows = vec![vec![0; self.l_count]; self.light_rows];
                for (g, &q) in self.light_classes.iter().enumerate() {
                    rows[q - 1] = runs(g).to_vec();
                }
                LightGuess::Multiples(rows)
            }
        };
        StatGuess {
            mode: self.mode,
            heavy,
            light,
        }
    }
}

impl Iterator for GuessStream {
    type Item = StatGuess;

    fn next(&mut self) -> Option<StatGuess> {
        if self.finished {
            return None;
        }
        if !self.step() {
            self.finished = true;
            return None;
        }
        if self.yielded == self.budget {
            self.truncated = true;
            self.finished = true;
            return None;
        }
        self.yielded += 1;
        Some(self.build())
    }
}
