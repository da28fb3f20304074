//! Reservation prices from search costs.
//!
//! For a discrete preference-weight distribution `W` and a search cost `c`,
//! the reservation price is the root of `E[ln(1 + r + W)] - ln(1 + r) = c`.
//! The left-hand side equals `E[ln(1 + W/(1+r))]`, which is strictly
//! decreasing in `r` on `(-1, inf)` whenever `W` has mass above zero.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const BRACKET_LOW: f64 = -1.0 + 1e-9;
const BRACKET_CAP: f64 = 1e12;
const MAX_BISECTIONS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    support: Vec<f64>,
    probabilities: Vec<f64>,
}

impl WeightDistribution {
    pub fn new(support: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probabilities.len() {
            return Err(Error::InvalidDistribution(format!(
                "support has {} values and probabilities {}",
                support.len(),
                probabilities.len()
            )));
        }
        if support.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "support values must be finite and >= 0".into(),
            ));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution(
                "probabilities must be >= 0".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(WeightDistribution {
            support,
            probabilities,
        })
    }

    pub fn point_mass(w: f64) -> Result<Self> {
        Self::new(vec![w], vec![1.0])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `E[ln(1 + r + W)] - ln(1 + r)`.
    pub fn search_gain(&self, r: f64) -> f64 {
        let base = 1.0 + r;
        self.support
            .iter()
            .zip(&self.probabilities)
            .map(|(w, p)| p * (w / base).ln_1p())
            .sum()
    }
}

/// Bisection root of `search_gain(r) = cost`, to residual `tol`.
pub fn reservation_price(cost: f64, dist: &WeightDistribution, tol: f64) -> Result<f64> {
    if !(cost > 0.0) {
        return Err(Error::NonPositiveCost(cost));
    }
    assert!(tol > 0.0, "tolerance must be positive");
    let residual = |r: f64| dist.search_gain(r) - cost;

    let mut lo = BRACKET_LOW;
    if residual(lo) < 0.0 {
        return Err(Error::BracketExhausted { cost });
    }
    let mut hi = 1.0;
    while residual(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return Err(Error::BracketExhausted { cost });
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) / 2.0;
        let f = residual(mid);
        if f.abs() <= tol {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Bracket collapsed to adjacent floats; return the closer endpoint.
    Ok(if residual(lo).abs() <= residual(hi).abs() {
        lo
    } else {
        hi
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSequence {
    pub prices: Vec<f64>,
    /// Positions whose solved price was negative and has been floored at zero.
    pub floored: Vec<bool>,
}

pub fn reservation_sequence(
    costs: &[f64],
    dist: &WeightDistribution,
    tol: f64,
) -> Result<PriceSequence> {
    if let Some(p) = costs.windows(2).position(|c| c[1] < c[0]) {
        return Err(Error::CostsNotIncreasing { position: p + 2 });
    }
    let mut roots: Vec<f64> = Vec::with_capacity(costs.len());
    for (p, &c) in costs.iter().enumerate() {
        // Equal costs give identical equations.
        let r = if p > 0 && c == costs[p - 1] {
            roots[p - 1]
        } else {
            reservation_price(c, dist, tol)?
        };
        roots.push(r);
    }
    let floored: Vec<bool> = roots.iter().map(|r| *r < 0.0).collect();
    let mut prices: Vec<f64> = roots.iter().map(|r| r.max(0.0)).collect();
    // Bisection noise must not break monotonicity.
    for p in 1..prices.len() {
        if prices[p] > prices[p - 1] {
            prices[p] = prices[p - 1];
        }
    }
    Ok(PriceSequence { prices, floored })
}

/// `ln(prefix_weight) + gamma - cumulative_cost`: the expected maximum of
/// `ln(w_i) + Z_i` over an inspected prefix with standard Gumbel shocks,
/// minus the search cost paid.
pub fn welfare(prefix_weight: f64, cumulative_cost: f64) -> Result<f64> {
    if !(prefix_weight > 0.0) {
        return Err(Error::NonPositiveWeight(prefix_weight));
    }
    Ok(prefix_weight.ln() + EULER_GAMMA - cumulative_cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_weight_closed_forms() {
        let one = WeightDistribution::point_mass(1.0).unwrap();
        let r = reservation_price(2f64.ln(), &one, 1e-13).unwrap();
        assert!(r.abs() < 1e-11, "{r}");
        // (2 + r)/(1 + r) = 3/2  =>  r = 1
        let r = reservation_price(1.5f64.ln(), &one, 1e-13).unwrap();
        assert!((r - 1.0).abs() < 1e-11, "{r}");
    }

    #[test]
    fn degenerate_distribution_has_no_root() {
        let zero = WeightDistribution::point_mass(0.0).unwrap();
        assert!(matches!(
            reservation_price(0.3, &zero, 1e-12),
            Err(Error::BracketExhausted { .. })
        ));
    }

    #[test]
    fn tiny_cost_exhausts_bracket() {
        let one = WeightDistribution::point_mass(1.0).unwrap();
        assert!(matches!(
            reservation_price(1e-15, &one, 1e-18),
            Err(Error::BracketExhausted { .. })
        ));
    }

    #[test]
    fn nonpositive_cost_is_rejected() {
        let one = WeightDistribution::point_mass(1.0).unwrap();
        assert!(matches!(
            reservation_price(0.0, &one, 1e-9),
            Err(Error::NonPositiveCost(_))
        ));
        assert!(matches!(
            reservation_price(-1.0, &one, 1e-9),
            Err(Error::NonPositiveCost(_))
        ));
    }

    #[test]
    fn sequence_examples() {
        let one = WeightDistribution::point_mass(1.0).unwrap();
        let seq = reservation_sequence(&[1.5f64.ln(), 2f64.ln()], &one, 1e-13).unwrap();
        assert!((seq.prices[0] - 1.0).abs() < 1e-11);
        assert!(seq.prices[1].abs() < 1e-11);

        let flat = reservation_sequence(&[0.2, 0.2, 0.2], &one, 1e-12).unwrap();
        assert_eq!(flat.prices[0], flat.prices[1]);
        assert_eq!(flat.prices[1], flat.prices[2]);

        assert!(matches!(
            reservation_sequence(&[0.5, 0.4], &one, 1e-12),
            Err(Error::CostsNotIncreasing { position: 2 })
        ));
    }

    #[test]
    fn negative_prices_are_floored_and_flagged() {
        let one = WeightDistribution::point_mass(1.0).unwrap();
        // c = ln 3 > ln 2 gives (2 + r)/(1 + r) = 3, r = -1/2.
        let seq = reservation_sequence(&[0.5, 3f64.ln()], &one, 1e-12).unwrap();
        assert_eq!(seq.prices[1], 0.0);
        assert_eq!(seq.floored, vec![false, true]);
    }

    #[test]
    fn welfare_examples() {
        assert_eq!(welfare(1.0, 0.0).unwrap(), EULER_GAMMA);
        assert!((welfare(std::f64::consts::E, 0.0).unwrap() - (1.0 + EULER_GAMMA)).abs() < 1e-15);
        assert_eq!(welfare(1.0, EULER_GAMMA).unwrap(), 0.0);
        assert!(welfare(0.0, 0.0).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(WeightDistribution::new(vec![1.0, 2.0], vec![0.5]).is_err());
        assert!(WeightDistribution::new(vec![-1.0], vec![1.0]).is_err());
        assert!(WeightDistribution::new(vec![1.0, 2.0], vec![0.5, 0.4]).is_err());
    }
}
