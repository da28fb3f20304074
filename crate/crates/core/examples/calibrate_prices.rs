//! Turn per-position search costs into reservation prices and check the
//! deterministic-weight closed form.

use msrank::calibration::{reservation_sequence, welfare, WeightDistribution};

pub fn run() -> msrank::Result<()> {
    let dist = WeightDistribution::new(vec![0.5, 1.0, 2.0], vec![0.25, 0.5, 0.25])?;
    let costs = [0.05, 0.1, 0.2, 0.4, 0.8, 1.2];
    let seq = reservation_sequence(&costs, &dist, 1e-12)?;
    for (p, (c, r)) in costs.iter().zip(&seq.prices).enumerate() {
        let tag = if seq.floored[p] { " (floored)" } else { "" };
        println!("position {}: cost {c:.2} -> price {r:.6}{tag}", p + 1);
    }
    assert!(seq.prices.windows(2).all(|w| w[1] <= w[0]));

    // With W = 1 and cost ln(3/2), (2 + r) / (1 + r) = 3/2 gives r = 1.
    let one = WeightDistribution::point_mass(1.0)?;
    let r = reservation_sequence(&[1.5f64.ln()], &one, 1e-13)?.prices[0];
    println!("point mass at 1, cost ln 1.5: r = {r:.12}");
    assert!((r - 1.0).abs() < 1e-10);

    println!(
        "welfare of a prefix with weight e and cost 0.3: {:.6}",
        welfare(std::f64::consts::E, 0.3)?
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
