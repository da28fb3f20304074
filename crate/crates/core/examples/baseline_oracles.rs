//! Exact optimum by enumeration against the weight-descending heuristic
//! and the sorted-within-class optimum.

use msrank::baselines::{
    brute_force_with, sorted_within_class_oracle, w_ordering, BruteForceOptions,
    ClassOracleStrategy,
};
use msrank::market_share;
use msrank::random::{random_instance, RandomSpec};

pub fn run() -> msrank::Result<()> {
    let inst = random_instance(&RandomSpec::new(7, 3, 11).weights(0.1, 1.5))?;
    let exact = brute_force_with(
        &inst,
        &BruteForceOptions {
            threads: 2,
            ..Default::default()
        },
    )?;
    println!(
        "opt {:.6} at {:?} ({} permutations)",
        exact.opt,
        exact.best.to_one_based(),
        exact.examined
    );

    let wo = w_ordering(&inst);
    let share = market_share(&inst, &wo);
    println!("w-ordering {share:.6}, ratio {:.4}", share / exact.opt);
    assert!(share >= 0.1716 * exact.opt);

    let eps = 0.3;
    let swc = sorted_within_class_oracle(&inst, eps, 1_000_000, ClassOracleStrategy::PositionSets)?;
    println!(
        "sorted within classes (eps {eps}) {:.6} after {} candidates",
        swc.opt, swc.examined
    );
    assert!(swc.opt <= exact.opt + 1e-12);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
