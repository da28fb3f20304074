//! Round small weights up, solve the rounded instance with an inner
//! solver, and evaluate the ranking on the original instance.

use msrank::baselines::brute_force_opt;
use msrank::random::{random_instance, RandomSpec};
use msrank::reduction::{bounded_ratio_transform, qptas_factor, quasi_ptas, BruteForceSolver};

pub fn run() -> msrank::Result<()> {
    let eps = 0.2;
    // Wide weight range so that some products fall under the floor.
    let inst = random_instance(&RandomSpec::new(7, 2, 5).weights(1e-5, 4.0))?;
    let t = bounded_ratio_transform(&inst, eps)?;
    println!("floor {:.3e}; raised products {:?}", t.floor, t.rounded);

    let out = quasi_ptas(&inst, eps, &BruteForceSolver::default())?;
    let opt = brute_force_opt(&inst, 10_000_000)?.opt;
    println!(
        "share {:.6} (rounded instance {:.6}), opt {:.6}, guarantee {:.2}",
        out.share,
        out.working_share.unwrap_or(f64::NAN),
        opt,
        qptas_factor(eps)
    );
    assert!(!out.trivial);
    assert!(out.share >= qptas_factor(eps) * opt - 1e-12);

    // Large weights are handled without rounding.
    let heavy = random_instance(&RandomSpec::new(5, 2, 5).weights(1.0, 20.0))?;
    let out = quasi_ptas(&heavy, eps, &BruteForceSolver::default())?;
    println!(
        "w_max {:.2} > 1/eps: trivial case {}",
        heavy.w_max(),
        out.trivial
    );
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
