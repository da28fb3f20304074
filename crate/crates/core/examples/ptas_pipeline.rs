//! Weight classes, blocks, statistics guesses and the reconstructed ranking,
//! first along the oracle path and then over the full guess family.

use msrank::baselines::brute_force_opt;
use msrank::ptas::{ptas_solve, GuessMode, PtasOptions};
use msrank::random::{rng, sample_bounded, RandomSpec};

pub fn run() -> msrank::Result<()> {
    let eps = 0.4;
    let inst = sample_bounded(
        &RandomSpec::new(5, 3, 2).weights(0.2, 2.0),
        eps,
        &mut rng(2),
    )?;
    let opt = brute_force_opt(&inst, 1_000_000)?.opt;

    let oracle = ptas_solve(
        &inst,
        eps,
        &PtasOptions {
            mode: GuessMode::Oracle,
            ..Default::default()
        },
    )?;
    let art = oracle
        .oracle
        .as_ref()
        .expect("oracle mode keeps its artifacts");
    let cs = oracle.classes.as_ref().expect("non-trivial instance");
    println!(
        "{} classes ({} heavy from q = {}), {} blocks",
        cs.class_count(),
        cs.heavy_classes().count(),
        cs.q_min(),
        oracle.block_count
    );
    for q in cs.occupied() {
        println!(
            "  class {q}: products {:?}",
            cs.members(q).iter().map(|i| i + 1).collect::<Vec<_>>()
        );
    }
    println!("reference ranking {:?}", art.reference.to_one_based());
    println!(
        "oracle partition good: {} (weight margin {:.3e})",
        art.goodness.is_good(),
        art.goodness.weight_margin()
    );
    println!("oracle ranking share {:.6}, opt {opt:.6}", oracle.share);

    let full = ptas_solve(
        &inst,
        eps,
        &PtasOptions {
            threads: 2,
            ..Default::default()
        },
    )?;
    println!(
        "count family: {} guesses, {} feasible, truncated {}, share {:.6} (ratio {:.4})",
        full.examined,
        full.feasible,
        full.truncated,
        full.share,
        full.share / opt
    );
    assert!(full.share >= oracle.share - 1e-12 || full.truncated);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
