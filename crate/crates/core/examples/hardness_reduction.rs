//! Encode 3-partition instances as ranking instances and decide them by
//! comparing the exact optimum with the threshold.

use msrank::hardness::{
    build_hardness_instance, canonical_yes_assignment, decide_three_partition,
    ThreePartitionInstance,
};
use msrank::market_share;
use msrank::scalar::format_rational;

pub fn run() -> msrank::Result<()> {
    let tp = ThreePartitionInstance::new(vec![4, 5, 6, 4, 5, 6], 15)?;
    let h = build_hardness_instance(&tp)?;
    println!(
        "n = {}, large weight {}, threshold {}",
        h.instance.n(),
        h.big_weight,
        format_rational(&h.threshold)
    );

    let a = canonical_yes_assignment(&h, &[[1, 2, 3], [4, 5, 6]])?;
    let share = market_share(&h.instance, &a);
    println!(
        "canonical ranking {:?} reaches {}",
        a.to_one_based(),
        format_rational(&share)
    );
    assert_eq!(share, h.threshold);

    for (a, t) in [(vec![4, 5, 6, 4, 5, 6], 15), (vec![4, 4, 4, 6, 6, 6], 15)] {
        let d = decide_three_partition(&ThreePartitionInstance::new(a.clone(), t)?, 10_000_000, 4)?;
        println!(
            "{a:?} / {t}: opt {} vs {} -> {}",
            format_rational(&d.opt),
            format_rational(&d.threshold),
            if d.yes { "yes" } else { "no" }
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
