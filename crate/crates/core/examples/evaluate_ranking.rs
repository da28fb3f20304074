//! Build a small instance by hand, rank it, and inspect where each
//! segment stops.

use msrank::{evaluate, Assignment, Instance, Segment};

pub fn run() -> msrank::Result<()> {
    let inst = Instance::new(
        vec![0.6, 0.3, 0.9, 0.2],
        vec![
            Segment::new(0.5, vec![0.5, 0.4, 0.3, 0.1]),
            Segment::new(0.3, vec![1.6, 1.2, 1.1, 1.0]),
            Segment::new(0.2, vec![3.0, 3.0, 3.0, 3.0]),
        ],
    )?;
    let ranking = Assignment::from_one_based(&[3, 1, 2, 4])?;
    let ev = evaluate(&inst, &ranking);
    for (k, (stop, w)) in ev.stops.iter().zip(&ev.consideration_weights).enumerate() {
        println!(
            "segment {}: stops at {stop}, consideration weight {w:.2}",
            k + 1
        );
    }
    println!("market share {:.6}", ev.share);
    // Segment 3 never meets its price and sees everything.
    assert_eq!(ev.stops, vec![1, 2, 4]);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
