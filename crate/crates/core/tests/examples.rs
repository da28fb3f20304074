//! Runs every example's `run` so they stay compiling and correct.

#[path = "../examples/evaluate_ranking.rs"]
#[allow(dead_code)]
mod evaluate_ranking;

#[path = "../examples/calibrate_prices.rs"]
#[allow(dead_code)]
mod calibrate_prices;

#[path = "../examples/baseline_oracles.rs"]
#[allow(dead_code)]
mod baseline_oracles;

#[path = "../examples/qptas_composition.rs"]
#[allow(dead_code)]
mod qptas_composition;

#[path = "../examples/ptas_pipeline.rs"]
#[allow(dead_code)]
mod ptas_pipeline;

#[path = "../examples/hardness_reduction.rs"]
#[allow(dead_code)]
mod hardness_reduction;

#[path = "../examples/instance_json.rs"]
#[allow(dead_code)]
mod instance_json;

#[test]
fn evaluate_ranking_runs() {
    evaluate_ranking::run().unwrap();
}

#[test]
fn calibrate_prices_runs() {
    calibrate_prices::run().unwrap();
}

#[test]
fn baseline_oracles_runs() {
    baseline_oracles::run().unwrap();
}

#[test]
fn qptas_composition_runs() {
    qptas_composition::run().unwrap();
}

#[test]
fn ptas_pipeline_runs() {
    ptas_pipeline::run().unwrap();
}

#[test]
fn hardness_reduction_runs() {
    hardness_reduction::run().unwrap();
}

#[test]
fn instance_json_runs() {
    instance_json::run().unwrap();
}
