use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn msrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn json(text: &[u8]) -> Value {
    serde_json::from_slice(text).expect("valid JSON")
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for p in [&a, &b] {
        let o = msrank(&["gen", "--n", "5", "--k", "3", "--seed", "17", "--output", p]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let doc = msrank::io::parse_instance(&text).unwrap();
    assert_eq!(doc.instance.n(), 5);
    assert_eq!(doc.meta.unwrap()["spec"]["seed"], 17);

    let stdout = msrank(&["gen", "--n", "5", "--k", "3", "--seed", "17"]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);
}

#[test]
fn solve_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "i.json");
    assert_eq!(
        code(&msrank(&["gen", "--n", "5", "--seed", "4", "-o", &inst])),
        0
    );
    let run = || {
        msrank(&[
            "solve",
            "-i",
            &inst,
            "--algo",
            "qptas",
            "--eps",
            "0.2",
            "--threads",
            "3",
            "--no-timing",
        ])
    };
    let (x, y) = (run(), run());
    assert_eq!(code(&x), 0, "{}", String::from_utf8_lossy(&x.stderr));
    assert_eq!(x.stdout, y.stdout);

    let r = json(&x.stdout);
    assert_eq!(r["algorithm"], "qptas");
    assert_eq!(r["inner"], "brute");
    assert_eq!(r["seed"], 4);
    assert!(r.get("duration_ms").is_none());
    let share = r["share"].as_f64().unwrap();
    let order: Vec<usize> = r["assignment"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let doc = msrank::io::read_instance(Path::new(&inst)).unwrap();
    let msrank::io::AnyInstance::Float(i) = doc.instance else {
        panic!("float instance")
    };
    let again = msrank::market_share(&i, &msrank::Assignment::from_one_based(&order).unwrap());
    assert!((again - share).abs() <= 1e-12);
    let opt = r["opt"].as_f64().unwrap();
    assert!(share <= opt + 1e-12);
    assert!(share >= (1.0 - 3.0 * 0.2) * opt - 1e-9);
}

#[test]
fn rational_hardness_instance_solves_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "h.json");
    let o = msrank(&[
        "gen", "--kind", "hardness", "--a", "3,3,3", "--t", "9", "-o", &inst,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&msrank(&["solve", "-i", &inst, "--algo", "brute"]).stdout);
    assert_eq!(r["numeric_mode"], "rational");
    assert_eq!(r["share_exact"], "49/50");
    let order: Vec<usize> = r["assignment"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let doc = msrank::io::read_instance(Path::new(&inst)).unwrap();
    let msrank::io::AnyInstance::Rational(i) = doc.instance else {
        panic!("rational instance")
    };
    let again = msrank::market_share(&i, &msrank::Assignment::from_one_based(&order).unwrap());
    assert_eq!(msrank::scalar::format_rational(&again), "49/50");
    assert!(r["duration_ms"].as_f64().is_some());
}

#[test]
fn compare_lists_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "i.json");
    assert_eq!(
        code(&msrank(&["gen", "--n", "4", "--seed", "1", "-o", &inst])),
        0
    );
    let o = msrank(&[
        "compare",
        "-i",
        &inst,
        "--algos",
        "brute,worder,ptas",
        "--eps",
        "0.5",
        "--no-timing",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o.stdout);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["algorithm"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["brute", "worder", "ptas"]);
    let opt = v[0]["share"].as_f64().unwrap();
    for r in v.as_array().unwrap() {
        assert_eq!(r["opt"].as_f64().unwrap(), opt);
    }
}

#[test]
fn budget_exhaustion_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "big.json");
    assert_eq!(
        code(&msrank(&["gen", "--n", "12", "--seed", "2", "-o", &inst])),
        0
    );
    let o = msrank(&["solve", "-i", &inst, "--algo", "brute", "--no-opt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));

    let small = path(dir.path(), "small.json");
    assert_eq!(
        code(&msrank(&["gen", "--n", "5", "--seed", "2", "-o", &small])),
        0
    );
    let o = msrank(&[
        "solve", "-i", &small, "--algo", "ptas", "--eps", "0.3", "--budget", "5", "--no-opt",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o.stdout)["truncated"], true);
}

#[test]
fn usage_and_runtime_errors() {
    assert_eq!(code(&msrank(&["solve"])), 64);
    assert_eq!(code(&msrank(&["frobnicate"])), 64);
    assert_eq!(code(&msrank(&["verify", "--suite", "nope"])), 64);
    assert_eq!(code(&msrank(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "missing.json");
    assert_eq!(code(&msrank(&["solve", "-i", &missing])), 1);

    let inst = path(dir.path(), "i.json");
    assert_eq!(code(&msrank(&["gen", "--n", "3", "-o", &inst])), 0);
    assert_eq!(code(&msrank(&["solve", "-i", &inst, "--eps", "1.5"])), 64);

    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, r#"{"n": 2, "weights": [1.0], "segments": []}"#).unwrap();
    assert_eq!(code(&msrank(&["solve", "-i", &bad])), 1);
    assert_eq!(
        code(&msrank(&[
            "gen", "--kind", "hardness", "--a", "1,2", "--t", "3"
        ])),
        1
    );
}

#[test]
fn verify_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "v.csv");
    let o = msrank(&[
        "verify", "--suite", "worder", "--trials", "12", "--seed", "3", "-o", &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert!(rdr.headers().unwrap().iter().any(|h| h == "margin"));
    assert_eq!(rdr.records().count(), 12);
}

#[test]
fn calibrate_prices() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "c.json");
    let cost = 1.5f64.ln();
    std::fs::write(
        &input,
        format!(
            r#"{{"costs": [{cost}, {}], "support": [1.0], "probabilities": [1.0]}}"#,
            3f64.ln()
        ),
    )
    .unwrap();
    let o = msrank(&["calibrate", "-i", &input]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o.stdout);
    assert!((v["prices"][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["prices"][1].as_f64().unwrap(), 0.0);
    assert_eq!(v["floored"], serde_json::json!([false, true]));

    std::fs::write(
        &input,
        r#"{"costs": [0.5, 0.2], "support": [1.0], "probabilities": [1.0]}"#,
    )
    .unwrap();
    assert_eq!(code(&msrank(&["calibrate", "-i", &input])), 1);
}
