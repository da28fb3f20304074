//! Write an instance to JSON, read it back, and switch numeric backends.

use msrank::io::{instance_to_string, parse_instance, AnyInstance};
use msrank::random::{random_instance, RandomSpec};
use msrank::{market_share, Assignment, NumericMode};

pub fn run() -> msrank::Result<()> {
    let inst = random_instance(&RandomSpec::new(4, 2, 9))?;
    let text = instance_to_string(&inst, Some(&serde_json::json!({"seed": 9})));
    println!("{text}");

    let doc = parse_instance(&text)?;
    let AnyInstance::Float(back) = &doc.instance else {
        unreachable!("written in float mode")
    };
    assert_eq!(back, &inst);

    let a = Assignment::identity(4);
    let exact = match doc.instance.into_mode(NumericMode::Rational)? {
        AnyInstance::Rational(r) => market_share(&r, &a),
        AnyInstance::Float(_) => unreachable!(),
    };
    println!("float share {:.17}", market_share(&inst, &a));
    println!("exact share {exact}");
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
