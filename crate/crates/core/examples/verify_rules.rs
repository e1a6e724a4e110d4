// Check a handful of built-in rules numerically at several dimensions.

use zxw::rules::{builtin_rules, find_rule, verify_all, SOUNDNESS_TOL};
use zxw::Dimension;

pub fn run_example() -> zxw::Result<()> {
    let all = builtin_rules();
    let picked: Vec<_> = ["S1", "Hopf", "HZ", "Lemma5", "Lemma29"]
        .iter()
        .filter_map(|n| find_rule(&all, n))
        .cloned()
        .collect();
    let dims = [Dimension::new(2)?, Dimension::new(3)?, Dimension::new(5)?];
    for r in verify_all(&picked, &dims, 10, 42, SOUNDNESS_TOL) {
        println!(
            "{:8} d={} pass={} max_dev={:.2e}",
            r.rule,
            r.d,
            r.pass,
            r.max_dev.unwrap_or(f64::NAN)
        );
    }
    println!("{} rules are registered", all.len());
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
