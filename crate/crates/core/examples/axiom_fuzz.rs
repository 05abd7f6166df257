//! Check axiom instances and rule applications on random models.

use dgl::model::fuzz_axioms;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let r = fuzz_axioms(seed, 1000, 4, 2);
    println!(
        "seed {seed}: {} axiom instances, {} rule applications ({} informative), {} failures",
        r.axiom_trials,
        r.rule_trials,
        r.rule_trials_applicable,
        r.failures.len()
    );
    for f in &r.failures {
        println!("  trial {}: {} {}", f.trial, f.what, f.formula);
    }
}
