//! Parse a formula, print it back and list its closure and types.

use dgl::formula::{closure_pm, parse};
use dgl::state::enumerate_types;

fn main() {
    let f = parse("G([]p & p) -> []G p").expect("well formed");
    println!("formula: {f}");
    println!("dag size {}, tree size {}", f.dag_size(), f.tree_size());
    let sigma = closure_pm(&f);
    println!("closure ({} members):", sigma.len());
    for m in sigma.members() {
        println!("  {m}");
    }
    let types = enumerate_types(&sigma, 1 << 16).expect("small closure");
    println!("{} types", types.len());
}
