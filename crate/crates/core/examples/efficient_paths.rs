//! Enumerate non-redundant step paths from a model state.

use std::sync::Arc;

use dgl::formula::{closure_pm, parse};
use dgl::model::random_model;
use dgl::search::{efficient_paths, generator_source, rho, SearchBounds};
use dgl::state::{state_of_point, Generator};

fn main() {
    let sigma = Arc::new(closure_pm(&parse("F p").unwrap()));
    let m = random_model(1, 4, &["p"]);
    let w = state_of_point(&m, 0, sigma.clone());
    let gen = Generator::new(sigma).unwrap();
    let bounds = SearchBounds {
        max_states: 64,
        max_path: 5,
        ..SearchBounds::default()
    };
    let ep = efficient_paths(&w, &bounds, generator_source(&gen, bounds.max_norm));
    println!("{} paths over {} states (truncated: {})", ep.paths.len(), ep.states.len(), ep.truncated);
    for p in ep.paths.iter().take(10) {
        println!("  {p:?}");
    }
    let r = rho(&w, &bounds, generator_source(&gen, bounds.max_norm));
    println!("rho has {} states", r.states.len());
}
