//! Build the simulation formula of a state and check it against simulation.

use std::sync::Arc;

use dgl::formula::{closure_pm, parse};
use dgl::model::random_model;
use dgl::simformula::{characterization_sides, sim_formula};
use dgl::state::state_of_point;

fn main() {
    let sigma = Arc::new(closure_pm(&parse("<>p & F q").unwrap()));
    let m = random_model(11, 4, &["p", "q"]);
    let w = state_of_point(&m, 0, sigma);
    let f = sim_formula(&w);
    println!("state of {} has {} points", m.names()[0], w.len());
    println!("Sim = {f}");
    for x in 0..m.len() {
        let (holds, simulated) = characterization_sides(&m, x, &w).unwrap();
        println!("  {}: Sim holds {holds}, state simulates point {simulated}", m.names()[x]);
    }
}
