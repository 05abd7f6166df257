#![allow(dead_code)]

use std::sync::Arc;

use dgl::doc::QuasimodelDoc;
use dgl::formula::{closure_pm, Closure};
use dgl::model::{random_formula_with, random_model_with};
use dgl::quasimodel::Quasimodel;
use dgl::state::{state_of_point, State};
use rand::Rng;

pub const ATOMS: [&str; 2] = ["p", "q"];

pub const GOLDEN: &str = include_str!("../../fixtures/golden_quasimodel.json");

pub fn golden_doc() -> QuasimodelDoc {
    serde_json::from_str(GOLDEN).unwrap()
}

pub fn golden() -> Quasimodel {
    Quasimodel::from_doc(&golden_doc(), None).unwrap()
}

pub fn random_sigma<R: Rng>(rng: &mut R, depth: usize) -> Arc<Closure> {
    Arc::new(closure_pm(&random_formula_with(rng, depth, &ATOMS)))
}

/// A random state over `sigma` with at most `max_points` points, read off a
/// random model.
pub fn random_state<R: Rng>(rng: &mut R, sigma: &Arc<Closure>, max_points: usize) -> State {
    let m = random_model_with(rng, max_points, &ATOMS);
    let x = rng.gen_range(0..m.len());
    state_of_point(&m, x, sigma.clone())
}

/// The state `↓x` of a quasimodel point.
pub fn down_state(q: &Quasimodel, x: usize) -> State {
    let keep: Vec<usize> = q.order().down_closure(x).ones().collect();
    let root = keep.iter().position(|&y| y == x).unwrap();
    State::new(
        q.sigma().clone(),
        keep.iter().map(|&y| q.names()[y].clone()).collect(),
        q.order().restrict(&keep),
        keep.iter().map(|&y| q.label(y).clone()).collect(),
        root,
    )
    .unwrap()
}
