//! Simulation formulas: `Sim(𝔴) = ⋀ℓ(0_𝔴) ∧ ⋀_{𝔳≺𝔴} ◊Sim(𝔳)`, true at a
//! model point exactly when `𝔴` simulates the point's generated state.

use std::collections::HashMap;

use crate::formula::{Formula, Literal};
use crate::model::{Evaluator, PosetModel};
use crate::state::{simulates, state_of_point, State, StateError};

fn label_conjunction(w: &State, x: usize) -> Formula {
    let sigma = w.sigma();
    let lits = (0..sigma.core_count()).map(|c| {
        sigma.formula(Literal {
            core: c,
            positive: w.label(x).core(c),
        })
    });
    Formula::conjunction(lits).expect("closures are nonempty")
}

/// `Sim(𝔴)`; the Sim of each point is built once and shared by interning.
pub fn sim_formula(w: &State) -> Formula {
    let mut memo: HashMap<usize, Formula> = HashMap::new();
    for x in w.order().linear_extension() {
        let mut below: Vec<Formula> = w
            .order()
            .below(x)
            .ones()
            .map(|y| memo[&y].dia())
            .collect();
        below.sort();
        below.dedup();
        let f = std::iter::once(label_conjunction(w, x))
            .chain(below)
            .reduce(|acc, g| acc.and(&g))
            .expect("at least the label");
        memo.insert(x, f);
    }
    memo.remove(&w.root()).expect("root is a point")
}

/// Compares `x ∈ ⟦Sim(𝔴)⟧` with `𝔴 ⊴ (M, x)`. Both sides must agree; the
/// pair is returned for diagnostics.
pub fn characterization_sides(
    m: &PosetModel,
    x: usize,
    w: &State,
) -> Result<(bool, bool), StateError> {
    let sim = sim_formula(w);
    let semantic = Evaluator::new(m).eval(&sim).contains(x);
    let structural = simulates(w, &state_of_point(m, x, w.sigma().clone()))?;
    Ok((semantic, structural))
}

/// True when evaluation of `Sim(𝔴)` at `x` agrees with the simulation decider.
pub fn check_characterization(m: &PosetModel, x: usize, w: &State) -> Result<bool, StateError> {
    let (a, b) = characterization_sides(m, x, w)?;
    Ok(a == b)
}
