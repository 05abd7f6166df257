//! Greatest-fixpoint deciders for `⊴` (simulation) and `↦` (one step).

use fixedbitset::FixedBitSet;

use super::{sensible_pair, State, StateError};

/// `rel[a]` is the set of points related to `a`.
pub type Relation = Vec<FixedBitSet>;

fn check_sigma(a: &State, b: &State) -> Result<(), StateError> {
    if a.same_sigma(b) {
        Ok(())
    } else {
        Err(StateError::SigmaMismatch)
    }
}

/// Largest label-preserving, strictly forward-confluent relation `|v| × |w|`.
pub(crate) fn max_simulation(v: &State, w: &State) -> Relation {
    let mut rel: Relation = (0..v.len())
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(w.len());
            for b in 0..w.len() {
                if v.label(a) == w.label(b) {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    let order = v.order().linear_extension();
    loop {
        let mut changed = false;
        for &a in &order {
            let doomed: Vec<usize> = rel[a]
                .ones()
                .filter(|&b| {
                    v.order()
                        .below(a)
                        .ones()
                        .any(|a2| rel[a2].is_disjoint(w.order().below(b)))
                })
                .collect();
            for b in doomed {
                rel[a].set(b, false);
                changed = true;
            }
        }
        if !changed {
            return rel;
        }
    }
}

pub(crate) fn simulates_unchecked(v: &State, w: &State) -> bool {
    if v.root_label() != w.root_label() || v.norm().hgt > w.norm().hgt {
        return false;
    }
    max_simulation(v, w)[v.root()].contains(w.root())
}

/// Decides `v ⊴ w`: `v` embeds into `w` by a labelled simulation relating roots.
pub fn simulates(v: &State, w: &State) -> Result<bool, StateError> {
    check_sigma(v, w)?;
    Ok(simulates_unchecked(v, w))
}

/// The maximal simulation, if it relates the roots.
pub fn simulation_relation(v: &State, w: &State) -> Result<Option<Relation>, StateError> {
    check_sigma(v, w)?;
    let rel = max_simulation(v, w);
    Ok(rel[v.root()].contains(w.root()).then_some(rel))
}

/// Largest sensible, continuous relation `|w| × |v|`. Continuity is the
/// downward form: `a ≼ a′` and `a′ R b′` give some `b ≼ b′` with `a R b`.
pub(crate) fn max_step(w: &State, v: &State) -> Relation {
    let sigma = w.sigma();
    let mut rel: Relation = (0..w.len())
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(v.len());
            for b in 0..v.len() {
                if sensible_pair(sigma, w.label(a), v.label(b)) {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    let downs: Vec<FixedBitSet> = (0..v.len()).map(|b| v.order().down_closure(b)).collect();
    let order = w.order().linear_extension();
    loop {
        let mut changed = false;
        for &a2 in &order {
            let doomed: Vec<usize> = rel[a2]
                .ones()
                .filter(|&b2| {
                    w.order()
                        .below(a2)
                        .ones()
                        .any(|a| rel[a].is_disjoint(&downs[b2]))
                })
                .collect();
            for b in doomed {
                rel[a2].set(b, false);
                changed = true;
            }
        }
        if !changed {
            return rel;
        }
    }
}

pub(crate) fn step_unchecked(w: &State, v: &State) -> Option<Relation> {
    if !sensible_pair(w.sigma(), w.root_label(), v.root_label()) {
        return None;
    }
    let rel = max_step(w, v);
    rel[w.root()].contains(v.root()).then_some(rel)
}

/// Decides `w ↦ v`.
pub fn step_exists(w: &State, v: &State) -> Result<bool, StateError> {
    check_sigma(w, v)?;
    Ok(step_unchecked(w, v).is_some())
}

/// The maximal sensible continuous relation, if it relates the roots.
pub fn step_relation(w: &State, v: &State) -> Result<Option<Relation>, StateError> {
    check_sigma(w, v)?;
    Ok(step_unchecked(w, v))
}

/// Decides `w ⇝ v`: a step whose norm growth is capped by the `◊` formulas of `w`.
pub fn bounded_future(w: &State, v: &State) -> Result<bool, StateError> {
    check_sigma(w, v)?;
    Ok(step_unchecked(w, v).is_some()
        && v.norm().norm <= w.norm().norm + w.dia_formulas_present())
}
