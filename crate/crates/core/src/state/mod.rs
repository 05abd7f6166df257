//! Σ-states: finite rooted labelled posets, together with simulation,
//! one-step transitions and successor generation.

mod relations;
mod successors;
mod types;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::doc::StateDoc;
use crate::formula::{parse, Closure, Formula};
use crate::model::{index_points, resolve_edges, Evaluator, PosetModel};
use crate::order::Poset;

pub use relations::{
    bounded_future, simulates, simulation_relation, step_exists, step_relation, Relation,
};
pub(crate) use relations::{simulates_unchecked, step_unchecked};
pub use successors::{shrink, successor_candidates, CandidateLimits, Candidates, Generator};
pub use types::{enumerate_types, sensible_pair, SigmaType, TypeError, TypeTable, DEFAULT_TYPE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("states or types are over different closures")]
    SigmaMismatch,
    #[error("state has no points")]
    Empty,
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("order has a cycle through `{0}`")]
    Cycle(String),
    #[error("point `{0}` is not below the root")]
    NotBelowRoot(String),
    #[error("point `{0}` has no label")]
    MissingLabel(String),
    #[error("label of `{point}`: {source}")]
    Label { point: String, source: TypeError },
    #[error("`{formula}` at `{point}` has no witness below it")]
    MissingWitness { point: String, formula: String },
    #[error("`{formula}` at `{point}` fails: `{witness}` lies below it")]
    ForbiddenWitness {
        point: String,
        formula: String,
        witness: String,
    },
    #[error("bad closure formula `{0}`")]
    BadSigma(String),
}

/// Checks labelled-poset coherence of `◊` literals at every point.
pub(crate) fn check_coherence(
    sigma: &Closure,
    names: &[String],
    order: &Poset,
    labels: &[SigmaType],
) -> Result<(), StateError> {
    for x in 0..names.len() {
        for (c, child) in sigma.dia_cores() {
            let witness = order.below(x).ones().find(|&y| labels[y].has(child));
            match (labels[x].core(c), witness) {
                (true, None) => {
                    return Err(StateError::MissingWitness {
                        point: names[x].clone(),
                        formula: sigma.cores()[c].to_string(),
                    })
                }
                (false, Some(y)) => {
                    return Err(StateError::ForbiddenWitness {
                        point: names[x].clone(),
                        formula: sigma.cores()[c].neg().to_string(),
                        witness: names[y].clone(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Reads an optional explicit closure, else the closure of all label formulas.
pub(crate) fn sigma_from_labels(
    explicit: Option<&[String]>,
    labels: &BTreeMap<String, Vec<String>>,
) -> Result<Closure, StateError> {
    let texts: Vec<&String> = match explicit {
        Some(list) => list.iter().collect(),
        None => labels.values().flatten().collect(),
    };
    let formulas = texts
        .into_iter()
        .map(|t| parse(t).map_err(|e| StateError::BadSigma(format!("{t}: {e}"))))
        .collect::<Result<Vec<Formula>, _>>()?;
    Ok(Closure::of(&formulas))
}

/// A Σ-state. Immutable once constructed.
#[derive(Clone)]
pub struct State {
    sigma: Arc<Closure>,
    names: Vec<String>,
    order: Poset,
    labels: Vec<SigmaType>,
    root: usize,
}

impl State {
    pub fn new(
        sigma: Arc<Closure>,
        names: Vec<String>,
        order: Poset,
        labels: Vec<SigmaType>,
        root: usize,
    ) -> Result<State, StateError> {
        if names.is_empty() {
            return Err(StateError::Empty);
        }
        index_points(&names).map_err(StateError::DuplicatePoint)?;
        for (x, l) in labels.iter().enumerate() {
            SigmaType::check(&sigma, l.bits()).map_err(|source| StateError::Label {
                point: names[x].clone(),
                source,
            })?;
        }
        for x in 0..names.len() {
            if x != root && !order.lt(x, root) {
                return Err(StateError::NotBelowRoot(names[x].clone()));
            }
        }
        check_coherence(&sigma, &names, &order, &labels)?;
        Ok(State {
            sigma,
            names,
            order,
            labels,
            root,
        })
    }

    /// Construction without validation, for states built by trusted generators.
    pub(crate) fn from_parts(
        sigma: Arc<Closure>,
        names: Vec<String>,
        order: Poset,
        labels: Vec<SigmaType>,
        root: usize,
    ) -> State {
        State {
            sigma,
            names,
            order,
            labels,
            root,
        }
    }

    /// A single point with the given type.
    pub fn point(sigma: Arc<Closure>, name: &str, label: SigmaType) -> Result<State, StateError> {
        State::new(sigma, vec![name.to_string()], Poset::discrete(1), vec![label], 0)
    }

    pub fn from_doc(doc: &StateDoc, sigma: Option<Arc<Closure>>) -> Result<State, StateError> {
        let sigma = match sigma {
            Some(s) => s,
            None => Arc::new(sigma_from_labels(doc.sigma.as_deref(), &doc.labels)?),
        };
        let index = index_points(&doc.points).map_err(StateError::DuplicatePoint)?;
        let edges = resolve_edges(&index, &doc.order).map_err(StateError::UnknownPoint)?;
        let order = Poset::from_edges(doc.points.len(), &edges)
            .map_err(|x| StateError::Cycle(doc.points[x].clone()))?;
        for name in doc.labels.keys() {
            if !index.contains_key(name) {
                return Err(StateError::UnknownPoint(name.clone()));
            }
        }
        let labels = doc
            .points
            .iter()
            .map(|p| {
                let texts = doc
                    .labels
                    .get(p)
                    .ok_or_else(|| StateError::MissingLabel(p.clone()))?;
                SigmaType::parse_label(&sigma, texts).map_err(|source| StateError::Label {
                    point: p.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let root = *index
            .get(&doc.root)
            .ok_or_else(|| StateError::UnknownPoint(doc.root.clone()))?;
        State::new(sigma, doc.points.clone(), order, labels, root)
    }

    pub fn to_doc(&self) -> StateDoc {
        StateDoc {
            points: self.names.clone(),
            order: self
                .order
                .cover_edges()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            root: self.names[self.root].clone(),
            labels: (0..self.len())
                .map(|x| (self.names[x].clone(), self.labels[x].printed(&self.sigma)))
                .collect(),
            sigma: Some(self.sigma.cores().iter().map(|f| f.to_string()).collect()),
        }
    }

    pub fn sigma(&self) -> &Arc<Closure> {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn labels(&self) -> &[SigmaType] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &SigmaType {
        &self.labels[x]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// `ℓ(𝔴)`, the root label.
    pub fn root_label(&self) -> &SigmaType {
        &self.labels[self.root]
    }

    pub fn same_sigma(&self, other: &State) -> bool {
        Arc::ptr_eq(&self.sigma, &other.sigma) || *self.sigma == *other.sigma
    }

    pub fn norm(&self) -> Norm {
        let hgt = self.order.height();
        let wdt = (0..self.len())
            .map(|x| self.order.covers(x).len())
            .max()
            .unwrap_or(0);
        Norm {
            hgt,
            wdt,
            norm: hgt.max(wdt),
        }
    }

    /// The generated substructure `↓x` rooted at `x`.
    pub fn substate_at(&self, x: usize) -> State {
        let keep: Vec<usize> = self.order.down_closure(x).ones().collect();
        let root = keep.iter().position(|&y| y == x).expect("x is in its own downset");
        State {
            sigma: self.sigma.clone(),
            names: keep.iter().map(|&y| self.names[y].clone()).collect(),
            order: self.order.restrict(&keep),
            labels: keep.iter().map(|&y| self.labels[y].clone()).collect(),
            root,
        }
    }

    /// Restriction to a downward-closed set containing the root.
    pub(crate) fn restrict_to(&self, keep: &[usize]) -> State {
        let root = keep.iter().position(|&y| y == self.root).expect("root is kept");
        State {
            sigma: self.sigma.clone(),
            names: keep.iter().map(|&y| self.names[y].clone()).collect(),
            order: self.order.restrict(keep),
            labels: keep.iter().map(|&y| self.labels[y].clone()).collect(),
            root,
        }
    }

    /// One substate per non-root point, in point order.
    pub fn substates(&self) -> Vec<State> {
        (0..self.len())
            .filter(|&x| x != self.root)
            .map(|x| self.substate_at(x))
            .collect()
    }

    /// Whether every non-root point has exactly one cover above it.
    pub fn is_tree(&self) -> bool {
        (0..self.len()).all(|x| {
            let parents = (0..self.len()).filter(|&y| self.order.covers(y).contains(&x)).count();
            if x == self.root {
                parents == 0
            } else {
                parents == 1
            }
        })
    }

    /// Path unravelling of `↓root` along covers.
    pub fn unfold(&self) -> State {
        let mut names = Vec::new();
        let mut labels = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut copies: HashMap<usize, usize> = HashMap::new();
        let mut stack = vec![(self.root, None)];
        while let Some((x, par)) = stack.pop() {
            let k = copies.entry(x).or_insert(0);
            names.push(if *k == 0 {
                self.names[x].clone()
            } else {
                format!("{}#{}", self.names[x], k)
            });
            *k += 1;
            labels.push(self.labels[x].clone());
            parent.push(par);
            let me = names.len() - 1;
            let mut cov = self.order.covers(x);
            cov.reverse();
            for c in cov {
                stack.push((c, Some(me)));
            }
        }
        let edges: Vec<(usize, usize)> = parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
            .collect();
        let order = Poset::from_edges(names.len(), &edges).expect("a tree has no cycles");
        State {
            sigma: self.sigma.clone(),
            names,
            order,
            labels,
            root: 0,
        }
    }

    /// Isomorphism-invariant key of the unfolded tree.
    pub fn canonical_key(&self) -> StateKey {
        let mut memo: HashMap<usize, String> = HashMap::new();
        for x in self.order.linear_extension() {
            let mut kids: Vec<&String> = self.order.covers(x).iter().map(|c| &memo[c]).collect();
            kids.sort();
            let mut key = String::from("(");
            for block in self.labels[x].bits().as_slice() {
                key.push_str(&format!("{block:x}."));
            }
            for k in kids {
                key.push_str(k);
            }
            key.push(')');
            memo.insert(x, key);
        }
        StateKey(memo.remove(&self.root).expect("root has a key"))
    }

    /// Membership in `U_Σ^K`: `‖w‖ ≤ (K+1)·|Σ|` with `|Σ|` the full closure size.
    pub fn in_universal(&self, k: usize) -> bool {
        self.norm().norm <= (k + 1) * self.sigma.len()
    }

    /// Positive `◊` cores occurring anywhere in the state.
    pub fn dia_formulas_present(&self) -> usize {
        self.sigma
            .dia_cores()
            .filter(|&(c, _)| self.labels.iter().any(|l| l.core(c)))
            .count()
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let doc = self.to_doc();
        f.debug_struct("State")
            .field("root", &doc.root)
            .field("order", &doc.order)
            .field("labels", &doc.labels)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Norm {
    pub hgt: usize,
    pub wdt: usize,
    pub norm: usize,
}

/// The Σ-state of a model point: carrier `↓x`, labels read off the truth sets.
pub fn state_of_point(m: &PosetModel, x: usize, sigma: Arc<Closure>) -> State {
    let mut ev = Evaluator::new(m);
    let truth: Vec<FixedBitSet> = sigma.cores().iter().map(|c| ev.eval(c).clone()).collect();
    let keep: Vec<usize> = m.order().down_closure(x).ones().collect();
    let labels = keep
        .iter()
        .map(|&y| {
            let mut bits = FixedBitSet::with_capacity(sigma.core_count());
            for (c, t) in truth.iter().enumerate() {
                bits.set(c, t.contains(y));
            }
            SigmaType::from_bits(bits)
        })
        .collect();
    let root = keep.iter().position(|&y| y == x).expect("x is in its own downset");
    State {
        names: keep.iter().map(|&y| m.names()[y].clone()).collect(),
        order: m.order().restrict(&keep),
        labels,
        root,
        sigma,
    }
}

/// Whether the label at every point is a type and `◊` literals are coherent.
pub fn is_valid_state(w: &State) -> bool {
    State::new(
        w.sigma.clone(),
        w.names.clone(),
        w.order.clone(),
        w.labels.clone(),
        w.root,
    )
    .is_ok()
}
