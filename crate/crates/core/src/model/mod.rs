//! Finite dynamic poset models: a strict poset, a monotone self-map and a
//! valuation. The downset topology makes `◊` the strict-predecessor modality.

mod axioms;
mod random;

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::doc::ModelDoc;
use crate::formula::{Formula, FormulaKind};
use crate::order::Poset;

pub use axioms::{axiom_instance, fuzz_axioms, AxiomError, FuzzFailure, FuzzReport, Rule, Scheme};
pub use random::{random_formula, random_formula_with, random_model, random_model_with};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no points")]
    Empty,
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("order has a cycle through `{0}`")]
    Cycle(String),
    #[error("f is not defined at `{0}`")]
    NotTotal(String),
    #[error("f is not monotone: {below} ≺ {above} but f({below}) = {fb} is not below or equal to f({above}) = {fa}")]
    NotMonotone {
        below: String,
        above: String,
        fb: String,
        fa: String,
    },
    #[error("valuation for atom `{atom}` references unknown point `{point}`")]
    UnknownValuationPoint { atom: String, point: String },
    #[error("`{0}` is not a valid atom name")]
    BadAtom(String),
}

/// A validated finite dynamic poset model.
#[derive(Clone, Debug)]
pub struct PosetModel {
    names: Vec<String>,
    index: HashMap<String, usize>,
    order: Poset,
    f: Vec<usize>,
    val: BTreeMap<String, FixedBitSet>,
}

/// `⟦φ⟧` for one formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthSet {
    pub formula: Formula,
    pub set: FixedBitSet,
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn index_points(names: &[String]) -> Result<HashMap<String, usize>, String> {
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(n.clone());
        }
    }
    Ok(index)
}

pub(crate) fn resolve_edges(
    index: &HashMap<String, usize>,
    edges: &[(String, String)],
) -> Result<Vec<(usize, usize)>, String> {
    edges
        .iter()
        .map(|(a, b)| {
            let ia = *index.get(a).ok_or_else(|| a.clone())?;
            let ib = *index.get(b).ok_or_else(|| b.clone())?;
            Ok((ia, ib))
        })
        .collect()
}

impl PosetModel {
    /// Builds a model from raw parts; `edges` are closed transitively first.
    pub fn new(
        names: Vec<String>,
        edges: &[(usize, usize)],
        f: Vec<usize>,
        val: BTreeMap<String, FixedBitSet>,
    ) -> Result<PosetModel, ModelError> {
        if names.is_empty() {
            return Err(ModelError::Empty);
        }
        let index = index_points(&names).map_err(ModelError::DuplicatePoint)?;
        let n = names.len();
        let order = Poset::from_edges(n, edges).map_err(|x| ModelError::Cycle(names[x].clone()))?;
        if f.len() != n {
            return Err(ModelError::NotTotal(names[f.len().min(n - 1)].clone()));
        }
        for (x, &fx) in f.iter().enumerate() {
            if fx >= n {
                return Err(ModelError::NotTotal(names[x].clone()));
            }
        }
        for a in 0..n {
            for b in order.below(a).ones() {
                if !order.le(f[b], f[a]) {
                    return Err(ModelError::NotMonotone {
                        below: names[b].clone(),
                        above: names[a].clone(),
                        fb: names[f[b]].clone(),
                        fa: names[f[a]].clone(),
                    });
                }
            }
        }
        let mut fixed = BTreeMap::new();
        for (atom, mut set) in val {
            if !is_atom_name(&atom) {
                return Err(ModelError::BadAtom(atom));
            }
            if let Some(bad) = set.ones().find(|&x| x >= n) {
                return Err(ModelError::UnknownValuationPoint {
                    atom,
                    point: bad.to_string(),
                });
            }
            set.grow(n);
            fixed.insert(atom, set);
        }
        Ok(PosetModel {
            names,
            index,
            order,
            f,
            val: fixed,
        })
    }

    /// `validate_model`: checks a parsed model document.
    pub fn from_doc(doc: &ModelDoc) -> Result<PosetModel, ModelError> {
        let index = index_points(&doc.points).map_err(ModelError::DuplicatePoint)?;
        let edges = resolve_edges(&index, &doc.order).map_err(ModelError::UnknownPoint)?;
        let mut f = vec![usize::MAX; doc.points.len()];
        for (x, y) in &doc.f {
            let ix = *index.get(x).ok_or_else(|| ModelError::UnknownPoint(x.clone()))?;
            let iy = *index.get(y).ok_or_else(|| ModelError::UnknownPoint(y.clone()))?;
            f[ix] = iy;
        }
        if let Some(x) = f.iter().position(|&y| y == usize::MAX) {
            return Err(ModelError::NotTotal(doc.points[x].clone()));
        }
        let mut val = BTreeMap::new();
        for (atom, pts) in &doc.val {
            let mut set = FixedBitSet::with_capacity(doc.points.len());
            for p in pts {
                let i = *index.get(p).ok_or_else(|| ModelError::UnknownValuationPoint {
                    atom: atom.clone(),
                    point: p.clone(),
                })?;
                set.insert(i);
            }
            val.insert(atom.clone(), set);
        }
        PosetModel::new(doc.points.clone(), &edges, f, val)
    }

    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            points: self.names.clone(),
            order: self
                .order
                .cover_edges()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            f: (0..self.len())
                .map(|x| (self.names[x].clone(), self.names[self.f[x]].clone()))
                .collect(),
            val: self
                .val
                .iter()
                .map(|(a, s)| (a.clone(), s.ones().map(|x| self.names[x].clone()).collect()))
                .collect(),
        }
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

    pub fn point(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn map(&self) -> &[usize] {
        &self.f
    }

    pub fn valuation(&self, atom: &str) -> Option<&FixedBitSet> {
        self.val.get(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.val.keys().map(|s| s.as_str())
    }

    pub fn eval(&self, f: &Formula) -> TruthSet {
        let mut ev = Evaluator::new(self);
        TruthSet {
            formula: f.clone(),
            set: ev.eval(f).clone(),
        }
    }

    pub fn is_valid(&self, f: &Formula) -> bool {
        Evaluator::new(self).eval(f).count_ones(..) == self.len()
    }

    pub fn satisfies(&self, x: usize, f: &Formula) -> bool {
        Evaluator::new(self).eval(f).contains(x)
    }
}

/// Memoizing evaluator; reuse it when checking many formulas on one model.
pub struct Evaluator<'m> {
    model: &'m PosetModel,
    memo: HashMap<u32, FixedBitSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m PosetModel) -> Self {
        Evaluator {
            model,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, f: &Formula) -> &FixedBitSet {
        if !self.memo.contains_key(&f.id()) {
            for sub in f.subformulas() {
                if self.memo.contains_key(&sub.id()) {
                    continue;
                }
                let set = self.step(&sub);
                self.memo.insert(sub.id(), set);
            }
        }
        &self.memo[&f.id()]
    }

    fn step(&self, f: &Formula) -> FixedBitSet {
        let m = self.model;
        let n = m.len();
        let get = |g: &Formula| &self.memo[&g.id()];
        match f.kind() {
            FormulaKind::Atom(name) => m
                .val
                .get(name.as_ref())
                .cloned()
                .unwrap_or_else(|| FixedBitSet::with_capacity(n)),
            FormulaKind::Neg(a) => {
                let mut s = get(a).clone();
                s.toggle_range(..);
                s
            }
            FormulaKind::And(a, b) => {
                let mut s = get(a).clone();
                s.intersect_with(get(b));
                s
            }
            FormulaKind::Dia(a) => {
                let inner = get(a);
                let mut s = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    if !m.order.below(x).is_disjoint(inner) {
                        s.insert(x);
                    }
                }
                s
            }
            FormulaKind::Next(a) => {
                let inner = get(a);
                let mut s = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    if inner.contains(m.f[x]) {
                        s.insert(x);
                    }
                }
                s
            }
            FormulaKind::Evt(a) => {
                let mut s = get(a).clone();
                loop {
                    let mut changed = false;
                    for x in 0..n {
                        if !s.contains(x) && s.contains(m.f[x]) {
                            s.insert(x);
                            changed = true;
                        }
                    }
                    if !changed {
                        break s;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn doc(text: &str) -> ModelDoc {
        serde_json::from_str(text).unwrap()
    }

    fn two_chain() -> PosetModel {
        PosetModel::from_doc(&doc(
            r#"{"points":["a","b"],"order":[["a","b"]],"f":{"a":"a","b":"b"},"val":{"p":["a"]}}"#,
        ))
        .unwrap()
    }

    #[test]
    fn validates_two_chain() {
        let m = two_chain();
        assert!(m.order().lt(0, 1));
    }

    #[test]
    fn rejects_cycle_and_non_monotone() {
        let cyc = doc(r#"{"points":["a","b"],"order":[["a","b"],["b","a"]],"f":{"a":"a","b":"b"}}"#);
        assert!(matches!(PosetModel::from_doc(&cyc), Err(ModelError::Cycle(_))));
        let swap = doc(r#"{"points":["a","b"],"order":[["a","b"]],"f":{"a":"b","b":"a"}}"#);
        assert!(matches!(
            PosetModel::from_doc(&swap),
            Err(ModelError::NotMonotone { .. })
        ));
        let partial = doc(r#"{"points":["a","b"],"f":{"a":"a"}}"#);
        assert!(matches!(PosetModel::from_doc(&partial), Err(ModelError::NotTotal(_))));
        let stray = doc(r#"{"points":["a"],"f":{"a":"a"},"val":{"p":["z"]}}"#);
        assert!(matches!(
            PosetModel::from_doc(&stray),
            Err(ModelError::UnknownValuationPoint { .. })
        ));
    }

    #[test]
    fn derivative_on_chain() {
        let m = two_chain();
        let s = m.eval(&parse("<>p").unwrap()).set;
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![1]);
        assert!(!m.is_valid(&parse("<>p").unwrap()));
        assert!(m.is_valid(&parse("p | ~p").unwrap()));
    }

    #[test]
    fn eventually_on_two_cycle() {
        let m = PosetModel::from_doc(&doc(
            r#"{"points":["a","b"],"f":{"a":"b","b":"a"},"val":{"p":["b"]}}"#,
        ))
        .unwrap();
        assert_eq!(m.eval(&parse("F p").unwrap()).set.count_ones(..), 2);
        assert_eq!(m.eval(&parse("O p").unwrap()).set.ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn missing_atoms_are_empty() {
        let m = two_chain();
        assert_eq!(m.eval(&parse("q").unwrap()).set.count_ones(..), 0);
    }

    #[test]
    fn doc_round_trip() {
        let m = two_chain();
        let again = PosetModel::from_doc(&m.to_doc()).unwrap();
        assert_eq!(again.to_doc(), m.to_doc());
    }
}
