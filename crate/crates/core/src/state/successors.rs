//! Successor generation and norm-reducing shrinking.
//!
//! A successor of `w` is built in two phases. The image phase walks the
//! unfolding of `w` top-down; each node either collapses onto the image of
//! its parent (when sensible) or becomes a fresh child of it with a type
//! sensible from its own label. The witness phase then discharges every
//! unwitnessed `◊ψ` with a new daughter carrying `ψ ∧ ¬◊ψ`, repeating until
//! the draft is a state. Every node inherits the `¬◊χ` commitments of its
//! ancestors as `¬χ ∧ ¬◊χ`, which bounds the witness depth by the number of
//! `◊` cores.

use std::collections::HashSet;
use std::sync::Arc;

use crate::formula::{Closure, Formula, Literal};
use crate::order::Poset;

use super::relations::{simulates_unchecked, step_unchecked};
use super::{sensible_pair, SigmaType, State, StateKey, TypeError, TypeTable, DEFAULT_TYPE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateLimits {
    pub max_norm: usize,
    /// Cap on completed drafts, counted before the norm filter.
    pub max_candidates: usize,
}

impl Default for CandidateLimits {
    fn default() -> Self {
        CandidateLimits {
            max_norm: 4,
            max_candidates: 2048,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Candidates {
    pub states: Vec<State>,
    /// The draft cap was hit; more candidates exist.
    pub truncated: bool,
    /// Some drafts were dropped for exceeding the norm bound.
    pub norm_pruned: bool,
}

/// Candidate generator over one closure, with its type table cached.
pub struct Generator {
    sigma: Arc<Closure>,
    table: TypeTable,
    dia: Vec<(usize, Literal)>,
}

#[derive(Clone, Default)]
struct Draft {
    ty: Vec<usize>,
    parent: Vec<Option<usize>>,
}

impl Draft {
    fn push(&mut self, ty: usize, parent: Option<usize>) -> usize {
        self.ty.push(ty);
        self.parent.push(parent);
        self.ty.len() - 1
    }

    fn pop(&mut self) {
        self.ty.pop();
        self.parent.pop();
    }

    fn is_ancestor(&self, anc: usize, mut x: usize) -> bool {
        while let Some(p) = self.parent[x] {
            if p == anc {
                return true;
            }
            x = p;
        }
        false
    }
}

struct Run<'a> {
    gen: &'a Generator,
    limits: CandidateLimits,
    drafts: usize,
    out: Candidates,
    seen: HashSet<StateKey>,
    source: Option<&'a State>,
}

impl Generator {
    pub fn new(sigma: Arc<Closure>) -> Result<Generator, TypeError> {
        let table = TypeTable::new(&sigma, DEFAULT_TYPE_LIMIT)?;
        let dia = sigma.dia_cores().collect();
        Ok(Generator { sigma, table, dia })
    }

    pub fn sigma(&self) -> &Arc<Closure> {
        &self.sigma
    }

    pub fn types(&self) -> &TypeTable {
        &self.table
    }

    /// Whether type `t` may sit below node `at` of the draft (or at the root).
    fn allowed_below(&self, draft: &Draft, at: Option<usize>, t: &SigmaType) -> bool {
        let mut cur = at;
        while let Some(n) = cur {
            let above = &self.table.types[draft.ty[n]];
            for &(c, lit) in &self.dia {
                if !above.core(c) && (t.has(lit) || t.core(c)) {
                    return false;
                }
            }
            cur = draft.parent[n];
        }
        true
    }

    /// Successor candidates `v` with `w ↦ v` and `‖v‖` within the limit.
    pub fn successors(&self, w: &State, limits: CandidateLimits) -> Candidates {
        let tree = w.unfold();
        let n = tree.len();
        let mut parent = vec![None; n];
        for y in 0..n {
            for c in tree.order().covers(y) {
                parent[c] = Some(y);
            }
        }
        let options: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..self.table.len())
                    .filter(|&t| sensible_pair(&self.sigma, tree.label(x), &self.table.types[t]))
                    .collect()
            })
            .collect();
        let mut run = Run {
            gen: self,
            limits,
            drafts: 0,
            out: Candidates::default(),
            seen: HashSet::new(),
            source: Some(w),
        };
        let mut draft = Draft::default();
        let mut img = vec![0usize; n];
        run.image(0, &parent, &options, &mut draft, &mut img);
        run.out
    }

    /// Saturated trees whose root type contains `goal`.
    pub fn seeds(&self, goal: &Formula, limits: CandidateLimits) -> Candidates {
        let mut run = Run {
            gen: self,
            limits,
            drafts: 0,
            out: Candidates::default(),
            seen: HashSet::new(),
            source: None,
        };
        let Some(lit) = self.sigma.literal(goal) else {
            return run.out;
        };
        for t in 0..self.table.len() {
            if !self.table.types[t].has(lit) {
                continue;
            }
            let mut draft = Draft::default();
            draft.push(t, None);
            if !run.saturate(&mut draft) {
                break;
            }
        }
        run.out
    }
}

impl Run<'_> {
    /// Returns false once the draft budget is exhausted.
    fn image(
        &mut self,
        i: usize,
        parent: &[Option<usize>],
        options: &[Vec<usize>],
        draft: &mut Draft,
        img: &mut Vec<usize>,
    ) -> bool {
        if i == parent.len() {
            return self.saturate(draft);
        }
        let types = &self.gen.table.types;
        match parent[i] {
            None => {
                for &t in &options[i] {
                    img[i] = draft.push(t, None);
                    let go_on = self.image(i + 1, parent, options, draft, img);
                    draft.pop();
                    if !go_on {
                        return false;
                    }
                }
            }
            Some(p) => {
                let target = img[p];
                if options[i].contains(&draft.ty[target]) {
                    img[i] = target;
                    if !self.image(i + 1, parent, options, draft, img) {
                        return false;
                    }
                }
                for &t in &options[i] {
                    if !self.gen.allowed_below(draft, Some(target), &types[t]) {
                        continue;
                    }
                    img[i] = draft.push(t, Some(target));
                    let go_on = self.image(i + 1, parent, options, draft, img);
                    draft.pop();
                    if !go_on {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn saturate(&mut self, draft: &mut Draft) -> bool {
        let types = &self.gen.table.types;
        let mut pending = None;
        'search: for node in 0..draft.ty.len() {
            let t = &types[draft.ty[node]];
            for &(c, lit) in &self.gen.dia {
                if !t.core(c) {
                    continue;
                }
                let witnessed = (0..draft.ty.len())
                    .any(|d| types[draft.ty[d]].has(lit) && draft.is_ancestor(node, d));
                if !witnessed {
                    pending = Some((node, c, lit));
                    break 'search;
                }
            }
        }
        let Some((node, c, lit)) = pending else {
            return self.emit(draft);
        };
        for t in 0..types.len() {
            let ty = &types[t];
            if !ty.has(lit) || ty.core(c) || !self.gen.allowed_below(draft, Some(node), ty) {
                continue;
            }
            draft.push(t, Some(node));
            let go_on = self.saturate(draft);
            draft.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    fn emit(&mut self, draft: &Draft) -> bool {
        if self.drafts >= self.limits.max_candidates {
            self.out.truncated = true;
            return false;
        }
        self.drafts += 1;
        let n = draft.ty.len();
        let edges: Vec<(usize, usize)> = (0..n)
            .filter_map(|x| draft.parent[x].map(|p| (x, p)))
            .collect();
        let order = Poset::from_edges(n, &edges).expect("drafts are trees");
        let v = State::from_parts(
            self.gen.sigma.clone(),
            (0..n).map(|x| format!("v{x}")).collect(),
            order,
            draft.ty.iter().map(|&t| self.gen.table.types[t].clone()).collect(),
            0,
        );
        if v.norm().norm > self.limits.max_norm {
            self.out.norm_pruned = true;
            return true;
        }
        if !self.seen.insert(v.canonical_key()) {
            return true;
        }
        debug_assert!(super::is_valid_state(&v), "generator produced an invalid state");
        if let Some(w) = self.source {
            if step_unchecked(w, &v).is_none() {
                return true;
            }
        }
        self.out.states.push(v);
        true
    }
}

/// Successor candidates of `w` (see [`Generator::successors`]).
pub fn successor_candidates(w: &State, limits: CandidateLimits) -> Result<Candidates, TypeError> {
    Ok(Generator::new(w.sigma().clone())?.successors(w, limits))
}

/// Unfolds `w` and deletes daughter subtrees simulated by a distinct sibling
/// until none remains. The result simulates `w` and has no larger norm.
pub fn shrink(w: &State) -> State {
    let mut cur = w.unfold();
    'again: loop {
        for x in 0..cur.len() {
            let kids = cur.order().covers(x);
            for &a in kids.iter().rev() {
                let sub_a = cur.substate_at(a);
                for &b in &kids {
                    if a != b && simulates_unchecked(&sub_a, &cur.substate_at(b)) {
                        let gone = cur.order().down_closure(a);
                        let keep: Vec<usize> = (0..cur.len()).filter(|&y| !gone.contains(y)).collect();
                        cur = cur.restrict_to(&keep);
                        continue 'again;
                    }
                }
            }
        }
        return cur;
    }
}
