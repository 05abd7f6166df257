//! Quasimodels, their validation, and lassos: ultimately periodic realising
//! paths standing for points of the limit model.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::doc::{LassoDoc, QuasimodelDoc};
use crate::formula::{closure_pm, Closure, CoreShape, Formula, Literal};
use crate::model::{index_points, random_formula_with, random_model_with, resolve_edges, Evaluator, PosetModel};
use crate::order::Poset;
use crate::state::{check_coherence, sigma_from_labels, SigmaType, StateError, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasimodelError {
    #[error("quasimodel has no points")]
    Empty,
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("order has a cycle through `{0}`")]
    Cycle(String),
    #[error("point `{0}` has no label")]
    MissingLabel(String),
    #[error("label of `{point}`: {source}")]
    Label { point: String, source: TypeError },
    #[error("bad closure formula `{0}`")]
    BadSigma(String),
    #[error("labelling: {0}")]
    Coherence(StateError),
    #[error("S-pair `{from}` -> `{to}` is not sensible: `{formula}` at `{from}`")]
    NotSensible {
        from: String,
        to: String,
        formula: String,
    },
    #[error("S is not continuous: `{below}` below `{above}`, `{above}` -> `{target}`, but `{below}` has no S-successor at or below `{target}`")]
    NotContinuous {
        below: String,
        above: String,
        target: String,
    },
    #[error("S is not serial: `{0}` has no successor")]
    NotSerial(String),
    #[error("never realised along S from `{point}`: {}", .formulas.iter().map(|f| format!("`{f}`")).collect::<Vec<_>>().join(", "))]
    NotOmegaSensible { point: String, formulas: Vec<String> },
    #[error("`{from}` -> `{to}` is not an S-pair")]
    NotAPath { from: String, to: String },
    #[error("empty path or loop")]
    EmptyPath,
    #[error("lassos are not pairwise distinct")]
    NotDistinct,
}

/// A Σ-quasimodel: labelled strict poset with a transition relation `S`.
#[derive(Clone, Debug)]
pub struct Quasimodel {
    sigma: Arc<Closure>,
    names: Vec<String>,
    order: Poset,
    labels: Vec<SigmaType>,
    succ: Vec<Vec<usize>>,
}

/// The first formula of `Φ` that the pair `(Φ, Ψ)` violates.
fn insensible_at(sigma: &Closure, phi: &SigmaType, psi: &SigmaType) -> Option<Formula> {
    for c in 0..sigma.core_count() {
        let here = Literal {
            core: c,
            positive: phi.core(c),
        };
        let bad = match sigma.shape(c) {
            CoreShape::Next(a) => psi.has(a) != phi.core(c),
            CoreShape::Evt(a) if phi.core(c) => !phi.has(a) && !psi.core(c),
            CoreShape::Evt(_) => psi.core(c),
            _ => false,
        };
        if bad {
            return Some(sigma.formula(here));
        }
    }
    None
}

impl Quasimodel {
    /// Builds and validates. `edges` are `S`-pairs.
    pub fn new(
        sigma: Arc<Closure>,
        names: Vec<String>,
        order: Poset,
        labels: Vec<SigmaType>,
        edges: &[(usize, usize)],
    ) -> Result<Quasimodel, QuasimodelError> {
        let q = Quasimodel::from_parts(sigma, names, order, labels, edges);
        q.validate()?;
        Ok(q)
    }

    pub(crate) fn from_parts(
        sigma: Arc<Closure>,
        names: Vec<String>,
        order: Poset,
        labels: Vec<SigmaType>,
        edges: &[(usize, usize)],
    ) -> Quasimodel {
        let mut succ = vec![Vec::new(); names.len()];
        for &(a, b) in edges {
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Quasimodel {
            sigma,
            names,
            order,
            labels,
            succ,
        }
    }

    pub fn from_doc(doc: &QuasimodelDoc, sigma: Option<Arc<Closure>>) -> Result<Quasimodel, QuasimodelError> {
        let sigma = match sigma {
            Some(s) => s,
            None => Arc::new(sigma_from_labels(doc.sigma.as_deref(), &doc.labels).map_err(|e| match e {
                StateError::BadSigma(s) => QuasimodelError::BadSigma(s),
                other => QuasimodelError::Coherence(other),
            })?),
        };
        let index = index_points(&doc.points).map_err(QuasimodelError::DuplicatePoint)?;
        let edges = resolve_edges(&index, &doc.order).map_err(QuasimodelError::UnknownPoint)?;
        let order = Poset::from_edges(doc.points.len(), &edges)
            .map_err(|x| QuasimodelError::Cycle(doc.points[x].clone()))?;
        let s = resolve_edges(&index, &doc.s).map_err(QuasimodelError::UnknownPoint)?;
        for name in doc.labels.keys() {
            if !index.contains_key(name) {
                return Err(QuasimodelError::UnknownPoint(name.clone()));
            }
        }
        let labels = doc
            .points
            .iter()
            .map(|p| {
                let texts = doc
                    .labels
                    .get(p)
                    .ok_or_else(|| QuasimodelError::MissingLabel(p.clone()))?;
                SigmaType::parse_label(&sigma, texts).map_err(|source| QuasimodelError::Label {
                    point: p.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Quasimodel::new(sigma, doc.points.clone(), order, labels, &s)
    }

    pub fn to_doc(&self) -> QuasimodelDoc {
        QuasimodelDoc {
            points: self.names.clone(),
            order: self
                .order
                .cover_edges()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            s: self
                .edges()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            labels: (0..self.len())
                .map(|x| (self.names[x].clone(), self.labels[x].printed(&self.sigma)))
                .collect(),
            sigma: Some(self.sigma.cores().iter().map(|f| f.to_string()).collect()),
            witness: None,
        }
    }

    /// Checks every quasimodel condition in a fixed order: labelling
    /// coherence, sensibility, continuity, seriality, ω-sensibility.
    pub fn validate(&self) -> Result<(), QuasimodelError> {
        if self.names.is_empty() {
            return Err(QuasimodelError::Empty);
        }
        index_points(&self.names).map_err(QuasimodelError::DuplicatePoint)?;
        for (x, l) in self.labels.iter().enumerate() {
            SigmaType::check(&self.sigma, l.bits()).map_err(|source| QuasimodelError::Label {
                point: self.names[x].clone(),
                source,
            })?;
        }
        check_coherence(&self.sigma, &self.names, &self.order, &self.labels)
            .map_err(QuasimodelError::Coherence)?;
        for (a, b) in self.edges() {
            if let Some(f) = insensible_at(&self.sigma, &self.labels[a], &self.labels[b]) {
                return Err(QuasimodelError::NotSensible {
                    from: self.names[a].clone(),
                    to: self.names[b].clone(),
                    formula: f.to_string(),
                });
            }
        }
        for above in 0..self.len() {
            for below in self.order.below(above).ones() {
                for &target in &self.succ[above] {
                    if !self.succ[below].iter().any(|&b| self.order.le(b, target)) {
                        return Err(QuasimodelError::NotContinuous {
                            below: self.names[below].clone(),
                            above: self.names[above].clone(),
                            target: self.names[target].clone(),
                        });
                    }
                }
            }
        }
        if let Some(x) = (0..self.len()).find(|&x| self.succ[x].is_empty()) {
            return Err(QuasimodelError::NotSerial(self.names[x].clone()));
        }
        for x in 0..self.len() {
            let missing: Vec<String> = self
                .sigma
                .evt_cores()
                .filter(|&(c, lit)| self.labels[x].core(c) && self.realise(x, lit, true).is_none())
                .map(|(c, _)| self.sigma.cores()[c].to_string())
                .collect();
            if !missing.is_empty() {
                return Err(QuasimodelError::NotOmegaSensible {
                    point: self.names[x].clone(),
                    formulas: missing,
                });
            }
        }
        Ok(())
    }

    /// Shortest `S`-path from `x` to a point carrying `lit`, excluding `x`
    /// itself and including it as the last point. With `include_start`,
    /// `x` itself counts and yields the empty path.
    fn realise(&self, x: usize, lit: Literal, include_start: bool) -> Option<Vec<usize>> {
        if include_start && self.labels[x].has(lit) {
            return Some(Vec::new());
        }
        let mut prev: Vec<Option<usize>> = vec![None; self.len()];
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut queue = VecDeque::new();
        for &y in &self.succ[x] {
            if !seen.put(y) {
                prev[y] = None;
                queue.push_back(y);
            }
        }
        while let Some(y) = queue.pop_front() {
            if self.labels[y].has(lit) {
                let mut path = vec![y];
                let mut cur = y;
                while let Some(p) = prev[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &z in &self.succ[y] {
                if !seen.put(z) {
                    prev[z] = Some(y);
                    queue.push_back(z);
                }
            }
        }
        None
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

    pub fn point(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn label(&self, x: usize) -> &SigmaType {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[SigmaType] {
        &self.labels
    }

    /// Sorted `S`-successors of `x`.
    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.succ[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Copy with `S` replaced, not validated.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Quasimodel {
        Quasimodel::from_parts(
            self.sigma.clone(),
            self.names.clone(),
            self.order.clone(),
            self.labels.clone(),
            edges,
        )
    }

    pub fn check_path(&self, path: &[usize]) -> Result<(), QuasimodelError> {
        for w in path.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(QuasimodelError::NotAPath {
                    from: self.names[w[0]].clone(),
                    to: self.names[w[1]].clone(),
                });
            }
        }
        Ok(())
    }
}

/// The quasimodel of a poset model: `S` is the graph of the map and labels
/// are the Σ-truth sets.
pub fn model_to_quasimodel(m: &PosetModel, sigma: Arc<Closure>) -> Quasimodel {
    let mut ev = Evaluator::new(m);
    let truth: Vec<FixedBitSet> = sigma.cores().iter().map(|c| ev.eval(c).clone()).collect();
    let labels = (0..m.len())
        .map(|x| {
            let mut bits = FixedBitSet::with_capacity(sigma.core_count());
            for (c, t) in truth.iter().enumerate() {
                bits.set(c, t.contains(x));
            }
            SigmaType::from_bits(bits)
        })
        .collect();
    let edges: Vec<(usize, usize)> = m.map().iter().enumerate().map(|(x, &y)| (x, y)).collect();
    Quasimodel::from_parts(sigma, m.names().to_vec(), m.order().clone(), labels, &edges)
}

/// Given an `S`-path `w` and `v0 ≼ w[0]`, a path `v` with `v[i] ≼ w[i]`.
/// Picks the least index at each step.
pub fn lower_path(q: &Quasimodel, w: &[usize], v0: usize) -> Option<Vec<usize>> {
    if w.is_empty() || !q.order.le(v0, w[0]) {
        return None;
    }
    let mut out = vec![v0];
    for &target in &w[1..] {
        let cur = *out.last().expect("nonempty");
        let next = q.succ[cur].iter().copied().find(|&b| q.order.le(b, target))?;
        out.push(next);
    }
    Some(out)
}

/// An ultimately periodic path `stem · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Lasso {
    pub fn new(stem: Vec<usize>, cycle: Vec<usize>) -> Result<Lasso, QuasimodelError> {
        if cycle.is_empty() {
            return Err(QuasimodelError::EmptyPath);
        }
        Ok(Lasso { stem, cycle })
    }

    /// The point at position `i`.
    pub fn at(&self, i: usize) -> usize {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Positions needed to see one full period after the stem.
    pub fn span(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    /// Checks that consecutive points, the junction and the wrap are `S`-pairs.
    pub fn check(&self, q: &Quasimodel) -> Result<(), QuasimodelError> {
        if self.cycle.is_empty() {
            return Err(QuasimodelError::EmptyPath);
        }
        if let Some(&x) = self.stem.iter().chain(&self.cycle).find(|&&x| x >= q.len()) {
            return Err(QuasimodelError::UnknownPoint(x.to_string()));
        }
        let path: Vec<usize> = (0..=self.span()).map(|i| self.at(i)).collect();
        q.check_path(&path)
    }

    /// The shift `σ`: drop the first position.
    pub fn shift(&self) -> Lasso {
        if self.stem.is_empty() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            Lasso {
                stem: Vec::new(),
                cycle,
            }
        } else {
            Lasso {
                stem: self.stem[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    /// Whether both denote the same infinite path.
    pub fn same_path(&self, other: &Lasso) -> bool {
        let horizon = self.stem.len().max(other.stem.len()) + lcm(self.cycle.len(), other.cycle.len());
        (0..horizon).all(|i| self.at(i) == other.at(i))
    }

    pub fn to_doc(&self, q: &Quasimodel) -> LassoDoc {
        LassoDoc {
            stem: self.stem.iter().map(|&x| q.names[x].clone()).collect(),
            cycle: self.cycle.iter().map(|&x| q.names[x].clone()).collect(),
        }
    }

    pub fn from_doc(q: &Quasimodel, doc: &LassoDoc) -> Result<Lasso, QuasimodelError> {
        let look = |n: &String| q.point(n).ok_or_else(|| QuasimodelError::UnknownPoint(n.clone()));
        let l = Lasso::new(
            doc.stem.iter().map(look).collect::<Result<_, _>>()?,
            doc.cycle.iter().map(look).collect::<Result<_, _>>()?,
        )?;
        l.check(q)?;
        Ok(l)
    }
}

/// Extends a nonempty `S`-path to a realising lasso. Pending `◆` obligations
/// form a FIFO queue; each segment walks a shortest path to the nearest point
/// realising the head, or to the least successor when nothing is pending.
/// The loop closes at the first repeated (point, queue) configuration.
pub fn extend_to_lasso(q: &Quasimodel, prefix: &[usize]) -> Result<Lasso, QuasimodelError> {
    if prefix.is_empty() {
        return Err(QuasimodelError::EmptyPath);
    }
    if let Some(&x) = prefix.iter().find(|&&x| x >= q.len()) {
        return Err(QuasimodelError::UnknownPoint(x.to_string()));
    }
    q.check_path(prefix)?;
    let evt: Vec<(usize, Literal)> = q.sigma.evt_cores().collect();
    let mut queue: VecDeque<(usize, Literal)> = VecDeque::new();
    let visit = |queue: &mut VecDeque<(usize, Literal)>, x: usize| {
        let l = &q.labels[x];
        queue.retain(|&(_, lit)| !l.has(lit));
        for &(c, lit) in &evt {
            if l.core(c) && !l.has(lit) && !queue.iter().any(|&(d, _)| d == c) {
                queue.push_back((c, lit));
            }
        }
    };
    let mut path: Vec<usize> = Vec::new();
    for &x in prefix {
        path.push(x);
        visit(&mut queue, x);
    }
    let mut configs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    loop {
        let here = *path.last().expect("nonempty");
        let key = (here, queue.iter().map(|&(c, _)| c).collect::<Vec<_>>());
        if let Some(&start) = configs.get(&key) {
            let cycle = path[start..path.len() - 1].to_vec();
            path.truncate(start);
            return Ok(Lasso { stem: path, cycle });
        }
        configs.insert(key, path.len() - 1);
        let segment = match queue.front() {
            None => match q.succ[here].first() {
                Some(&y) => vec![y],
                None => return Err(QuasimodelError::NotSerial(q.names[here].clone())),
            },
            Some(&(c, lit)) => q.realise(here, lit, false).ok_or_else(|| {
                QuasimodelError::NotOmegaSensible {
                    point: q.names[here].clone(),
                    formulas: vec![q.sigma.cores()[c].to_string()],
                }
            })?,
        };
        for y in segment {
            path.push(y);
            visit(&mut queue, y);
        }
    }
}

/// A failed coherence check along a lasso.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoViolation {
    pub position: usize,
    pub point: String,
    pub message: String,
}

impl std::fmt::Display for LassoViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "position {} (`{}`): {}", self.position, self.point, self.message)
    }
}

/// Checks that labels along `l` agree with the limit-model semantics of
/// `●`, `◆`, `■` and `◊`. `◆` is decided over the stem and two loop turns.
pub fn lasso_coherence(q: &Quasimodel, l: &Lasso) -> Result<(), LassoViolation> {
    let sigma = &q.sigma;
    let horizon = l.span() + l.cycle.len();
    let fail = |m: usize, message: String| LassoViolation {
        position: m,
        point: q.names[l.at(m)].clone(),
        message,
    };
    if let Err(e) = l.check(q) {
        return Err(fail(0, e.to_string()));
    }
    for m in 0..l.span() {
        let here = &q.labels[l.at(m)];
        let next = &q.labels[l.at(m + 1)];
        for c in 0..sigma.core_count() {
            let f = &sigma.cores()[c];
            match sigma.shape(c) {
                CoreShape::Next(a) => {
                    if here.core(c) != next.has(a) {
                        return Err(fail(m, format!("`{f}` disagrees with the next position")));
                    }
                }
                CoreShape::Evt(a) => {
                    let seen = (m..horizon).find(|&k| q.labels[l.at(k)].has(a));
                    match (here.core(c), seen) {
                        (true, None) => return Err(fail(m, format!("`{f}` is never realised"))),
                        (false, Some(k)) => {
                            return Err(fail(m, format!("`{}` but realised at position {k}", f.neg())))
                        }
                        _ => {}
                    }
                }
                CoreShape::Dia(a) => {
                    let below = q.order.below(l.at(m)).ones().find(|&y| q.labels[y].has(a));
                    match (here.core(c), below) {
                        (true, None) => return Err(fail(m, format!("`{f}` has no witness below"))),
                        (false, Some(y)) => {
                            return Err(fail(
                                m,
                                format!("`{}` but `{}` lies below", f.neg(), q.names[y]),
                            ))
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Decides `v ∈ N_m(w)`. The "forever after" clause is checked up to the
/// longer stem plus the lcm of the loop lengths.
pub fn neighbourhood_member(q: &Quasimodel, v: &Lasso, m: usize, w: &Lasso) -> bool {
    if (0..m).any(|i| !q.order.le(v.at(i), w.at(i))) {
        return false;
    }
    let horizon = v.stem.len().max(w.stem.len()).max(m) + lcm(v.cycle.len(), w.cycle.len());
    match (0..m).find(|&k| v.at(k) == w.at(k)) {
        Some(k) => (k..horizon).all(|j| v.at(j) == w.at(j)),
        None => true,
    }
}

/// A member of `a` isolated by its `N_1` neighbourhood: its first point is
/// `≺`-minimal among all first points. Ties go to the shortest lasso, then
/// to the least point sequence, then to the least index in `a`.
/// Returns the index into `a` and `m = 1`.
pub fn scattered_witness(q: &Quasimodel, a: &[Lasso]) -> Result<(usize, usize), QuasimodelError> {
    if a.is_empty() {
        return Err(QuasimodelError::EmptyPath);
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i].same_path(&a[j]) {
                return Err(QuasimodelError::NotDistinct);
            }
        }
    }
    let pick = (0..a.len())
        .filter(|&i| !a.iter().any(|o| q.order.lt(o.at(0), a[i].at(0))))
        .min_by_key(|&i| {
            let seq: Vec<usize> = (0..a[i].span()).map(|k| a[i].at(k)).collect();
            (a[i].span(), seq, i)
        })
        .expect("a finite poset has minimal elements");
    Ok((pick, 1))
}

/// A random valid quasimodel: the quasimodel of a random poset model over the
/// closure of a random formula, with random extra `S`-pairs kept when the
/// result still validates.
pub fn random_quasimodel(seed: u64, max_points: usize, depth: usize, atoms: &[&str]) -> Quasimodel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_quasimodel_with(&mut rng, max_points, depth, atoms)
}

pub fn random_quasimodel_with<R: Rng>(
    rng: &mut R,
    max_points: usize,
    depth: usize,
    atoms: &[&str],
) -> Quasimodel {
    let m = random_model_with(rng, max_points, atoms);
    let f = random_formula_with(rng, depth, atoms);
    let mut q = model_to_quasimodel(&m, Arc::new(closure_pm(&f)));
    let n = q.len();
    let mut extra: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !q.has_edge(a, b))
        .collect();
    extra.shuffle(rng);
    extra.truncate(n);
    for e in extra {
        let mut edges = q.edges();
        edges.push(e);
        let cand = q.with_edges(&edges);
        if cand.validate().is_ok() {
            q = cand;
        }
    }
    q
}

/// A random walk of at most `len` points from a random start, extended to a lasso.
pub fn random_lasso<R: Rng>(rng: &mut R, q: &Quasimodel, len: usize) -> Lasso {
    let mut path = vec![rng.gen_range(0..q.len())];
    for _ in 1..len.max(1) {
        let succ = q.successors(*path.last().expect("nonempty"));
        path.push(succ[rng.gen_range(0..succ.len())]);
    }
    extend_to_lasso(q, &path).expect("valid quasimodels are unwindable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    const GOLDEN: &str = include_str!("../fixtures/golden_quasimodel.json");

    fn golden() -> Quasimodel {
        Quasimodel::from_doc(&serde_json::from_str(GOLDEN).unwrap(), None).unwrap()
    }

    fn idx(q: &Quasimodel, n: &str) -> usize {
        q.point(n).unwrap()
    }

    #[test]
    fn golden_accepted_and_edge_removal_rejected() {
        let q = golden();
        assert_eq!(q.len(), 3);
        let mut doc: QuasimodelDoc = serde_json::from_str(GOLDEN).unwrap();
        doc.s.retain(|(a, b)| !(a == "v" && b == "w"));
        let err = Quasimodel::from_doc(&doc, None).unwrap_err();
        match err {
            QuasimodelError::NotOmegaSensible { point, formulas } => {
                assert_eq!(point, "v");
                assert!(formulas.iter().any(|f| f == "F ~p"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn single_point_self_loop() {
        let doc: QuasimodelDoc =
            serde_json::from_str(r#"{"points":["a"],"S":[["a","a"]],"labels":{"a":["p"]}}"#).unwrap();
        let q = Quasimodel::from_doc(&doc, None).unwrap();
        let l = extend_to_lasso(&q, &[0]).unwrap();
        assert_eq!(l, Lasso::new(vec![], vec![0]).unwrap());
    }

    #[test]
    fn golden_lassos() {
        let q = golden();
        let (u, v, w) = (idx(&q, "u"), idx(&q, "v"), idx(&q, "w"));
        let from_w = extend_to_lasso(&q, &[w]).unwrap();
        assert_eq!(from_w, Lasso::new(vec![], vec![w]).unwrap());
        let from_v = extend_to_lasso(&q, &[v]).unwrap();
        assert_eq!(from_v, Lasso::new(vec![v], vec![w]).unwrap());
        assert!(lasso_coherence(&q, &from_v).is_ok());
        let from_u = extend_to_lasso(&q, &[u]).unwrap();
        assert!(lasso_coherence(&q, &from_u).is_ok());
        assert!(neighbourhood_member(&q, &from_v, 1, &from_u));
        assert!(!neighbourhood_member(&q, &from_u, 1, &from_v));
        assert!(neighbourhood_member(&q, &from_u, 0, &from_v));
        let set = [from_v.clone(), from_w.clone()];
        assert_eq!(scattered_witness(&q, &set).unwrap(), (1, 1));
    }

    #[test]
    fn bad_next_is_caught() {
        let sigma = Arc::new(closure_pm(&parse("O p").unwrap()));
        let t = |s: &[&str]| {
            SigmaType::parse_label(&sigma, &s.iter().map(|x| x.to_string()).collect::<Vec<_>>()).unwrap()
        };
        let q = Quasimodel::from_parts(
            sigma.clone(),
            vec!["a".into(), "b".into()],
            Poset::discrete(2),
            vec![t(&["O p", "p"]), t(&["~p"])],
            &[(0, 1), (1, 1)],
        );
        assert!(matches!(q.validate(), Err(QuasimodelError::NotSensible { .. })));
        let l = Lasso::new(vec![0], vec![1]).unwrap();
        let err = lasso_coherence(&q, &l).unwrap_err();
        assert_eq!(err.position, 0);
    }

    #[test]
    fn shift_and_same_path() {
        let a = Lasso::new(vec![1], vec![2, 3]).unwrap();
        let b = Lasso::new(vec![1, 2], vec![3, 2]).unwrap();
        assert!(a.same_path(&b));
        assert!(a.shift().same_path(&Lasso::new(vec![], vec![2, 3]).unwrap()));
        assert!(a.shift().shift().same_path(&Lasso::new(vec![], vec![3, 2]).unwrap()));
    }

    #[test]
    fn lower_path_follows_continuity() {
        let q = golden();
        let (u, v) = (idx(&q, "u"), idx(&q, "v"));
        assert_eq!(lower_path(&q, &[u, u, u], v), Some(vec![v, v, v]));
        assert_eq!(lower_path(&q, &[v], u), None);
    }

    #[test]
    fn model_quasimodels_validate() {
        for seed in 0..40 {
            let q = random_quasimodel(seed, 4, 3, &["p", "q"]);
            assert!(q.validate().is_ok(), "seed {seed}");
        }
    }
}
