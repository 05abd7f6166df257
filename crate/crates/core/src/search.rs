//! Efficient paths, `ρ`, and bounded satisfiability search with quasimodel
//! certificates.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::formula::{closure_pm, Formula, Literal};
use crate::order::Poset;
use crate::quasimodel::Quasimodel;
use crate::state::{simulates_unchecked, step_unchecked};
use crate::state::{shrink, CandidateLimits, Generator, State, StateKey, TypeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_norm: usize,
    pub max_states: usize,
    /// Longest path, counted in states.
    pub max_path: usize,
    /// Recorded for reproducibility; the search itself is deterministic.
    pub seed: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_norm: 4,
            max_states: 256,
            max_path: 16,
            seed: 0,
        }
    }
}

impl SearchBounds {
    fn limits(&self) -> CandidateLimits {
        CandidateLimits {
            max_norm: self.max_norm,
            ..CandidateLimits::default()
        }
    }
}

/// Efficient paths from one state, as index sequences into `states`.
#[derive(Debug, Clone, Default)]
pub struct EfficientPaths {
    pub states: Vec<State>,
    pub paths: Vec<Vec<usize>>,
    pub truncated: bool,
}

struct PathRun<F> {
    succ: F,
    states: Vec<State>,
    keys: HashMap<StateKey, usize>,
    next: Vec<Option<Vec<usize>>>,
    sim: HashMap<(usize, usize), bool>,
    out: Vec<Vec<usize>>,
    truncated: bool,
    bounds: SearchBounds,
}

impl<F: FnMut(&State) -> Vec<State>> PathRun<F> {
    fn intern(&mut self, s: State) -> usize {
        let key = s.canonical_key();
        if let Some(&i) = self.keys.get(&key) {
            return i;
        }
        self.keys.insert(key, self.states.len());
        self.states.push(s);
        self.next.push(None);
        self.states.len() - 1
    }

    fn successors(&mut self, i: usize) -> Vec<usize> {
        if let Some(n) = &self.next[i] {
            return n.clone();
        }
        let raw = (self.succ)(&self.states[i]);
        let mut n = Vec::new();
        for s in raw {
            let j = self.intern(s);
            if !n.contains(&j) {
                n.push(j);
            }
        }
        self.next[i] = Some(n.clone());
        n
    }

    fn simulates(&mut self, a: usize, b: usize) -> bool {
        if let Some(&r) = self.sim.get(&(a, b)) {
            return r;
        }
        let r = a == b || simulates_unchecked(&self.states[a], &self.states[b]);
        self.sim.insert((a, b), r);
        r
    }

    fn dfs(&mut self, path: &mut Vec<usize>) -> bool {
        if self.out.len() >= self.bounds.max_states {
            self.truncated = true;
            return false;
        }
        self.out.push(path.clone());
        let last = *path.last().expect("nonempty");
        for u in self.successors(last) {
            let blocked = path.clone().into_iter().any(|p| self.simulates(p, u));
            if blocked {
                continue;
            }
            if path.len() >= self.bounds.max_path {
                self.truncated = true;
                continue;
            }
            path.push(u);
            let go_on = self.dfs(path);
            path.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Every path from `start` along `succ` in which no earlier state simulates
/// a later one, depth first. At most `max_states` paths of at most
/// `max_path` states are listed; hitting either cap sets `truncated`.
pub fn efficient_paths<F>(start: &State, bounds: &SearchBounds, succ: F) -> EfficientPaths
where
    F: FnMut(&State) -> Vec<State>,
{
    let mut run = PathRun {
        succ,
        states: Vec::new(),
        keys: HashMap::new(),
        next: Vec::new(),
        sim: HashMap::new(),
        out: Vec::new(),
        truncated: false,
        bounds: *bounds,
    };
    let s = run.intern(start.clone());
    run.dfs(&mut vec![s]);
    EfficientPaths {
        states: run.states,
        paths: run.out,
        truncated: run.truncated,
    }
}

/// States efficiently reachable from `w`, `w` first.
#[derive(Debug, Clone)]
pub struct Rho {
    pub states: Vec<State>,
    pub truncated: bool,
}

pub fn rho<F>(w: &State, bounds: &SearchBounds, succ: F) -> Rho
where
    F: FnMut(&State) -> Vec<State>,
{
    let ep = efficient_paths(w, bounds, succ);
    let mut seen = HashSet::new();
    let mut states = Vec::new();
    for p in &ep.paths {
        let last = *p.last().expect("nonempty");
        if seen.insert(last) {
            states.push(ep.states[last].clone());
        }
    }
    Rho {
        states,
        truncated: ep.truncated,
    }
}

/// Successors from the candidate generator, shrunk where the shrunk state is
/// still a successor.
pub fn generator_source(gen: &Generator, max_norm: usize) -> impl FnMut(&State) -> Vec<State> + '_ {
    let limits = CandidateLimits {
        max_norm,
        ..CandidateLimits::default()
    };
    move |w| expand(gen, w, limits).0
}

fn expand(gen: &Generator, w: &State, limits: CandidateLimits) -> (Vec<State>, bool, bool) {
    let cands = gen.successors(w, limits);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in cands.states {
        let small = shrink(&c);
        let v = if step_unchecked(w, &small).is_some() { small } else { c };
        if seen.insert(v.canonical_key()) {
            out.push(v);
        }
    }
    (out, cands.truncated, cands.norm_pruned)
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Sat { certificate: Quasimodel, witness: usize },
    NoWithinBounds { exhausted: bool },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub states: usize,
    pub edges: usize,
    pub levels: usize,
    pub good: usize,
    /// Some candidates exceeded the norm bound.
    pub norm_pruned: bool,
    pub state_cap: bool,
    pub depth_cap: bool,
    pub draft_cap: bool,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
    pub seed: u64,
}

impl SearchOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat { .. })
    }

    pub fn exhausted(&self) -> bool {
        matches!(self.verdict, Verdict::NoWithinBounds { exhausted: true })
    }
}

struct Space<'g> {
    gen: &'g Generator,
    states: Vec<State>,
    keys: HashMap<StateKey, usize>,
    /// Indices of all proper substates.
    subs: Vec<Vec<usize>>,
    depth: Vec<usize>,
    step: Vec<FixedBitSet>,
    steps_done: usize,
}

impl Space<'_> {
    fn index(&self, s: &State) -> Option<usize> {
        self.keys.get(&s.canonical_key()).copied()
    }

    fn add(&mut self, s: State, depth: usize) -> usize {
        let key = s.canonical_key();
        if let Some(&i) = self.keys.get(&key) {
            return i;
        }
        let i = self.states.len();
        self.keys.insert(key, i);
        self.states.push(s.clone());
        self.subs.push(Vec::new());
        self.depth.push(depth);
        let mut subs: Vec<usize> = (0..s.len())
            .filter(|&x| x != s.root())
            .map(|x| self.add(s.substate_at(x), depth))
            .collect();
        subs.sort_unstable();
        subs.dedup();
        self.subs[i] = subs;
        i
    }

    fn update_steps(&mut self) {
        let n = self.states.len();
        let done = self.steps_done;
        let states = &self.states;
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let from = if i >= done { 0 } else { done };
                (from..n)
                    .filter(|&j| step_unchecked(&states[i], &states[j]).is_some())
                    .collect()
            })
            .collect();
        self.step.resize_with(n, FixedBitSet::new);
        for (i, row) in rows.into_iter().enumerate() {
            self.step[i].grow(n);
            for j in row {
                self.step[i].insert(j);
            }
        }
        self.steps_done = n;
    }

    fn obligations(&self, i: usize) -> Vec<Literal> {
        let l = self.states[i].root_label();
        self.gen
            .sigma()
            .evt_cores()
            .filter(|&(c, lit)| l.core(c) && !l.has(lit))
            .map(|(_, lit)| lit)
            .collect()
    }

    /// Shortest `↦`-path inside `alive` from `i` (exclusive) to a state whose
    /// root carries `lit`.
    fn realise(&self, i: usize, lit: Literal, alive: &FixedBitSet) -> Option<Vec<usize>> {
        let n = self.states.len();
        let mut prev: Vec<Option<usize>> = vec![None; n];
        let mut seen = FixedBitSet::with_capacity(n);
        let mut queue = VecDeque::new();
        for j in self.step[i].ones().filter(|&j| alive.contains(j)) {
            seen.insert(j);
            queue.push_back(j);
        }
        while let Some(j) = queue.pop_front() {
            if self.states[j].root_label().has(lit) {
                let mut path = vec![j];
                let mut cur = j;
                while let Some(p) = prev[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for k in self.step[j].ones().filter(|&k| alive.contains(k)) {
                if !seen.put(k) {
                    prev[k] = Some(j);
                    queue.push_back(k);
                }
            }
        }
        None
    }

    /// Greatest set of states with a successor, all substates, and every
    /// `◆` obligation realised, all inside the set.
    fn good(&self) -> FixedBitSet {
        let n = self.states.len();
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        loop {
            let doomed: Vec<usize> = alive
                .ones()
                .filter(|&i| {
                    self.step[i].is_disjoint(&alive)
                        || self.subs[i].iter().any(|&s| !alive.contains(s))
                        || self
                            .obligations(i)
                            .into_iter()
                            .any(|lit| self.realise(i, lit, &alive).is_none())
                })
                .collect();
            if doomed.is_empty() {
                return alive;
            }
            for i in doomed {
                alive.set(i, false);
            }
        }
    }

    /// A small quasimodel inside `good` containing `seed`, or `None` if the
    /// assembled structure fails validation.
    fn certificate(&self, seed: usize, good: &FixedBitSet) -> Option<(Quasimodel, usize)> {
        let mut points: Vec<usize> = Vec::new();
        let mut in_p = HashSet::new();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut queue = VecDeque::new();
        fn include(
            x: usize,
            subs: &[Vec<usize>],
            points: &mut Vec<usize>,
            in_p: &mut HashSet<usize>,
            queue: &mut VecDeque<usize>,
        ) {
            if in_p.insert(x) {
                points.push(x);
                queue.push_back(x);
                for &s in &subs[x] {
                    include(s, subs, points, in_p, queue);
                }
            }
        }
        include(seed, &self.subs, &mut points, &mut in_p, &mut queue);
        loop {
            while let Some(x) = queue.pop_front() {
                for lit in self.obligations(x) {
                    let path = self.realise(x, lit, good)?;
                    let mut cur = x;
                    for y in path {
                        edges.insert((cur, y));
                        include(y, &self.subs, &mut points, &mut in_p, &mut queue);
                        cur = y;
                    }
                }
                if !edges.iter().any(|&(a, _)| a == x) {
                    let succ: Vec<usize> = self.step[x].ones().filter(|&j| good.contains(j)).collect();
                    let y = if succ.contains(&x) {
                        x
                    } else {
                        *succ.iter().find(|j| in_p.contains(j)).or(succ.first())?
                    };
                    edges.insert((x, y));
                    include(y, &self.subs, &mut points, &mut in_p, &mut queue);
                }
            }
            let mut added = Vec::new();
            for &(a2, b2) in &edges {
                let (wa, wb) = (&self.states[a2], &self.states[b2]);
                let rel = step_unchecked(wa, wb)?;
                for x in (0..wa.len()).filter(|&x| x != wa.root()) {
                    let a = self.index(&wa.substate_at(x))?;
                    let covered = edges
                        .iter()
                        .chain(&added)
                        .any(|&(s, t)| s == a && (t == b2 || self.subs[b2].contains(&t)));
                    if covered {
                        continue;
                    }
                    let y = rel[x]
                        .ones()
                        .find(|&y| wb.order().le(y, wb.root()))
                        .expect("continuity of the maximal step relation");
                    let b = if y == wb.root() {
                        b2
                    } else {
                        self.index(&wb.substate_at(y))?
                    };
                    added.push((a, b));
                }
            }
            if added.is_empty() && queue.is_empty() {
                break;
            }
            edges.extend(added);
        }
        let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let order_edges: Vec<(usize, usize)> = points
            .iter()
            .flat_map(|&x| self.subs[x].iter().map(|s| (pos[s], pos[&x])).collect::<Vec<_>>())
            .collect();
        let order = Poset::from_edges(points.len(), &order_edges).ok()?;
        let s_edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (pos[&a], pos[&b])).collect();
        let q = Quasimodel::new(
            self.gen.sigma().clone(),
            (0..points.len()).map(|k| format!("s{k}")).collect(),
            order,
            points.iter().map(|&x| self.states[x].root_label().clone()).collect(),
            &s_edges,
        )
        .ok()?;
        Some((q, pos[&seed]))
    }
}

/// Seeds tried when assembling certificates.
const CERTIFICATE_TRIES: usize = 16;

/// Bounded search for a quasimodel whose labels include `f`.
///
/// States are explored breadth first from the saturated seeds. Each
/// successor is shrunk, and dropped when an explored state that it also
/// steps to simulates it. After every level the largest regular subset is
/// recomputed; a certificate is assembled from it and validated before SAT
/// is reported. `exhausted` means no state, depth or draft cap was hit.
pub fn sat_search(f: &Formula, bounds: &SearchBounds) -> Result<SearchOutcome, TypeError> {
    let gen = Generator::new(Arc::new(closure_pm(f)))?;
    let limits = bounds.limits();
    let mut stats = SearchStats::default();
    let seeds = gen.seeds(f, limits);
    stats.norm_pruned |= seeds.norm_pruned;
    stats.draft_cap |= seeds.truncated;
    let mut space = Space {
        gen: &gen,
        states: Vec::new(),
        keys: HashMap::new(),
        subs: Vec::new(),
        depth: Vec::new(),
        step: Vec::new(),
        steps_done: 0,
    };
    let mut seed_ids = Vec::new();
    for s in seeds.states {
        if space.states.len() >= bounds.max_states {
            stats.state_cap = true;
            break;
        }
        seed_ids.push(space.add(s, 0));
    }
    seed_ids.dedup();
    let mut expanded = 0usize;
    let mut level = 0usize;
    loop {
        space.update_steps();
        let good = space.good();
        stats.states = space.states.len();
        stats.edges = space.step.iter().map(|r| r.count_ones(..)).sum();
        stats.good = good.count_ones(..);
        stats.levels = level;
        let best = seed_ids
            .iter()
            .filter(|&&s| good.contains(s))
            .take(CERTIFICATE_TRIES)
            .filter_map(|&s| space.certificate(s, &good))
            .min_by_key(|(q, _)| q.len());
        if let Some((certificate, witness)) = best {
            return Ok(SearchOutcome {
                verdict: Verdict::Sat {
                    certificate,
                    witness,
                },
                stats,
                seed: bounds.seed,
            });
        }
        let frontier: Vec<usize> = (expanded..space.states.len()).collect();
        if frontier.is_empty() {
            break;
        }
        expanded = space.states.len();
        let (deep, shallow): (Vec<usize>, Vec<usize>) = frontier
            .into_iter()
            .partition(|&i| space.depth[i] + 1 >= bounds.max_path);
        if !deep.is_empty() {
            stats.depth_cap = true;
        }
        let results: Vec<(usize, Vec<State>, bool, bool)> = shallow
            .par_iter()
            .map(|&i| {
                let (v, t, n) = expand(&gen, &space.states[i], limits);
                (i, v, t, n)
            })
            .collect();
        for (i, cands, truncated, norm_pruned) in results {
            stats.draft_cap |= truncated;
            stats.norm_pruned |= norm_pruned;
            let w = space.states[i].clone();
            for v in cands {
                if space.index(&v).is_some() {
                    continue;
                }
                let dominated = space
                    .states
                    .iter()
                    .any(|u| simulates_unchecked(u, &v) && step_unchecked(&w, u).is_some());
                if dominated {
                    continue;
                }
                if space.states.len() + v.len() > bounds.max_states {
                    stats.state_cap = true;
                    continue;
                }
                space.add(v, space.depth[i] + 1);
            }
        }
        level += 1;
    }
    let exhausted = !(stats.state_cap || stats.depth_cap || stats.draft_cap);
    Ok(SearchOutcome {
        verdict: Verdict::NoWithinBounds { exhausted },
        stats,
        seed: bounds.seed,
    })
}
