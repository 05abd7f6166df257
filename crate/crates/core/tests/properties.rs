mod common;

use std::collections::HashSet;

use common::{golden, random_sigma, random_state, ATOMS};
use dgl::formula::{closure_pm, neg_norm, parse, Closure, Formula};
use dgl::model::{random_formula, random_model, Evaluator, PosetModel};
use dgl::quasimodel::{
    extend_to_lasso, lasso_coherence, lower_path, model_to_quasimodel, neighbourhood_member,
    random_lasso, random_quasimodel, random_quasimodel_with, Quasimodel,
};
use dgl::search::{sat_search, SearchBounds, Verdict};
use dgl::state::{
    is_valid_state, shrink, simulates, step_exists, successor_candidates, CandidateLimits,
};
use fixedbitset::FixedBitSet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn preimage(m: &PosetModel, set: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(m.len());
    for x in 0..m.len() {
        if set.contains(m.map()[x]) {
            out.insert(x);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), depth in 0usize..=6) {
        let f = random_formula(seed, depth, &["p", "q", "r"]);
        let g = parse(&f.to_string()).unwrap();
        prop_assert!(g.ptr_eq(&f), "{} reparsed as {}", f, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_closed_and_idempotent(seed in any::<u64>(), depth in 0usize..=5) {
        let f = random_formula(seed, depth, &ATOMS);
        let sigma = closure_pm(&f);
        let members = sigma.members();
        let again = Closure::of(&members);
        prop_assert!(again == sigma);
        let subs: HashSet<Formula> = f.subformulas().into_iter().collect();
        prop_assert!(sigma.len() <= 2 * subs.len());
        for m in &members {
            for s in m.subformulas() {
                prop_assert!(sigma.contains(&s), "{} missing from closure", s);
            }
            prop_assert!(sigma.contains(&m.neg()));
        }
    }

    #[test]
    fn interning_is_stable(seed in any::<u64>()) {
        let a = random_formula(seed, 4, &ATOMS);
        let b = random_formula(seed, 4, &ATOMS);
        prop_assert!(a.ptr_eq(&b));
        prop_assert!(neg_norm(&a.neg().neg()).ptr_eq(&neg_norm(&a)));
    }

    #[test]
    fn semantics_identities(seed in any::<u64>(), depth in 0usize..=3) {
        let m = random_model(seed, 5, &ATOMS);
        let phi = random_formula(seed ^ 0x9e37, depth, &ATOMS);
        let psi = random_formula(seed ^ 0x7f4a, depth, &ATOMS);
        let mut ev = Evaluator::new(&m);
        let all = {
            let mut s = FixedBitSet::with_capacity(m.len());
            s.insert_range(..);
            s
        };
        // duality of the box
        let boxed = ev.eval(&phi.neg().dia().neg()).clone();
        let dia_not = ev.eval(&phi.neg().dia()).clone();
        let mut expect = all.clone();
        expect.difference_with(&dia_not);
        prop_assert_eq!(boxed, expect);
        // eventually: fixpoint equation and brute-force orbit union
        let base = ev.eval(&phi).clone();
        let evt = ev.eval(&phi.evt()).clone();
        let mut unfold = base.clone();
        unfold.union_with(&preimage(&m, &evt));
        prop_assert_eq!(&unfold, &evt);
        let mut brute = FixedBitSet::with_capacity(m.len());
        let mut layer = base.clone();
        for _ in 0..=m.len() {
            brute.union_with(&layer);
            layer = preimage(&m, &layer);
        }
        prop_assert_eq!(&brute, &evt);
        // next is a homomorphism
        let both = ev.eval(&phi.and(&psi).next()).clone();
        let mut inter = ev.eval(&phi.next()).clone();
        inter.intersect_with(ev.eval(&psi.next()));
        prop_assert_eq!(both, inter);
        prop_assert_eq!(ev.eval(&phi.next().neg()).clone(), ev.eval(&phi.neg().next()).clone());
    }

    #[test]
    fn random_models_revalidate_and_repeat(seed in any::<u64>(), n in 1usize..=6) {
        let m = random_model(seed, n, &ATOMS);
        prop_assert!(m.len() <= n);
        let again = PosetModel::from_doc(&m.to_doc()).unwrap();
        prop_assert_eq!(again.to_doc(), random_model(seed, n, &ATOMS).to_doc());
    }

    #[test]
    fn simulation_is_a_preorder(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = random_sigma(&mut r, 2);
        let a = random_state(&mut r, &sigma, 3);
        let b = random_state(&mut r, &sigma, 3);
        let c = random_state(&mut r, &sigma, 3);
        prop_assert!(simulates(&a, &a).unwrap());
        if simulates(&a, &b).unwrap() && simulates(&b, &c).unwrap() {
            prop_assert!(simulates(&a, &c).unwrap());
        }
        prop_assert!(simulates(&a, &a.unfold()).unwrap());
        prop_assert!(simulates(&a.unfold(), &a).unwrap());
    }

    #[test]
    fn substates_are_valid_and_below(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = random_sigma(&mut r, 3);
        let w = random_state(&mut r, &sigma, 4);
        prop_assert!(is_valid_state(&w));
        prop_assert_eq!(w.substates().len(), w.len() - 1);
        for s in w.substates() {
            prop_assert!(is_valid_state(&s));
            prop_assert!(s.norm().hgt < w.norm().hgt);
        }
    }

    #[test]
    fn shrink_is_simulated_and_smaller(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = random_sigma(&mut r, 2);
        let w = random_state(&mut r, &sigma, 4);
        let s = shrink(&w);
        prop_assert!(is_valid_state(&s));
        prop_assert!(simulates(&s, &w).unwrap());
        prop_assert!(s.norm().norm <= w.unfold().norm().norm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn successor_candidates_are_steps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = random_sigma(&mut r, 2);
        let w = random_state(&mut r, &sigma, 3);
        let limits = CandidateLimits { max_norm: 3, max_candidates: 256 };
        let c = successor_candidates(&w, limits).unwrap();
        prop_assert!(c.truncated || c.norm_pruned || !c.states.is_empty());
        let dia = sigma.dia_cores().count();
        for v in &c.states {
            prop_assert!(is_valid_state(v));
            prop_assert!(step_exists(&w, v).unwrap());
            prop_assert!(v.norm().norm <= 3);
            prop_assert!(v.norm().hgt <= w.norm().hgt + dia);
        }
    }

    #[test]
    fn model_states_have_model_successors(seed in any::<u64>()) {
        // the state of f(x) is reached from the state of x by one step
        let mut r = rng(seed);
        let sigma = random_sigma(&mut r, 2);
        let m = dgl::model::random_model_with(&mut r, 4, &ATOMS);
        for x in 0..m.len() {
            let w = dgl::state::state_of_point(&m, x, sigma.clone());
            let v = dgl::state::state_of_point(&m, m.map()[x], sigma.clone());
            prop_assert!(step_exists(&w, &v).unwrap());
        }
    }

    #[test]
    fn model_quasimodels_unwind_coherently(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = random_sigma(&mut r, 3);
        let m = dgl::model::random_model_with(&mut r, 5, &ATOMS);
        let q = model_to_quasimodel(&m, sigma);
        prop_assert!(q.validate().is_ok());
        for x in 0..q.len() {
            let l = extend_to_lasso(&q, &[x]).unwrap();
            prop_assert!(lasso_coherence(&q, &l).is_ok());
        }
    }

    #[test]
    fn unwinder_is_total(seed in any::<u64>()) {
        let q = random_quasimodel(seed, 4, 3, &ATOMS);
        prop_assert!(q.validate().is_ok());
        let mut r = rng(seed);
        for _ in 0..4 {
            let l = random_lasso(&mut r, &q, 4);
            prop_assert!(l.check(&q).is_ok());
            prop_assert!(lasso_coherence(&q, &l).is_ok());
        }
    }

    #[test]
    fn paths_lower_like_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = random_quasimodel_with(&mut r, 5, 2, &ATOMS);
        let l = random_lasso(&mut r, &q, 4);
        let path: Vec<usize> = (0..4).map(|i| l.at(i)).collect();
        for v0 in q.order().down_closure(path[0]).ones() {
            let lowered = lower_path(&q, &path, v0);
            prop_assert_eq!(lowered.is_some(), brute_lower(&q, &path, v0));
            if let Some(v) = lowered {
                prop_assert!(q.check_path(&v).is_ok());
                for (a, b) in v.iter().zip(&path) {
                    prop_assert!(q.order().le(*a, *b));
                }
            }
        }
    }

    #[test]
    fn shift_is_continuous(seed in any::<u64>(), m in 0usize..4) {
        let mut r = rng(seed);
        let q = random_quasimodel_with(&mut r, 4, 2, &ATOMS);
        let a = random_lasso(&mut r, &q, 3);
        let b = random_lasso(&mut r, &q, 3);
        for (v, w) in [(&a, &b), (&b, &a), (&a, &a)] {
            if neighbourhood_member(&q, v, m + 1, w) {
                prop_assert!(neighbourhood_member(&q, &v.shift(), m, &w.shift()));
            }
        }
    }
}

/// Whether some `S`-path below `path` starts at `v0`, by exhaustive search.
fn brute_lower(q: &Quasimodel, path: &[usize], v0: usize) -> bool {
    let mut layer: HashSet<usize> = [v0].into_iter().collect();
    for &target in &path[1..] {
        layer = layer
            .iter()
            .flat_map(|&a| q.successors(a).iter().copied())
            .filter(|&b| q.order().le(b, target))
            .collect();
        if layer.is_empty() {
            return false;
        }
    }
    true
}

const BATTERY: [&str; 8] = [
    "p",
    "F p & ~p",
    "<>p & []q",
    "O ~p & p",
    "~<>p & O <>p",
    "G([]p & p) & ~[]G p",
    "p & ~p",
    "G p & F ~p",
];

#[test]
fn certificates_validate_and_unwind() {
    for text in BATTERY {
        let f = parse(text).unwrap();
        let out = sat_search(&f, &SearchBounds::default()).unwrap();
        if let Verdict::Sat { certificate, witness } = out.verdict {
            assert!(certificate.validate().is_ok(), "{text}");
            assert_eq!(certificate.label(witness).contains(certificate.sigma(), &f), Some(true));
            let l = extend_to_lasso(&certificate, &[witness]).unwrap();
            assert!(lasso_coherence(&certificate, &l).is_ok(), "{text}");
            let back = Quasimodel::from_doc(&certificate.to_doc(), None).unwrap();
            assert_eq!(back.len(), certificate.len());
        }
    }
}

#[test]
fn larger_bounds_keep_sat() {
    let small = SearchBounds { max_norm: 2, max_states: 32, max_path: 4, seed: 1 };
    let large = SearchBounds { max_norm: 4, max_states: 256, max_path: 16, seed: 1 };
    for text in BATTERY {
        let f = parse(text).unwrap();
        if sat_search(&f, &small).unwrap().is_sat() {
            assert!(sat_search(&f, &large).unwrap().is_sat(), "{text}");
        }
    }
}

#[test]
fn search_terminates_without_a_path_bound() {
    let open = SearchBounds { max_norm: 3, max_states: 100_000, max_path: usize::MAX, seed: 0 };
    for text in BATTERY {
        let out = sat_search(&parse(text).unwrap(), &open).unwrap();
        assert!(!out.stats.state_cap && !out.stats.depth_cap, "{text}");
    }
}

#[test]
fn threads_do_not_change_the_outcome() {
    let f = parse("G([]p & p) & ~[]G p").unwrap();
    let run = |n: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        let out = pool.install(|| sat_search(&f, &SearchBounds::default())).unwrap();
        match out.verdict {
            Verdict::Sat { certificate, .. } => serde_json::to_string(&certificate.to_doc()).unwrap(),
            Verdict::NoWithinBounds { .. } => String::new(),
        }
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn satisfiable_in_a_model_is_found() {
    let mut found = 0;
    for seed in 0..40u64 {
        let mut r = rng(seed);
        let m = dgl::model::random_model_with(&mut r, 3, &ATOMS);
        let f = dgl::model::random_formula_with(&mut r, 2, &ATOMS);
        if m.eval(&f).set.count_ones(..) == 0 {
            continue;
        }
        let bounds = SearchBounds { max_norm: m.len().max(2) + 1, ..SearchBounds::default() };
        let out = sat_search(&f, &bounds).unwrap();
        assert!(out.is_sat(), "seed {seed}: {f} holds in a {}-point model; {:?}", m.len(), out.stats);
        found += 1;
    }
    assert!(found > 10);
}

#[test]
fn golden_down_states_step_as_expected() {
    let q = golden();
    let (u, v, w) = (q.point("u").unwrap(), q.point("v").unwrap(), q.point("w").unwrap());
    let st = |x| common::down_state(&q, x);
    assert!(step_exists(&st(u), &st(u)).unwrap());
    assert!(step_exists(&st(v), &st(w)).unwrap());
    assert!(step_exists(&st(w), &st(w)).unwrap());
    assert!(!step_exists(&st(u), &st(w)).unwrap());
}
