use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PosetModel;
use crate::formula::Formula;
use crate::order::Poset;

/// A random model with `1..=max_points` points. Deterministic in `seed`.
pub fn random_model(seed: u64, max_points: usize, atoms: &[&str]) -> PosetModel {
    random_model_with(&mut ChaCha8Rng::seed_from_u64(seed), max_points, atoms)
}

pub fn random_model_with<R: Rng>(rng: &mut R, max_points: usize, atoms: &[&str]) -> PosetModel {
    let n = rng.gen_range(1..=max_points.max(1));
    let density: f64 = rng.gen_range(0.15..0.6);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    let order = Poset::from_edges(n, &edges).expect("edges go upward in index order");
    let f = monotone_map(rng, &order);
    let val = atoms
        .iter()
        .map(|a| {
            let mut set = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if rng.gen_bool(0.5) {
                    set.insert(x);
                }
            }
            (a.to_string(), set)
        })
        .collect::<BTreeMap<_, _>>();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    PosetModel::new(names, &edges, f, val).expect("generator respects model invariants")
}

// Index order is a linear extension, so every predecessor is assigned first.
fn monotone_map<R: Rng>(rng: &mut R, order: &Poset) -> Vec<usize> {
    let n = order.len();
    'attempt: for _ in 0..16 {
        let mut f = vec![0usize; n];
        for x in 0..n {
            let options: Vec<usize> = (0..n)
                .filter(|&y| order.below(x).ones().all(|p| order.le(f[p], y)))
                .collect();
            if options.is_empty() {
                continue 'attempt;
            }
            f[x] = options[rng.gen_range(0..options.len())];
        }
        return f;
    }
    (0..n).collect()
}

/// A random formula of depth at most `depth` over `atoms`.
pub fn random_formula(seed: u64, depth: usize, atoms: &[&str]) -> Formula {
    random_formula_with(&mut ChaCha8Rng::seed_from_u64(seed), depth, atoms)
}

pub fn random_formula_with<R: Rng>(rng: &mut R, depth: usize, atoms: &[&str]) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => random_formula_with(rng, d, atoms).neg(),
        1 => {
            let a = random_formula_with(rng, d, atoms);
            a.and(&random_formula_with(rng, d, atoms))
        }
        2 => random_formula_with(rng, d, atoms).dia(),
        3 => random_formula_with(rng, d, atoms).next(),
        4 => random_formula_with(rng, d, atoms).evt(),
        5 => random_formula_with(rng, d, atoms).boxed(),
        6 => random_formula_with(rng, d, atoms).hence(),
        7 => {
            let a = random_formula_with(rng, d, atoms);
            a.or(&random_formula_with(rng, d, atoms))
        }
        8 => {
            let a = random_formula_with(rng, d, atoms);
            a.implies(&random_formula_with(rng, d, atoms))
        }
        _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_identity() {
        for seed in 0..20 {
            let m = random_model(seed, 1, &["p"]);
            assert_eq!(m.len(), 1);
            assert_eq!(m.map(), &[0]);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_model(7, 5, &["p", "q"]);
        let b = random_model(7, 5, &["p", "q"]);
        assert_eq!(a.to_doc(), b.to_doc());
        assert!(random_formula(3, 5, &["p"]).ptr_eq(&random_formula(3, 5, &["p"])));
    }

    #[test]
    fn generated_models_revalidate() {
        for seed in 0..200 {
            let m = random_model(seed, 5, &["p", "q"]);
            assert!(PosetModel::from_doc(&m.to_doc()).is_ok(), "seed {seed}");
        }
    }
}
