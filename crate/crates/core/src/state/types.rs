use std::cmp::Ordering;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::formula::{parse, Closure, CoreShape, Formula, Literal};

/// A Σ-type stored as a sign vector over the closure's cores.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SigmaType {
    bits: FixedBitSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("too many types: closure has {cores} cores, limit is {limit} types")]
    LimitExceeded { cores: usize, limit: usize },
    #[error("`{0}` is not in the closure")]
    NotInClosure(String),
    #[error("both `{0}` and its negation are listed")]
    Contradictory(String),
    #[error("not a type: {0}")]
    Incoherent(String),
    #[error("cannot parse `{text}`: {message}")]
    Parse { text: String, message: String },
}

impl SigmaType {
    pub fn from_bits(bits: FixedBitSet) -> SigmaType {
        SigmaType { bits }
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn core(&self, core: usize) -> bool {
        self.bits.contains(core)
    }

    pub fn has(&self, lit: Literal) -> bool {
        self.bits.contains(lit.core) == lit.positive
    }

    /// `Some(membership)` if `f` belongs to the closure.
    pub fn contains(&self, sigma: &Closure, f: &Formula) -> Option<bool> {
        sigma.literal(f).map(|l| self.has(l))
    }

    /// Member formulas, one signed core each, in closure order.
    pub fn members(&self, sigma: &Closure) -> Vec<Formula> {
        (0..sigma.core_count())
            .map(|c| {
                sigma.formula(Literal {
                    core: c,
                    positive: self.core(c),
                })
            })
            .collect()
    }

    pub fn printed(&self, sigma: &Closure) -> Vec<String> {
        self.members(sigma).iter().map(|f| f.to_string()).collect()
    }

    /// Checks the local coherence conditions.
    pub fn check(sigma: &Closure, bits: &FixedBitSet) -> Result<(), TypeError> {
        let has = |l: Literal| bits.contains(l.core) == l.positive;
        for c in 0..sigma.core_count() {
            match sigma.shape(c) {
                CoreShape::And(a, b) => {
                    if bits.contains(c) != (has(a) && has(b)) {
                        return Err(TypeError::Incoherent(format!(
                            "`{}` disagrees with its conjuncts",
                            sigma.cores()[c]
                        )));
                    }
                }
                CoreShape::Evt(a) => {
                    if !bits.contains(c) && has(a) {
                        return Err(TypeError::Incoherent(format!(
                            "`~{}` holds but so does `{}`",
                            sigma.cores()[c],
                            sigma.formula(a)
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Canonical order: core by core, positive before negative.
    pub fn canonical_cmp(&self, other: &SigmaType, cores: usize) -> Ordering {
        for c in 0..cores {
            match (self.core(c), other.core(c)) {
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
        }
        Ordering::Equal
    }

    /// Completes a listed label: listed formulas fix their cores, unlisted
    /// conjunctions follow their conjuncts, every other unlisted core is negated.
    pub fn complete(sigma: &Closure, listed: &[Formula]) -> Result<SigmaType, TypeError> {
        let k = sigma.core_count();
        let mut fixed: Vec<Option<bool>> = vec![None; k];
        for f in listed {
            let lit = sigma
                .literal(f)
                .ok_or_else(|| TypeError::NotInClosure(f.to_string()))?;
            match fixed[lit.core] {
                Some(v) if v != lit.positive => return Err(TypeError::Contradictory(f.to_string())),
                _ => fixed[lit.core] = Some(lit.positive),
            }
        }
        let mut bits = FixedBitSet::with_capacity(k);
        for &c in sigma.eval_order() {
            let value = match (fixed[c], sigma.shape(c)) {
                (Some(v), _) => v,
                (None, CoreShape::And(a, b)) => {
                    (bits.contains(a.core) == a.positive) && (bits.contains(b.core) == b.positive)
                }
                (None, _) => false,
            };
            bits.set(c, value);
        }
        SigmaType::check(sigma, &bits)?;
        Ok(SigmaType { bits })
    }

    pub fn parse_label(sigma: &Closure, texts: &[String]) -> Result<SigmaType, TypeError> {
        let listed = texts
            .iter()
            .map(|t| {
                parse(t).map_err(|e| TypeError::Parse {
                    text: t.clone(),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SigmaType::complete(sigma, &listed)
    }
}

/// Default cap on the number of enumerated types.
pub const DEFAULT_TYPE_LIMIT: usize = 1 << 16;

/// All Σ-types in canonical order.
pub fn enumerate_types(sigma: &Closure, limit: usize) -> Result<Vec<SigmaType>, TypeError> {
    let k = sigma.core_count();
    // constraints checked as soon as their largest core is assigned
    let mut checks_at: Vec<Vec<usize>> = vec![Vec::new(); k];
    for c in 0..k {
        let last = match sigma.shape(c) {
            CoreShape::And(a, b) => c.max(a.core).max(b.core),
            CoreShape::Evt(a) => c.max(a.core),
            _ => continue,
        };
        checks_at[last].push(c);
    }
    let ok = |bits: &FixedBitSet, c: usize| -> bool {
        let has = |l: Literal| bits.contains(l.core) == l.positive;
        match sigma.shape(c) {
            CoreShape::And(a, b) => bits.contains(c) == (has(a) && has(b)),
            CoreShape::Evt(a) => bits.contains(c) || !has(a),
            _ => true,
        }
    };
    let mut out = Vec::new();
    let mut bits = FixedBitSet::with_capacity(k);
    fn go(
        i: usize,
        k: usize,
        bits: &mut FixedBitSet,
        checks_at: &[Vec<usize>],
        ok: &dyn Fn(&FixedBitSet, usize) -> bool,
        out: &mut Vec<SigmaType>,
        limit: usize,
    ) -> bool {
        if i == k {
            if out.len() >= limit {
                return false;
            }
            out.push(SigmaType { bits: bits.clone() });
            return true;
        }
        for value in [true, false] {
            bits.set(i, value);
            if checks_at[i].iter().all(|&c| ok(bits, c))
                && !go(i + 1, k, bits, checks_at, ok, out, limit)
            {
                return false;
            }
        }
        bits.set(i, false);
        true
    }
    if !go(0, k, &mut bits, &checks_at, &ok, &mut out, limit) {
        return Err(TypeError::LimitExceeded { cores: k, limit });
    }
    Ok(out)
}

/// Whether `(Φ, Ψ)` can be one step of the map.
pub fn sensible_pair(sigma: &Closure, phi: &SigmaType, psi: &SigmaType) -> bool {
    for c in 0..sigma.core_count() {
        match sigma.shape(c) {
            CoreShape::Next(a) => {
                if psi.has(a) != phi.core(c) {
                    return false;
                }
            }
            CoreShape::Evt(a) => {
                if phi.core(c) {
                    if !phi.has(a) && !psi.core(c) {
                        return false;
                    }
                } else if psi.core(c) {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

/// Types indexed for repeated lookups over one closure.
#[derive(Clone, Debug)]
pub struct TypeTable {
    pub types: Vec<SigmaType>,
    index: HashMap<SigmaType, usize>,
}

impl TypeTable {
    pub fn new(sigma: &Closure, limit: usize) -> Result<TypeTable, TypeError> {
        let types = enumerate_types(sigma, limit)?;
        let index = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(TypeTable { types, index })
    }

    pub fn index_of(&self, t: &SigmaType) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::closure_pm;

    fn sigma(text: &str) -> Closure {
        closure_pm(&parse(text).unwrap())
    }

    fn brute_force(sigma: &Closure) -> usize {
        let k = sigma.core_count();
        (0u32..1 << k)
            .filter(|m| {
                let mut bits = FixedBitSet::with_capacity(k);
                for c in 0..k {
                    bits.set(c, m & (1 << c) != 0);
                }
                SigmaType::check(sigma, &bits).is_ok()
            })
            .count()
    }

    #[test]
    fn atom_types() {
        let s = sigma("p");
        let ts = enumerate_types(&s, 100).unwrap();
        assert_eq!(ts.len(), 2);
        assert!(ts[0].core(0));
    }

    #[test]
    fn eventually_types() {
        let s = sigma("F p");
        let ts = enumerate_types(&s, 100).unwrap();
        let printed: Vec<Vec<String>> = ts.iter().map(|t| t.printed(&s)).collect();
        assert_eq!(
            printed,
            vec![vec!["F p", "p"], vec!["F p", "~p"], vec!["~F p", "~p"]]
        );
    }

    #[test]
    fn counts_match_brute_force() {
        for text in ["p & q", "G([]p & p) -> []G p", "O p & F ~q", "<>(p & ~<>p)"] {
            let s = sigma(text);
            assert_eq!(enumerate_types(&s, 1 << 20).unwrap().len(), brute_force(&s), "{text}");
        }
        assert_eq!(enumerate_types(&sigma("p & q"), 100).unwrap().len(), 4);
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            enumerate_types(&sigma("p & q"), 3),
            Err(TypeError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_canonical() {
        let s = sigma("G([]p & p) -> []G p");
        let ts = enumerate_types(&s, 1 << 20).unwrap();
        for w in ts.windows(2) {
            assert_eq!(w[0].canonical_cmp(&w[1], s.core_count()), Ordering::Less);
        }
    }

    #[test]
    fn sensibility_clauses() {
        let s = sigma("F p");
        let ts = enumerate_types(&s, 100).unwrap();
        let (fp_p, fp_np, nfp) = (&ts[0], &ts[1], &ts[2]);
        assert!(sensible_pair(&s, fp_p, fp_np));
        assert!(!sensible_pair(&s, fp_np, nfp));
        assert!(sensible_pair(&s, fp_np, fp_p));
        assert!(!sensible_pair(&s, nfp, fp_p));

        let s = sigma("O p");
        let ts = enumerate_types(&s, 100).unwrap();
        let op = ts.iter().find(|t| t.contains(&s, &parse("O p").unwrap()) == Some(true)).unwrap();
        let np = ts.iter().find(|t| t.contains(&s, &parse("p").unwrap()) == Some(false)).unwrap();
        assert!(!sensible_pair(&s, op, np));
    }

    #[test]
    fn completion_rules() {
        let s = sigma("<>p & q");
        let t = SigmaType::parse_label(&s, &["<>p".into(), "q".into()]).unwrap();
        assert_eq!(t.contains(&s, &parse("<>p & q").unwrap()), Some(true));
        assert_eq!(t.contains(&s, &parse("p").unwrap()), Some(false));
        assert!(matches!(
            SigmaType::parse_label(&s, &["q".into(), "~q".into()]),
            Err(TypeError::Contradictory(_))
        ));
        assert!(matches!(
            SigmaType::parse_label(&s, &["r".into()]),
            Err(TypeError::NotInClosure(_))
        ));
        let h = sigma("G p");
        assert!(SigmaType::parse_label(&h, &["G p".into()]).is_err());
        assert!(SigmaType::parse_label(&h, &["G p".into(), "p".into()]).is_ok());
    }
}
