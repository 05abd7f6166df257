use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Formula, FormulaKind};

/// A signed reference to a closure core: `positive == false` stands for `¬core`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub core: usize,
    pub positive: bool,
}

impl Literal {
    pub fn negate(self) -> Literal {
        Literal {
            core: self.core,
            positive: !self.positive,
        }
    }
}

/// Shape of a core with its children resolved to literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreShape {
    Atom,
    And(Literal, Literal),
    Dia(Literal),
    Next(Literal),
    Evt(Literal),
}

/// A finite set of formulas closed under subformulas and single negations,
/// with `¬¬ψ` identified with `ψ`.
///
/// It is stored through its *cores*: formulas with every leading negation
/// stripped. Each core `c` stands for the pair `{c, ¬c}`, so `len()` is twice
/// the number of cores.
#[derive(Clone)]
pub struct Closure {
    cores: Vec<Formula>,
    index: HashMap<Formula, usize>,
    shapes: Vec<CoreShape>,
    eval_order: Vec<usize>,
}

impl Closure {
    /// Closure of the union of `S±(f)` over the given formulas.
    pub fn of<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Closure {
        let mut cores = BTreeSet::new();
        for f in formulas {
            for sub in f.subformulas() {
                cores.insert(sub.strip_negations().0);
            }
        }
        Closure::from_cores(cores.into_iter().collect())
    }

    fn from_cores(cores: Vec<Formula>) -> Closure {
        let index: HashMap<Formula, usize> =
            cores.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let lit = |f: &Formula| {
            let (core, negated) = f.strip_negations();
            Literal {
                core: index[&core],
                positive: !negated,
            }
        };
        let shapes: Vec<CoreShape> = cores
            .iter()
            .map(|c| match c.kind() {
                FormulaKind::Atom(_) => CoreShape::Atom,
                FormulaKind::And(a, b) => CoreShape::And(lit(a), lit(b)),
                FormulaKind::Dia(a) => CoreShape::Dia(lit(a)),
                FormulaKind::Next(a) => CoreShape::Next(lit(a)),
                FormulaKind::Evt(a) => CoreShape::Evt(lit(a)),
                FormulaKind::Neg(_) => unreachable!("cores never start with a negation"),
            })
            .collect();
        // children-first order
        let mut eval_order = Vec::with_capacity(cores.len());
        let mut placed = vec![false; cores.len()];
        fn place(i: usize, shapes: &[CoreShape], placed: &mut [bool], out: &mut Vec<usize>) {
            if placed[i] {
                return;
            }
            placed[i] = true;
            match shapes[i] {
                CoreShape::Atom => {}
                CoreShape::And(a, b) => {
                    place(a.core, shapes, placed, out);
                    place(b.core, shapes, placed, out);
                }
                CoreShape::Dia(a) | CoreShape::Next(a) | CoreShape::Evt(a) => {
                    place(a.core, shapes, placed, out)
                }
            }
            out.push(i);
        }
        for i in 0..cores.len() {
            place(i, &shapes, &mut placed, &mut eval_order);
        }
        Closure {
            cores,
            index,
            shapes,
            eval_order,
        }
    }

    /// Positive representatives in canonical (printed-form) order.
    pub fn cores(&self) -> &[Formula] {
        &self.cores
    }

    pub fn core_count(&self) -> usize {
        self.cores.len()
    }

    /// Full closure size, counting each core and its negation.
    pub fn len(&self) -> usize {
        2 * self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    pub fn shape(&self, core: usize) -> CoreShape {
        self.shapes[core]
    }

    pub fn shapes(&self) -> &[CoreShape] {
        &self.shapes
    }

    /// Core indices ordered so that children come before parents.
    pub fn eval_order(&self) -> &[usize] {
        &self.eval_order
    }

    /// Resolves a formula to a literal, identifying double negations.
    pub fn literal(&self, f: &Formula) -> Option<Literal> {
        let (core, negated) = f.strip_negations();
        self.index.get(&core).map(|&i| Literal {
            core: i,
            positive: !negated,
        })
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.literal(f).is_some()
    }

    /// The formula a literal stands for (`core` or `¬core`).
    pub fn formula(&self, lit: Literal) -> Formula {
        let core = &self.cores[lit.core];
        if lit.positive {
            core.clone()
        } else {
            core.neg()
        }
    }

    /// Every member (each core and its negation), sorted by printed form.
    pub fn members(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self
            .cores
            .iter()
            .flat_map(|c| [c.clone(), c.neg()])
            .collect();
        out.sort();
        out
    }

    pub fn dia_cores(&self) -> impl Iterator<Item = (usize, Literal)> + '_ {
        self.shapes.iter().enumerate().filter_map(|(i, s)| match s {
            CoreShape::Dia(l) => Some((i, *l)),
            _ => None,
        })
    }

    pub fn evt_cores(&self) -> impl Iterator<Item = (usize, Literal)> + '_ {
        self.shapes.iter().enumerate().filter_map(|(i, s)| match s {
            CoreShape::Evt(l) => Some((i, *l)),
            _ => None,
        })
    }

    pub fn next_cores(&self) -> impl Iterator<Item = (usize, Literal)> + '_ {
        self.shapes.iter().enumerate().filter_map(|(i, s)| match s {
            CoreShape::Next(l) => Some((i, *l)),
            _ => None,
        })
    }
}

impl PartialEq for Closure {
    fn eq(&self, other: &Self) -> bool {
        self.cores == other.cores
    }
}

impl Eq for Closure {}

impl fmt::Debug for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.members().iter().map(|m| m.printed())).finish()
    }
}

/// `S±(f)`: subformulas of `f` together with their single negations.
pub fn closure_pm(f: &Formula) -> Closure {
    Closure::of([f])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn printed(c: &Closure) -> Vec<String> {
        c.members().iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn atom_closure() {
        assert_eq!(printed(&closure_pm(&parse("p").unwrap())), vec!["p", "~p"]);
    }

    #[test]
    fn diamond_closure() {
        let c = closure_pm(&parse("<>p").unwrap());
        assert_eq!(printed(&c), vec!["<>p", "p", "~<>p", "~p"]);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn double_negation_collapses() {
        let c = closure_pm(&parse("~~p").unwrap());
        assert_eq!(c.core_count(), 1);
        let lit = c.literal(&parse("~~~p").unwrap()).unwrap();
        assert!(!lit.positive);
    }

    #[test]
    fn eval_order_children_first() {
        let c = closure_pm(&parse("G([]p & p) -> []G p").unwrap());
        let pos: HashMap<usize, usize> =
            c.eval_order().iter().enumerate().map(|(i, &core)| (core, i)).collect();
        for core in 0..c.core_count() {
            match c.shape(core) {
                CoreShape::Atom => {}
                CoreShape::And(a, b) => {
                    assert!(pos[&a.core] < pos[&core] && pos[&b.core] < pos[&core])
                }
                CoreShape::Dia(a) | CoreShape::Next(a) | CoreShape::Evt(a) => {
                    assert!(pos[&a.core] < pos[&core])
                }
            }
        }
    }
}
