//! Hash-consed formulas over the primitive basis `{atom, ¬, ∧, ◊, ●, ◆}`.
//!
//! Every constructor goes through a process-wide interning table, so two
//! structurally identical formulas are the same allocation and compare by id.
//! The derived connectives (`□`, `■`, `∨`, `→`, `↔`) are expanded on
//! construction; they never appear as node kinds.

mod closure;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

pub use closure::{closure_pm, Closure, CoreShape, Literal};
pub use parse::{parse, ParseError};

/// Node kinds of the primitive language.
#[derive(Debug, Clone)]
pub enum FormulaKind {
    Atom(Arc<str>),
    Neg(Formula),
    And(Formula, Formula),
    /// Cantor derivative `◊`.
    Dia(Formula),
    /// Next `●`.
    Next(Formula),
    /// Eventually `◆`.
    Evt(Formula),
}

struct Node {
    id: u32,
    kind: FormulaKind,
    printed: OnceLock<Arc<str>>,
}

/// An interned formula. Cloning is a reference-count bump.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
enum Key {
    Atom(Arc<str>),
    Neg(u32),
    And(u32, u32),
    Dia(u32),
    Next(u32),
    Evt(u32),
}

struct Interner {
    table: HashMap<Key, Formula>,
    next_id: u32,
}

fn interner() -> &'static Mutex<Interner> {
    static TABLE: OnceLock<Mutex<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Mutex::new(Interner {
            table: HashMap::new(),
            next_id: 0,
        })
    })
}

fn intern(key: Key, kind: FormulaKind) -> Formula {
    let mut guard = interner().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(f) = guard.table.get(&key) {
        return f.clone();
    }
    let id = guard.next_id;
    guard.next_id += 1;
    let f = Formula(Arc::new(Node {
        id,
        kind,
        printed: OnceLock::new(),
    }));
    guard.table.insert(key, f.clone());
    f
}

/// Number of distinct formulas interned so far in this process.
pub fn interned_count() -> usize {
    interner()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .table
        .len()
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        let name: Arc<str> = Arc::from(name);
        intern(Key::Atom(name.clone()), FormulaKind::Atom(name))
    }

    pub fn neg(&self) -> Formula {
        intern(Key::Neg(self.id()), FormulaKind::Neg(self.clone()))
    }

    pub fn and(&self, other: &Formula) -> Formula {
        intern(
            Key::And(self.id(), other.id()),
            FormulaKind::And(self.clone(), other.clone()),
        )
    }

    pub fn dia(&self) -> Formula {
        intern(Key::Dia(self.id()), FormulaKind::Dia(self.clone()))
    }

    pub fn next(&self) -> Formula {
        intern(Key::Next(self.id()), FormulaKind::Next(self.clone()))
    }

    pub fn evt(&self) -> Formula {
        intern(Key::Evt(self.id()), FormulaKind::Evt(self.clone()))
    }

    /// `□φ := ¬◊¬φ`
    pub fn boxed(&self) -> Formula {
        self.neg().dia().neg()
    }

    /// `■φ := ¬◆¬φ`
    pub fn hence(&self) -> Formula {
        self.neg().evt().neg()
    }

    pub fn or(&self, other: &Formula) -> Formula {
        self.neg().and(&other.neg()).neg()
    }

    pub fn implies(&self, other: &Formula) -> Formula {
        self.and(&other.neg()).neg()
    }

    pub fn iff(&self, other: &Formula) -> Formula {
        self.implies(other).and(&other.implies(self))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(|acc, f| acc.and(&f))
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_neg(&self) -> bool {
        matches!(self.kind(), FormulaKind::Neg(_))
    }

    /// Strips every leading negation, returning the core and whether an odd
    /// number of negations was removed.
    pub fn strip_negations(&self) -> (Formula, bool) {
        let mut f = self.clone();
        let mut negated = false;
        while let FormulaKind::Neg(inner) = f.kind() {
            let inner = inner.clone();
            f = inner;
            negated = !negated;
        }
        (f, negated)
    }

    /// `φ` with `χ` such that `φ = ¬◊¬χ`, modulo leading double negations.
    pub fn box_shape(&self) -> Option<Formula> {
        match neg_norm(self).kind() {
            FormulaKind::Neg(inner) => match inner.kind() {
                FormulaKind::Dia(body) => match body.kind() {
                    FormulaKind::Neg(chi) => Some(neg_norm(chi)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// `χ` such that `φ = ¬◆¬χ` (i.e. `■χ`), modulo leading double negations.
    pub fn hence_shape(&self) -> Option<Formula> {
        match neg_norm(self).kind() {
            FormulaKind::Neg(inner) => match inner.kind() {
                FormulaKind::Evt(body) => match body.kind() {
                    FormulaKind::Neg(chi) => Some(neg_norm(chi)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// All subformulas, each listed once (DAG traversal, children first).
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![(self.clone(), false)];
        while let Some((f, expanded)) = stack.pop() {
            if expanded {
                out.push(f);
                continue;
            }
            if !seen.insert(f.id()) {
                continue;
            }
            stack.push((f.clone(), true));
            for child in f.children() {
                if !seen.contains(&child.id()) {
                    stack.push((child.clone(), false));
                }
            }
        }
        out
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self.kind() {
            FormulaKind::Atom(_) => vec![],
            FormulaKind::Neg(a) | FormulaKind::Dia(a) | FormulaKind::Next(a) | FormulaKind::Evt(a) => {
                vec![a]
            }
            FormulaKind::And(a, b) => vec![a, b],
        }
    }

    /// Atom names occurring in the formula.
    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut names: Vec<Arc<str>> = self
            .subformulas()
            .into_iter()
            .filter_map(|f| match f.kind() {
                FormulaKind::Atom(n) => Some(n.clone()),
                _ => None,
            })
            .collect();
        names.sort();
        names.dedup();
        names
    }

    /// Node count of the DAG (shared subterms counted once).
    pub fn dag_size(&self) -> usize {
        self.subformulas().len()
    }

    /// Node count of the formula read as a tree. Saturates at `usize::MAX`.
    pub fn tree_size(&self) -> usize {
        let mut memo: HashMap<u32, usize> = HashMap::new();
        for f in self.subformulas() {
            let size = f
                .children()
                .iter()
                .fold(1usize, |acc, c| acc.saturating_add(memo[&c.id()]));
            memo.insert(f.id(), size);
        }
        memo[&self.id()]
    }

    /// Printed form, cached on the node.
    pub fn printed(&self) -> Arc<str> {
        self.0
            .printed
            .get_or_init(|| {
                let mut out = String::new();
                write_formula(self, &mut out);
                Arc::from(out.as_str())
            })
            .clone()
    }
}

/// Strips leading double negations: `¬¬ψ ↦ neg_norm(ψ)`, top level only.
pub fn neg_norm(f: &Formula) -> Formula {
    let mut cur = f.clone();
    loop {
        let next = match cur.kind() {
            FormulaKind::Neg(inner) => match inner.kind() {
                FormulaKind::Neg(body) => body.clone(),
                _ => return cur,
            },
            _ => return cur,
        };
        cur = next;
    }
}

fn is_binary(f: &Formula) -> bool {
    if f.box_like().is_some() || f.hence_like().is_some() {
        return false;
    }
    matches!(f.kind(), FormulaKind::And(..))
}

impl Formula {
    // Exact (no double-negation stripping) sugar patterns used by the printer.
    fn box_like(&self) -> Option<&Formula> {
        if let FormulaKind::Neg(a) = self.kind() {
            if let FormulaKind::Dia(b) = a.kind() {
                if let FormulaKind::Neg(c) = b.kind() {
                    return Some(c);
                }
            }
        }
        None
    }

    fn hence_like(&self) -> Option<&Formula> {
        if let FormulaKind::Neg(a) = self.kind() {
            if let FormulaKind::Evt(b) = a.kind() {
                if let FormulaKind::Neg(c) = b.kind() {
                    return Some(c);
                }
            }
        }
        None
    }
}

fn write_operand(f: &Formula, out: &mut String) {
    if is_binary(f) {
        out.push('(');
        out.push_str(&f.printed());
        out.push(')');
    } else {
        out.push_str(&f.printed());
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    if let Some(body) = f.box_like() {
        out.push_str("[]");
        write_operand(body, out);
        return;
    }
    if let Some(body) = f.hence_like() {
        out.push_str("G ");
        write_operand(body, out);
        return;
    }
    match f.kind() {
        FormulaKind::Atom(name) => out.push_str(name),
        FormulaKind::Neg(a) => {
            out.push('~');
            write_operand(a, out);
        }
        FormulaKind::And(a, b) => {
            write_operand(a, out);
            out.push_str(" & ");
            write_operand(b, out);
        }
        FormulaKind::Dia(a) => {
            out.push_str("<>");
            write_operand(a, out);
        }
        FormulaKind::Next(a) => {
            out.push_str("O ");
            write_operand(a, out);
        }
        FormulaKind::Evt(a) => {
            out.push_str("F ");
            write_operand(a, out);
        }
    }
}

/// Renders the formula in the ASCII surface syntax accepted by [`parse`].
pub fn print(f: &Formula) -> String {
    f.printed().to_string()
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.id() == other.id()
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id().hash(state)
    }
}

/// Canonical order: lexicographic on the printed form.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.id() == other.id() {
            return Ordering::Equal;
        }
        self.printed().cmp(&other.printed())
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.printed())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self.printed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn interning_is_reference_identity() {
        let a = p().dia().and(&Formula::atom("q"));
        let b = p().dia().and(&Formula::atom("q"));
        assert!(a.ptr_eq(&b));
        let before = interned_count();
        let _c = p().dia().and(&Formula::atom("q"));
        assert_eq!(before, interned_count());
    }

    #[test]
    fn neg_norm_strips_even_prefixes() {
        assert_eq!(neg_norm(&p().neg().neg()), p());
        assert_eq!(neg_norm(&p().neg()), p().neg());
        assert_eq!(neg_norm(&p().dia().neg().neg().neg().neg()), p().dia());
        assert_eq!(neg_norm(&p().neg().neg().neg()), p().neg());
    }

    #[test]
    fn printer_basics() {
        assert_eq!(print(&p()), "p");
        assert_eq!(print(&p().dia()), "<>p");
        assert_eq!(print(&p().boxed()), "[]p");
        assert_eq!(print(&p().hence()), "G p");
        assert_eq!(print(&p().next().and(&Formula::atom("q").evt())), "O p & F q");
        assert_eq!(print(&p().and(&p()).neg()), "~(p & p)");
    }

    #[test]
    fn shapes() {
        let q = Formula::atom("q");
        assert_eq!(q.boxed().box_shape(), Some(q.clone()));
        assert_eq!(q.hence().hence_shape(), Some(q.clone()));
        assert_eq!(q.hence().neg().neg().hence_shape(), Some(q.clone()));
        assert_eq!(q.neg().hence().hence_shape(), Some(q.neg()));
        assert_eq!(q.dia().box_shape(), None);
    }

    #[test]
    fn tree_and_dag_sizes() {
        let s = p().and(&p());
        let t = s.and(&s);
        assert_eq!(t.dag_size(), 3);
        assert_eq!(t.tree_size(), 7);
    }
}
