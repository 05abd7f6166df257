//! Axiom schemes and inference rules, instantiated for soundness fuzzing.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{random_formula_with, random_model_with, PosetModel};
use crate::formula::Formula;

/// Schemes over the metavariables `phi`, `psi`, `chi`.
/// `Taut*` is a fixed family of propositional tautology shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    TautIdentity,
    TautExcludedMiddle,
    TautAndElim,
    TautWeakening,
    TautDoubleNeg,
    TautFrege,
    TautContraposition,
    K,
    L,
    NextNeg,
    NextAnd,
    C,
    KHence,
    FixHence,
    IndHence,
}

impl Scheme {
    pub const ALL: [Scheme; 15] = [
        Scheme::TautIdentity,
        Scheme::TautExcludedMiddle,
        Scheme::TautAndElim,
        Scheme::TautWeakening,
        Scheme::TautDoubleNeg,
        Scheme::TautFrege,
        Scheme::TautContraposition,
        Scheme::K,
        Scheme::L,
        Scheme::NextNeg,
        Scheme::NextAnd,
        Scheme::C,
        Scheme::KHence,
        Scheme::FixHence,
        Scheme::IndHence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::TautIdentity => "Taut-identity",
            Scheme::TautExcludedMiddle => "Taut-excluded-middle",
            Scheme::TautAndElim => "Taut-and-elim",
            Scheme::TautWeakening => "Taut-weakening",
            Scheme::TautDoubleNeg => "Taut-double-negation",
            Scheme::TautFrege => "Taut-frege",
            Scheme::TautContraposition => "Taut-contraposition",
            Scheme::K => "K",
            Scheme::L => "L",
            Scheme::NextNeg => "NextNeg",
            Scheme::NextAnd => "NextAnd",
            Scheme::C => "C",
            Scheme::KHence => "KHence",
            Scheme::FixHence => "FixHence",
            Scheme::IndHence => "IndHence",
        }
    }

    pub fn metavariables(self) -> &'static [&'static str] {
        match self {
            Scheme::TautIdentity
            | Scheme::TautExcludedMiddle
            | Scheme::TautDoubleNeg
            | Scheme::L
            | Scheme::NextNeg
            | Scheme::C
            | Scheme::FixHence
            | Scheme::IndHence => &["phi"],
            Scheme::TautAndElim
            | Scheme::TautWeakening
            | Scheme::TautContraposition
            | Scheme::K
            | Scheme::NextAnd
            | Scheme::KHence => &["phi", "psi"],
            Scheme::TautFrege => &["phi", "psi", "chi"],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .iter()
            .copied()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| AxiomError::UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown axiom scheme `{0}`")]
    UnknownScheme(String),
    #[error("scheme {scheme} needs a formula for `{var}`")]
    MissingMetavariable { scheme: String, var: String },
}

/// Instantiates `scheme` with formulas for its metavariables.
pub fn axiom_instance(
    scheme: Scheme,
    subst: &HashMap<String, Formula>,
) -> Result<Formula, AxiomError> {
    let get = |var: &str| {
        subst
            .get(var)
            .cloned()
            .ok_or_else(|| AxiomError::MissingMetavariable {
                scheme: scheme.name().to_string(),
                var: var.to_string(),
            })
    };
    let phi = get("phi")?;
    let psi = || get("psi");
    let chi = || get("chi");
    Ok(match scheme {
        Scheme::TautIdentity => phi.implies(&phi),
        Scheme::TautExcludedMiddle => phi.or(&phi.neg()),
        Scheme::TautAndElim => phi.and(&psi()?).implies(&phi),
        Scheme::TautWeakening => phi.implies(&psi()?.implies(&phi)),
        Scheme::TautDoubleNeg => phi.neg().neg().implies(&phi),
        Scheme::TautFrege => {
            let (psi, chi) = (psi()?, chi()?);
            phi.implies(&psi.implies(&chi))
                .implies(&phi.implies(&psi).implies(&phi.implies(&chi)))
        }
        Scheme::TautContraposition => {
            let psi = psi()?;
            phi.implies(&psi).implies(&psi.neg().implies(&phi.neg()))
        }
        Scheme::K => {
            let psi = psi()?;
            phi.implies(&psi)
                .boxed()
                .implies(&phi.boxed().implies(&psi.boxed()))
        }
        Scheme::L => phi.boxed().implies(&phi).boxed().implies(&phi.boxed()),
        Scheme::NextNeg => phi.next().neg().iff(&phi.neg().next()),
        Scheme::NextAnd => {
            let psi = psi()?;
            phi.and(&psi).next().iff(&phi.next().and(&psi.next()))
        }
        Scheme::C => phi
            .next()
            .and(&phi.boxed().next())
            .implies(&phi.next().boxed()),
        Scheme::KHence => {
            let psi = psi()?;
            phi.implies(&psi)
                .hence()
                .implies(&phi.hence().implies(&psi.hence()))
        }
        Scheme::FixHence => phi.hence().implies(&phi.and(&phi.hence().next())),
        Scheme::IndHence => phi
            .implies(&phi.next())
            .hence()
            .implies(&phi.implies(&phi.hence())),
    })
}

/// Inference rules; each maps valid premises to a conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    ModusPonens,
    NecBox,
    NecNext,
    NecHence,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::ModusPonens, Rule::NecBox, Rule::NecNext, Rule::NecHence];

    /// Conclusion from premises `φ` (and `φ → ψ` for modus ponens, given as `psi`).
    pub fn conclude(self, phi: &Formula, psi: &Formula) -> (Vec<Formula>, Formula) {
        match self {
            Rule::ModusPonens => (vec![phi.clone(), phi.implies(psi)], psi.clone()),
            Rule::NecBox => (vec![phi.clone()], phi.boxed()),
            Rule::NecNext => (vec![phi.clone()], phi.next()),
            Rule::NecHence => (vec![phi.clone()], phi.hence()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzFailure {
    pub trial: usize,
    pub what: String,
    pub formula: Formula,
    pub model: PosetModel,
}

#[derive(Debug, Clone, Default)]
pub struct FuzzReport {
    pub axiom_trials: usize,
    pub rule_trials: usize,
    /// Rule trials whose premises happened to be valid (the informative ones).
    pub rule_trials_applicable: usize,
    pub failures: Vec<FuzzFailure>,
}

const ATOMS: [&str; 3] = ["p", "q", "r"];

/// Checks `trials` random (model, scheme, substitution) triples and as many
/// rule applications. Deterministic in `seed`.
pub fn fuzz_axioms(seed: u64, trials: usize, max_points: usize, depth: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::default();
    for trial in 0..trials {
        let model = random_model_with(&mut rng, max_points, &ATOMS);
        let scheme = Scheme::ALL[trial % Scheme::ALL.len()];
        let subst: HashMap<String, Formula> = ["phi", "psi", "chi"]
            .iter()
            .map(|v| (v.to_string(), random_formula_with(&mut rng, depth, &ATOMS)))
            .collect();
        let inst = axiom_instance(scheme, &subst).expect("all metavariables supplied");
        report.axiom_trials += 1;
        if !model.is_valid(&inst) {
            report.failures.push(FuzzFailure {
                trial,
                what: format!("axiom {scheme}"),
                formula: inst.clone(),
                model: model.clone(),
            });
        }

        // Rules: premises built from a valid formula (the axiom instance) and a random one.
        let rule = Rule::ALL[rng.gen_range(0..Rule::ALL.len())];
        let other = random_formula_with(&mut rng, depth, &ATOMS);
        let premise_psi = if rng.gen_bool(0.5) { other } else { inst.or(&other) };
        let (premises, conclusion) = rule.conclude(&inst, &premise_psi);
        report.rule_trials += 1;
        if premises.iter().all(|p| model.is_valid(p)) {
            report.rule_trials_applicable += 1;
            if !model.is_valid(&conclusion) {
                report.failures.push(FuzzFailure {
                    trial,
                    what: format!("rule {rule:?}"),
                    formula: conclusion,
                    model: model.clone(),
                });
            }
        }
    }
    report
}
