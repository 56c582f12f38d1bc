//! Herbrand-style validity checking for prenex formulas: semantic trees
//! over order constraints, reverse-Skolemization outlines and finite-valued
//! countermodel search.

mod certificate;
mod outline;
mod tree;

use std::collections::BTreeSet;

pub use certificate::{certificate_json, check_certificate_json, CertificateError};
pub use outline::{check_outline, check_step, reverse_skolemize, OutlineError, ProofOutline, Rule, Step};
pub use tree::{Budget, HerbrandCandidate, SemanticTree, StopReason, TreeOutcome, TreeStats};

use crate::constraints::ConstraintError;
use crate::exec::Execution;
use crate::semantics::{
    brute_force_validity, BruteForce, BruteForceError, BruteForceResult, EvalError, Interpretation, TruthValueSample,
};
use crate::syntax::{
    herbrand_form, to_prenex, Formula, HerbrandForm, PrenexError, PrenexFormula, Regime, SignatureError, TemplateError,
    Term,
};
use crate::value::Value;
use crate::valuesets::TruthValueSet;
use tree::Realization;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("formula has free variables: {0:?}")]
    NotClosed(Vec<String>),
    #[error("prefix of `{0}` is not purely existential")]
    NotExistential(Formula),
    #[error(transparent)]
    Prenex(#[from] PrenexError),
    #[error("Herbrand's theorem fails for the countably infinite set {0}; use a finite or uncountable set")]
    CountableValueSet(String),
    #[error("invalid budget: {0}")]
    Budget(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Outline(#[from] OutlineError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverOptions {
    pub vset: TruthValueSet,
    pub budget: Budget,
    pub exec: Execution,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions { vset: TruthValueSet::unit_interval(), budget: Budget::default(), exec: Execution::Sequential }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidProof {
    /// The prenex formula proved, bound variables renamed apart.
    pub prenex: PrenexFormula,
    pub herbrand: HerbrandForm,
    /// Tuples over the existential variables of the Herbrand form.
    pub instances: Vec<Vec<Term>>,
    /// The matrix of the Herbrand form at each instance.
    pub disjuncts: Vec<Formula>,
    pub outline: ProofOutline,
    pub stats: TreeStats,
}

impl ValidProof {
    /// `⋁ disjuncts`, right-nested.
    pub fn herbrand_disjunction(&self) -> Formula {
        Formula::disjunction(self.disjuncts.iter().cloned()).expect("at least one instance")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownResult {
    pub herbrand: HerbrandForm,
    pub reason: StopReason,
    pub open_nodes: usize,
    pub candidate: HerbrandCandidate,
    pub stats: TreeStats,
}

/// An interpretation giving a formula a value below 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    /// Number of truth values available (`m` of `V_m` for finite search).
    pub m: usize,
    pub interpretation: Interpretation,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofResult {
    Valid(ValidProof),
    Unknown(UnknownResult),
    CountermodelFound(Countermodel),
}

impl ProofResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            ProofResult::Valid(_) => "valid",
            ProofResult::Unknown(_) => "unknown",
            ProofResult::CountermodelFound(_) => "countermodel",
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, ProofResult::Valid(_))
    }

    pub fn stats(&self) -> Option<TreeStats> {
        match self {
            ProofResult::Valid(p) => Some(p.stats),
            ProofResult::Unknown(u) => Some(u.stats),
            ProofResult::CountermodelFound(_) => None,
        }
    }
}

fn closed(f: &Formula) -> Result<(), ProverError> {
    let free = f.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        Err(ProverError::NotClosed(free.into_iter().collect()))
    }
}

fn renamed_apart(a: &PrenexFormula) -> PrenexFormula {
    let mut seen = BTreeSet::new();
    if a.prefix.iter().all(|(_, v)| seen.insert(v.clone())) {
        return a.clone();
    }
    PrenexFormula::from_formula(&a.to_formula().rename_apart()).expect("renaming keeps prenex shape")
}

/// Runs the semantic tree on a purely existential prenex formula.
pub fn prove_existential(a: &PrenexFormula, opts: &ProverOptions) -> Result<ProofResult, ProverError> {
    if !a.is_existential() {
        return Err(ProverError::NotExistential(a.to_formula()));
    }
    prove_prenex(a, opts)
}

/// Herbrand form, semantic tree and, for valid formulas, a checked
/// reverse-Skolemization outline back to `a`.
pub fn prove_prenex(a: &PrenexFormula, opts: &ProverOptions) -> Result<ProofResult, ProverError> {
    closed(&a.to_formula())?;
    if opts.budget.max_level == 0 {
        return Err(ProverError::Budget("max_level must be positive".into()));
    }
    let a = renamed_apart(a);
    let realization = Realization::for_set(&opts.vset)?;
    let herbrand = herbrand_form(&a);
    let mut tree = SemanticTree::build(&herbrand.formula, &realization, opts.budget, opts.exec)?;
    match tree.outcome.clone() {
        TreeOutcome::Closed { witnesses } => {
            let instances: Vec<Vec<Term>> = witnesses.iter().map(|w| tree.terms_of(w)).collect();
            let disjuncts: Vec<Formula> = witnesses.iter().map(|w| tree.instance(w)).collect();
            let outline = reverse_skolemize(&instances, &herbrand, &a)?;
            check_outline(&outline, &disjuncts, &a.to_formula())?;
            Ok(ProofResult::Valid(ValidProof { prenex: a, herbrand, instances, disjuncts, outline, stats: tree.stats }))
        }
        TreeOutcome::Open { reason, open } => {
            let candidate = tree.candidate(&realization)?.expect("open tree");
            Ok(ProofResult::Unknown(UnknownResult {
                herbrand,
                reason,
                open_nodes: open.len(),
                candidate,
                stats: tree.stats,
            }))
        }
        TreeOutcome::Exhausted { constraint } => {
            // Only propositional atoms: one domain element suffices.
            let values = constraint.realize(&realization.vset, &realization.cap)?;
            let mut interpretation = Interpretation::new(1).expect("non-empty domain");
            for (i, v) in values.iter().enumerate() {
                let atom = tree.enumeration.atom_formula(i);
                if let Formula::Atom(name, _) = &atom {
                    interpretation.set_proposition(name, v.clone());
                }
            }
            let value = interpretation.eval(&a.to_formula())?;
            debug_assert!(!value.is_one());
            Ok(ProofResult::CountermodelFound(Countermodel { m: constraint.class_count(), interpretation, value }))
        }
    }
}

/// Brings a closed formula into prenex form with shifts valid in every
/// Gödel logic, then calls [`prove_prenex`].
pub fn prove_formula(f: &Formula, opts: &ProverOptions) -> Result<ProofResult, ProverError> {
    closed(f)?;
    let a = match PrenexFormula::from_formula(f) {
        Ok(a) => a,
        Err(_) => to_prenex(f, Regime::Safe)?,
    };
    prove_prenex(&a, opts)
}

/// Brute-force search over `V_m` for `m = 2..=max_m` with domains up to
/// `max_domain`; the first countermodel found, with its `m`.
pub fn finite_counter_search(
    f: &Formula,
    max_m: usize,
    max_domain: usize,
    exec: Execution,
) -> Result<Option<Countermodel>, BruteForceError> {
    for m in 2..=max_m {
        let sample = TruthValueSample::v_m(m).expect("m >= 2");
        let opts = BruteForce::new(max_domain).with_exec(exec);
        if let BruteForceResult::Countermodel { interpretation, value } = brute_force_validity(f, &sample, opts)? {
            return Ok(Some(Countermodel { m, interpretation, value }));
        }
    }
    Ok(None)
}
