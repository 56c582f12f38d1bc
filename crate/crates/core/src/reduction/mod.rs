//! Translation of classical sentences into prenex Gödel formulas that are
//! valid over a countable value set without dense subsets exactly when the
//! sentence holds in every finite structure.
//!
//! Fresh symbols: `P/1` (the order of levels), `L/2` (level membership),
//! `Le/2` (the order on level indices), constants `zero`, `c1`, `c2` and the
//! successor `s/1`. Membership `x ∈ y` is `~~L(x, y)` and `x ≺ y` is
//! `(P(y) -> P(x)) -> P(y)`.

mod model;

use std::collections::BTreeSet;

pub use model::{
    build_goedel_countermodel, classical_countermodel, default_level_values, level_point_count,
    random_translation_interpretation, GoedelCountermodel,
};

use crate::semantics::{EvalError, InterpretationError};
use crate::syntax::{
    fresh_name, to_prenex, Formula, PrenexError, PrenexFormula, Regime, Signature, SignatureError, Term,
};
use crate::value::Value;

/// Symbols the translation adds; the input sentence must avoid them.
pub const RESERVED_SYMBOLS: [&str; 7] = ["P", "L", "Le", "zero", "s", "c1", "c2"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("formula has free variables: {0:?}")]
    NotClosed(Vec<String>),
    #[error("function symbol `{0}`: only relational sentences are translated")]
    FunctionSymbol(String),
    #[error("symbol `{0}` is reserved by the translation")]
    SymbolClash(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("`{0}` takes a value other than 0 or 1 in the classical structure")]
    NotClassical(String),
    #[error("the classical structure does not falsify the sentence")]
    NotFalsified,
    #[error("{needed} level values needed, {found} given")]
    LevelValues { needed: usize, found: usize },
    #[error("level values must increase strictly and stay below the cap {cap}")]
    LevelOrder { cap: Value },
    #[error(transparent)]
    Prenex(#[from] PrenexError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interpretation(#[from] InterpretationError),
}

/// The pieces of `Aᵍ = B -> (A' | ex u P(u))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub source: Formula,
    pub formula: Formula,
    /// `B`: the order axioms, `c1 ∈ zero`, `c2 ∈ zero`, `c2 ≺ c1` and the level axiom.
    pub antecedent: Formula,
    /// `A' | ex u P(u)`.
    pub consequent: Formula,
    pub order_axioms: Vec<Formula>,
    pub level_axiom: Formula,
    /// The source with atoms double-negated and quantifiers relativized to
    /// non-empty levels.
    pub relativized: Formula,
}

/// Readable abbreviations used in the translated formulas.
pub fn abbreviations() -> Vec<(&'static str, &'static str)> {
    vec![("x ∈ y", "~~L(x, y)"), ("x ≺ y", "(P(y) -> P(x)) -> P(y)"), ("x ≤ y", "~~Le(x, y)"), ("R(v)", "ex w (w ∈ v)")]
}

fn var(name: &str) -> Term {
    Term::var(name)
}

fn dneg(f: Formula) -> Formula {
    Formula::not(Formula::not(f))
}

/// `x ∈ y`.
pub fn member(x: Term, y: Term) -> Formula {
    dneg(Formula::atom("L", vec![x, y]))
}

/// `x ≺ y`.
pub fn precedes(x: Term, y: Term) -> Formula {
    let px = Formula::atom("P", vec![x]);
    let py = Formula::atom("P", vec![y]);
    Formula::implies(Formula::implies(py.clone(), px), py)
}

/// `x ≤ y` on level indices.
pub fn index_le(x: Term, y: Term) -> Formula {
    dneg(Formula::atom("Le", vec![x, y]))
}

fn zero() -> Term {
    Term::constant("zero")
}

fn succ(t: Term) -> Term {
    Term::app("s", vec![t])
}

/// Order axioms on level indices, without equality.
pub fn order_axioms() -> Vec<Formula> {
    let (x, y, z) = (var("x"), var("y"), var("z"));
    vec![
        Formula::forall("x", index_le(zero(), x.clone())),
        Formula::forall("x", index_le(x.clone(), succ(x.clone()))),
        Formula::forall("x", index_le(x.clone(), x.clone())),
        Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::forall(
                    "z",
                    Formula::implies(
                        Formula::and(index_le(x.clone(), y.clone()), index_le(y.clone(), z.clone())),
                        index_le(x.clone(), z),
                    ),
                ),
            ),
        ),
        Formula::forall("x", Formula::not(index_le(succ(x), zero()))),
    ]
}

/// `all i (all x all y all j all k ex z K | all x ~(x ∈ s(i)))`: level
/// `s(i)` is either empty or splits every pair `x ≺ y` from levels up to `i`.
pub fn level_axiom() -> Formula {
    let (i, x, y, j, k, z) = (var("i"), var("x"), var("y"), var("j"), var("k"), var("z"));
    let premise = Formula::conjunction([
        index_le(j.clone(), i.clone()),
        member(x.clone(), j.clone()),
        index_le(k.clone(), i.clone()),
        member(y.clone(), k.clone()),
        precedes(x.clone(), y.clone()),
    ]);
    let conclusion =
        Formula::conjunction([member(z.clone(), succ(i.clone())), precedes(x.clone(), z.clone()), precedes(z, y)]);
    let mut dense = Formula::exists("z", Formula::implies(premise, conclusion));
    for v in ["k", "j", "y", "x"] {
        dense = Formula::forall(v, dense);
    }
    let empty = Formula::forall("x", Formula::not(member(x, succ(i))));
    Formula::forall("i", Formula::or(dense, empty))
}

fn relativize(f: &Formula, witness: &str) -> Formula {
    let nonempty = |v: &str| Formula::exists(witness, member(var(witness), var(v)));
    match f {
        Formula::Atom(..) => dneg(f.clone()),
        Formula::Bottom | Formula::Top => f.clone(),
        Formula::And(a, b) => Formula::and(relativize(a, witness), relativize(b, witness)),
        Formula::Or(a, b) => Formula::or(relativize(a, witness), relativize(b, witness)),
        Formula::Implies(a, b) => Formula::implies(relativize(a, witness), relativize(b, witness)),
        Formula::Forall(v, body) => Formula::forall(v, Formula::implies(nonempty(v), relativize(body, witness))),
        Formula::Exists(v, body) => Formula::exists(v, Formula::and(nonempty(v), relativize(body, witness))),
    }
}

fn check_source(a: &Formula) -> Result<Signature, ReductionError> {
    let free = a.free_vars();
    if !free.is_empty() {
        return Err(ReductionError::NotClosed(free.into_iter().collect()));
    }
    let sig = Signature::of(a)?;
    if let Some(f) = sig.functions.keys().next() {
        return Err(ReductionError::FunctionSymbol(f.clone()));
    }
    if let Some(p) = sig.predicates.keys().find(|p| RESERVED_SYMBOLS.contains(&p.as_str())) {
        return Err(ReductionError::SymbolClash(p.clone()));
    }
    Ok(sig)
}

/// Builds `Aᵍ` for a closed, function-free sentence `a`.
pub fn translate_finite_validity(a: &Formula) -> Result<Translation, ReductionError> {
    check_source(a)?;
    let mut used: BTreeSet<String> = a.names();
    used.extend(RESERVED_SYMBOLS.iter().map(|s| s.to_string()));
    let witness = if used.contains("w") { fresh_name("w", &used) } else { "w".to_string() };
    let relativized = relativize(a, &witness);

    let order = order_axioms();
    let level = level_axiom();
    let (c1, c2) = (Term::constant("c1"), Term::constant("c2"));
    let mut conjuncts = order.clone();
    conjuncts.extend([member(c1.clone(), zero()), member(c2.clone(), zero()), precedes(c2, c1), level.clone()]);
    let antecedent = Formula::conjunction(conjuncts);
    let consequent = Formula::or(relativized.clone(), Formula::exists("u", Formula::atom("P", vec![var("u")])));
    Ok(Translation {
        source: a.clone(),
        formula: Formula::implies(antecedent.clone(), consequent.clone()),
        antecedent,
        consequent,
        order_axioms: order,
        level_axiom: level,
        relativized,
    })
}

/// Prenex form of `Aᵍ`: the prefix of `B` dualized, then `ex u`, then the
/// prefix of the classical part, over `B₀ -> (A₁ | P(u))`.
pub fn prenexify_translation(t: &Translation) -> Result<PrenexFormula, ReductionError> {
    let whole = t.formula.rename_apart();
    let (b, rest) = match &whole {
        Formula::Implies(b, rest) => (b, rest),
        _ => unreachable!("translation is an implication"),
    };
    let (a_prime, u, pu) = match &**rest {
        Formula::Or(a, e) => match &**e {
            Formula::Exists(u, pu) => (a, u, pu),
            _ => unreachable!("consequent ends in ex u P(u)"),
        },
        _ => unreachable!("consequent is a disjunction"),
    };
    let b = to_prenex(b, Regime::Safe)?;
    // Every atom of A' is double-negated, so all its subformulas are
    // two-valued and the classical shifts are sound.
    let a0 = to_prenex(a_prime, Regime::GUp)?;
    let mut prefix: Vec<_> = b.prefix.iter().map(|(q, v)| (q.dual(), v.clone())).collect();
    prefix.push((crate::syntax::Quantifier::Exists, u.clone()));
    prefix.extend(a0.prefix.iter().cloned());
    let matrix = Formula::implies(b.matrix, Formula::or(a0.matrix, (**pu).clone()));
    Ok(PrenexFormula { prefix, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn shapes() {
        let a = parse_formula("all v Q(v)").unwrap();
        let t = translate_finite_validity(&a).unwrap();
        assert_eq!(t.relativized.to_string(), "all v (ex w ~~L(w,v) -> ~~Q(v))");
        assert!(t.formula.is_closed());
        assert_eq!(t.order_axioms.len(), 5);
        let p = prenexify_translation(&t).unwrap();
        assert!(p.matrix.is_quantifier_free());
        let names: BTreeSet<_> = p.prefix.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(names.len(), p.prefix.len());
    }

    #[test]
    fn rejected_sources() {
        let clash = parse_formula("all x P(x)").unwrap();
        assert_eq!(translate_finite_validity(&clash), Err(ReductionError::SymbolClash("P".into())));
        let func = parse_formula("all x E(f(x), x)").unwrap();
        assert!(matches!(translate_finite_validity(&func), Err(ReductionError::FunctionSymbol(_))));
        let open = Formula::atom("E", vec![Term::var("x")]);
        assert!(matches!(translate_finite_validity(&open), Err(ReductionError::NotClosed(_))));
    }

    #[test]
    fn witness_variable_avoids_source_names() {
        let a = parse_formula("all w Q(w)").unwrap();
        let t = translate_finite_validity(&a).unwrap();
        assert!(t.relativized.to_string().contains("ex w1 ~~L(w1,w)"), "{}", t.relativized);
    }
}
