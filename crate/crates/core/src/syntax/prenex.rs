use std::fmt;

use super::formula::{Formula, Quantifier};

/// Quantifier prefix over a quantifier-free matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrenexFormula {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Formula,
}

/// Which quantifier shifts [`to_prenex`] may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Regime {
    /// Shifts valid in every Gödel logic, including `∀x A(x) ∨ B ⊣⊢ ∀x (A(x) ∨ B)`.
    Safe,
    /// Additionally `(A → ∃x B(x)) → ∃x (A → B(x))` and
    /// `(∀x A(x) → B) → ∃x (A(x) → B)`, valid when 1 is not isolated from below.
    GUp,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shift {
    /// Existential out of a consequent.
    S2,
    /// Universal out of an antecedent.
    S3,
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shift::S2 => write!(f, "S2 (A -> ex x B) => ex x (A -> B)"),
            Shift::S3 => write!(f, "S3 (all x A -> B) => ex x (A -> B)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrenexError {
    #[error("cannot move the quantifier of `{subformula}` outward without shift {shift}")]
    NotPrenexable { subformula: Formula, shift: Shift },
    #[error("matrix is not quantifier-free: {0}")]
    NotPrenex(Formula),
}

impl PrenexFormula {
    /// Splits a formula that is already in prenex form.
    pub fn from_formula(f: &Formula) -> Result<PrenexFormula, PrenexError> {
        let mut prefix = Vec::new();
        let mut cur = f;
        while let Formula::Forall(v, body) | Formula::Exists(v, body) = cur {
            prefix.push((cur.quantifier().expect("quantifier node"), v.clone()));
            cur = body;
        }
        if !cur.is_quantifier_free() {
            return Err(PrenexError::NotPrenex(f.clone()));
        }
        Ok(PrenexFormula { prefix, matrix: cur.clone() })
    }

    pub fn to_formula(&self) -> Formula {
        self.prefix.iter().rev().fold(self.matrix.clone(), |acc, (q, v)| Formula::quantified(*q, v.clone(), acc))
    }

    pub fn is_existential(&self) -> bool {
        self.prefix.iter().all(|(q, _)| *q == Quantifier::Exists)
    }

    pub fn vars(&self) -> Vec<String> {
        self.prefix.iter().map(|(_, v)| v.clone()).collect()
    }

    fn suffix_formula(&self, from: usize) -> Formula {
        PrenexFormula { prefix: self.prefix[from..].to_vec(), matrix: self.matrix.clone() }.to_formula()
    }
}

impl fmt::Display for PrenexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// Moves all quantifiers to the front.
///
/// Bound variables are first renamed apart, so no shift needs a side
/// condition. Antecedent quantifiers are pulled before consequent ones.
pub fn to_prenex(f: &Formula, regime: Regime) -> Result<PrenexFormula, PrenexError> {
    pull(&f.rename_apart(), regime)
}

fn pull(f: &Formula, regime: Regime) -> Result<PrenexFormula, PrenexError> {
    match f {
        Formula::Atom(..) | Formula::Bottom | Formula::Top => {
            Ok(PrenexFormula { prefix: Vec::new(), matrix: f.clone() })
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let mut inner = pull(body, regime)?;
            inner.prefix.insert(0, (f.quantifier().expect("quantifier node"), v.clone()));
            Ok(inner)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let pa = pull(a, regime)?;
            let pb = pull(b, regime)?;
            let matrix = match f {
                Formula::And(..) => Formula::and(pa.matrix, pb.matrix),
                _ => Formula::or(pa.matrix, pb.matrix),
            };
            let prefix = pa.prefix.into_iter().chain(pb.prefix).collect();
            Ok(PrenexFormula { prefix, matrix })
        }
        Formula::Implies(a, b) => {
            let pa = pull(a, regime)?;
            let pb = pull(b, regime)?;
            if regime == Regime::Safe {
                if let Some(i) = pa.prefix.iter().position(|(q, _)| *q == Quantifier::Forall) {
                    return Err(PrenexError::NotPrenexable { subformula: pa.suffix_formula(i), shift: Shift::S3 });
                }
                if let Some(i) = pb.prefix.iter().position(|(q, _)| *q == Quantifier::Exists) {
                    return Err(PrenexError::NotPrenexable { subformula: pb.suffix_formula(i), shift: Shift::S2 });
                }
            }
            let prefix = pa.prefix.into_iter().map(|(q, v)| (q.dual(), v)).chain(pb.prefix).collect();
            Ok(PrenexFormula { prefix, matrix: Formula::implies(pa.matrix, pb.matrix) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn safe_antecedent_shift() {
        let f = parse_formula("ex x (ex y A(y) -> A(x))").unwrap();
        let p = to_prenex(&f, Regime::Safe).unwrap();
        assert_eq!(p.to_formula(), parse_formula("ex x all y (A(y) -> A(x))").unwrap());
    }

    #[test]
    fn universal_antecedent_needs_s3() {
        let f = parse_formula("all x A(x) -> B").unwrap();
        match to_prenex(&f, Regime::Safe) {
            Err(PrenexError::NotPrenexable { shift, subformula }) => {
                assert_eq!(shift, Shift::S3);
                assert_eq!(subformula, parse_formula("all x A(x)").unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        let p = to_prenex(&f, Regime::GUp).unwrap();
        assert_eq!(p.to_formula(), parse_formula("ex x (A(x) -> B)").unwrap());
    }

    #[test]
    fn existential_consequent_needs_s2() {
        let f = parse_formula("A -> ex x B(x)").unwrap();
        assert!(matches!(to_prenex(&f, Regime::Safe), Err(PrenexError::NotPrenexable { shift: Shift::S2, .. })));
    }

    #[test]
    fn clashing_binders_are_renamed() {
        let f = parse_formula("all x P(x) | ex x Q(x)").unwrap();
        let p = to_prenex(&f, Regime::Safe).unwrap();
        assert_eq!(p.prefix.len(), 2);
        assert_ne!(p.prefix[0].1, p.prefix[1].1);
        assert!(p.to_formula().is_closed());
    }
}
