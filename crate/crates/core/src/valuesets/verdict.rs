use std::fmt;

use super::classify::Classification;
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The prenex fragment is axiomatized by LC plus the quantifier rules
    /// (generalization, existential introduction and the two distribution
    /// rules for disjunction), and for `m` values the axiom `G_m`.
    Axiomatizable {
        characteristic_axiom: Option<(usize, Formula)>,
    },
    NotAxiomatizable {
        reason: String,
    },
}

impl Verdict {
    pub fn is_axiomatizable(&self) -> bool {
        matches!(self, Verdict::Axiomatizable { .. })
    }
}

/// `⋁_{i=1}^{m} ⋁_{j=i+1}^{m+1} ((A_i → A_j) ∧ (A_j → A_i))`: among `m+1`
/// propositions two have equal value, which holds exactly when at most `m`
/// values are available.
pub fn characteristic_axiom(m: usize) -> Formula {
    let atom = |i: usize| Formula::prop(format!("A{i}"));
    let mut disjuncts = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m + 1 {
            disjuncts.push(Formula::and(Formula::implies(atom(i), atom(j)), Formula::implies(atom(j), atom(i))));
        }
    }
    Formula::disjunction(disjuncts).unwrap_or(Formula::Bottom)
}

pub fn axiomatizability_verdict(c: &Classification) -> Verdict {
    match c {
        Classification::Finite(m) => {
            Verdict::Axiomatizable { characteristic_axiom: Some((*m, characteristic_axiom(*m))) }
        }
        Classification::Uncountable { .. } => Verdict::Axiomatizable { characteristic_axiom: None },
        Classification::CountablyInfinite => Verdict::NotAxiomatizable {
            reason: "validity of prenex formulas over a countably infinite truth-value set encodes \
                     classical validity in all finite structures, which is not recursively enumerable"
                .into(),
        },
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Axiomatizable { characteristic_axiom: Some((m, _)) } => {
                write!(f, "prenex fragment axiomatizable: LC + quantifier rules + characteristic axiom G{m}")
            }
            Verdict::Axiomatizable { characteristic_axiom: None } => {
                write!(f, "prenex fragment axiomatizable: LC + quantifier rules")
            }
            Verdict::NotAxiomatizable { .. } => write!(f, "prenex fragment NOT axiomatizable"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{brute_force_validity, BruteForce, TruthValueSample};

    #[test]
    fn characteristic_axiom_separates_m_from_m_plus_one() {
        for m in 2..=4 {
            let g = characteristic_axiom(m);
            let ok = brute_force_validity(&g, &TruthValueSample::v_m(m).unwrap(), BruteForce::new(1)).unwrap();
            assert!(ok.is_valid(), "G{m} over V{m}");
            let bad = brute_force_validity(&g, &TruthValueSample::v_m(m + 1).unwrap(), BruteForce::new(1)).unwrap();
            assert!(!bad.is_valid(), "G{m} over V{}", m + 1);
        }
    }

    #[test]
    fn verdict_map() {
        assert!(axiomatizability_verdict(&Classification::Finite(4)).is_axiomatizable());
        assert!(!axiomatizability_verdict(&Classification::CountablyInfinite).is_axiomatizable());
        assert_eq!(
            axiomatizability_verdict(&Classification::CountablyInfinite).to_string(),
            "prenex fragment NOT axiomatizable"
        );
    }
}
