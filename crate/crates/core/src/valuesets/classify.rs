//! Cantor–Bendixson analysis on the piece algebra.

use std::fmt;

use num::{BigRational, One, Zero};

use super::pieces::{Family, Piece, SymbolicValueSet};

/// Accumulation points of `v`. Intervals and Cantor pieces are perfect,
/// `Vup` accumulates only at 1, `Vdown` only at 0 and points contribute nothing.
pub fn derivative(v: &SymbolicValueSet) -> SymbolicValueSet {
    SymbolicValueSet::new(v.pieces().iter().filter_map(|p| match p {
        Piece::Interval(..) | Piece::Cantor(..) if p.is_perfect() => Some(p.clone()),
        Piece::Named(Family::Up) => Some(Piece::Point(BigRational::one())),
        Piece::Named(Family::Down) => Some(Piece::Point(BigRational::zero())),
        _ => None,
    }))
}

/// The derivative sequence `v, v', v'', ...` up to its fixpoint, the perfect kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorBendixson {
    pub derivatives: Vec<SymbolicValueSet>,
}

impl CantorBendixson {
    pub fn kernel(&self) -> &SymbolicValueSet {
        self.derivatives.last().expect("at least the input")
    }

    /// Number of derivative steps until the fixpoint.
    pub fn rank(&self) -> usize {
        self.derivatives.len() - 1
    }
}

pub fn cantor_bendixson(v: &SymbolicValueSet) -> CantorBendixson {
    let mut derivatives = vec![v.clone()];
    loop {
        let next = derivative(derivatives.last().expect("non-empty"));
        if &next == derivatives.last().expect("non-empty") {
            return CantorBendixson { derivatives };
        }
        derivatives.push(next);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Finite(usize),
    CountablyInfinite,
    /// `kernel ∪ countable = input`; the kernel has no isolated points.
    Uncountable {
        kernel: SymbolicValueSet,
        countable: SymbolicValueSet,
    },
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::Finite(n) => format!("finite({n})"),
            Classification::CountablyInfinite => "countably-infinite".into(),
            Classification::Uncountable { .. } => "uncountable".into(),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Uncountable { kernel, countable } if !countable.is_empty() => {
                write!(f, "uncountable (perfect kernel {kernel}, countable part {countable})")
            }
            Classification::Uncountable { kernel, .. } => write!(f, "uncountable (perfect kernel {kernel})"),
            other => write!(f, "{}", other.label()),
        }
    }
}

pub fn classify(v: &SymbolicValueSet) -> Classification {
    let cb = cantor_bendixson(v);
    let kernel = cb.kernel().clone();
    if !kernel.is_empty() {
        let countable = SymbolicValueSet::new(v.pieces().iter().filter(|p| !p.is_perfect()).cloned());
        return Classification::Uncountable { kernel, countable };
    }
    if v.pieces().iter().any(|p| matches!(p, Piece::Named(_))) {
        Classification::CountablyInfinite
    } else {
        Classification::Finite(v.points().len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuesets::parse_value_set;

    fn class(text: &str) -> Classification {
        classify(&parse_value_set(text).unwrap())
    }

    #[test]
    fn table() {
        assert_eq!(class("Vm(4)"), Classification::Finite(4));
        assert_eq!(class("Vdown"), Classification::CountablyInfinite);
        assert_eq!(class("Vup"), Classification::CountablyInfinite);
        match class("union([0,1/2], point(3/4), point(1))") {
            Classification::Uncountable { kernel, countable } => {
                assert_eq!(kernel.to_string(), "[0,1/2]");
                assert_eq!(countable.to_string(), "{3/4, 1}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn ranks() {
        let v = parse_value_set("union(Vdown, Vup)").unwrap();
        assert_eq!(cantor_bendixson(&v).rank(), 2);
        let c = parse_value_set("cantor").unwrap();
        assert_eq!(cantor_bendixson(&c).rank(), 0);
    }

    #[test]
    fn kernel_is_idempotent() {
        if let Classification::Uncountable { kernel, .. } = class("union(cantor(0,1/3), Vdown, [1/2,1])") {
            match classify(&kernel) {
                Classification::Uncountable { kernel: again, countable } => {
                    assert_eq!(again, kernel);
                    assert!(countable.is_empty());
                }
                other => panic!("unexpected {other}"),
            }
        } else {
            panic!("expected uncountable");
        }
    }
}
