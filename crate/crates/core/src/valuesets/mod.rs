//! Symbolic truth-value sets, their Cantor–Bendixson classification and
//! the resulting axiomatizability verdicts.

mod classify;
mod parse;
mod pieces;
mod verdict;
mod witness;

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

pub use classify::{cantor_bendixson, classify, derivative, CantorBendixson, Classification};
pub use parse::{parse_value_set, ValueSetParseError};
pub use pieces::{in_standard_cantor, v_m_points, Family, Piece, SymbolicValueSet};
pub use verdict::{axiomatizability_verdict, characteristic_axiom, Verdict};
pub use witness::{
    cantor_border_words, dense_suborder_points, dense_suborder_witness, TernaryWord, WitnessError, WitnessPoint,
};

use crate::semantics::TruthValueSample;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TruthValueSetError {
    #[error("a truth-value set must contain 0 and 1; {0} does not")]
    MissingEndpoint(String),
    #[error(transparent)]
    Parse(#[from] ValueSetParseError),
}

/// A symbolic closed subset of `[0,1]` containing 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthValueSet {
    set: SymbolicValueSet,
}

/// Deepest witness generation used when looking for values below a cap.
const MAX_SEARCH_DEPTH: usize = 20;

impl TruthValueSet {
    pub fn new(set: SymbolicValueSet) -> Result<TruthValueSet, TruthValueSetError> {
        if !set.contains(&BigRational::zero()) || !set.contains(&BigRational::one()) {
            return Err(TruthValueSetError::MissingEndpoint(set.to_string()));
        }
        Ok(TruthValueSet { set })
    }

    pub fn parse(text: &str) -> Result<TruthValueSet, TruthValueSetError> {
        TruthValueSet::new(parse_value_set(text)?)
    }

    pub fn unit_interval() -> TruthValueSet {
        TruthValueSet { set: SymbolicValueSet::unit_interval() }
    }

    pub fn v_m(m: usize) -> TruthValueSet {
        TruthValueSet::new(SymbolicValueSet::v_m(m.max(2))).expect("V_m contains 0 and 1")
    }

    pub fn set(&self) -> &SymbolicValueSet {
        &self.set
    }

    pub fn classification(&self) -> Classification {
        classify(&self.set)
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.set.contains_value(v)
    }

    /// The members, if there are finitely many.
    pub fn finite_sample(&self) -> Option<TruthValueSample> {
        match self.classification() {
            Classification::Finite(_) => {
                let values = self.set.points().into_iter().map(|x| Value::from_rational(x).expect("in [0,1]"));
                Some(TruthValueSample::new(values).expect("contains 0 and 1"))
            }
            _ => None,
        }
    }

    /// `count` strictly increasing members in the open interval `(0, cap)`,
    /// spread evenly over the candidates found at the smallest sufficient
    /// generation depth; `None` if the set has too few such members.
    pub fn interior_points(&self, cap: &Value, count: usize) -> Option<Vec<Value>> {
        if count == 0 {
            return Some(Vec::new());
        }
        let cap = cap.as_rational();
        let zero = BigRational::zero();
        let inside = |x: &BigRational| *x > zero && x < cap;
        let mut fixed: Vec<BigRational> = Vec::new();
        let mut perfect = Vec::new();
        for p in self.set.pieces() {
            match p {
                Piece::Point(x) if inside(x) => fixed.push(x.clone()),
                Piece::Named(Family::Down) => {
                    // Largest members 1/k below the cap.
                    let k0 = (BigRational::one() / cap).floor().to_integer() + BigInt::one();
                    for i in 0..count {
                        let k = &k0 + BigInt::from(i);
                        let x = BigRational::new(BigInt::one(), k);
                        if inside(&x) {
                            fixed.push(x);
                        }
                    }
                }
                Piece::Named(Family::Up) => {
                    let mut k = 2i64;
                    loop {
                        let x = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(k));
                        if !inside(&x) {
                            break;
                        }
                        fixed.push(x);
                        k += 1;
                    }
                }
                p if p.is_perfect() => {
                    let (lo, _) = p.bounds();
                    if lo < *cap {
                        perfect.push(p.clone());
                    }
                }
                _ => {}
            }
        }
        let mut depth = 0;
        loop {
            let mut candidates = fixed.clone();
            for p in &perfect {
                candidates.extend(witness::piece_points(p, depth).into_iter().map(|(x, _)| x).filter(&inside));
            }
            candidates.sort();
            candidates.dedup();
            if candidates.len() >= count {
                return Some(spread(&candidates, count));
            }
            if perfect.is_empty() || depth >= MAX_SEARCH_DEPTH {
                return None;
            }
            depth += 1;
        }
    }

    /// Largest member below 1, if 1 is isolated from below.
    pub fn largest_below_one(&self) -> Option<Value> {
        match self.classification() {
            Classification::Finite(_) => {
                let points = self.set.points();
                let x = points.iter().rev().find(|x| !x.is_one())?;
                Some(Value::from_rational(x.clone()).expect("in [0,1]"))
            }
            _ => None,
        }
    }

    /// Number of members if finite.
    pub fn finite_size(&self) -> Option<usize> {
        match self.classification() {
            Classification::Finite(n) => Some(n),
            _ => None,
        }
    }
}

/// Picks `count` of the sorted `candidates`, evenly spaced, so that a
/// single value is the median.
fn spread(candidates: &[BigRational], count: usize) -> Vec<Value> {
    let n = candidates.len();
    (0..count)
        .map(|j| {
            let index = ((j + 1) * (n + 1)) / (count + 1) - 1;
            Value::from_rational(candidates[index].clone()).expect("in [0,1]")
        })
        .collect()
}

impl fmt::Display for TruthValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.set)
    }
}

impl std::str::FromStr for TruthValueSet {
    type Err = TruthValueSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TruthValueSet::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64, d: i64) -> Value {
        Value::ratio(n, d)
    }

    #[test]
    fn endpoints_are_required() {
        assert!(TruthValueSet::parse("[0,1/2]").is_err());
        assert!(TruthValueSet::parse("union([0,1/2], point(1))").is_ok());
    }

    #[test]
    fn interior_points_prefer_the_median() {
        let unit = TruthValueSet::unit_interval();
        assert_eq!(unit.interior_points(&v(9, 10), 1).unwrap(), vec![v(1, 2)]);
        let two = unit.interior_points(&v(9, 10), 2).unwrap();
        assert!(two[0] < two[1] && two[1] < v(9, 10));
        assert!(TruthValueSet::v_m(2).interior_points(&v(1, 2), 1).is_none());
        assert_eq!(TruthValueSet::v_m(4).interior_points(&v(5, 6), 2).unwrap(), vec![v(1, 2), v(2, 3)]);
        let down = TruthValueSet::parse("Vdown").unwrap();
        assert_eq!(down.interior_points(&v(9, 10), 2).unwrap(), vec![v(1, 3), v(1, 2)]);
        let cantor = TruthValueSet::parse("cantor").unwrap();
        let pts = cantor.interior_points(&v(9, 10), 5).unwrap();
        assert!(pts.iter().all(|p| cantor.contains(p)));
    }
}
