//! Dense countable suborders of perfect kernels.
//!
//! Intervals contribute their interior dyadic points. A Cantor piece
//! contributes points approximating the endpoints of its removed gaps
//! from inside the set: a left gap endpoint `0.w0222...` (or 0) is
//! approached by `w(00)^k` followed by `(02)^ω`, a right endpoint
//! `0.w2000...` (or 1) by `w(22)^k` followed by `(02)^ω`. None of these is a
//! gap endpoint itself, so for the standard set 1/3 and 2/3 never appear.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use super::classify::{classify, Classification};
use super::pieces::{Piece, SymbolicValueSet};
use crate::value::Value;

/// Ternary expansion `0.prefix (period)^ω` with digits in `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryWord {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

fn digits_value(digits: &[u8]) -> BigInt {
    digits.iter().fold(BigInt::zero(), |acc, &d| acc * 3 + BigInt::from(d))
}

impl TernaryWord {
    pub fn value(&self) -> BigRational {
        let scale = num::pow(BigInt::from(3), self.prefix.len());
        let head = BigRational::new(digits_value(&self.prefix), scale.clone());
        if self.period.is_empty() {
            return head;
        }
        let period_scale = num::pow(BigInt::from(3), self.period.len()) - BigInt::one();
        let tail = BigRational::new(digits_value(&self.period), period_scale);
        head + tail / BigRational::from_integer(scale)
    }

    /// Digits over `{0, 2}` only, i.e. a member of the standard Cantor set.
    pub fn is_cantor(&self) -> bool {
        self.prefix.iter().chain(&self.period).all(|&d| d == 0 || d == 2)
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.")?;
        for d in &self.prefix {
            write!(f, "{d}")?;
        }
        if !self.period.is_empty() {
            write!(f, "(")?;
            for d in &self.period {
                write!(f, "{d}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Border-point approximations with prefix length at most `depth`, paired
/// with their prefix length.
pub fn cantor_border_words(depth: usize) -> Vec<(TernaryWord, usize)> {
    let mut out = Vec::new();
    for n in 0..depth {
        for bits in 0u64..(1 << n) {
            let w: Vec<u8> = (0..n).rev().map(|i| if bits >> i & 1 == 1 { 2 } else { 0 }).collect();
            for (pad, allowed_last) in [(0u8, 2u8), (2u8, 0u8)] {
                if w.last().is_some_and(|&d| d != allowed_last) {
                    continue;
                }
                let mut k = 1;
                while n + 2 * k <= depth {
                    let mut prefix = w.clone();
                    prefix.extend(std::iter::repeat_n(pad, 2 * k));
                    out.push((TernaryWord { prefix, period: vec![0, 2] }, n + 2 * k));
                    k += 1;
                }
            }
        }
    }
    out
}

/// A witness point and the generation depth at which it first appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPoint {
    pub value: Value,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("{set} is {class}; only uncountable sets have a dense suborder")]
    NotUncountable { set: String, class: String },
}

fn affine(lo: &BigRational, hi: &BigRational, x: &BigRational) -> BigRational {
    lo + (hi - lo) * x
}

/// Witness points of a single perfect piece, up to `depth`.
pub(crate) fn piece_points(piece: &Piece, depth: usize) -> Vec<(BigRational, usize)> {
    match piece {
        Piece::Interval(lo, hi) if lo < hi => {
            let mut out = Vec::new();
            for d in 1..=depth {
                let den = BigInt::one() << d;
                for j in (1..(1u64 << d)).step_by(2) {
                    out.push((affine(lo, hi, &BigRational::new(BigInt::from(j), den.clone())), d));
                }
            }
            out
        }
        Piece::Cantor(lo, hi) if lo < hi => {
            cantor_border_words(depth).into_iter().map(|(w, d)| (affine(lo, hi, &w.value()), d)).collect()
        }
        _ => Vec::new(),
    }
}

/// Points of a dense suborder of the perfect kernel of `v`, generated to
/// `depth`, ascending and without repetition.
pub fn dense_suborder_points(v: &SymbolicValueSet, depth: usize) -> Result<Vec<WitnessPoint>, WitnessError> {
    let kernel = match classify(v) {
        Classification::Uncountable { kernel, .. } => kernel,
        other => return Err(WitnessError::NotUncountable { set: v.to_string(), class: other.label() }),
    };
    let mut points: Vec<(BigRational, usize)> = kernel.pieces().iter().flat_map(|p| piece_points(p, depth)).collect();
    points.sort();
    points.dedup_by(|a, b| a.0 == b.0);
    Ok(points
        .into_iter()
        .map(|(x, depth)| WitnessPoint { value: Value::from_rational(x).expect("inside a piece"), depth })
        .collect())
}

/// Values of [`dense_suborder_points`].
pub fn dense_suborder_witness(v: &SymbolicValueSet, depth: usize) -> Result<Vec<Value>, WitnessError> {
    Ok(dense_suborder_points(v, depth)?.into_iter().map(|p| p.value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuesets::parse_value_set;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dyadics_for_intervals() {
        let w = dense_suborder_witness(&parse_value_set("[0,1]").unwrap(), 2).unwrap();
        let shown: Vec<String> = w.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["1/4", "1/2", "3/4"]);
    }

    #[test]
    fn border_approximation_of_one_third() {
        // 1/3 = 0.0222...; the first approximation is 0.022(02).
        let b1 = TernaryWord { prefix: vec![0, 2, 2], period: vec![0, 2] };
        assert_eq!(b1.value(), q(11, 36));
        let words = cantor_border_words(3);
        assert!(words.iter().any(|(w, d)| *w == b1 && *d == 3));
        assert!(words.iter().all(|(w, _)| w.is_cantor()));
    }

    #[test]
    fn cantor_witness_is_inside_and_avoids_gap_endpoints() {
        let c = parse_value_set("cantor").unwrap();
        let w = dense_suborder_witness(&c, 6).unwrap();
        assert!(w.iter().all(|v| c.contains_value(v)));
        for bad in [q(1, 3), q(2, 3), q(1, 9), q(0, 1), q(1, 1)] {
            assert!(!w.iter().any(|v| *v.as_rational() == bad));
        }
    }

    #[test]
    fn countable_sets_have_no_witness() {
        assert!(dense_suborder_witness(&parse_value_set("Vdown").unwrap(), 3).is_err());
    }
}
