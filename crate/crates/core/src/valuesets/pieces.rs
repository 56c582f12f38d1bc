use std::collections::HashSet;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::value::Value;

/// Infinite named truth-value families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `{1 - 1/k : k >= 1} ∪ {1}`.
    Up,
    /// `{1/k : k >= 1} ∪ {0}`.
    Down,
}

/// Building block of a symbolic closed subset of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Point(BigRational),
    /// Closed interval `[lo, hi]`.
    Interval(BigRational, BigRational),
    /// Image of the standard Cantor set under `x ↦ lo + (hi - lo) x`.
    Cantor(BigRational, BigRational),
    /// `V_m` with `m` elements.
    Finite(usize),
    Named(Family),
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Members of the standard Cantor set are the rationals with a ternary
/// expansion over `{0, 2}`; the expansion of a rational is eventually
/// periodic, so a repeated remainder ends the search.
pub fn in_standard_cantor(x: &BigRational) -> bool {
    if x.is_negative() || *x > BigRational::one() {
        return false;
    }
    let three = BigRational::from_integer(BigInt::from(3));
    let two = BigRational::from_integer(BigInt::from(2));
    let mut seen = HashSet::new();
    let mut y = x.clone();
    loop {
        if y.is_zero() || y.is_one() || !seen.insert(y.clone()) {
            return true;
        }
        let t = &y * &three;
        if t < BigRational::one() {
            y = t;
        } else if t > two {
            y = t - &two;
        } else {
            // 1/3 = 0.0222... and 2/3 = 0.2 are members; anything strictly between is not.
            return t.is_one() || t == two;
        }
    }
}

fn is_unit_fraction(x: &BigRational) -> bool {
    x.is_positive() && x.numer().is_one()
}

impl Piece {
    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            Piece::Point(p) => p == x,
            Piece::Interval(lo, hi) => lo <= x && x <= hi,
            Piece::Cantor(lo, hi) => {
                if lo == hi {
                    return x == lo;
                }
                lo <= x && x <= hi && in_standard_cantor(&((x - lo) / (hi - lo)))
            }
            Piece::Finite(m) => v_m_points(*m).contains(x),
            Piece::Named(Family::Down) => x.is_zero() || is_unit_fraction(x),
            Piece::Named(Family::Up) => {
                x.is_one() || (*x < BigRational::one() && is_unit_fraction(&(BigRational::one() - x)))
            }
        }
    }

    /// Smallest and largest member.
    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            Piece::Point(p) => (p.clone(), p.clone()),
            Piece::Interval(lo, hi) | Piece::Cantor(lo, hi) => (lo.clone(), hi.clone()),
            Piece::Finite(_) | Piece::Named(_) => (BigRational::zero(), BigRational::one()),
        }
    }

    /// True for pieces without isolated points.
    pub fn is_perfect(&self) -> bool {
        matches!(self, Piece::Interval(lo, hi) | Piece::Cantor(lo, hi) if lo < hi)
    }
}

/// `{0, 1/2, 2/3, ..., (m-2)/(m-1), 1}`.
pub fn v_m_points(m: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for k in 2..m {
        let k = k as i64;
        out.push(q(k - 1, k));
    }
    if m >= 2 {
        out.push(BigRational::one());
    }
    out
}

/// Finite union of pieces, kept in a canonical form: finite families are
/// expanded to points, degenerate intervals become points, touching
/// intervals are merged and points or pieces covered by an interval are
/// dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicValueSet {
    pieces: Vec<Piece>,
}

impl SymbolicValueSet {
    pub fn empty() -> SymbolicValueSet {
        SymbolicValueSet { pieces: Vec::new() }
    }

    pub fn new(pieces: impl IntoIterator<Item = Piece>) -> SymbolicValueSet {
        SymbolicValueSet { pieces: canonical(pieces.into_iter().collect()) }
    }

    pub fn unit_interval() -> SymbolicValueSet {
        SymbolicValueSet::new([Piece::Interval(BigRational::zero(), BigRational::one())])
    }

    pub fn cantor() -> SymbolicValueSet {
        SymbolicValueSet::new([Piece::Cantor(BigRational::zero(), BigRational::one())])
    }

    pub fn v_m(m: usize) -> SymbolicValueSet {
        SymbolicValueSet::new([Piece::Finite(m)])
    }

    pub fn v_up() -> SymbolicValueSet {
        SymbolicValueSet::new([Piece::Named(Family::Up)])
    }

    pub fn v_down() -> SymbolicValueSet {
        SymbolicValueSet::new([Piece::Named(Family::Down)])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    pub fn contains_value(&self, v: &Value) -> bool {
        self.contains(v.as_rational())
    }

    pub fn union(&self, other: &SymbolicValueSet) -> SymbolicValueSet {
        SymbolicValueSet::new(self.pieces.iter().chain(other.pieces.iter()).cloned())
    }

    /// Members that are points, listed without repetition in ascending order.
    pub fn points(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = self
            .pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Point(x) => Some(x.clone()),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn canonical(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut points = Vec::new();
    let mut intervals = Vec::new();
    let mut others = Vec::new();
    for p in pieces {
        match p {
            Piece::Finite(m) => points.extend(v_m_points(m)),
            Piece::Point(x) => points.push(x),
            Piece::Interval(lo, hi) | Piece::Cantor(lo, hi) if lo == hi => points.push(lo),
            Piece::Interval(lo, hi) => intervals.push((lo, hi)),
            other => others.push(other),
        }
    }
    intervals.sort();
    let mut merged: Vec<(BigRational, BigRational)> = Vec::new();
    for (lo, hi) in intervals {
        match merged.last_mut() {
            Some((_, last_hi)) if lo <= *last_hi => {
                if hi > *last_hi {
                    *last_hi = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let covered = |lo: &BigRational, hi: &BigRational| merged.iter().any(|(a, b)| a <= lo && hi <= b);
    let mut out: Vec<Piece> = merged.iter().map(|(lo, hi)| Piece::Interval(lo.clone(), hi.clone())).collect();
    others.sort();
    others.dedup();
    for p in others {
        if let Piece::Cantor(lo, hi) = &p {
            if covered(lo, hi) {
                continue;
            }
        }
        out.push(p);
    }
    points.sort();
    points.dedup();
    for x in points {
        if !out.iter().any(|p| p.contains(&x)) {
            out.push(Piece::Point(x));
        }
    }
    out.sort_by(|a, b| a.bounds().0.cmp(&b.bounds().0).then_with(|| a.cmp(b)));
    out
}

fn write_rational(f: &mut fmt::Formatter<'_>, x: &BigRational) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Point(x) => {
                write!(f, "point(")?;
                write_rational(f, x)?;
                write!(f, ")")
            }
            Piece::Interval(lo, hi) => {
                write!(f, "[")?;
                write_rational(f, lo)?;
                write!(f, ",")?;
                write_rational(f, hi)?;
                write!(f, "]")
            }
            Piece::Cantor(lo, hi) if lo.is_zero() && hi.is_one() => write!(f, "cantor"),
            Piece::Cantor(lo, hi) => {
                write!(f, "cantor(")?;
                write_rational(f, lo)?;
                write!(f, ",")?;
                write_rational(f, hi)?;
                write!(f, ")")
            }
            Piece::Finite(m) => write!(f, "Vm({m})"),
            Piece::Named(Family::Up) => write!(f, "Vup"),
            Piece::Named(Family::Down) => write!(f, "Vdown"),
        }
    }
}

impl fmt::Display for SymbolicValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.iter().all(|p| matches!(p, Piece::Point(_))) {
            write!(f, "{{")?;
            for (i, p) in self.pieces.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                if let Piece::Point(x) = p {
                    write_rational(f, x)?;
                }
            }
            return write!(f, "}}");
        }
        if self.pieces.len() == 1 {
            return write!(f, "{}", self.pieces[0]);
        }
        write!(f, "union(")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_membership() {
        for (n, d) in [(0, 1), (1, 1), (1, 3), (2, 3), (1, 4), (3, 4), (1, 9), (2, 9), (1, 10)] {
            assert!(in_standard_cantor(&q(n, d)), "{n}/{d}");
        }
        for (n, d) in [(1, 2), (4, 9), (5, 9), (2, 5)] {
            assert!(!in_standard_cantor(&q(n, d)), "{n}/{d}");
        }
    }

    #[test]
    fn named_families() {
        let up = Piece::Named(Family::Up);
        let down = Piece::Named(Family::Down);
        assert!(up.contains(&q(0, 1)) && up.contains(&q(2, 3)) && up.contains(&q(1, 1)));
        assert!(!up.contains(&q(1, 3)));
        assert!(down.contains(&q(0, 1)) && down.contains(&q(1, 5)) && down.contains(&q(1, 1)));
        assert!(!down.contains(&q(2, 5)));
    }

    #[test]
    fn canonical_form_merges_and_absorbs() {
        let s = SymbolicValueSet::new([
            Piece::Interval(q(1, 2), q(3, 4)),
            Piece::Interval(q(0, 1), q(1, 2)),
            Piece::Point(q(1, 3)),
            Piece::Point(q(1, 1)),
            Piece::Cantor(q(0, 1), q(1, 4)),
        ]);
        assert_eq!(s.to_string(), "union([0,3/4], point(1))");
        assert_eq!(SymbolicValueSet::v_m(3).to_string(), "{0, 1/2, 1}");
    }
}
