//! The `I_v` collapse and transport along order-preserving maps of truth values.

use std::collections::BTreeMap;

use super::interpretation::{EvalError, Interpretation};
use crate::syntax::{Formula, Term};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CollapseError {
    #[error("collapse threshold must be below 1")]
    ThresholdIsOne,
}

/// `I_v`: atom values above `v` become 1, the others are kept.
pub fn collapse_above(i: &Interpretation, v: &Value) -> Result<Interpretation, CollapseError> {
    if v.is_one() {
        return Err(CollapseError::ThresholdIsOne);
    }
    Ok(i.map_values(|x| if x > v { Value::one() } else { x.clone() }))
}

/// A strictly increasing partial map on truth values fixing 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthValueInjection(BTreeMap<Value, Value>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InjectionError {
    #[error("map moves the endpoint {0}; 0 and 1 must be fixed")]
    MovesEndpoint(Value),
    #[error("map is not strictly increasing just above {0}")]
    NotIncreasing(Value),
    #[error("map is undefined on {0}")]
    Undefined(Value),
    #[error("formula is not quantifier-free")]
    Quantified,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl TruthValueInjection {
    /// Validates the pairs; 0 and 1 are added as fixed points.
    pub fn new(pairs: impl IntoIterator<Item = (Value, Value)>) -> Result<TruthValueInjection, InjectionError> {
        let mut map: BTreeMap<Value, Value> = pairs.into_iter().collect();
        for end in [Value::zero(), Value::one()] {
            match map.get(&end) {
                Some(to) if *to != end => return Err(InjectionError::MovesEndpoint(end)),
                _ => {
                    map.insert(end.clone(), end);
                }
            }
        }
        let entries: Vec<(&Value, &Value)> = map.iter().collect();
        for w in entries.windows(2) {
            if w[0].1 >= w[1].1 {
                return Err(InjectionError::NotIncreasing(w[0].0.clone()));
            }
        }
        Ok(TruthValueInjection(map))
    }

    pub fn apply(&self, v: &Value) -> Option<&Value> {
        self.0.get(v)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Value, &Value)> {
        self.0.iter()
    }
}

fn ground_atom_values(f: &Formula, i: &Interpretation) -> Result<Vec<Value>, EvalError> {
    let mut out = Vec::new();
    let mut err = None;
    f.visit_atoms(&mut |p, args: &[Term]| {
        if err.is_some() {
            return;
        }
        match args.iter().map(|a| i.eval_term(a)).collect::<Result<Vec<_>, _>>() {
            Ok(elems) => match i.predicate(p, &elems) {
                Some(v) => out.push(v.clone()),
                None => err = Some(EvalError::UnboundSymbol(p.to_string())),
            },
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Checks `h(I(f)) = I'(f)` where `I'` is `i` with every predicate value
/// passed through `h`. `h` must be defined on the values of the atoms of `f`.
pub fn check_order_invariance(
    f: &Formula,
    i: &Interpretation,
    h: &TruthValueInjection,
) -> Result<bool, InjectionError> {
    if !f.is_quantifier_free() {
        return Err(InjectionError::Quantified);
    }
    for v in ground_atom_values(f, i)? {
        if h.apply(&v).is_none() {
            return Err(InjectionError::Undefined(v));
        }
    }
    let before = i.eval(f)?;
    let transported = i.map_values(|v| h.apply(v).cloned().unwrap_or_else(|| v.clone()));
    let after = transported.eval(f)?;
    Ok(h.apply(&before) == Some(&after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn v(n: i64, d: i64) -> Value {
        Value::ratio(n, d)
    }

    #[test]
    fn collapse_moves_values_above_threshold_to_one() {
        let mut i = Interpretation::new(1).unwrap();
        i.set_proposition("A", v(3, 10));
        i.set_proposition("B", v(8, 10));
        let c = collapse_above(&i, &v(1, 2)).unwrap();
        assert_eq!(c.predicate("A", &[]), Some(&v(3, 10)));
        assert_eq!(c.predicate("B", &[]), Some(&Value::one()));
        assert!(collapse_above(&i, &Value::one()).is_err());
        let f = parse_formula("A -> B").unwrap();
        assert_eq!(i.eval(&f).unwrap(), Value::one());
        let g = parse_formula("B -> A").unwrap();
        assert_eq!(i.eval(&g).unwrap(), v(3, 10));
        assert_eq!(c.eval(&g).unwrap(), v(3, 10));
        let h = parse_formula("B & (A -> A)").unwrap();
        assert_eq!(c.eval(&h).unwrap(), Value::one());
    }

    #[test]
    fn universal_at_threshold() {
        let mut i = Interpretation::new(2).unwrap();
        i.set_predicate("P", 1, vec![v(1, 2), Value::one()]).unwrap();
        let f = parse_formula("all x P(x)").unwrap();
        let c = collapse_above(&i, &v(1, 2)).unwrap();
        assert_eq!(i.eval(&f).unwrap(), v(1, 2));
        assert_eq!(c.eval(&f).unwrap(), v(1, 2));
    }

    #[test]
    fn squaring_preserves_truth_functions() {
        let mut i = Interpretation::new(1).unwrap();
        i.set_proposition("A", v(2, 3));
        i.set_proposition("B", v(1, 4));
        i.set_proposition("C", v(1, 2));
        let sq = |x: &Value| Value::from_rational(x.as_rational() * x.as_rational()).unwrap();
        let h = TruthValueInjection::new(i.atom_values().map(|(_, _, x)| (x.clone(), sq(x)))).unwrap();
        let f = parse_formula("(A -> B) | C").unwrap();
        assert!(check_order_invariance(&f, &i, &h).unwrap());
    }

    #[test]
    fn rejects_non_monotone_maps() {
        let r = TruthValueInjection::new([(v(1, 4), v(3, 4)), (v(1, 2), v(1, 3))]);
        assert!(matches!(r, Err(InjectionError::NotIncreasing(_))));
        let r = TruthValueInjection::new([(Value::one(), v(1, 2))]);
        assert!(matches!(r, Err(InjectionError::MovesEndpoint(_))));
    }
}
