use num::{BigInt, BigRational, One};
use rand::Rng;

use super::{check_source, ReductionError, Translation};
use crate::exec::Execution;
use crate::semantics::{
    brute_force_validity, random::random_interpretation, BruteForce, BruteForceError, BruteForceResult, Interpretation,
    TruthValueSample,
};
use crate::syntax::Signature;
use crate::value::Value;

/// A Gödel interpretation falsifying `Aᵍ`, built from a finite classical
/// countermodel of the source sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoedelCountermodel {
    pub interpretation: Interpretation,
    /// Members of each non-empty level, level 0 first.
    pub levels: Vec<Vec<usize>>,
    pub antecedent: Value,
    pub consequent: Value,
    pub value: Value,
}

/// Elements placed in `n` levels: two in level 0, and each further level
/// doubles the count (a point inside every gap plus one above the top).
pub fn level_point_count(levels: usize) -> usize {
    1usize << levels
}

/// The `count` largest values `1/k` strictly below `cap`, ascending.
pub fn default_level_values(count: usize, cap: &Value) -> Vec<Value> {
    let cap = cap.as_rational();
    let mut k = BigInt::one();
    while BigRational::new(BigInt::one(), k.clone()) >= *cap {
        k += 1;
    }
    let mut out: Vec<Value> = (0..count)
        .map(|i| {
            let den = &k + BigInt::from(i);
            Value::from_rational(BigRational::new(BigInt::one(), den)).expect("inside [0,1]")
        })
        .collect();
    out.reverse();
    out
}

/// Order keys of the level points in creation order, with their levels.
fn level_points(levels: usize) -> Vec<(BigRational, usize)> {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let mut points = vec![(q(1, 4), 0), (q(1, 2), 0)];
    for level in 1..levels {
        let mut keys: Vec<BigRational> = points.iter().map(|(k, _)| k.clone()).collect();
        keys.sort();
        let mut fresh: Vec<BigRational> = keys.windows(2).map(|w| (&w[0] + &w[1]) / q(2, 1)).collect();
        fresh.push((keys.last().expect("non-empty") + q(1, 1)) / q(2, 1));
        points.extend(fresh.into_iter().map(|k| (k, level)));
    }
    points
}

/// Builds `Iᵍ` from a classical structure (all values 0 or 1) in which the
/// source sentence is false. Its elements become the non-empty levels
/// `0..n`; the domain is cut off at `max(2^n, n + 1)` elements with
/// `s(x) = min(x + 1, N - 1)`. Level points take the first `2^n` entries of
/// `level_values`, which must increase strictly and stay below `cap`.
pub fn build_goedel_countermodel(
    t: &Translation,
    classical: &Interpretation,
    level_values: &[Value],
    cap: &Value,
) -> Result<GoedelCountermodel, ReductionError> {
    let sig = check_source(&t.source)?;
    for (name, _, v) in classical.atom_values() {
        if sig.predicates.contains_key(name) && !v.is_zero() && !v.is_one() {
            return Err(ReductionError::NotClassical(name.to_string()));
        }
    }
    if !classical.eval(&t.source)?.is_zero() {
        return Err(ReductionError::NotFalsified);
    }
    let n = classical.domain();
    let needed = level_point_count(n);
    if level_values.len() < needed {
        return Err(ReductionError::LevelValues { needed, found: level_values.len() });
    }
    let values = &level_values[..needed];
    if values.windows(2).any(|w| w[0] >= w[1]) || values.last().is_some_and(|v| v >= cap) {
        return Err(ReductionError::LevelOrder { cap: cap.clone() });
    }

    let points = level_points(n);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].0.cmp(&points[b].0));
    let mut p_value = vec![Value::zero(); points.len()];
    for (rank, &e) in order.iter().enumerate() {
        p_value[e] = values[rank].clone();
    }
    let mut levels = vec![Vec::new(); n];
    for (e, (_, level)) in points.iter().enumerate() {
        levels[*level].push(e);
    }

    let size = needed.max(n + 1);
    let mut g = Interpretation::new(size)?;
    g.set_predicate_with("P", 1, |x| p_value.get(x[0]).cloned().unwrap_or_else(Value::zero))?;
    g.set_predicate_with("L", 2, |x| {
        let inside = x[1] < n && points.get(x[0]).is_some_and(|(_, l)| *l == x[1]);
        if inside {
            Value::one()
        } else {
            Value::zero()
        }
    })?;
    g.set_predicate_with("Le", 2, |x| if x[0] <= x[1] { Value::one() } else { Value::zero() })?;
    g.set_constant("zero", 0)?;
    g.set_function_with("s", 1, |x| (x[0] + 1).min(size - 1))?;
    // Level 0 holds elements 0 and 1 with P(0) < P(1).
    g.set_constant("c1", 1)?;
    g.set_constant("c2", 0)?;
    for (name, &arity) in &sig.predicates {
        g.set_predicate_with(name, arity, |x| {
            if x.iter().all(|&e| e < n) {
                classical.predicate(name, x).cloned().unwrap_or_else(Value::zero)
            } else {
                Value::zero()
            }
        })?;
    }

    let antecedent = g.eval(&t.antecedent)?;
    let consequent = g.eval(&t.consequent)?;
    let value = g.eval(&t.formula)?;
    Ok(GoedelCountermodel { interpretation: g, levels, antecedent, consequent, value })
}

/// Smallest classical structure (domain up to `max_domain`) falsifying a
/// sentence, by exhaustive search over `{0, 1}`.
pub fn classical_countermodel(
    a: &crate::syntax::Formula,
    max_domain: usize,
    exec: Execution,
) -> Result<Option<Interpretation>, BruteForceError> {
    let two = TruthValueSample::v_m(2).expect("m = 2");
    match brute_force_validity(a, &two, BruteForce::new(max_domain).with_exec(exec))? {
        BruteForceResult::Countermodel { interpretation, .. } => Ok(Some(interpretation)),
        BruteForceResult::Valid { .. } => Ok(None),
    }
}

/// Random interpretation of the translated signature with values from `values`.
pub fn random_translation_interpretation<R: Rng + ?Sized>(
    rng: &mut R,
    t: &Translation,
    domain: usize,
    values: &[Value],
) -> Interpretation {
    let sig = Signature::of(&t.formula).expect("translation signature is consistent");
    random_interpretation(rng, &sig, domain, |r| values[r.gen_range(0..values.len())].clone())
}

#[cfg(test)]
mod tests {
    use super::super::{prenexify_translation, translate_finite_validity};
    use super::*;
    use crate::syntax::parse_formula;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cap() -> Value {
        Value::ratio(9, 10)
    }

    #[test]
    fn level_values_below_cap() {
        let v = default_level_values(4, &cap());
        assert_eq!(v, vec![Value::ratio(1, 5), Value::ratio(1, 4), Value::ratio(1, 3), Value::ratio(1, 2)]);
        assert_eq!(default_level_values(2, &Value::ratio(1, 3)), vec![Value::ratio(1, 5), Value::ratio(1, 4)]);
        assert_eq!(level_points(3).len(), level_point_count(3));
    }

    #[test]
    fn reflexivity_countermodel() {
        let a = parse_formula("all x ~~E(x, x)").unwrap();
        let t = translate_finite_validity(&a).unwrap();
        let classical = classical_countermodel(&a, 2, Execution::Sequential).unwrap().unwrap();
        assert_eq!(classical.domain(), 1);
        let values = default_level_values(level_point_count(1), &cap());
        let cm = build_goedel_countermodel(&t, &classical, &values, &cap()).unwrap();
        assert!(cm.antecedent.is_one());
        assert!(cm.value < cap());
        assert_eq!(cm.value, cm.consequent);
        let p = prenexify_translation(&t).unwrap();
        assert_eq!(cm.interpretation.eval(&p.to_formula()).unwrap(), cm.value);
    }

    #[test]
    fn two_element_countermodel() {
        // Needs two elements: a non-reflexive element and a reflexive one.
        let a = parse_formula("(ex x E(x, x)) -> all y E(y, y)").unwrap();
        let t = translate_finite_validity(&a).unwrap();
        let classical = classical_countermodel(&a, 2, Execution::Sequential).unwrap().unwrap();
        assert_eq!(classical.domain(), 2);
        let values = default_level_values(level_point_count(2), &cap());
        let cm = build_goedel_countermodel(&t, &classical, &values, &cap()).unwrap();
        assert_eq!(cm.levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2]);
        assert!(cm.antecedent.is_one());
        assert!(!cm.value.is_one());
    }

    #[test]
    fn bad_inputs() {
        let a = parse_formula("all x ~~E(x, x)").unwrap();
        let t = translate_finite_validity(&a).unwrap();
        let classical = classical_countermodel(&a, 1, Execution::Sequential).unwrap().unwrap();
        let short = vec![Value::ratio(1, 2)];
        assert!(matches!(
            build_goedel_countermodel(&t, &classical, &short, &cap()),
            Err(ReductionError::LevelValues { needed: 2, found: 1 })
        ));
        let high = vec![Value::ratio(1, 2), Value::ratio(19, 20)];
        assert!(matches!(
            build_goedel_countermodel(&t, &classical, &high, &cap()),
            Err(ReductionError::LevelOrder { .. })
        ));
        let mut wrong = classical.clone();
        wrong.set_predicate("E", 2, vec![Value::one()]).unwrap();
        assert_eq!(
            build_goedel_countermodel(&t, &wrong, &default_level_values(2, &cap()), &cap()),
            Err(ReductionError::NotFalsified)
        );
    }

    #[test]
    fn valid_source_samples_to_one() {
        let a = parse_formula("all x (~~E(x, x) -> ~~E(x, x))").unwrap();
        let t = translate_finite_validity(&a).unwrap();
        let p = prenexify_translation(&t).unwrap().to_formula();
        let values: Vec<Value> =
            [0, 4, 3, 2, 1].iter().map(|&k| if k == 0 { Value::zero() } else { Value::ratio(1, k) }).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let i = random_translation_interpretation(&mut rng, &t, 2, &values);
            let v = i.eval(&t.formula).unwrap();
            assert!(v.is_one());
            assert_eq!(i.eval(&p).unwrap(), v);
        }
    }
}
