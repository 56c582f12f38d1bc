mod common;

use common::{arb_value, oracle_eval};
use goedelkit::reduction::{
    build_goedel_countermodel, classical_countermodel, default_level_values, level_point_count, member, precedes,
    prenexify_translation, random_translation_interpretation, translate_finite_validity,
};
use goedelkit::semantics::Interpretation;
use goedelkit::syntax::{parse_formula, Term};
use goedelkit::{Execution, Value};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FALSIFIABLE: [&str; 4] = [
    "all x ~~E(x,x)",
    "(ex x E(x,x)) -> all y E(y,y)",
    "(all x ex y E(x,y)) -> ex y all x E(x,y)",
    "ex x Q(x) & ex y ~Q(y)",
];

const FINITELY_VALID: [&str; 3] =
    ["all x (~~E(x,x) -> ~~E(x,x))", "(all x Q(x)) -> ex x Q(x)", "ex x all y (Q(x) -> Q(y))"];

fn v_down_prefix() -> Vec<Value> {
    let mut out = vec![Value::zero()];
    out.extend((2..=7).rev().map(|k| Value::ratio(1, k)));
    out.push(Value::one());
    out
}

proptest! {
    #[test]
    fn precedence_is_strict_order_of_p(p in prop::collection::vec(arb_value(9), 3), x in 0usize..3, y in 0usize..3) {
        prop_assume!(p.iter().all(|v| !v.is_one()));
        let mut i = Interpretation::new(3).unwrap();
        i.set_predicate("P", 1, p.clone()).unwrap();
        i.assign("x", x).unwrap();
        i.assign("y", y).unwrap();
        let v = i.eval(&precedes(Term::var("x"), Term::var("y"))).unwrap();
        prop_assert_eq!(v.is_one(), p[x] < p[y]);
    }

    #[test]
    fn double_negated_atoms_are_two_valued(l in prop::collection::vec(arb_value(7), 4)) {
        let mut i = Interpretation::new(2).unwrap();
        i.set_predicate("L", 2, l).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            i.assign("a", a).unwrap();
            i.assign("b", b).unwrap();
            let v = i.eval(&member(Term::var("a"), Term::var("b"))).unwrap();
            prop_assert!(v.is_zero() || v.is_one());
        }
    }

    #[test]
    fn finitely_valid_sources_give_one(which in 0..FINITELY_VALID.len(), seed in any::<u64>(), domain in 1usize..=2) {
        let t = translate_finite_validity(&parse_formula(FINITELY_VALID[which]).unwrap()).unwrap();
        let p = prenexify_translation(&t).unwrap().to_formula();
        let i = random_translation_interpretation(&mut ChaCha8Rng::seed_from_u64(seed), &t, domain, &v_down_prefix());
        let v = i.eval(&t.formula).unwrap();
        prop_assert!(v.is_one());
        prop_assert_eq!(i.eval(&p).unwrap(), v);
    }

    #[test]
    fn prenex_form_agrees_everywhere(which in 0..FALSIFIABLE.len(), seed in any::<u64>(), domain in 1usize..=2) {
        let t = translate_finite_validity(&parse_formula(FALSIFIABLE[which]).unwrap()).unwrap();
        let p = prenexify_translation(&t).unwrap().to_formula();
        let i = random_translation_interpretation(&mut ChaCha8Rng::seed_from_u64(seed), &t, domain, &v_down_prefix());
        prop_assert_eq!(i.eval(&p).unwrap(), i.eval(&t.formula).unwrap());
    }
}

#[test]
fn countermodels_translate_to_countermodels() {
    let cap = Value::ratio(9, 10);
    for text in FALSIFIABLE {
        let a = parse_formula(text).unwrap();
        let t = translate_finite_validity(&a).unwrap();
        let classical = classical_countermodel(&a, 2, Execution::Sequential).unwrap().expect(text);
        let values = default_level_values(level_point_count(classical.domain()), &cap);
        let cm = build_goedel_countermodel(&t, &classical, &values, &cap).unwrap();
        assert!(cm.antecedent.is_one(), "{text}");
        assert!(cm.value < cap, "{text}");
        assert_eq!(cm.value, *values.last().unwrap(), "{text}: the value is the largest P-value");
        assert_eq!(oracle_eval(&t.formula, &cm.interpretation), cm.value, "{text}");
        // The prenex form has a long prefix; only the smallest models are cheap to evaluate.
        if cm.interpretation.domain() <= 2 {
            let p = prenexify_translation(&t).unwrap().to_formula();
            assert_eq!(cm.interpretation.eval(&p).unwrap(), cm.value, "{text}");
        }
        assert_eq!(cm.levels.len(), classical.domain());
    }
}

#[test]
fn finitely_valid_sources_have_no_small_countermodel() {
    for text in FINITELY_VALID {
        let a = parse_formula(text).unwrap();
        assert!(classical_countermodel(&a, 3, Execution::Sequential).unwrap().is_none(), "{text}");
    }
}

#[test]
fn any_increasing_values_below_the_cap_work() {
    let a = parse_formula("(all x ex y E(x,y)) -> ex y all x E(x,y)").unwrap();
    let t = translate_finite_validity(&a).unwrap();
    let classical = classical_countermodel(&a, 2, Execution::Sequential).unwrap().unwrap();
    let cap = Value::ratio(1, 2);
    let values: Vec<Value> = (1..=4).map(|k| Value::ratio(k, 10)).collect();
    let cm = build_goedel_countermodel(&t, &classical, &values, &cap).unwrap();
    assert!(cm.antecedent.is_one());
    assert_eq!(cm.value, Value::ratio(4, 10));
}
