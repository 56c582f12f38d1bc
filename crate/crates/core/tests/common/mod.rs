//! Test oracles and generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use goedelkit::semantics::Interpretation;
use goedelkit::syntax::{Formula, Term};
use goedelkit::Value;
use num::{BigInt, BigRational};
use proptest::prelude::*;

/// Direct recursive Gödel evaluation, written against the textbook clauses
/// and independent of the library evaluator.
pub fn oracle_eval(f: &Formula, i: &Interpretation) -> Value {
    oracle_env(f, i, &mut BTreeMap::new())
}

fn term(t: &Term, i: &Interpretation, env: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::App(name, args) => {
            let args: Vec<usize> = args.iter().map(|a| term(a, i, env)).collect();
            i.function(name, &args).expect("function interpreted")
        }
    }
}

fn oracle_env(f: &Formula, i: &Interpretation, env: &mut BTreeMap<String, usize>) -> Value {
    match f {
        Formula::Bottom => Value::zero(),
        Formula::Top => Value::one(),
        Formula::Atom(p, args) => {
            let args: Vec<usize> = args.iter().map(|a| term(a, i, env)).collect();
            i.predicate(p, &args).expect("predicate interpreted").clone()
        }
        Formula::And(a, b) => oracle_env(a, i, env).min(oracle_env(b, i, env)),
        Formula::Or(a, b) => oracle_env(a, i, env).max(oracle_env(b, i, env)),
        Formula::Implies(a, b) => {
            let (x, y) = (oracle_env(a, i, env), oracle_env(b, i, env));
            if x <= y {
                Value::one()
            } else {
                y
            }
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let saved = env.get(v).copied();
            let mut vals = Vec::new();
            for e in 0..i.domain() {
                env.insert(v.clone(), e);
                vals.push(oracle_env(body, i, env));
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            let forall = matches!(f, Formula::Forall(..));
            if forall {
                vals.into_iter().min().expect("non-empty domain")
            } else {
                vals.into_iter().max().expect("non-empty domain")
            }
        }
    }
}

pub fn rational(p: i64, q: i64) -> Value {
    Value::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q))).unwrap()
}

/// Rationals in `[0,1]` with denominators up to `max_den`.
pub fn arb_value(max_den: i64) -> impl Strategy<Value = Value> {
    (1..=max_den).prop_flat_map(|q| (0..=q).prop_map(move |p| rational(p, q)))
}

/// Quantifier-free formulas over the propositions `A0..A{atoms-1}`.
pub fn arb_qf(atoms: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => (0..atoms).prop_map(|i| Formula::prop(format!("A{i}"))),
        1 => Just(Formula::Bottom),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::not),
        ]
    })
}

/// An interpretation over one element giving `A0..` the listed values.
pub fn propositional(values: &[Value]) -> Interpretation {
    let mut i = Interpretation::new(1).unwrap();
    for (k, v) in values.iter().enumerate() {
        i.set_proposition(&format!("A{k}"), v.clone());
    }
    i
}
