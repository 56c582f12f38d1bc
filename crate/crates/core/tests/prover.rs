mod common;

use std::collections::BTreeMap;

use common::oracle_eval;
use goedelkit::prover::{
    certificate_json, check_certificate_json, check_outline, prove_formula, prove_prenex, Budget, ProofResult,
    ProverOptions,
};
use goedelkit::semantics::random::{random_interpretation, random_value, FormulaGen};
use goedelkit::semantics::{brute_force_validity, BruteForce, TruthValueSample};
use goedelkit::syntax::{to_prenex, Formula, PrenexFormula, Regime, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_budget() -> ProverOptions {
    ProverOptions { budget: Budget { max_level: 4, max_nodes: 20_000, time_limit: None }, ..ProverOptions::default() }
}

/// Each distinct ground atom becomes its own proposition.
fn propositionalize(f: &Formula) -> Formula {
    let mut names = BTreeMap::new();
    for (p, args) in f.atoms() {
        let key = Formula::atom(p, args.to_vec()).to_string();
        let n = names.len();
        names.entry(key).or_insert(format!("G{n}"));
    }
    f.map_atoms(&|p, args| Formula::prop(names[&Formula::atom(p, args.to_vec()).to_string()].clone()))
}

fn random_prenex(seed: u64) -> PrenexFormula {
    let f = FormulaGen::first_order(4).generate(&mut ChaCha8Rng::seed_from_u64(seed));
    to_prenex(&f, Regime::GUp).unwrap()
}

fn check_result(p: &PrenexFormula, result: &ProofResult, seed: u64) -> Result<(), TestCaseError> {
    match result {
        ProofResult::Valid(proof) => {
            let d = proof.herbrand_disjunction();
            let sig = Signature::of(&d).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in 0..200 {
                let i = random_interpretation(&mut rng, &sig, 1 + k % 3, |r| random_value(r, 20));
                prop_assert!(oracle_eval(&d, &i).is_one(), "{} under {}", d, i.to_json());
            }
            let v5 = TruthValueSample::v_m(5).unwrap();
            prop_assert!(brute_force_validity(&propositionalize(&d), &v5, BruteForce::new(1)).unwrap().is_valid());
            prop_assert!(brute_force_validity(&p.to_formula(), &v5, BruteForce::new(2)).unwrap().is_valid());
            check_outline(&proof.outline, &proof.disjuncts, &proof.prenex.to_formula()).unwrap();
            let cert = certificate_json(&p.to_formula(), result);
            check_certificate_json(&cert.to_string()).unwrap();
        }
        ProofResult::Unknown(u) => {
            prop_assert!(u.candidate.verified());
            prop_assert!(u.candidate.cap < goedelkit::Value::one());
        }
        ProofResult::CountermodelFound(cm) => {
            prop_assert!(!cm.value.is_one());
            prop_assert_eq!(oracle_eval(&p.to_formula(), &cm.interpretation), cm.value.clone());
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_prenex_results_are_sound(seed in any::<u64>()) {
        let p = random_prenex(seed);
        let result = prove_prenex(&p, &small_budget()).unwrap();
        check_result(&p, &result, seed)?;
    }

    #[test]
    fn larger_budgets_keep_valid_results(seed in any::<u64>()) {
        let p = random_prenex(seed);
        if let ProofResult::Valid(small) = prove_prenex(&p, &small_budget()).unwrap() {
            let big = ProverOptions { budget: Budget::levels(6), ..ProverOptions::default() };
            match prove_prenex(&p, &big).unwrap() {
                ProofResult::Valid(large) => prop_assert_eq!(large.instances, small.instances),
                other => prop_assert!(false, "became {}", other.verdict()),
            }
        }
    }
}

#[test]
fn bundled_valid_list_is_proved_and_sound() {
    for (k, f) in goedelkit::corpus::valid().iter().enumerate() {
        let result = prove_formula(f, &ProverOptions::default()).unwrap();
        assert!(result.is_valid(), "{f}");
        let p = match PrenexFormula::from_formula(f) {
            Ok(p) => p,
            Err(_) => to_prenex(f, Regime::Safe).unwrap(),
        };
        check_result(&p, &result, k as u64).unwrap();
    }
}

#[test]
fn bundled_invalid_list_is_never_proved() {
    for f in goedelkit::corpus::invalid() {
        let result = prove_formula(&f, &ProverOptions::default()).unwrap();
        assert!(!result.is_valid(), "{f}");
    }
}

#[test]
fn parallel_and_sequential_agree() {
    use goedelkit::Execution;
    for seed in 0..40 {
        let p = random_prenex(seed);
        let seq = prove_prenex(&p, &small_budget()).unwrap();
        let par = prove_prenex(&p, &ProverOptions { exec: Execution::Parallel, ..small_budget() }).unwrap();
        assert_eq!(seq, par, "{p}");
    }
}
