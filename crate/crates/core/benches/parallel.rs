use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use goedelkit::exec::map_slice;
use goedelkit::prover::{prove_formula, Budget, ProverOptions};
use goedelkit::reduction::{random_translation_interpretation, translate_finite_validity};
use goedelkit::semantics::{brute_force_validity, BruteForce, Interpretation, TruthValueSample};
use goedelkit::syntax::parse_formula;
use goedelkit::{Execution, Value};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn brute_force(c: &mut Criterion) {
    let f = parse_formula("all x all y ((R(x,y) -> R(y,x)) | (R(y,x) -> R(x,y)))").unwrap();
    let v4 = TruthValueSample::v_m(4).unwrap();
    let mut group = c.benchmark_group("brute_force_v4_domain3");
    group.sample_size(10);
    for exec in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| brute_force_validity(&f, &v4, BruteForce::new(3).with_exec(exec)).unwrap())
        });
    }
    group.finish();
}

fn prover(c: &mut Criterion) {
    let f = parse_formula("ex x (P(x) -> all y P(y))").unwrap();
    let mut group = c.benchmark_group("prover_c_up_level6");
    group.sample_size(10);
    for exec in MODES {
        let opts = ProverOptions { budget: Budget::levels(6), exec, ..ProverOptions::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &opts, |b, opts| {
            b.iter(|| prove_formula(&f, opts).unwrap())
        });
    }
    group.finish();
}

fn translation_samples(c: &mut Criterion) {
    let t = translate_finite_validity(&parse_formula("(all x Q(x)) -> ex x Q(x)").unwrap()).unwrap();
    let values: Vec<Value> = [0, 1, 2, 3, 4].iter().map(|&k| Value::ratio(k, 4)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let models: Vec<Interpretation> =
        (0..64).map(|i| random_translation_interpretation(&mut rng, &t, 1 + i % 3, &values)).collect();
    let mut group = c.benchmark_group("translation_samples");
    group.sample_size(10);
    for exec in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| map_slice(exec, &models, |m| m.eval(&t.formula).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, brute_force, prover, translation_samples);
criterion_main!(benches);
