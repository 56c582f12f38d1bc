use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context as _, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use goedelkit::exec::map_slice;
use goedelkit::prover::{certificate_json, finite_counter_search, prove_formula, Budget, ProofResult, ProverOptions};
use goedelkit::reduction::{
    abbreviations, build_goedel_countermodel, classical_countermodel, default_level_values, level_point_count,
    prenexify_translation, random_translation_interpretation, translate_finite_validity,
};
use goedelkit::semantics::{brute_force_validity, BruteForce, Interpretation, TruthValueSample};
use goedelkit::syntax::{
    formula_lines, herbrand_form, parse_formula, to_prenex, Enumeration, Formula, MatrixTemplate, PrenexFormula, Regime,
};
use goedelkit::valuesets::{axiomatizability_verdict, cantor_bendixson, dense_suborder_witness, TruthValueSet};
use goedelkit::{Execution, Value};

use crate::report::{Report, EXIT_NEGATIVE, EXIT_OK, EXIT_UNKNOWN};
use crate::{Command, Input, ProverArgs};

pub struct Context {
    pub exec: Execution,
    pub seed: u64,
}

#[cfg(feature = "parallel")]
pub fn init_pool(jobs: usize) {
    // Fails only if a pool already exists, which is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
}

#[cfg(not(feature = "parallel"))]
pub fn init_pool(_jobs: usize) {}

pub fn run(cmd: &Command, ctx: &Context) -> Result<Report> {
    match cmd {
        Command::Eval { input, interp } => eval(input, interp),
        Command::Prove { input, prover } => prove(input, prover, ctx),
        Command::Herbrand { input, depth } => herbrand(input, *depth),
        Command::Counter { input, max_m, max_domain } => counter(input, *max_m, *max_domain, ctx),
        Command::Classify { vset } => classify(vset),
        Command::Witness { vset, depth } => witness(vset, *depth),
        Command::Translate { input, max_domain, samples, prenex } => {
            translate(input, *max_domain, *samples, *prenex, ctx)
        }
        Command::Corpus { prover, max_m, max_domain } => corpus(prover, *max_m, *max_domain, ctx),
    }
}

fn read_inputs(input: &Input) -> Result<Vec<Formula>> {
    match (&input.formula, &input.file) {
        (Some(_), Some(_)) => bail!("give either a formula or --file, not both"),
        (None, None) => bail!("no formula given"),
        (Some(text), None) => Ok(vec![parse_formula(text).with_context(|| format!("cannot parse `{text}`"))?]),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let mut out = Vec::new();
            for (n, line) in formula_lines(&text) {
                out.push(parse_formula(line).with_context(|| format!("{}:{n}", path.display()))?);
            }
            if out.is_empty() {
                bail!("{} contains no formulas", path.display());
            }
            Ok(out)
        }
    }
}

fn single(input: &Input) -> Result<Formula> {
    let mut fs = read_inputs(input)?;
    if fs.len() != 1 {
        bail!("expected one formula, found {}", fs.len());
    }
    Ok(fs.remove(0))
}

fn prover_options(args: &ProverArgs, ctx: &Context) -> Result<ProverOptions> {
    let vset = TruthValueSet::parse(&args.vset).with_context(|| format!("bad --vset `{}`", args.vset))?;
    let budget = Budget { max_level: args.budget_level, max_nodes: args.budget_nodes, time_limit: None };
    Ok(ProverOptions { vset, budget, exec: ctx.exec })
}

fn eval(input: &Input, interp: &Path) -> Result<Report> {
    let text = fs::read_to_string(interp).with_context(|| format!("cannot read {}", interp.display()))?;
    let model = Interpretation::from_json(&text)?;
    let formulas = read_inputs(input)?;
    let values = formulas.iter().map(|f| model.eval(f)).collect::<Result<Vec<_>, _>>()?;
    if let [v] = values.as_slice() {
        let mut r = Report::new("eval", v.to_string(), EXIT_OK);
        r.set("value", json!(v.to_string()));
        return Ok(r);
    }
    let mut r = Report::new("eval", "ok", EXIT_OK);
    for (f, v) in formulas.iter().zip(&values) {
        r.line(format!("{v}\t{f}"));
    }
    r.set(
        "results",
        formulas.iter().zip(&values).map(|(f, v)| json!({"formula": f.to_string(), "value": v.to_string()})).collect(),
    );
    Ok(r)
}

fn exit_of(result: &ProofResult) -> u8 {
    match result {
        ProofResult::Valid(_) => EXIT_OK,
        ProofResult::CountermodelFound(_) => EXIT_NEGATIVE,
        ProofResult::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn describe(result: &ProofResult, r: &mut Report) {
    match result {
        ProofResult::Valid(p) => {
            r.line(format!("prenex: {}", p.prenex));
            r.line(format!("herbrand form: {}", p.herbrand.formula));
            for (t, d) in p.instances.iter().zip(&p.disjuncts) {
                let terms: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                r.line(format!("instance ({}): {d}", terms.join(", ")));
            }
            r.line(format!("outline: {} steps", p.outline.len()));
            for s in &p.outline.steps {
                r.line(format!("  {} {}  =>  {}", s.rule, s.from, s.to));
            }
            r.line(format!("stats: nodes={} leaves={} max_level={}", p.stats.nodes, p.stats.leaves, p.stats.max_level));
        }
        ProofResult::Unknown(u) => {
            let c = &u.candidate;
            r.line(format!("herbrand form: {}", u.herbrand.formula));
            r.line(format!("stopped: {} with {} open nodes", u.reason.label(), u.open_nodes));
            r.line(format!("candidate constraint: {}", c.render_constraint()));
            for (a, v) in c.atoms.iter().zip(&c.values) {
                r.line(format!("  {a} = {v}"));
            }
            r.line(format!(
                "checked {} instances, largest value {} (cap {}){}",
                c.checked_instances,
                c.max_instance_value,
                c.cap,
                if c.verified() { "" } else { ", NOT below the cap" }
            ));
        }
        ProofResult::CountermodelFound(cm) => {
            r.line(format!("value: {} with {} truth values", cm.value, cm.m));
            r.line(format!("interpretation: {}", cm.interpretation.to_json()));
        }
    }
}

fn prove(input: &Input, args: &ProverArgs, ctx: &Context) -> Result<Report> {
    let opts = prover_options(args, ctx)?;
    let formulas = read_inputs(input)?;
    let mut results = Vec::new();
    for f in &formulas {
        results.push(prove_formula(f, &opts).with_context(|| format!("cannot prove `{f}`"))?);
    }
    if let ([f], [result]) = (formulas.as_slice(), results.as_slice()) {
        let mut r = Report::new("prove", result.verdict(), exit_of(result));
        describe(result, &mut r);
        r.set("certificate", certificate_json(f, result));
        return Ok(r);
    }
    let worst = results.iter().max_by_key(|r| exit_of(r)).expect("non-empty");
    let mut r = Report::new("prove", worst.verdict(), exit_of(worst));
    for (f, result) in formulas.iter().zip(&results) {
        r.line(format!("{}\t{f}", result.verdict()));
    }
    r.set("certificates", formulas.iter().zip(&results).map(|(f, res)| certificate_json(f, res)).collect());
    Ok(r)
}

fn prenex_of(f: &Formula) -> Result<PrenexFormula> {
    match PrenexFormula::from_formula(f) {
        Ok(p) => Ok(p),
        Err(_) => Ok(to_prenex(f, Regime::Safe)?),
    }
}

fn herbrand(input: &Input, depth: usize) -> Result<Report> {
    const SHOWN: usize = 50;
    let f = single(input)?;
    let prenex = prenex_of(&f)?;
    let h = herbrand_form(&prenex);
    let hf = h.formula.to_formula();
    let mut en = Enumeration::for_formula(&hf)?;
    let template = MatrixTemplate::new(&h.formula.matrix, &h.formula.vars(), &en)?;
    let tuples = template.ell_instances(depth, &mut en);
    let atoms: Vec<Formula> = (0..depth.min(en.atom_count())).map(|i| en.atom_formula(i)).collect();
    let instances: Vec<Formula> = tuples.iter().map(|t| template.instantiate(t, &mut en)).collect();

    let mut r = Report::new("herbrand", "ok", EXIT_OK);
    r.line(format!("prenex: {prenex}"));
    r.line(format!("herbrand form: {hf}"));
    for s in &h.skolems {
        r.line(format!("skolem: {} for {}", s.term(), s.var));
    }
    if !en.added_symbols().is_empty() {
        r.line(format!("added symbols: {}", en.added_symbols().join(", ")));
    }
    let terms: Vec<String> = en.terms().iter().map(|t| t.to_string()).collect();
    r.line(format!("terms: {}", terms.join(", ")));
    for (i, a) in atoms.iter().enumerate() {
        r.line(format!("atom {i}: {a}"));
    }
    r.line(format!("{}-instances: {}", depth, instances.len()));
    for d in instances.iter().take(SHOWN) {
        r.line(format!("  {d}"));
    }
    if instances.len() > SHOWN {
        r.line(format!("  ... {} more", instances.len() - SHOWN));
    }
    r.set("prenex", json!(prenex.to_string()));
    r.set("herbrand_form", json!(hf.to_string()));
    r.set("terms", json!(terms));
    r.set("atoms", atoms.iter().map(|a| a.to_string()).collect());
    r.set("instances", instances.iter().map(|d| d.to_string()).collect());
    Ok(r)
}

fn counter(input: &Input, max_m: usize, max_domain: usize, ctx: &Context) -> Result<Report> {
    let f = single(input)?;
    if max_m < 2 || max_domain == 0 {
        bail!("--max-m must be at least 2 and --max-domain at least 1");
    }
    match finite_counter_search(&f, max_m, max_domain, ctx.exec)? {
        Some(cm) => {
            let mut r = Report::new("counter", "countermodel", EXIT_NEGATIVE);
            r.line(format!("m: {}", cm.m));
            r.line(format!("value: {}", cm.value));
            r.line(format!("interpretation: {}", cm.interpretation.to_json()));
            r.set("m", json!(cm.m));
            r.set("value", json!(cm.value.to_string()));
            r.set("interpretation", cm.interpretation.to_json());
            Ok(r)
        }
        None => {
            let mut r = Report::new("counter", "no-countermodel", EXIT_OK);
            r.line(format!("none over V_m for m <= {max_m}, domains up to {max_domain}"));
            Ok(r)
        }
    }
}

fn parse_vset(text: &str) -> Result<TruthValueSet> {
    TruthValueSet::parse(text).with_context(|| format!("bad truth-value set `{text}`"))
}

fn classify(text: &str) -> Result<Report> {
    let v = parse_vset(text)?;
    let class = v.classification();
    let verdict = axiomatizability_verdict(&class);
    let cb = cantor_bendixson(v.set());
    let mut r = Report::new("classify", format!("{}; {}", class.label(), verdict), EXIT_OK);
    r.line(format!("set: {}", v.set()));
    r.line(format!("class: {class}"));
    r.line(format!("Cantor-Bendixson rank: {}", cb.rank()));
    if let goedelkit::valuesets::Verdict::Axiomatizable { characteristic_axiom: Some((m, g)) } = &verdict {
        r.line(format!("G{m}: {g}"));
    }
    r.set("set", json!(v.set().to_string()));
    r.set("class", json!(class.label()));
    r.set("axiomatizable", json!(verdict.is_axiomatizable()));
    r.set("rank", json!(cb.rank()));
    Ok(r)
}

fn witness(text: &str, depth: usize) -> Result<Report> {
    let v = parse_vset(text)?;
    match dense_suborder_witness(v.set(), depth) {
        Ok(points) => {
            let shown: Vec<String> = points.iter().map(|p| p.to_string()).collect();
            let mut r = Report::new("witness", "ok", EXIT_OK);
            r.line(format!("{} points to depth {depth}", points.len()));
            r.line(shown.join(", "));
            r.set("points", json!(shown));
            Ok(r)
        }
        Err(e) => {
            let mut r = Report::new("witness", "no-dense-suborder", EXIT_NEGATIVE);
            r.line(e.to_string());
            r.set("error", json!(e.to_string()));
            Ok(r)
        }
    }
}

/// `{0, 1/k, ..., 1/2, 1}`: a truncation of V↓.
fn truncated_v_down(k: i64) -> Vec<Value> {
    let mut out = vec![Value::zero()];
    out.extend((2..=k).rev().map(|d| Value::ratio(1, d)));
    out.push(Value::one());
    out
}

/// Largest number of prefix assignments spent re-evaluating the prenex form.
const PRENEX_CHECK_BUDGET: f64 = (1u64 << 22) as f64;

fn prenex_checkable(p: &PrenexFormula, domain: usize) -> bool {
    (domain as f64).powi(p.prefix.len() as i32) <= PRENEX_CHECK_BUDGET
}

fn translate(input: &Input, max_domain: usize, samples: usize, prenex: bool, ctx: &Context) -> Result<Report> {
    let a = single(input)?;
    let t = translate_finite_validity(&a)?;
    let p = prenexify_translation(&t)?;
    let mut lines = vec![format!("A^g: {}", t.formula)];
    if prenex {
        lines.push(format!("prenex: {p}"));
    }
    for (short, long) in abbreviations() {
        lines.push(format!("  {short} := {long}"));
    }
    let pf = p.to_formula();

    let (mut r, ante, cons, value) = match classical_countermodel(&a, max_domain, ctx.exec)? {
        Some(classical) => {
            let cap = Value::ratio(9, 10);
            let values = default_level_values(level_point_count(classical.domain()), &cap);
            let cm = build_goedel_countermodel(&t, &classical, &values, &cap)?;
            let checked = prenex_checkable(&p, cm.interpretation.domain());
            if checked {
                let prenex_value = cm.interpretation.eval(&pf)?;
                if prenex_value != cm.value {
                    return Err(anyhow!("prenex form disagrees: {prenex_value} vs {}", cm.value));
                }
            }
            let verdict = if cm.value.is_one() { "no-countermodel" } else { "countermodel" };
            let mut r = Report::new("translate", verdict, if cm.value.is_one() { EXIT_OK } else { EXIT_NEGATIVE });
            let n = classical.domain();
            r.line(format!("classical countermodel with {n} element{}", if n == 1 { "" } else { "s" }));
            r.set("interpretation", cm.interpretation.to_json());
            r.set("prenex_checked", json!(usize::from(checked)));
            (r, cm.antecedent, cm.consequent, cm.value)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let values = truncated_v_down(6);
            let models: Vec<Interpretation> = (0..samples)
                .map(|i| random_translation_interpretation(&mut rng, &t, 1 + i % (max_domain + 1), &values))
                .collect();
            let evals =
                map_slice(ctx.exec, &models, |m| -> Result<(Value, Option<Value>, Value, Value), anyhow::Error> {
                    let whole = m.eval(&t.formula)?;
                    let prenex = if prenex_checkable(&p, m.domain()) { Some(m.eval(&pf)?) } else { None };
                    Ok((whole, prenex, m.eval(&t.antecedent)?, m.eval(&t.consequent)?))
                });
            let evals = evals.into_iter().collect::<Result<Vec<_>>>()?;
            if let Some(bad) = evals.iter().position(|e| e.1.as_ref().is_some_and(|v| *v != e.0)) {
                return Err(anyhow!("prenex form disagrees on sample {bad}"));
            }
            let checked = evals.iter().filter(|e| e.1.is_some()).count();
            let worst = (0..evals.len()).min_by(|&i, &j| evals[i].0.cmp(&evals[j].0));
            let (verdict, exit) = match worst {
                Some(i) if !evals[i].0.is_one() => ("countermodel", EXIT_NEGATIVE),
                _ => ("one-on-samples", EXIT_OK),
            };
            let mut r = Report::new("translate", verdict, exit);
            r.line(format!("no classical countermodel up to {max_domain} elements; {samples} samples checked"));
            r.set("prenex_checked", json!(checked));
            match worst {
                Some(i) => {
                    let (v, _, ante, cons) = evals[i].clone();
                    (r, ante, cons, v)
                }
                None => (r, Value::one(), Value::one(), Value::one()),
            }
        }
    };
    r.lines.splice(0..0, lines);
    r.line(format!("antecedent: {ante}"));
    r.line(format!("consequent: {cons}"));
    r.line(format!("value: {value}"));
    r.set("formula", json!(t.formula.to_string()));
    r.set("prenex", json!(p.to_string()));
    r.set("antecedent_value", json!(ante.to_string()));
    r.set("consequent_value", json!(cons.to_string()));
    r.set("value", json!(value.to_string()));
    Ok(r)
}

fn corpus(args: &ProverArgs, max_m: usize, max_domain: usize, ctx: &Context) -> Result<Report> {
    let opts = prover_options(args, ctx)?;
    let sample = TruthValueSample::v_m(max_m).map_err(|e| anyhow!("--max-m: {e}"))?;
    let brute = BruteForce::new(max_domain).with_exec(ctx.exec);
    let mut failures = 0;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for (expect_valid, list) in [(true, goedelkit::corpus::valid()), (false, goedelkit::corpus::invalid())] {
        for f in list {
            let verdict = prove_formula(&f, &opts)?.verdict();
            let brute_valid = brute_force_validity(&f, &sample, brute)?.is_valid();
            let ok = if expect_valid { verdict == "valid" && brute_valid } else { verdict != "valid" };
            if !ok {
                failures += 1;
            }
            let flag = if ok { "ok" } else { "FAIL" };
            lines.push(format!("{flag}\t{verdict}\tV{max_m}:{}\t{f}", if brute_valid { "valid" } else { "invalid" }));
            rows.push(json!({
                "formula": f.to_string(),
                "expected_valid": expect_valid,
                "verdict": verdict,
                "brute_force_valid": brute_valid,
                "ok": ok,
            }));
        }
    }
    let mut r = if failures == 0 {
        Report::new("corpus", "pass", EXIT_OK)
    } else {
        Report::new("corpus", "fail", EXIT_NEGATIVE)
    };
    r.lines = lines;
    r.line(format!("{} formulas, {failures} failures", rows.len()));
    r.set("failures", json!(failures));
    r.set("results", json!(rows));
    Ok(r)
}
