//! Exhaustive validity checking over small domains and finite value samples.

use std::fmt;

use num::{BigInt, BigRational};

use super::eval::{Program, Tables};
use super::interpretation::Interpretation;
use crate::exec::{self, Execution};
use crate::syntax::{Formula, SignatureError};
use crate::value::Value;

/// Finite, sorted, duplicate-free list of truth values containing 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthValueSample(Vec<Value>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("a truth value sample must contain 0 and 1")]
    MissingEndpoint,
    #[error("V_m needs m >= 2, got {0}")]
    TooSmall(usize),
}

impl TruthValueSample {
    pub fn new(values: impl IntoIterator<Item = Value>) -> Result<TruthValueSample, SampleError> {
        let mut values: Vec<Value> = values.into_iter().collect();
        values.sort();
        values.dedup();
        if values.first().is_none_or(|v| !v.is_zero()) || values.last().is_none_or(|v| !v.is_one()) {
            return Err(SampleError::MissingEndpoint);
        }
        Ok(TruthValueSample(values))
    }

    /// `V_m = {0, 1/2, 2/3, ..., (m-2)/(m-1), 1}`.
    pub fn v_m(m: usize) -> Result<TruthValueSample, SampleError> {
        if m < 2 {
            return Err(SampleError::TooSmall(m));
        }
        let mut values = vec![Value::zero()];
        values.extend((2..m).map(|k| {
            let k = BigInt::from(k);
            Value::from_rational(BigRational::new(&k - 1, k)).expect("inside [0,1]")
        }));
        values.push(Value::one());
        Ok(TruthValueSample(values))
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TruthValueSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BruteForceError {
    #[error("formula has free variables: {0:?}")]
    NotClosed(Vec<String>),
    #[error("search space of {size} interpretations exceeds the guard of {guard}")]
    GuardExceeded { size: String, guard: u64 },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceResult {
    /// No countermodel among `checked` interpretations.
    Valid {
        checked: u64,
    },
    Countermodel {
        interpretation: Interpretation,
        value: Value,
    },
}

impl BruteForceResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, BruteForceResult::Valid { .. })
    }
}

/// Default bound on the number of interpretations visited.
pub const DEFAULT_GUARD: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    pub max_domain: usize,
    pub guard: u64,
    pub exec: Execution,
}

impl BruteForce {
    pub fn new(max_domain: usize) -> BruteForce {
        BruteForce { max_domain, guard: DEFAULT_GUARD, exec: Execution::Sequential }
    }

    pub fn with_exec(mut self, exec: Execution) -> BruteForce {
        self.exec = exec;
        self
    }

    pub fn with_guard(mut self, guard: u64) -> BruteForce {
        self.guard = guard;
        self
    }
}

struct Layout {
    /// (number of entries, radix) per table, functions first.
    tables: Vec<(usize, u64)>,
    count: u64,
}

fn layout(program: &Program, domain: usize, values: usize) -> Option<Layout> {
    let mut tables = Vec::new();
    let mut count: u64 = 1;
    let entries = |arity: usize| domain.checked_pow(arity as u32);
    for (_, arity) in &program.functions {
        let n = entries(*arity)?;
        count = count.checked_mul((domain as u64).checked_pow(n as u32)?)?;
        tables.push((n, domain as u64));
    }
    for (_, arity) in &program.predicates {
        let n = entries(*arity)?;
        count = count.checked_mul((values as u64).checked_pow(n as u32)?)?;
        tables.push((n, values as u64));
    }
    Some(Layout { tables, count })
}

/// Decodes interpretation number `index`; the first table entry is the most
/// significant digit, so smaller indices put smaller values first.
fn decode(layout: &Layout, mut index: u64, nfuncs: usize) -> (Vec<Vec<usize>>, Vec<Vec<u16>>) {
    let mut digits: Vec<Vec<u64>> = layout.tables.iter().map(|(n, _)| vec![0; *n]).collect();
    for (t, (n, radix)) in layout.tables.iter().enumerate().rev() {
        for e in (0..*n).rev() {
            digits[t][e] = index % radix;
            index /= radix;
        }
    }
    let funcs = digits[..nfuncs].iter().map(|d| d.iter().map(|&x| x as usize).collect()).collect();
    let preds = digits[nfuncs..].iter().map(|d| d.iter().map(|&x| x as u16).collect()).collect();
    (funcs, preds)
}

/// Searches all interpretations with domains `1..=max_domain` whose atoms
/// take values in `values`, returning the first countermodel in order of
/// domain size and interpretation number.
///
/// Only the order type of the values matters for quantifier-free parts and
/// finite quantifiers, so evaluation runs on value indices.
pub fn brute_force_validity(
    f: &Formula,
    values: &TruthValueSample,
    opts: BruteForce,
) -> Result<BruteForceResult, BruteForceError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(BruteForceError::NotClosed(free.into_iter().collect()));
    }
    let program = Program::compile(f)?;
    let mut layouts = Vec::new();
    let mut total: u64 = 0;
    for domain in 1..=opts.max_domain {
        let too_big = || BruteForceError::GuardExceeded { size: format!("> {}", opts.guard), guard: opts.guard };
        let l = layout(&program, domain, values.len()).ok_or_else(too_big)?;
        total = total.checked_add(l.count).ok_or_else(too_big)?;
        if total > opts.guard {
            return Err(BruteForceError::GuardExceeded { size: total.to_string(), guard: opts.guard });
        }
        layouts.push((domain, l));
    }
    let nfuncs = program.functions.len();
    let top = (values.len() - 1) as u16;
    for (domain, l) in &layouts {
        let refuted = |index: u64| {
            let (funcs, preds) = decode(l, index, nfuncs);
            let tables = Tables {
                domain: *domain,
                functions: funcs.iter().map(Vec::as_slice).collect(),
                predicates: preds.iter().map(Vec::as_slice).collect(),
            };
            let mut env = vec![0; program.slot_count()];
            program.eval(&tables, &mut env, &0u16, &top) != top
        };
        if let Some(index) = exec::find_first_index(opts.exec, l.count, refuted) {
            let (funcs, preds) = decode(l, index, nfuncs);
            let mut model = Interpretation::new(*domain).expect("domain >= 1");
            for ((name, arity), table) in program.functions.iter().zip(funcs) {
                model.set_function(name, *arity, table).expect("decoded table fits");
            }
            for ((name, arity), table) in program.predicates.iter().zip(preds) {
                let table = table.into_iter().map(|i| values.values()[i as usize].clone()).collect();
                model.set_predicate(name, *arity, table).expect("decoded table fits");
            }
            let value = model.eval(f).expect("model covers the formula");
            return Ok(BruteForceResult::Countermodel { interpretation: model, value });
        }
    }
    Ok(BruteForceResult::Valid { checked: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn check(text: &str, m: usize, domain: usize) -> BruteForceResult {
        let f = parse_formula(text).unwrap();
        brute_force_validity(&f, &TruthValueSample::v_m(m).unwrap(), BruteForce::new(domain)).unwrap()
    }

    #[test]
    fn v_m_has_m_elements() {
        let v3 = TruthValueSample::v_m(3).unwrap();
        assert_eq!(v3.to_string(), "{0, 1/2, 1}");
        assert_eq!(TruthValueSample::v_m(5).unwrap().len(), 5);
        assert!(TruthValueSample::v_m(1).is_err());
        assert!(TruthValueSample::new([Value::ratio(1, 2), Value::one()]).is_err());
    }

    #[test]
    fn linearity_is_valid() {
        assert!(check("(A -> B) | (B -> A)", 3, 2).is_valid());
    }

    #[test]
    fn double_negation_fails_at_one_half() {
        match check("~~A -> A", 3, 1) {
            BruteForceResult::Countermodel { interpretation, value } => {
                assert_eq!(interpretation.predicate("A", &[]), Some(&Value::ratio(1, 2)));
                assert_eq!(value, Value::ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn chain_of_three_needs_three_values() {
        assert!(check("(A1 -> A2) | (A2 -> A3)", 2, 1).is_valid());
        match check("(A1 -> A2) | (A2 -> A3)", 3, 1) {
            BruteForceResult::Countermodel { interpretation, .. } => {
                let vals: Vec<Value> =
                    ["A1", "A2", "A3"].iter().map(|a| interpretation.predicate(a, &[]).unwrap().clone()).collect();
                assert_eq!(vals, vec![Value::one(), Value::ratio(1, 2), Value::zero()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parallel_search_finds_the_same_countermodel() {
        let f = parse_formula("all x ex y (P(x) -> Q(y)) | (Q(c) -> P(c))").unwrap();
        let v = TruthValueSample::v_m(3).unwrap();
        let seq = brute_force_validity(&f, &v, BruteForce::new(2)).unwrap();
        let par = brute_force_validity(&f, &v, BruteForce::new(2).with_exec(Execution::Parallel)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn guard_is_enforced() {
        let f = parse_formula("all x all y R(x,y,c) | S(x,y)").unwrap();
        let r = brute_force_validity(&f, &TruthValueSample::v_m(5).unwrap(), BruteForce::new(3).with_guard(1000));
        assert!(matches!(r, Err(BruteForceError::GuardExceeded { .. })));
    }
}
