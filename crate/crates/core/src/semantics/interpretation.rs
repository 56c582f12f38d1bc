use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eval::{Program, Tables};
use crate::syntax::{Formula, SignatureError, Term};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("symbol `{0}` has no interpretation")]
    UnboundSymbol(String),
    #[error("symbol `{symbol}` is interpreted with arity {interpreted} but used with arity {used}")]
    ArityMismatch { symbol: String, interpreted: usize, used: usize },
    #[error("free variable `{0}` has no assignment")]
    UnboundVariable(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpretationError {
    #[error("domain must be non-empty")]
    EmptyDomain,
    #[error("table for `{symbol}` has {found} entries, expected {expected}")]
    TableSize { symbol: String, expected: usize, found: usize },
    #[error("`{symbol}` maps to element {element}, outside a domain of size {domain}")]
    OutOfDomain { symbol: String, element: usize, domain: usize },
    #[error("malformed argument key `{0}`")]
    BadKey(String),
    #[error("inconsistent arities in the table for `{0}`")]
    MixedArity(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FunctionTable {
    pub(crate) arity: usize,
    pub(crate) table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PredicateTable {
    pub(crate) arity: usize,
    pub(crate) table: Vec<Value>,
}

/// A finite domain `{0, ..., n-1}` with total function tables, truth-value
/// tables for predicates and an assignment for free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    domain: usize,
    pub(crate) functions: BTreeMap<String, FunctionTable>,
    pub(crate) predicates: BTreeMap<String, PredicateTable>,
    vars: BTreeMap<String, usize>,
}

fn table_len(domain: usize, arity: usize) -> usize {
    domain.pow(arity as u32)
}

/// Decodes a row-major table index into an argument tuple.
pub(crate) fn tuple_of(mut index: usize, domain: usize, arity: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % domain;
        index /= domain;
    }
    out
}

pub(crate) fn index_of(args: &[usize], domain: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * domain + a)
}

impl Interpretation {
    pub fn new(domain: usize) -> Result<Interpretation, InterpretationError> {
        if domain == 0 {
            return Err(InterpretationError::EmptyDomain);
        }
        Ok(Interpretation { domain, functions: BTreeMap::new(), predicates: BTreeMap::new(), vars: BTreeMap::new() })
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn set_function(&mut self, name: &str, arity: usize, table: Vec<usize>) -> Result<(), InterpretationError> {
        let expected = table_len(self.domain, arity);
        if table.len() != expected {
            return Err(InterpretationError::TableSize { symbol: name.into(), expected, found: table.len() });
        }
        if let Some(&element) = table.iter().find(|&&e| e >= self.domain) {
            return Err(InterpretationError::OutOfDomain { symbol: name.into(), element, domain: self.domain });
        }
        self.functions.insert(name.to_string(), FunctionTable { arity, table });
        Ok(())
    }

    pub fn set_function_with(
        &mut self,
        name: &str,
        arity: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<(), InterpretationError> {
        let table = (0..table_len(self.domain, arity)).map(|i| f(&tuple_of(i, self.domain, arity))).collect();
        self.set_function(name, arity, table)
    }

    pub fn set_constant(&mut self, name: &str, element: usize) -> Result<(), InterpretationError> {
        self.set_function(name, 0, vec![element])
    }

    pub fn set_predicate(&mut self, name: &str, arity: usize, table: Vec<Value>) -> Result<(), InterpretationError> {
        let expected = table_len(self.domain, arity);
        if table.len() != expected {
            return Err(InterpretationError::TableSize { symbol: name.into(), expected, found: table.len() });
        }
        self.predicates.insert(name.to_string(), PredicateTable { arity, table });
        Ok(())
    }

    pub fn set_predicate_with(
        &mut self,
        name: &str,
        arity: usize,
        f: impl Fn(&[usize]) -> Value,
    ) -> Result<(), InterpretationError> {
        let table = (0..table_len(self.domain, arity)).map(|i| f(&tuple_of(i, self.domain, arity))).collect();
        self.set_predicate(name, arity, table)
    }

    pub fn set_proposition(&mut self, name: &str, value: Value) {
        self.predicates.insert(name.to_string(), PredicateTable { arity: 0, table: vec![value] });
    }

    pub fn assign(&mut self, var: &str, element: usize) -> Result<(), InterpretationError> {
        if element >= self.domain {
            return Err(InterpretationError::OutOfDomain { symbol: var.into(), element, domain: self.domain });
        }
        self.vars.insert(var.to_string(), element);
        Ok(())
    }

    pub fn function(&self, name: &str, args: &[usize]) -> Option<usize> {
        let f = self.functions.get(name)?;
        (f.arity == args.len()).then(|| f.table[index_of(args, self.domain)])
    }

    pub fn predicate(&self, name: &str, args: &[usize]) -> Option<&Value> {
        let p = self.predicates.get(name)?;
        (p.arity == args.len()).then(|| &p.table[index_of(args, self.domain)])
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, p)| (k.as_str(), p.arity))
    }

    pub fn function_names(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(k, f)| (k.as_str(), f.arity))
    }

    /// Every predicate table entry, as (name, arguments, value).
    pub fn atom_values(&self) -> impl Iterator<Item = (&str, Vec<usize>, &Value)> {
        self.predicates.iter().flat_map(move |(name, p)| {
            p.table.iter().enumerate().map(move |(i, v)| (name.as_str(), tuple_of(i, self.domain, p.arity), v))
        })
    }

    /// Applies `f` to every predicate value.
    pub fn map_values(&self, f: impl Fn(&Value) -> Value) -> Interpretation {
        let mut out = self.clone();
        for p in out.predicates.values_mut() {
            for v in p.table.iter_mut() {
                *v = f(v);
            }
        }
        out
    }

    pub fn eval_term(&self, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => self.vars.get(v).copied().ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::App(name, args) => {
                let f = self.functions.get(name).ok_or_else(|| EvalError::UnboundSymbol(name.clone()))?;
                if f.arity != args.len() {
                    return Err(EvalError::ArityMismatch {
                        symbol: name.clone(),
                        interpreted: f.arity,
                        used: args.len(),
                    });
                }
                let args = args.iter().map(|a| self.eval_term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(f.table[index_of(&args, self.domain)])
            }
        }
    }

    /// Value of a formula; quantifiers range over the finite domain.
    pub fn eval(&self, f: &Formula) -> Result<Value, EvalError> {
        let program = Program::compile(f)?;
        let mut functions = Vec::with_capacity(program.functions.len());
        for (name, arity) in &program.functions {
            let t = self.functions.get(name).ok_or_else(|| EvalError::UnboundSymbol(name.clone()))?;
            if t.arity != *arity {
                return Err(EvalError::ArityMismatch { symbol: name.clone(), interpreted: t.arity, used: *arity });
            }
            functions.push(t.table.as_slice());
        }
        let mut predicates = Vec::with_capacity(program.predicates.len());
        for (name, arity) in &program.predicates {
            let t = self.predicates.get(name).ok_or_else(|| EvalError::UnboundSymbol(name.clone()))?;
            if t.arity != *arity {
                return Err(EvalError::ArityMismatch { symbol: name.clone(), interpreted: t.arity, used: *arity });
            }
            predicates.push(t.table.as_slice());
        }
        let mut env = vec![0; program.slot_count()];
        for (slot, v) in program.free.iter().enumerate() {
            env[slot] = *self.vars.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
        }
        let tables = Tables { domain: self.domain, functions, predicates };
        Ok(program.eval(&tables, &mut env, &Value::zero(), &Value::one()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawInterpretation {
            domain: self.domain,
            funcs: self
                .functions
                .iter()
                .map(|(name, f)| {
                    let entries = f
                        .table
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| (key_of(&tuple_of(i, self.domain, f.arity)), e))
                        .collect();
                    (name.clone(), entries)
                })
                .collect(),
            preds: self
                .predicates
                .iter()
                .map(|(name, p)| {
                    let entries = p
                        .table
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (key_of(&tuple_of(i, self.domain, p.arity)), v.clone()))
                        .collect();
                    (name.clone(), entries)
                })
                .collect(),
            vars: self.vars.clone(),
        };
        serde_json::to_value(raw).expect("interpretations serialize")
    }

    pub fn from_json(text: &str) -> Result<Interpretation, InterpretationError> {
        let raw: RawInterpretation =
            serde_json::from_str(text).map_err(|e| InterpretationError::Json(e.to_string()))?;
        let mut out = Interpretation::new(raw.domain)?;
        for (name, entries) in raw.funcs {
            let (arity, table) = dense_table(&name, entries, raw.domain)?;
            out.set_function(&name, arity, table)?;
        }
        for (name, entries) in raw.preds {
            let (arity, table) = dense_table(&name, entries, raw.domain)?;
            out.set_predicate(&name, arity, table)?;
        }
        for (v, e) in raw.vars {
            out.assign(&v, e)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct RawInterpretation {
    domain: usize,
    #[serde(default)]
    funcs: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default)]
    preds: BTreeMap<String, BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    vars: BTreeMap<String, usize>,
}

fn key_of(args: &[usize]) -> String {
    let inner: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    format!("({})", inner.join(","))
}

fn parse_key(key: &str) -> Result<Vec<usize>, InterpretationError> {
    let bad = || InterpretationError::BadKey(key.to_string());
    let inner = key.trim().strip_prefix('(').and_then(|k| k.strip_suffix(')')).ok_or_else(bad)?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn dense_table<T: Clone>(
    name: &str,
    entries: BTreeMap<String, T>,
    domain: usize,
) -> Result<(usize, Vec<T>), InterpretationError> {
    let mut arity = None;
    let mut slots: Vec<Option<T>> = Vec::new();
    for (key, value) in entries {
        let args = parse_key(&key)?;
        match arity {
            None => {
                arity = Some(args.len());
                slots = vec![None; table_len(domain, args.len())];
            }
            Some(a) if a != args.len() => return Err(InterpretationError::MixedArity(name.to_string())),
            Some(_) => {}
        }
        if let Some(&element) = args.iter().find(|&&a| a >= domain) {
            return Err(InterpretationError::OutOfDomain { symbol: name.to_string(), element, domain });
        }
        slots[index_of(&args, domain)] = Some(value);
    }
    let arity = arity.unwrap_or(0);
    let expected = table_len(domain, arity);
    let found = slots.iter().filter(|s| s.is_some()).count();
    if found != expected {
        return Err(InterpretationError::TableSize { symbol: name.to_string(), expected, found });
    }
    Ok((arity, slots.into_iter().map(|s| s.expect("checked")).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn v(n: i64, d: i64) -> Value {
        Value::ratio(n, d)
    }

    #[test]
    fn propositional_truth_functions() {
        let mut i = Interpretation::new(1).unwrap();
        i.set_proposition("A", v(3, 10));
        i.set_proposition("B", v(7, 10));
        assert_eq!(i.eval(&parse_formula("(A -> B) | (B -> A)").unwrap()).unwrap(), Value::one());
        assert_eq!(i.eval(&parse_formula("B -> A").unwrap()).unwrap(), v(3, 10));
        assert_eq!(i.eval(&parse_formula("A & B").unwrap()).unwrap(), v(3, 10));
        let mut j = Interpretation::new(1).unwrap();
        j.set_proposition("A", v(1, 2));
        assert_eq!(j.eval(&parse_formula("~A").unwrap()).unwrap(), Value::zero());
        assert_eq!(j.eval(&parse_formula("~~A").unwrap()).unwrap(), Value::one());
    }

    #[test]
    fn quantifiers_are_min_and_max() {
        let mut i = Interpretation::new(2).unwrap();
        i.set_predicate("P", 1, vec![v(1, 5), v(9, 10)]).unwrap();
        assert_eq!(i.eval(&parse_formula("all x P(x)").unwrap()).unwrap(), v(1, 5));
        assert_eq!(i.eval(&parse_formula("ex x P(x)").unwrap()).unwrap(), v(9, 10));
    }

    #[test]
    fn terms_use_function_tables() {
        let mut i = Interpretation::new(2).unwrap();
        i.set_constant("c", 0).unwrap();
        i.set_function_with("f", 1, |a| 1 - a[0]).unwrap();
        i.set_predicate("P", 1, vec![v(1, 3), Value::one()]).unwrap();
        assert_eq!(i.eval(&parse_formula("P(f(c))").unwrap()).unwrap(), Value::one());
        assert_eq!(i.eval(&parse_formula("P(f(f(c)))").unwrap()).unwrap(), v(1, 3));
    }

    #[test]
    fn missing_symbols_are_reported() {
        let i = Interpretation::new(1).unwrap();
        assert_eq!(i.eval(&parse_formula("A").unwrap()), Err(EvalError::UnboundSymbol("A".into())));
        let mut j = Interpretation::new(1).unwrap();
        j.set_predicate("P", 1, vec![Value::one()]).unwrap();
        let open = Formula::atom("P", vec![Term::var("x")]);
        assert_eq!(j.eval(&open), Err(EvalError::UnboundVariable("x".into())));
        j.assign("x", 0).unwrap();
        assert_eq!(j.eval(&open).unwrap(), Value::one());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"domain": 2, "funcs": {"c": {"()": 1}, "f": {"(0)": 1, "(1)": 0}},
                       "preds": {"P": {"(0)": "1/2", "(1)": "1"}, "A": {"()": "0"}}}"#;
        let i = Interpretation::from_json(text).unwrap();
        assert_eq!(i.predicate("P", &[0]), Some(&v(1, 2)));
        assert_eq!(i.function("f", &[1]), Some(0));
        let again = Interpretation::from_json(&i.to_json().to_string()).unwrap();
        assert_eq!(i, again);
    }

    #[test]
    fn json_rejects_incomplete_tables() {
        let text = r#"{"domain": 2, "preds": {"P": {"(0)": "1/2"}}}"#;
        assert!(matches!(Interpretation::from_json(text), Err(InterpretationError::TableSize { .. })));
        let text = r#"{"domain": 1, "preds": {"P": {"(0)": "3/2"}}}"#;
        assert!(matches!(Interpretation::from_json(text), Err(InterpretationError::Json(_))));
    }
}
