use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::term::Term;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Quantifier {
    #[serde(rename = "all")]
    Forall,
    #[serde(rename = "ex")]
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "all",
            Quantifier::Exists => "ex",
        }
    }
}

/// Formulas over `&`, `|`, `->`, `false`, `true` and the two quantifiers.
///
/// Negation is not primitive: `~A` is `A -> false`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Bottom,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    /// 0-ary atom.
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `a -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn quantified(q: Quantifier, var: impl Into<String>, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::forall(var, body),
            Quantifier::Exists => Formula::exists(var, body),
        }
    }

    /// Right-nested disjunction; `None` for an empty list.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let items: Vec<Formula> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, d| Formula::or(d, acc))
    }

    /// Right-nested conjunction; `true` for an empty list.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, c| Formula::and(c, acc)).unwrap_or(Formula::Top)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Bottom | Formula::Top => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn contains_forall(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Bottom | Formula::Top => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_forall() || b.contains_forall()
            }
            Formula::Forall(..) => true,
            Formula::Exists(_, body) => body.contains_forall(),
        }
    }

    /// Connective and quantifier count.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Bottom | Formula::Top => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                let mut vars = BTreeSet::new();
                args.iter().for_each(|a| a.collect_vars(&mut vars));
                out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Bottom | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free_var(&self, var: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.has_var(var)),
            Formula::Bottom | Formula::Top => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_free_var(var) || b.has_free_var(var)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => v != var && body.has_free_var(var),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every identifier in the formula: variables, function and predicate symbols.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p, args) => {
                out.insert(p.clone());
                args.iter().for_each(|a| a.collect_names(out));
            }
            Formula::Bottom | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                out.insert(v.clone());
                body.collect_names(out);
            }
        }
    }

    /// Atomic subformulas in left-to-right order, with repetitions.
    pub fn atoms(&self) -> Vec<(&str, &[Term])> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |p, args| out.push((p, args)));
        out
    }

    pub(crate) fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a [Term])) {
        match self {
            Formula::Atom(p, args) => f(p, args),
            Formula::Bottom | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.visit_atoms(f),
        }
    }

    pub(crate) fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        self.visit_atoms(&mut |_, args| args.iter().for_each(&mut *f));
    }

    /// Capture-avoiding substitution of `replacement` for free `var`.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.substitute(var, replacement)).collect())
            }
            Formula::Bottom | Formula::Top => self.clone(),
            Formula::And(a, b) => Formula::and(a.substitute(var, replacement), b.substitute(var, replacement)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, replacement), b.substitute(var, replacement)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(var, replacement), b.substitute(var, replacement)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = self.quantifier().expect("quantifier node");
                if v == var || !body.has_free_var(var) {
                    return self.clone();
                }
                if replacement.has_var(v) {
                    let mut used = body.names();
                    replacement.collect_names(&mut used);
                    used.insert(var.to_string());
                    let fresh = fresh_name(v, &used);
                    let renamed = body.substitute(v, &Term::Var(fresh.clone()));
                    Formula::quantified(q, fresh, renamed.substitute(var, replacement))
                } else {
                    Formula::quantified(q, v.clone(), body.substitute(var, replacement))
                }
            }
        }
    }

    /// Replaces every occurrence of the term `from` (inside atoms) by `to`.
    /// No capture check: callers pass ground `from` and a fresh `to`.
    pub fn replace_term(&self, from: &Term, to: &Term) -> Formula {
        self.map_atoms(&|p, args| Formula::Atom(p.to_string(), args.iter().map(|a| a.replace(from, to)).collect()))
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        let mut found = false;
        self.visit_terms(&mut |u| found |= u.contains(t));
        found
    }

    /// Rebuilds the formula with every atom mapped through `f`.
    pub fn map_atoms(&self, f: &dyn Fn(&str, &[Term]) -> Formula) -> Formula {
        match self {
            Formula::Atom(p, args) => f(p, args),
            Formula::Bottom | Formula::Top => self.clone(),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.map_atoms(f)),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.map_atoms(f)),
        }
    }

    pub fn quantifier(&self) -> Option<Quantifier> {
        match self {
            Formula::Forall(..) => Some(Quantifier::Forall),
            Formula::Exists(..) => Some(Quantifier::Exists),
            _ => None,
        }
    }

    /// Replaces `true` by `false -> false` for consumers without a primitive top.
    pub fn lower_top(&self) -> Formula {
        match self {
            Formula::Top => Formula::implies(Formula::Bottom, Formula::Bottom),
            Formula::Atom(..) | Formula::Bottom => self.clone(),
            Formula::And(a, b) => Formula::and(a.lower_top(), b.lower_top()),
            Formula::Or(a, b) => Formula::or(a.lower_top(), b.lower_top()),
            Formula::Implies(a, b) => Formula::implies(a.lower_top(), b.lower_top()),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.lower_top()),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.lower_top()),
        }
    }

    /// Renames bound variables so that every quantifier binds a distinct
    /// name that also differs from every free variable and symbol.
    pub fn rename_apart(&self) -> Formula {
        let mut used = self.names();
        let mut seen = BTreeSet::new();
        self.rename_apart_inner(&mut used, &mut seen)
    }

    fn rename_apart_inner(&self, used: &mut BTreeSet<String>, seen: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Bottom | Formula::Top => self.clone(),
            Formula::And(a, b) => Formula::and(a.rename_apart_inner(used, seen), b.rename_apart_inner(used, seen)),
            Formula::Or(a, b) => Formula::or(a.rename_apart_inner(used, seen), b.rename_apart_inner(used, seen)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_apart_inner(used, seen), b.rename_apart_inner(used, seen))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = self.quantifier().expect("quantifier node");
                let free_here = self.free_vars();
                let name = if seen.contains(v) || free_here.contains(v) {
                    let fresh = fresh_name(v, used);
                    used.insert(fresh.clone());
                    fresh
                } else {
                    v.clone()
                };
                seen.insert(name.clone());
                let body = if &name == v { (**body).clone() } else { body.substitute(v, &Term::Var(name.clone())) };
                Formula::quantified(q, name, body.rename_apart_inner(used, seen))
            }
        }
    }
}

/// `base` with a numeric suffix, avoiding every name in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..).map(|n| format!("{stem}{n}")).find(|candidate| !used.contains(candidate)).expect("unbounded suffix search")
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Implication,
    Disjunction,
    Conjunction,
    Unary,
}

impl Formula {
    fn write_at(&self, f: &mut fmt::Formatter<'_>, ctx: Level) -> fmt::Result {
        let level = match self {
            Formula::Implies(_, b) if **b == Formula::Bottom => Level::Unary,
            Formula::Implies(..) => Level::Implication,
            Formula::Or(..) => Level::Disjunction,
            Formula::And(..) => Level::Conjunction,
            _ => Level::Unary,
        };
        let parens = level < ctx;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::Atom(p, args) => {
                write!(f, "{p}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
            }
            Formula::Bottom => write!(f, "false")?,
            Formula::Top => write!(f, "true")?,
            Formula::Implies(a, b) if **b == Formula::Bottom => {
                write!(f, "~")?;
                a.write_at(f, Level::Unary)?;
            }
            Formula::Implies(a, b) => {
                a.write_at(f, Level::Disjunction)?;
                write!(f, " -> ")?;
                b.write_at(f, Level::Implication)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, Level::Disjunction)?;
                write!(f, " | ")?;
                b.write_at(f, Level::Conjunction)?;
            }
            Formula::And(a, b) => {
                a.write_at(f, Level::Conjunction)?;
                write!(f, " & ")?;
                b.write_at(f, Level::Unary)?;
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = self.quantifier().expect("quantifier node");
                write!(f, "{} {v} ", q.keyword())?;
                body.write_at(f, Level::Unary)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, Level::Implication)
    }
}

/// Function and predicate symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("symbol `{symbol}` used with arity {found} but declared with arity {expected}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("`{0}` is used both as a function and as a predicate symbol")]
    KindClash(String),
}

impl Signature {
    /// Collects the symbols of `f`, checking that arities are used consistently.
    pub fn of(f: &Formula) -> Result<Signature, SignatureError> {
        let mut sig = Signature::default();
        sig.absorb(f)?;
        Ok(sig)
    }

    /// Adds the symbols of `f`, checking them against what is already declared.
    pub fn absorb(&mut self, f: &Formula) -> Result<(), SignatureError> {
        let mut funcs: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut preds: Vec<(String, usize)> = Vec::new();
        f.visit_atoms(&mut |p, args| {
            preds.push((p.to_string(), args.len()));
            args.iter().for_each(|a| a.collect_functions(&mut funcs));
        });
        for (p, n) in preds {
            insert_checked(&mut self.predicates, &p, n)?;
        }
        for (name, arities) in funcs {
            for n in arities {
                insert_checked(&mut self.functions, &name, n)?;
            }
        }
        if let Some(clash) = self.functions.keys().find(|k| self.predicates.contains_key(*k)) {
            return Err(SignatureError::KindClash(clash.clone()));
        }
        Ok(())
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.functions.iter().filter(|(_, &n)| n == 0).map(|(k, _)| k.as_str())
    }

    pub fn has_constant(&self) -> bool {
        self.constants().next().is_some()
    }

    pub fn has_positive_arity_function(&self) -> bool {
        self.functions.values().any(|&n| n > 0)
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.functions.keys().chain(self.predicates.keys()).cloned().collect()
    }
}

fn insert_checked(map: &mut BTreeMap<String, usize>, name: &str, arity: usize) -> Result<(), SignatureError> {
    match map.get(name) {
        Some(&expected) if expected != arity => {
            Err(SignatureError::ArityMismatch { symbol: name.to_string(), expected, found: arity })
        }
        Some(_) => Ok(()),
        None => {
            map.insert(name.to_string(), arity);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str) -> Formula {
        Formula::atom("P", vec![Term::var(x)])
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let a = Formula::prop("A");
        let b = Formula::prop("B");
        let lin = Formula::or(Formula::implies(a.clone(), b.clone()), Formula::implies(b.clone(), a.clone()));
        assert_eq!(lin.to_string(), "(A -> B) | (B -> A)");
        assert_eq!(Formula::not(a.clone()).to_string(), "~A");
        let nested = Formula::implies(Formula::implies(a.clone(), b.clone()), a.clone());
        assert_eq!(nested.to_string(), "(A -> B) -> A");
        let q = Formula::exists("x", Formula::implies(p("x"), Formula::forall("y", p("y"))));
        assert_eq!(q.to_string(), "ex x (P(x) -> all y P(y))");
    }

    #[test]
    fn substitution_avoids_capture() {
        // all y (P(x) -> Q(y)) [x := y]
        let f = Formula::forall("y", Formula::implies(p("x"), Formula::atom("Q", vec![Term::var("y")])));
        let g = f.substitute("x", &Term::var("y"));
        match &g {
            Formula::Forall(v, body) => {
                assert_ne!(v, "y");
                assert!(body.has_free_var("y"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rename_apart_makes_binders_distinct() {
        let f = Formula::and(Formula::forall("x", p("x")), Formula::exists("x", p("x")));
        let g = f.rename_apart();
        match g {
            Formula::And(a, b) => {
                let va = match *a {
                    Formula::Forall(v, _) => v,
                    _ => unreachable!(),
                };
                let vb = match *b {
                    Formula::Exists(v, _) => v,
                    _ => unreachable!(),
                };
                assert_ne!(va, vb);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn signature_rejects_inconsistent_arity() {
        let f = Formula::and(Formula::atom("P", vec![Term::constant("c")]), Formula::prop("P"));
        assert!(matches!(Signature::of(&f), Err(SignatureError::ArityMismatch { .. })));
    }

    #[test]
    fn fresh_names_use_numeric_suffixes() {
        let used: BTreeSet<String> = ["x", "x1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("x", &used), "x2");
        assert_eq!(fresh_name("x1", &used), "x2");
    }
}
