//! Reverse Skolemization: rebuilding a prenex formula from a valid
//! Herbrand disjunction with the rules
//!
//! 1. `A ∨ B ⟹ B ∨ A`
//! 2. `(A ∨ B) ∨ C ⟹ A ∨ (B ∨ C)`
//! 3. `A ∨ B ∨ B ⟹ A ∨ B`
//! 4. `A(y) ⟹ ∀x A(x)`
//! 5. `A(t) ⟹ ∃x A(x)`
//! 6. `∀x (A(x) ∨ B) ⟹ ∀x A(x) ∨ B`
//! 7. `∃x (A(x) ∨ B) ⟹ ∃x A(x) ∨ B`
//!
//! with `x` not free in `B`. Rules 1–3 may rewrite any node on the right
//! spine of a disjunction. Rule 4 also generalizes a ground Skolem term
//! `f(s̄)` in place of `y`, provided the term does not survive in the
//! conclusion and `f` occurs only in ground terms of the premise.

use std::fmt;

use crate::syntax::{Formula, HerbrandForm, PrenexFormula, Quantifier, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Commute,
    Associate,
    Contract,
    Generalize,
    Witness,
    ForallOut,
    ExistsOut,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::Commute,
        Rule::Associate,
        Rule::Contract,
        Rule::Generalize,
        Rule::Witness,
        Rule::ForallOut,
        Rule::ExistsOut,
    ];

    pub fn number(self) -> u8 {
        Rule::ALL.iter().position(|&r| r == self).expect("listed") as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Rule> {
        Rule::ALL.get((n as usize).checked_sub(1)?).copied()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub from: Formula,
    pub to: Formula,
}

/// A chain of rule applications from a Herbrand disjunction to a prenex formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofOutline {
    pub start: Formula,
    pub steps: Vec<Step>,
}

impl ProofOutline {
    pub fn conclusion(&self) -> &Formula {
        self.steps.last().map_or(&self.start, |s| &s.to)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OutlineError {
    #[error("empty Herbrand disjunction")]
    EmptyDisjunction,
    #[error("Herbrand form does not belong to `{0}`")]
    ForeignHerbrandForm(String),
    #[error("instance has {found} terms, expected {expected}")]
    TupleLength { expected: usize, found: usize },
    #[error("no rule applies: every remaining generalization is blocked")]
    Stuck,
    #[error("outline does not start with the Herbrand disjunction")]
    WrongStart,
    #[error("step {step} does not continue from the previous line")]
    Broken { step: usize },
    #[error("step {step} is not an application of rule {rule}: {reason}")]
    Violation { step: usize, rule: Rule, reason: String },
    #[error("outline ends with `{found}` instead of `{expected}`")]
    WrongConclusion { expected: String, found: String },
}

fn spine(items: &[Formula], tail: Formula) -> Formula {
    items.iter().rev().fold(tail, |acc, x| Formula::or(x.clone(), acc))
}

fn disjunction(items: &[Formula]) -> Formula {
    let (last, init) = items.split_last().expect("non-empty");
    spine(init, last.clone())
}

struct Disjunct {
    /// Values of all prefix variables, Skolem terms at universal positions.
    values: Vec<Term>,
    /// Number of leading prefix positions still instantiated.
    stage: usize,
    formula: Formula,
}

struct Builder<'a> {
    prefix: &'a [(Quantifier, String)],
    matrix: &'a Formula,
    items: Vec<Disjunct>,
    steps: Vec<Step>,
}

impl Builder<'_> {
    fn stage_formula(&self, values: &[Term], stage: usize) -> Formula {
        let mut body = self.matrix.clone();
        for ((_, v), t) in self.prefix[..stage].iter().zip(values) {
            body = body.substitute(v, t);
        }
        self.prefix[stage..].iter().rev().fold(body, |acc, (q, v)| Formula::quantified(*q, v.clone(), acc))
    }

    fn line(&self) -> Formula {
        let fs: Vec<Formula> = self.items.iter().map(|d| d.formula.clone()).collect();
        disjunction(&fs)
    }

    fn push(&mut self, rule: Rule, to: Formula) {
        let from = self.steps.last().map_or_else(|| self.line(), |s| s.to.clone());
        self.steps.push(Step { rule, from, to });
    }

    /// Moves the disjunct at position `p` to the end using rules 1 and 2
    /// at spine node `p`.
    fn rotate_to_end(&mut self, p: usize) {
        let k = self.items.len();
        if p + 1 >= k {
            return;
        }
        let fs: Vec<Formula> = self.items.iter().map(|d| d.formula.clone()).collect();
        let (head, rest) = (&fs[..p], &fs[p + 1..]);
        let moved = fs[p].clone();
        self.push(Rule::Commute, spine(head, Formula::or(disjunction(rest), moved.clone())));
        for i in 1..rest.len() {
            let mut left: Vec<Formula> = head.to_vec();
            left.extend_from_slice(&rest[..i]);
            self.push(Rule::Associate, spine(&left, Formula::or(disjunction(&rest[i..]), moved.clone())));
        }
        let d = self.items.remove(p);
        self.items.push(d);
    }

    fn bring_to_front(&mut self, p: usize) {
        for _ in 0..p {
            self.rotate_to_end(0);
        }
    }

    fn contract_duplicates(&mut self) {
        while let Some((a, b)) = self.duplicate_pair() {
            self.rotate_to_end(a);
            if b + 1 < self.items.len() {
                self.rotate_to_end(b - 1);
            }
            let k = self.items.len();
            self.items.pop();
            let fs: Vec<Formula> = self.items.iter().map(|d| d.formula.clone()).collect();
            self.push(Rule::Contract, spine(&fs[..k - 2], fs[k - 2].clone()));
        }
    }

    fn duplicate_pair(&self) -> Option<(usize, usize)> {
        for a in 0..self.items.len() {
            for b in a + 1..self.items.len() {
                if self.items[a].formula == self.items[b].formula {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// The disjunct to quantify next: any existential step, else the
    /// universal step with the largest admissible Skolem term.
    fn choose(&self) -> Option<usize> {
        let pending = |d: &Disjunct| d.stage > 0;
        if let Some(p) = self.items.iter().position(|d| pending(d) && self.prefix[d.stage - 1].0 == Quantifier::Exists)
        {
            return Some(p);
        }
        let mut best: Option<(usize, usize)> = None;
        for (p, d) in self.items.iter().enumerate() {
            if !pending(d) {
                continue;
            }
            let t = &d.values[d.stage - 1];
            let elsewhere = self.items.iter().enumerate().any(|(i, e)| i != p && e.formula.contains_term(t));
            let next = self.stage_formula(&d.values, d.stage - 1);
            if elsewhere || next.contains_term(t) {
                continue;
            }
            if best.is_none_or(|(_, size)| t.size() > size) {
                best = Some((p, t.size()));
            }
        }
        best.map(|(p, _)| p)
    }

    fn quantify_front(&mut self) {
        let d = &self.items[0];
        let j = d.stage - 1;
        let (q, var) = self.prefix[j].clone();
        let next = self.stage_formula(&d.values, j);
        let (intro, shift) = match q {
            Quantifier::Forall => (Rule::Generalize, Rule::ForallOut),
            Quantifier::Exists => (Rule::Witness, Rule::ExistsOut),
        };
        if self.items.len() == 1 {
            self.push(intro, next.clone());
        } else {
            let body = match &next {
                Formula::Forall(_, b) | Formula::Exists(_, b) => (**b).clone(),
                _ => unreachable!("stage formula starts with a quantifier"),
            };
            let rest: Vec<Formula> = self.items[1..].iter().map(|d| d.formula.clone()).collect();
            let rest = disjunction(&rest);
            self.push(intro, Formula::quantified(q, var, Formula::or(body, rest.clone())));
            self.push(shift, Formula::or(next.clone(), rest));
        }
        self.items[0].stage = j;
        self.items[0].formula = next;
    }
}

/// Builds the outline from the Herbrand instances (tuples over the
/// existential variables of `herbrand`) to `original`.
pub fn reverse_skolemize(
    instances: &[Vec<Term>],
    herbrand: &HerbrandForm,
    original: &PrenexFormula,
) -> Result<ProofOutline, OutlineError> {
    if instances.is_empty() {
        return Err(OutlineError::EmptyDisjunction);
    }
    let foreign = || OutlineError::ForeignHerbrandForm(original.to_string());
    let existentials = herbrand.formula.vars();
    let mut disjuncts = Vec::new();
    for tuple in instances {
        if tuple.len() != existentials.len() {
            return Err(OutlineError::TupleLength { expected: existentials.len(), found: tuple.len() });
        }
        let mut values: Vec<Term> = Vec::new();
        let mut by_name: Vec<(&str, Term)> = Vec::new();
        let mut next_existential = 0;
        for (q, v) in &original.prefix {
            let value = match q {
                Quantifier::Exists => {
                    if existentials.get(next_existential) != Some(v) {
                        return Err(foreign());
                    }
                    next_existential += 1;
                    tuple[next_existential - 1].clone()
                }
                Quantifier::Forall => {
                    let sk = herbrand.skolems.iter().find(|s| &s.var == v).ok_or_else(foreign)?;
                    let args = sk
                        .args
                        .iter()
                        .map(|a| by_name.iter().find(|(n, _)| n == a).map(|(_, t)| t.clone()))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(foreign)?;
                    Term::app(sk.name.clone(), args)
                }
            };
            by_name.push((v, value.clone()));
            values.push(value);
        }
        disjuncts.push(values);
    }
    let mut b = Builder { prefix: &original.prefix, matrix: &original.matrix, items: Vec::new(), steps: Vec::new() };
    let n = original.prefix.len();
    b.items = disjuncts
        .into_iter()
        .map(|values| {
            let formula = b.stage_formula(&values, n);
            Disjunct { values, stage: n, formula }
        })
        .collect();
    let start = b.line();
    loop {
        b.contract_duplicates();
        if b.items.iter().all(|d| d.stage == 0) {
            break;
        }
        let p = b.choose().ok_or(OutlineError::Stuck)?;
        b.bring_to_front(p);
        b.quantify_front();
    }
    Ok(ProofOutline { start, steps: b.steps })
}

// ---------------------------------------------------------------------------
// Checking

/// Finds `t` with `pattern[var := t] == instance` by structural matching;
/// `Ok(None)` if `var` is not free in `pattern` and the two agree.
fn match_instance(pattern: &Formula, var: &str, instance: &Formula) -> Result<Option<Term>, ()> {
    fn term(p: &Term, var: &str, i: &Term, found: &mut Option<Term>) -> bool {
        match (p, i) {
            (Term::Var(v), _) if v == var => match found {
                Some(t) => t == i,
                None => {
                    *found = Some(i.clone());
                    true
                }
            },
            (Term::Var(v), Term::Var(w)) => v == w,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term(x, var, y, found))
            }
            _ => false,
        }
    }
    fn formula(p: &Formula, var: &str, i: &Formula, found: &mut Option<Term>) -> bool {
        match (p, i) {
            (Formula::Atom(a, xs), Formula::Atom(b, ys)) => {
                a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term(x, var, y, found))
            }
            (Formula::Bottom, Formula::Bottom) | (Formula::Top, Formula::Top) => true,
            (Formula::And(a, b), Formula::And(c, d))
            | (Formula::Or(a, b), Formula::Or(c, d))
            | (Formula::Implies(a, b), Formula::Implies(c, d)) => {
                formula(a, var, c, found) && formula(b, var, d, found)
            }
            (Formula::Forall(v, a), Formula::Forall(w, b)) | (Formula::Exists(v, a), Formula::Exists(w, b)) => {
                v == w && if v == var { a == b } else { formula(a, var, b, found) }
            }
            _ => false,
        }
    }
    let mut found = None;
    if formula(pattern, var, instance, &mut found) {
        Ok(found)
    } else {
        Err(())
    }
}

fn has_open_application(f: &Formula, symbol: &str) -> bool {
    let mut open = false;
    f.visit_terms(&mut |t| open |= t.has_open_application_of(symbol));
    open
}

fn check_spine(rule: Rule, from: &Formula, to: &Formula) -> Result<(), String> {
    let at = |a: &Formula, b: &Formula| match (rule, a) {
        (Rule::Commute, Formula::Or(x, y)) => *b == Formula::Or(y.clone(), x.clone()),
        (Rule::Associate, Formula::Or(xy, z)) => match &**xy {
            Formula::Or(x, y) => *b == Formula::or((**x).clone(), Formula::Or(y.clone(), z.clone())),
            _ => false,
        },
        (Rule::Contract, Formula::Or(x, y)) => x == y && **x == *b,
        _ => false,
    };
    let (mut a, mut b) = (from, to);
    loop {
        if at(a, b) {
            return Ok(());
        }
        match (a, b) {
            (Formula::Or(x, y), Formula::Or(u, v)) if x == u => {
                a = y;
                b = v;
            }
            _ => return Err("no node on the disjunctive spine matches".into()),
        }
    }
}

fn check_introduction(rule: Rule, from: &Formula, to: &Formula) -> Result<(), String> {
    let (q, var, body) = match to {
        Formula::Forall(v, b) => (Quantifier::Forall, v, b),
        Formula::Exists(v, b) => (Quantifier::Exists, v, b),
        _ => return Err("conclusion is not quantified".into()),
    };
    let expected = if rule == Rule::Generalize { Quantifier::Forall } else { Quantifier::Exists };
    if q != expected {
        return Err(format!("conclusion must start with `{}`", expected.keyword()));
    }
    let t = match match_instance(body, var, from) {
        Err(()) => return Err("premise is not an instance of the conclusion's body".into()),
        Ok(None) => return Ok(()),
        Ok(Some(t)) => t,
    };
    if body.substitute(var, &t) != *from {
        return Err(format!("substituting `{t}` for `{var}` does not give the premise"));
    }
    if rule == Rule::Generalize {
        match &t {
            Term::Var(y) if to.has_free_var(y) => return Err(format!("`{y}` is free in the conclusion")),
            Term::Var(_) => {}
            Term::App(head, _) => {
                if to.contains_term(&t) {
                    return Err(format!("`{t}` still occurs in the conclusion"));
                }
                if has_open_application(from, head) {
                    return Err(format!("`{head}` occurs applied to variables in the premise"));
                }
            }
        }
    }
    Ok(())
}

fn check_shift(rule: Rule, from: &Formula, to: &Formula) -> Result<(), String> {
    let (var, a, b) = match (rule, from) {
        (Rule::ForallOut, Formula::Forall(v, body)) | (Rule::ExistsOut, Formula::Exists(v, body)) => match &**body {
            Formula::Or(a, b) => (v, a, b),
            _ => return Err("quantified body is not a disjunction".into()),
        },
        _ => return Err("premise has the wrong quantifier".into()),
    };
    if b.has_free_var(var) {
        return Err(format!("`{var}` is free in the right disjunct"));
    }
    let q = if rule == Rule::ForallOut { Quantifier::Forall } else { Quantifier::Exists };
    if *to != Formula::or(Formula::quantified(q, var.clone(), (**a).clone()), (**b).clone()) {
        return Err("conclusion does not match".into());
    }
    Ok(())
}

/// Checks a single step against its rule.
pub fn check_step(step: &Step) -> Result<(), String> {
    match step.rule {
        Rule::Commute | Rule::Associate | Rule::Contract => check_spine(step.rule, &step.from, &step.to),
        Rule::Generalize | Rule::Witness => check_introduction(step.rule, &step.from, &step.to),
        Rule::ForallOut | Rule::ExistsOut => check_shift(step.rule, &step.from, &step.to),
    }
}

/// Checks that `outline` starts with the right-nested disjunction of
/// `disjuncts`, that every step is a correct rule application continuing
/// the previous line, and that it ends with `original`.
pub fn check_outline(outline: &ProofOutline, disjuncts: &[Formula], original: &Formula) -> Result<(), OutlineError> {
    if disjuncts.is_empty() {
        return Err(OutlineError::EmptyDisjunction);
    }
    if outline.start != disjunction(disjuncts) {
        return Err(OutlineError::WrongStart);
    }
    let mut line = &outline.start;
    for (i, step) in outline.steps.iter().enumerate() {
        if step.from != *line {
            return Err(OutlineError::Broken { step: i + 1 });
        }
        check_step(step).map_err(|reason| OutlineError::Violation { step: i + 1, rule: step.rule, reason })?;
        line = &step.to;
    }
    if line != original {
        return Err(OutlineError::WrongConclusion { expected: original.to_string(), found: line.to_string() });
    }
    Ok(())
}
