//! Formula compiled to slot-addressed form for repeated evaluation over
//! finite domains, generic in the chain of truth values.

use std::collections::BTreeMap;

use crate::syntax::{Formula, Signature, SignatureError, Term};

#[derive(Clone, Debug)]
enum CTerm {
    Slot(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug)]
enum Node {
    Atom(usize, Vec<CTerm>),
    Bottom,
    Top,
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula whose symbols are numbered in the order of its signature
/// (sorted by name) and whose variables live in numbered slots.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    root: Node,
    slots: usize,
    pub(crate) free: Vec<String>,
    pub(crate) functions: Vec<(String, usize)>,
    pub(crate) predicates: Vec<(String, usize)>,
}

/// Function and predicate tables for one interpretation. Tables are indexed
/// row-major: the first argument is the most significant digit.
pub(crate) struct Tables<'a, V> {
    pub(crate) domain: usize,
    pub(crate) functions: Vec<&'a [usize]>,
    pub(crate) predicates: Vec<&'a [V]>,
}

impl Program {
    pub(crate) fn compile(f: &Formula) -> Result<Program, SignatureError> {
        let sig = Signature::of(f)?;
        let functions: Vec<(String, usize)> = sig.functions.into_iter().collect();
        let predicates: Vec<(String, usize)> = sig.predicates.into_iter().collect();
        let fids: BTreeMap<&str, usize> = functions.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
        let pids: BTreeMap<&str, usize> = predicates.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut scope: Vec<(String, usize)> = free.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut slots = free.len();
        let root = compile_node(f, &fids, &pids, &mut scope, &mut slots);
        Ok(Program { root, slots, free, functions, predicates })
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.slots
    }

    /// Evaluates with the free variables in slots `0..free.len()` of `env`.
    pub(crate) fn eval<V: Ord + Clone>(&self, t: &Tables<'_, V>, env: &mut [usize], zero: &V, one: &V) -> V {
        eval_node(&self.root, t, env, zero, one)
    }
}

fn compile_term(t: &Term, fids: &BTreeMap<&str, usize>, scope: &[(String, usize)]) -> CTerm {
    match t {
        Term::Var(v) => {
            let slot = scope.iter().rev().find(|(name, _)| name == v).map(|(_, s)| *s);
            CTerm::Slot(slot.expect("free variables are pre-assigned slots"))
        }
        Term::App(name, args) => {
            CTerm::App(fids[name.as_str()], args.iter().map(|a| compile_term(a, fids, scope)).collect())
        }
    }
}

fn compile_node(
    f: &Formula,
    fids: &BTreeMap<&str, usize>,
    pids: &BTreeMap<&str, usize>,
    scope: &mut Vec<(String, usize)>,
    slots: &mut usize,
) -> Node {
    match f {
        Formula::Atom(p, args) => {
            Node::Atom(pids[p.as_str()], args.iter().map(|a| compile_term(a, fids, scope)).collect())
        }
        Formula::Bottom => Node::Bottom,
        Formula::Top => Node::Top,
        Formula::And(a, b) => Node::And(
            Box::new(compile_node(a, fids, pids, scope, slots)),
            Box::new(compile_node(b, fids, pids, scope, slots)),
        ),
        Formula::Or(a, b) => Node::Or(
            Box::new(compile_node(a, fids, pids, scope, slots)),
            Box::new(compile_node(b, fids, pids, scope, slots)),
        ),
        Formula::Implies(a, b) => Node::Implies(
            Box::new(compile_node(a, fids, pids, scope, slots)),
            Box::new(compile_node(b, fids, pids, scope, slots)),
        ),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let slot = *slots;
            *slots += 1;
            scope.push((v.clone(), slot));
            let inner = Box::new(compile_node(body, fids, pids, scope, slots));
            scope.pop();
            if matches!(f, Formula::Forall(..)) {
                Node::Forall(slot, inner)
            } else {
                Node::Exists(slot, inner)
            }
        }
    }
}

fn eval_term<V>(t: &CTerm, tables: &Tables<'_, V>, env: &[usize]) -> usize {
    match t {
        CTerm::Slot(s) => env[*s],
        CTerm::App(fid, args) => {
            let mut index = 0;
            for a in args {
                index = index * tables.domain + eval_term(a, tables, env);
            }
            tables.functions[*fid][index]
        }
    }
}

fn eval_node<V: Ord + Clone>(n: &Node, t: &Tables<'_, V>, env: &mut [usize], zero: &V, one: &V) -> V {
    match n {
        Node::Atom(pid, args) => {
            let mut index = 0;
            for a in args {
                index = index * t.domain + eval_term(a, t, env);
            }
            t.predicates[*pid][index].clone()
        }
        Node::Bottom => zero.clone(),
        Node::Top => one.clone(),
        Node::And(a, b) => {
            let va = eval_node(a, t, env, zero, one);
            if va == *zero {
                return va;
            }
            va.min(eval_node(b, t, env, zero, one))
        }
        Node::Or(a, b) => {
            let va = eval_node(a, t, env, zero, one);
            if va == *one {
                return va;
            }
            va.max(eval_node(b, t, env, zero, one))
        }
        Node::Implies(a, b) => {
            let va = eval_node(a, t, env, zero, one);
            if va == *zero {
                return one.clone();
            }
            let vb = eval_node(b, t, env, zero, one);
            if va <= vb {
                one.clone()
            } else {
                vb
            }
        }
        Node::Forall(slot, body) => {
            let mut acc = one.clone();
            for d in 0..t.domain {
                env[*slot] = d;
                acc = acc.min(eval_node(body, t, env, zero, one));
                if acc == *zero {
                    break;
                }
            }
            acc
        }
        Node::Exists(slot, body) => {
            let mut acc = zero.clone();
            for d in 0..t.domain {
                env[*slot] = d;
                acc = acc.max(eval_node(body, t, env, zero, one));
                if acc == *one {
                    break;
                }
            }
            acc
        }
    }
}
