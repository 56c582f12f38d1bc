use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// First-order term. Constants are applications with no arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn head(&self) -> &str {
        match self {
            Term::Var(name) | Term::App(name, _) => name,
        }
    }

    pub fn has_var(&self, var: &str) -> bool {
        match self {
            Term::Var(name) => name == var,
            Term::App(_, args) => args.iter().any(|a| a.has_var(var)),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(name) => {
                out.insert(name.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(name) => {
                out.insert(name.clone());
            }
            Term::App(name, args) => {
                out.insert(name.clone());
                args.iter().for_each(|a| a.collect_names(out));
            }
        }
    }

    pub(crate) fn collect_functions(&self, out: &mut BTreeMap<String, Vec<usize>>) {
        if let Term::App(name, args) = self {
            out.entry(name.clone()).or_default().push(args.len());
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(name) if name == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::App(name, args) => {
                Term::App(name.clone(), args.iter().map(|a| a.substitute(var, replacement)).collect())
            }
        }
    }

    /// Replaces every occurrence of the subterm `from` by `to`.
    pub fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(name, args) => Term::App(name.clone(), args.iter().map(|a| a.replace(from, to)).collect()),
        }
    }

    pub fn contains(&self, sub: &Term) -> bool {
        self == sub
            || match self {
                Term::Var(_) => false,
                Term::App(_, args) => args.iter().any(|a| a.contains(sub)),
            }
    }

    /// True if some subterm has head `symbol` and is not ground.
    pub(crate) fn has_open_application_of(&self, symbol: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(name, args) => {
                (name == symbol && !self.is_ground()) || args.iter().any(|a| a.has_open_application_of(symbol))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => write!(f, "{name}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_and_size() {
        let c = Term::constant("c");
        let t = Term::app("f", vec![Term::app("g", vec![c.clone()]), c.clone()]);
        assert_eq!(c.depth(), 0);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.size(), 4);
        assert_eq!(t.to_string(), "f(g(c),c)");
    }

    #[test]
    fn replace_is_total() {
        let fc = Term::app("f", vec![Term::constant("c")]);
        let t = Term::app("g", vec![fc.clone(), Term::app("f", vec![fc.clone()])]);
        let r = t.replace(&fc, &Term::var("y"));
        assert_eq!(r.to_string(), "g(y,f(y))");
        assert!(!r.contains(&fc));
    }
}
