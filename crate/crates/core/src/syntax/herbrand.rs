//! Herbrand form, Herbrand universe and base, and ℓ-instances.

use std::collections::{BTreeSet, HashMap};

use super::formula::{Formula, Quantifier, Signature};
use super::prenex::PrenexFormula;
use super::term::Term;

/// A fresh function symbol standing for one universal variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemSymbol {
    pub name: String,
    /// The universal variable it replaces.
    pub var: String,
    /// Existential variables preceding `var` in the prefix, in order.
    pub args: Vec<String>,
}

impl SkolemSymbol {
    pub fn term(&self) -> Term {
        Term::app(self.name.clone(), self.args.iter().map(Term::var).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandForm {
    /// Purely existential prenex formula.
    pub formula: PrenexFormula,
    pub skolems: Vec<SkolemSymbol>,
}

fn fresh_symbol(stem: &str, start: usize, used: &BTreeSet<String>) -> String {
    (start..).map(|n| format!("{stem}{n}")).find(|s| !used.contains(s)).expect("unbounded")
}

/// Replaces every universal variable by a fresh function of the existential
/// variables before it. Without preceding existentials the replacement is a
/// fresh constant `c0`, `c1`, ...; otherwise a fresh `f0`, `f1`, ...
pub fn herbrand_form(a: &PrenexFormula) -> HerbrandForm {
    let a = if has_duplicate_binders(a) {
        PrenexFormula::from_formula(&a.to_formula().rename_apart()).expect("renaming keeps prenex shape")
    } else {
        a.clone()
    };
    let mut used = a.to_formula().names();
    let mut existentials = Vec::new();
    let mut prefix = Vec::new();
    let mut skolems = Vec::new();
    let mut matrix = a.matrix.clone();
    for (q, v) in &a.prefix {
        match q {
            Quantifier::Exists => {
                existentials.push(v.clone());
                prefix.push((Quantifier::Exists, v.clone()));
            }
            Quantifier::Forall => {
                let name =
                    if existentials.is_empty() { fresh_symbol("c", 0, &used) } else { fresh_symbol("f", 0, &used) };
                used.insert(name.clone());
                let sk = SkolemSymbol { name, var: v.clone(), args: existentials.clone() };
                matrix = matrix.substitute(v, &sk.term());
                skolems.push(sk);
            }
        }
    }
    HerbrandForm { formula: PrenexFormula { prefix, matrix }, skolems }
}

fn has_duplicate_binders(a: &PrenexFormula) -> bool {
    let mut seen = BTreeSet::new();
    !a.prefix.iter().all(|(_, v)| seen.insert(v))
}

/// A ground atom as predicate index and argument term indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: usize,
    pub args: Vec<usize>,
}

/// Lazily generated Herbrand universe and base of a signature.
///
/// Terms are listed by depth, then by function symbol name, then by the
/// indices of their arguments. Atoms are listed 0-ary first, then by the
/// largest argument index, predicate name and argument indices; so
/// `P(c), Q(c), P(f(c)), Q(f(c)), ...` for `{c, f/1, P/1, Q/1}`.
#[derive(Clone, Debug)]
pub struct Enumeration {
    signature: Signature,
    added: Vec<String>,
    symbols: Vec<(String, usize)>,
    symbol_ids: HashMap<String, usize>,
    predicates: Vec<(String, usize)>,
    predicate_ids: HashMap<String, usize>,
    terms: Vec<Term>,
    term_keys: Vec<(usize, Vec<usize>)>,
    app_index: HashMap<(usize, Vec<usize>), usize>,
    layer_ends: Vec<usize>,
    atoms: Vec<GroundAtom>,
    atom_index: HashMap<GroundAtom, usize>,
    atom_stage: Option<usize>,
}

impl Enumeration {
    /// Adds a fresh constant if there is none and a fresh unary `g` if there
    /// is no function of positive arity, so the universe is infinite.
    /// Fresh names avoid `reserved` as well as the signature.
    pub fn new(signature: &Signature, reserved: &BTreeSet<String>) -> Enumeration {
        let mut sig = signature.clone();
        let mut used: BTreeSet<String> = sig.names().union(reserved).cloned().collect();
        let mut added = Vec::new();
        if !sig.has_constant() {
            let c = fresh_symbol("c", 0, &used);
            used.insert(c.clone());
            sig.functions.insert(c.clone(), 0);
            added.push(c);
        }
        if !sig.has_positive_arity_function() {
            let g = if used.contains("g") { fresh_symbol("g", 1, &used) } else { "g".to_string() };
            sig.functions.insert(g.clone(), 1);
            added.push(g);
        }
        let mut symbols: Vec<(String, usize)> = sig.functions.iter().map(|(k, &v)| (k.clone(), v)).collect();
        symbols.sort_by(|a, b| (a.1 > 0, &a.0).cmp(&(b.1 > 0, &b.0)));
        let symbol_ids = symbols.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        let predicates: Vec<(String, usize)> = sig.predicates.iter().map(|(k, &v)| (k.clone(), v)).collect();
        let predicate_ids = predicates.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        Enumeration {
            signature: sig,
            added,
            symbols,
            symbol_ids,
            predicates,
            predicate_ids,
            terms: Vec::new(),
            term_keys: Vec::new(),
            app_index: HashMap::new(),
            layer_ends: Vec::new(),
            atoms: Vec::new(),
            atom_index: HashMap::new(),
            atom_stage: None,
        }
    }

    /// Enumeration for the signature of `f`, with fresh names avoiding all of `f`'s names.
    pub fn for_formula(f: &Formula) -> Result<Enumeration, super::formula::SignatureError> {
        Ok(Enumeration::new(&Signature::of(f)?, &f.names()))
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Symbols added to make the universe infinite.
    pub fn added_symbols(&self) -> &[String] {
        &self.added
    }

    fn push_term(&mut self, sym: usize, args: Vec<usize>) {
        let term = Term::app(self.symbols[sym].0.clone(), args.iter().map(|&i| self.terms[i].clone()).collect());
        self.app_index.insert((sym, args.clone()), self.terms.len());
        self.term_keys.push((sym, args));
        self.terms.push(term);
    }

    fn next_layer(&mut self) {
        if self.layer_ends.is_empty() {
            for sym in 0..self.symbols.len() {
                if self.symbols[sym].1 == 0 {
                    self.push_term(sym, Vec::new());
                }
            }
        } else {
            let prev_end = *self.layer_ends.last().expect("nonempty");
            let prev_start = if self.layer_ends.len() >= 2 { self.layer_ends[self.layer_ends.len() - 2] } else { 0 };
            for sym in 0..self.symbols.len() {
                let arity = self.symbols[sym].1;
                if arity == 0 {
                    continue;
                }
                let mut tuple = vec![0usize; arity];
                loop {
                    if tuple.iter().any(|&i| i >= prev_start) {
                        self.push_term(sym, tuple.clone());
                    }
                    if !odometer(&mut tuple, prev_end) {
                        break;
                    }
                }
            }
        }
        self.layer_ends.push(self.terms.len());
    }

    /// Makes at least `n` terms available.
    pub fn ensure_terms(&mut self, n: usize) {
        while self.terms.len() < n {
            self.next_layer();
        }
    }

    pub fn term(&mut self, i: usize) -> &Term {
        self.ensure_terms(i + 1);
        &self.terms[i]
    }

    /// Terms generated so far.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Var(_) => None,
            Term::App(name, args) => {
                let sym = *self.symbol_ids.get(name)?;
                let args = args.iter().map(|a| self.term_index(a)).collect::<Option<Vec<_>>>()?;
                self.app_index.get(&(sym, args)).copied()
            }
        }
    }

    fn has_positive_predicate(&self) -> bool {
        self.predicates.iter().any(|(_, n)| *n > 0)
    }

    fn next_atom_stage(&mut self) -> bool {
        match self.atom_stage {
            None => {
                for p in 0..self.predicates.len() {
                    if self.predicates[p].1 == 0 {
                        self.push_atom(GroundAtom { predicate: p, args: Vec::new() });
                    }
                }
                self.atom_stage = Some(0);
                true
            }
            Some(_) if !self.has_positive_predicate() => false,
            Some(n) => {
                self.ensure_terms(n + 1);
                for p in 0..self.predicates.len() {
                    let arity = self.predicates[p].1;
                    if arity == 0 {
                        continue;
                    }
                    let mut tuple = vec![0usize; arity];
                    loop {
                        if tuple.contains(&n) {
                            self.push_atom(GroundAtom { predicate: p, args: tuple.clone() });
                        }
                        if !odometer(&mut tuple, n + 1) {
                            break;
                        }
                    }
                }
                self.atom_stage = Some(n + 1);
                true
            }
        }
    }

    fn push_atom(&mut self, atom: GroundAtom) {
        self.atom_index.insert(atom.clone(), self.atoms.len());
        self.atoms.push(atom);
    }

    /// Makes at least `n` atoms available; false if the base is finite and smaller.
    pub fn ensure_atoms(&mut self, n: usize) -> bool {
        while self.atoms.len() < n {
            if !self.next_atom_stage() {
                return false;
            }
        }
        true
    }

    /// Number of atoms generated so far.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, i: usize) -> &GroundAtom {
        &self.atoms[i]
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<usize> {
        self.atom_index.get(atom).copied()
    }

    pub fn predicate_id(&self, name: &str) -> Option<usize> {
        self.predicate_ids.get(name).copied()
    }

    pub fn predicate(&self, id: usize) -> (&str, usize) {
        (&self.predicates[id].0, self.predicates[id].1)
    }

    pub fn atom_formula(&self, i: usize) -> Formula {
        let atom = &self.atoms[i];
        Formula::Atom(
            self.predicates[atom.predicate].0.clone(),
            atom.args.iter().map(|&t| self.terms[t].clone()).collect(),
        )
    }

    /// Looks up the atom id of a ground atomic formula.
    pub fn atom_id_of(&self, f: &Formula) -> Option<usize> {
        match f {
            Formula::Atom(p, args) => {
                let predicate = self.predicate_id(p)?;
                let args = args.iter().map(|a| self.term_index(a)).collect::<Option<Vec<_>>>()?;
                self.atom_id(&GroundAtom { predicate, args })
            }
            _ => None,
        }
    }
}

/// Advances a mixed tuple over `0..base` in lexicographic order.
fn odometer(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TermPattern {
    Var(usize),
    App(usize, Vec<TermPattern>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct AtomPattern {
    predicate: usize,
    args: Vec<TermPattern>,
    /// Largest variable slot occurring, if any.
    last_var: Option<usize>,
}

/// Boolean skeleton of a quantifier-free formula with numbered atom slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Atom(usize),
    Bottom,
    Top,
    And(Box<Shape>, Box<Shape>),
    Or(Box<Shape>, Box<Shape>),
    Implies(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// Evaluates over any chain with the Gödel truth functions.
    pub fn eval<V: Ord + Clone>(&self, atom: &dyn Fn(usize) -> V, bottom: &V, top: &V) -> V {
        match self {
            Shape::Atom(i) => atom(*i),
            Shape::Bottom => bottom.clone(),
            Shape::Top => top.clone(),
            Shape::And(a, b) => a.eval(atom, bottom, top).min(b.eval(atom, bottom, top)),
            Shape::Or(a, b) => a.eval(atom, bottom, top).max(b.eval(atom, bottom, top)),
            Shape::Implies(a, b) => {
                let va = a.eval(atom, bottom, top);
                let vb = b.eval(atom, bottom, top);
                if va <= vb {
                    top.clone()
                } else {
                    vb
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("matrix contains a quantifier")]
    Quantified,
    #[error("symbol `{0}` is not in the enumeration's signature")]
    UnknownSymbol(String),
    #[error("variable `{0}` is not in the prefix")]
    UnboundVariable(String),
}

/// A quantifier-free matrix compiled against an enumeration, so that its
/// instances can be mapped to atom ids quickly.
#[derive(Clone, Debug)]
pub struct MatrixTemplate {
    vars: Vec<String>,
    occurring: Vec<bool>,
    atoms: Vec<AtomPattern>,
    shape: Shape,
    matrix: Formula,
}

impl MatrixTemplate {
    pub fn new(matrix: &Formula, vars: &[String], en: &Enumeration) -> Result<MatrixTemplate, TemplateError> {
        let mut atoms = Vec::new();
        let shape = compile_shape(matrix, vars, en, &mut atoms)?;
        let mut occurring = vec![false; vars.len()];
        for a in &atoms {
            for t in &a.args {
                mark_vars(t, &mut occurring);
            }
        }
        Ok(MatrixTemplate { vars: vars.to_vec(), occurring, atoms, shape, matrix: matrix.clone() })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn atom_slots(&self) -> usize {
        self.atoms.len()
    }

    /// Atom ids of the instance `tuple`, or `None` if some atom has not been enumerated.
    pub fn instance_atoms(&self, tuple: &[usize], en: &Enumeration) -> Option<Vec<usize>> {
        self.atoms.iter().map(|a| ground_atom(a, tuple, en)).collect()
    }

    /// The ground formula `matrix(t̄)`.
    pub fn instantiate(&self, tuple: &[usize], en: &mut Enumeration) -> Formula {
        let max = tuple.iter().copied().max().unwrap_or(0);
        en.ensure_terms(max + 1);
        let mut f = self.matrix.clone();
        for (v, &t) in self.vars.iter().zip(tuple) {
            f = f.substitute(v, &en.terms[t]);
        }
        f
    }

    /// All ℓ-instances: tuples over the universe whose instantiated atoms
    /// are among the first `ell` atoms. Variables that do not occur in the
    /// matrix are fixed to the first term. Lexicographic by term index.
    pub fn ell_instances(&self, ell: usize, en: &mut Enumeration) -> Vec<Vec<usize>> {
        en.ensure_atoms(ell);
        let ell = ell.min(en.atom_count());
        let bound = (0..ell).flat_map(|i| en.atoms[i].args.iter().copied()).max().map_or(1, |m| m + 1);
        en.ensure_terms(bound);
        let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); self.vars.len()];
        for (i, a) in self.atoms.iter().enumerate() {
            match a.last_var {
                Some(v) => by_last[v].push(i),
                None => {
                    if !ground_atom(a, &[], en).is_some_and(|id| id < ell) {
                        return Vec::new();
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut tuple = vec![0usize; self.vars.len()];
        self.extend(0, &mut tuple, bound, ell, &by_last, en, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        slot: usize,
        tuple: &mut Vec<usize>,
        bound: usize,
        ell: usize,
        by_last: &[Vec<usize>],
        en: &Enumeration,
        out: &mut Vec<Vec<usize>>,
    ) {
        if slot == self.vars.len() {
            out.push(tuple.clone());
            return;
        }
        let range = if self.occurring[slot] { bound } else { 1 };
        for t in 0..range {
            tuple[slot] = t;
            let ok = by_last[slot].iter().all(|&a| ground_atom(&self.atoms[a], tuple, en).is_some_and(|id| id < ell));
            if ok {
                self.extend(slot + 1, tuple, bound, ell, by_last, en, out);
            }
        }
    }
}

fn mark_vars(t: &TermPattern, out: &mut [bool]) {
    match t {
        TermPattern::Var(i) => out[*i] = true,
        TermPattern::App(_, args) => args.iter().for_each(|a| mark_vars(a, out)),
    }
}

fn max_var(t: &TermPattern) -> Option<usize> {
    match t {
        TermPattern::Var(i) => Some(*i),
        TermPattern::App(_, args) => args.iter().filter_map(max_var).max(),
    }
}

fn compile_term(t: &Term, vars: &[String], en: &Enumeration) -> Result<TermPattern, TemplateError> {
    match t {
        Term::Var(v) => vars
            .iter()
            .position(|x| x == v)
            .map(TermPattern::Var)
            .ok_or_else(|| TemplateError::UnboundVariable(v.clone())),
        Term::App(name, args) => {
            let sym = *en.symbol_ids.get(name).ok_or_else(|| TemplateError::UnknownSymbol(name.clone()))?;
            let args = args.iter().map(|a| compile_term(a, vars, en)).collect::<Result<_, _>>()?;
            Ok(TermPattern::App(sym, args))
        }
    }
}

fn compile_shape(
    f: &Formula,
    vars: &[String],
    en: &Enumeration,
    atoms: &mut Vec<AtomPattern>,
) -> Result<Shape, TemplateError> {
    Ok(match f {
        Formula::Atom(p, args) => {
            let predicate = en.predicate_id(p).ok_or_else(|| TemplateError::UnknownSymbol(p.clone()))?;
            let args: Vec<TermPattern> = args.iter().map(|a| compile_term(a, vars, en)).collect::<Result<_, _>>()?;
            let last_var = args.iter().filter_map(max_var).max();
            atoms.push(AtomPattern { predicate, args, last_var });
            Shape::Atom(atoms.len() - 1)
        }
        Formula::Bottom => Shape::Bottom,
        Formula::Top => Shape::Top,
        Formula::And(a, b) => {
            Shape::And(Box::new(compile_shape(a, vars, en, atoms)?), Box::new(compile_shape(b, vars, en, atoms)?))
        }
        Formula::Or(a, b) => {
            Shape::Or(Box::new(compile_shape(a, vars, en, atoms)?), Box::new(compile_shape(b, vars, en, atoms)?))
        }
        Formula::Implies(a, b) => {
            Shape::Implies(Box::new(compile_shape(a, vars, en, atoms)?), Box::new(compile_shape(b, vars, en, atoms)?))
        }
        Formula::Forall(..) | Formula::Exists(..) => return Err(TemplateError::Quantified),
    })
}

fn ground_term(t: &TermPattern, tuple: &[usize], en: &Enumeration) -> Option<usize> {
    match t {
        TermPattern::Var(i) => Some(tuple[*i]),
        TermPattern::App(sym, args) => {
            let args = args.iter().map(|a| ground_term(a, tuple, en)).collect::<Option<Vec<_>>>()?;
            en.app_index.get(&(*sym, args)).copied()
        }
    }
}

fn ground_atom(a: &AtomPattern, tuple: &[usize], en: &Enumeration) -> Option<usize> {
    let args = a.args.iter().map(|t| ground_term(t, tuple, en)).collect::<Option<Vec<_>>>()?;
    en.atom_id(&GroundAtom { predicate: a.predicate, args })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, to_prenex, Regime};

    fn prenex(text: &str) -> PrenexFormula {
        to_prenex(&parse_formula(text).unwrap(), Regime::Safe).unwrap()
    }

    #[test]
    fn skolem_terms_follow_preceding_existentials() {
        let h = herbrand_form(&prenex("ex x all y B(x,y)"));
        assert_eq!(h.formula.to_formula(), parse_formula("ex x B(x, f0(x))").unwrap());
        let h = herbrand_form(&prenex("all x ex y B(x,y)"));
        assert_eq!(h.formula.to_formula(), parse_formula("ex y B(c0, y)").unwrap());
        assert_eq!(h.skolems[0].name, "c0");
        let h = herbrand_form(&prenex("ex x B(x)"));
        assert!(h.skolems.is_empty());
    }

    #[test]
    fn unary_chain() {
        let f = parse_formula("P(c) -> P(f(c))").unwrap();
        let mut en = Enumeration::for_formula(&f).unwrap();
        en.ensure_terms(3);
        let shown: Vec<String> = en.terms()[..3].iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, ["c", "f(c)", "f(f(c))"]);
        en.ensure_atoms(3);
        let atoms: Vec<String> = (0..3).map(|i| en.atom_formula(i).to_string()).collect();
        assert_eq!(atoms, ["P(c)", "P(f(c))", "P(f(f(c)))"]);
        assert!(en.added_symbols().is_empty());
    }

    #[test]
    fn atoms_interleave_predicates() {
        let f = parse_formula("P(c) | Q(f(c))").unwrap();
        let mut en = Enumeration::for_formula(&f).unwrap();
        en.ensure_atoms(4);
        let atoms: Vec<String> = (0..4).map(|i| en.atom_formula(i).to_string()).collect();
        assert_eq!(atoms, ["P(c)", "Q(c)", "P(f(c))", "Q(f(c))"]);
    }

    #[test]
    fn augmentation_adds_constant_and_function() {
        let f = parse_formula("A | ~A").unwrap();
        let en = Enumeration::for_formula(&f).unwrap();
        assert_eq!(en.added_symbols(), ["c0", "g"]);
    }

    #[test]
    fn ell_instances_respect_the_prefix_of_the_base() {
        let f = parse_formula("ex x (P(x) -> P(f(x)))").unwrap();
        let p = prenex("ex x (P(x) -> P(f(x)))");
        let mut en = Enumeration::for_formula(&f).unwrap();
        let tpl = MatrixTemplate::new(&p.matrix, &p.vars(), &en).unwrap();
        assert!(tpl.ell_instances(0, &mut en).is_empty());
        assert!(tpl.ell_instances(1, &mut en).is_empty());
        assert_eq!(tpl.ell_instances(2, &mut en), vec![vec![0]]);
        assert_eq!(tpl.ell_instances(3, &mut en), vec![vec![0], vec![1]]);
    }
}
