//! ℓ-constraints: weak linear orders of `{⊥, A_0, ..., A_{ℓ-1}, ⊤}` with ⊥
//! least and ⊤ greatest, stored as ordered partitions.

use std::fmt;

use crate::semantics::{EvalError, Interpretation};
use crate::syntax::{parse_formula, Formula, Shape};
use crate::value::Value;
use crate::valuesets::TruthValueSet;

/// Position of a class in a constraint; 0 holds ⊥, the last class holds ⊤.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassIndex(pub u32);

/// Atoms are numbered `0..level()`; `class_of[a]` is the class of atom `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    class_of: Vec<u32>,
    classes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("atom {0} is already constrained")]
    DuplicateAtom(usize),
    #[error("atom {atom} cannot be added at level {level}; atoms are added in order")]
    OutOfOrder { atom: usize, level: usize },
    #[error("atom `{0}` is not constrained")]
    AtomOutside(String),
    #[error("formula is not quantifier-free")]
    Quantified,
    #[error("expected {expected} atom values, got {found}")]
    MissingValues { expected: usize, found: usize },
    #[error("constraint with {classes} classes cannot be realized in {set} below {cap}")]
    Unfulfillable { classes: usize, set: String, cap: Value },
    #[error("cap must lie strictly between 0 and 1")]
    BadCap,
    #[error("malformed constraint: {0}")]
    Malformed(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl Constraint {
    /// The 0-constraint `⊥ < ⊤`.
    pub fn root() -> Constraint {
        Constraint { class_of: Vec::new(), classes: 2 }
    }

    /// Builds a constraint from class indices; empty classes are removed.
    pub fn from_classes(class_of: Vec<u32>, classes: u32) -> Result<Constraint, ConstraintError> {
        if classes < 2 || class_of.iter().any(|&c| c >= classes) {
            return Err(ConstraintError::Malformed("class index out of range".into()));
        }
        let mut used = vec![false; classes as usize];
        used[0] = true;
        used[classes as usize - 1] = true;
        for &c in &class_of {
            used[c as usize] = true;
        }
        let mut renumber = vec![0u32; classes as usize];
        let mut next = 0;
        for (i, u) in used.iter().enumerate() {
            renumber[i] = next;
            if *u {
                next += 1;
            }
        }
        Ok(Constraint { class_of: class_of.iter().map(|&c| renumber[c as usize]).collect(), classes: next })
    }

    pub fn level(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes as usize
    }

    pub fn bottom(&self) -> ClassIndex {
        ClassIndex(0)
    }

    pub fn top(&self) -> ClassIndex {
        ClassIndex(self.classes - 1)
    }

    pub fn class_of(&self, atom: usize) -> Option<ClassIndex> {
        self.class_of.get(atom).map(|&c| ClassIndex(c))
    }

    pub fn classes(&self) -> &[u32] {
        &self.class_of
    }

    /// All `(ℓ+1)`-constraints extending this one by the next atom: it
    /// joins class 0, falls in the gap above it, joins class 1, and so on,
    /// giving `2k - 1` children for `k` classes.
    pub fn extensions(&self) -> Vec<Constraint> {
        let k = self.classes;
        let mut out = Vec::with_capacity(2 * k as usize - 1);
        for c in 0..k {
            let mut joined = self.class_of.clone();
            joined.push(c);
            out.push(Constraint { class_of: joined, classes: k });
            if c + 1 < k {
                let mut gap: Vec<u32> = self.class_of.iter().map(|&d| if d > c { d + 1 } else { d }).collect();
                gap.push(c + 1);
                out.push(Constraint { class_of: gap, classes: k + 1 });
            }
        }
        out
    }

    /// [`extensions`](Self::extensions), checking that `atom` is the next atom id.
    pub fn extend_with(&self, atom: usize) -> Result<Vec<Constraint>, ConstraintError> {
        match atom.cmp(&self.level()) {
            std::cmp::Ordering::Less => Err(ConstraintError::DuplicateAtom(atom)),
            std::cmp::Ordering::Greater => Err(ConstraintError::OutOfOrder { atom, level: self.level() }),
            std::cmp::Ordering::Equal => Ok(self.extensions()),
        }
    }

    /// The constraint on the first `level` atoms.
    pub fn restrict(&self, level: usize) -> Constraint {
        Constraint::from_classes(self.class_of[..level.min(self.level())].to_vec(), self.classes)
            .expect("restriction of a valid constraint")
    }

    /// Order-type value of a compiled quantifier-free formula whose atom
    /// slots map to the atom ids in `atoms`.
    pub fn eval_shape(&self, shape: &Shape, atoms: &[usize]) -> ClassIndex {
        let class = |slot: usize| self.class_of[atoms[slot]];
        ClassIndex(shape.eval(&class, &0, &(self.classes - 1)))
    }

    /// Order-type value of a quantifier-free formula; `atom_id` resolves
    /// its atoms to ids below `level()`.
    pub fn eval_formula(
        &self,
        f: &Formula,
        atom_id: &dyn Fn(&Formula) -> Option<usize>,
    ) -> Result<ClassIndex, ConstraintError> {
        let top = self.classes - 1;
        fn go(
            c: &Constraint,
            f: &Formula,
            atom_id: &dyn Fn(&Formula) -> Option<usize>,
            top: u32,
        ) -> Result<u32, ConstraintError> {
            Ok(match f {
                Formula::Atom(..) => {
                    let id = atom_id(f).filter(|&i| i < c.level());
                    c.class_of[id.ok_or_else(|| ConstraintError::AtomOutside(f.to_string()))?]
                }
                Formula::Bottom => 0,
                Formula::Top => top,
                Formula::And(a, b) => go(c, a, atom_id, top)?.min(go(c, b, atom_id, top)?),
                Formula::Or(a, b) => go(c, a, atom_id, top)?.max(go(c, b, atom_id, top)?),
                Formula::Implies(a, b) => {
                    let va = go(c, a, atom_id, top)?;
                    let vb = go(c, b, atom_id, top)?;
                    if va <= vb {
                        top
                    } else {
                        vb
                    }
                }
                Formula::Forall(..) | Formula::Exists(..) => return Err(ConstraintError::Quantified),
            })
        }
        go(self, f, atom_id, top).map(ClassIndex)
    }

    /// Whether atom values (indexed by atom id) realize exactly this order:
    /// class 0 is value 0, the top class value 1, and classes are strictly
    /// increasing with equal values inside a class.
    pub fn fulfilled_by(&self, values: &[Value]) -> Result<bool, ConstraintError> {
        if values.len() < self.level() {
            return Err(ConstraintError::MissingValues { expected: self.level(), found: values.len() });
        }
        let value_of = |a: usize| &values[a];
        for a in 0..self.level() {
            let c = self.class_of[a];
            if (c == 0) != value_of(a).is_zero() || (c == self.classes - 1) != value_of(a).is_one() {
                return Ok(false);
            }
            for b in 0..self.level() {
                let d = self.class_of[b];
                if (c < d) != (value_of(a) < value_of(b)) || (c == d) != (value_of(a) == value_of(b)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// [`fulfilled_by`](Self::fulfilled_by) with the atom values read from an interpretation.
    pub fn fulfills(&self, i: &Interpretation, atoms: &[Formula]) -> Result<bool, ConstraintError> {
        if atoms.len() < self.level() {
            return Err(ConstraintError::MissingValues { expected: self.level(), found: atoms.len() });
        }
        let values = atoms[..self.level()].iter().map(|a| i.eval(a)).collect::<Result<Vec<_>, _>>()?;
        self.fulfilled_by(&values)
    }

    /// Values for every atom: class 0 gets 0, the top class 1 and the
    /// classes in between strictly increasing members of `vset` below `cap`.
    pub fn realize(&self, vset: &TruthValueSet, cap: &Value) -> Result<Vec<Value>, ConstraintError> {
        if cap.is_zero() || cap.is_one() {
            return Err(ConstraintError::BadCap);
        }
        let inner = self.class_count() - 2;
        let points = vset.interior_points(cap, inner).ok_or_else(|| ConstraintError::Unfulfillable {
            classes: self.class_count(),
            set: vset.to_string(),
            cap: cap.clone(),
        })?;
        let class_value = |c: u32| -> Value {
            if c == 0 {
                Value::zero()
            } else if c == self.classes - 1 {
                Value::one()
            } else {
                points[c as usize - 1].clone()
            }
        };
        Ok(self.class_of.iter().map(|&c| class_value(c)).collect())
    }

    /// Text form with classes in ascending order: `bot | P(c) | P(f(c)) Q(c) | top`.
    pub fn render(&self, label: &dyn Fn(usize) -> String) -> String {
        let mut classes: Vec<Vec<String>> = vec![Vec::new(); self.class_count()];
        classes[0].push("bot".into());
        for (a, &c) in self.class_of.iter().enumerate() {
            classes[c as usize].push(label(a));
        }
        classes[self.class_count() - 1].push("top".into());
        classes.iter().map(|c| c.join(" ")).collect::<Vec<_>>().join(" | ")
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|a| format!("A{a}")))
    }
}

/// Splits a class on whitespace outside parentheses.
fn class_items(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if let Some(s) = start.take() {
                out.push(&text[s..i]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(&text[s..]);
    }
    out
}

/// Parses the text form; atom ids follow order of appearance.
pub fn parse_constraint(text: &str) -> Result<(Constraint, Vec<Formula>), ConstraintError> {
    let classes: Vec<&str> = text.split('|').collect();
    let mut atoms: Vec<Formula> = Vec::new();
    let mut class_of = Vec::new();
    let (mut bot, mut top) = (None, None);
    for (c, items) in classes.iter().enumerate() {
        for item in class_items(items) {
            match item {
                "bot" | "⊥" => bot = Some(c),
                "top" | "⊤" => top = Some(c),
                _ => {
                    let f = parse_formula(item).map_err(|e| ConstraintError::Malformed(e.to_string()))?;
                    if !matches!(f, Formula::Atom(..)) || !f.free_vars().is_empty() {
                        return Err(ConstraintError::Malformed(format!("`{item}` is not a ground atom")));
                    }
                    if atoms.contains(&f) {
                        return Err(ConstraintError::Malformed(format!("`{item}` appears twice")));
                    }
                    atoms.push(f);
                    class_of.push(c as u32);
                }
            }
        }
    }
    if bot != Some(0) || top != Some(classes.len() - 1) || classes.len() < 2 {
        return Err(ConstraintError::Malformed("bot must open the first class and top the last".into()));
    }
    if classes.iter().enumerate().any(|(i, c)| class_items(c).is_empty() && i > 0 && i + 1 < classes.len()) {
        return Err(ConstraintError::Malformed("empty class".into()));
    }
    Ok((Constraint { class_of, classes: classes.len() as u32 }, atoms))
}
