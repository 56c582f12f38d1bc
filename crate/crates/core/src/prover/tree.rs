//! Breadth-first semantic trees over ℓ-constraints.

use std::time::{Duration, Instant};

use num::{BigInt, BigRational};

use super::ProverError;
use crate::constraints::Constraint;
use crate::exec::{map_slice, Execution};
use crate::syntax::{Enumeration, Formula, MatrixTemplate, PrenexFormula, Shape, Term};
use crate::value::Value;
use crate::valuesets::{Classification, TruthValueSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Deepest level expanded; nodes at this level are checked but not extended.
    pub max_level: usize,
    pub max_nodes: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_level: 8, max_nodes: 200_000, time_limit: None }
    }
}

impl Budget {
    pub fn levels(max_level: usize) -> Budget {
        Budget { max_level, ..Budget::default() }
    }
}

/// Why the tree was left open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    LevelLimit,
    NodeLimit,
    TimeLimit,
}

impl StopReason {
    pub fn label(self) -> &'static str {
        match self {
            StopReason::LevelLimit => "level limit",
            StopReason::NodeLimit => "node limit",
            StopReason::TimeLimit => "time limit",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    /// Deepest level whose nodes were checked.
    pub max_level: usize,
}

/// How atom values are chosen when a constraint has to be realized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Realization {
    pub vset: TruthValueSet,
    pub cap: Value,
    /// `|V|` for finite sets; constraints with more classes are unfulfillable.
    pub max_classes: Option<usize>,
}

impl Realization {
    pub fn for_set(vset: &TruthValueSet) -> Result<Realization, ProverError> {
        match vset.classification() {
            Classification::Finite(n) => {
                let below = vset.largest_below_one().expect("finite sets have a value below 1");
                Ok(Realization { vset: vset.clone(), cap: below.midpoint(&Value::one()), max_classes: Some(n) })
            }
            Classification::Uncountable { kernel, .. } => {
                // Nine tenths of the way up the highest perfect piece.
                let (lo, hi) = kernel
                    .pieces()
                    .iter()
                    .filter(|p| p.is_perfect())
                    .map(|p| p.bounds())
                    .max()
                    .expect("uncountable sets have a perfect piece");
                let cap = &lo + (&hi - &lo) * BigRational::new(BigInt::from(9), BigInt::from(10));
                Ok(Realization {
                    vset: vset.clone(),
                    cap: Value::from_rational(cap).expect("inside [0,1]"),
                    max_classes: None,
                })
            }
            Classification::CountablyInfinite => Err(ProverError::CountableValueSet(vset.to_string())),
        }
    }

    fn admits(&self, c: &Constraint) -> bool {
        self.max_classes.is_none_or(|n| c.class_count() <= n)
    }
}

#[derive(Clone, Debug)]
pub enum TreeOutcome {
    /// Every branch ends in a leaf; one witness tuple per leaf, duplicates
    /// removed, in breadth-first order.
    Closed { witnesses: Vec<Vec<usize>> },
    /// The budget ran out with `open` nodes left at the last level.
    Open { reason: StopReason, open: Vec<Constraint> },
    /// The Herbrand base is finite and this constraint on all of it has no
    /// instance at the top.
    Exhausted { constraint: Constraint },
}

/// The semantic tree of a purely existential prenex formula.
#[derive(Clone, Debug)]
pub struct SemanticTree {
    pub formula: PrenexFormula,
    pub outcome: TreeOutcome,
    pub stats: TreeStats,
    pub(crate) enumeration: Enumeration,
    pub(crate) template: MatrixTemplate,
}

/// First instance (by position) evaluating to the top class under `c`.
fn first_top(c: &Constraint, shape: &Shape, instances: &[Vec<usize>]) -> Option<usize> {
    let top = c.top();
    instances.iter().position(|atoms| c.eval_shape(shape, atoms) == top)
}

impl SemanticTree {
    pub(crate) fn build(
        formula: &PrenexFormula,
        realization: &Realization,
        budget: Budget,
        exec: Execution,
    ) -> Result<SemanticTree, ProverError> {
        if !formula.is_existential() {
            return Err(ProverError::NotExistential(formula.to_formula()));
        }
        if budget.max_nodes == 0 {
            return Err(ProverError::Budget("max_nodes must be positive".into()));
        }
        let started = Instant::now();
        let mut en = Enumeration::for_formula(&formula.to_formula())?;
        let template = MatrixTemplate::new(&formula.matrix, &formula.vars(), &en)?;
        let shape = template.shape();

        let mut stats = TreeStats { nodes: 1, ..TreeStats::default() };
        let mut witnesses: Vec<Vec<usize>> = Vec::new();
        let mut level_nodes = vec![Constraint::root()];
        let mut level = 0;
        let outcome = loop {
            stats.max_level = level;
            let tuples = template.ell_instances(level, &mut en);
            let mut fresh_tuples = Vec::new();
            let mut fresh_atoms = Vec::new();
            for t in tuples {
                let atoms = template.instance_atoms(&t, &en).expect("ℓ-instances use enumerated atoms");
                // Instances over X_{ℓ-1} were already checked at the parent.
                if level == 0 || atoms.contains(&(level - 1)) {
                    fresh_tuples.push(t);
                    fresh_atoms.push(atoms);
                }
            }
            let tops = map_slice(exec, &level_nodes, |c| first_top(c, shape, &fresh_atoms));
            let mut open = Vec::new();
            for (c, top) in level_nodes.into_iter().zip(tops) {
                match top {
                    Some(i) => {
                        stats.leaves += 1;
                        if !witnesses.contains(&fresh_tuples[i]) {
                            witnesses.push(fresh_tuples[i].clone());
                        }
                    }
                    None => open.push(c),
                }
            }
            if open.is_empty() {
                break TreeOutcome::Closed { witnesses };
            }
            if level >= budget.max_level {
                break TreeOutcome::Open { reason: StopReason::LevelLimit, open };
            }
            if budget.time_limit.is_some_and(|t| started.elapsed() > t) {
                break TreeOutcome::Open { reason: StopReason::TimeLimit, open };
            }
            if !en.ensure_atoms(level + 1) {
                let constraint = open.into_iter().next().expect("non-empty");
                break TreeOutcome::Exhausted { constraint };
            }
            let children: Vec<Vec<Constraint>> =
                map_slice(exec, &open, |c| c.extensions().into_iter().filter(|e| realization.admits(e)).collect());
            let count: usize = children.iter().map(Vec::len).sum();
            if stats.nodes + count > budget.max_nodes {
                break TreeOutcome::Open { reason: StopReason::NodeLimit, open };
            }
            stats.nodes += count;
            level_nodes = children.into_iter().flatten().collect();
            level += 1;
        };
        Ok(SemanticTree { formula: formula.clone(), outcome, stats, enumeration: en, template })
    }

    pub fn enumeration(&self) -> &Enumeration {
        &self.enumeration
    }

    /// Term tuple of a witness given as term indices.
    pub fn terms_of(&self, tuple: &[usize]) -> Vec<Term> {
        tuple.iter().map(|&i| self.enumeration.terms()[i].clone()).collect()
    }

    /// The ground instance of the matrix for a tuple of term indices.
    pub fn instance(&mut self, tuple: &[usize]) -> Formula {
        self.template.instantiate(tuple, &mut self.enumeration)
    }
}

/// A valuation of the first `level` Herbrand atoms realizing an open
/// constraint; the functions of the Herbrand universe are interpreted by
/// the term constructors themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandCandidate {
    pub constraint: Constraint,
    pub atoms: Vec<Formula>,
    pub values: Vec<Value>,
    pub cap: Value,
    pub level: usize,
    /// Number of ℓ-instances evaluated against the cap.
    pub checked_instances: usize,
    /// Largest value of a checked instance.
    pub max_instance_value: Value,
}

impl HerbrandCandidate {
    pub fn value_of(&self, atom: &Formula) -> Option<&Value> {
        self.atoms.iter().position(|a| a == atom).map(|i| &self.values[i])
    }

    /// Every checked instance stays below the cap.
    pub fn verified(&self) -> bool {
        self.max_instance_value < self.cap
    }

    /// `bot | P(c0) | ... | top` with the atoms spelled out.
    pub fn render_constraint(&self) -> String {
        self.constraint.render(&|a| self.atoms[a].to_string())
    }
}

impl SemanticTree {
    /// Realizes the open node with the most classes (the first such in
    /// breadth-first order) and evaluates every ℓ-instance under it.
    pub(crate) fn candidate(&mut self, realization: &Realization) -> Result<Option<HerbrandCandidate>, ProverError> {
        let open = match &self.outcome {
            TreeOutcome::Open { open, .. } => open,
            _ => return Ok(None),
        };
        let mut best = &open[0];
        for c in open {
            if c.class_count() > best.class_count() {
                best = c;
            }
        }
        let constraint = best.clone();
        let level = constraint.level();
        let values = constraint.realize(&realization.vset, &realization.cap)?;
        let atoms: Vec<Formula> = (0..level).map(|i| self.enumeration.atom_formula(i)).collect();
        let tuples = self.template.ell_instances(level, &mut self.enumeration);
        let mut max_instance_value = Value::zero();
        for t in &tuples {
            let ids = self.template.instance_atoms(t, &self.enumeration).expect("enumerated");
            let v = self.template.shape().eval(&|slot| values[ids[slot]].clone(), &Value::zero(), &Value::one());
            if v > max_instance_value {
                max_instance_value = v;
            }
        }
        Ok(Some(HerbrandCandidate {
            constraint,
            atoms,
            values,
            cap: realization.cap.clone(),
            level,
            checked_instances: tuples.len(),
            max_instance_value,
        }))
    }
}
