//! Seeded generators for formulas, values and interpretations used by the
//! sampling suites.

use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::Rng;

use super::interpretation::Interpretation;
use crate::syntax::{Formula, Signature, Term};
use crate::value::Value;

/// A rational in `[0,1]` with denominator at most `max_den`.
pub fn random_value<R: Rng + ?Sized>(rng: &mut R, max_den: u32) -> Value {
    let q = rng.gen_range(1..=max_den.max(1));
    let p = rng.gen_range(0..=q);
    Value::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q))).expect("p <= q")
}

/// A value strictly between 0 and 1.
pub fn random_interior_value<R: Rng + ?Sized>(rng: &mut R, max_den: u32) -> Value {
    let q = rng.gen_range(2..=max_den.max(2));
    let p = rng.gen_range(1..q);
    Value::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q))).expect("p < q")
}

/// Random formulas over a fixed vocabulary.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub predicates: Vec<(String, usize)>,
    pub constants: Vec<String>,
    /// Maximal nesting of connectives and quantifiers.
    pub max_depth: usize,
    pub quantifiers: bool,
}

impl FormulaGen {
    /// Propositional formulas over `A`, `B`, ... (`atoms` of them).
    pub fn propositional(atoms: usize, max_depth: usize) -> FormulaGen {
        let names = ["A", "B", "C", "D", "E", "F", "G", "H"];
        FormulaGen {
            predicates: names.iter().take(atoms).map(|n| (n.to_string(), 0)).collect(),
            constants: Vec::new(),
            max_depth,
            quantifiers: false,
        }
    }

    /// Closed formulas with quantifiers over `P/1`, `Q/1`, `R/2`, `A/0` and a constant `c`.
    pub fn first_order(max_depth: usize) -> FormulaGen {
        FormulaGen {
            predicates: vec![("A".into(), 0), ("P".into(), 1), ("Q".into(), 1), ("R".into(), 2)],
            constants: vec!["c".into()],
            max_depth,
            quantifiers: true,
        }
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.node(rng, self.max_depth, &mut Vec::new())
    }

    fn atom<R: Rng + ?Sized>(&self, rng: &mut R, bound: &[String]) -> Formula {
        if rng.gen_ratio(1, 12) {
            return if rng.gen_bool(0.5) { Formula::Bottom } else { Formula::Top };
        }
        let (name, arity) = self.predicates.choose(rng).expect("non-empty vocabulary");
        let args = (0..*arity)
            .map(|_| {
                let pick_var = !bound.is_empty() && (self.constants.is_empty() || rng.gen_ratio(4, 5));
                if pick_var {
                    Term::var(bound.choose(rng).expect("non-empty").clone())
                } else {
                    Term::constant(self.constants.choose(rng).expect("constants available").clone())
                }
            })
            .collect();
        Formula::atom(name.clone(), args)
    }

    fn node<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize, bound: &mut Vec<String>) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 4) {
            return self.atom(rng, bound);
        }
        let choices = if self.quantifiers { 7 } else { 4 };
        match rng.gen_range(0..choices) {
            0 => Formula::and(self.node(rng, depth - 1, bound), self.node(rng, depth - 1, bound)),
            1 => Formula::or(self.node(rng, depth - 1, bound), self.node(rng, depth - 1, bound)),
            2 => Formula::implies(self.node(rng, depth - 1, bound), self.node(rng, depth - 1, bound)),
            3 => Formula::not(self.node(rng, depth - 1, bound)),
            k => {
                let var = format!("x{}", bound.len());
                bound.push(var.clone());
                let body = self.node(rng, depth - 1, bound);
                bound.pop();
                if k == 4 {
                    Formula::exists(var, body)
                } else {
                    Formula::forall(var, body)
                }
            }
        }
    }
}

/// Interpretation of `sig` over `domain` elements with values drawn by `value`.
pub fn random_interpretation<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    domain: usize,
    mut value: impl FnMut(&mut R) -> Value,
) -> Interpretation {
    let mut i = Interpretation::new(domain.max(1)).expect("non-empty domain");
    for (name, &arity) in &sig.functions {
        let n = i.domain().pow(arity as u32);
        let table = (0..n).map(|_| rng.gen_range(0..i.domain())).collect();
        i.set_function(name, arity, table).expect("sized table");
    }
    for (name, &arity) in &sig.predicates {
        let n = i.domain().pow(arity as u32);
        let table = (0..n).map(|_| value(rng)).collect();
        i.set_predicate(name, arity, table).expect("sized table");
    }
    i
}

/// Random strictly increasing map of `values` into `[0,1]` fixing 0 and 1.
pub fn random_injection<R: Rng + ?Sized>(rng: &mut R, values: &[Value], max_den: u32) -> Vec<(Value, Value)> {
    let mut inner: Vec<Value> = values.iter().filter(|v| !v.is_zero() && !v.is_one()).cloned().collect();
    inner.sort();
    inner.dedup();
    let mut images = Vec::with_capacity(inner.len());
    while images.len() < inner.len() {
        let candidate = random_interior_value(rng, max_den.max(inner.len() as u32 + 2));
        if !images.contains(&candidate) {
            images.push(candidate);
        }
    }
    images.sort();
    let mut pairs: Vec<(Value, Value)> = inner.into_iter().zip(images).collect();
    pairs.push((Value::zero(), Value::zero()));
    pairs.push((Value::one(), Value::one()));
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_formulas_are_closed_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let generator = FormulaGen::first_order(4);
        for _ in 0..200 {
            let f = generator.generate(&mut rng);
            assert!(f.is_closed(), "{f}");
            assert!(Signature::of(&f).is_ok());
        }
        let generator = FormulaGen::propositional(4, 5);
        for _ in 0..200 {
            assert!(generator.generate(&mut rng).is_quantifier_free());
        }
    }

    #[test]
    fn injections_are_strictly_increasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let values: Vec<Value> = (0..6).map(|_| random_value(&mut rng, 9)).collect();
        let pairs = random_injection(&mut rng, &values, 50);
        let mut sorted = pairs.clone();
        sorted.sort();
        assert!(sorted.windows(2).all(|w| w[0].1 < w[1].1));
    }
}
