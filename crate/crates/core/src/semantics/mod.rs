//! Finite-domain semantics over exact rational truth values.

mod brute;
mod collapse;
mod eval;
mod interpretation;
pub mod random;

pub use brute::{
    brute_force_validity, BruteForce, BruteForceError, BruteForceResult, SampleError, TruthValueSample, DEFAULT_GUARD,
};
pub use collapse::{check_order_invariance, collapse_above, CollapseError, InjectionError, TruthValueInjection};
pub use interpretation::{EvalError, Interpretation, InterpretationError};
