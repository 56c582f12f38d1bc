pub mod constraints;
pub mod corpus;
pub mod exec;
pub mod prover;
pub mod reduction;
pub mod semantics;
pub mod syntax;
pub mod value;
pub mod valuesets;

pub use exec::Execution;
pub use value::Value;
