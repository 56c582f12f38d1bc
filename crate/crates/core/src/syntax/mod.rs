//! Terms, formulas, parsing, prenex forms and Herbrand machinery.

mod formula;
mod herbrand;
mod parser;
mod prenex;
mod term;

pub use formula::{fresh_name, Formula, Quantifier, Signature, SignatureError};
pub use herbrand::{
    herbrand_form, Enumeration, GroundAtom, HerbrandForm, MatrixTemplate, Shape, SkolemSymbol, TemplateError,
};
pub use parser::{formula_lines, parse_formula, parse_with_signature, ParseError};
pub use prenex::{to_prenex, PrenexError, PrenexFormula, Regime, Shift};
pub use term::Term;
