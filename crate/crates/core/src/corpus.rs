//! Formula lists bundled with the library.

use crate::syntax::{formula_lines, parse_formula, Formula, ParseError};

pub const VALID: &str = include_str!("../corpus/valid.txt");
pub const INVALID: &str = include_str!("../corpus/invalid.txt");

/// Parses a formula list, reporting the line of the first error.
pub fn parse_list(text: &str) -> Result<Vec<Formula>, (usize, ParseError)> {
    formula_lines(text).map(|(n, line)| parse_formula(line).map_err(|e| (n, e))).collect()
}

pub fn valid() -> Vec<Formula> {
    parse_list(VALID).expect("bundled corpus parses")
}

pub fn invalid() -> Vec<Formula> {
    parse_list(INVALID).expect("bundled corpus parses")
}
