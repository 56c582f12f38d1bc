//! Recursive-descent parser for the formula language.
//!
//! ```text
//! impl  := disj ["->" impl]
//! disj  := conj {"|" conj}
//! conj  := unary {"&" unary}
//! unary := "~" unary | ("all" | "ex") IDENT unary | "true" | "false"
//!        | atom | "(" impl ")"
//! atom  := IDENT ["(" term {"," term} ")"]
//! ```
//!
//! Quantifiers bind as tightly as negation: `all x P(x) -> Q` is
//! `(all x P(x)) -> Q`. An identifier in argument position is a variable
//! when a quantifier in scope binds it and a constant otherwise. The
//! Unicode symbols `∀ ∃ ∧ ∨ → ¬ ⊥ ⊤` are accepted as aliases.

use super::formula::{Formula, Quantifier, Signature, SignatureError};
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    And,
    Or,
    Arrow,
    Not,
    All,
    Ex,
    True,
    False,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Not => "`~`".into(),
            Tok::All => "`all`".into(),
            Tok::Ex => "`ex`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '~' | '¬' => Tok::Not,
            '→' => Tok::Arrow,
            '∀' => Tok::All,
            '∃' => Tok::Ex,
            '⊥' => Tok::False,
            '⊤' => Tok::True,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            c if is_ident_start(c) => {
                while i + 1 < chars.len() && is_ident_continue(chars[i + 1]) {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "all" => Tok::All,
                    "ex" => Tok::Ex,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(ParseError::Syntax { position: start, message: format!("unexpected character `{other}`") })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    bound: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn position(&self) -> usize {
        self.toks[self.pos].0
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { position: self.position(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.advance();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.advance();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.advance() {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::True => Ok(Formula::Top),
            Tok::False => Ok(Formula::Bottom),
            q @ (Tok::All | Tok::Ex) => {
                let var = match self.advance() {
                    Tok::Ident(v) => v,
                    other => {
                        if other != Tok::Eof {
                            self.pos -= 1;
                        }
                        return self.error(format!("expected a variable after quantifier, found {}", other.describe()));
                    }
                };
                self.bound.push(var.clone());
                let body = self.unary();
                self.bound.pop();
                let q = if q == Tok::All { Quantifier::Forall } else { Quantifier::Exists };
                Ok(Formula::quantified(q, var, body?))
            }
            Tok::LParen => {
                let inner = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let args = self.arguments()?;
                Ok(Formula::Atom(name, args))
            }
            other => {
                if other != Tok::Eof {
                    self.pos -= 1;
                }
                self.error(format!("expected a formula, found {}", other.describe()))
            }
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Ok(Vec::new());
        }
        self.advance();
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.advance() {
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    Ok(Term::App(name, self.arguments()?))
                } else if self.bound.contains(&name) {
                    Ok(Term::Var(name))
                } else {
                    Ok(Term::constant(name))
                }
            }
            other => {
                if other != Tok::Eof {
                    self.pos -= 1;
                }
                self.error(format!("expected a term, found {}", other.describe()))
            }
        }
    }
}

/// Parses a single formula, checking that every symbol is used with one arity.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_with_signature(text, &Signature::default())
}

/// Like [`parse_formula`], additionally checking arities against `declared`.
pub fn parse_with_signature(text: &str, declared: &Signature) -> Result<Formula, ParseError> {
    let mut parser = Parser { toks: tokenize(text)?, pos: 0, bound: Vec::new() };
    let f = parser.implication()?;
    if *parser.peek() != Tok::Eof {
        return parser.error(format!("unexpected {}", parser.peek().describe()));
    }
    let mut sig = declared.clone();
    sig.absorb(&f)?;
    Ok(f)
}

/// Non-empty, non-comment lines of a formula file with their 1-based line numbers.
pub fn formula_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(cut) => &line[..cut],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> Formula {
        Formula::prop(name)
    }

    #[test]
    fn linearity() {
        let f = parse_formula("(A -> B) | (B -> A)").unwrap();
        assert_eq!(f, Formula::or(Formula::implies(a("A"), a("B")), Formula::implies(a("B"), a("A"))));
    }

    #[test]
    fn negation_is_implication_to_bottom() {
        let f = parse_formula("~P(c)").unwrap();
        assert_eq!(f, Formula::implies(Formula::atom("P", vec![Term::constant("c")]), Formula::Bottom));
    }

    #[test]
    fn bound_identifiers_become_variables() {
        let f = parse_formula("ex x (P(x) -> all y P(y))").unwrap();
        let px = Formula::atom("P", vec![Term::var("x")]);
        let py = Formula::atom("P", vec![Term::var("y")]);
        assert_eq!(f, Formula::exists("x", Formula::implies(px, Formula::forall("y", py))));
        let g = parse_formula("P(x)").unwrap();
        assert_eq!(g, Formula::atom("P", vec![Term::constant("x")]));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("A -> B -> C").unwrap();
        assert_eq!(f, Formula::implies(a("A"), Formula::implies(a("B"), a("C"))));
    }

    #[test]
    fn unicode_aliases() {
        let f = parse_formula("∀x (P(x) ∧ ¬Q) → ∃y P(y) ∨ ⊥").unwrap();
        let g = parse_formula("all x (P(x) & ~Q) -> ex y P(y) | false").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn reports_positions() {
        match parse_formula("P(c) & ") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("unexpected {other:?}"),
        }
        match parse_formula("A $ B") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(parse_formula("P(c) | P(c,c)"), Err(ParseError::Signature(_))));
        let mut sig = Signature::default();
        sig.predicates.insert("P".into(), 2);
        assert!(matches!(parse_with_signature("P(c)", &sig), Err(ParseError::Signature(_))));
    }

    #[test]
    fn file_lines_skip_comments() {
        let text = "# header\nA | ~A  # excluded middle\n\n  B\n";
        let lines: Vec<_> = formula_lines(text).collect();
        assert_eq!(lines, vec![(2, "A | ~A"), (4, "B")]);
    }
}
