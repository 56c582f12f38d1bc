//! Value-set literals:
//! `Vm(5)`, `Vup`, `Vdown`, `[0,1]`, `cantor`, `cantor(1/3,2/3)`,
//! `point(3/4)`, `{0, 1/2, 1}` and `union(...)` of any of these.

use num::{BigInt, BigRational, Signed, Zero};

use super::pieces::{Family, Piece, SymbolicValueSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValueSetParseError {
    #[error("value set syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("empty interval [{0},{1}]")]
    EmptyInterval(String, String),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ValueSetParseError> {
        Err(ValueSetParseError::Syntax { position: self.text[..self.pos].chars().count(), message: message.into() })
    }

    fn eat(&mut self, c: char) -> Result<(), ValueSetParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !(c.is_alphanumeric() || c == '_' || c == '↑' || c == '↓') {
                break;
            }
            self.pos += c.len_utf8();
        }
        self.text[start..self.pos].to_string()
    }

    fn number(&mut self) -> Result<BigRational, ValueSetParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !(c.is_ascii_digit() || c == '/' || c == '.' || c == '-') {
                break;
            }
            self.pos += 1;
        }
        let raw = &self.text[start..self.pos];
        let parsed = parse_number(raw);
        match parsed {
            Some(x) if x.is_negative() || x > BigRational::from_integer(1.into()) => {
                Err(ValueSetParseError::OutOfRange(raw.to_string()))
            }
            Some(x) => Ok(x),
            None => {
                self.pos = start;
                self.error(format!("expected a number, found `{raw}`"))
            }
        }
    }
}

fn parse_number(raw: &str) -> Option<BigRational> {
    if let Some((int, frac)) = raw.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().ok()? };
        let digits: BigInt = frac.parse().ok()?;
        let scale = num::pow(BigInt::from(10), frac.len());
        return Some(BigRational::from_integer(int) + BigRational::new(digits, scale));
    }
    crate::value::parse_rational(raw).ok()
}

fn piece_list(c: &mut Cursor<'_>) -> Result<Vec<Piece>, ValueSetParseError> {
    let mut out = expr(c)?;
    while c.peek() == Some(',') {
        c.eat(',')?;
        out.extend(expr(c)?);
    }
    Ok(out)
}

fn expr(c: &mut Cursor<'_>) -> Result<Vec<Piece>, ValueSetParseError> {
    match c.peek() {
        Some('[') => {
            c.eat('[')?;
            let lo = c.number()?;
            c.eat(',')?;
            let hi = c.number()?;
            c.eat(']')?;
            if lo > hi {
                return Err(ValueSetParseError::EmptyInterval(lo.to_string(), hi.to_string()));
            }
            Ok(vec![Piece::Interval(lo, hi)])
        }
        Some('{') => {
            c.eat('{')?;
            let mut out = vec![Piece::Point(c.number()?)];
            while c.peek() == Some(',') {
                c.eat(',')?;
                out.push(Piece::Point(c.number()?));
            }
            c.eat('}')?;
            Ok(out)
        }
        Some(ch) if ch.is_alphabetic() => {
            let start = c.pos;
            let word = c.word();
            match word.as_str() {
                "Vup" | "V↑" => Ok(vec![Piece::Named(Family::Up)]),
                "Vdown" | "V↓" => Ok(vec![Piece::Named(Family::Down)]),
                "Vm" | "V" => {
                    c.eat('(')?;
                    c.skip_ws();
                    let s = c.pos;
                    while c.text[c.pos..].starts_with(|ch: char| ch.is_ascii_digit()) {
                        c.pos += 1;
                    }
                    let m: usize = match c.text[s..c.pos].parse() {
                        Ok(m) if m >= 2 => m,
                        _ => {
                            c.pos = s;
                            return c.error("expected an integer m >= 2");
                        }
                    };
                    c.eat(')')?;
                    Ok(vec![Piece::Finite(m)])
                }
                "cantor" => {
                    if c.peek() == Some('(') {
                        c.eat('(')?;
                        let lo = c.number()?;
                        c.eat(',')?;
                        let hi = c.number()?;
                        c.eat(')')?;
                        if lo > hi {
                            return Err(ValueSetParseError::EmptyInterval(lo.to_string(), hi.to_string()));
                        }
                        Ok(vec![Piece::Cantor(lo, hi)])
                    } else {
                        Ok(vec![Piece::Cantor(BigRational::zero(), BigRational::from_integer(1.into()))])
                    }
                }
                "point" => {
                    c.eat('(')?;
                    let x = c.number()?;
                    c.eat(')')?;
                    Ok(vec![Piece::Point(x)])
                }
                "union" => {
                    c.eat('(')?;
                    let pieces = piece_list(c)?;
                    c.eat(')')?;
                    Ok(pieces)
                }
                _ => {
                    c.pos = start;
                    c.error(format!("unknown value set `{word}`"))
                }
            }
        }
        _ => c.error("expected a value set"),
    }
}

pub fn parse_value_set(text: &str) -> Result<SymbolicValueSet, ValueSetParseError> {
    let mut c = Cursor { text, pos: 0 };
    let pieces = expr(&mut c)?;
    if c.peek().is_some() {
        return c.error("trailing input");
    }
    Ok(SymbolicValueSet::new(pieces))
}
