use alloc::string::String;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{DiffPoly, Rational, Sym};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {pos}")]
    UnexpectedChar { pos: usize, found: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown symbol {name:?} at byte {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("division by a non-constant or zero expression at byte {pos}")]
    BadDivisor { pos: usize },
    #[error("trailing input at byte {pos}")]
    Trailing { pos: usize },
}

pub(super) fn parse(src: &str) -> Result<DiffPoly, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(ParseError::Trailing { pos: p.pos });
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::from_integer(1.into()) / c)),
                        _ => return Err(ParseError::BadDivisor { pos: at }),
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<DiffPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<DiffPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return match self.src.get(self.pos) {
                    Some(&c) => Err(ParseError::UnexpectedChar {
                        pos: self.pos,
                        found: c as char,
                    }),
                    None => Err(ParseError::UnexpectedEnd),
                };
            }
            let k: u32 = core::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or(ParseError::UnexpectedChar {
                    pos: start,
                    found: self.src[start] as char,
                })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffPoly, ParseError> {
        let c = self.peek().ok_or(ParseError::UnexpectedEnd)?;
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    Ok(inner)
                }
                Some(c) => Err(ParseError::UnexpectedChar {
                    pos: self.pos,
                    found: c as char,
                }),
                None => Err(ParseError::UnexpectedEnd),
            }
        } else if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: BigInt = digits.parse().unwrap();
            Ok(DiffPoly::constant(Rational::from_integer(n)))
        } else if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
            symbol(name)
                .map(DiffPoly::var)
                .ok_or_else(|| ParseError::UnknownSymbol {
                    pos: start,
                    name: name.into(),
                })
        } else {
            Err(ParseError::UnexpectedChar {
                pos: self.pos,
                found: c as char,
            })
        }
    }
}

fn symbol(name: &str) -> Option<Sym> {
    match name {
        "x" => Some(Sym::X),
        "t" => Some(Sym::T),
        "nu" => Some(Sym::Nu),
        "h" => Some(Sym::H),
        "tau" => Some(Sym::Tau),
        "u" => Some(Sym::U(0, 0)),
        _ => {
            let rest = name.strip_prefix("u_")?;
            if rest.is_empty() {
                return None;
            }
            let (mut a, mut b) = (0, 0);
            for ch in rest.chars() {
                match ch {
                    'x' => a += 1,
                    't' => b += 1,
                    _ => return None,
                }
            }
            Some(Sym::U(a, b))
        }
    }
}
