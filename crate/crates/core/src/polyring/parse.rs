//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('+' | '-') factor | power
//! power  := atom (('^' | '**') INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2x`) is rejected.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Monomial, PolyError, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Pow,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(v)));
                continue;
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => {
                if bytes.get(i + 1) == Some(&b'*') {
                    i += 1;
                    out.push((start, Tok::Pow));
                } else {
                    out.push((start, Tok::Star));
                }
            }
            b'^' => out.push((start, Tok::Pow)),
            b'/' => out.push((start, Tok::Slash)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            _ => {
                return Err(PolyError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.factor()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Pow) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Int(k)) => {
                    let k: u32 = match u32::try_from(&k) {
                        Ok(k) if k <= 10_000 => k,
                        _ => {
                            self.pos -= 1;
                            return self.err("exponent too large");
                        }
                    };
                    return Ok(base.pow(k));
                }
                _ => {
                    self.pos -= 1;
                    return self.err("expected a non-negative integer exponent");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            return Ok(Polynomial::constant(self.ring, Rational::new(n, d)))
                        }
                        Some(Tok::Int(_)) => {
                            self.pos -= 1;
                            return self.err("zero denominator");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.err("expected an integer denominator");
                        }
                    }
                }
                Ok(Polynomial::constant(self.ring, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => Ok(Polynomial::monomial(
                    self.ring,
                    Monomial::var(i, self.ring.len()),
                    Rational::from_integer(1.into()),
                )),
                None => Err(PolyError::UnknownVariable(name)),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            Some(_) => {
                self.pos -= 1;
                Err(PolyError::Syntax {
                    pos: at,
                    msg: "expected a number, variable or `(`".into(),
                })
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial over `ring`.
pub fn parse(text: &str, ring: &Ring) -> Result<Polynomial, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        ring,
    };
    let poly = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str]) -> Ring {
        Ring::new(names.iter().copied()).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn simple_terms() {
        let r = ring(&["x", "y"]);
        let f = parse("x^2+y^2-1", &r).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coefficient(&Monomial::new(vec![2, 0])), q(1, 1));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 2])), q(1, 1));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 0])), q(-1, 1));
    }

    #[test]
    fn distributes_products() {
        let r = ring(&["x", "y", "e"]);
        let f = parse("2*e*(x*y - 1)", &r).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&Monomial::new(vec![1, 1, 1])), q(2, 1));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 0, 1])), q(-2, 1));
    }

    #[test]
    fn both_power_spellings_and_rationals() {
        let r = ring(&["R", "x"]);
        assert_eq!(parse("R**5*x", &r).unwrap(), parse("R^5*x", &r).unwrap());
        let f = parse("-3/4*x + (1/2)^2", &r).unwrap();
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 1])), q(-3, 4));
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 0])), q(1, 4));
        assert_eq!(parse("-x^2", &r).unwrap(), -&parse("x*x", &r).unwrap());
    }

    #[test]
    fn errors() {
        let r = ring(&["x", "y"]);
        assert_eq!(parse("x + z", &r), Err(PolyError::UnknownVariable("z".into())));
        assert!(matches!(parse("2x", &r), Err(PolyError::Syntax { pos: 1, .. })));
        assert!(matches!(parse("x^y", &r), Err(PolyError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(x + y", &r), Err(PolyError::Syntax { pos: 6, .. })));
        assert!(matches!(parse("x + ", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("x # y", &r), Err(PolyError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("1/0", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("", &r), Err(PolyError::Syntax { .. })));
    }
}
