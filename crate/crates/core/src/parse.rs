//! Expression parser for algebra and localized elements.
//!
//! Tokens: `Z Zs W Ws T q i Delta`, integers, `+ - * / ^ ( )` and
//! juxtaposition for multiplication. A `*` written directly after `Z` or `W`
//! is the adjoint (`Z*W` is `Zs W`); elsewhere `*` multiplies. Division and
//! negative powers need an invertible right-hand side.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Generator};
use crate::localization::LocalElement;
use crate::scalar::QScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Gen(Generator),
    Q,
    I,
    Delta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Num(text.parse().expect("ascii digits"))));
            i = j;
            continue;
        }
        if c.is_alphabetic() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_alphanumeric() {
                j += 1;
            }
            let word: String = chars[i..j].iter().map(|(_, c)| c).collect();
            let starred = j < chars.len() && chars[j].1 == '*' && (word == "Z" || word == "W");
            let tok = match (word.as_str(), starred) {
                ("Z", false) => Tok::Gen(Generator::Z),
                ("Z", true) | ("Zs", _) => Tok::Gen(Generator::Zs),
                ("W", false) => Tok::Gen(Generator::W),
                ("W", true) | ("Ws", _) => Tok::Gen(Generator::Ws),
                ("T", _) => Tok::Gen(Generator::T),
                ("q", _) => Tok::Q,
                ("i", _) => Tok::I,
                ("Delta", _) => Tok::Delta,
                _ => return Err(ParseError { pos, msg: format!("unknown symbol '{}'", word) }),
            };
            out.push((pos, tok));
            i = if starred { j + 1 } else { j };
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError { pos, msg: format!("unexpected character '{}'", c) }),
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos(), msg: msg.into() }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LocalElement, ParseError> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                acc = acc.checked_add(&rhs).map_err(|e| ParseError { pos, msg: e.to_string() })?;
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                acc = acc.checked_sub(&rhs).map_err(|e| ParseError { pos, msg: e.to_string() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Gen(_) | Tok::Q | Tok::I | Tok::Delta | Tok::LParen))
    }

    fn term(&mut self) -> Result<LocalElement, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(&Tok::Slash) {
                let rhs = self.unary()?;
                let inv = rhs.invert().map_err(|e| ParseError { pos, msg: e.to_string() })?;
                acc = acc.mul(&inv);
            } else if self.starts_factor() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LocalElement, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(-self.unary()?)
        } else if self.eat(&Tok::Plus) {
            self.unary()
        } else {
            self.power()
        }
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = self.eat(&Tok::LParen);
        let negative = self.eat(&Tok::Minus);
        let n = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                i32::try_from(n).map_err(|_| self.err("exponent out of range"))?
            }
            _ => return Err(self.err("expected integer exponent")),
        };
        if paren && !self.eat(&Tok::RParen) {
            return Err(self.err("expected ')'"));
        }
        Ok(if negative { -n } else { n })
    }

    fn power(&mut self) -> Result<LocalElement, ParseError> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        let n = self.exponent()?;
        base.pow(n).map_err(|e| ParseError { pos, msg: e.to_string() })
    }

    fn atom(&mut self) -> Result<LocalElement, ParseError> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.at += 1;
        Ok(match tok {
            Tok::Num(n) => LocalElement::from_rational(BigRational::from_integer(n)),
            Tok::Gen(g) => LocalElement::from_algebra(AlgebraElement::generator(g)),
            Tok::Q => LocalElement::scalar(QScalar::q_pow(1)),
            Tok::I => LocalElement::scalar(QScalar::i()),
            Tok::Delta => LocalElement::delta(1),
            Tok::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                inner
            }
            _ => {
                self.at -= 1;
                return Err(self.err("expected a number, symbol or '('"));
            }
        })
    }
}

/// Parse an expression into the localized algebra.
pub fn parse_local(src: &str) -> Result<LocalElement, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, at: 0, end: src.len() };
    let value = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(value)
}

/// Parse an expression that must be a plain element of the algebra.
pub fn parse_algebra(src: &str) -> Result<AlgebraElement, ParseError> {
    let x = parse_local(src)?;
    x.as_algebra()
        .cloned()
        .ok_or_else(|| ParseError { pos: 0, msg: format!("'{}' is not a polynomial element", x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiIndex;
    use crate::central::CentralFactor;
    use crate::scalar::ratio;
    use num_traits::{One, Zero};

    #[test]
    fn star_shorthand() {
        let a = parse_algebra("Z*W - q Z W*").unwrap();
        let zs_w = &AlgebraElement::generator(Generator::Zs) * &AlgebraElement::w();
        let z_ws = (&AlgebraElement::z() * &AlgebraElement::generator(Generator::Ws)).scale(&QScalar::q_pow(1));
        assert_eq!(a, &zs_w - &z_ws);
        assert_eq!(parse_algebra("Z * W").unwrap(), &AlgebraElement::z() * &AlgebraElement::w());
    }

    #[test]
    fn relations_hold() {
        assert_eq!(parse_algebra("Z Zs + W Ws + T^2").unwrap(), AlgebraElement::one());
        assert_eq!(parse_algebra("W Z - q Z W").unwrap(), AlgebraElement::zero());
    }

    #[test]
    fn rationals_and_powers() {
        let a = parse_local("(1/2)*(T^2-1)").unwrap();
        let expected = LocalElement::from_algebra(&AlgebraElement::t().pow(2) - &AlgebraElement::one())
            .scale_rational(&ratio(1, 2));
        assert_eq!(a, expected);
        assert_eq!(
            parse_local("(1+T^2)^-2").unwrap(),
            LocalElement::factor_pow(CentralFactor::OnePlusT2, -2)
        );
        assert_eq!(parse_local("Delta^(-1)").unwrap(), LocalElement::delta(-1));
        assert_eq!(parse_local("q^-1").unwrap(), LocalElement::scalar(QScalar::q_pow(-1)));
    }

    #[test]
    fn cancellation_through_division() {
        let x = parse_local("Z Zs/(1-T^2) + W Ws/(1-T^2)").unwrap();
        assert_eq!(x, LocalElement::one());
    }

    #[test]
    fn display_round_trip() {
        for idx in MultiIndex::up_to_degree(3) {
            let a = AlgebraElement::basis_scaled(idx, &QScalar::q_pow(-2) + &QScalar::i().scale(&ratio(3, 4)));
            let b = &a + &AlgebraElement::t();
            assert_eq!(parse_algebra(&b.to_string()).unwrap(), b, "{}", b);
        }
        let x = LocalElement::factor_pow(CentralFactor::AbsZ2, -1)
            .mul(&LocalElement::delta(-2))
            .mul(&LocalElement::from_algebra(&AlgebraElement::t() + &AlgebraElement::one()));
        assert_eq!(parse_local(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn errors() {
        assert!(parse_local("T^-1").is_err());
        assert!(parse_local("Z +").is_err());
        assert!(parse_local("Y").is_err());
        assert!(parse_local("(1+T").is_err());
        assert!(parse_local("Delta + 1").is_err());
        assert!(parse_algebra("1/(1+T^2)").is_err());
    }
}
