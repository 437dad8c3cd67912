//! Text grammar for polynomials, field elements and lines.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 'z' | 'w' | '(' expr ')'
//! line  := '(' elems ')' '+' 't' '*' '(' elems ')'
//! ```
//!
//! `w` is ζ_N for the conductor passed in; division is only by nonzero
//! constants. Whitespace is ignored.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{CycloNumber, Polynomial, Rational};
use crate::decision::{DecisionError, Line};

const MAX_EXPONENT: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Unexpected(String),
    UnexpectedEnd,
    CyclotomicWithoutConductor,
    VariableNotAllowed,
    DivisionByNonConstant,
    DivisionByZero,
    ExponentTooLarge,
    DimensionMismatch { expected: usize, got: usize },
    ZeroDirection,
    Empty,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Unexpected(s) => write!(f, "unexpected {s}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::CyclotomicWithoutConductor => {
                f.write_str("cyclotomic symbol `w` used without a conductor (pass a conductor > 1)")
            }
            ParseErrorKind::VariableNotAllowed => {
                f.write_str("`z` is not allowed in a field element")
            }
            ParseErrorKind::DivisionByNonConstant => {
                f.write_str("division by a non-constant polynomial")
            }
            ParseErrorKind::DivisionByZero => f.write_str("division by zero"),
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent above {MAX_EXPONENT}"),
            ParseErrorKind::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} coordinates, got {got}")
            }
            ParseErrorKind::ZeroDirection => f.write_str("line direction is zero"),
            ParseErrorKind::Empty => f.write_str("empty input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    W,
    T,
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
            continue;
        }
        let tok = match c {
            'z' => Tok::Z,
            'w' => Tok::W,
            't' => Tok::T,
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => Tok::Op(c),
            other => {
                return Err(ParseError {
                    pos: i,
                    kind: ParseErrorKind::Unexpected(format!("character `{other}`")),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    conductor: u32,
    allow_z: bool,
}

impl Parser {
    fn new(text: &str, conductor: u32, allow_z: bool) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        Ok(Parser {
            toks,
            at: 0,
            end: text.chars().count(),
            conductor,
            allow_z,
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            kind,
        })
    }

    fn unexpected<T>(&self) -> Result<T, ParseError> {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some(t) => {
                let shown = match t {
                    Tok::Int(n) => format!("number `{n}`"),
                    Tok::Z => "`z`".into(),
                    Tok::W => "`w`".into(),
                    Tok::T => "`t`".into(),
                    Tok::Op(c) => format!("`{c}`"),
                };
                self.err(ParseErrorKind::Unexpected(shown))
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.unexpected()
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            self.unexpected()
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?).expect("one conductor");
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?).expect("one conductor");
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?).expect("one conductor");
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.at += 1;
                let pos = self.pos();
                let den = self.unary()?;
                let c = match den.degree() {
                    None => {
                        return Err(ParseError {
                            pos,
                            kind: ParseErrorKind::DivisionByZero,
                        })
                    }
                    Some(0) => den.coeff(0),
                    Some(_) => {
                        return Err(ParseError {
                            pos,
                            kind: ParseErrorKind::DivisionByNonConstant,
                        })
                    }
                };
                acc = acc
                    .scale(&c.inv().expect("nonzero"))
                    .expect("one conductor");
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let e = match self.peek() {
            Some(Tok::Int(n)) => n.clone(),
            _ => return self.unexpected(),
        };
        self.at += 1;
        let e: u64 = match u64::try_from(&e) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::ExponentTooLarge,
                })
            }
        };
        let mut acc = Polynomial::constant(CycloNumber::one(self.conductor));
        for _ in 0..e {
            acc = acc.mul(&base).expect("one conductor");
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.conductor;
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err(ParseErrorKind::UnexpectedEnd),
        };
        match tok {
            Tok::Int(v) => {
                self.at += 1;
                Ok(Polynomial::constant(CycloNumber::from_rational(
                    n,
                    Rational::from_integer(v),
                )))
            }
            Tok::Z if self.allow_z => {
                self.at += 1;
                Ok(Polynomial::identity(n))
            }
            Tok::Z => self.err(ParseErrorKind::VariableNotAllowed),
            Tok::W if n == 1 => self.err(ParseErrorKind::CyclotomicWithoutConductor),
            Tok::W => {
                self.at += 1;
                Ok(Polynomial::constant(CycloNumber::zeta(n)))
            }
            Tok::Op('(') => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => self.unexpected(),
        }
    }

    fn element(&mut self) -> Result<CycloNumber, ParseError> {
        Ok(self.expr()?.coeff(0))
    }

    fn tuple(&mut self) -> Result<Vec<CycloNumber>, ParseError> {
        self.expect('(')?;
        let mut out = vec![self.element()?];
        while self.eat(',') {
            out.push(self.element()?);
        }
        self.expect(')')?;
        Ok(out)
    }
}

/// Parses a polynomial in `z` over ℚ(ζ_N), `N = conductor`.
pub fn parse_polynomial(text: &str, conductor: u32) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(text, conductor.max(1), true)?;
    if p.toks.is_empty() {
        return p.err(ParseErrorKind::Empty);
    }
    let f = p.expr()?;
    p.finish()?;
    Ok(f)
}

/// Parses an element of ℚ(ζ_N).
pub fn parse_element(text: &str, conductor: u32) -> Result<CycloNumber, ParseError> {
    let mut p = Parser::new(text, conductor.max(1), false)?;
    if p.toks.is_empty() {
        return p.err(ParseErrorKind::Empty);
    }
    let x = p.element()?;
    p.finish()?;
    Ok(x)
}

/// Parses a rational number such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    parse_element(text, 1).map(|x| x.as_rational().expect("conductor 1").clone())
}

/// Parses `f1;f2;…`.
pub fn parse_maps(text: &str, conductor: u32) -> Result<Vec<Polynomial>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let f = parse_polynomial(part, conductor).map_err(|e| ParseError {
            pos: e.pos + offset,
            kind: e.kind,
        })?;
        out.push(f);
        offset += part.chars().count() + 1;
    }
    Ok(out)
}

/// Parses `(p1,…,pm) + t*(v1,…,vm)`; `dimension`, when given, must match.
pub fn parse_line(
    text: &str,
    dimension: Option<usize>,
    conductor: u32,
) -> Result<Line, ParseError> {
    let mut p = Parser::new(text, conductor.max(1), false)?;
    if p.toks.is_empty() {
        return p.err(ParseErrorKind::Empty);
    }
    let base = p.tuple()?;
    p.expect('+')?;
    if p.peek() != Some(&Tok::T) {
        return p.unexpected();
    }
    p.at += 1;
    p.expect('*')?;
    let dir_pos = p.pos();
    let dir = p.tuple()?;
    p.finish()?;
    let expected = dimension.unwrap_or(base.len());
    for (got, pos) in [(base.len(), 0), (dir.len(), dir_pos)] {
        if got != expected {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::DimensionMismatch { expected, got },
            });
        }
    }
    Line::new(base, dir).map_err(|e| ParseError {
        pos: dir_pos,
        kind: match e {
            DecisionError::ZeroDirection => ParseErrorKind::ZeroDirection,
            other => ParseErrorKind::Unexpected(other.to_string()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn polynomial_examples() {
        let f = parse_polynomial("z^2 - 1", 1).unwrap();
        assert_eq!(f, Polynomial::from_ints(&[-1, 0, 1]));
        let g = parse_polynomial("w*z^3", 4).unwrap();
        assert_eq!(g.leading().unwrap(), &CycloNumber::zeta(4));
        let e = parse_polynomial("z^2 + w", 1).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::CyclotomicWithoutConductor);
        assert_eq!(e.pos, 6);
    }

    #[test]
    fn grammar_details() {
        assert_eq!(
            parse_polynomial("-3/2*z^2 + z^2 + 1/2", 1).unwrap(),
            Polynomial::from_rationals(1, &[rat(1, 2), rat(0, 1), rat(-1, 2)])
        );
        assert_eq!(
            parse_polynomial("(1+w)*z^2", 4).unwrap().leading().unwrap(),
            &(&CycloNumber::one(4) + &CycloNumber::zeta(4))
        );
        assert_eq!(
            parse_polynomial("(z+1)^2", 1).unwrap(),
            Polynomial::from_ints(&[1, 2, 1])
        );
        assert_eq!(parse_polynomial("z/(1+w)", 4).unwrap().degree(), Some(1));
        assert_eq!(
            parse_polynomial("1/z", 1).unwrap_err().kind,
            ParseErrorKind::DivisionByNonConstant
        );
        assert_eq!(
            parse_polynomial("z/(w-w)", 3).unwrap_err().kind,
            ParseErrorKind::DivisionByZero
        );
        assert!(matches!(
            parse_polynomial("z^", 1).unwrap_err().kind,
            ParseErrorKind::UnexpectedEnd
        ));
        assert!(matches!(
            parse_polynomial("2z", 1).unwrap_err().kind,
            ParseErrorKind::Unexpected(_)
        ));
        assert_eq!(
            parse_polynomial("", 1).unwrap_err().kind,
            ParseErrorKind::Empty
        );
        assert_eq!(parse_rational("-7/14").unwrap(), rat(-1, 2));
        assert_eq!(parse_element("w^4", 4).unwrap(), CycloNumber::one(4));
    }

    #[test]
    fn line_examples() {
        let q = |n| CycloNumber::from_int(1, n);
        let diag = parse_line("(0,0) + t*(1,1)", Some(2), 1).unwrap();
        assert_eq!(diag, Line::new(vec![q(0), q(0)], vec![q(1), q(1)]).unwrap());
        let l = parse_line("(0,0)+t*(1,w)", Some(2), 4).unwrap();
        assert_eq!(l.direction()[1], CycloNumber::zeta(4));
        assert_eq!(
            parse_line("(1,2) + t*(0,0)", None, 1).unwrap_err().kind,
            ParseErrorKind::ZeroDirection
        );
        assert!(matches!(
            parse_line("(1,2) + t*(1,1)", Some(3), 1).unwrap_err().kind,
            ParseErrorKind::DimensionMismatch {
                expected: 3,
                got: 2
            }
        ));
        assert_eq!(parse_maps("z^2;z^2+1", 1).unwrap().len(), 2);
        assert_eq!(parse_maps("z^2;z^2+w", 1).unwrap_err().pos, 8);
    }

    fn arb_cyclo(n: u32) -> impl Strategy<Value = CycloNumber> {
        let deg = crate::arith::primes::euler_phi(n as u64) as usize;
        prop::collection::vec((-20i64..20, 1i64..6), deg).prop_map(move |cs| {
            CycloNumber::from_coords(n, cs.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]).prop_flat_map(|n| {
            prop::collection::vec(arb_cyclo(n), 1..6)
                .prop_map(move |cs| Polynomial::new(n, cs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn polynomial_round_trip(f in arb_poly()) {
            let text = f.to_string();
            prop_assert_eq!(parse_polynomial(&text, f.conductor()).unwrap(), f);
        }

        #[test]
        fn line_round_trip(
            n in prop::sample::select(vec![1u32, 4, 6]),
            seed in prop::collection::vec((-9i64..9, 1i64..4), 6),
        ) {
            let e = |k: usize| CycloNumber::from_rational(n, rat(seed[k].0, seed[k].1));
            let mut dir = vec![e(3), e(4), e(5)];
            if dir.iter().all(CycloNumber::is_zero) {
                dir[0] = CycloNumber::one(n);
            }
            if n > 1 {
                dir[1] = &dir[1] + &CycloNumber::zeta(n);
            }
            let l = Line::new(vec![e(0), e(1), e(2)], dir).unwrap();
            let back = parse_line(&l.to_string(), Some(3), n).unwrap();
            prop_assert_eq!(back.base(), l.base());
            prop_assert_eq!(back.direction(), l.direction());
        }
    }

    #[test]
    fn integer_atoms_are_exact() {
        let big = "123456789012345678901234567890";
        assert_eq!(
            parse_rational(big).unwrap(),
            Rational::from_integer(big.parse().unwrap())
        );
        assert_eq!(parse_rational("0").unwrap(), rat_int(0));
    }
}
