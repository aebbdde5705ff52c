//! Polynomial input syntax: `+ - * ^`, parentheses, integer and rational
//! coefficients, variables `x, y, z` or `x0, x1, ...`. Variables are
//! numbered in order of first appearance.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::{LocalPoly, Monomial, Rational};
use crate::stdbasis::check_singular;

/// Largest total degree an intermediate result may reach.
pub const MAX_DEGREE: u32 = 200;
/// Largest number of terms an intermediate result may reach.
pub const MAX_TERMS: usize = 20_000;
/// Largest size in bits of numerator plus denominator of a coefficient.
pub const MAX_COEFF_BITS: u64 = 16_384;
/// Budget of term operations (products and additions) for one parse.
pub const MAX_WORK: usize = 400_000;

fn coeff_bits(p: &LocalPoly) -> u64 {
    p.terms().map(|(_, c)| c.numer().bits() + c.denom().bits()).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
    End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPoly {
    pub poly: LocalPoly,
    /// Variable names in index order.
    pub names: Vec<String>,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Style {
    Letters,
    Indexed,
}

fn tokenize(src: &str) -> Result<(Vec<(usize, Tok)>, Vec<String>)> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut style: Option<Style> = None;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
                return Err(syntax(i, "floating-point literals are not supported"));
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((start, Tok::Num(s.parse().expect("digits"))));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let this = match word.as_str() {
                "x" | "y" | "z" => Style::Letters,
                w if w.len() > 1 && w.starts_with('x') && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                    if w.len() > 2 && w.as_bytes()[1] == b'0' {
                        return Err(syntax(start, format!("variable index with leading zero: {w}")));
                    }
                    Style::Indexed
                }
                _ => return Err(syntax(start, format!("unknown identifier {word:?}"))),
            };
            if style.is_some_and(|s| s != this) {
                return Err(syntax(start, "cannot mix x, y, z with indexed variables x0, x1, ..."));
            }
            style = Some(this);
            let idx = match names.iter().position(|n| *n == word) {
                Some(k) => k,
                None => {
                    names.push(word);
                    names.len() - 1
                }
            };
            toks.push((start, Tok::Var(idx)));
            continue;
        }
        let op = match c {
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => c,
            '\u{2212}' => '-',
            _ => return Err(syntax(start, format!("unexpected character {c:?}"))),
        };
        toks.push((start, Tok::Op(op)));
        i += 1;
    }
    toks.push((chars.len(), Tok::End));
    Ok((toks, names))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
    work: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn check_size(&self, p: &LocalPoly, pos: usize) -> Result<()> {
        if p.len() > MAX_TERMS || p.max_x_degree().is_some_and(|d| d > MAX_DEGREE) || coeff_bits(p) > MAX_COEFF_BITS {
            return Err(syntax(pos, "expression too large"));
        }
        Ok(())
    }

    /// Rejects a product before computing it when the result would be too
    /// large.
    fn check_product(&mut self, a: &LocalPoly, b: &LocalPoly, pos: usize) -> Result<()> {
        self.spend(a.len().saturating_mul(b.len()), pos)?;
        let deg = a.max_x_degree().unwrap_or(0) + b.max_x_degree().unwrap_or(0);
        let bits = coeff_bits(a) + coeff_bits(b);
        if deg > MAX_DEGREE || a.len().saturating_mul(b.len()) > 50 * MAX_TERMS || bits > MAX_COEFF_BITS {
            return Err(syntax(pos, "expression too large"));
        }
        Ok(())
    }

    fn spend(&mut self, w: usize, pos: usize) -> Result<()> {
        self.work = self.work.saturating_add(w);
        if self.work > MAX_WORK {
            return Err(syntax(pos, "expression too large"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<LocalPoly> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            self.spend(acc.len() + rhs.len(), pos)?;
            acc = if neg { &acc - &rhs } else { &acc + &rhs };
            self.check_size(&acc, pos)?;
        }
    }

    fn term(&mut self) -> Result<LocalPoly> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if !self.eat('*') {
                return Ok(acc);
            }
            let rhs = self.unary()?;
            self.check_product(&acc, &rhs, pos)?;
            acc = &acc * &rhs;
            self.check_size(&acc, pos)?;
        }
    }

    fn unary(&mut self) -> Result<LocalPoly> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<LocalPoly> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let epos = self.pos();
        let e = match self.peek().clone() {
            Tok::Num(k) => {
                self.at += 1;
                k
            }
            _ => return Err(syntax(epos, "expected a nonnegative integer exponent")),
        };
        if *self.peek() == Tok::Op('^') {
            return Err(syntax(self.pos(), "chained exponents need parentheses"));
        }
        let e: u32 = match u32::try_from(e) {
            Ok(e) if e <= MAX_DEGREE => e,
            _ => return Err(syntax(epos, "exponent too large")),
        };
        let mut acc = LocalPoly::one(self.n);
        for _ in 0..e {
            self.check_product(&acc, &base, pos)?;
            acc = &acc * &base;
            self.check_size(&acc, pos)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<LocalPoly> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(a) => {
                self.at += 1;
                let mut c = Rational::from_integer(a);
                if self.eat('/') {
                    let dpos = self.pos();
                    match self.peek().clone() {
                        Tok::Num(d) if !d.is_zero() => {
                            self.at += 1;
                            c /= Rational::from_integer(d);
                        }
                        Tok::Num(_) => return Err(syntax(dpos, "zero denominator")),
                        _ => return Err(syntax(dpos, "expected an integer denominator")),
                    }
                }
                Ok(LocalPoly::constant(self.n, c))
            }
            Tok::Var(i) => {
                self.at += 1;
                Ok(LocalPoly::var(self.n, i))
            }
            Tok::Op('(') => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            Tok::Op(c) => Err(syntax(pos, format!("unexpected {c:?}"))),
        }
    }
}

/// Parses without the singularity checks.
pub fn parse_expr(src: &str) -> Result<ParsedPoly> {
    let (toks, names) = tokenize(src)?;
    let mut p = Parser { toks, at: 0, n: names.len(), work: 0 };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected input after expression"));
    }
    Ok(ParsedPoly { poly, names })
}

/// Parses `src` and checks that the origin is a singular point.
pub fn parse_poly_named(src: &str) -> Result<ParsedPoly> {
    let parsed = parse_expr(src)?;
    check_singular(&parsed.poly)?;
    Ok(parsed)
}

pub fn parse_poly(src: &str) -> Result<LocalPoly> {
    Ok(parse_poly_named(src)?.poly)
}

/// `x^a*y^b*...` for a monomial, with the given names.
pub fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .exps
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::{int, rat};

    #[test]
    fn t255() {
        let p = parse_poly_named("x^2*y^2+x^5+y^5").unwrap();
        assert_eq!(p.names, vec!["x", "y"]);
        assert_eq!(p.poly.len(), 3);
        assert_eq!(p.poly.coeff(&Monomial::x(&[2, 2])), int(1));
        assert_eq!(p.poly.coeff(&Monomial::x(&[0, 5])), int(1));
    }

    #[test]
    fn morse() {
        let p = parse_poly("x^2+y^2").unwrap();
        let (x, y) = (LocalPoly::var(2, 0), LocalPoly::var(2, 1));
        assert_eq!(p, &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn smooth_rejected() {
        assert!(matches!(parse_poly("x+y"), Err(Error::NotSingular(_))));
        assert!(matches!(parse_poly("1+x^2"), Err(Error::NotSingular(_))));
        assert!(matches!(parse_poly("0"), Err(Error::NotSingular(_))));
    }

    #[test]
    fn first_appearance_order() {
        let p = parse_poly_named("y^3 + x^2").unwrap();
        assert_eq!(p.names, vec!["y", "x"]);
        assert_eq!(p.poly.coeff(&Monomial::x(&[3, 0])), int(1));
    }

    #[test]
    fn rationals_parens_and_signs() {
        let p = parse_poly("-3/4*x^2 + (x-y)^2 - -y^3").unwrap();
        assert_eq!(p.coeff(&Monomial::x(&[2, 0])), rat(1, 4));
        assert_eq!(p.coeff(&Monomial::x(&[1, 1])), int(-2));
        assert_eq!(p.coeff(&Monomial::x(&[0, 3])), int(1));
    }

    #[test]
    fn indexed_variables() {
        let p = parse_poly_named("x0^3+x1^3+x2^3").unwrap();
        assert_eq!(p.names, vec!["x0", "x1", "x2"]);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let pos = |s: &str| match parse_expr(s) {
            Err(Error::Syntax { pos, .. }) => pos,
            other => panic!("expected syntax error, got {other:?}"),
        };
        assert_eq!(pos("x^2 + "), 6);
        assert_eq!(pos("x^2 + w"), 6);
        assert_eq!(pos("1.5*x^2"), 1);
        assert_eq!(pos("x*y+x1"), 4);
        assert_eq!(pos("(x+y"), 4);
        assert_eq!(pos("x^y"), 2);
        assert_eq!(pos("x/0"), 1);
        assert_eq!(pos("x^99999"), 2);
        assert_eq!(pos("(x+y)^150*(x+y)^150"), 9);
        assert_eq!(pos("(x+y+z)^150"), 7);
        assert_eq!(pos("((2^100)^100)^2"), 13);
    }
}
