//! Text parser for polynomials and rational functions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | var ('^' integer)? | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! A leading sign is accepted on an expression. A rational function is
//! `expr '/' '(' expr ')'` at the top level. Implicit multiplication is
//! rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, ParseError, Result};
use crate::poly::{ExponentVector, LaurentPoly};

/// Largest exponent accepted on a variable.
pub const MAX_EXPONENT: i64 = 10_000;

/// Deepest parenthesis nesting accepted.
pub const MAX_NESTING: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: start,
                    expected: "a number, variable, operator or parenthesis".into(),
                    found: format!("character `{ch}`"),
                }
                .into());
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        ParseError {
            position: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
        .into()
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                -&self.term()?
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(self.error("an operator (implicit multiplication is not allowed)"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let position = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                // `a/b` is a rational literal only when an integer follows the slash;
                // `2/(x+y)` leaves the slash for the rational-function level.
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(_) = self.peek_at(1) {
                        self.bump();
                        let den_pos = self.offset();
                        let Tok::Int(d) = self.bump() else { unreachable!() };
                        if d.is_zero() {
                            return Err(ParseError {
                                position: den_pos,
                                expected: "a positive integer denominator".into(),
                                found: "`0`".into(),
                            }
                            .into());
                        }
                        return Ok(LaurentPoly::constant(self.nvars(), BigRational::new(n, d)));
                    }
                }
                Ok(LaurentPoly::constant(self.nvars(), BigRational::from_integer(n)))
            }
            Tok::Ident(name) => {
                let Some(idx) = self.vars.iter().position(|v| *v == name) else {
                    return Err(Error::UnknownVariable { name, position });
                };
                let mut exp = 1i64;
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let exp_pos = self.offset();
                    match self.bump() {
                        Tok::Int(k) => {
                            exp = i64::try_from(&k)
                                .ok()
                                .filter(|k| *k <= MAX_EXPONENT)
                                .ok_or_else(|| ParseError {
                                    position: exp_pos,
                                    expected: format!("an exponent at most {MAX_EXPONENT}"),
                                    found: format!("`{k}`"),
                                })?;
                        }
                        other => {
                            return Err(ParseError {
                                position: exp_pos,
                                expected: "a nonnegative integer exponent".into(),
                                found: other.describe(),
                            }
                            .into())
                        }
                    }
                }
                let mut e = vec![0; self.nvars()];
                e[idx] = exp;
                Ok(LaurentPoly::monomial(ExponentVector::new(e), BigRational::one()))
            }
            Tok::LParen => {
                if self.depth >= MAX_NESTING {
                    return Err(ParseError {
                        position,
                        expected: format!("at most {MAX_NESTING} nested parentheses"),
                        found: "deeper nesting".into(),
                    }
                    .into());
                }
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => {
                self.pos -= usize::from(other != Tok::End);
                Err(self.error("a number, variable or `(`"))
            }
        }
    }
}

fn check_vars(vars: &[String]) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::InvalidInput("variable list is empty".into()));
    }
    for (i, v) in vars.iter().enumerate() {
        let valid = v
            .chars()
            .next()
            .map(|c| c.is_ascii_alphabetic() || c == '_')
            .unwrap_or(false)
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::InvalidInput(format!("`{v}` is not a valid variable name")));
        }
        if vars[..i].contains(v) {
            return Err(Error::InvalidInput(format!("variable `{v}` listed twice")));
        }
    }
    Ok(())
}

/// Parses a single polynomial expression.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<LaurentPoly> {
    check_vars(vars)?;
    let mut parser = Parser { toks: lex(text)?, pos: 0, depth: 0, vars };
    let p = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(p)
}

/// Parses `num` or `num / (den)` into a numerator/denominator pair.
///
/// No normalization is applied here; see
/// [`RationalFunction::parse`](crate::rational::RationalFunction::parse).
pub fn parse_fraction(text: &str, vars: &[String]) -> Result<(LaurentPoly, LaurentPoly)> {
    check_vars(vars)?;
    let mut parser = Parser { toks: lex(text)?, pos: 0, depth: 0, vars };
    let num = parser.expr()?;
    let den = match parser.peek() {
        Tok::End => LaurentPoly::one(vars.len()),
        Tok::Slash => {
            parser.bump();
            parser.expect(Tok::LParen, "`(` after the top-level `/`")?;
            let den = parser.expr()?;
            parser.expect(Tok::RParen, "`)`")?;
            if *parser.peek() != Tok::End {
                return Err(parser.error("end of input after the denominator"));
            }
            den
        }
        _ => return Err(parser.error("`+`, `-`, `*`, `/` or end of input")),
    };
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn poly(terms: &[(&[i64], BigRational)]) -> LaurentPoly {
        LaurentPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), c.clone())))
    }

    #[test]
    fn parses_quotient() {
        let (p, q) = parse_fraction("(x^2+y)/(x+y)", &xy()).unwrap();
        assert_eq!(p, poly(&[(&[2, 0], rat(1)), (&[0, 1], rat(1))]));
        assert_eq!(q, poly(&[(&[1, 0], rat(1)), (&[0, 1], rat(1))]));
    }

    #[test]
    fn polynomial_has_unit_denominator() {
        let (p, q) = parse_fraction("x + x^2*y", &xy()).unwrap();
        assert_eq!(p, poly(&[(&[1, 0], rat(1)), (&[2, 1], rat(1))]));
        assert_eq!(q, LaurentPoly::one(2));
    }

    #[test]
    fn rational_literals() {
        let p = parse_polynomial("(2/3)*x - y", &xy()).unwrap();
        assert_eq!(p, poly(&[(&[1, 0], ratio(2, 3)), (&[0, 1], rat(-1))]));
        let again = parse_polynomial(&p.to_string(), &xy()).unwrap();
        assert_eq!(again, p);
        let q = parse_polynomial("2/4*x", &xy()).unwrap();
        assert_eq!(q, poly(&[(&[1, 0], ratio(1, 2))]));
    }

    #[test]
    fn integer_over_parenthesis_is_a_fraction() {
        let (p, q) = parse_fraction("2/(x+y)", &xy()).unwrap();
        assert_eq!(p, LaurentPoly::constant(2, rat(2)));
        assert_eq!(q, poly(&[(&[1, 0], rat(1)), (&[0, 1], rat(1))]));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_polynomial("x + * y", &xy()) {
            Err(Error::Parse(e)) => assert_eq!(e.position, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polynomial("x + w", &xy()) {
            Err(Error::UnknownVariable { name, position }) => {
                assert_eq!(name, "w");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polynomial("2x", &xy()), Err(Error::Parse(_))));
        assert!(matches!(parse_polynomial("x(y)", &xy()), Err(Error::Parse(_))));
        assert!(matches!(parse_polynomial("(x+y", &xy()), Err(Error::Parse(_))));
        assert!(matches!(parse_polynomial("x^-1", &xy()), Err(Error::Parse(_))));
        assert!(matches!(parse_polynomial("1/0", &xy()), Err(Error::Parse(_))));
        assert!(matches!(parse_polynomial("", &xy()), Err(Error::Parse(_))));
        assert!(matches!(parse_polynomial("x^99999999999999999999", &xy()), Err(Error::Parse(_))));
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let text = format!("{}x{}", "(".repeat(5000), ")".repeat(5000));
        assert!(matches!(parse_polynomial(&text, &xy()), Err(Error::Parse(_))));
        let ok = format!("{}x{}", "(".repeat(50), ")".repeat(50));
        assert!(parse_polynomial(&ok, &xy()).is_ok());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(parse_fraction("x/(y-y)", &xy()), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn bad_variable_lists() {
        assert!(parse_polynomial("x", &[]).is_err());
        assert!(parse_polynomial("x", &["x".into(), "x".into()]).is_err());
        assert!(parse_polynomial("x", &["1x".into()]).is_err());
    }

    #[test]
    fn unary_sign_and_nesting() {
        let p = parse_polynomial("-(x - y)*(x + y) + 3", &xy()).unwrap();
        assert_eq!(
            p,
            poly(&[(&[2, 0], rat(-1)), (&[0, 2], rat(1)), (&[0, 0], rat(3))])
        );
    }
}
