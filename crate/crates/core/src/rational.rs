//! Rational functions `f = P/Q` with normalized content and a coprimality verdict.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{parse_fraction, parse_polynomial};
use crate::poly::LaurentPoly;
use crate::resultant::gcd2_in;
use crate::upoly::UniPoly;

/// Number of random lines used when no exact gcd is available.
pub const COPRIME_LINES: usize = 8;

const LINE_SEED: u64 = 0x5eed_c0de;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Coprimality {
    Verified,
    Refuted { witness: String },
    Assumed { reason: String },
}

#[derive(Clone, Debug)]
pub struct RationalFunction {
    p: LaurentPoly,
    q: LaurentPoly,
    vars: Vec<String>,
    coprimality: Coprimality,
}

impl RationalFunction {
    /// Builds `p/q`, scaling both so that `q` has coprime integer coefficients
    /// and a positive leading coefficient, then runs [`coprimality_check`].
    pub fn new(p: LaurentPoly, q: LaurentPoly, vars: &[String]) -> Result<Self> {
        if vars.len() < 2 {
            return Err(Error::InvalidInput("at least two variables are required".into()));
        }
        if p.nvars() != vars.len() || q.nvars() != vars.len() {
            return Err(Error::InvalidInput("variable count mismatch".into()));
        }
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !p.is_polynomial() || !q.is_polynomial() {
            return Err(Error::InvalidInput("negative exponents are not allowed".into()));
        }
        let (c, q) = q.primitive_part();
        let p = p.scale(&c.recip());
        let coprimality = coprimality_check(&p, &q, vars);
        Ok(RationalFunction { p, q, vars: vars.to_vec(), coprimality })
    }

    /// Parses `expr` or `expr / (expr)`.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self> {
        let (p, q) = parse_fraction(text, vars)?;
        Self::new(p, q, vars)
    }

    /// Parses numerator and denominator given separately.
    pub fn parse_parts(num: &str, den: &str, vars: &[String]) -> Result<Self> {
        let p = parse_polynomial(num, vars)?;
        let q = parse_polynomial(den, vars)?;
        Self::new(p, q, vars)
    }

    pub fn p(&self) -> &LaurentPoly {
        &self.p
    }

    pub fn q(&self) -> &LaurentPoly {
        &self.q
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn coprimality(&self) -> &Coprimality {
        &self.coprimality
    }

    pub fn is_polynomial(&self) -> bool {
        self.q.is_constant()
    }

    /// `f(z)`, or `None` on the pole set `Q = 0` (detected exactly as zero).
    pub fn evaluate(&self, z: &[Complex64]) -> Option<Complex64> {
        let q = self.q.evaluate(z).ok()?;
        if q == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(self.p.evaluate(z).ok()? / q)
    }

    /// `Q ∂_j P − P ∂_j Q`, the numerator of `∂_j f`.
    pub fn derivative_numerator(&self, j: usize) -> LaurentPoly {
        &(&self.q * &self.p.partial_derivative(j)) - &(&self.p * &self.q.partial_derivative(j))
    }

    pub fn display(&self) -> String {
        let p = self.p.display_with(&self.vars).to_string();
        if self.q.is_one() {
            p
        } else {
            format!("({})/({})", p, self.q.display_with(&self.vars))
        }
    }
}

trait IsOne {
    fn is_one(&self) -> bool;
}

impl IsOne for LaurentPoly {
    fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }
}

/// Decides whether `p` and `q` share a nonconstant factor.
///
/// Two variables: exact gcd, computed with each variable as main variable and
/// cross-checked. More variables: the pair is restricted to random rational
/// lines; coprimality can then only be assumed.
pub fn coprimality_check(p: &LaurentPoly, q: &LaurentPoly, vars: &[String]) -> Coprimality {
    if p.is_zero() {
        return if q.is_constant() {
            Coprimality::Verified
        } else {
            Coprimality::Refuted { witness: q.display_with(vars).to_string() }
        };
    }
    if p.is_constant() || q.is_constant() {
        return Coprimality::Verified;
    }
    let n = p.nvars();
    if n == 2 {
        let g0 = gcd2_in(p, q, 0);
        let g1 = gcd2_in(p, q, 1);
        assert_eq!(g0, g1, "gcd depends on the variable order");
        return if g0.is_constant() {
            Coprimality::Verified
        } else {
            Coprimality::Refuted { witness: g0.display_with(vars).to_string() }
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(LINE_SEED);
    let mut shared = 0;
    for _ in 0..COPRIME_LINES {
        let a: Vec<BigRational> = (0..n).map(|_| small_rational(&mut rng)).collect();
        let b: Vec<BigRational> = (0..n).map(|_| small_rational(&mut rng)).collect();
        let g = restrict_to_line(p, &a, &b).gcd(&restrict_to_line(q, &a, &b));
        if g.deg() > 0 {
            shared += 1;
        }
    }
    let reason = if shared == COPRIME_LINES {
        format!(
            "no exact gcd in {n} variables; every one of {COPRIME_LINES} random lines shows a common factor, so P and Q are probably not coprime"
        )
    } else {
        format!("no exact gcd in {n} variables; {COPRIME_LINES} random line restrictions checked")
    };
    Coprimality::Assumed { reason }
}

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(-50..=50);
    let den: i64 = rng.gen_range(1..=17);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Univariate restriction `t ↦ g(a + t b)`.
pub fn restrict_to_line(g: &LaurentPoly, a: &[BigRational], b: &[BigRational]) -> UniPoly {
    let lines: Vec<UniPoly> =
        a.iter().zip(b).map(|(ai, bi)| UniPoly::new(vec![ai.clone(), bi.clone()])).collect();
    let mut out = UniPoly::zero();
    for (e, c) in g.terms() {
        let mut m = UniPoly::constant(c.clone());
        for (i, &k) in e.as_slice().iter().enumerate() {
            assert!(k >= 0, "line restriction needs a polynomial");
            for _ in 0..k {
                m = m.mul(&lines[i]);
            }
        }
        out = out.add(&m);
    }
    out
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && self.vars == other.vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_var_names;

    fn rf(s: &str, n: usize) -> RationalFunction {
        RationalFunction::parse(s, &default_var_names(n)).unwrap()
    }

    #[test]
    fn parses_example_pair() {
        let f = rf("(x^2+y)/(x+y)", 2);
        assert_eq!(f.p().to_string(), "x^2 + y");
        assert_eq!(f.q().to_string(), "x + y");
        assert_eq!(*f.coprimality(), Coprimality::Verified);
    }

    #[test]
    fn polynomial_has_unit_denominator() {
        let f = rf("x + x^2*y", 2);
        assert!(f.is_polynomial());
        assert_eq!(f.q().to_string(), "1");
    }

    #[test]
    fn content_moves_to_numerator() {
        let f = rf("(x)/(-2*x - 4*y)", 2);
        assert_eq!(f.q().to_string(), "x + 2*y");
        assert_eq!(f.p().to_string(), "-1/2*x");
        let g = rf("(x)/(1/3*y+1/2)", 2);
        assert_eq!(g.q().to_string(), "2*y + 3");
        assert_eq!(g.p().to_string(), "6*x");
    }

    #[test]
    fn refutes_shared_factor() {
        let f = rf("(x*(x+y))/(x*(x-y))", 2);
        assert_eq!(*f.coprimality(), Coprimality::Refuted { witness: "x".into() });
    }

    #[test]
    fn three_variables_are_assumed() {
        let f = rf("(x+y+z)/(x-y+z)", 3);
        match f.coprimality() {
            Coprimality::Assumed { reason } => assert!(!reason.contains("probably not")),
            other => panic!("{other:?}"),
        }
        let g = rf("((x+y)*(y+z))/((x+y)*(x-z))", 3);
        match g.coprimality() {
            Coprimality::Assumed { reason } => assert!(reason.contains("probably not")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_zero_denominator_and_one_variable() {
        assert!(matches!(
            RationalFunction::parse("x/(x-x)", &default_var_names(2)),
            Err(Error::ZeroDenominator)
        ));
        assert!(RationalFunction::parse("x", &["x".to_string()]).is_err());
    }
}
