//! Sparse Laurent polynomials over the rationals.
//!
//! A [`LaurentPoly`] is a map from exponent vectors to nonzero rational
//! coefficients. Terms are kept in graded-lexicographic order so printing,
//! hashing and iteration are deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Integer exponent vector `α ∈ Z^n`.
///
/// Ordered graded-lexicographically: total degree first, then the entries
/// lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn dot(&self, u: &[i64]) -> i64 {
        self.0.iter().zip(u).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Sparse Laurent polynomial in `nvars` variables with rational coefficients.
///
/// No stored coefficient is zero; the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerator or denominator: shift both down before dividing
        _ => {
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb.max(db) - 900).max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if n == 0.0 {
                    0.0
                } else {
                    n.signum() * f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// Pairwise summation in a fixed order.
pub(crate) fn balanced_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        2 => values[0] + values[1],
        len => {
            let (lo, hi) = values.split_at(len / 2);
            balanced_sum(lo) + balanced_sum(hi)
        }
    }
}

fn monomial_value(exp: &ExponentVector, z: &[Complex64]) -> Option<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (i, &e) in exp.as_slice().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e < 0 && z[i] == Complex64::new(0.0, 0.0) {
            return None;
        }
        acc *= z[i].powi(e as i32);
    }
    Some(acc)
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn monomial(exp: ExponentVector, c: BigRational) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The coordinate function `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, i), BigRational::one())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, BigRational)>,
    {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(ExponentVector(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn leading_term(&self) -> Option<(&ExponentVector, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    /// The constant value if this polynomial is constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.coeff(&ExponentVector::zero(self.nvars)))
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.is_nonnegative())
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    fn add_term(&mut self, exp: ExponentVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `z^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.add(shift), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = LaurentPoly::one(self.nvars);
        for _ in 0..k {
            result = &result * self;
        }
        result
    }

    /// Holomorphic partial derivative `∂/∂z_i`.
    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne.0[i] -= 1;
            out.terms.insert(ne, c * rat(k));
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn truncate<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies an exponent map into a polynomial ring with `nvars` variables.
    pub fn map_exponents<F>(&self, nvars: usize, map: F) -> Self
    where
        F: Fn(&ExponentVector) -> Vec<i64>,
    {
        let mut out = LaurentPoly::zero(nvars);
        for (e, c) in &self.terms {
            let ne = map(e);
            assert_eq!(ne.len(), nvars);
            out.add_term(ExponentVector(ne), c.clone());
        }
        out
    }

    /// Evaluates at a complex point with balanced summation.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64, Error> {
        if z.len() != self.nvars {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, polynomial has {} variables",
                z.len(),
                self.nvars
            )));
        }
        let mut values = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let m = monomial_value(e, z).ok_or_else(|| {
                Error::InvalidInput("division by zero: negative exponent at a zero coordinate".into())
            })?;
            values.push(m * rat_to_f64(c));
        }
        Ok(balanced_sum(&values))
    }

    /// `Σ |a_α| |z^α|`, the natural scale for residuals of [`evaluate`](Self::evaluate).
    pub fn evaluate_abs(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                monomial_value(e, z)
                    .map(|m| m.norm() * rat_to_f64(c).abs())
                    .unwrap_or(f64::INFINITY)
            })
            .sum()
    }

    /// `|g(z)| / Σ|a_α||z^α|`, or 0 for the zero polynomial.
    pub fn relative_residual(&self, z: &[Complex64]) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let scale = self.evaluate_abs(z);
        match self.evaluate(z) {
            Ok(v) if scale > 0.0 => v.norm() / scale,
            Ok(_) => 0.0,
            Err(_) => f64::INFINITY,
        }
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_rational(&self, z: &[BigRational]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if z[i].is_zero() {
                    if k < 0 {
                        return None;
                    }
                    m = BigRational::zero();
                    break;
                }
                m *= num_traits::pow::Pow::pow(&z[i], k as i32);
            }
            acc += m;
        }
        Some(acc)
    }

    /// Substitutes `z_var = value`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &BigRational) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            let factor = if k == 0 {
                BigRational::one()
            } else {
                num_traits::pow::Pow::pow(value, k as i32)
            };
            let mut ne = e.clone();
            ne.0[var] = 0;
            out.add_term(ne, c * factor);
        }
        out
    }

    /// Coefficients with respect to `var`, lowest degree first.
    ///
    /// Requires nonnegative exponents in `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<LaurentPoly> {
        assert!(self.min_degree_in(var) >= 0, "negative exponent in main variable");
        if self.is_zero() {
            return Vec::new();
        }
        let deg = self.degree_in(var) as usize;
        let mut out = vec![LaurentPoly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut ne = e.clone();
            ne.0[var] = 0;
            out[k].terms.insert(ne, c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[LaurentPoly]) -> Self {
        let mut out = LaurentPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut ne = e.clone();
                ne.0[var] += k as i64;
                out.add_term(ne, a.clone());
            }
        }
        out
    }

    /// Exact division in the polynomial ring; `None` if `divisor` does not divide.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (lead_e, lead_c) = divisor.leading_term()?;
        if self.is_zero() {
            return Some(LaurentPoly::zero(self.nvars));
        }
        if divisor.is_monomial() {
            let shift = ExponentVector(lead_e.0.iter().map(|k| -k).collect());
            let q = self.shift(&shift).scale(&lead_c.recip());
            if self.is_polynomial() && !q.is_polynomial() {
                return None;
            }
            return Some(q);
        }
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading_term() {
            let qe = e.sub(lead_e);
            if !qe.is_nonnegative() {
                return None;
            }
            let qc = c / lead_c;
            let term = LaurentPoly::monomial(qe.clone(), qc.clone());
            rem = &rem - &(&term * divisor);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Removes the rational content: returns `(c, p)` with `self = c * p`, where
    /// `p` has coprime integer coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (BigRational, LaurentPoly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        let p = self.scale(&content.recip());
        (content, p)
    }

    /// Integer coefficients as `BigInt`, if all coefficients are integral.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.terms
            .values()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect()
    }

    /// Inserts a new variable at position `at` with exponent zero everywhere.
    pub fn insert_variable(&self, at: usize) -> Self {
        self.map_exponents(self.nvars + 1, |e| {
            let mut v = e.as_slice().to_vec();
            v.insert(at, 0);
            v
        })
    }

    /// Drops variable `var`, which must not occur.
    pub fn remove_variable(&self, var: usize) -> Self {
        assert!(!self.involves(var), "cannot drop a variable that occurs");
        self.map_exponents(self.nvars - 1, |e| {
            let mut v = e.as_slice().to_vec();
            v.remove(var);
            v
        })
    }

    /// Pretty-prints with the given variable names, highest term first.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-BigRational::one())
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Default variable names: `x, y, z` up to three variables, `x1..xn` beyond.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a LaurentPoly,
    names: &'a [String],
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut first = true;
            if !abs.is_one() || e.is_zero() {
                write_coefficient(f, &abs)?;
                first = false;
            }
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let name = self.names.get(i).map(String::as_str).unwrap_or("?");
                if k == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}
