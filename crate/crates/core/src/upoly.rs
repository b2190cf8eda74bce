//! Dense univariate polynomials over the rationals, with exact GCDs and
//! numerical root finding.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{rat, rat_to_f64, ExponentVector, LaurentPoly};

/// Coefficients stored lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

/// A root of a univariate polynomial.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: Complex64,
    /// Set when the root was found to be rational and verified exactly.
    pub exact: Option<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The linear polynomial `s - r`.
    pub fn linear_root(r: &BigRational) -> Self {
        Self::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        UniPoly::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `s^k`.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly::new(coeffs)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division over Q.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.deg();
        let lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Quotient when `divisor` divides exactly.
    pub fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Monic GCD (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Scales to coprime integer coefficients with positive leading coefficient.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        self.scale(&content.recip())
    }

    /// `self / gcd(self, self')`, made primitive.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.deg() < 2 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Removes the factor `s^k` of highest possible `k`, returning `(k, rest)`.
    pub fn strip_zero_roots(&self) -> (usize, UniPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, UniPoly::new(self.coeffs[k..].to_vec()))
    }

    pub fn eval(&self, s: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + rat_to_f64(c);
        }
        acc
    }

    /// `Σ |c_i| |s|^i`, the scale of rounding error in [`eval_complex`](Self::eval_complex).
    pub fn eval_abs(&self, s: Complex64) -> f64 {
        let r = s.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + rat_to_f64(c).abs();
        }
        acc
    }

    pub fn relative_residual(&self, s: Complex64) -> f64 {
        let scale = self.eval_abs(s);
        if scale == 0.0 {
            0.0
        } else {
            self.eval_complex(s).norm() / scale
        }
    }

    /// Views a polynomial in one variable of a multivariate ring as univariate.
    ///
    /// Returns `None` if another variable occurs or an exponent is negative.
    pub fn from_laurent(p: &LaurentPoly, var: usize) -> Option<UniPoly> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (e, c) in p.terms() {
            for (i, &k) in e.as_slice().iter().enumerate() {
                if (i != var && k != 0) || k < 0 {
                    return None;
                }
            }
            let k = e[var] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] += c;
        }
        Some(UniPoly::new(coeffs))
    }

    /// Splits a univariate Laurent polynomial into `(k, p)` with `g = s^k p(s)`
    /// and `p(0) != 0`.
    pub fn from_laurent_normalized(p: &LaurentPoly, var: usize) -> Option<(i64, UniPoly)> {
        if p.is_zero() {
            return Some((0, UniPoly::zero()));
        }
        let low = p.min_degree_in(var);
        let mut shift = vec![0; p.nvars()];
        shift[var] = -low;
        let poly = UniPoly::from_laurent(&p.shift(&ExponentVector::new(shift)), var)?;
        Some((low, poly))
    }

    pub fn to_laurent(&self, nvars: usize, var: usize) -> LaurentPoly {
        LaurentPoly::from_terms(
            nvars,
            self.coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[var] = k as i64;
                (e, c.clone())
            }),
        )
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    /// Rational roots by exact verification of candidates `p/q` with
    /// `p | a_0`, `q | a_n`, for polynomials with `p(0) != 0`.
    ///
    /// Candidate enumeration is skipped when the divisor lists are large; in
    /// that case candidates come from continued-fraction convergents of the
    /// real numerical roots instead.
    fn rational_roots_exact(&self, numeric: &[Complex64]) -> Vec<BigRational> {
        let ints = self.integer_coeffs();
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let mut found: Vec<BigRational> = Vec::new();
        let try_candidate = |cand: BigRational, found: &mut Vec<BigRational>| {
            if !found.contains(&cand) && self.eval(&cand).is_zero() {
                found.push(cand);
            }
        };
        let small = |n: &BigInt| n.to_u64().map(|v| v <= 1_000_000).unwrap_or(false);
        if small(&a0) && small(&an) {
            let dp = divisors(a0.to_u64().unwrap());
            let dq = divisors(an.to_u64().unwrap());
            if dp.len() * dq.len() <= 4096 {
                for &p in &dp {
                    for &q in &dq {
                        for sign in [1i64, -1] {
                            let cand = BigRational::new(BigInt::from(p) * sign, BigInt::from(q));
                            try_candidate(cand, &mut found);
                        }
                    }
                }
                found.sort();
                return found;
            }
        }
        for z in numeric {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                continue;
            }
            for cand in convergents(z.re, &an) {
                try_candidate(cand, &mut found);
            }
        }
        found.sort();
        found
    }

    /// All distinct complex roots, with rational roots identified exactly.
    ///
    /// Rational roots are split off first; the remaining roots come from the
    /// eigenvalues of the companion matrix, polished by Newton's method.
    pub fn roots(&self) -> Vec<Root> {
        if self.deg() == 0 {
            return Vec::new();
        }
        let sqf = self.squarefree_part();
        let (k, mut rest) = sqf.strip_zero_roots();
        let mut out = Vec::new();
        if k > 0 {
            out.push(Root {
                value: Complex64::new(0.0, 0.0),
                exact: Some(BigRational::zero()),
            });
        }
        if rest.deg() == 0 {
            return out;
        }
        let approx = numeric_roots(&rest);
        for r in rest.rational_roots_exact(&approx) {
            rest = rest.div_exact(&UniPoly::linear_root(&r)).expect("verified root");
            out.push(Root {
                value: Complex64::new(rat_to_f64(&r), 0.0),
                exact: Some(r),
            });
        }
        if rest.deg() > 0 {
            for z in numeric_roots(&rest) {
                out.push(Root { value: z, exact: None });
            }
        }
        out.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
        out
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Continued-fraction convergents of `x` with denominators dividing `max_den`.
fn convergents(x: f64, max_den: &BigInt) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..40 {
        let a = rest.floor();
        let Some(ai) = num_bigint::BigInt::from_f64_checked(a) else {
            break;
        };
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2.is_zero() || &k2 > max_den {
            break;
        }
        if (max_den % &k2).is_zero() {
            out.push(BigRational::new(h2.clone(), k2.clone()));
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

trait FromF64Checked: Sized {
    fn from_f64_checked(v: f64) -> Option<Self>;
}

impl FromF64Checked for BigInt {
    fn from_f64_checked(v: f64) -> Option<Self> {
        if v.is_finite() && v.abs() < 1e18 {
            num_traits::FromPrimitive::from_f64(v)
        } else {
            None
        }
    }
}

/// Roots of a squarefree polynomial with nonzero constant term, in floating point.
fn numeric_roots(p: &UniPoly) -> Vec<Complex64> {
    let n = p.deg();
    if n == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let c: Vec<f64> = monic.coeffs.iter().map(rat_to_f64).collect();
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    let eig: Vec<Complex64> = match nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(&c),
    };
    eig.into_iter().map(|z| polish(p, z)).collect()
}

/// Aberth–Ehrlich iteration on a monic polynomial given by its coefficients.
fn aberth(monic: &[f64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// A few Newton steps on the exact polynomial; keeps the better point.
fn polish(p: &UniPoly, z0: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut z = z0;
    let mut best = (p.relative_residual(z), z);
    for _ in 0..8 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval_complex(z) / d;
        z -= step;
        let r = p.relative_residual(z);
        if r < best.0 {
            best = (r, z);
        }
        if step.norm() <= 1e-16 * z.norm() {
            break;
        }
    }
    best.1
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = vec!["s".to_string()];
        write!(f, "{}", self.to_laurent(1, 0).display_with(&names))
    }
}
