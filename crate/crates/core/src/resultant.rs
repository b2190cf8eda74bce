//! Subresultant elimination over Q[other variables].
//!
//! Polynomials are viewed as univariate in a main variable with coefficients
//! that are themselves `LaurentPoly` values not involving it. All divisions in
//! the pseudo-remainder sequence are exact in the coefficient ring.

use crate::poly::LaurentPoly;
use crate::upoly::UniPoly;

type Coeffs = Vec<LaurentPoly>;

fn trim(v: &mut Coeffs) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn deg(v: &Coeffs) -> usize {
    v.len().saturating_sub(1)
}

fn lc(v: &Coeffs) -> &LaurentPoly {
    v.last().expect("nonzero")
}

fn scale(v: &Coeffs, c: &LaurentPoly) -> Coeffs {
    let mut out: Coeffs = v.iter().map(|a| a * c).collect();
    trim(&mut out);
    out
}

fn div_all(v: &Coeffs, c: &LaurentPoly) -> Coeffs {
    v.iter()
        .map(|a| a.div_exact(c).expect("subresultant division must be exact"))
        .collect()
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let db = deg(b);
    let lb = lc(b).clone();
    let mut r = a.clone();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !r.is_empty() && deg(&r) >= db {
        let lr = lc(&r).clone();
        let shift = deg(&r) - db;
        let mut next: Coeffs = r.iter().map(|c| c * &lb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(bc * &lr);
        }
        trim(&mut next);
        r = next;
        e -= 1;
    }
    if e > 0 {
        r = scale(&r, &lb.pow(e as u32));
    }
    r
}

fn split(p: &LaurentPoly, var: usize) -> Coeffs {
    let mut v = p.coefficients_in(var);
    trim(&mut v);
    v
}

/// Runs the subresultant sequence; returns `(resultant, last nonzero remainder)`.
fn sequence(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> (LaurentPoly, Coeffs) {
    let n = a.nvars();
    let zero = LaurentPoly::zero(n);
    let mut a = split(a, var);
    let mut b = split(b, var);
    if a.is_empty() || b.is_empty() {
        let last = if a.is_empty() { b } else { a };
        return (zero, last);
    }
    let mut sign = false;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        let r = lc(&b).pow(deg(&a) as u32);
        return (r, b);
    }
    let mut g = LaurentPoly::one(n);
    let mut h = LaurentPoly::one(n);
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = !sign;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return (zero, b);
        }
        a = b;
        b = div_all(&r, &(&g * &h.pow(delta as u32)));
        g = lc(&a).clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32)
                .div_exact(&h.pow(delta as u32 - 1))
                .expect("subresultant h update must be exact")
        };
        if deg(&b) == 0 {
            let da = deg(&a) as u32;
            let res = lc(&b)
                .pow(da)
                .div_exact(&h.pow(da.saturating_sub(1)))
                .expect("final subresultant division must be exact");
            return (if sign { -&res } else { res }, b);
        }
    }
}

/// Resultant of `a` and `b` with respect to `var`.
///
/// Both inputs must have nonnegative exponents in `var`. The result does not
/// involve `var`; it is zero iff the two share a factor of positive degree in
/// `var` (or either is zero).
pub fn resultant(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> LaurentPoly {
    sequence(a, b, var).0
}

/// Last nonzero element of the subresultant sequence, which is an associate
/// of the gcd over the fraction field of the coefficient ring.
pub fn prs_last(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> LaurentPoly {
    let (_, last) = sequence(a, b, var);
    LaurentPoly::from_coefficients_in(a.nvars(), var, &last)
}

fn other(var: usize) -> usize {
    1 - var
}

/// Content with respect to `var` of a polynomial in two variables, as a
/// monic-normalized univariate polynomial in the other variable.
pub fn content_in(p: &LaurentPoly, var: usize) -> UniPoly {
    let o = other(var);
    let mut g = UniPoly::zero();
    for c in split(p, var) {
        let u = UniPoly::from_laurent(&c, o).expect("two-variable polynomial");
        g = g.gcd(&u);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Greatest common divisor of two polynomials in exactly two variables,
/// normalized to be integer-primitive with positive leading coefficient.
///
/// Computed as content gcd times the primitive part of the last subresultant.
pub fn gcd2(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    gcd2_in(a, b, 0)
}

/// [`gcd2`] with `var` as the main variable of the remainder sequence. The
/// result does not depend on the choice; both are exposed so callers can
/// cross-check.
pub fn gcd2_in(a: &LaurentPoly, b: &LaurentPoly, var: usize) -> LaurentPoly {
    assert_eq!(a.nvars(), 2, "gcd2 needs two variables");
    let n = 2;
    if a.is_zero() {
        return b.primitive_part().1;
    }
    if b.is_zero() {
        return a.primitive_part().1;
    }
    let o = other(var);
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let cont = ca.gcd(&cb).to_laurent(n, o);
    let pa = a.div_exact(&ca.to_laurent(n, o)).expect("content divides");
    let pb = b.div_exact(&cb.to_laurent(n, o)).expect("content divides");
    let g = if pa.degree_in(var) == 0 || pb.degree_in(var) == 0 {
        LaurentPoly::one(n)
    } else {
        let last = prs_last(&pa, &pb, var);
        if last.degree_in(var) == 0 {
            LaurentPoly::one(n)
        } else {
            let c = content_in(&last, var).to_laurent(n, o);
            last.div_exact(&c).expect("content divides")
        }
    };
    (&g * &cont).primitive_part().1
}

/// Squarefree check of a two-variable polynomial: no repeated factor.
pub fn is_squarefree2(p: &LaurentPoly) -> bool {
    for var in 0..2 {
        if p.degree_in(var) > 0 {
            let g = gcd2(p, &p.partial_derivative(var));
            if g.degree_in(var) > 0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn p(s: &str, n: usize) -> LaurentPoly {
        parse_polynomial(s, &default_var_names(n)).unwrap()
    }

    #[test]
    fn resultant_of_example_pair() {
        // Res_x(x^2+y, x+y) = y^2 + y
        let r = resultant(&p("x^2+y", 2), &p("x+y", 2), 0);
        assert_eq!(r, p("y^2+y", 2));
    }

    #[test]
    fn resultant_linear_sylvester() {
        // Res_x(ax+b, cx+d) = ad - bc
        let r = resultant(&p("2*x+3", 2), &p("5*x+7", 2), 0);
        assert_eq!(r, p("14-15", 2));
    }

    #[test]
    fn resultant_detects_common_factor() {
        let r = resultant(&p("(x-y)*(x+1)", 2), &p("(x-y)*(x+2)", 2), 0);
        assert!(r.is_zero());
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(A,B) = lc(A)^degB * prod B(roots of A): A=(x-1)(x-2), B=x^3+1.
        let r = resultant(&p("(x-1)*(x-2)", 2), &p("x^3+1", 2), 0);
        assert_eq!(r, p("2*9", 2));
        let r2 = resultant(&p("x^3+1", 2), &p("(x-1)*(x-2)", 2), 0);
        assert_eq!(r2, p("18", 2));
    }

    #[test]
    fn gcd_of_bivariate() {
        let g = gcd2(&p("(x-y)*(x+y^2)", 2), &p("(x-y)*(x*y+1)*3", 2));
        assert_eq!(g, p("x-y", 2));
        let g1 = gcd2_in(&p("(x-y)*(x+y^2)", 2), &p("(x-y)*(x*y+1)*3", 2), 1);
        assert_eq!(g1, p("x-y", 2));
        let g = gcd2(&p("x*(x+y)", 2), &p("x*(x-y)", 2));
        assert_eq!(g, p("x", 2));
        let g = gcd2(&p("(y+1)*(x+y)", 2), &p("(y+1)*(y+1)*x", 2));
        assert_eq!(g, p("y+1", 2));
        let g = gcd2(&p("x^2+y", 2), &p("x+y", 2));
        assert_eq!(g, p("1", 2));
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree2(&p("x^2+y", 2)));
        assert!(!is_squarefree2(&p("(x-y)*(x-y)*(x+1)", 2)));
        assert!(!is_squarefree2(&p("(y-2)*(y-2)*x", 2)));
    }
}
