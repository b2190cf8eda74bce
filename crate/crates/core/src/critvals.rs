//! Global critical values `f(Sing f)` and the discriminant of the fibers
//! `P - tQ`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{solve_multistart, FloatPoly, MultistartOptions, System};
use crate::poly::{rat_to_f64, ratio, ExponentVector, LaurentPoly};
use crate::rational::RationalFunction;
use crate::resultant::{content_in, gcd2, resultant};
use crate::upoly::UniPoly;
use crate::values::{Certification, CriticalValue, CriticalValueSet, Settings};

/// A point of `a = b = 0` in `C^2`, with exact coordinates when both are rational.
#[derive(Clone, Debug)]
pub struct CommonZero {
    pub z: Vec<Complex64>,
    pub exact: Option<Vec<BigRational>>,
}

/// Splits `g = z^m g'` with `g'` not divisible by any variable.
fn monomial_split(g: &LaurentPoly) -> (Vec<i64>, LaurentPoly) {
    let n = g.nvars();
    let m: Vec<i64> = (0..n).map(|j| g.min_degree_in(j)).collect();
    let neg: Vec<i64> = m.iter().map(|x| -x).collect();
    (m, g.shift(&ExponentVector::new(neg)))
}

/// Isolated common zeros of two coprime polynomials in two variables.
///
/// Monomial factors are handled exactly on the coordinate axes; relative
/// residuals are meaningless there. The remaining points come from the roots
/// of the resultants in each variable, matched by residual and then polished
/// on the system itself.
pub fn common_zeros(a: &LaurentPoly, b: &LaurentPoly, vanish_tol: f64) -> Result<Vec<CommonZero>> {
    if a.is_constant() || b.is_constant() {
        return Ok(Vec::new());
    }
    let (ma, a1) = monomial_split(a);
    let (mb, b1) = monomial_split(b);
    let mut out: Vec<CommonZero> = Vec::new();
    for (m, other) in [(&ma, b), (&mb, a)] {
        for j in (0..2).filter(|&j| m[j] > 0) {
            let o = 1 - j;
            let restricted = other.substitute(j, &BigRational::zero());
            if restricted.is_zero() {
                return Err(Error::Internal("both polynomials vanish on a coordinate axis".into()));
            }
            let r = UniPoly::from_laurent(&restricted, o).expect("polynomial");
            for root in r.roots() {
                let mut z = vec![Complex64::new(0.0, 0.0); 2];
                z[o] = root.value;
                let exact = root.exact.map(|e| {
                    let mut v = vec![BigRational::zero(); 2];
                    v[o] = e;
                    v
                });
                push_unique(&mut out, CommonZero { z, exact });
            }
        }
    }
    if a1.is_constant() || b1.is_constant() {
        return Ok(out);
    }
    let rx = resultant(&a1, &b1, 1);
    let ry = resultant(&a1, &b1, 0);
    if rx.is_zero() || ry.is_zero() {
        return Err(Error::Internal("resultant vanishes for coprime polynomials".into()));
    }
    let xs = UniPoly::from_laurent(&rx, 0).expect("resultant in x").roots();
    let ys = UniPoly::from_laurent(&ry, 1).expect("resultant in y").roots();
    let sys = System::new(&[a1.clone(), b1.clone()]);
    let loose = vanish_tol.sqrt();
    for x in &xs {
        for y in &ys {
            if let (Some(ex), Some(ey)) = (&x.exact, &y.exact) {
                let e = vec![ex.clone(), ey.clone()];
                let vanishes = |g: &LaurentPoly| g.evaluate_rational(&e).map(|v| v.is_zero()).unwrap_or(false);
                if vanishes(&a1) && vanishes(&b1) {
                    push_unique(&mut out, CommonZero { z: vec![x.value, y.value], exact: Some(e) });
                }
                continue;
            }
            let z0 = vec![x.value, y.value];
            if sys.relative_residual(&z0) > loose {
                continue;
            }
            let z = sys.polish(&z0, 20);
            if sys.relative_residual(&z) > vanish_tol {
                continue;
            }
            push_unique(&mut out, CommonZero { z, exact: None });
        }
    }
    Ok(out)
}

fn push_unique(out: &mut Vec<CommonZero>, c: CommonZero) {
    let close = |o: &CommonZero| o.z.iter().zip(&c.z).all(|(p, q)| (p - q).norm() <= 1e-8 * (1.0 + p.norm()));
    match out.iter_mut().find(|o| close(o)) {
        Some(o) => {
            if o.exact.is_none() {
                o.exact = c.exact;
            }
        }
        None => out.push(c),
    }
}

/// `f(Sing f)`: values of `f` at points off `Q = 0` where both partials of
/// `f` vanish.
///
/// In two variables the set is complete. The cleared partials
/// `A_j = Q ∂_j P - P ∂_j Q` are split as `G·(A_1', A_2')` with `G` their gcd:
/// isolated points come from `A_1' = A_2' = 0`, and `f` is constant on each
/// component of `G = 0`, which is sampled by a generic vertical slice plus the
/// vertical lines in the content of `G`.
pub fn global_critical_values(f: &RationalFunction, settings: &Settings) -> Result<CriticalValueSet> {
    let mut out = CriticalValueSet::new("global");
    let n = f.nvars();
    let a: Vec<LaurentPoly> = (0..n).map(|j| f.derivative_numerator(j)).collect();
    if a.iter().all(|g| g.is_zero()) {
        // Coprime and with all partials zero: both constant.
        let c = f.p().constant_value().unwrap_or_default() / f.q().constant_value().expect("nonzero constant");
        out.insert(CriticalValue::exact(c), settings.dedupe_tol);
        return Ok(out);
    }
    if n != 2 {
        return numeric_global(f, &a, settings);
    }
    let g = gcd2(&a[0], &a[1]);
    let a1 = a[0].div_exact(&g).expect("gcd divides");
    let b1 = a[1].div_exact(&g).expect("gcd divides");
    let fq = FloatPoly::new(f.q());
    let off_poles = |z: &[Complex64]| fq.relative(z) > settings.vanish_tol;
    let insert_at = |out: &mut CriticalValueSet, z: &[Complex64], exact: Option<&[BigRational]>| {
        let v = match exact.and_then(|e| exact_value(f, e)) {
            Some(r) => CriticalValue::exact(r),
            None => match f.evaluate(z) {
                Some(v) if v.is_finite() => CriticalValue::numeric(v, Certification::NumericCertified),
                _ => return,
            },
        };
        out.insert(v, settings.dedupe_tol);
    };
    for cz in common_zeros(&a1, &b1, settings.vanish_tol)? {
        if off_poles(&cz.z) {
            insert_at(&mut out, &cz.z, cz.exact.as_deref());
        }
    }
    if !g.is_constant() {
        out.notes.push(format!("Sing f contains the curve {} = 0", g.display_with(f.vars())));
        let vertical = content_in(&g, 1);
        let g1 = g.div_exact(&vertical.to_laurent(2, 0)).expect("content divides");
        for root in vertical.roots() {
            // f is constant on the line x = c; sample it at a few heights.
            for y0 in slice_points() {
                let z = [root.value, Complex64::new(rat_to_f64(&y0), 0.0)];
                if off_poles(&z) {
                    let exact = root.exact.clone().map(|c| vec![c, y0.clone()]);
                    insert_at(&mut out, &z, exact.as_deref());
                    break;
                }
            }
        }
        if g1.involves(1) {
            let dy = g1.degree_in(1);
            let x0 = slice_points()
                .into_iter()
                .find(|x0| {
                    let s = UniPoly::from_laurent(&g1.substitute(0, x0), 1).expect("polynomial");
                    s.degree() == Some(dy as usize) && s.is_squarefree()
                })
                .ok_or_else(|| Error::Internal("no generic slice of the critical curve".into()))?;
            let slice = UniPoly::from_laurent(&g1.substitute(0, &x0), 1).expect("polynomial");
            let xf = Complex64::new(rat_to_f64(&x0), 0.0);
            for root in slice.roots() {
                let z = [xf, root.value];
                if off_poles(&z) {
                    let exact = root.exact.clone().map(|y| vec![x0.clone(), y]);
                    insert_at(&mut out, &z, exact.as_deref());
                }
            }
        }
    }
    Ok(out)
}

fn exact_value(f: &RationalFunction, z: &[BigRational]) -> Option<BigRational> {
    let q = f.q().evaluate_rational(z)?;
    if q.is_zero() {
        return None;
    }
    Some(f.p().evaluate_rational(z)? / q)
}

/// Deterministic rational sample abscissae, avoiding small integers.
fn slice_points() -> Vec<BigRational> {
    [(17, 7), (-23, 11), (31, 13), (-41, 19), (53, 29), (-67, 31), (79, 37), (-97, 43)]
        .iter()
        .map(|&(a, b)| ratio(a, b))
        .collect()
}

fn numeric_global(f: &RationalFunction, a: &[LaurentPoly], settings: &Settings) -> Result<CriticalValueSet> {
    let mut out = CriticalValueSet::new("global");
    out.complete = false;
    out.notes.push("more than two variables: critical points found by numeric search only".into());
    let opts = MultistartOptions { starts: settings.starts, seed: settings.seed, ..Default::default() };
    let fq = FloatPoly::new(f.q());
    for z in solve_multistart(a, &opts) {
        if fq.relative(&z) <= settings.vanish_tol {
            continue;
        }
        if let Some(v) = f.evaluate(&z).filter(|v| v.is_finite()) {
            out.insert(CriticalValue::numeric(v, Certification::NumericHeuristic), settings.dedupe_tol);
        }
    }
    Ok(out)
}

/// `Res_var(P - tQ, ∂_var(P - tQ))` as a polynomial in `(other, t)`,
/// integer-primitive with positive leading coefficient in graded-lex order.
/// Its zero set is where the fiber `f = t` has a multiple point over the
/// other coordinate.
pub fn discriminant_sheet(p: &LaurentPoly, q: &LaurentPoly, var: usize) -> Result<LaurentPoly> {
    if p.nvars() != 2 || var > 1 {
        return Err(Error::InvalidInput("the discriminant sheet needs two variables".into()));
    }
    // Variables (x, y, t).
    let p3 = p.insert_variable(2);
    let q3 = q.insert_variable(2);
    let t = LaurentPoly::var(3, 2);
    let fib = &p3 - &(&t * &q3);
    if fib.degree_in(var) <= 0 {
        return Err(Error::InvalidInput(format!(
            "P - tQ does not involve variable {}; eliminate the other variable",
            var + 1
        )));
    }
    let r = resultant(&fib, &fib.partial_derivative(var), var).remove_variable(var);
    let (_, mut r) = r.primitive_part();
    if r.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        r = -&r;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, &default_var_names(2)).unwrap()
    }

    fn poly(s: &str, names: &[&str]) -> LaurentPoly {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        parse_polynomial(s, &names).unwrap()
    }

    fn exact_values(s: &CriticalValueSet) -> Vec<BigRational> {
        s.values.iter().map(|v| v.exact.clone().expect("exact")).collect()
    }

    #[test]
    fn worked_examples_have_no_critical_values() {
        for s in ["(x^2+y)/(x+y)", "(x+y)/(x+2*y)", "x + x^2*y"] {
            let v = global_critical_values(&rf(s), &Settings::default()).unwrap();
            assert!(v.is_empty(), "{s}: {v:?}");
            assert!(v.complete);
        }
    }

    #[test]
    fn quadratic_has_value_zero() {
        let v = global_critical_values(&rf("x^2+y^2"), &Settings::default()).unwrap();
        assert_eq!(exact_values(&v), vec![ratio(0, 1)]);
    }

    #[test]
    fn isolated_irrational_points() {
        // P = x^3 - 3x + y^2 has critical points (±1, 0) with values ∓2;
        // (x^2 - 2)^2 + y^2 has them at x = 0, ±sqrt 2.
        let v = global_critical_values(&rf("x^3 - 3*x + y^2"), &Settings::default()).unwrap();
        assert_eq!(exact_values(&v), vec![ratio(-2, 1), ratio(2, 1)]);
        let v = global_critical_values(&rf("x^4 - 4*x^2 + 4 + y^2"), &Settings::default()).unwrap();
        let vals: Vec<f64> = v.values.iter().map(|c| c.value.re).collect();
        assert_eq!(vals.len(), 2);
        assert!(vals[0].abs() < 1e-9 && (vals[1] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn critical_curve_is_sampled() {
        // f = (x*y - 1)^2 is critical along x*y = 1 (value 0) and at the origin (value 1).
        let v = global_critical_values(&rf("x^2*y^2 - 2*x*y + 1"), &Settings::default()).unwrap();
        let vals: Vec<f64> = v.values.iter().map(|c| c.value.re).collect();
        assert_eq!(vals.len(), 2, "{v:?}");
        assert!(vals[0].abs() < 1e-9 && (vals[1] - 1.0).abs() < 1e-9);
        // A vertical critical line: f = (x - 2)^2 * y + y, so ∂_y f = (x-2)^2 + 1 never vanishes; use
        // (x - 2)^2 * (y + 1) instead, critical on x = 2 with value 0.
        let v = global_critical_values(&rf("(x-2)*(x-2)*(y+1)"), &Settings::default()).unwrap();
        assert_eq!(exact_values(&v), vec![ratio(0, 1)]);
    }

    #[test]
    fn points_on_the_axes() {
        // ∂_x P is divisible by y; the critical points (x0, 0), x0^4 = 1/2, lie on that axis.
        let v = global_critical_values(&rf("-x^4*y^3 - 3*x^3*y^4 - 4*x^4*y - 2*x^2*y^3 + 2*y"), &Settings::default()).unwrap();
        assert!(v.values.iter().any(|c| c.value.norm() < 1e-9));
        let f = rf("x*y");
        let z = common_zeros(&f.p().partial_derivative(0), &f.p().partial_derivative(1), 1e-8).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].exact, Some(vec![ratio(0, 1), ratio(0, 1)]));
    }

    #[test]
    fn poles_are_excluded() {
        // Critical points of x/y would need y^-2 = 0; A and B meet only at the pole.
        let v = global_critical_values(&rf("(x)/(y)"), &Settings::default()).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn discriminant_of_the_rational_example() {
        let f = rf("(x^2+y)/(x+y)");
        let d = discriminant_sheet(f.p(), f.q(), 0).unwrap();
        assert_eq!(d, poly("t^2 + 4*t*y - 4*y", &["y", "t"]));
    }

    #[test]
    fn discriminant_small_cases() {
        let names = ["x", "y"];
        let one = poly("1", &names);
        let d = discriminant_sheet(&poly("x^2", &names), &one, 0).unwrap();
        assert_eq!(d, poly("t", &["y", "t"]));
        let d = discriminant_sheet(&poly("x", &names), &one, 0).unwrap();
        assert!(d.is_constant() && !d.is_zero());
        assert!(discriminant_sheet(&poly("y", &names), &one, 0).is_err());
    }
}
