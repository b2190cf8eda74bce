//! Type I / type II classification of the faces of `N(f)`, face functions,
//! their reduction to intrinsic torus coordinates, and their critical values.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{rank, AdaptedBasis};
use crate::numeric::{solve_multistart, FloatPoly, MultistartOptions};
use crate::poly::{ExponentVector, LaurentPoly};
use crate::polytope::{decompose_face, FaceDecomposition, LatticePolytope};
use crate::rational::{Coprimality, RationalFunction};
use crate::upoly::UniPoly;
use crate::values::{Certification, CriticalValue, CriticalValueSet, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceType {
    TypeI,
    TypeII,
    Interior,
}

impl FaceType {
    pub fn as_str(self) -> &'static str {
        match self {
            FaceType::TypeI => "type_i",
            FaceType::TypeII => "type_ii",
            FaceType::Interior => "interior",
        }
    }
}

/// Support numbers of `N(P)`, `N(Q)` and their difference along one normal generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DValues {
    pub generator: Vec<i64>,
    pub d_p: i64,
    pub d_q: i64,
    /// `d_p - d_q`.
    pub d_f: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedFace {
    pub decomposition: FaceDecomposition,
    pub label: FaceType,
    pub d_values: Vec<DValues>,
    pub dim: usize,
    /// The face is `N(f)` itself (only possible when `dim N(f) < n`).
    pub is_whole: bool,
}

/// Newton polytopes of `P`, `Q`, `f` and the classified faces of `N(f)`.
#[derive(Clone, Debug)]
pub struct FaceAnalysis {
    pub np: LatticePolytope,
    pub nq: LatticePolytope,
    pub nf: LatticePolytope,
    pub faces: Vec<ClassifiedFace>,
}

impl FaceAnalysis {
    pub fn label(&self, face: &ClassifiedFace) -> String {
        self.nf.face_label(face.decomposition.gamma)
    }

    pub fn faces_of_type(&self, t: FaceType) -> impl Iterator<Item = &ClassifiedFace> {
        self.faces.iter().filter(move |f| f.label == t)
    }

    pub fn find(&self, label: &str) -> Option<&ClassifiedFace> {
        self.faces.iter().find(|f| self.label(f) == label)
    }
}

/// `0 ∈ Aff(S)`: the linear span of `S` is no larger than its affine span.
pub fn zero_in_affine_hull(points: &[Vec<i64>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let diffs: Vec<Vec<i64>> =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()).collect();
    rank(points) == rank(&diffs)
}

/// Classifies every face of `N(f)`, including `N(f)` itself when it is not
/// full-dimensional.
///
/// A face is interior when its whole normal cone lies in the closed positive
/// orthant. Otherwise some generator has a negative entry, and so do the
/// relative-interior points of the cone close to it, so the face is supported
/// by a vector outside the orthant. Since `d_P - d_Q` is linear on the closed
/// normal cone and the supporting vectors outside the orthant form a nonempty
/// relatively open subset of its span, "zero for every such vector" is
/// equivalent to "zero on every generator". The affine-hull test is run as an
/// independent check.
pub fn classify_faces(f: &RationalFunction) -> Result<FaceAnalysis> {
    if let Coprimality::Refuted { witness } = f.coprimality() {
        return Err(Error::NotCoprime { witness: witness.clone() });
    }
    if f.p().is_zero() {
        return Err(Error::InvalidInput("the numerator is identically zero".into()));
    }
    let np = LatticePolytope::newton(f.p());
    let nq = LatticePolytope::newton(f.q());
    let nf = np.minkowski_sum(&nq);
    let n = f.nvars();
    let mut faces = Vec::new();
    for (idx, face) in nf.faces().iter().enumerate() {
        let is_whole = idx == nf.whole();
        if is_whole && nf.dim() == n {
            continue;
        }
        let decomposition = decompose_face(&nf, idx, &np, &nq)?;
        let d_values: Vec<DValues> = face
            .normal_generators
            .iter()
            .map(|g| {
                let d_p = np.support(g).0;
                let d_q = nq.support(g).0;
                DValues { generator: g.clone(), d_p, d_q, d_f: d_p - d_q }
            })
            .collect();
        let by_generators = d_values.iter().all(|d| d.d_f == 0);
        let diffs: Vec<Vec<i64>> = np
            .face_points(decomposition.gamma_p)
            .iter()
            .flat_map(|a| nq.face_points(decomposition.gamma_q).into_iter().map(move |b| a.sub(b).into_vec()))
            .collect();
        let by_affine_hull = zero_in_affine_hull(&diffs);
        if by_generators != by_affine_hull {
            return Err(Error::Internal(format!(
                "type I criteria disagree on face {}: generators say {by_generators}, affine hull says {by_affine_hull}",
                nf.face_label(idx)
            )));
        }
        let interior = face.normal_generators.iter().all(|g| g.iter().all(|&x| x >= 0));
        let label = if interior {
            FaceType::Interior
        } else if by_generators {
            FaceType::TypeI
        } else {
            FaceType::TypeII
        };
        faces.push(ClassifiedFace { decomposition, label, d_values, dim: face.dim, is_whole });
    }
    Ok(FaceAnalysis { np, nq, nf, faces })
}

/// `f_γ = P_{γ(P)} / Q_{γ(Q)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceFunction {
    pub label: String,
    pub kind: FaceType,
    pub num: LaurentPoly,
    pub den: LaurentPoly,
    pub u: Vec<i64>,
    pub d_p: i64,
    pub d_q: i64,
    /// Vertices of `γ`, used for intrinsic coordinates.
    pub face_points: Vec<Vec<i64>>,
}

pub fn face_function(f: &RationalFunction, analysis: &FaceAnalysis, face: &ClassifiedFace) -> Result<FaceFunction> {
    if face.label == FaceType::Interior {
        return Err(Error::InvalidInput("face functions are defined for faces outside the orthant".into()));
    }
    let u = face.decomposition.u.clone();
    let d_p = analysis.np.support(&u).0;
    let d_q = analysis.nq.support(&u).0;
    Ok(FaceFunction {
        label: analysis.label(face),
        kind: face.label,
        num: f.p().truncate(|e| e.dot(&u) == d_p),
        den: f.q().truncate(|e| e.dot(&u) == d_q),
        u,
        d_p,
        d_q,
        face_points: analysis
            .nf
            .face_points(face.decomposition.gamma)
            .iter()
            .map(|v| v.as_slice().to_vec())
            .collect(),
    })
}

/// `f_γ` in coordinates `w = (s, t)` with `z^α = w^{Wα}`: the face lies in
/// `s`-directions, so `f_γ = w^{(0, t_P - t_Q)} num(s) / den(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedFaceFunction {
    pub k: usize,
    pub transform: AdaptedBasis,
    /// Lattice basis of the face directions, as vectors in `Z^n`.
    pub basis: Vec<Vec<i64>>,
    pub num: LaurentPoly,
    pub den: LaurentPoly,
    /// Monomial factor `z^β` left over, zero for type I faces.
    pub prefactor: ExponentVector,
    pub t_num: Vec<i64>,
    pub t_den: Vec<i64>,
}

impl ReducedFaceFunction {
    /// Substitutes back into the original coordinates, giving
    /// `(P_{γ(P)}, Q_{γ(Q)})` exactly.
    pub fn expand(&self) -> (LaurentPoly, LaurentPoly) {
        let n = self.transform.n;
        let back = |p: &LaurentPoly, t: &[i64]| {
            p.map_exponents(n, |e| {
                let w: Vec<i64> = e.as_slice().iter().chain(t).copied().collect();
                self.transform.unapply(&w)
            })
        };
        (back(&self.num, &self.t_num), back(&self.den, &self.t_den))
    }

    /// The point of `(C*)^n` with `w = (s, 1, ..., 1)`.
    pub fn torus_point(&self, s: &[Complex64]) -> Vec<Complex64> {
        let n = self.transform.n;
        (0..n)
            .map(|j| {
                let mut z = Complex64::new(1.0, 0.0);
                for (i, si) in s.iter().enumerate() {
                    let e = self.transform.w[i][j];
                    if e != 0 {
                        z *= si.powi(e as i32);
                    }
                }
                z
            })
            .collect()
    }

    /// `num / den` is constant.
    pub fn proportional(&self) -> Option<BigRational> {
        let (_, ln) = self.num.leading_term()?;
        let (_, ld) = self.den.leading_term()?;
        if self.num.scale(ld) == self.den.scale(ln) {
            Some(ln / ld)
        } else {
            None
        }
    }
}

/// Reduction with the basis adapted to the face's own direction lattice.
pub fn reduce_face_function(ff: &FaceFunction) -> Result<ReducedFaceFunction> {
    let p0 = &ff.face_points[0];
    let diffs: Vec<Vec<i64>> =
        ff.face_points.iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let n = p0.len();
    reduce_with(ff, AdaptedBasis::new(&diffs, n))
}

/// Reduction with a caller-chosen adapted basis.
pub fn reduce_with(ff: &FaceFunction, transform: AdaptedBasis) -> Result<ReducedFaceFunction> {
    let k = transform.r;
    let n = transform.n;
    let split = |p: &LaurentPoly, what: &str| -> Result<(LaurentPoly, Vec<i64>)> {
        let mut t: Option<Vec<i64>> = None;
        let mut terms = Vec::new();
        for (e, c) in p.terms() {
            let w = transform.apply(e.as_slice());
            let tt = w[k..].to_vec();
            match &t {
                None => t = Some(tt),
                Some(t0) if *t0 != tt => {
                    return Err(Error::Internal(format!("{what} of face {} is not quasi-homogeneous", ff.label)))
                }
                _ => {}
            }
            terms.push((w[..k].to_vec(), c.clone()));
        }
        Ok((LaurentPoly::from_terms(k, terms), t.unwrap_or_else(|| vec![0; n - k])))
    };
    let (num, t_num) = split(&ff.num, "numerator")?;
    let (den, t_den) = split(&ff.den, "denominator")?;
    let mut w = vec![0i64; n];
    for i in k..n {
        w[i] = t_num[i - k] - t_den[i - k];
    }
    let prefactor = ExponentVector::new(transform.unapply(&w));
    if ff.kind == FaceType::TypeI && !prefactor.is_zero() {
        return Err(Error::Internal(format!(
            "type I face {} leaves the monomial factor {prefactor}",
            ff.label
        )));
    }
    Ok(ReducedFaceFunction { k, basis: transform.span_basis(), transform, num, den, prefactor, t_num, t_den })
}

/// Exact data of a one-variable reduced function `r = s^m p / q` with
/// `gcd(p, q) = 1` and `p(0) q(0) != 0`.
struct OneVar {
    m: i64,
    p: UniPoly,
    q: UniPoly,
    /// Original denominator (before cancellation), without powers of `s`.
    q_full: UniPoly,
}

impl OneVar {
    fn new(r: &ReducedFaceFunction) -> Self {
        let (a, p) = UniPoly::from_laurent_normalized(&r.num, 0).expect("one variable");
        let (b, q) = UniPoly::from_laurent_normalized(&r.den, 0).expect("one variable");
        let g = p.gcd(&q);
        let p1 = p.div_exact(&g).expect("gcd divides");
        let q1 = q.div_exact(&g).expect("gcd divides");
        OneVar { m: a - b, p: p1, q: q1, q_full: q }
    }

    /// Numerator of `r'` up to the factor `s^(m-1) / q^2`.
    fn derivative_numerator(&self) -> UniPoly {
        let m = BigRational::from_integer(self.m.into());
        let a = self.p.mul(&self.q).scale(&m);
        let b = self.p.derivative().mul(&self.q).sub(&self.p.mul(&self.q.derivative()));
        a.add(&b.shift(1))
    }

    fn value_exact(&self, s: &BigRational) -> BigRational {
        let sm = if self.m >= 0 {
            num_traits::pow::Pow::pow(s, self.m as u32)
        } else {
            num_traits::pow::Pow::pow(&s.recip(), (-self.m) as u32)
        };
        sm * self.p.eval(s) / self.q.eval(s)
    }

    fn value(&self, s: Complex64) -> Complex64 {
        s.powi(self.m as i32) * self.p.eval_complex(s) / self.q.eval_complex(s)
    }
}

/// Removes every factor shared with `q` and every root at zero.
fn clean(mut a: UniPoly, q: &UniPoly) -> UniPoly {
    loop {
        let g = a.gcd(q);
        if g.deg() == 0 {
            break;
        }
        a = a.div_exact(&g).expect("gcd divides");
    }
    a.strip_zero_roots().1
}

/// `f_γ(Sing f_γ)` on the torus away from the poles of `f_γ`.
pub fn face_critical_values(
    ff: &FaceFunction,
    r: &ReducedFaceFunction,
    settings: &Settings,
) -> Result<CriticalValueSet> {
    let mut out = CriticalValueSet::new(format!("face:{}", ff.label));
    let type_i = ff.kind == FaceType::TypeI;
    if let Some(c) = r.proportional() {
        if type_i {
            // Constant on the torus: every point is critical.
            out.insert(CriticalValue::exact(c), settings.dedupe_tol);
        }
        // A nonconstant monomial times a constant has no critical points.
        return Ok(out);
    }
    match r.k {
        0 => unreachable!("zero-dimensional faces have monomial truncations"),
        1 => {
            let one = OneVar::new(r);
            let nd = one.derivative_numerator();
            if type_i {
                let crit = clean(nd.clone(), &one.q_full);
                for root in crit.roots() {
                    let v = match &root.exact {
                        Some(s) => CriticalValue::exact(one.value_exact(s)),
                        None => CriticalValue::numeric(one.value(root.value), Certification::NumericCertified),
                    };
                    check_critical_point(ff, r, &[root.value], Some(v.value), settings)?;
                    out.insert(v, settings.dedupe_tol);
                }
                out.notes.push(format!("critical points are the roots of {} in s", nd));
            } else {
                let crit = clean(one.p.gcd(&nd), &one.q_full);
                for root in crit.roots() {
                    check_critical_point(ff, r, &[root.value], Some(Complex64::new(0.0, 0.0)), settings)?;
                    out.insert(CriticalValue::exact(BigRational::zero()), settings.dedupe_tol);
                }
            }
        }
        k => {
            out.complete = false;
            out.notes.push(format!("{k}-dimensional face: critical values found by numeric search only"));
            let mut eqs: Vec<LaurentPoly> = Vec::new();
            if !type_i {
                eqs.push(r.num.clone());
            }
            for j in 0..k {
                eqs.push(&(&r.den * &r.num.partial_derivative(j)) - &(&r.num * &r.den.partial_derivative(j)));
            }
            let opts = MultistartOptions {
                starts: settings.starts,
                seed: settings.seed,
                torus_margin: Some(1e-6),
                ..Default::default()
            };
            let den = FloatPoly::new(&r.den);
            let num = FloatPoly::new(&r.num);
            for s in solve_multistart(&eqs, &opts) {
                if den.relative(&s) < settings.vanish_tol {
                    continue;
                }
                let v = if type_i { num.eval(&s) / den.eval(&s) } else { Complex64::new(0.0, 0.0) };
                out.insert(CriticalValue::numeric(v, Certification::NumericHeuristic), settings.dedupe_tol);
            }
        }
    }
    Ok(out)
}

/// Confirms in the original coordinates that the reduced critical point is a
/// critical point of `f_γ` with the expected value.
fn check_critical_point(
    ff: &FaceFunction,
    r: &ReducedFaceFunction,
    s: &[Complex64],
    value: Option<Complex64>,
    settings: &Settings,
) -> Result<()> {
    let z = r.torus_point(s);
    if z.iter().any(|c| !c.is_finite() || c.norm() == 0.0) {
        return Ok(());
    }
    let n = ff.num.nvars();
    let tol = settings.vanish_tol.sqrt().max(1e-6);
    for j in 0..n {
        let e = &(&ff.den * &ff.num.partial_derivative(j)) - &(&ff.num * &ff.den.partial_derivative(j));
        let res = FloatPoly::new(&e).relative(&z);
        if res > tol {
            return Err(Error::Internal(format!(
                "reduced critical point of face {} is not critical in the original coordinates (residual {res:e})",
                ff.label
            )));
        }
    }
    if let Some(v) = value {
        let num = FloatPoly::new(&ff.num).eval(&z);
        let den = FloatPoly::new(&ff.den).eval(&z);
        let got = num / den;
        if (got - v).norm() > tol * (1.0 + v.norm()) {
            return Err(Error::Internal(format!(
                "critical value {got} of face {} disagrees with the reduced value {v}",
                ff.label
            )));
        }
    }
    Ok(())
}

/// `CF_f`: the constants of the face functions at zero-dimensional type I faces.
pub fn cf_values(f: &RationalFunction, analysis: &FaceAnalysis, settings: &Settings) -> Result<CriticalValueSet> {
    let mut out = CriticalValueSet::new("cf");
    for face in analysis.faces_of_type(FaceType::TypeI).filter(|g| g.dim == 0) {
        let ff = face_function(f, analysis, face)?;
        let r = reduce_face_function(&ff)?;
        let c = r
            .proportional()
            .ok_or_else(|| Error::Internal(format!("vertex face {} is not constant", ff.label)))?;
        out.insert(CriticalValue::exact(c), settings.dedupe_tol);
    }
    Ok(out)
}

/// `Σ_j u_j z_j ∂_j g = d · g`, the quasi-homogeneity of a face truncation.
pub fn euler_identity_holds(g: &LaurentPoly, u: &[i64], d: i64) -> bool {
    let n = g.nvars();
    let mut lhs = LaurentPoly::zero(n);
    for (j, &uj) in u.iter().enumerate() {
        if uj == 0 {
            continue;
        }
        let zj = LaurentPoly::var(n, j);
        let term = &zj * &g.partial_derivative(j);
        lhs = &lhs + &term.scale(&BigRational::from_integer(uj.into()));
    }
    lhs == g.scale(&BigRational::from_integer(d.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::poly::default_var_names;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, &default_var_names(2)).unwrap()
    }

    fn labels(a: &FaceAnalysis, t: FaceType) -> Vec<String> {
        a.faces_of_type(t).map(|f| a.label(f)).collect()
    }

    fn figures() -> RationalFunction {
        rf("(1 + x^2*y^3 + x^5*y^3)/(1 + x^2*y^3 + x^4*y)")
    }

    #[test]
    fn figures_type_i_faces() {
        let a = classify_faces(&figures()).unwrap();
        let mut t1 = labels(&a, FaceType::TypeI);
        t1.sort();
        assert_eq!(t1, vec!["(0,0)", "(0,0)-(4,1)", "(0,0)-(4,6)", "(4,6)", "(4,6)-(7,6)"]);
        let mut t2 = labels(&a, FaceType::TypeII);
        t2.sort();
        assert_eq!(t2, vec!["(4,1)", "(4,1)-(9,4)", "(7,6)", "(7,6)-(9,4)", "(9,4)"]);
        assert!(labels(&a, FaceType::Interior).is_empty());
    }

    #[test]
    fn rational_example_classification() {
        let a = classify_faces(&rf("(x^2+y)/(x+y)")).unwrap();
        assert_eq!(labels(&a, FaceType::TypeI), vec!["(0,2)", "(0,2)-(2,1)"]);
        assert_eq!(labels(&a, FaceType::TypeII), vec!["(2,1)", "(3,0)", "(2,1)-(3,0)"]);
        assert_eq!(labels(&a, FaceType::Interior), vec!["(1,1)", "(0,2)-(1,1)", "(1,1)-(3,0)"]);
        let v = a.find("(0,2)").unwrap();
        assert_eq!(v.decomposition.u, vec![0, -1]);
    }

    #[test]
    fn segment_example_includes_whole_polytope() {
        let a = classify_faces(&rf("(x+y)/(x+2*y)")).unwrap();
        assert_eq!(labels(&a, FaceType::TypeI), vec!["(0,2)", "(2,0)", "(0,2)-(2,0)"]);
        assert!(a.find("(0,2)-(2,0)").unwrap().is_whole);
    }

    #[test]
    fn polynomial_without_type_i_faces() {
        let a = classify_faces(&rf("x + x^2*y")).unwrap();
        assert!(labels(&a, FaceType::TypeI).is_empty());
    }

    #[test]
    fn face_functions_and_values() {
        let f = rf("(x^2+y)/(x+y)");
        let a = classify_faces(&f).unwrap();
        let s = Settings::default();
        let ff = face_function(&f, &a, a.find("(0,2)").unwrap()).unwrap();
        assert_eq!((ff.num.to_string(), ff.den.to_string()), ("y".into(), "y".into()));
        let r = reduce_face_function(&ff).unwrap();
        assert_eq!(r.k, 0);
        let cv = face_critical_values(&ff, &r, &s).unwrap();
        assert_eq!(cv.values.len(), 1);
        assert_eq!(cv.values[0].exact, Some(BigRational::one()));

        let ff = face_function(&f, &a, a.find("(0,2)-(2,1)").unwrap()).unwrap();
        assert_eq!((ff.num.to_string(), ff.den.to_string()), ("x^2 + y".into(), "y".into()));
        let r = reduce_face_function(&ff).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.den.len(), 1);
        assert_eq!(r.num.len(), 2);
        assert!(face_critical_values(&ff, &r, &s).unwrap().is_empty());

        let ff = face_function(&f, &a, a.find("(3,0)").unwrap()).unwrap();
        assert_eq!((ff.num.to_string(), ff.den.to_string()), ("x^2".into(), "x".into()));
        let r = reduce_face_function(&ff).unwrap();
        assert_eq!(r.prefactor.as_slice(), &[1, 0]);
        assert!(face_critical_values(&ff, &r, &s).unwrap().is_empty());
    }

    #[test]
    fn cf_of_examples() {
        let s = Settings::default();
        let f = rf("(x+y)/(x+2*y)");
        let a = classify_faces(&f).unwrap();
        let cf = cf_values(&f, &a, &s).unwrap();
        let v: Vec<_> = cf.values.iter().map(|c| c.exact.clone().unwrap()).collect();
        assert_eq!(v, vec![crate::poly::ratio(1, 2), crate::poly::ratio(1, 1)]);
        let f = rf("x + x^2*y");
        assert!(cf_values(&f, &classify_faces(&f).unwrap(), &s).unwrap().is_empty());
    }

    #[test]
    fn type_i_edge_with_critical_value() {
        // Edge along (1,1) with normal (1,-1): r(s) = (1+s)^2/(1+3s), s = xy,
        // r' = 0 at s = -1 (value 0) and s = 1/3 (value 8/9).
        let f = rf("(1 + 2*x*y + x^2*y^2 + x)/(1 + 3*x*y + x)");
        let a = classify_faces(&f).unwrap();
        let s = Settings::default();
        let face = a.find("(0,0)-(3,3)").expect("edge present");
        assert_eq!(face.label, FaceType::TypeI);
        let ff = face_function(&f, &a, face).unwrap();
        let r = reduce_face_function(&ff).unwrap();
        let cv = face_critical_values(&ff, &r, &s).unwrap();
        let v: Vec<_> = cv.values.iter().map(|c| c.exact.clone().unwrap()).collect();
        assert_eq!(v, vec![BigRational::zero(), crate::poly::ratio(8, 9)]);
        assert!(cv.complete);
    }

    #[test]
    fn reduction_reexpands_and_is_basis_invariant() {
        for text in ["(x^2+y)/(x+y)", "(1 + x^2*y^3 + x^5*y^3)/(1 + x^2*y^3 + x^4*y)", "(x+y)/(x+2*y)", "(1 + 3*x^2 - x^4 + y)/(2 + x + y^2)"] {
            let f = rf(text);
            let a = classify_faces(&f).unwrap();
            let s = Settings::default();
            for face in a.faces.iter().filter(|g| g.label != FaceType::Interior) {
                let ff = face_function(&f, &a, face).unwrap();
                let r = reduce_face_function(&ff).unwrap();
                assert_eq!(r.expand(), (ff.num.clone(), ff.den.clone()), "{text} {}", ff.label);
                assert!(euler_identity_holds(&ff.num, &ff.u, ff.d_p));
                assert!(euler_identity_holds(&ff.den, &ff.u, ff.d_q));
                if r.k == 1 {
                    let mut t = r.transform.clone();
                    for j in 0..t.n {
                        t.w[0][j] = -t.w[0][j];
                        t.w_inv[j][0] = -t.w_inv[j][0];
                    }
                    let r2 = reduce_with(&ff, t).unwrap();
                    assert_eq!(r2.expand(), (ff.num.clone(), ff.den.clone()));
                    let a1 = face_critical_values(&ff, &r, &s).unwrap();
                    let a2 = face_critical_values(&ff, &r2, &s).unwrap();
                    assert_eq!(a1.values.len(), a2.values.len());
                    for v in &a1.values {
                        assert!(a2.contains(v.value, 1e-9));
                    }
                }
            }
        }
    }
}
