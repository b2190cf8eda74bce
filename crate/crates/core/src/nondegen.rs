//! Hypotheses of the main bounds: non-degeneracy of the face truncations,
//! normal crossing of `P = 0` and `Q = 0` where they meet, and the support
//! inequality `d_Q >= d_P` outside the positive orthant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::faces::{face_function, reduce_face_function, FaceAnalysis, FaceType, ReducedFaceFunction};
use crate::lattice::primitive;
use crate::numeric::{solve_multistart, FloatPoly, MultistartOptions};
use crate::poly::LaurentPoly;
use crate::polytope::LatticePolytope;
use crate::rational::RationalFunction;
use crate::critvals::common_zeros;
use crate::resultant::is_squarefree2;
use crate::upoly::UniPoly;
use crate::values::Settings;

/// A concrete point where a hypothesis fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub face: Option<String>,
    /// Coordinates as `[re, im]` pairs.
    pub point: Vec<[f64; 2]>,
    pub detail: String,
}

impl Witness {
    pub fn new(face: Option<String>, z: &[Complex64], detail: impl Into<String>) -> Self {
        Witness { face, point: z.iter().map(|c| [c.re, c.im]).collect(), detail: detail.into() }
    }

    pub fn z(&self) -> Vec<Complex64> {
        self.point.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted { witness: Witness },
    HeuristicPass { note: String },
    Unchecked { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StarVerdict {
    Holds,
    Fails { witness: Vec<i64> },
    NotRequested,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceVerdict {
    pub face: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NondegeneracyReport {
    pub aggregate: Verdict,
    pub faces: Vec<FaceVerdict>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub nondegenerate: NondegeneracyReport,
    pub normal_crossing: Verdict,
    pub condition_star: StarVerdict,
    /// `P` and `Q` have no repeated factors (two variables only).
    pub squarefree: Option<(bool, bool)>,
}

impl HypothesisReport {
    pub fn all_verified(&self) -> bool {
        self.nondegenerate.aggregate.is_verified() && self.normal_crossing.is_verified()
    }

    pub fn any_refuted(&self) -> bool {
        self.nondegenerate.aggregate.is_refuted() || self.normal_crossing.is_refuted()
    }
}

pub fn check_hypotheses(
    f: &RationalFunction,
    analysis: &FaceAnalysis,
    settings: &Settings,
) -> Result<HypothesisReport> {
    let nondegenerate = check_nondegenerate(f, analysis, settings)?;
    let (normal_crossing, squarefree) = check_normal_crossing(f.p(), f.q(), settings)?;
    let condition_star = check_condition_star(&analysis.np, &analysis.nq);
    Ok(HypothesisReport { nondegenerate, normal_crossing, condition_star, squarefree })
}

fn aggregate(faces: &[FaceVerdict], exact: bool) -> Verdict {
    if let Some(r) = faces.iter().find(|f| f.verdict.is_refuted()) {
        return r.verdict.clone();
    }
    if exact {
        Verdict::Verified
    } else {
        Verdict::HeuristicPass {
            note: "no violation found by numeric search on the face truncations".into(),
        }
    }
}

/// Non-degeneracy on every face outside the orthant.
///
/// Two variables: exact. Each face is an edge or a vertex; in intrinsic
/// coordinates `(s, t)` an edge gives `P_γ = t^a s^b p(s)`, `Q_γ = t^c s^d q(s)`,
/// so a singular zero of `P_γ` is a repeated root of `p`, and at a common zero
/// both gradients point along `∂_s`, which makes them dependent. Vertices are
/// monomials and never vanish on the torus. More variables: numeric search.
pub fn check_nondegenerate(
    f: &RationalFunction,
    analysis: &FaceAnalysis,
    settings: &Settings,
) -> Result<NondegeneracyReport> {
    if f.nvars() != 2 {
        return check_nondegenerate_numeric(f, analysis, settings);
    }
    let mut faces = Vec::new();
    for face in analysis.faces.iter().filter(|g| g.label != FaceType::Interior) {
        let ff = face_function(f, analysis, face)?;
        let r = reduce_face_function(&ff)?;
        let verdict = if r.k == 0 { Verdict::Verified } else { edge_verdict(&ff.label, face.label, &r) };
        faces.push(FaceVerdict { face: ff.label, verdict });
    }
    Ok(NondegeneracyReport { aggregate: aggregate(&faces, true), faces })
}

fn edge_verdict(label: &str, kind: FaceType, r: &ReducedFaceFunction) -> Verdict {
    let (_, p) = UniPoly::from_laurent_normalized(&r.num, 0).expect("one variable");
    let (_, q) = UniPoly::from_laurent_normalized(&r.den, 0).expect("one variable");
    let witness_at = |s: Complex64, detail: String| Verdict::Refuted {
        witness: Witness::new(Some(label.to_string()), &r.torus_point(&[s]), detail),
    };
    if kind == FaceType::TypeII {
        for (a, b, name) in [(&p, &q, "numerator"), (&q, &p, "denominator")] {
            let sing = a.gcd(&a.derivative());
            let mut rest = sing;
            loop {
                let g = rest.gcd(b);
                if g.deg() == 0 {
                    break;
                }
                rest = rest.div_exact(&g).expect("gcd divides");
            }
            if let Some(root) = rest.strip_zero_roots().1.roots().first() {
                return witness_at(
                    root.value,
                    format!("the {name} truncation and its gradient vanish where the other truncation does not"),
                );
            }
        }
    }
    if let Some(root) = p.gcd(&q).strip_zero_roots().1.roots().first() {
        return witness_at(root.value, "both truncations vanish with parallel gradients".into());
    }
    Verdict::Verified
}

/// Numeric non-degeneracy search in intrinsic coordinates, for any number of
/// variables. Never returns `Verified`.
pub fn check_nondegenerate_numeric(
    f: &RationalFunction,
    analysis: &FaceAnalysis,
    settings: &Settings,
) -> Result<NondegeneracyReport> {
    let mut faces = Vec::new();
    for face in analysis.faces.iter().filter(|g| g.label != FaceType::Interior) {
        let ff = face_function(f, analysis, face)?;
        let r = reduce_face_function(&ff)?;
        let mut verdict = Verdict::HeuristicPass { note: "no violation found".into() };
        if r.k > 0 {
            let opts = MultistartOptions {
                starts: settings.starts,
                seed: settings.seed,
                torus_margin: Some(1e-6),
                ..Default::default()
            };
            let grad = |g: &LaurentPoly| (0..r.k).map(|j| g.partial_derivative(j)).collect::<Vec<_>>();
            let gp = grad(&r.num);
            let gq = grad(&r.den);
            let mut systems: Vec<(Vec<LaurentPoly>, Option<FloatPoly>, &str)> = Vec::new();
            if face.label == FaceType::TypeII {
                let mut a = vec![r.num.clone()];
                a.extend(gp.iter().cloned());
                systems.push((a, Some(FloatPoly::new(&r.den)), "numerator truncation singular off the denominator"));
                let mut b = vec![r.den.clone()];
                b.extend(gq.iter().cloned());
                systems.push((b, Some(FloatPoly::new(&r.num)), "denominator truncation singular off the numerator"));
            }
            let mut c = vec![r.num.clone(), r.den.clone()];
            for i in 0..r.k {
                for j in i + 1..r.k {
                    c.push(&(&gp[i] * &gq[j]) - &(&gp[j] * &gq[i]));
                }
            }
            systems.push((c, None, "both truncations vanish with dependent gradients"));
            'outer: for (eqs, off, detail) in systems {
                for s in solve_multistart(&eqs, &opts) {
                    if let Some(o) = &off {
                        if o.relative(&s) < settings.margin_tol {
                            continue;
                        }
                    }
                    verdict = Verdict::Refuted {
                        witness: Witness::new(Some(ff.label.clone()), &r.torus_point(&s), detail),
                    };
                    break 'outer;
                }
            }
        }
        faces.push(FaceVerdict { face: ff.label, verdict });
    }
    Ok(NondegeneracyReport { aggregate: aggregate(&faces, false), faces })
}

fn nonvanishing(g: &FloatPoly, z: &[Complex64], margin: f64) -> bool {
    let v = g.eval(z).norm();
    v > 0.0 && v > margin * g.scale(z)
}

fn grad_nonzero(g: &LaurentPoly, z: &[Complex64], margin: f64) -> bool {
    (0..g.nvars()).any(|j| nonvanishing(&FloatPoly::new(&g.partial_derivative(j)), z, margin))
}

/// Points of `P = Q = 0` in `C^2`.
pub fn intersection_points(p: &LaurentPoly, q: &LaurentPoly, vanish_tol: f64) -> Result<Vec<Vec<Complex64>>> {
    Ok(common_zeros(p, q, vanish_tol)?.into_iter().map(|c| c.z).collect())
}

/// Smoothness and transversality of `P = 0` and `Q = 0` at their common
/// points. Away from those points nothing is required. Also reports whether
/// `P` and `Q` are squarefree.
pub fn check_normal_crossing(
    p: &LaurentPoly,
    q: &LaurentPoly,
    settings: &Settings,
) -> Result<(Verdict, Option<(bool, bool)>)> {
    if p.nvars() != 2 {
        return Ok((
            Verdict::Unchecked { reason: "normal crossing is only decided in two variables".into() },
            None,
        ));
    }
    let sq = Some((is_squarefree2(p), is_squarefree2(q)));
    let det = &(&p.partial_derivative(0) * &q.partial_derivative(1)) - &(&p.partial_derivative(1) * &q.partial_derivative(0));
    let fdet = FloatPoly::new(&det);
    for z in intersection_points(p, q, settings.vanish_tol)? {
        let m = settings.margin_tol;
        let detail = if !grad_nonzero(p, &z, m) {
            Some("P = 0 is singular at a point of P = Q = 0")
        } else if !grad_nonzero(q, &z, m) {
            Some("Q = 0 is singular at a point of P = Q = 0")
        } else if !nonvanishing(&fdet, &z, m) {
            Some("P = 0 and Q = 0 meet tangentially")
        } else {
            None
        };
        if let Some(d) = detail {
            return Ok((Verdict::Refuted { witness: Witness::new(None, &z, d) }, sq));
        }
    }
    Ok((Verdict::Verified, sq))
}

/// `d_Q^u >= d_P^u` for every `u` outside the closed positive orthant.
///
/// On the normal cone of a vertex `v = p0 + q0` of `N(P) + N(Q)` the
/// difference `d_Q - d_P` equals `<u, q0 - p0>`. The complement of the orthant
/// has closure `∪_i {u_i <= 0}`; each cone is cut by each half-space, and the
/// linear form is tested on generators of the cut cone. A violation on the
/// boundary of the orthant is pushed off it and confirmed directly.
pub fn check_condition_star(np: &LatticePolytope, nq: &LatticePolytope) -> StarVerdict {
    let nf = np.minkowski_sum(nq);
    let n = nf.n();
    for (idx, face) in nf.faces().iter().enumerate() {
        if face.dim != 0 {
            continue;
        }
        let gens = if face.normal_generators.is_empty() {
            // A point polytope: every direction supports it.
            (0..n)
                .flat_map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    [e.clone(), e.iter().map(|x| -x).collect()]
                })
                .collect()
        } else {
            face.normal_generators.clone()
        };
        let v = &nf.face_points(idx)[0];
        let u0 = face.witness_u.clone().unwrap_or_else(|| gens[0].clone());
        let p0 = np.face_points(np.support(&u0).1)[0].as_slice().to_vec();
        let q0 = nq.face_points(nq.support(&u0).1)[0].as_slice().to_vec();
        debug_assert_eq!(p0.iter().zip(&q0).map(|(a, b)| a + b).collect::<Vec<_>>(), v.as_slice());
        let diff: Vec<i64> = q0.iter().zip(&p0).map(|(a, b)| a - b).collect();
        for i in 0..n {
            for g in cut(&gens, i) {
                if g.iter().all(|&x| x == 0) {
                    continue;
                }
                if crate::lattice::dot(&g, &diff) >= 0 {
                    continue;
                }
                if let Some(w) = confirm_violation(np, nq, &g, i) {
                    return StarVerdict::Fails { witness: w };
                }
            }
        }
    }
    StarVerdict::Holds
}

/// Generators of `cone(gens) ∩ {u_i <= 0}`.
fn cut(gens: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = gens.iter().filter(|g| g[i] <= 0).cloned().collect();
    for a in gens.iter().filter(|g| g[i] > 0) {
        for b in gens.iter().filter(|g| g[i] < 0) {
            let c: Vec<i64> = a.iter().zip(b).map(|(x, y)| a[i] * y - b[i] * x).collect();
            out.push(primitive(&c));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn violates(np: &LatticePolytope, nq: &LatticePolytope, u: &[i64]) -> bool {
    u.iter().any(|&x| x < 0) && nq.support(u).0 < np.support(u).0
}

fn confirm_violation(np: &LatticePolytope, nq: &LatticePolytope, g: &[i64], i: usize) -> Option<Vec<i64>> {
    if violates(np, nq, g) {
        return Some(g.to_vec());
    }
    let mut k = 1i64;
    while k <= 1 << 20 {
        let mut u: Vec<i64> = g.iter().map(|x| x * k).collect();
        u[i] -= 1;
        let u = primitive(&u);
        if violates(np, nq, &u) {
            return Some(u);
        }
        k *= 2;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::classify_faces;
    use crate::poly::default_var_names;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, &default_var_names(2)).unwrap()
    }

    fn hyp(s: &str) -> HypothesisReport {
        let f = rf(s);
        let a = classify_faces(&f).unwrap();
        check_hypotheses(&f, &a, &Settings::default()).unwrap()
    }

    #[test]
    fn rational_example_hypotheses() {
        let h = hyp("(x^2+y)/(x+y)");
        assert!(h.nondegenerate.aggregate.is_verified());
        assert!(h.normal_crossing.is_verified());
        assert_eq!(h.condition_star, StarVerdict::Holds);
        let f = rf("(x^2+y)/(x+y)");
        let mut pts = intersection_points(f.p(), f.q(), 1e-8).unwrap();
        pts.sort_by(|a, b| a[0].re.total_cmp(&b[0].re));
        assert_eq!(pts.len(), 2);
        assert!(pts[0][0].norm() < 1e-12 && pts[0][1].norm() < 1e-12);
        assert!((pts[1][0] - 1.0).norm() < 1e-12 && (pts[1][1] + 1.0).norm() < 1e-12);
    }

    #[test]
    fn polynomial_example() {
        let h = hyp("x + x^2*y");
        assert!(h.nondegenerate.aggregate.is_verified());
        assert!(h.normal_crossing.is_verified());
        match h.condition_star {
            StarVerdict::Fails { witness } => {
                let f = rf("x + x^2*y");
                let np = LatticePolytope::newton(f.p());
                let nq = LatticePolytope::newton(f.q());
                assert!(violates(&np, &nq, &witness));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_holds_examples() {
        for s in ["1 + x + y + x^3*y^2", "(1+x+y)/(1+x)", "(x+y)/(x+2*y)"] {
            assert_eq!(hyp(s).condition_star, StarVerdict::Holds, "{s}");
        }
    }

    #[test]
    fn repeated_factor_on_an_outer_edge_is_refuted() {
        let h = hyp("1 + x^2 - 2*x*y + y^2");
        let Verdict::Refuted { witness } = &h.nondegenerate.aggregate else { panic!("{h:?}") };
        assert_eq!(witness.face.as_deref(), Some("(0,2)-(2,0)"));
        let f = rf("1 + x^2 - 2*x*y + y^2");
        let truncated = f.p().truncate(|e| e.total_degree() == 2);
        let z = witness.z();
        assert!(truncated.relative_residual(&z) < 1e-8);
        for j in 0..2 {
            assert!(truncated.partial_derivative(j).relative_residual(&z) < 1e-8);
        }
        // The numeric search agrees.
        let a = classify_faces(&f).unwrap();
        let num = check_nondegenerate_numeric(&f, &a, &Settings::default()).unwrap();
        assert!(num.aggregate.is_refuted());
    }

    #[test]
    fn normal_crossing_examples() {
        let s = Settings::default();
        let (v, _) = check_normal_crossing(&rf("x").p().clone(), &rf("y").p().clone(), &s).unwrap();
        assert!(v.is_verified());
        let p = rf("y - x^2").p().clone();
        let q = rf("y").p().clone();
        let (v, _) = check_normal_crossing(&p, &q, &s).unwrap();
        let Verdict::Refuted { witness } = v else { panic!() };
        assert!(witness.z().iter().all(|c| c.norm() < 1e-8));
    }

    #[test]
    fn three_variables_are_heuristic() {
        let f = RationalFunction::parse("(1 + x + y*z)/(1 + z)", &default_var_names(3)).unwrap();
        let a = classify_faces(&f).unwrap();
        let h = check_hypotheses(&f, &a, &Settings { starts: 8, ..Default::default() }).unwrap();
        assert!(matches!(h.nondegenerate.aggregate, Verdict::HeuristicPass { .. }));
        assert!(matches!(h.normal_crossing, Verdict::Unchecked { .. }));
    }
}
