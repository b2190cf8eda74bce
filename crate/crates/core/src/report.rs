//! The full pipeline and its serializable result.
//!
//! The superset is `f(Sing f) ∪ {0} ∪ ⋃ f_γ(Sing f_γ)` over type I faces. When
//! the support inequality holds, the same set without the constant zero
//! contribution is reported as `sharpened_superset`. Values are labelled
//! certified only in two variables, with every hypothesis verified, outside
//! `{0} ∪ CF_f`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::critvals::global_critical_values;
use crate::error::{Error, Result};
use crate::faces::{cf_values, classify_faces, face_critical_values, face_function, reduce_face_function, FaceType};
use crate::nondegen::{check_hypotheses, HypothesisReport, StarVerdict, Verdict};
use crate::polytope::LatticePolytope;
use crate::probe::{probe_milnor_set, ProbeResult};
use crate::rational::{Coprimality, RationalFunction};
use crate::values::{Certification, CriticalValue, CriticalValueSet, Settings};

pub const SOURCE_ZERO: &str = "theorem_constant_zero";
pub const SOURCE_GLOBAL: &str = "global";
/// Distance within which a probe limit counts as explained by the superset.
pub const PROBE_CONTAINMENT_TOL: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOptions {
    pub radii: Vec<f64>,
    pub starts: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { radii: vec![10.0, 30.0, 100.0, 300.0], starts: 64, seed: 0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnalyzeOptions {
    pub settings: Settings,
    pub probe: Option<ProbeOptions>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValueLabel {
    CertifiedBifurcation,
    Candidate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueJson {
    pub value: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub certification: Certification,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueSetJson {
    pub provenance: String,
    pub complete: bool,
    pub values: Vec<ValueJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupersetEntry {
    pub value: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub certification: Certification,
    pub label: ValueLabel,
    pub sources: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    #[serde(rename = "P")]
    pub p: Vec<Vec<i64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    pub u: Vec<i64>,
    pub d_p: i64,
    pub d_q: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceJson {
    pub label: String,
    pub vertices: Vec<Vec<i64>>,
    pub dim: usize,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<FaceType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub faces: Vec<FaceJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytopes {
    #[serde(rename = "P")]
    pub p: PolytopeJson,
    #[serde(rename = "Q")]
    pub q: PolytopeJson,
    pub f: PolytopeJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceVerdictJson {
    pub face: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyJson {
    pub verdict: Verdict,
    pub faces: Vec<FaceVerdictJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquarefreeJson {
    #[serde(rename = "P")]
    pub p: bool,
    #[serde(rename = "Q")]
    pub q: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesesJson {
    pub coprimality: Coprimality,
    pub nondegenerate: NondegeneracyJson,
    pub normal_crossing: Verdict,
    /// `holds`, `fails` or `not_requested`.
    pub condition_star: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_star_witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squarefree: Option<SquarefreeJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalValuesJson {
    pub global: ValueSetJson,
    /// One set per type I face.
    pub faces: Vec<ValueSetJson>,
    pub cf: ValueSetJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputJson {
    pub f: String,
    pub numerator: String,
    pub denominator: String,
    pub vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationReport {
    pub input: InputJson,
    pub dimension: usize,
    pub polytopes: Polytopes,
    pub hypotheses: HypothesesJson,
    pub critical_values: CriticalValuesJson,
    pub superset: Vec<SupersetEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharpened_superset: Option<Vec<SupersetEntry>>,
    pub theorem_applied: Vec<String>,
    /// `verified` when every hypothesis is verified, otherwise `conditional`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeResult>,
}

fn pair(z: Complex64) -> [f64; 2] {
    // Normalize negative zero so equal values print identically.
    [z.re + 0.0, z.im + 0.0]
}

fn value_json(v: &CriticalValue) -> ValueJson {
    ValueJson {
        value: pair(v.value),
        exact: v.exact.as_ref().map(|r| r.to_string()),
        certification: v.certification,
        multiplicity: v.multiplicity,
    }
}

fn set_json(s: &CriticalValueSet) -> ValueSetJson {
    ValueSetJson {
        provenance: s.provenance.clone(),
        complete: s.complete,
        values: s.values.iter().map(value_json).collect(),
        notes: s.notes.clone(),
    }
}

fn coords(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn polytope_json(p: &LatticePolytope) -> PolytopeJson {
    PolytopeJson {
        dim: p.dim(),
        vertices: p.vertices().iter().map(|v| v.as_slice().to_vec()).collect(),
        faces: p
            .faces()
            .iter()
            .enumerate()
            .map(|(i, f)| FaceJson {
                label: p.face_label(i),
                vertices: p.face_points(i).iter().map(|v| v.as_slice().to_vec()).collect(),
                dim: f.dim,
                kind: None,
                decomposition: None,
            })
            .collect(),
    }
}

fn star_json(s: &StarVerdict) -> (String, Option<String>) {
    match s {
        StarVerdict::Holds => ("holds".into(), None),
        StarVerdict::Fails { witness } => ("fails".into(), Some(coords(witness))),
        StarVerdict::NotRequested => ("not_requested".into(), None),
    }
}

fn hypotheses_json(f: &RationalFunction, h: &HypothesisReport) -> HypothesesJson {
    let (condition_star, condition_star_witness) = star_json(&h.condition_star);
    HypothesesJson {
        coprimality: f.coprimality().clone(),
        nondegenerate: NondegeneracyJson {
            verdict: h.nondegenerate.aggregate.clone(),
            faces: h
                .nondegenerate
                .faces
                .iter()
                .map(|fv| FaceVerdictJson { face: fv.face.clone(), verdict: fv.verdict.clone() })
                .collect(),
        },
        normal_crossing: h.normal_crossing.clone(),
        condition_star,
        condition_star_witness,
        squarefree: h.squarefree.map(|(p, q)| SquarefreeJson { p, q }),
    }
}

struct Accumulator {
    value: CriticalValue,
    sources: Vec<String>,
    complete: bool,
}

fn accumulate(acc: &mut Vec<Accumulator>, v: &CriticalValue, source: &str, complete: bool, tol: f64) {
    let same = |a: &CriticalValue| match (&a.exact, &v.exact) {
        (Some(x), Some(y)) => x == y,
        _ => (a.value - v.value).norm() <= tol,
    };
    if let Some(e) = acc.iter_mut().find(|e| same(&e.value)) {
        if !e.sources.iter().any(|s| s == source) {
            e.sources.push(source.to_string());
            e.sources.sort();
        }
        // A value is as trustworthy as its best derivation.
        if v.certification < e.value.certification {
            e.value = v.clone();
        }
        e.complete |= complete;
        return;
    }
    acc.push(Accumulator { value: v.clone(), sources: vec![source.to_string()], complete });
}

/// Runs the whole pipeline on `f`.
pub fn bifurcation_superset(f: &RationalFunction, options: &AnalyzeOptions) -> Result<BifurcationReport> {
    let settings = &options.settings;
    let n = f.nvars();
    let analysis = classify_faces(f)?;
    let hyps = check_hypotheses(f, &analysis, settings)?;
    let mut notes = Vec::new();

    let mut face_sets = Vec::new();
    for face in analysis.faces.iter().filter(|g| g.label != FaceType::Interior) {
        let ff = face_function(f, &analysis, face)?;
        let r = reduce_face_function(&ff)?;
        let set = face_critical_values(&ff, &r, settings)?;
        if face.label == FaceType::TypeI {
            face_sets.push(set);
        } else if !set.is_empty() {
            // Type II faces of a non-degenerate function have no critical points.
            if hyps.nondegenerate.aggregate.is_verified() {
                return Err(Error::Internal(format!(
                    "type II face {} has critical values although every face is non-degenerate",
                    ff.label
                )));
            }
            notes.push(format!(
                "type II face {} has critical points; this is only possible because non-degeneracy is not verified",
                ff.label
            ));
        }
    }
    let global = global_critical_values(f, settings)?;
    let cf = cf_values(f, &analysis, settings)?;

    let tol = settings.dedupe_tol;
    let mut acc: Vec<Accumulator> = Vec::new();
    for v in &global.values {
        accumulate(&mut acc, v, SOURCE_GLOBAL, global.complete, tol);
    }
    accumulate(&mut acc, &CriticalValue::exact(num_rational::BigRational::from_integer(0.into())), SOURCE_ZERO, true, tol);
    for s in &face_sets {
        for v in &s.values {
            accumulate(&mut acc, v, &s.provenance, s.complete, tol);
        }
    }
    acc.sort_by(|a, b| {
        a.value.value.re.total_cmp(&b.value.value.re).then(a.value.value.im.total_cmp(&b.value.value.im))
    });

    let verified = n == 2 && hyps.all_verified() && *f.coprimality() == Coprimality::Verified;
    let is_zero = |v: &CriticalValue| match &v.exact {
        Some(r) => num_traits::Zero::is_zero(r),
        None => v.value.norm() <= tol,
    };
    let in_cf = |v: &CriticalValue| {
        cf.values.iter().any(|c| match (&c.exact, &v.exact) {
            (Some(x), Some(y)) => x == y,
            _ => (c.value - v.value).norm() <= tol,
        })
    };
    let entry = |a: &Accumulator| {
        let certified = verified
            && a.complete
            && a.value.certification != Certification::NumericHeuristic
            && !is_zero(&a.value)
            && !in_cf(&a.value);
        SupersetEntry {
            value: pair(a.value.value),
            exact: a.value.exact.as_ref().map(|r| r.to_string()),
            certification: a.value.certification,
            label: if certified { ValueLabel::CertifiedBifurcation } else { ValueLabel::Candidate },
            sources: a.sources.clone(),
        }
    };
    let superset: Vec<SupersetEntry> = acc.iter().map(entry).collect();
    let star_holds = hyps.condition_star == StarVerdict::Holds;
    let sharpened_superset = star_holds.then(|| {
        acc.iter()
            .filter(|a| a.sources.iter().any(|s| s != SOURCE_ZERO))
            .map(|a| {
                let mut e = entry(a);
                e.sources.retain(|s| s != SOURCE_ZERO);
                e
            })
            .collect()
    });

    let mut theorem_applied = vec!["Thm1.1".to_string()];
    if star_holds {
        theorem_applied.push("Thm3.3".into());
    }
    if verified {
        theorem_applied.push("Thm4.1-equality".into());
    } else {
        notes.push("hypotheses not all verified: every value is a candidate".into());
    }
    if verified {
        let excluded: Vec<String> = superset
            .iter()
            .filter(|e| e.label == ValueLabel::Candidate)
            .map(|e| e.exact.clone().unwrap_or_else(|| format!("{:?}", e.value)))
            .collect();
        if !excluded.is_empty() {
            notes.push(format!(
                "values in {{0}} and CF_f stay candidates; the equality region excludes them: {}",
                excluded.join(", ")
            ));
        }
    }

    let probe = match &options.probe {
        Some(po) => {
            let r = probe_milnor_set(f, &po.radii, po.starts, po.seed)?;
            for l in &r.cluster_limits {
                let z = Complex64::new(l[0], l[1]);
                if !acc.iter().any(|a| (a.value.value - z).norm() <= PROBE_CONTAINMENT_TOL) {
                    notes.push(format!("probe limit {} + {}i is not within {PROBE_CONTAINMENT_TOL} of the superset", l[0], l[1]));
                }
            }
            Some(r)
        }
        None => None,
    };

    let mut f_poly = polytope_json(&analysis.nf);
    f_poly.faces = analysis
        .faces
        .iter()
        .map(|c| {
            let d = &c.decomposition;
            let pts = |p: &LatticePolytope, i: usize| -> Vec<Vec<i64>> {
                p.face_points(i).iter().map(|v| v.as_slice().to_vec()).collect()
            };
            FaceJson {
                label: analysis.label(c),
                vertices: pts(&analysis.nf, d.gamma),
                dim: c.dim,
                kind: Some(c.label),
                decomposition: Some(DecompositionJson {
                    p: pts(&analysis.np, d.gamma_p),
                    q: pts(&analysis.nq, d.gamma_q),
                    u: d.u.clone(),
                    d_p: analysis.np.support(&d.u).0,
                    d_q: analysis.nq.support(&d.u).0,
                }),
            }
        })
        .collect();

    Ok(BifurcationReport {
        input: InputJson {
            f: f.display(),
            numerator: f.p().display_with(f.vars()).to_string(),
            denominator: f.q().display_with(f.vars()).to_string(),
            vars: f.vars().to_vec(),
        },
        dimension: n,
        polytopes: Polytopes { p: polytope_json(&analysis.np), q: polytope_json(&analysis.nq), f: f_poly },
        hypotheses: hypotheses_json(f, &hyps),
        critical_values: CriticalValuesJson {
            global: set_json(&global),
            faces: face_sets.iter().map(set_json).collect(),
            cf: set_json(&cf),
        },
        superset,
        sharpened_superset,
        theorem_applied,
        verdict: if verified { "verified".into() } else { "conditional".into() },
        notes,
        probe,
    })
}

impl BifurcationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Some hypothesis was shown to fail at a concrete point.
    pub fn hypothesis_refuted(&self) -> bool {
        self.hypotheses.nondegenerate.verdict.is_refuted() || self.hypotheses.normal_crossing.is_refuted()
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let fmt_entry = |e: &SupersetEntry| {
            let v = e.exact.clone().unwrap_or_else(|| format_complex(e.value));
            format!("{v}  [{}]  {}", label_str(e.label), e.sources.join(", "))
        };
        let _ = writeln!(out, "f = {}", self.input.f);
        let _ = writeln!(out, "verdict: {}", self.verdict);
        let h = &self.hypotheses;
        let _ = writeln!(out, "coprimality: {}", verdict_word_coprime(&h.coprimality));
        let _ = writeln!(out, "non-degenerate: {}", verdict_word(&h.nondegenerate.verdict));
        let _ = writeln!(out, "normal crossing: {}", verdict_word(&h.normal_crossing));
        let _ = write!(out, "condition (*): {}", h.condition_star);
        if let Some(w) = &h.condition_star_witness {
            let _ = write!(out, " at u = {w}");
        }
        out.push('\n');
        for t in [FaceType::TypeI, FaceType::TypeII, FaceType::Interior] {
            let labels: Vec<&str> = self
                .polytopes
                .f
                .faces
                .iter()
                .filter(|g| g.kind == Some(t))
                .map(|g| g.label.as_str())
                .collect();
            let _ = writeln!(out, "{} faces: {}", t.as_str(), if labels.is_empty() { "none".into() } else { labels.join(" ") });
        }
        let cv = |s: &ValueSetJson| {
            if s.values.is_empty() {
                "none".to_string()
            } else {
                s.values
                    .iter()
                    .map(|v| v.exact.clone().unwrap_or_else(|| format_complex(v.value)))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        };
        let _ = writeln!(out, "f(Sing f): {}", cv(&self.critical_values.global));
        let _ = writeln!(out, "CF_f: {}", cv(&self.critical_values.cf));
        let _ = writeln!(out, "superset ({}):", self.theorem_applied.join(", "));
        for e in &self.superset {
            let _ = writeln!(out, "  {}", fmt_entry(e));
        }
        if let Some(s) = &self.sharpened_superset {
            let _ = writeln!(out, "sharpened superset:");
            for e in s {
                let _ = writeln!(out, "  {}", fmt_entry(e));
            }
        }
        if let Some(p) = &self.probe {
            let limits: Vec<String> = p.cluster_limits.iter().map(|v| format_complex(*v)).collect();
            let _ = writeln!(out, "probe limits: {}", if limits.is_empty() { "none".into() } else { limits.join(", ") });
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn label_str(l: ValueLabel) -> &'static str {
    match l {
        ValueLabel::CertifiedBifurcation => "CERTIFIED_BIFURCATION",
        ValueLabel::Candidate => "CANDIDATE",
    }
}

fn verdict_word(v: &Verdict) -> String {
    match v {
        Verdict::Verified => "verified".into(),
        Verdict::Refuted { witness } => format!("refuted ({})", witness.detail),
        Verdict::HeuristicPass { .. } => "heuristic pass".into(),
        Verdict::Unchecked { reason } => format!("unchecked ({reason})"),
    }
}

fn verdict_word_coprime(c: &Coprimality) -> String {
    match c {
        Coprimality::Verified => "verified".into(),
        Coprimality::Refuted { witness } => format!("refuted ({witness})"),
        Coprimality::Assumed { reason } => format!("assumed ({reason})"),
    }
}

fn format_complex(v: [f64; 2]) -> String {
    if v[1].abs() <= 1e-12 * (1.0 + v[0].abs()) {
        format!("{:.10}", v[0])
    } else {
        format!("{:.10}{:+.10}i", v[0], v[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::default_var_names;

    fn run(s: &str) -> BifurcationReport {
        let f = RationalFunction::parse(s, &default_var_names(2)).unwrap();
        bifurcation_superset(&f, &AnalyzeOptions::default()).unwrap()
    }

    fn exact(entries: &[SupersetEntry]) -> Vec<String> {
        entries.iter().map(|e| e.exact.clone().unwrap()).collect()
    }

    #[test]
    fn rational_example_report() {
        let r = run("(x^2+y)/(x+y)");
        assert_eq!(exact(&r.superset), vec!["0", "1"]);
        assert_eq!(r.superset[0].sources, vec![SOURCE_ZERO]);
        assert_eq!(r.superset[1].sources, vec!["face:(0,2)"]);
        assert!(r.superset.iter().all(|e| e.label == ValueLabel::Candidate));
        assert_eq!(r.verdict, "verified");
        assert_eq!(exact(r.sharpened_superset.as_ref().unwrap()), vec!["1"]);
        assert_eq!(r.theorem_applied, vec!["Thm1.1", "Thm3.3", "Thm4.1-equality"]);
        let cf: Vec<_> = r.critical_values.cf.values.iter().map(|v| v.exact.clone().unwrap()).collect();
        assert_eq!(cf, vec!["1"]);
    }

    #[test]
    fn polynomial_example_report() {
        let r = run("x + x^2*y");
        assert_eq!(exact(&r.superset), vec!["0"]);
        assert_eq!(r.hypotheses.condition_star, "fails");
        assert!(r.sharpened_superset.is_none());
    }

    #[test]
    fn certified_value_outside_the_exclusions() {
        // Critical value 1 at the origin of 1 + x^2 + y^2; no type I face gives it.
        let r = run("1 + x^2 + y^2 + x^3*y^3");
        let one = r.superset.iter().find(|e| e.exact.as_deref() == Some("1")).expect("value 1");
        assert_eq!(one.sources, vec![SOURCE_GLOBAL]);
        assert_eq!(r.verdict, "verified");
        assert_eq!(one.label, ValueLabel::CertifiedBifurcation);
        let zero = r.superset.iter().find(|e| e.exact.as_deref() == Some("0")).expect("value 0");
        assert_eq!(zero.label, ValueLabel::Candidate);
        assert_eq!(r.superset.len(), 6);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let f = RationalFunction::parse("(x^2+y)/(x+y)", &default_var_names(2)).unwrap();
        let opts = AnalyzeOptions { probe: Some(ProbeOptions { radii: vec![10.0, 30.0], starts: 8, seed: 1 }), ..Default::default() };
        let r = bifurcation_superset(&f, &opts).unwrap();
        let a = r.to_json();
        let back = BifurcationReport::from_json(&a).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), a);
        assert!(a.contains("\"theorem_constant_zero\""));
    }

    #[test]
    fn refuted_hypothesis_is_conditional() {
        let r = run("1 + x^2 - 2*x*y + y^2");
        assert!(r.hypothesis_refuted());
        assert_eq!(r.verdict, "conditional");
        assert!(r.superset.iter().all(|e| e.label == ValueLabel::Candidate));
    }
}
