//! Finite sets of complex values with certification status and provenance.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::poly::rat_to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// The value is a rational number computed exactly.
    ExactRational,
    /// A root of an exact univariate polynomial, refined numerically; the set
    /// of such values is complete.
    NumericCertified,
    /// Found by a numeric search with no completeness guarantee.
    NumericHeuristic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValue {
    pub value: Complex64,
    pub exact: Option<BigRational>,
    pub certification: Certification,
    /// Number of merged critical points or roots mapping to this value.
    pub multiplicity: usize,
}

impl CriticalValue {
    pub fn exact(r: BigRational) -> Self {
        CriticalValue {
            value: Complex64::new(rat_to_f64(&r), 0.0),
            exact: Some(r),
            certification: Certification::ExactRational,
            multiplicity: 1,
        }
    }

    pub fn numeric(value: Complex64, certification: Certification) -> Self {
        CriticalValue { value, exact: None, certification, multiplicity: 1 }
    }
}

/// Tuning knobs shared by the numeric parts of the pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    /// A quantity counts as vanishing below this relative residual.
    pub vanish_tol: f64,
    /// A quantity counts as nonvanishing above this relative size.
    pub margin_tol: f64,
    /// Complex values closer than this are merged.
    pub dedupe_tol: f64,
    pub seed: u64,
    /// Random starts for numeric searches.
    pub starts: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { vanish_tol: 1e-8, margin_tol: 1e-4, dedupe_tol: 1e-9, seed: 0, starts: 64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValueSet {
    /// `global`, `face:<label>` or `cf`.
    pub provenance: String,
    pub values: Vec<CriticalValue>,
    /// Whether the set is provably exhaustive.
    pub complete: bool,
    pub notes: Vec<String>,
}

impl CriticalValueSet {
    pub fn new(provenance: impl Into<String>) -> Self {
        CriticalValueSet { provenance: provenance.into(), values: Vec::new(), complete: true, notes: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds a value, merging with an existing one within `tol`. An exact
    /// value replaces a numeric one it coincides with.
    pub fn insert(&mut self, v: CriticalValue, tol: f64) {
        if let Some(e) = self.values.iter_mut().find(|e| same_value(e, &v, tol)) {
            e.multiplicity += v.multiplicity;
            if v.certification < e.certification {
                e.certification = v.certification;
                e.exact = v.exact;
                e.value = v.value;
            }
            return;
        }
        self.values.push(v);
        self.sort();
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.values.iter().any(|e| (e.value - z).norm() <= tol)
    }

    pub fn sort(&mut self) {
        self.values.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    }
}

fn same_value(a: &CriticalValue, b: &CriticalValue, tol: f64) -> bool {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x == y,
        _ => (a.value - b.value).norm() <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    #[test]
    fn exact_value_wins_over_numeric() {
        let mut s = CriticalValueSet::new("global");
        s.insert(CriticalValue::numeric(Complex64::new(0.5 + 1e-12, 0.0), Certification::NumericHeuristic), 1e-9);
        s.insert(CriticalValue::exact(ratio(1, 2)), 1e-9);
        assert_eq!(s.values.len(), 1);
        assert_eq!(s.values[0].exact, Some(ratio(1, 2)));
        assert_eq!(s.values[0].multiplicity, 2);
    }

    #[test]
    fn values_are_sorted() {
        let mut s = CriticalValueSet::new("cf");
        s.insert(CriticalValue::exact(ratio(1, 1)), 1e-9);
        s.insert(CriticalValue::exact(ratio(1, 2)), 1e-9);
        assert_eq!(s.values[0].exact, Some(ratio(1, 2)));
    }
}
