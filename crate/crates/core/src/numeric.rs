//! Floating-point evaluation and a seeded multi-start Gauss–Newton solver for
//! square or overdetermined polynomial systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{balanced_sum, rat_to_f64, LaurentPoly};

/// A Laurent polynomial with coefficients rounded once to `f64`.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    nvars: usize,
    terms: Vec<(Vec<i32>, f64)>,
}

impl FloatPoly {
    pub fn new(p: &LaurentPoly) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| (e.as_slice().iter().map(|&k| k as i32).collect(), rat_to_f64(c)))
            .collect();
        FloatPoly { nvars: p.nvars(), terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn monomial(e: &[i32], z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (k, &zi) in e.iter().zip(z) {
            if *k != 0 {
                acc *= zi.powi(*k);
            }
        }
        acc
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let vals: Vec<Complex64> = self.terms.iter().map(|(e, c)| Self::monomial(e, z) * c).collect();
        balanced_sum(&vals)
    }

    /// `Σ |a_α||z^α|`.
    pub fn scale(&self, z: &[Complex64]) -> f64 {
        self.terms.iter().map(|(e, c)| Self::monomial(e, z).norm() * c.abs()).sum()
    }

    /// `|g(z)|` relative to [`scale`](Self::scale).
    pub fn relative(&self, z: &[Complex64]) -> f64 {
        let s = self.scale(z);
        if s == 0.0 {
            0.0
        } else {
            self.eval(z).norm() / s
        }
    }
}

/// A polynomial system with its Jacobian.
#[derive(Clone, Debug)]
pub struct System {
    pub nvars: usize,
    eqs: Vec<FloatPoly>,
    jac: Vec<Vec<FloatPoly>>,
}

impl System {
    pub fn new(eqs: &[LaurentPoly]) -> Self {
        let nvars = eqs.first().map(|e| e.nvars()).unwrap_or(0);
        System {
            nvars,
            eqs: eqs.iter().map(FloatPoly::new).collect(),
            jac: eqs
                .iter()
                .map(|e| (0..nvars).map(|j| FloatPoly::new(&e.partial_derivative(j))).collect())
                .collect(),
        }
    }

    pub fn residual(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.eqs.iter().map(|e| e.eval(z)).collect()
    }

    /// Largest relative residual over the equations.
    pub fn relative_residual(&self, z: &[Complex64]) -> f64 {
        self.eqs.iter().map(|e| e.relative(z)).fold(0.0, f64::max)
    }

    fn jacobian(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.eqs.len(), self.nvars, |i, j| self.jac[i][j].eval(z))
    }

    /// Damped Gauss–Newton from `z0`; returns the final point.
    pub fn polish(&self, z0: &[Complex64], max_iter: usize) -> Vec<Complex64> {
        let mut z = z0.to_vec();
        let norm = |f: &[Complex64]| f.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut fz = self.residual(&z);
        for _ in 0..max_iter {
            let j = self.jacobian(&z);
            let b = DVector::from_iterator(fz.len(), fz.iter().map(|c| -c));
            let svd = j.svd(true, true);
            let Ok(step) = svd.solve(&b, 1e-14) else { break };
            let mut t = 1.0;
            let base = norm(&fz);
            let mut accepted = false;
            for _ in 0..12 {
                let cand: Vec<Complex64> = z.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
                let fc = self.residual(&cand);
                if norm(&fc).is_finite() && norm(&fc) <= base {
                    z = cand;
                    fz = fc;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            let step_norm = step.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() * t;
            let z_norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if !accepted || step_norm <= 1e-15 * (1.0 + z_norm) {
                break;
            }
        }
        z
    }
}

#[derive(Clone, Debug)]
pub struct MultistartOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Accept a point when every relative residual is below this.
    pub tol: f64,
    /// Reject points with a coordinate of modulus below this (torus solutions).
    pub torus_margin: Option<f64>,
    /// Points closer than this are merged.
    pub dedupe: f64,
}

impl Default for MultistartOptions {
    fn default() -> Self {
        MultistartOptions { starts: 64, seed: 0, max_iter: 80, tol: 1e-10, torus_margin: None, dedupe: 1e-6 }
    }
}

/// Random start: modulus log-uniform in `[1/4, 4]`, uniform argument.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = (rng.gen_range(-1.0..1.0f64) * 4f64.ln()).exp();
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, a)
        })
        .collect()
}

/// Solutions found from seeded random starts, sorted lexicographically by
/// `(re, im)` of the coordinates.
pub fn solve_multistart(eqs: &[LaurentPoly], opts: &MultistartOptions) -> Vec<Vec<Complex64>> {
    if eqs.is_empty() {
        return Vec::new();
    }
    let sys = System::new(eqs);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..opts.starts {
        let z0 = random_point(&mut rng, sys.nvars);
        let z = sys.polish(&z0, opts.max_iter);
        if z.iter().any(|c| !c.is_finite()) || sys.relative_residual(&z) > opts.tol {
            continue;
        }
        if let Some(m) = opts.torus_margin {
            if z.iter().any(|c| c.norm() < m || c.norm() > 1.0 / m) {
                continue;
            }
        }
        let close = |a: &[Complex64], b: &[Complex64]| {
            a.iter().zip(b).all(|(x, y)| (x - y).norm() <= opts.dedupe * (1.0 + x.norm()))
        };
        if !found.iter().any(|f| close(f, &z)) {
            found.push(z);
        }
    }
    found.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
    found
}
