//! Numeric sampling of the Milnor set `M_f = {z : grad f(z) = λ z}` on large
//! spheres, where `grad f` is the conjugated gradient `(conj ∂_1 f, ..., conj ∂_n f)`.
//!
//! The condition says the holomorphic gradient is a complex multiple of
//! `conj(z)`. With `A_j = Q ∂_j P - P ∂_j Q` this is
//! `A_j conj(z_k) - A_k conj(z_j) = 0` for `j < k`, which together with
//! `|z|^2 = R^2` is solved in real coordinates by damped Gauss–Newton.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::FloatPoly;
use crate::rational::RationalFunction;

/// Samples are accepted below this relative residual.
pub const ACCEPT_RESIDUAL: f64 = 1e-8;
/// Single-linkage distance for f-values at one radius.
pub const CLUSTER_TOL: f64 = 1e-3;
/// A cluster at the largest radius is a limit if the previous radius has one this close.
pub const CONVERGENCE_TOL: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MilnorSample {
    pub z: Vec<[f64; 2]>,
    pub lambda: [f64; 2],
    pub radius: f64,
    pub f_value: [f64; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusGroup {
    pub radius: f64,
    pub samples: Vec<MilnorSample>,
    /// Cluster representatives of the f-values at this radius.
    pub clusters: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub seed: u64,
    pub groups: Vec<RadiusGroup>,
    pub cluster_limits: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

struct MilnorSystem {
    n: usize,
    a: Vec<FloatPoly>,
    /// `∂_m A_j` as `da[j][m]`.
    da: Vec<Vec<FloatPoly>>,
}

impl MilnorSystem {
    fn new(f: &RationalFunction) -> Self {
        let n = f.nvars();
        let a: Vec<_> = (0..n).map(|j| f.derivative_numerator(j)).collect();
        MilnorSystem {
            n,
            a: a.iter().map(FloatPoly::new).collect(),
            da: a.iter().map(|g| (0..n).map(|m| FloatPoly::new(&g.partial_derivative(m))).collect()).collect(),
        }
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|j| (j + 1..self.n).map(move |k| (j, k))).collect()
    }

    /// Complex parallelism equations, each divided by its natural size.
    fn equations(&self, z: &[Complex64]) -> Vec<Complex64> {
        let av: Vec<Complex64> = self.a.iter().map(|g| g.eval(z)).collect();
        self.pairs().iter().map(|&(j, k)| av[j] * z[k].conj() - av[k] * z[j].conj()).collect()
    }

    fn scale(&self, z: &[Complex64]) -> f64 {
        let s: f64 = self.a.iter().map(|g| g.scale(z)).fold(0.0, f64::max);
        let r: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        (s * r).max(f64::MIN_POSITIVE)
    }

    /// Residual vector in real form: parallelism equations scaled by `w`,
    /// then the sphere equation.
    fn real_residual(&self, z: &[Complex64], radius: f64, w: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for e in self.equations(z) {
            out.push(e.re / w);
            out.push(e.im / w);
        }
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        out.push((r2 - radius * radius) / (radius * radius));
        out
    }

    fn real_jacobian(&self, z: &[Complex64], radius: f64, w: f64) -> DMatrix<f64> {
        let n = self.n;
        let pairs = self.pairs();
        let mut jac = DMatrix::zeros(2 * pairs.len() + 1, 2 * n);
        let av: Vec<Complex64> = self.a.iter().map(|g| g.eval(z)).collect();
        for (row, &(j, k)) in pairs.iter().enumerate() {
            for m in 0..n {
                // E = A_j conj(z_k) - A_k conj(z_j).
                let dz = self.da[j][m].eval(z) * z[k].conj() - self.da[k][m].eval(z) * z[j].conj();
                let mut dzbar = Complex64::new(0.0, 0.0);
                if m == k {
                    dzbar += av[j];
                }
                if m == j {
                    dzbar -= av[k];
                }
                let dx = (dz + dzbar) / w;
                let dy = Complex64::i() * (dz - dzbar) / w;
                jac[(2 * row, 2 * m)] = dx.re;
                jac[(2 * row + 1, 2 * m)] = dx.im;
                jac[(2 * row, 2 * m + 1)] = dy.re;
                jac[(2 * row + 1, 2 * m + 1)] = dy.im;
            }
        }
        let last = 2 * pairs.len();
        for m in 0..n {
            jac[(last, 2 * m)] = 2.0 * z[m].re / (radius * radius);
            jac[(last, 2 * m + 1)] = 2.0 * z[m].im / (radius * radius);
        }
        jac
    }

    /// Largest relative residual, independent of the solver's weights.
    fn residual(&self, z: &[Complex64], radius: f64) -> f64 {
        let w = self.scale(z);
        let par = self.equations(z).iter().map(|e| e.norm() / w).fold(0.0, f64::max);
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        par.max(((r2.sqrt() - radius) / radius).abs())
    }

    fn solve(&self, z0: Vec<Complex64>, radius: f64, max_iter: usize) -> Vec<Complex64> {
        let n = self.n;
        let mut z = z0;
        let w = self.scale(&z);
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut fz = self.real_residual(&z, radius, w);
        for _ in 0..max_iter {
            if norm(&fz) < 1e-14 {
                break;
            }
            let jac = self.real_jacobian(&z, radius, w);
            let b = DVector::from_iterator(fz.len(), fz.iter().map(|x| -x));
            let Ok(step) = jac.svd(true, true).solve(&b, 1e-13) else { break };
            let base = norm(&fz);
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..16 {
                let cand: Vec<Complex64> =
                    (0..n).map(|m| z[m] + Complex64::new(step[2 * m], step[2 * m + 1]) * t).collect();
                let fc = self.real_residual(&cand, radius, w);
                if norm(&fc).is_finite() && norm(&fc) < base {
                    z = cand;
                    fz = fc;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        z
    }
}

/// Conjugate-convention multiplier: `λ = <grad f, z> / |z|^2` with
/// `grad f = conj(∂f)`.
fn lambda(f: &RationalFunction, z: &[Complex64]) -> Option<Complex64> {
    let q = FloatPoly::new(f.q()).eval(z);
    let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, zj) in z.iter().enumerate() {
        let dj = FloatPoly::new(&f.derivative_numerator(j)).eval(z) / (q * q);
        acc += dj.conj() * zj.conj();
    }
    let l = acc / r2;
    l.is_finite().then_some(l)
}

fn random_on_sphere(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c * (radius / norm)).collect()
}

/// Single-linkage clusters of complex values; representatives are means,
/// sorted by `(re, im)`.
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut sorted: Vec<Complex64> = values.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut parent: Vec<usize> = (0..sorted.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if (sorted[i] - sorted[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (i, v) in sorted.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(*v);
    }
    let mut reps: Vec<Complex64> = groups
        .values()
        .map(|g| g.iter().sum::<Complex64>() / g.len() as f64)
        .collect();
    reps.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    reps
}

/// Samples `M_f` on spheres of the given radii and reports the f-values that
/// persist from the second largest radius to the largest.
pub fn probe_milnor_set(f: &RationalFunction, radii: &[f64], starts: usize, seed: u64) -> Result<ProbeResult> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("radii must be positive and strictly increasing".into()));
    }
    if starts == 0 {
        return Err(Error::InvalidInput("at least one start per radius is needed".into()));
    }
    let sys = MilnorSystem::new(f);
    let fq = FloatPoly::new(f.q());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups = Vec::new();
    for &radius in radii {
        let mut samples = Vec::new();
        for _ in 0..starts {
            let z0 = random_on_sphere(&mut rng, sys.n, radius);
            let z = sys.solve(z0, radius, 60);
            if z.iter().any(|c| !c.is_finite()) || fq.relative(&z) < 1e-10 {
                continue;
            }
            let residual = sys.residual(&z, radius);
            if residual >= ACCEPT_RESIDUAL {
                continue;
            }
            let (Some(fv), Some(l)) = (f.evaluate(&z), lambda(f, &z)) else { continue };
            if !fv.is_finite() {
                continue;
            }
            samples.push(MilnorSample {
                z: z.iter().map(|c| pair(*c)).collect(),
                lambda: pair(l),
                radius,
                f_value: pair(fv),
                residual,
            });
        }
        samples.sort_by(|a, b| {
            a.f_value[0].total_cmp(&b.f_value[0]).then(a.f_value[1].total_cmp(&b.f_value[1]))
        });
        let values: Vec<Complex64> = samples.iter().map(|s| c(s.f_value)).collect();
        let clusters = cluster(&values, CLUSTER_TOL).into_iter().map(pair).collect();
        groups.push(RadiusGroup { radius, samples, clusters });
    }
    let mut warnings = Vec::new();
    if groups.iter().all(|g| g.samples.is_empty()) {
        warnings.push("no convergent samples at any radius".into());
    }
    let last = groups.last().expect("nonempty radii");
    let cluster_limits = match groups.len() {
        1 => last.clusters.clone(),
        k => {
            let prev = &groups[k - 2];
            last.clusters
                .iter()
                .filter(|v| prev.clusters.iter().any(|p| (c(**v) - c(*p)).norm() <= CONVERGENCE_TOL))
                .copied()
                .collect()
        }
    };
    Ok(ProbeResult { seed, groups, cluster_limits, warnings })
}

/// Re-checks every accepted sample from scratch: the conjugated gradient is
/// `λ z` and `|z|` is the group radius.
pub fn verify_samples(f: &RationalFunction, result: &ProbeResult) -> bool {
    let fq = FloatPoly::new(f.q());
    result.groups.iter().all(|g| {
        g.samples.iter().all(|s| {
            let z: Vec<Complex64> = s.z.iter().map(|p| c(*p)).collect();
            let q = fq.eval(&z);
            let grad: Vec<Complex64> = (0..z.len())
                .map(|j| (FloatPoly::new(&f.derivative_numerator(j)).eval(&z) / (q * q)).conj())
                .collect();
            let gnorm = grad.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let l = c(s.lambda);
            let r = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let off = grad.iter().zip(&z).map(|(gj, zj)| (gj - l * zj).norm()).fold(0.0, f64::max);
            (r - g.radius).abs() <= 1e-10 * g.radius.max(1.0) && off <= 1e-6 * gnorm.max(f64::MIN_POSITIVE)
        })
    })
}
