//! Lattice polytopes with their full face lattice and normal cones.
//!
//! Hulls are computed in coordinates adapted to the affine hull, so lower
//! dimensional point sets (segments in the plane, a single point) need no
//! special casing. Facets come from a double-description pass over the cone
//! of valid inequalities `{(a, b) : <a, y> >= b for all points y}`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{dot, primitive, rank, AdaptedBasis};
use crate::poly::{ExponentVector, LaurentPoly};

/// A face of a lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRecord {
    /// Indices into the polytope's vertex list, ascending.
    pub vertex_indices: Vec<usize>,
    pub dim: usize,
    /// Primitive integer generators of the closed normal cone
    /// `{u : the face minimizing <u,.> contains this face}`.
    pub normal_generators: Vec<Vec<i64>>,
    /// A primitive vector whose minimizing face is exactly this face. Absent
    /// only for a full-dimensional polytope viewed as a face of itself.
    pub witness_u: Option<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    n: usize,
    vertices: Vec<ExponentVector>,
    faces: Vec<FaceRecord>,
    dim: usize,
    by_vertices: BTreeMap<Vec<usize>, usize>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.vertices == other.vertices
    }
}

fn lex(a: &ExponentVector, b: &ExponentVector) -> std::cmp::Ordering {
    a.as_slice().cmp(b.as_slice())
}

impl LatticePolytope {
    /// Convex hull of a nonempty set of integer points.
    pub fn from_points(n: usize, points: &[Vec<i64>]) -> Self {
        assert!(!points.is_empty(), "hull of the empty set");
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        assert!(pts.iter().all(|p| p.len() == n), "point dimension mismatch");
        let p0 = pts[0].clone();
        let diffs: Vec<Vec<i64>> = pts.iter().map(|p| sub(p, &p0)).collect();
        let basis = AdaptedBasis::new(&diffs, n);
        let r = basis.r;
        let reduced: Vec<Vec<i64>> = diffs.iter().map(|d| basis.apply(d)[..r].to_vec()).collect();

        let (vertex_pts, facets) = if r == 0 {
            (vec![0usize], Vec::new())
        } else {
            hull_reduced(&reduced, r)
        };

        // Sort vertices lexicographically and remap.
        let mut order: Vec<usize> = vertex_pts.clone();
        order.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
        let vertices: Vec<ExponentVector> = order.iter().map(|&i| ExponentVector::new(pts[i].clone())).collect();
        let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();

        // Facets as (embedded primitive normal, vertex set).
        let facets: Vec<(Vec<i64>, Vec<usize>)> = facets
            .into_iter()
            .map(|(a, on)| {
                let normal = primitive(&basis.covector(&a, &vec![0; n - r]));
                let mut vs: Vec<usize> = on.iter().filter_map(|i| pos.get(i).copied()).collect();
                vs.sort();
                (normal, vs)
            })
            .collect();

        let all: Vec<usize> = (0..vertices.len()).collect();
        let mut sets: BTreeSet<Vec<usize>> = facets.iter().map(|(_, vs)| vs.clone()).collect();
        sets.insert(all.clone());
        loop {
            let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
            let mut added = false;
            for i in 0..current.len() {
                for j in i + 1..current.len() {
                    let inter: Vec<usize> =
                        current[i].iter().filter(|x| current[j].binary_search(x).is_ok()).copied().collect();
                    if !inter.is_empty() && sets.insert(inter) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }

        let orth: Vec<Vec<i64>> = basis.orthogonal_basis().iter().map(|v| primitive(v)).collect();
        let mut faces: Vec<FaceRecord> = sets
            .into_iter()
            .map(|vs| {
                let dim = affine_dim(vs.iter().map(|&i| vertices[i].as_slice()));
                let containing: Vec<&Vec<i64>> = facets
                    .iter()
                    .filter(|(_, fv)| vs.iter().all(|v| fv.binary_search(v).is_ok()))
                    .map(|(nrm, _)| nrm)
                    .collect();
                let mut gens: BTreeSet<Vec<i64>> = containing.iter().map(|v| (*v).clone()).collect();
                for o in &orth {
                    gens.insert(o.clone());
                    gens.insert(o.iter().map(|x| -x).collect());
                }
                let witness_u = if vs.len() == vertices.len() && containing.is_empty() {
                    orth.first().cloned()
                } else {
                    let mut w = vec![0i64; n];
                    for v in &containing {
                        for k in 0..n {
                            w[k] += v[k];
                        }
                    }
                    Some(primitive(&w))
                };
                FaceRecord { vertex_indices: vs, dim, normal_generators: gens.into_iter().collect(), witness_u }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertex_indices).cmp(&(b.dim, &b.vertex_indices)));
        let by_vertices = faces.iter().enumerate().map(|(k, f)| (f.vertex_indices.clone(), k)).collect();
        LatticePolytope { n, vertices, faces, dim: r, by_vertices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn faces(&self) -> &[FaceRecord] {
        &self.faces
    }

    pub fn face(&self, idx: usize) -> &FaceRecord {
        &self.faces[idx]
    }

    /// Index of the polytope itself in the face list.
    pub fn whole(&self) -> usize {
        self.faces.len() - 1
    }

    /// Face with exactly the given vertex indices.
    pub fn face_with_vertices(&self, vs: &[usize]) -> Option<usize> {
        self.by_vertices.get(vs).copied()
    }

    /// Vertex coordinates of a face.
    pub fn face_points(&self, idx: usize) -> Vec<&ExponentVector> {
        self.faces[idx].vertex_indices.iter().map(|&i| &self.vertices[i]).collect()
    }

    /// `(a,b)` for a vertex, `(a,b)-(c,d)-...` otherwise.
    pub fn face_label(&self, idx: usize) -> String {
        self.face_points(idx).iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
    }

    pub fn index_of_vertex(&self, v: &[i64]) -> Option<usize> {
        self.vertices.binary_search_by(|w| w.as_slice().cmp(v)).ok()
    }

    /// `d^u = min <u, w>` and the index of the face where it is attained.
    pub fn support(&self, u: &[i64]) -> (i64, usize) {
        assert_eq!(u.len(), self.n);
        let vals: Vec<i64> = self.vertices.iter().map(|v| dot(u, v.as_slice())).collect();
        let d = *vals.iter().min().expect("nonempty");
        let on: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == d).collect();
        let idx = self.face_with_vertices(&on).expect("minimizing set of a linear functional is a face");
        (d, idx)
    }

    /// [`support`](Self::support) for a rational direction.
    pub fn support_rational(&self, u: &[BigRational]) -> Result<(BigRational, usize)> {
        if u.len() != self.n || u.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidInput("support direction must be a nonzero vector of length n".into()));
        }
        let vals: Vec<BigRational> = self
            .vertices
            .iter()
            .map(|v| v.as_slice().iter().zip(u).map(|(&k, x)| x * BigRational::from_integer(k.into())).sum())
            .collect();
        let d = vals.iter().min().expect("nonempty").clone();
        let on: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == d).collect();
        let idx = self.face_with_vertices(&on).expect("minimizing set of a linear functional is a face");
        Ok((d, idx))
    }

    /// Newton polytope of a nonzero Laurent polynomial.
    pub fn newton(g: &LaurentPoly) -> Self {
        assert!(!g.is_zero(), "Newton polytope of the zero polynomial");
        let pts: Vec<Vec<i64>> = g.support().into_iter().map(|e| e.into_vec()).collect();
        Self::from_points(g.nvars(), &pts)
    }

    /// Minkowski sum, as the hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut pts = BTreeSet::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.insert(a.add(b).into_vec());
            }
        }
        Self::from_points(self.n, &pts.into_iter().collect::<Vec<_>>())
    }

    /// True if the vertex sorting is lexicographic and every face has a
    /// witness whose minimizing face is the face itself.
    pub fn check_witnesses(&self) -> bool {
        self.faces.iter().enumerate().all(|(k, f)| match &f.witness_u {
            Some(u) => self.support(u).1 == k,
            None => self.dim == self.n && k == self.whole(),
        }) && self.vertices.windows(2).all(|w| lex(&w[0], &w[1]).is_lt())
    }
}

pub fn newton_polytope(g: &LaurentPoly) -> LatticePolytope {
    LatticePolytope::newton(g)
}

pub fn minkowski_sum(a: &LatticePolytope, b: &LatticePolytope) -> LatticePolytope {
    a.minkowski_sum(b)
}

/// A face of `N(f)` together with the faces of `N(P)` and `N(Q)` summing to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDecomposition {
    pub gamma: usize,
    pub gamma_p: usize,
    pub gamma_q: usize,
    /// Supporting vector used for the decomposition.
    pub u: Vec<i64>,
}

/// Splits a face of `nf = np + nq` into its summands.
///
/// The split is computed with the face's witness and recomputed with a second
/// vector from the relative interior of its normal cone; the two must agree.
pub fn decompose_face(
    nf: &LatticePolytope,
    gamma: usize,
    np: &LatticePolytope,
    nq: &LatticePolytope,
) -> Result<FaceDecomposition> {
    let face = nf.face(gamma);
    let Some(u) = face.witness_u.clone() else {
        return Err(Error::InvalidInput("a full-dimensional polytope has no supporting vector".into()));
    };
    let (df, idx) = nf.support(&u);
    if idx != gamma {
        return Err(Error::Internal(format!("witness of face {} does not support it", nf.face_label(gamma))));
    }
    let (dp, gp) = np.support(&u);
    let (dq, gq) = nq.support(&u);
    if dp + dq != df {
        return Err(Error::Internal("support numbers are not additive".into()));
    }
    let sums: BTreeSet<Vec<i64>> = np
        .face_points(gp)
        .iter()
        .flat_map(|a| nq.face_points(gq).into_iter().map(move |b| a.add(b).into_vec()))
        .collect();
    if !nf.face_points(gamma).iter().all(|v| sums.contains(v.as_slice())) {
        return Err(Error::Internal(format!("face {} is not the sum of its parts", nf.face_label(gamma))));
    }

    // Second direction: a differently weighted interior combination.
    let mut u2 = vec![0i64; nf.n()];
    for (k, g) in face.normal_generators.iter().enumerate() {
        for i in 0..nf.n() {
            u2[i] += (k as i64 + 2) * g[i];
        }
    }
    for i in 0..nf.n() {
        u2[i] += 3 * u[i];
    }
    let u2 = primitive(&u2);
    if u2.iter().any(|&x| x != 0) && nf.support(&u2).1 == gamma {
        let gp2 = np.support(&u2).1;
        let gq2 = nq.support(&u2).1;
        if gp2 != gp || gq2 != gq {
            return Err(Error::Internal(format!(
                "decomposition of face {} depends on the supporting vector",
                nf.face_label(gamma)
            )));
        }
    } else {
        return Err(Error::Internal(format!(
            "interior combination of normal generators does not support face {}",
            nf.face_label(gamma)
        )));
    }
    Ok(FaceDecomposition { gamma, gamma_p: gp, gamma_q: gq, u })
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn affine_dim<'a>(pts: impl Iterator<Item = &'a [i64]>) -> usize {
    let pts: Vec<&[i64]> = pts.collect();
    if pts.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<i64>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    rank(&diffs)
}

type Bits = Vec<u64>;

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bits_count(a: &Bits) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn prim128(v: Vec<i128>) -> Vec<i128> {
    use num_integer::Integer;
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

fn dot128(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bareiss determinant.
fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Facets of the hull of full-dimensional points in `Z^r`.
///
/// Returns the indices of the extreme points and, per facet, the inward
/// normal `a` with the indices of the points on it.
fn hull_reduced(pts: &[Vec<i64>], r: usize) -> (Vec<usize>, Vec<(Vec<i64>, Vec<usize>)>) {
    let d = r + 1;
    let m = pts.len();
    let rows: Vec<Vec<i128>> =
        pts.iter().map(|p| p.iter().map(|&x| x as i128).chain(std::iter::once(-1)).collect()).collect();

    // Far points first, so that interior points are discarded cheaply.
    let mut centroid = vec![0i128; r];
    for p in pts {
        for k in 0..r {
            centroid[k] += p[k] as i128;
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    let spread = |i: usize| -> i128 {
        (0..r).map(|k| (pts[i][k] as i128 * m as i128 - centroid[k]).pow(2)).sum()
    };
    order.sort_by(|&a, &b| spread(b).cmp(&spread(a)).then(a.cmp(&b)));

    // Initial simplex of d independent rows.
    let mut init: Vec<usize> = Vec::new();
    for &i in &order {
        let mut cand: Vec<Vec<i64>> = init.iter().map(|&j| rows[j].iter().map(|&x| x as i64).collect()).collect();
        cand.push(rows[i].iter().map(|&x| x as i64).collect());
        if rank(&cand) == cand.len() {
            init.push(i);
            if init.len() == d {
                break;
            }
        }
    }
    assert_eq!(init.len(), d, "points do not span the reduced space");
    let a0: Vec<Vec<i128>> = init.iter().map(|&i| rows[i].clone()).collect();
    let det0 = det(&a0);
    let words = m.div_ceil(64);

    let mut rays: Vec<(Vec<i128>, Bits)> = Vec::new();
    for j in 0..d {
        // Column j of the adjugate, signed so that A0 * ray = |det| e_j.
        let ray: Vec<i128> = (0..d)
            .map(|i| {
                let minor: Vec<Vec<i128>> = (0..d)
                    .filter(|&rr| rr != j)
                    .map(|rr| (0..d).filter(|&c| c != i).map(|c| a0[rr][c]).collect())
                    .collect();
                let cof = if (i + j) % 2 == 0 { det(&minor) } else { -det(&minor) };
                cof * det0.signum()
            })
            .collect();
        let ray = prim128(ray);
        let mut z = vec![0u64; words];
        for (k, &row) in init.iter().enumerate() {
            if k != j {
                bit_set(&mut z, row);
            }
        }
        rays.push((ray, z));
    }

    let in_init: BTreeSet<usize> = init.iter().copied().collect();
    for &i in order.iter().filter(|i| !in_init.contains(i)) {
        let vals: Vec<i128> = rays.iter().map(|(ray, _)| dot128(&rows[i], ray)).collect();
        if vals.iter().all(|&v| v >= 0) {
            for (k, (_, z)) in rays.iter_mut().enumerate() {
                if vals[k] == 0 {
                    bit_set(z, i);
                }
            }
            continue;
        }
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        let mut next: Vec<(Vec<i128>, Bits)> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = bits_and(&rays[p].1, &rays[q].1);
                if bits_count(&common) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|k| k == p || k == q || !bits_subset(&common, &rays[k].1));
                if !adjacent {
                    continue;
                }
                let ray: Vec<i128> =
                    rays[q].0.iter().zip(&rays[p].0).map(|(a, b)| vals[p] * a - vals[q] * b).collect();
                let mut z = common;
                bit_set(&mut z, i);
                next.push((prim128(ray), z));
            }
        }
        for (k, (ray, z)) in rays.into_iter().enumerate() {
            if vals[k] > 0 {
                next.push((ray, z));
            } else if vals[k] == 0 {
                let mut z = z;
                bit_set(&mut z, i);
                next.push((ray, z));
            }
        }
        rays = next;
    }

    let mut facets: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
    for (ray, _) in &rays {
        if ray[..r].iter().all(|&x| x == 0) {
            continue;
        }
        // Recompute incidences over all points, interior ones included.
        let on: Vec<usize> = (0..m).filter(|&i| dot128(&rows[i], ray) == 0).collect();
        let a: Vec<i64> = ray[..r].iter().map(|&x| i64::try_from(x).expect("facet normal overflows")).collect();
        facets.push((a, on));
    }
    let vertices: Vec<usize> = (0..m)
        .filter(|&i| {
            let normals: Vec<Vec<i64>> =
                facets.iter().filter(|(_, on)| on.contains(&i)).map(|(a, _)| a.clone()).collect();
            rank(&normals) == r
        })
        .collect();
    (vertices, facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;
    use proptest::prelude::*;

    fn poly(s: &str) -> LaurentPoly {
        parse_polynomial(s, &default_var_names(2)).unwrap()
    }

    fn verts(p: &LatticePolytope) -> Vec<Vec<i64>> {
        p.vertices().iter().map(|v| v.as_slice().to_vec()).collect()
    }

    #[test]
    fn triangle_from_support() {
        let p = LatticePolytope::from_points(2, &[vec![0, 0], vec![2, 3], vec![5, 3]]);
        assert_eq!(verts(&p), vec![vec![0, 0], vec![2, 3], vec![5, 3]]);
        assert_eq!(p.dim(), 2);
        // 3 vertices, 3 edges, the triangle.
        assert_eq!(p.faces().len(), 7);
        assert!(p.check_witnesses());
        assert_eq!(p.support(&[-1, 0]), (-5, p.face_with_vertices(&[2]).unwrap()));
    }

    #[test]
    fn point_and_segment() {
        let p = newton_polytope(&poly("x^2*y"));
        assert_eq!(verts(&p), vec![vec![2, 1]]);
        assert_eq!(p.dim(), 0);
        assert_eq!(p.faces().len(), 1);
        let s = newton_polytope(&poly("x^2+y"));
        assert_eq!(verts(&s), vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.faces().len(), 3);
        assert!(s.check_witnesses());
        let t = newton_polytope(&poly("x+2*y"));
        let (d, idx) = t.support(&[-1, -1]);
        assert_eq!((d, idx), (-1, t.whole()));
    }

    #[test]
    fn interior_points_are_dropped() {
        let p = LatticePolytope::from_points(2, &[vec![0, 0], vec![4, 0], vec![0, 4], vec![1, 1], vec![2, 2], vec![2, 0]]);
        assert_eq!(verts(&p), vec![vec![0, 0], vec![0, 4], vec![4, 0]]);
        let f = p.face_with_vertices(&[0, 2]).unwrap();
        assert_eq!(p.face(f).dim, 1);
    }

    #[test]
    fn pentagon_from_two_triangles() {
        let a = LatticePolytope::from_points(2, &[vec![0, 0], vec![2, 3], vec![5, 3]]);
        let b = LatticePolytope::from_points(2, &[vec![0, 0], vec![2, 3], vec![4, 1]]);
        let s = a.minkowski_sum(&b);
        assert_eq!(verts(&s), vec![vec![0, 0], vec![4, 1], vec![4, 6], vec![7, 6], vec![9, 4]]);
        assert_eq!(s.faces().len(), 11);
        assert!(s.check_witnesses());
    }

    #[test]
    fn quadrilateral_of_rational_example() {
        let s = newton_polytope(&poly("x^2+y")).minkowski_sum(&newton_polytope(&poly("x+y")));
        assert_eq!(verts(&s), vec![vec![0, 2], vec![1, 1], vec![2, 1], vec![3, 0]]);
        let v = s.face_with_vertices(&[s.index_of_vertex(&[0, 2]).unwrap()]).unwrap();
        assert_eq!(s.face(v).normal_generators, vec![vec![-1, -2], vec![1, 1]]);
    }

    #[test]
    fn rational_support() {
        let s = newton_polytope(&poly("x+2*y"));
        let u = [BigRational::new((-1).into(), 2.into()), BigRational::new((-1).into(), 2.into())];
        let (d, idx) = s.support_rational(&u).unwrap();
        assert_eq!(d, BigRational::new((-1).into(), 2.into()));
        assert_eq!(idx, s.whole());
        assert!(s.support_rational(&[BigRational::zero(), BigRational::zero()]).is_err());
    }

    #[test]
    fn decomposition_of_rational_example() {
        let np = newton_polytope(&poly("x^2+y"));
        let nq = newton_polytope(&poly("x+y"));
        let nf = np.minkowski_sum(&nq);
        let v = nf.face_with_vertices(&[nf.index_of_vertex(&[0, 2]).unwrap()]).unwrap();
        let d = decompose_face(&nf, v, &np, &nq).unwrap();
        assert_eq!(np.face_label(d.gamma_p), "(0,1)");
        assert_eq!(nq.face_label(d.gamma_q), "(0,1)");
        let e = nf
            .face_with_vertices(&[nf.index_of_vertex(&[0, 2]).unwrap(), nf.index_of_vertex(&[2, 1]).unwrap()])
            .unwrap();
        let d = decompose_face(&nf, e, &np, &nq).unwrap();
        assert_eq!(np.face_label(d.gamma_p), "(0,1)-(2,0)");
        assert_eq!(nq.face_label(d.gamma_q), "(0,1)");
    }

    fn in_hull_brute(p: &[i64], pts: &[Vec<i64>]) -> bool {
        // Exhaustive barycentric search over simplices (n <= 3) with exact
        // rationals: p is in the hull iff it lies in some simplex of the points.
        let n = p.len();
        let k = n + 1;
        let m = pts.len();
        let mut idx = vec![0usize; k];
        fn rec(start: usize, depth: usize, idx: &mut Vec<usize>, m: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
            if depth == idx.len() {
                return f(idx);
            }
            for i in start..m {
                idx[depth] = i;
                if rec(i + 1, depth + 1, idx, m, f) {
                    return true;
                }
            }
            false
        }
        let mut test = |ix: &[usize]| -> bool {
            // Solve p = sum l_j x_j, sum l_j = 1 via Cramer on any full-rank subsystem.
            let cols: Vec<Vec<i128>> =
                ix.iter().map(|&j| pts[j].iter().map(|&x| x as i128).chain(std::iter::once(1)).collect()).collect();
            let rhs: Vec<i128> = p.iter().map(|&x| x as i128).chain(std::iter::once(1)).collect();
            let a: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| cols[j][i]).collect()).collect();
            let d0 = det(&a);
            if d0 == 0 {
                return false;
            }
            (0..k).all(|j| {
                let mut aj = a.clone();
                for i in 0..k {
                    aj[i][j] = rhs[i];
                }
                let dj = det(&aj);
                dj == 0 || (dj > 0) == (d0 > 0)
            })
        };
        rec(0, 0, &mut idx, m, &mut test)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hull_matches_brute_force(pts in prop::collection::vec(prop::collection::vec(0i64..=10, 3), 4..=12)) {
            let n = 3;
            let hull = LatticePolytope::from_points(n, &pts);
            prop_assert!(hull.check_witnesses());
            let uniq: Vec<Vec<i64>> = pts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            if rank(&uniq.iter().map(|p| sub(p, &uniq[0])).collect::<Vec<_>>()) == 3 {
                for p in &uniq {
                    let others: Vec<Vec<i64>> = uniq.iter().filter(|q| *q != p).cloned().collect();
                    let extreme = !in_hull_brute(p, &others);
                    prop_assert_eq!(extreme, hull.index_of_vertex(p).is_some(), "point {:?}", p);
                }
            }
        }

        #[test]
        fn hull_matches_brute_force_plane(pts in prop::collection::vec(prop::collection::vec(0i64..=10, 2), 3..=12)) {
            let hull = LatticePolytope::from_points(2, &pts);
            prop_assert!(hull.check_witnesses());
            let uniq: Vec<Vec<i64>> = pts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            if hull.dim() == 2 {
                for p in &uniq {
                    let others: Vec<Vec<i64>> = uniq.iter().filter(|q| *q != p).cloned().collect();
                    prop_assert_eq!(!in_hull_brute(p, &others), hull.index_of_vertex(p).is_some());
                }
                // A polygon has as many edges as vertices.
                let v = hull.faces().iter().filter(|f| f.dim == 0).count();
                let e = hull.faces().iter().filter(|f| f.dim == 1).count();
                prop_assert_eq!(v, e);
            }
        }

        #[test]
        fn normal_generators_support_their_face(pts in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..=10)) {
            let hull = LatticePolytope::from_points(3, &pts);
            for (k, f) in hull.faces().iter().enumerate() {
                for g in &f.normal_generators {
                    let (_, idx) = hull.support(g);
                    let sup = &hull.face(idx).vertex_indices;
                    prop_assert!(f.vertex_indices.iter().all(|v| sup.contains(v)));
                }
                if let Some(u) = &f.witness_u {
                    prop_assert_eq!(hull.support(u).1, k);
                }
            }
        }
    }
}
