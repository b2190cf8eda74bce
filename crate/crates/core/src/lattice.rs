//! Small exact integer linear algebra: rank, kernels, and a unimodular change
//! of coordinates adapted to a sublattice.

use num_integer::Integer;

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    let s: i128 = a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum();
    i64::try_from(s).expect("inner product overflows i64")
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    column_echelon(rows, rows[0].len()).rank
}

/// Result of unimodular column reduction `M U = [H | 0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnEchelon {
    pub rank: usize,
    /// `U`, stored by rows: `u[i][j]`.
    pub u: Vec<Vec<i64>>,
    /// `U^{-1}`.
    pub u_inv: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn to_i64(m: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    m.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("lattice entry overflows i64")).collect())
        .collect()
}

/// Unimodular column reduction of the `rows.len() × n` matrix `M`.
///
/// The first `rank` columns of `M U` are in echelon form, the rest vanish, so
/// the last `n - rank` columns of `U` are a basis of the integer kernel.
pub fn column_echelon(rows: &[Vec<i64>], n: usize) -> ColumnEchelon {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = identity(n);
    let mut ui = identity(n);
    let mut pivot = 0;

    // Column ops mirrored as inverse row ops on U^{-1}.
    let sub_col = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        for r in m.iter_mut() {
            r[dst] -= q * r[src];
        }
        for r in u.iter_mut() {
            r[dst] -= q * r[src];
        }
        for k in 0..n {
            let t = ui[dst][k];
            ui[src][k] += q * t;
        }
    };
    let swap_col = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for r in m.iter_mut() {
            r.swap(a, b);
        }
        for r in u.iter_mut() {
            r.swap(a, b);
        }
        ui.swap(a, b);
    };
    let neg_col = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, a: usize| {
        for r in m.iter_mut() {
            r[a] = -r[a];
        }
        for r in u.iter_mut() {
            r[a] = -r[a];
        }
        for x in ui[a].iter_mut() {
            *x = -*x;
        }
    };

    for row in 0..m.len() {
        if pivot == n {
            break;
        }
        loop {
            // Smallest nonzero entry among the remaining columns goes to the pivot.
            let best = (pivot..n).filter(|&j| m[row][j] != 0).min_by_key(|&j| m[row][j].abs());
            let Some(j) = best else { break };
            if j != pivot {
                swap_col(&mut m, &mut u, &mut ui, pivot, j);
            }
            let p = m[row][pivot];
            let mut done = true;
            for k in pivot + 1..n {
                let q = Integer::div_floor(&m[row][k], &p);
                if q != 0 {
                    sub_col(&mut m, &mut u, &mut ui, k, pivot, q);
                }
                if m[row][k] != 0 {
                    done = false;
                }
            }
            if done {
                if m[row][pivot] < 0 {
                    neg_col(&mut m, &mut u, &mut ui, pivot);
                }
                pivot += 1;
                break;
            }
        }
    }
    ColumnEchelon { rank: pivot, u: to_i64(u), u_inv: to_i64(ui) }
}

/// Basis of `{x ∈ Z^n : M x = 0}`.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let e = column_echelon(rows, n);
    (e.rank..n).map(|j| (0..n).map(|i| e.u[i][j]).collect()).collect()
}

/// Unimodular `W` adapted to the saturated lattice spanned by some vectors:
/// `W v ∈ Z^r × {0}` for every `v` in the span, and `W` maps the saturation
/// onto `Z^r × {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub n: usize,
    pub r: usize,
    /// `W`, by rows.
    pub w: Vec<Vec<i64>>,
    /// `W^{-1}`, by rows.
    pub w_inv: Vec<Vec<i64>>,
}

impl AdaptedBasis {
    pub fn new(vectors: &[Vec<i64>], n: usize) -> Self {
        let e = column_echelon(vectors, n);
        // W = U^T, W^{-1} = (U^{-1})^T.
        let w = transpose(&e.u);
        let w_inv = transpose(&e.u_inv);
        AdaptedBasis { n, r: e.rank, w, w_inv }
    }

    /// `W x`.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.w.iter().map(|row| dot(row, x)).collect()
    }

    /// `W^{-1} y`.
    pub fn unapply(&self, y: &[i64]) -> Vec<i64> {
        self.w_inv.iter().map(|row| dot(row, y)).collect()
    }

    /// The covector that acts as `a` on the first `r` reduced coordinates and
    /// as `b` on the transverse ones: `W^T (a, b)`.
    pub fn covector(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let ab: Vec<i64> = a.iter().chain(b).copied().collect();
        (0..self.n).map(|j| (0..self.n).map(|i| self.w[i][j] * ab[i]).sum()).collect()
    }

    /// Basis of the integer covectors vanishing on the span: rows `r..n` of `W`.
    pub fn orthogonal_basis(&self) -> Vec<Vec<i64>> {
        self.w[self.r..].to_vec()
    }

    /// Lattice basis of the saturated span: columns `0..r` of `W^{-1}`.
    pub fn span_basis(&self) -> Vec<Vec<i64>> {
        (0..self.r).map(|j| (0..self.n).map(|i| self.w_inv[i][j]).collect()).collect()
    }
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let bt = transpose(b);
    a.iter().map(|r| bt.iter().map(|c| dot(r, c)).collect()).collect()
}
