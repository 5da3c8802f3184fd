//! Small dense linear-algebra helpers shared by the fitting routines.

use nalgebra::{DMatrix, DVector};

/// Thin SVD `X = U diag(s) Vᵀ` with singular values in descending order.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    /// m x k
    pub u: DMatrix<f64>,
    /// length k = min(m, n)
    pub singular_values: DVector<f64>,
    /// n x k
    pub v: DMatrix<f64>,
    pub nrows: usize,
    pub ncols: usize,
}

impl ThinSvd {
    pub fn new(x: &DMatrix<f64>) -> Self {
        let (m, n) = x.shape();
        let svd = x.clone().svd(true, true);
        let u = svd.u.expect("U requested");
        let v_t = svd.v_t.expect("Vᵀ requested");
        let s = svd.singular_values;
        let k = s.len();

        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));

        let u = DMatrix::from_fn(m, k, |i, c| u[(i, order[c])]);
        let v = DMatrix::from_fn(n, k, |i, c| v_t[(order[c], i)]);
        let singular_values = DVector::from_fn(k, |c, _| s[order[c]]);
        ThinSvd {
            u,
            singular_values,
            v,
            nrows: m,
            ncols: n,
        }
    }

    /// Singular values at or below `max(m, n) * eps * s_max` count as zero.
    pub fn tolerance(&self) -> f64 {
        let s_max = self.singular_values.iter().copied().fold(0.0, f64::max);
        self.nrows.max(self.ncols) as f64 * f64::EPSILON * s_max
    }

    pub fn rank(&self) -> usize {
        let tol = self.tolerance();
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }

    /// Minimum-norm least-squares solution `V_r diag(1/s_r) U_rᵀ y` over the
    /// first `rank` singular triplets.
    pub fn solve_truncated(&self, y: &DVector<f64>, rank: usize) -> DVector<f64> {
        let mut beta = DVector::zeros(self.ncols);
        for c in 0..rank {
            let coef = self.u.column(c).dot(y) / self.singular_values[c];
            beta.axpy(coef, &self.v.column(c), 1.0);
        }
        beta
    }
}

pub fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    let m = x.nrows() as f64;
    DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum() / m))
}

pub fn mean(v: &DVector<f64>) -> f64 {
    v.sum() / v.len() as f64
}

/// Returns `X - 1 x̄ᵀ` and `x̄`.
pub fn center_columns(x: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let means = column_means(x);
    let mut centered = x.clone();
    for (j, mut col) in centered.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    (centered, means)
}

pub fn center_vector(y: &DVector<f64>) -> (DVector<f64>, f64) {
    let mu = mean(y);
    (y.add_scalar(-mu), mu)
}

/// Flips each column so its largest-magnitude entry is positive; returns the
/// applied signs. The first maximal entry wins ties.
pub fn fix_column_signs(w: &mut DMatrix<f64>) -> Vec<f64> {
    let mut signs = Vec::with_capacity(w.ncols());
    for mut col in w.column_iter_mut() {
        let mut best = 0.0_f64;
        let mut best_abs = -1.0_f64;
        for &v in col.iter() {
            if v.abs() > best_abs {
                best_abs = v.abs();
                best = v;
            }
        }
        let sign = if best < 0.0 { -1.0 } else { 1.0 };
        if sign < 0.0 {
            col.neg_mut();
        }
        signs.push(sign);
    }
    signs
}
