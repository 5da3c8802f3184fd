//! Independent reference solvers and random instances shared by the
//! integration and acceptance tests. Nothing here calls the library's
//! solvers.
#![allow(dead_code)]

use latentlab_core::{DataMatrix, TargetVector};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn random_matrix(m: usize, n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng))
}

pub fn random_vector(m: usize, seed: u64) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(m, |_, _| StandardNormal.sample(&mut rng))
}

/// `X` and a target with a sparse true signal plus noise.
pub fn instance(m: usize, n: usize, seed: u64) -> (DMatrix<f64>, DVector<f64>) {
    let x = random_matrix(m, n, seed);
    let mut beta = DVector::zeros(n);
    for j in (0..n).step_by(3) {
        beta[j] = 1.0 + j as f64 * 0.25;
    }
    let y = &x * beta + random_vector(m, seed ^ 0xABCD) * 0.3;
    (x, y)
}

pub fn wrap(x: &DMatrix<f64>, y: &DVector<f64>) -> (DataMatrix, TargetVector) {
    (DataMatrix::new(x.clone()).unwrap(), TargetVector::new(y.clone()).unwrap())
}

fn lipschitz(x: &DMatrix<f64>) -> f64 {
    let gram = x.tr_mul(x);
    let eig = SymmetricEigen::new(gram);
    2.0 * eig.eigenvalues.max()
}

pub fn ridge_objective(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>, lambda: f64) -> f64 {
    (y - x * beta).norm_squared() + lambda * beta.norm_squared()
}

pub fn elastic_objective(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>, l1: f64, l2: f64) -> f64 {
    (y - x * beta).norm_squared() + l1 * beta.lp_norm(1) + l2 * beta.norm_squared()
}

/// Plain gradient descent on `‖y − Xβ‖² + λ‖β‖²`.
pub fn ridge_gradient_descent(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> DVector<f64> {
    let step = 1.0 / (lipschitz(x) + 2.0 * lambda);
    let mut beta = DVector::zeros(x.ncols());
    for _ in 0..200_000 {
        let grad = x.tr_mul(&(x * &beta - y)) * 2.0 + &beta * (2.0 * lambda);
        if grad.norm() < 1e-12 {
            break;
        }
        beta -= grad * step;
    }
    beta
}

/// FISTA on `‖y − Xβ‖² + l1‖β‖₁ + l2‖β‖²`.
pub fn proximal_gradient(x: &DMatrix<f64>, y: &DVector<f64>, l1: f64, l2: f64) -> DVector<f64> {
    let lip = lipschitz(x) + 2.0 * l2;
    let step = 1.0 / lip;
    let n = x.ncols();
    let mut beta = DVector::zeros(n);
    let mut z = beta.clone();
    let mut t = 1.0_f64;
    for _ in 0..200_000 {
        let grad = x.tr_mul(&(x * &z - y)) * 2.0 + &z * (2.0 * l2);
        let u = &z - grad * step;
        let next = u.map(|v| v.signum() * (v.abs() - l1 * step).max(0.0));
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = &next + (&next - &beta) * ((t - 1.0) / t_next);
        let moved = (&next - &beta).amax();
        beta = next;
        t = t_next;
        if moved < 1e-15 {
            break;
        }
    }
    beta
}

pub fn center(x: &DMatrix<f64>, y: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let mut xc = x.clone();
    for mut col in xc.column_iter_mut() {
        let mu = col.mean();
        col.add_scalar_mut(-mu);
    }
    let mu = y.mean();
    (xc, y.add_scalar(-mu))
}

/// Orthonormal basis of the null space of `x` from the eigenvectors of `XᵀX`.
pub fn null_space(x: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(x.tr_mul(x));
    let tol = 1e-9 * eig.eigenvalues.amax().max(1.0);
    let cols: Vec<DVector<f64>> = (0..x.ncols())
        .filter(|&j| eig.eigenvalues[j].abs() < tol)
        .map(|j| eig.eigenvectors.column(j).into_owned())
        .collect();
    DMatrix::from_columns(&cols)
}
