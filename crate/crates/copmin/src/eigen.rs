//! Floating-point spectral helpers: a cyclic Jacobi eigensolver over the
//! float image of a rational matrix, and inertia. Inertia prefers the exact
//! route — sign counts of a rational factorization — and falls back to the
//! float spectrum only for block-needing matrices.

use crate::ldlt::{self, Ldlt, PivotStrategy};
use crate::matrix::SymRationalMatrix;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum EigenError {
    NoConvergence { residual: f64 },
    AmbiguousSign { eigenvalue: f64, threshold: f64 },
}

impl fmt::Display for EigenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigenError::NoConvergence { residual } => {
                write!(f, "jacobi sweep limit hit, off-diagonal residual {residual:e}")
            }
            EigenError::AmbiguousSign { eigenvalue, threshold } => {
                write!(
                    f,
                    "eigenvalue {eigenvalue:e} too close to the zero threshold {threshold:e}"
                )
            }
        }
    }
}

impl std::error::Error for EigenError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Eigenvalues ascending; `vectors[k]` is the unit eigenvector paired with
/// `eigenvalues[k]`. `residual` is the final off-diagonal Frobenius norm.
#[derive(Debug, Clone)]
pub struct JacobiEigen {
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residual: f64,
}

fn offdiag_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on the float image: rotate away each off-diagonal entry in
/// turn until the off-diagonal norm drops below 1e-12·‖Q‖, at most 100
/// sweeps.
pub fn jacobi_eigen(q: &SymRationalMatrix) -> Result<JacobiEigen, EigenError> {
    let n = q.dim();
    let mut a = q.to_f64();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let tol = 1e-12 * q.frobenius_f64();

    let mut off = offdiag_norm(&a);
    let mut sweeps = 0;
    while off > tol {
        if sweeps == 100 {
            return Err(EigenError::NoConvergence { residual: off });
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apq = a[p][r];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    1.0 / (theta - (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let app = a[p][p];
                let arr = a[r][r];
                a[p][p] = app - t * apq;
                a[r][r] = arr + t * apq;
                a[p][r] = 0.0;
                a[r][p] = 0.0;
                for i in 0..n {
                    if i != p && i != r {
                        let aip = a[i][p];
                        let air = a[i][r];
                        a[i][p] = c * aip - s * air;
                        a[p][i] = a[i][p];
                        a[i][r] = s * aip + c * air;
                        a[r][i] = a[i][r];
                    }
                }
                for row in v.iter_mut() {
                    let vip = row[p];
                    let vir = row[r];
                    row[p] = c * vip - s * vir;
                    row[r] = s * vip + c * vir;
                }
            }
        }
        sweeps += 1;
        off = offdiag_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k][k]).collect();
    let vectors: Vec<Vec<f64>> = order.iter().map(|&k| (0..n).map(|i| v[i][k]).collect()).collect();
    Ok(JacobiEigen {
        eigenvalues,
        vectors,
        residual: off,
    })
}

/// Counts of positive / zero / negative eigenvalues. Exact whenever a proper
/// factorization exists (sign counts of d, by congruence); otherwise counted
/// from the float spectrum with zero threshold 1e-9·‖Q‖, rejecting any
/// eigenvalue within a factor 10 of that threshold as too close to call.
pub fn inertia_of(q: &SymRationalMatrix) -> Result<Inertia, EigenError> {
    if let Ok(Ldlt::Factorization(f)) = ldlt::ldlt_decompose(q, PivotStrategy::Phase1) {
        let (positive, zero, negative) = f.d_sign_counts();
        return Ok(Inertia { positive, zero, negative });
    }
    let eig = jacobi_eigen(q)?;
    let threshold = 1e-9 * q.frobenius_f64();
    let mut inertia = Inertia { positive: 0, zero: 0, negative: 0 };
    for &lambda in &eig.eigenvalues {
        let mag = lambda.abs();
        if mag > threshold * 0.1 && mag < threshold * 10.0 {
            return Err(EigenError::AmbiguousSign { eigenvalue: lambda, threshold });
        }
        if lambda > threshold {
            inertia.positive += 1;
        } else if lambda < -threshold {
            inertia.negative += 1;
        } else {
            inertia.zero += 1;
        }
    }
    Ok(inertia)
}
