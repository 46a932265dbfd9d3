use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix, nonincreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub eig_tol: f64,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>, eig_tol: f64) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values, eig_tol }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    pub fn count_near(&self, target: f64) -> usize {
        self.values
            .iter()
            .filter(|v| (*v - target).abs() <= self.eig_tol)
            .count()
    }

    pub fn count_above(&self, threshold: f64) -> usize {
        self.values
            .iter()
            .filter(|v| **v > threshold + self.eig_tol)
            .count()
    }

    pub fn power_sum(&self, k: i32) -> f64 {
        self.values.iter().map(|v| v.powi(k)).sum()
    }
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Deterministic: the rotation order is fixed, so identical inputs give
/// bit-identical spectra.
pub fn eigenvalues(m: &Matrix<f64>, eig_tol: f64) -> Result<Spectrum> {
    let n = m.size();
    let scale = m.max_abs().max(1.0);
    if let Some((row, col)) = m.asymmetry(&(eig_tol * scale)) {
        return Err(Error::NotSymmetric { row, col });
    }
    if m.rows().iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    // symmetrize so both triangles evolve identically
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (m.get(i, j) + m.get(j, i))).collect())
        .collect();
    let frob: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= 1e-17 * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    if !converged {
        // the last sweep may still have reached the threshold
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() > 1e-14 * frob {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }
    Ok(Spectrum::new((0..n).map(|i| a[i][i]).collect(), eig_tol))
}

/// Eigenvalues of a general real square matrix (real Schur form).
pub fn complex_eigenvalues(m: &Matrix<f64>) -> Result<Vec<Complex<f64>>> {
    let schur = nalgebra::linalg::Schur::try_new(m.to_nalgebra(), f64::EPSILON, 100_000)
        .ok_or(Error::NoConvergence(100_000))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}
