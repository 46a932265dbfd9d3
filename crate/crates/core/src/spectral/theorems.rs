//! Numerical checks of the classical matrix facts used in the bounds:
//! Weyl's inequality for largest eigenvalues, the Perron–Frobenius dominant
//! eigenvalue, and Gershgorin discs.

use serde::{Deserialize, Serialize};

use super::{complex_eigenvalues, eigenvalues};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub holds: bool,
}

/// Largest eigenvalues α, β, γ of A, B and A + B, and whether γ ≤ α + β.
pub fn weyl_check(a: &Matrix<f64>, b: &Matrix<f64>, eig_tol: f64) -> Result<WeylReport> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(format!("{} vs {}", a.size(), b.size())));
    }
    let alpha = eigenvalues(a, eig_tol)?.max();
    let beta = eigenvalues(b, eig_tol)?.max();
    let gamma = eigenvalues(&a.add(b)?, eig_tol)?.max();
    Ok(WeylReport {
        alpha,
        beta,
        gamma,
        holds: gamma <= alpha + beta + eig_tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronReport {
    /// Spectral radius.
    pub rho: f64,
    /// Some real eigenvalue λ ≥ 0 has |λ| = ρ (within tolerance).
    pub attained_by_nonnegative_real: bool,
}

/// Spectral radius of a nonnegative matrix and whether it is attained by a
/// nonnegative real eigenvalue.
pub fn perron_frobenius_check(m: &Matrix<f64>, eig_tol: f64) -> Result<PerronReport> {
    let n = m.size();
    for i in 0..n {
        for j in 0..n {
            let v = *m.get(i, j);
            if !(v >= 0.0) {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    let scale = m.max_abs().max(1.0);
    let (rho, attained) = if m.asymmetry(&0.0).is_none() {
        let s = eigenvalues(m, eig_tol)?;
        let rho = s.spectral_radius();
        let attained = s
            .values
            .iter()
            .any(|&l| l >= -eig_tol && l.abs() >= rho - eig_tol);
        (rho, attained)
    } else {
        let ev = complex_eigenvalues(m)?;
        let rho = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let attained = ev.iter().any(|z| {
            z.im.abs() <= eig_tol * scale && z.re >= -eig_tol && z.re.abs() >= rho - eig_tol * scale
        });
        (rho, attained)
    };
    Ok(PerronReport {
        rho,
        attained_by_nonnegative_real: attained,
    })
}

/// Gershgorin bound: every eigenvalue lies within `max_i (|a_ii| + Σ_{j≠i} |a_ij|)`
/// of the origin. For a U-matrix the diagonal vanishes and this is the
/// largest off-diagonal absolute row sum.
pub fn gershgorin_bound(m: &Matrix<f64>) -> f64 {
    (0..m.size())
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
