//! The U-matrix of a point set and the spectral facts it satisfies.
//!
//! For points v₁,…,vₙ the U-matrix has zero diagonal and off-diagonal
//! entries |vᵢ − vⱼ|² − 1. For an almost-equidistant set every triple
//! contains a zero entry, so tr U = tr U³ = 0; and since U − I is a rank-two
//! correction of −2·Gram, U has at most one eigenvalue above 1 and at least
//! n − d − 2 eigenvalues equal to 1.
//!
//! Eigenvalues are indexed in nonincreasing order throughout (λ₀ is the
//! largest), which is the order the lemma checks rely on.

mod eigen;
mod lemmas;
mod theorems;

pub use eigen::{complex_eigenvalues, eigenvalues, Spectrum};
pub use lemmas::{cubic_inequality, lemma_two_check, CaseReport, CubicReport, LemmaTwoReport};
pub use theorems::{
    gershgorin_bound, perron_frobenius_check, weyl_check, PerronReport, WeylReport,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Field, Mode, Rational};
use crate::geometry::{require_almost_equidistant, PointSet, Tolerance};
use crate::matrix::Matrix;
use crate::poly;

/// Symmetric matrix with entries |vᵢ − vⱼ|² − 1 off the diagonal and 0 on it.
#[derive(Debug, Clone, PartialEq)]
pub struct UMatrix<T> {
    m: Matrix<T>,
}

impl<T: Field> UMatrix<T> {
    pub fn size(&self) -> usize {
        self.m.size()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        self.m.get(i, j)
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.size())
            .map(|i| {
                self.m
                    .row(i)
                    .iter()
                    .fold(T::zero(), |acc, v| acc + v.clone())
            })
            .collect()
    }

    pub fn trace(&self) -> T {
        self.m.trace()
    }

    /// tr U³ = Σ_{i,j,k} U_ij U_jk U_ki, summed directly from the entries.
    pub fn trace_cubed(&self) -> T {
        let n = self.size();
        let m = &self.m;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..n {
                    let uij = m.get(i, j);
                    if uij.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        let ujk = m.get(j, k);
                        let uki = m.get(k, i);
                        if ujk.is_zero() || uki.is_zero() {
                            continue;
                        }
                        acc = acc + uij.clone() * ujk.clone() * uki.clone();
                    }
                }
                acc
            })
            .reduce(T::zero, |a, b| a + b)
    }
}

/// Builds the U-matrix of a point set. Exact in rational mode.
pub fn build_u<T: Field>(s: &PointSet<T>) -> UMatrix<T> {
    let n = s.len();
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = s.sq_dist(i, j) - T::one();
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    UMatrix { m }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIdentities {
    pub trace_u: f64,
    pub trace_u3: f64,
    /// Exactly zero traces in exact mode; |tr U³| ≤ n³·eig_tol otherwise.
    pub holds: bool,
}

/// Checks tr U = tr U³ = 0 for an almost-equidistant set.
pub fn trace_identities<T: Field>(
    u: &UMatrix<T>,
    s: &PointSet<T>,
    tol: &Tolerance,
) -> Result<TraceIdentities> {
    require_almost_equidistant(s, tol)?;
    let n = u.size() as f64;
    let tr = u.trace();
    let tr3 = u.trace_cubed();
    let slack = T::tolerance(n * n * n * tol.eig_tol);
    Ok(TraceIdentities {
        trace_u: tr.to_f64(),
        trace_u3: tr3.to_f64(),
        holds: tr.is_zero() && tr3.abs() <= slack,
    })
}

/// Spectral certificate for an almost-equidistant set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCertificate {
    pub n: usize,
    pub dim: usize,
    pub trace_u: f64,
    pub trace_u3: f64,
    pub count_eq_one: usize,
    pub count_gt_one: usize,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub lemma1_holds: bool,
    #[serde(skip)]
    pub spectrum: Option<Spectrum>,
}

impl SpectralCertificate {
    /// Corollary of the eigenvalue-count lemma: without an eigenvalue above 1
    /// the set has at most 2d + 4 points.
    pub fn corollary_bound(&self) -> Option<usize> {
        (self.count_gt_one == 0).then_some(2 * self.dim + 4)
    }
}

/// Certifies the U-matrix spectrum of an almost-equidistant set.
///
/// In exact mode the counts of eigenvalues equal to and above 1 come from the
/// characteristic polynomial of U − I (its zero-root multiplicity and its
/// Descartes sign count, exact because the polynomial is real-rooted);
/// the extreme eigenvalues are always numerical.
pub fn certify<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<SpectralCertificate> {
    let u = build_u(s);
    let traces = trace_identities(&u, s, tol)?;
    let spectrum = eigenvalues(&u.matrix().to_f64(), tol.eig_tol.max(1e-12))?;

    let (count_eq_one, count_gt_one) = match T::MODE {
        Mode::Float => (spectrum.count_near(1.0), spectrum.count_above(1.0)),
        Mode::Exact => {
            let mut shifted: Matrix<Rational> = Matrix::from_fn(u.size(), |i, j| {
                u.get(i, j).to_rational().expect("exact entries are finite")
            });
            for i in 0..u.size() {
                shifted.set(i, i, -Rational::from_int(1));
            }
            let p = poly::char_poly(&shifted);
            (p.zero_root_multiplicity(), p.descartes_positive_roots())
        }
    };

    let n = s.len();
    let lemma1_holds = traces.holds && count_gt_one <= 1 && count_eq_one + s.dim() + 2 >= n;
    Ok(SpectralCertificate {
        n,
        dim: s.dim(),
        trace_u: traces.trace_u,
        trace_u3: traces.trace_u3,
        count_eq_one,
        count_gt_one,
        lambda_max: spectrum.max(),
        lambda_min: spectrum.min(),
        lemma1_holds,
        spectrum: Some(spectrum),
    })
}
