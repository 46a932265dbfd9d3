use serde::{Deserialize, Serialize};

use super::Spectrum;
use crate::error::{Error, Result};

/// One case of the λ₀ / λ_k lemma: whether its hypothesis holds and, if so,
/// whether the stated conclusion holds on this spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub applies: bool,
    pub conclusion_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaTwoReport {
    pub n: usize,
    pub k: usize,
    pub ones: usize,
    pub lambda0: f64,
    pub lambda_k: f64,
    /// λ₀ = 1 ⇒ n ≤ 2k
    pub case1: CaseReport,
    /// λ₀ + λ_k ≤ 0 ⇒ n ≤ 2k
    pub case2: CaseReport,
    /// n ≥ 2k and λ₀ > 1 ⇒ λ₀³ > (n−k)³/k² − (n−k−1)
    pub case3: CaseReport,
    pub case3_lhs: f64,
    pub case3_rhs: f64,
}

impl LemmaTwoReport {
    /// True when no applicable case has a failing conclusion.
    pub fn consistent(&self) -> bool {
        [&self.case1, &self.case2, &self.case3]
            .iter()
            .all(|c| !c.applies || c.conclusion_holds)
    }
}

/// Splits a spectrum as λ₀, a block of ones, and k trailing values, and
/// evaluates the three cases of the lemma.
///
/// The block of ones is every eigenvalue within `eig_tol` of 1; λ₀ is the
/// maximum. When λ₀ itself is 1 it belongs to the block. `expected_k`, when
/// given, must match the extracted k.
pub fn lemma_two_check(spec: &Spectrum, expected_k: Option<usize>) -> Result<LemmaTwoReport> {
    let n = spec.len();
    if n == 0 {
        return Err(Error::SpectrumShape("empty spectrum".into()));
    }
    let tol = spec.eig_tol;
    let rho = spec.spectral_radius().max(1.0);
    let tr = spec.power_sum(1);
    let tr3 = spec.power_sum(3);
    if tr.abs() > n as f64 * tol * rho || tr3.abs() > n as f64 * tol * rho.powi(3) {
        return Err(Error::SpectrumShape(format!(
            "traces do not vanish (tr = {tr:e}, tr³ = {tr3:e})"
        )));
    }
    let lambda0 = spec.max();
    if lambda0 < 1.0 - tol {
        return Err(Error::SpectrumShape(format!(
            "largest eigenvalue {lambda0} is below 1"
        )));
    }
    if spec.values.iter().skip(1).any(|v| *v > 1.0 + tol) {
        return Err(Error::SpectrumShape(
            "more than one eigenvalue exceeds 1".into(),
        ));
    }
    let ones = spec.count_near(1.0);
    let lambda0_is_one = (lambda0 - 1.0).abs() <= tol;
    let k = if lambda0_is_one {
        n - ones
    } else {
        n - 1 - ones
    };
    if k == 0 {
        return Err(Error::SpectrumShape("no eigenvalues below 1".into()));
    }
    if let Some(expected) = expected_k {
        if expected != k {
            return Err(Error::SpectrumShape(format!(
                "expected k = {expected}, spectrum gives k = {k}"
            )));
        }
    }
    let lambda_k = spec.min();

    let case1 = CaseReport {
        applies: lambda0_is_one,
        conclusion_holds: n <= 2 * k,
    };
    let case2 = CaseReport {
        applies: lambda0 + lambda_k <= tol,
        conclusion_holds: n <= 2 * k,
    };
    let (nf, kf) = (n as f64, k as f64);
    let case3_lhs = lambda0.powi(3);
    let case3_rhs = (nf - kf).powi(3) / (kf * kf) - (nf - kf - 1.0);
    let case3 = CaseReport {
        applies: n >= 2 * k && lambda0 > 1.0 + tol,
        conclusion_holds: case3_lhs + tol * case3_lhs.abs().max(1.0) > case3_rhs,
    };
    Ok(LemmaTwoReport {
        n,
        k,
        ones,
        lambda0,
        lambda_k,
        case1,
        case2,
        case3,
        case3_lhs,
        case3_rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicReport {
    /// Σ xᵢ³
    pub lhs: f64,
    /// (m + l)³ / m²
    pub rhs: f64,
    pub holds: bool,
    /// The common value 1 + l/m at which equality is attained.
    pub equality_point: f64,
    /// (m + l)³ / m² ≥ m + 3l
    pub remark_holds: bool,
}

/// For reals xᵢ ≥ −2 with Σ xᵢ = m + l (l ≥ 0): Σ xᵢ³ ≥ (m + l)³ / m².
///
/// The bound comes from the convex minorant of x³ that follows the tangent
/// at 1 down to −2.
pub fn cubic_inequality(xs: &[f64], l: f64, eig_tol: f64) -> Result<CubicReport> {
    let m = xs.len();
    if m == 0 {
        return Err(Error::Precondition("empty vector".into()));
    }
    if !(l >= 0.0) {
        return Err(Error::Precondition(format!("l = {l} must be nonnegative")));
    }
    if let Some(x) = xs.iter().find(|x| !(**x >= -2.0 - eig_tol)) {
        return Err(Error::Precondition(format!("entry {x} is below -2")));
    }
    let mf = m as f64;
    let sum: f64 = xs.iter().sum();
    if (sum - (mf + l)).abs() > mf * eig_tol * (mf + l).max(1.0) {
        return Err(Error::Precondition(format!(
            "sum {sum} differs from m + l = {}",
            mf + l
        )));
    }
    let lhs: f64 = xs.iter().map(|x| x * x * x).sum();
    let rhs = (mf + l).powi(3) / (mf * mf);
    Ok(CubicReport {
        lhs,
        rhs,
        holds: lhs >= rhs - mf * eig_tol,
        equality_point: 1.0 + l / mf,
        remark_holds: rhs >= mf + 3.0 * l - mf * eig_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_one_spectrum() {
        let s = Spectrum::new(vec![1.0, 1.0, -1.0, -1.0], 1e-8);
        let r = lemma_two_check(&s, Some(2)).unwrap();
        assert_eq!((r.n, r.k, r.ones), (4, 2, 2));
        assert!(r.case1.applies && r.case1.conclusion_holds);
        assert!(r.case2.applies && r.case2.conclusion_holds);
        assert!(!r.case3.applies);
        assert!(r.consistent());
    }

    #[test]
    fn case_two_spectrum() {
        // λ₀ = 2 balanced by λ_k = −2; traces: 2 + 1 − 1 − 2 = 0, 8 + 1 − 1 − 8 = 0
        let s = Spectrum::new(vec![2.0, 1.0, -1.0, -2.0], 1e-8);
        let r = lemma_two_check(&s, None).unwrap();
        assert_eq!(r.k, 2);
        assert!(!r.case1.applies);
        assert!(r.case2.applies && r.case2.conclusion_holds);
    }

    #[test]
    fn case_three_spectrum() {
        // λ₀ = a, two ones, two copies of −b with vanishing traces:
        //   a + 2 = 2b and a³ + 2 = 2b³  ⇒  a² − 2a − 4 = 0, a = 1 + √5
        let a = 1.0 + 5f64.sqrt();
        let b = (a + 2.0) / 2.0;
        let s = Spectrum::new(vec![a, 1.0, 1.0, -b, -b], 1e-8);
        let r = lemma_two_check(&s, Some(2)).unwrap();
        assert_eq!((r.n, r.k), (5, 2));
        assert!(!r.case1.applies && !r.case2.applies);
        assert!(r.case3.applies && r.case3.conclusion_holds);
        // (n − k)³/k² − (n − k − 1) = 27/4 − 2
        assert!((r.case3_rhs - 4.75).abs() < 1e-15);
        assert!(r.consistent());
    }

    #[test]
    fn shape_errors() {
        assert!(lemma_two_check(&Spectrum::new(vec![0.5, -0.5], 1e-8), None).is_err());
        assert!(lemma_two_check(&Spectrum::new(vec![2.0, 2.0, -4.0], 1e-8), None).is_err());
        assert!(
            lemma_two_check(&Spectrum::new(vec![1.0, 1.0, -1.0, -1.0], 1e-8), Some(3)).is_err()
        );
        assert!(lemma_two_check(&Spectrum::new(vec![3.0, 0.0], 1e-8), None).is_err());
    }

    #[test]
    fn cubic_examples() {
        let r = cubic_inequality(&[1.0, 1.0], 0.0, 1e-8).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality_point), (2.0, 2.0, 1.0));
        assert!(r.holds && r.remark_holds);

        let r = cubic_inequality(&[1.5, 1.5], 1.0, 1e-8).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality_point), (6.75, 6.75, 1.5));

        let r = cubic_inequality(&[-2.0, 5.0], 1.0, 1e-8).unwrap();
        assert_eq!((r.lhs, r.rhs), (117.0, 6.75));
        assert!(r.holds);
    }

    #[test]
    fn cubic_preconditions() {
        assert!(cubic_inequality(&[-2.5, 4.5], 0.0, 1e-8).is_err());
        assert!(cubic_inequality(&[1.0, 1.0], 1.0, 1e-8).is_err());
        assert!(cubic_inequality(&[], 0.0, 1e-8).is_err());
        assert!(cubic_inequality(&[1.0], -1.0, 1e-8).is_err());
    }
}
