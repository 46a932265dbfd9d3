//! Executable versions of the cardinality bounds for almost-equidistant sets.
//!
//! Each bound has a calculator (dimension and parameters in, integer bound
//! out) and a checker that evaluates it on a concrete configuration and
//! records every intermediate number in a [`BoundReport`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{
    circumsphere, is_centered, max_sq_dist, min_enclosing_ball, recenter_to_barycenter,
    require_almost_equidistant, PointSet, Tolerance,
};
use crate::spectral::{build_u, certify, eigenvalues, perron_frobenius_check};

const HALF_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Sphere,
    Diameter,
    Ball,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Asymptotic {
    Asymptotic,
}

/// An integer bound, or the marker `"asymptotic"` when no explicit number
/// applies to the given data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Finite(usize),
    Asymptotic(Asymptotic),
}

impl Bound {
    pub const ASYMPTOTIC: Bound = Bound::Asymptotic(Asymptotic::Asymptotic);

    pub fn finite(&self) -> Option<usize> {
        match self {
            Bound::Finite(b) => Some(*b),
            Bound::Asymptotic(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c0: Option<f64>,
}

/// One link of an auditable chain of inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub message: Option<String>,
}

impl Stage {
    fn new(name: &str, passed: bool, values: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            passed,
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            message: None,
        }
    }

    fn with_message(mut self, msg: impl Into<String>) -> Self {
        self.message = Some(msg.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub dim: usize,
    pub params: BoundParams,
    pub bound: Bound,
    /// Size of the checked configuration; absent for calculator-only reports.
    pub n_observed: Option<usize>,
    /// `n_observed ≤ bound`; absent without a configuration or a finite bound.
    pub satisfied: Option<bool>,
    pub detail: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub stages: Vec<Stage>,
}

impl BoundReport {
    fn template(theorem: Theorem, dim: usize, params: BoundParams, bound: Bound) -> Self {
        Self {
            theorem,
            dim,
            params,
            bound,
            n_observed: None,
            satisfied: None,
            detail: BTreeMap::new(),
            stages: Vec::new(),
        }
    }

    fn observe(mut self, n: usize) -> Self {
        self.n_observed = Some(n);
        self.satisfied = self.bound.finite().map(|b| n <= b);
        self
    }

    fn note(&mut self, key: &str, v: f64) {
        self.detail.insert(key.to_string(), v);
    }
}

/// Bound for sets on a sphere of radius `r ≤ 1/√2`: 2d + 2, or 2d on the
/// critical sphere `|r − 1/√2| ≤ dist_tol`.
pub fn sphere_bound(d: usize, r: f64, tol: &Tolerance) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(r > 0.0) || r > HALF_SQRT2 + tol.dist_tol {
        return Err(Error::OutOfRange(format!(
            "sphere radius {r} outside (0, 1/sqrt(2)]"
        )));
    }
    let critical = (r - HALF_SQRT2).abs() <= tol.dist_tol;
    let bound = if critical { 2 * d } else { 2 * d + 2 };
    let mut rep = BoundReport::template(
        Theorem::Sphere,
        d,
        BoundParams {
            radius: Some(r),
            c0: None,
        },
        Bound::Finite(bound),
    );
    rep.note("critical_sphere", critical as u8 as f64);
    Ok(rep)
}

/// Checks an almost-equidistant set lying on a common sphere against
/// [`sphere_bound`].
pub fn check_sphere<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<BoundReport> {
    require_almost_equidistant(s, tol)?;
    let ball = circumsphere(s, &T::tolerance(tol.dist_tol))
        .ok_or_else(|| Error::Precondition("points do not lie on a common sphere".into()))?;
    let r = ball.radius_sq.to_f64().max(0.0).sqrt();
    let mut rep = sphere_bound(s.dim(), r, tol)?.observe(s.len());
    rep.note("radius_sq", ball.radius_sq.to_f64());
    Ok(rep)
}

/// The conjectured maximum ⌊3(d + 1)/2⌋ for almost-equidistant diameter sets.
pub fn conjectured_diameter_bound(d: usize) -> usize {
    3 * (d + 1) / 2
}

/// Bound 2d + 4 for almost-equidistant sets of diameter at most 1.
pub fn diameter_bound(d: usize) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rep = BoundReport::template(
        Theorem::Diameter,
        d,
        BoundParams::default(),
        Bound::Finite(2 * d + 4),
    );
    rep.note("conjectured_bound", conjectured_diameter_bound(d) as f64);
    Ok(rep)
}

/// Checks an almost-equidistant set of diameter ≤ 1 against [`diameter_bound`].
///
/// Such a set has a nonpositive U-matrix, so the Perron root of −U is its
/// spectral radius and λ_max(U) + λ_min(U) ≤ 0. The spectral check is
/// recorded as `spectral_ok` (1 or 0) in the detail.
pub fn check_diameter<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<BoundReport> {
    require_almost_equidistant(s, tol)?;
    let diam_sq = max_sq_dist(s);
    if diam_sq > T::one() + T::tolerance(tol.dist_tol) {
        return Err(Error::Precondition(format!(
            "diameter {} exceeds 1",
            diam_sq.to_f64().sqrt()
        )));
    }
    let u = build_u(s).matrix().to_f64();
    // clamp the rounding noise on unit pairs before the nonnegativity check
    let neg_u = crate::matrix::Matrix::from_fn(u.size(), |i, j| (-*u.get(i, j)).max(0.0));
    let perron = perron_frobenius_check(&neg_u, tol.eig_tol.max(1e-12))?;
    let spec = eigenvalues(&u, tol.eig_tol.max(1e-12))?;
    let sum = spec.max() + spec.min();
    let mut rep = diameter_bound(s.dim())?.observe(s.len());
    rep.note("diameter", diam_sq.to_f64().sqrt());
    rep.note("lambda_max", spec.max());
    rep.note("lambda_min", spec.min());
    rep.note("lambda_sum", sum);
    rep.note("perron_root", perron.rho);
    rep.note(
        "spectral_ok",
        (sum <= tol.eig_tol && perron.attained_by_nonnegative_real) as u8 as f64,
    );
    Ok(rep)
}

/// g(n) = (n−d−1)³/(d+1)² − (n−d−2) − (2nr+1)³. A set with one U-eigenvalue
/// above 1 inside the ball can only have n points when g(n) < 0.
fn ball_gap(d: usize, r: f64, n: f64) -> (f64, f64, f64) {
    let k = d as f64 + 1.0;
    let a = n - k;
    let b = 2.0 * n * r + 1.0;
    let g = a * a * a / (k * k) - (a - 1.0) - b * b * b;
    let g1 = 3.0 * a * a / (k * k) - 1.0 - 6.0 * r * b * b;
    let g2 = 6.0 * a / (k * k) - 24.0 * r * r * b;
    (g, g1, g2)
}

/// Smallest n ≥ 2d + 2 from which no almost-equidistant set with exactly one
/// U-eigenvalue above 1 fits in the ball of squared radius
/// 1/2 + c0/(d+1)^{2/3} (centred anywhere).
///
/// Scans n up to 100(d + 1). Past the last sign change the gap is a cubic
/// with positive leading coefficient; the tail is certified by g, g′, g″ > 0
/// at the end of the scan, and an error is returned when that fails.
pub fn ball_bound_threshold(d: usize, c0: f64) -> Result<usize> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(0.0..0.5).contains(&c0) {
        return Err(Error::OutOfRange(format!("c0 = {c0} outside [0, 1/2)")));
    }
    let r = c0 / (d as f64 + 1.0).powf(2.0 / 3.0);
    let start = 2 * d + 2;
    let cap = 100 * (d + 1);
    let last_feasible = (start..=cap)
        .rev()
        .find(|&n| ball_gap(d, r, n as f64).0 < 0.0);
    let (g, g1, g2) = ball_gap(d, r, cap as f64);
    if !(g > 0.0 && g1 > 0.0 && g2 > 0.0) {
        return Err(Error::NoConvergence(cap));
    }
    Ok(last_feasible.map_or(start, |n| n + 1))
}

/// Overall bound in the small-ball regime: the larger of the one-eigenvalue
/// branch (threshold − 1) and the no-eigenvalue-above-1 branch 2d + 4.
pub fn ball_bound(d: usize, c0: f64) -> Result<BoundReport> {
    let t = ball_bound_threshold(d, c0)?;
    let bound = (t - 1).max(2 * d + 4);
    let mut rep = BoundReport::template(
        Theorem::Ball,
        d,
        BoundParams {
            radius: Some((0.5 + c0 / (d as f64 + 1.0).powf(2.0 / 3.0)).sqrt()),
            c0: Some(c0),
        },
        Bound::Finite(bound),
    );
    rep.note("threshold", t as f64);
    Ok(rep)
}

/// Checks a set against the small-ball bound using its minimum enclosing
/// ball. Returns an asymptotic report when the ball is too large.
pub fn check_ball<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<BoundReport> {
    require_almost_equidistant(s, tol)?;
    let ball = min_enclosing_ball(s);
    let d = s.dim();
    let excess = (ball.radius_sq.to_f64() - 0.5).max(0.0);
    let c0 = excess * (d as f64 + 1.0).powf(2.0 / 3.0);
    let mut rep = if c0 < 0.5 {
        ball_bound(d, c0)?
    } else {
        BoundReport::template(
            Theorem::Ball,
            d,
            BoundParams {
                radius: None,
                c0: Some(c0),
            },
            Bound::ASYMPTOTIC,
        )
    };
    rep.note("enclosing_radius_sq", ball.radius_sq.to_f64());
    Ok(rep.observe(s.len()))
}

/// Per-point defect sums of a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FStatistic {
    /// max_i |per_point_sums[i]|
    pub value: f64,
    pub argmax_index: usize,
    /// Σ_{j≠i} (|v_i − v_j|² − 1), the i-th row sum of the U-matrix.
    pub per_point_sums: Vec<f64>,
    /// max_i |Σ_{j=1..n} (|v_i − v_j|² − 1)|, where the j = i term adds −1.
    /// This is the statistic that controls the recentred norms.
    pub full_value: f64,
}

pub fn f_statistic<T: Field>(s: &PointSet<T>) -> FStatistic {
    let sums = f_sums(s);
    let mut value = T::zero();
    let mut full = T::zero();
    let mut argmax = 0;
    for (i, x) in sums.iter().enumerate() {
        if x.abs() > value {
            value = x.abs();
            argmax = i;
        }
        full = T::max_of(full, (x.clone() - T::one()).abs());
    }
    FStatistic {
        value: value.to_f64(),
        argmax_index: argmax,
        per_point_sums: sums.iter().map(Field::to_f64).collect(),
        full_value: full.to_f64(),
    }
}

fn f_sums<T: Field>(s: &PointSet<T>) -> Vec<T> {
    let n = s.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .fold(T::zero(), |acc, j| acc + s.sq_dist(i, j) - T::one())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    /// max_i | |v_i|² − 1/2 |
    pub max_deviation: f64,
    /// 3f/(2n) with the full statistic f.
    pub f_over_n_bound: f64,
    pub holds: bool,
}

/// For a set centred at its barycenter, every squared norm lies within
/// 3f/(2n) of 1/2, where f is the full defect statistic.
pub fn recentred_norm_bounds<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<NormBounds> {
    if !is_centered(s, tol) {
        return Err(Error::Precondition(
            "point set is not centred at its barycenter".into(),
        ));
    }
    let n = s.len();
    let full = f_sums(s)
        .into_iter()
        .fold(T::zero(), |m, x| T::max_of(m, (x - T::one()).abs()));
    let budget = T::from_int(3) * full / T::from_int(2 * n as i64);
    let dev = (0..n).fold(T::zero(), |m, i| {
        T::max_of(m, (s.sq_norm(i) - T::half()).abs())
    });
    Ok(NormBounds {
        max_deviation: dev.to_f64(),
        f_over_n_bound: budget.to_f64(),
        holds: dev <= budget + T::tolerance(tol.dist_tol),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaEndReport {
    /// |Σ_{i≠0} (|w_0 − w_i|² − 1)|
    pub lhs: f64,
    /// d^{1/2} + d·x^{1/2} + d·x
    pub rhs_without_constant: f64,
    pub ratio: f64,
    /// Points at unit distance from w_0; their summands vanish.
    pub discarded: usize,
}

/// Evaluates both sides of the single-point defect estimate for an
/// almost-equidistant set whose squared norms are all within `x` of 1/2.
///
/// Points at unit distance from `w0` contribute zero and are dropped; the
/// rest form a unit simplex because every triple through `w0` needs a unit
/// pair. The ratio is the empirical constant for this configuration.
pub fn lemma_end_check<T: Field>(
    s: &PointSet<T>,
    w0: usize,
    x: f64,
    tol: &Tolerance,
) -> Result<LemmaEndReport> {
    if w0 >= s.len() {
        return Err(Error::OutOfRange(format!(
            "index {w0} out of range for {} points",
            s.len()
        )));
    }
    if !(x > 0.0) {
        return Err(Error::Precondition(format!("x = {x} must be positive")));
    }
    require_almost_equidistant(s, tol)?;
    let half = T::half();
    let slack = T::tolerance(tol.dist_tol);
    let xt = T::from_f64(x).ok_or_else(|| Error::Precondition(format!("x = {x} is not finite")))?;
    for i in 0..s.len() {
        if (s.sq_norm(i) - half.clone()).abs() > xt.clone() + slack.clone() {
            return Err(Error::Precondition(format!(
                "point {i} has squared norm {} farther than x from 1/2",
                s.sq_norm(i).to_f64()
            )));
        }
    }
    let mut sum = T::zero();
    let mut discarded = 0;
    for i in (0..s.len()).filter(|&i| i != w0) {
        let defect = s.sq_dist(w0, i) - T::one();
        if defect.abs() <= slack {
            discarded += 1;
        } else {
            sum = sum + defect;
        }
    }
    let d = s.dim() as f64;
    let rhs = d.sqrt() + d * x.sqrt() + d * x;
    let lhs = sum.abs().to_f64();
    Ok(LemmaEndReport {
        lhs,
        rhs_without_constant: rhs,
        ratio: lhs / rhs,
        discarded,
    })
}

/// Extra stages for [`general_bound_pipeline_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Also require diameter ≤ 1 and apply the diameter bound.
    pub diameter: bool,
}

pub fn general_bound_pipeline<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<BoundReport> {
    general_bound_pipeline_with(s, tol, PipelineOptions::default())
}

/// Runs the chain verify → recentre → f-statistic → norm bounds → enclosing
/// radius → ball / sphere bound, recording each stage. A failing stage ends
/// the chain with `satisfied = false`.
pub fn general_bound_pipeline_with<T: Field>(
    s: &PointSet<T>,
    tol: &Tolerance,
    opts: PipelineOptions,
) -> Result<BoundReport> {
    require_almost_equidistant(s, tol)?;
    let d = s.dim();
    let n = s.len();
    let mut rep = BoundReport::template(
        Theorem::General,
        d,
        BoundParams::default(),
        Bound::ASYMPTOTIC,
    );
    rep.n_observed = Some(n);
    rep.stages.push(Stage::new(
        "verify",
        true,
        &[("n", n as f64), ("dim", d as f64)],
    ));

    let c = recenter_to_barycenter(s);
    rep.stages
        .push(Stage::new("recenter", is_centered(&c, tol), &[]));

    let f = f_statistic(&c);
    rep.stages.push(Stage::new(
        "f_statistic",
        true,
        &[
            ("f", f.value),
            ("f_full", f.full_value),
            ("argmax_index", f.argmax_index as f64),
        ],
    ));

    let nb = recentred_norm_bounds(&c, tol)?;
    let stage = Stage::new(
        "norm_bounds",
        nb.holds,
        &[
            ("max_deviation", nb.max_deviation),
            ("f_over_n_bound", nb.f_over_n_bound),
        ],
    );
    if !nb.holds {
        return Ok(halt(
            rep,
            stage.with_message("recentred norms exceed 3f/(2n)"),
        ));
    }
    rep.stages.push(stage);

    let mut bounds: Vec<usize> = Vec::new();

    if opts.diameter {
        match check_diameter(&c, tol) {
            Ok(dr) => {
                let ok = dr.satisfied == Some(true) && dr.detail["spectral_ok"] == 1.0;
                let stage = Stage::new(
                    "diameter_bound",
                    ok,
                    &[
                        ("bound", (2 * d + 4) as f64),
                        ("diameter", dr.detail["diameter"]),
                        ("lambda_sum", dr.detail["lambda_sum"]),
                    ],
                );
                if !ok {
                    return Ok(halt(rep, stage.with_message("diameter bound violated")));
                }
                bounds.push(2 * d + 4);
                rep.stages.push(stage);
            }
            Err(e) => {
                let stage = Stage::new("diameter_bound", false, &[]).with_message(e.to_string());
                return Ok(halt(rep, stage));
            }
        }
    }

    // enclosing radius: the norm estimate and the actual smallest ball
    let implied_excess = nb.f_over_n_bound;
    let ball = min_enclosing_ball(&c);
    let meb_excess = ball.radius_sq.to_f64() - 0.5;
    let excess = implied_excess.min(meb_excess).max(0.0);
    let c0 = excess * (d as f64 + 1.0).powf(2.0 / 3.0);
    let in_regime = c0 < 0.5;
    let mut values = vec![
        ("implied_radius_sq", 0.5 + implied_excess),
        ("enclosing_radius_sq", ball.radius_sq.to_f64()),
        ("c0", c0),
    ];
    if in_regime {
        let t = ball_bound_threshold(d, c0)?;
        let b = (t - 1).max(2 * d + 4);
        values.push(("threshold", t as f64));
        values.push(("bound", b as f64));
        bounds.push(b);
        rep.params.c0 = Some(c0);
    }
    rep.stages.push(Stage::new(
        "ball_bound",
        !in_regime || n <= *bounds.last().unwrap(),
        &values,
    ));

    if let Some(sphere) = circumsphere(&c, &T::tolerance(tol.dist_tol)) {
        let r = sphere.radius_sq.to_f64().max(0.0).sqrt();
        if r <= HALF_SQRT2 + tol.dist_tol && r > 0.0 {
            let sb = sphere_bound(d, r, tol)?;
            let b = sb.bound.finite().unwrap_or(usize::MAX);
            bounds.push(b);
            rep.params.radius = Some(r);
            rep.stages.push(Stage::new(
                "sphere_bound",
                n <= b,
                &[("radius", r), ("bound", b as f64)],
            ));
        }
    }

    // a spectral stage ties the ball branch to the eigenvalue count
    if let Ok(cert) = certify(&c, tol) {
        rep.stages.push(Stage::new(
            "spectral",
            cert.lemma1_holds,
            &[
                ("count_eq_one", cert.count_eq_one as f64),
                ("count_gt_one", cert.count_gt_one as f64),
            ],
        ));
    }

    if let Some(b) = bounds.into_iter().min() {
        rep.bound = Bound::Finite(b);
        rep.satisfied = Some(n <= b && rep.stages.iter().all(|s| s.passed));
    }
    for st in &rep.stages {
        for (k, v) in &st.values {
            rep.detail.insert(format!("{}.{}", st.name, k), *v);
        }
    }
    Ok(rep)
}

fn halt(mut rep: BoundReport, stage: Stage) -> BoundReport {
    rep.stages.push(stage);
    rep.satisfied = Some(false);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_rosenfeld, construct_simplex, construct_two_simplices};
    use crate::field::{parse_rational, Rational};

    #[test]
    fn sphere_bound_examples() {
        let tol = Tolerance::default();
        assert_eq!(sphere_bound(3, 0.5, &tol).unwrap().bound, Bound::Finite(8));
        assert_eq!(
            sphere_bound(3, HALF_SQRT2, &tol).unwrap().bound,
            Bound::Finite(6)
        );
        assert!(sphere_bound(2, 0.8, &tol).is_err());
        assert!(sphere_bound(2, 0.0, &tol).is_err());
    }

    #[test]
    fn diameter_bound_examples() {
        let r = diameter_bound(4).unwrap();
        assert_eq!(r.bound, Bound::Finite(12));
        assert_eq!(r.detail["conjectured_bound"], 7.0);
        let s = construct_simplex(5, 4).unwrap();
        let r = check_diameter(&s, &Tolerance::default()).unwrap();
        assert_eq!((r.n_observed, r.satisfied), (Some(5), Some(true)));
        assert_eq!(r.detail["spectral_ok"], 1.0);
    }

    #[test]
    fn diameter_check_rejects_wide_sets() {
        let s = PointSet::new(1, vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!(check_diameter(&s, &Tolerance::default()).is_err());
    }

    #[test]
    fn ball_threshold_at_zero_excess() {
        for d in 1..=50 {
            assert_eq!(ball_bound_threshold(d, 0.0).unwrap(), 2 * d + 2);
            assert_eq!(ball_bound(d, 0.0).unwrap().bound, Bound::Finite(2 * d + 4));
        }
    }

    #[test]
    fn ball_threshold_monotone_in_c0() {
        for d in [1, 5, 20, 100] {
            let t: Vec<usize> = [0.1, 0.25, 0.4]
                .iter()
                .map(|&c| ball_bound_threshold(d, c).unwrap())
                .collect();
            assert!(t[0] <= t[1] && t[1] <= t[2], "d={d}: {t:?}");
        }
        assert!(ball_bound_threshold(3, 0.5).is_err());
        assert!(ball_bound_threshold(3, -0.1).is_err());
    }

    #[test]
    fn f_statistic_examples() {
        let s = construct_simplex(4, 3).unwrap();
        let f = f_statistic(&s);
        assert!(f.value < 1e-14);
        assert!((f.full_value - 1.0).abs() < 1e-14);

        let s = PointSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let f = f_statistic(&s);
        assert_eq!(f.per_point_sums, vec![1.0, 1.0]);
        assert_eq!(f.value, 1.0);
    }

    #[test]
    fn f_statistic_matches_u_row_sums_exactly() {
        let q = |s: &str| parse_rational(s).unwrap();
        let s: PointSet<Rational> = PointSet::new(
            2,
            vec![
                vec![q("0"), q("0")],
                vec![q("1"), q("0")],
                vec![q("1"), q("1")],
                vec![q("1/3"), q("5/7")],
            ],
        )
        .unwrap();
        let f = f_statistic(&s);
        let rows = build_u(&s).row_sums();
        for (a, b) in f.per_point_sums.iter().zip(&rows) {
            assert_eq!(*a, b.to_f64());
        }
    }

    #[test]
    fn norm_bounds_on_constructions() {
        let tol = Tolerance::default();
        let s = construct_rosenfeld(4).unwrap();
        let nb = recentred_norm_bounds(&s, &tol).unwrap();
        assert!(nb.max_deviation < 1e-15 && nb.holds);

        let s = construct_simplex(4, 3).unwrap();
        let nb = recentred_norm_bounds(&s, &tol).unwrap();
        // |3/8 − 1/2| against 3·1/(2·4)
        assert!((nb.max_deviation - 0.125).abs() < 1e-15);
        assert!((nb.f_over_n_bound - 0.375).abs() < 1e-15);
        assert!(nb.holds);

        let off = PointSet::new(1, vec![vec![1.0], vec![2.0]]).unwrap();
        assert!(recentred_norm_bounds(&off, &tol).is_err());
    }

    #[test]
    fn lemma_end_trivial_case() {
        let tol = Tolerance::default();
        let s = construct_rosenfeld(3).unwrap();
        // in the aligned placement vertex 0 is at unit distance from its own
        // simplex only; the opposite copy contributes
        let r = lemma_end_check(&s, 0, 1e-3, &tol).unwrap();
        assert_eq!(r.discarded, 2);
        assert!(r.ratio.is_finite());

        let simplex = construct_simplex(3, 2).unwrap();
        let lifted =
            crate::constructions::lift_to_halfsphere(&simplex, (1.0f64 / 3.0).sqrt(), &tol)
                .unwrap();
        let r = lemma_end_check(&lifted, 0, 1e-3, &tol).unwrap();
        assert_eq!((r.lhs, r.discarded), (0.0, 2));
    }

    #[test]
    fn pipeline_on_two_simplices() {
        let tol = Tolerance::default();
        for d in 2..8 {
            let c = construct_two_simplices(d, &tol).unwrap();
            let r = general_bound_pipeline(&c.points, &tol).unwrap();
            assert_eq!(r.bound, Bound::Finite(2 * d + 2), "d={d}");
            assert_eq!(r.satisfied, Some(true));
        }
    }

    #[test]
    fn pipeline_on_unit_simplex() {
        let tol = Tolerance::default();
        let s = construct_simplex(4, 3).unwrap();
        let r = general_bound_pipeline(&s, &tol).unwrap();
        assert_eq!(r.satisfied, Some(true));
        assert!(r.bound.finite().unwrap() >= 4);
    }

    #[test]
    fn pipeline_diameter_stage_flags_wide_input() {
        let tol = Tolerance::default();
        let s = construct_rosenfeld(3).unwrap();
        let r = general_bound_pipeline_with(&s, &tol, PipelineOptions { diameter: true }).unwrap();
        let last = r.stages.last().unwrap();
        assert_eq!(last.name, "diameter_bound");
        assert!(!last.passed);
        assert_eq!(r.satisfied, Some(false));
    }
}
