//! Multistart penalty search for almost-equidistant configurations.
//!
//! The objective sums, over all triples, the smallest squared unit-distance
//! defect (|vᵢ − vⱼ|² − 1)² among the triple's three pairs, so it vanishes
//! exactly on almost-equidistant sets. Optional terms enforce diameter ≤ 1 or
//! a fixed sphere, and a separation term keeps points from merging (two
//! copies of a unit simplex would otherwise score zero).
//!
//! Each restart runs subgradient descent with a geometric step decay and
//! re-selects the active pair of every triple at each iteration, then
//! polishes with Levenberg–Marquardt on the selected unit pairs. Restarts
//! draw from ChaCha8 seeded with `seed`, stream = restart index, so results
//! do not depend on thread scheduling.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::conjectured_diameter_bound;
use crate::constructions::{construct_rosenfeld, construct_simplex, construct_two_simplices};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{is_almost_equidistant, FloatSet, PointSet, Tolerance};
use crate::spectral::{certify, SpectralCertificate};

/// Σ over triples of the smallest squared defect among the triple's pairs.
/// Zero for fewer than three points.
pub fn triple_penalty<T: Field>(s: &PointSet<T>) -> T {
    let n = s.len();
    let mut sq = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let e = s.sq_dist(i, j) - T::one();
            sq[i][j] = e.clone() * e;
        }
    }
    let mut total = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let m = [&sq[i][j], &sq[i][k], &sq[j][k]]
                    .into_iter()
                    .fold(sq[i][j].clone(), |m, x| if *x < m { x.clone() } else { m });
                total = total + m;
            }
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SearchConstraint {
    #[default]
    None,
    /// All pairwise distances at most 1.
    DiameterLeOne,
    /// All points on the origin-centred sphere of this radius.
    Sphere { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub initial: f64,
    #[serde(rename = "final")]
    pub final_step: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self {
            initial: 0.1,
            final_step: 1e-6,
        }
    }
}

impl StepSchedule {
    fn at(&self, iter: usize, max_iters: usize) -> f64 {
        if max_iters <= 1 {
            return self.initial;
        }
        let t = iter as f64 / (max_iters - 1) as f64;
        self.initial * (self.final_step / self.initial).powf(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub target_n: usize,
    pub restarts: usize,
    pub max_iters: usize,
    #[serde(default)]
    pub step_schedule: StepSchedule,
    pub penalty_tol: f64,
    pub seed: u64,
    #[serde(default)]
    pub constraint: SearchConstraint,
    /// Points closer than this are penalized.
    pub min_separation: f64,
    /// Descend on a softmin of the triple defects at this temperature.
    #[serde(default)]
    pub softmin_temperature: Option<f64>,
    /// Levenberg–Marquardt iterations per polishing round.
    pub polish_iters: usize,
}

impl SearchConfig {
    pub fn new(dim: usize, target_n: usize) -> Self {
        Self {
            dim,
            target_n,
            restarts: 16,
            max_iters: 2000,
            step_schedule: StepSchedule::default(),
            penalty_tol: 1e-18,
            seed: 0,
            constraint: SearchConstraint::None,
            min_separation: 0.05,
            softmin_temperature: None,
            polish_iters: 60,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::OutOfRange(m.to_string()));
        if self.dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if self.target_n == 0 {
            return bad("target_n must be positive");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if !(self.penalty_tol > 0.0 && self.penalty_tol.is_finite()) {
            return bad("penalty_tol must be positive");
        }
        let s = self.step_schedule;
        if !(s.initial > 0.0 && s.final_step > 0.0 && s.initial.is_finite()) {
            return bad("step sizes must be positive");
        }
        if !(self.min_separation >= 0.0 && self.min_separation < 1.0) {
            return bad("min_separation must lie in [0, 1)");
        }
        if let Some(t) = self.softmin_temperature {
            if !(t > 0.0) {
                return bad("softmin temperature must be positive");
            }
        }
        if let SearchConstraint::Sphere { radius } = self.constraint {
            if !(radius > 0.0 && radius.is_finite()) {
                return bad("sphere radius must be positive");
            }
        }
        Ok(())
    }

    /// Distance tolerance implied by the feasibility threshold: a triple
    /// penalty below `penalty_tol` bounds every selected defect by its root.
    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            dist_tol: self.penalty_tol.sqrt(),
            ..Tolerance::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    #[serde(serialize_with = "crate::io::serialize_point_set")]
    pub best_points: FloatSet,
    pub best_penalty: f64,
    pub feasible: bool,
    pub iterations_used: usize,
    pub best_restart: usize,
    pub certificate: Option<SpectralCertificate>,
}

struct Problem {
    n: usize,
    d: usize,
    constraint: SearchConstraint,
    sep_sq: f64,
    softmin: Option<f64>,
}

impl Problem {
    fn defects(&self, x: &[f64]) -> Vec<f64> {
        let (n, d) = (self.n, self.d);
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let s: f64 = (0..d).map(|k| (x[i * d + k] - x[j * d + k]).powi(2)).sum();
                e[i * n + j] = s - 1.0;
                e[j * n + i] = s - 1.0;
            }
        }
        e
    }

    /// Index of the pair with the smallest squared defect, first on ties.
    fn active(e: &[f64], n: usize, i: usize, j: usize, k: usize) -> (usize, usize) {
        let cands = [(i, j), (i, k), (j, k)];
        let mut best = cands[0];
        for &(a, b) in &cands[1..] {
            if e[a * n + b].powi(2) < e[best.0 * n + best.1].powi(2) {
                best = (a, b);
            }
        }
        best
    }

    /// Augmented penalty; fills the gradient when given.
    fn evaluate(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let (n, d) = (self.n, self.d);
        let e = self.defects(x);
        // coefficient c_ij with ∂P/∂v_i = Σ_j c_ij (v_i − v_j)
        let mut w = vec![0.0; n * n];
        let mut total = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (a, b) = Self::active(&e, n, i, j, k);
                    total += e[a * n + b].powi(2);
                    match self.softmin {
                        None => w[a * n + b] += 4.0 * e[a * n + b],
                        Some(tau) => {
                            let pairs = [(i, j), (i, k), (j, k)];
                            let q: Vec<f64> =
                                pairs.iter().map(|&(p, r)| e[p * n + r].powi(2)).collect();
                            let qmin = q.iter().cloned().fold(f64::INFINITY, f64::min);
                            let ws: Vec<f64> =
                                q.iter().map(|v| (-(v - qmin) / tau).exp()).collect();
                            let z: f64 = ws.iter().sum();
                            for (&(p, r), wt) in pairs.iter().zip(&ws) {
                                w[p * n + r] += wt / z * 4.0 * e[p * n + r];
                            }
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let ev = e[i * n + j];
                if self.constraint == SearchConstraint::DiameterLeOne && ev > 0.0 {
                    total += ev * ev;
                    w[i * n + j] += 4.0 * ev;
                }
                let gap = self.sep_sq - (ev + 1.0);
                if gap > 0.0 {
                    total += gap * gap;
                    w[i * n + j] -= 4.0 * gap;
                }
            }
        }
        let mut sphere = vec![0.0; n];
        if let SearchConstraint::Sphere { radius } = self.constraint {
            for (i, s) in sphere.iter_mut().enumerate() {
                let nrm: f64 = (0..d).map(|k| x[i * d + k].powi(2)).sum();
                *s = nrm - radius * radius;
                total += *s * *s;
            }
        }
        if let Some(g) = grad {
            g.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = w[i * n + j];
                    if c == 0.0 {
                        continue;
                    }
                    for k in 0..d {
                        let diff = x[i * d + k] - x[j * d + k];
                        g[i * d + k] += c * diff;
                        g[j * d + k] -= c * diff;
                    }
                }
                for k in 0..d {
                    g[i * d + k] += 4.0 * sphere[i] * x[i * d + k];
                }
            }
        }
        total
    }

    fn active_pairs(&self, x: &[f64]) -> Vec<(usize, usize)> {
        let n = self.n;
        let e = self.defects(x);
        let mut used = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (a, b) = Self::active(&e, n, i, j, k);
                    used[a * n + b] = true;
                }
            }
        }
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| used[i * n + j])
            .collect()
    }

    /// Residuals whose squared sum upper-bounds the penalty once the pairs
    /// in `unit` are the active ones.
    fn residuals(&self, x: &[f64], unit: &[(usize, usize)]) -> (DVector<f64>, DMatrix<f64>) {
        let (n, d) = (self.n, self.d);
        let diff = |i: usize, j: usize, k: usize| x[i * d + k] - x[j * d + k];
        let sq = |i: usize, j: usize| (0..d).map(|k| diff(i, j, k).powi(2)).sum::<f64>();
        let mut rows: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
        let pair_row = |i: usize, j: usize, scale: f64| -> Vec<(usize, f64)> {
            (0..d)
                .flat_map(|k| {
                    let g = 2.0 * scale * diff(i, j, k);
                    [(i * d + k, g), (j * d + k, -g)]
                })
                .collect()
        };
        for &(i, j) in unit {
            rows.push((sq(i, j) - 1.0, pair_row(i, j, 1.0)));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let s = sq(i, j);
                if self.constraint == SearchConstraint::DiameterLeOne {
                    let v = (s - 1.0).max(0.0);
                    rows.push((v, if v > 0.0 { pair_row(i, j, 1.0) } else { vec![] }));
                }
                let v = (self.sep_sq - s).max(0.0);
                rows.push((
                    v,
                    if v > 0.0 {
                        pair_row(i, j, -1.0)
                    } else {
                        vec![]
                    },
                ));
            }
        }
        if let SearchConstraint::Sphere { radius } = self.constraint {
            for i in 0..n {
                let nrm: f64 = (0..d).map(|k| x[i * d + k].powi(2)).sum();
                rows.push((
                    nrm - radius * radius,
                    (0..d).map(|k| (i * d + k, 2.0 * x[i * d + k])).collect(),
                ));
            }
        }
        let mut r = DVector::zeros(rows.len());
        let mut jac = DMatrix::zeros(rows.len(), n * d);
        for (row, (v, entries)) in rows.into_iter().enumerate() {
            r[row] = v;
            for (col, g) in entries {
                jac[(row, col)] += g;
            }
        }
        (r, jac)
    }

    /// Levenberg–Marquardt on the residuals for a fixed unit-pair set.
    fn polish(&self, x: &mut Vec<f64>, unit: &[(usize, usize)], iters: usize, tol: f64) -> usize {
        let mut mu = 1e-3;
        let mut used = 0;
        for _ in 0..iters {
            used += 1;
            let (r, jac) = self.residuals(x, unit);
            let cost = r.norm_squared();
            if cost <= tol * 1e-8 {
                break;
            }
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &r;
            let mut accepted = false;
            while mu < 1e12 {
                let mut a = jtj.clone();
                for k in 0..a.nrows() {
                    a[(k, k)] += mu;
                }
                let Some(chol) = a.cholesky() else {
                    mu *= 10.0;
                    continue;
                };
                let step = chol.solve(&(-&g));
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let (r2, _) = self.residuals(&trial, unit);
                if r2.norm_squared() < cost {
                    *x = trial;
                    mu = (mu / 3.0).max(1e-15);
                    accepted = true;
                    break;
                }
                mu *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        used
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Starting configuration for a restart: restart 0 and odd restarts start
/// from a construction (restart 0 unperturbed), even restarts from a
/// Gaussian cloud with E|v|² matching the constraint scale.
fn initial_points(cfg: &SearchConfig, restart: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (n, d) = (cfg.target_n, cfg.dim);
    let scale = match cfg.constraint {
        SearchConstraint::None => std::f64::consts::FRAC_1_SQRT_2,
        SearchConstraint::DiameterLeOne => 0.5,
        SearchConstraint::Sphere { radius } => radius,
    };
    let cloud = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..d)
            .map(|_| gaussian(rng) * scale / (d as f64).sqrt())
            .collect()
    };
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    if restart == 0 || restart % 2 == 1 {
        let tol = Tolerance::default();
        let base: Option<FloatSet> = match cfg.constraint {
            SearchConstraint::DiameterLeOne => construct_simplex(d + 1, d).ok(),
            _ if d >= 2 && n == 2 * d => construct_rosenfeld(d).ok(),
            _ if d >= 2 => construct_two_simplices(d, &tol).ok().map(|c| c.points),
            _ => construct_simplex(2, 1).ok(),
        };
        if let Some(b) = base {
            pts.extend(b.points().iter().take(n).cloned());
        }
        let sigma = if restart == 0 { 0.0 } else { 0.05 };
        for p in pts.iter_mut() {
            for v in p.iter_mut() {
                *v += sigma * gaussian(rng);
            }
        }
    }
    while pts.len() < n {
        pts.push(cloud(rng));
    }
    if let SearchConstraint::Sphere { radius } = cfg.constraint {
        for p in pts.iter_mut() {
            let nrm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm > 0.0 {
                p.iter_mut().for_each(|v| *v *= radius / nrm);
            }
        }
    }
    pts.into_iter().flatten().collect()
}

struct RestartOutcome {
    penalty: f64,
    x: Vec<f64>,
    iterations: usize,
}

fn run_restart(cfg: &SearchConfig, restart: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let prob = Problem {
        n: cfg.target_n,
        d: cfg.dim,
        constraint: cfg.constraint,
        sep_sq: cfg.min_separation * cfg.min_separation,
        softmin: cfg.softmin_temperature,
    };
    let mut x = initial_points(cfg, restart, &mut rng);
    let mut grad = vec![0.0; x.len()];
    let mut best = (prob.evaluate(&x, None), x.clone());
    let mut iterations = 0;
    for it in 0..cfg.max_iters {
        if best.0 <= cfg.penalty_tol {
            break;
        }
        iterations += 1;
        let p = prob.evaluate(&x, Some(&mut grad));
        if p < best.0 {
            best = (p, x.clone());
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt().max(1.0);
        let step = cfg.step_schedule.at(it, cfg.max_iters) / gnorm;
        for (v, g) in x.iter_mut().zip(&grad) {
            *v -= step * g;
        }
    }
    let p = prob.evaluate(&x, None);
    if p < best.0 {
        best = (p, x);
    }
    let (mut penalty, mut x) = best;
    // polish past the threshold so feasible outputs keep a margin
    for _ in 0..4 {
        if penalty <= cfg.penalty_tol * 1e-6 {
            break;
        }
        let unit = prob.active_pairs(&x);
        let mut trial = x.clone();
        iterations += prob.polish(&mut trial, &unit, cfg.polish_iters, cfg.penalty_tol);
        let p = prob.evaluate(&trial, None);
        if !(p < penalty) {
            break;
        }
        penalty = p;
        x = trial;
    }
    RestartOutcome {
        penalty,
        x,
        iterations,
    }
}

/// Runs every restart (in parallel) and keeps the lowest penalty, breaking
/// ties by restart index.
pub fn optimize(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(cfg, r))
        .collect();
    let (best_restart, best) = outcomes
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.penalty < a.1.penalty { b } else { a })
        .expect("at least one restart");
    let pts: Vec<Vec<f64>> = best.x.chunks(cfg.dim).map(<[f64]>::to_vec).collect();
    let best_points = PointSet::new(cfg.dim, pts)?;
    let feasible = best.penalty <= cfg.penalty_tol;
    let certificate = if feasible {
        certify(&best_points, &cfg.tolerance()).ok()
    } else {
        None
    };
    if feasible {
        debug_assert!(is_almost_equidistant(&best_points, &cfg.tolerance()).holds);
    }
    Ok(SearchResult {
        best_points,
        best_penalty: best.penalty,
        feasible,
        iterations_used: best.iterations,
        best_restart,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub feasible: bool,
    pub best_penalty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeTable {
    pub dim: usize,
    pub rows: Vec<ProbeRow>,
    pub largest_feasible: Option<usize>,
    pub conjectured: usize,
    pub theorem_bound: usize,
    #[serde(skip)]
    pub feasible_sets: Vec<FloatSet>,
}

/// Diameter-constrained searches for n from d + 1 to ⌊3(d+1)/2⌋ + 2,
/// reusing every budget field of `budget` except dimension, size and
/// constraint.
pub fn conjecture1_probe(d: usize, budget: &SearchConfig) -> Result<ProbeTable> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let conjectured = conjectured_diameter_bound(d);
    let mut rows = Vec::new();
    let mut feasible_sets = Vec::new();
    for n in (d + 1)..=(conjectured + 2) {
        let cfg = SearchConfig {
            dim: d,
            target_n: n,
            constraint: SearchConstraint::DiameterLeOne,
            ..budget.clone()
        };
        let res = optimize(&cfg)?;
        if res.feasible {
            feasible_sets.push(res.best_points.clone());
        }
        rows.push(ProbeRow {
            n,
            feasible: res.feasible,
            best_penalty: res.best_penalty,
        });
    }
    let largest_feasible = rows.iter().filter(|r| r.feasible).map(|r| r.n).max();
    Ok(ProbeTable {
        dim: d,
        rows,
        largest_feasible,
        conjectured,
        theorem_bound: 2 * d + 4,
        feasible_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_rational, Rational};

    #[test]
    fn penalty_examples() {
        let h = 3f64.sqrt() / 2.0;
        let tri = PointSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]).unwrap();
        assert!(triple_penalty(&tri) < 1e-30);

        // standard basis of R³: pairwise squared distances 2, 2, 2
        let s = PointSet::new(
            3,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
        )
        .unwrap();
        assert_eq!(triple_penalty(&s), 1.0);

        let two = PointSet::new(1, vec![vec![0.0], vec![5.0]]).unwrap();
        assert_eq!(triple_penalty(&two), 0.0);
    }

    #[test]
    fn exact_penalty_is_zero_iff_almost_equidistant() {
        let q = |s: &str| parse_rational(s).unwrap();
        let ok: PointSet<Rational> = PointSet::new(
            1,
            vec![vec![q("0")], vec![q("1")], vec![q("2")], vec![q("3")]],
        )
        .unwrap();
        assert_eq!(triple_penalty(&ok), Rational::from_int(0));
        let bad: PointSet<Rational> =
            PointSet::new(1, vec![vec![q("0")], vec![q("2")], vec![q("4")]]).unwrap();
        assert!(triple_penalty(&bad) > Rational::from_int(0));
    }

    #[test]
    fn seeded_search_is_immediately_feasible() {
        let mut cfg = SearchConfig::new(2, 6);
        cfg.restarts = 1;
        let r = optimize(&cfg).unwrap();
        assert!(r.feasible);
        assert_eq!(r.iterations_used, 0);
        assert!(r.certificate.unwrap().lemma1_holds);
    }

    #[test]
    fn infeasible_is_a_result() {
        let mut cfg = SearchConfig::new(2, 10);
        cfg.restarts = 2;
        cfg.max_iters = 200;
        let r = optimize(&cfg).unwrap();
        assert!(!r.feasible);
        assert!(r.certificate.is_none());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SearchConfig::new(2, 5);
        cfg.restarts = 0;
        assert!(optimize(&cfg).is_err());
        let mut cfg = SearchConfig::new(2, 5);
        cfg.penalty_tol = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let cfg = SearchConfig::new(2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = initial_points(&cfg, 2, &mut rng);
        for constraint in [
            SearchConstraint::None,
            SearchConstraint::DiameterLeOne,
            SearchConstraint::Sphere { radius: 0.6 },
        ] {
            let prob = Problem {
                n: 5,
                d: 2,
                constraint,
                sep_sq: 0.3,
                softmin: None,
            };
            let mut g = vec![0.0; x.len()];
            prob.evaluate(&x, Some(&mut g));
            for k in 0..x.len() {
                let h = 1e-6;
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let fd = (prob.evaluate(&xp, None) - prob.evaluate(&xm, None)) / (2.0 * h);
                assert!(
                    (fd - g[k]).abs() < 1e-5 * (1.0 + fd.abs()),
                    "{constraint:?} {k}: {fd} vs {}",
                    g[k]
                );
            }
        }
    }
}
