//! Minimum enclosing ball and circumspheres.
//!
//! The enclosing ball is computed with the pivoting walk of Fischer, Gärtner
//! and Kutz: keep a ball that encloses every point with an affinely
//! independent support set on its boundary, move the centre towards the
//! circumcentre of the support until another point blocks the move, and drop
//! support points with negative affine weight once the circumcentre is
//! reached. Every step is a rational operation, so the same code is exact over
//! rationals and accurate to rounding over floats.

use serde::Serialize;

use super::{sq_dist, PointSet};
use crate::field::Field;
use crate::matrix::solve_consistent;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius_sq: T,
}

/// Circumcentre of `support` within its affine hull, with the affine weights
/// of that centre with respect to the support points.
fn affine_circumcenter<T: Field>(support: &[&[T]]) -> (Vec<T>, Vec<T>) {
    let q0 = support[0];
    let m = support.len() - 1;
    if m == 0 {
        return (q0.to_vec(), vec![T::one()]);
    }
    let diffs: Vec<Vec<T>> = support[1..]
        .iter()
        .map(|q| {
            q.iter()
                .zip(q0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect();
    let dot = |a: &[T], b: &[T]| {
        a.iter()
            .zip(b)
            .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    };
    let two = T::from_int(2);
    let gram: Vec<Vec<T>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| two.clone() * dot(&diffs[i], &diffs[j]))
                .collect()
        })
        .collect();
    let rhs: Vec<T> = diffs.iter().map(|d| dot(d, d)).collect();
    let alpha = solve_consistent(gram, rhs);

    let mut center = q0.to_vec();
    for (a, d) in alpha.iter().zip(&diffs) {
        for (c, x) in center.iter_mut().zip(d) {
            *c = c.clone() + a.clone() * x.clone();
        }
    }
    let first = alpha.iter().fold(T::one(), |acc, a| acc - a.clone());
    let mut weights = Vec::with_capacity(m + 1);
    weights.push(first);
    weights.extend(alpha);
    (center, weights)
}

/// Smallest ball containing every point of `s`.
pub fn min_enclosing_ball<T: Field>(s: &PointSet<T>) -> Ball<T> {
    let pts = s.points();
    let n = pts.len();
    let mut center = pts[0].clone();
    let far = (0..n)
        .max_by(|&a, &b| {
            sq_dist(&center, &pts[a])
                .partial_cmp(&sq_dist(&center, &pts[b]))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let mut support = vec![far];
    let mut at_circumcenter = false;
    let cap = 64 * (n + s.dim()) + 1024;
    let scale = super::max_sq_dist(s);

    for _ in 0..cap {
        let refs: Vec<&[T]> = support.iter().map(|&i| pts[i].as_slice()).collect();
        let (target, weights) = affine_circumcenter(&refs);

        if at_circumcenter {
            let (worst, w) = weights
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
                .map(|(i, w)| (i, w.clone()))
                .expect("support is never empty");
            if w >= -T::tolerance(1e-12) || support.len() == 1 {
                break;
            }
            support.remove(worst);
            at_circumcenter = false;
            continue;
        }

        let delta: Vec<T> = target
            .iter()
            .zip(&center)
            .map(|(t, c)| t.clone() - c.clone())
            .collect();
        let q0 = &pts[support[0]];
        let q0_sq = sq_dist(q0, &center);
        let mut best_t = T::one();
        let mut stopper = None;
        for (p_idx, p) in pts.iter().enumerate() {
            if support.contains(&p_idx) {
                continue;
            }
            // moving along delta keeps support points equidistant; p hits the
            // boundary at t = (|q0−c|² − |p−c|²) / (2 (q0−p)·delta)
            let denom = q0
                .iter()
                .zip(p)
                .zip(&delta)
                .fold(T::zero(), |acc, ((a, b), d)| {
                    acc + (a.clone() - b.clone()) * d.clone()
                })
                * T::from_int(2);
            if denom <= T::zero() || denom.negligible(&scale) {
                continue;
            }
            let num = q0_sq.clone() - sq_dist(p, &center);
            let t = T::max_of(num / denom, T::zero());
            if t < best_t {
                best_t = t;
                stopper = Some(p_idx);
            }
        }
        match stopper {
            None => {
                center = target;
                at_circumcenter = true;
            }
            Some(p_idx) => {
                for (c, d) in center.iter_mut().zip(&delta) {
                    *c = c.clone() + best_t.clone() * d.clone();
                }
                support.push(p_idx);
            }
        }
    }
    if !at_circumcenter {
        log::warn!("enclosing-ball walk hit its iteration cap; result may not be minimal");
    }

    // radius from every point so the ball encloses the set even after rounding
    let radius_sq = pts
        .iter()
        .fold(T::zero(), |acc, p| T::max_of(acc, sq_dist(p, &center)));
    Ball { center, radius_sq }
}

/// Sphere through every point of `s`, centred in their affine hull, if the
/// points are cospherical within `tol` on squared radii.
pub fn circumsphere<T: Field>(s: &PointSet<T>, tol: &T) -> Option<Ball<T>> {
    let refs: Vec<&[T]> = s.points().iter().map(Vec::as_slice).collect();
    let (center, _) = affine_circumcenter(&refs);
    let r0 = sq_dist(&center, refs[0]);
    let cospherical = refs
        .iter()
        .all(|p| (sq_dist(&center, p) - r0.clone()).abs() <= *tol);
    cospherical.then_some(Ball {
        center,
        radius_sq: r0,
    })
}
