//! Deterministic generators for extremal almost-equidistant configurations.
//!
//! All constructions need square roots and therefore live in floating mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{recenter_to_barycenter, FloatSet, PointSet, Tolerance};

/// Which configuration to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConstructionKind {
    /// A unit simplex with `k` vertices.
    Simplex { k: usize },
    /// A unit d-simplex together with its antipodal image.
    TwoSimplices,
    /// Two unit (d−1)-simplices on the sphere of radius 1/√2.
    Rosenfeld,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    #[serde(flatten)]
    pub kind: ConstructionKind,
    pub dim: usize,
    /// Lift the result onto the radius-1/√2 sphere one dimension up.
    #[serde(default)]
    pub lift: bool,
}

/// A generated point set plus any caveats about degenerate parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub points: FloatSet,
    pub warnings: Vec<String>,
}

impl ConstructionSpec {
    pub fn build(&self, tol: &Tolerance) -> Result<Construction> {
        let (points, mut warnings) = match self.kind {
            ConstructionKind::Simplex { k } => (construct_simplex(k, self.dim)?, vec![]),
            ConstructionKind::TwoSimplices => {
                let c = construct_two_simplices(self.dim, tol)?;
                (c.points, c.warnings)
            }
            ConstructionKind::Rosenfeld => (construct_rosenfeld(self.dim)?, vec![]),
        };
        if !self.lift {
            return Ok(Construction { points, warnings });
        }
        let r = points.sq_norm(0).sqrt();
        let lifted = lift_to_halfsphere(&points, r, tol)?;
        if r == std::f64::consts::FRAC_1_SQRT_2 {
            warnings.push("input already on the radius-1/sqrt(2) sphere; lift only embeds".into());
        }
        Ok(Construction {
            points: lifted,
            warnings,
        })
    }
}

/// Squared circumradius (k − 1) / (2k) of a unit simplex with k vertices.
pub fn simplex_circumradius_sq(k: usize) -> f64 {
    (k as f64 - 1.0) / (2.0 * k as f64)
}

/// `k` points in R^d, pairwise at unit distance and centred at the origin.
///
/// Vertex i is placed above the centroid of the previous i vertices along the
/// i-th axis, so it has i nonzero leading coordinates before recentring.
pub fn construct_simplex(k: usize, d: usize) -> Result<FloatSet> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if k == 0 || k > d + 1 {
        return Err(Error::OutOfRange(format!(
            "a unit simplex with {k} vertices does not fit in R^{d}"
        )));
    }
    let mut pts: Vec<Vec<f64>> = vec![vec![0.0; d]];
    for i in 1..k {
        let mut c = vec![0.0; d];
        for p in &pts {
            for (a, x) in c.iter_mut().zip(p) {
                *a += x / i as f64;
            }
        }
        c[i - 1] += (1.0 - simplex_circumradius_sq(i)).sqrt();
        pts.push(c);
    }
    Ok(recenter_to_barycenter(&PointSet::new(d, pts)?))
}

/// A centred unit d-simplex and its antipodal image: 2d + 2 points on the
/// sphere of radius sqrt(d / (2(d + 1))).
///
/// In R¹ the antipodal image of the unit segment is the segment itself and no
/// rotation is available, so only the 2 distinct points are returned, with a
/// warning.
pub fn construct_two_simplices(d: usize, tol: &Tolerance) -> Result<Construction> {
    let first = construct_simplex(d + 1, d)?;
    let collides = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter().any(|p| {
            b.iter().any(|q| {
                p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() <= tol.dist_tol
            })
        })
    };
    let mut second: Vec<Vec<f64>> = first
        .points()
        .iter()
        .map(|p| p.iter().map(|x| -x).collect())
        .collect();
    let mut warnings = Vec::new();
    if collides(first.points(), &second) {
        if d == 1 {
            warnings.push(
                "d = 1: the antipodal segment coincides with the first; \
                 2d + 2 = 4 points are not realizable by this recipe in R^1"
                    .to_string(),
            );
            return Ok(Construction {
                points: first,
                warnings,
            });
        }
        let angle = std::f64::consts::PI / (d as f64 + 1.0);
        let (c, s) = (angle.cos(), angle.sin());
        for p in second.iter_mut() {
            let (x, y) = (p[0], p[1]);
            p[0] = c * x - s * y;
            p[1] = s * x + c * y;
        }
        if collides(first.points(), &second) {
            return Err(Error::Precondition(
                "rotated second simplex still collides".into(),
            ));
        }
        warnings.push(format!("antipodal copy collided; rotated by pi/{}", d + 1));
    }
    let mut pts = first.into_points();
    pts.extend(second);
    Ok(Construction {
        points: PointSet::new(d, pts)?,
        warnings,
    })
}

/// Two unit (d−1)-simplices at heights ±sqrt(1/(2d)) along the last axis:
/// 2d points on the sphere of radius 1/√2.
pub fn construct_rosenfeld(d: usize) -> Result<FloatSet> {
    if d < 2 {
        return Err(Error::OutOfRange(format!(
            "rosenfeld needs d >= 2, got {d}"
        )));
    }
    let base = construct_simplex(d, d - 1)?;
    let h = (0.5 - simplex_circumradius_sq(d)).sqrt();
    let mut pts = Vec::with_capacity(2 * d);
    for sign in [1.0, -1.0] {
        for p in base.points() {
            let mut q = p.clone();
            q.push(sign * h);
            pts.push(q);
        }
    }
    PointSet::new(d, pts)
}

/// Appends the constant coordinate sqrt(1/2 − r²) to every point of a set
/// lying on the origin-centred sphere of radius r ≤ 1/√2. Distances are
/// unchanged and the image lies on the radius-1/√2 sphere in R^{d+1}.
pub fn lift_to_halfsphere(s: &FloatSet, r: f64, tol: &Tolerance) -> Result<FloatSet> {
    if !(r >= 0.0) || r * r > 0.5 + tol.dist_tol {
        return Err(Error::OutOfRange(format!("radius {r} exceeds 1/sqrt(2)")));
    }
    let r2 = r * r;
    for i in 0..s.len() {
        let dev = (s.sq_norm(i) - r2).abs();
        if dev > tol.dist_tol {
            return Err(Error::Precondition(format!(
                "point {i} is not on the sphere of radius {r} (squared-norm deviation {dev:e})"
            )));
        }
    }
    let h = (0.5 - r2).max(0.0).sqrt();
    s.map_points(s.dim() + 1, |p| {
        let mut q = p.to_vec();
        q.push(h);
        q
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_almost_equidistant;

    fn assert_unit_simplex(s: &FloatSet) {
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                assert!((s.sq_dist(i, j) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn simplex_examples() {
        let s = construct_simplex(2, 1).unwrap();
        assert_eq!(s.points(), &[vec![-0.5], vec![0.5]]);

        let s = construct_simplex(3, 2).unwrap();
        assert_unit_simplex(&s);
        for i in 0..3 {
            assert!((s.sq_norm(i) - 1.0 / 3.0).abs() < 1e-15);
        }

        assert!(construct_simplex(5, 3).is_err());
        assert!(construct_simplex(0, 3).is_err());
    }

    #[test]
    fn simplex_in_higher_ambient_dimension() {
        let s = construct_simplex(4, 9).unwrap();
        assert_eq!(s.dim(), 9);
        assert_unit_simplex(&s);
        for i in 0..4 {
            assert!((s.sq_norm(i) - simplex_circumradius_sq(4)).abs() < 1e-15);
        }
    }

    #[test]
    fn two_simplices_small_dimensions() {
        let tol = Tolerance::default();
        let c = construct_two_simplices(1, &tol).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.warnings.len(), 1);

        let c = construct_two_simplices(2, &tol).unwrap();
        assert_eq!(c.points.len(), 6);
        assert!(c.warnings.is_empty());
        assert!(is_almost_equidistant(&c.points, &tol).holds);
        for i in 0..6 {
            assert!((c.points.sq_norm(i) - 1.0 / 3.0).abs() < 1e-15);
        }

        let c = construct_two_simplices(3, &tol).unwrap();
        assert_eq!(c.points.len(), 8);
        for i in 0..8 {
            assert!((c.points.sq_norm(i).sqrt() - 0.612_372_435_695_794_5).abs() < 1e-12);
        }
    }

    #[test]
    fn rosenfeld_examples() {
        let s = construct_rosenfeld(2).unwrap();
        assert_eq!(s.len(), 4);
        // two unit segments at heights ±1/2: a unit square
        for p in s.points() {
            assert!((p[1].abs() - 0.5).abs() < 1e-15);
        }
        let s = construct_rosenfeld(3).unwrap();
        for p in s.points() {
            assert!((p[2].abs() - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
            assert!((p.iter().map(|x| x * x).sum::<f64>() - 0.5).abs() < 1e-15);
        }
        assert!(construct_rosenfeld(1).is_err());
    }

    #[test]
    fn lift_examples() {
        let tol = Tolerance::default();
        let s = construct_rosenfeld(3).unwrap();
        let lifted = lift_to_halfsphere(&s, std::f64::consts::FRAC_1_SQRT_2, &tol).unwrap();
        assert_eq!(lifted.dim(), 4);
        assert!(lifted.points().iter().all(|p| p[3] == 0.0));

        let one = PointSet::new(2, vec![vec![0.3, 0.4]]).unwrap();
        let lifted = lift_to_halfsphere(&one, 0.5, &tol).unwrap();
        assert!((lifted.sq_norm(0) - 0.5).abs() < 1e-15);

        assert!(lift_to_halfsphere(&one, 0.8, &tol).is_err());
        assert!(lift_to_halfsphere(&one, 0.4, &tol).is_err());
    }

    #[test]
    fn spec_builder_with_lift() {
        let spec = ConstructionSpec {
            kind: ConstructionKind::TwoSimplices,
            dim: 3,
            lift: true,
        };
        let c = spec.build(&Tolerance::default()).unwrap();
        assert_eq!((c.points.len(), c.points.dim()), (8, 4));
        for i in 0..8 {
            assert!((c.points.sq_norm(i) - 0.5).abs() < 1e-12);
        }
    }
}
