//! Point sets, the almost-equidistant predicate and geometric summaries.

mod ball;

pub use ball::{circumsphere, min_enclosing_ball, Ball};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Mode, Rational};

/// Comparison thresholds. Both are zero in exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Allowed deviation of a squared distance from 1 for a "unit" pair.
    pub dist_tol: f64,
    /// Threshold for eigenvalue equality.
    pub eig_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            dist_tol: 1e-9,
            eig_tol: 1e-8,
        }
    }
}

impl Tolerance {
    pub const fn exact() -> Self {
        Self {
            dist_tol: 0.0,
            eig_tol: 0.0,
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Float => Self::default(),
            Mode::Exact => Self::exact(),
        }
    }

    pub fn validate(&self, mode: Mode) -> Result<()> {
        let ok = match mode {
            Mode::Float => {
                self.dist_tol > 0.0
                    && self.eig_tol > 0.0
                    && self.dist_tol.is_finite()
                    && self.eig_tol.is_finite()
            }
            Mode::Exact => self.dist_tol == 0.0 && self.eig_tol == 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "tolerances {self:?} invalid for {mode:?} mode"
            )))
        }
    }
}

/// A finite set of points in R^dim, over floats or exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    points: Vec<Vec<T>>,
}

pub type FloatSet = PointSet<f64>;
pub type ExactSet = PointSet<Rational>;

impl<T: Field> PointSet<T> {
    pub fn new(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Ragged {
                    row,
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.points[i]
    }

    pub fn into_points(self) -> Vec<Vec<T>> {
        self.points
    }

    pub fn to_float(&self) -> FloatSet {
        PointSet {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(Field::to_f64).collect())
                .collect(),
        }
    }

    pub fn sq_dist(&self, i: usize, j: usize) -> T {
        sq_dist(&self.points[i], &self.points[j])
    }

    pub fn sq_norm(&self, i: usize) -> T {
        self.points[i]
            .iter()
            .fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    /// Maps every point through `f`, keeping the dimension of the result.
    pub fn map_points(&self, dim: usize, f: impl Fn(&[T]) -> Vec<T>) -> Result<Self> {
        Self::new(dim, self.points.iter().map(|p| f(p)).collect())
    }
}

#[inline]
fn sq_dist<T: Field>(p: &[T], q: &[T]) -> T {
    p.iter().zip(q).fold(T::zero(), |acc, (a, b)| {
        let d = a.clone() - b.clone();
        acc + d.clone() * d
    })
}

/// Squared Euclidean distance between two coordinate vectors.
pub fn squared_distance<T: Field>(p: &[T], q: &[T]) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(sq_dist(p, q))
}

/// True when a squared distance counts as a unit distance under `tol`.
#[inline]
pub fn is_unit<T: Field>(sq: &T, tol: &T) -> bool {
    (sq.clone() - T::one()).abs() <= *tol
}

/// Outcome of a predicate with an optional offending triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<[usize; 3]>,
}

impl Verdict {
    pub fn from_witness(witness: Option<[usize; 3]>) -> Self {
        Self {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Dense adjacency bitsets; `find_triangle` reports the lexicographically
/// first triangle.
pub(crate) struct BitGraph {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitGraph {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            words,
            rows: vec![vec![0; words]; n],
        }
    }

    pub(crate) fn add_edge(&mut self, i: usize, j: usize) {
        self.rows[i][j / 64] |= 1 << (j % 64);
        self.rows[j][i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    fn common_above(&self, i: usize, j: usize) -> Option<usize> {
        // first k > j adjacent to both i and j
        let start = j + 1;
        for w in start / 64..self.words {
            let mut bits = self.rows[i][w] & self.rows[j][w];
            if w == start / 64 {
                let shift = start % 64;
                bits &= if shift == 0 { !0 } else { !0u64 << shift };
            }
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
        }
        None
    }

    pub(crate) fn find_triangle(&self) -> Option<[usize; 3]> {
        let n = self.rows.len();
        (0..n).into_par_iter().find_map_first(|i| {
            ((i + 1)..n)
                .filter(|&j| self.has_edge(i, j))
                .find_map(|j| self.common_above(i, j).map(|k| [i, j, k]))
        })
    }
}

/// Checks that every triple of distinct points contains a unit-distance pair.
///
/// Equivalent to the complement of the unit-distance graph being
/// triangle-free; the first offending triple is returned as a witness.
pub fn is_almost_equidistant<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Verdict {
    let n = s.len();
    let dt = T::tolerance(tol.dist_tol);
    let mut non_unit = BitGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if !is_unit(&s.sq_dist(i, j), &dt) {
                non_unit.add_edge(i, j);
            }
        }
    }
    Verdict::from_witness(non_unit.find_triangle())
}

/// Errors with [`Error::NotAlmostEquidistant`] when the predicate fails.
pub fn require_almost_equidistant<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> Result<()> {
    match is_almost_equidistant(s, tol).witness {
        None => Ok(()),
        Some(witness) => Err(Error::NotAlmostEquidistant { witness }),
    }
}

/// Coordinate-wise mean of the points.
pub fn barycenter<T: Field>(s: &PointSet<T>) -> Vec<T> {
    let n = T::from_int(s.len() as i64);
    let mut acc = vec![T::zero(); s.dim()];
    for p in s.points() {
        for (a, x) in acc.iter_mut().zip(p) {
            *a = a.clone() + x.clone();
        }
    }
    acc.into_iter().map(|a| a / n.clone()).collect()
}

/// Translates the set so its barycenter is the origin.
pub fn recenter_to_barycenter<T: Field>(s: &PointSet<T>) -> PointSet<T> {
    let b = barycenter(s);
    PointSet {
        dim: s.dim(),
        points: s
            .points()
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&b)
                    .map(|(x, c)| x.clone() - c.clone())
                    .collect()
            })
            .collect(),
    }
}

/// True when the barycenter is the origin (within `n * dist_tol` per
/// coordinate in floating mode, exactly in exact mode).
pub fn is_centered<T: Field>(s: &PointSet<T>, tol: &Tolerance) -> bool {
    let slack = T::tolerance(tol.dist_tol * s.len() as f64);
    barycenter(s).iter().all(|c| c.abs() <= slack)
}

/// Diameter, minimum enclosing ball and barycenter of a set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub diameter: f64,
    pub mer_center: Vec<f64>,
    pub mer_radius: f64,
    pub barycenter: Vec<f64>,
}

pub fn max_sq_dist<T: Field>(s: &PointSet<T>) -> T {
    let n = s.len();
    let mut best = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            best = T::max_of(best, s.sq_dist(i, j));
        }
    }
    best
}

pub fn summarize<T: Field>(s: &PointSet<T>) -> GeometrySummary {
    let ball = min_enclosing_ball(s);
    GeometrySummary {
        diameter: max_sq_dist(s).to_f64().sqrt(),
        mer_center: ball.center.iter().map(Field::to_f64).collect(),
        mer_radius: ball.radius_sq.to_f64().max(0.0).sqrt(),
        barycenter: barycenter(s).iter().map(Field::to_f64).collect(),
    }
}

/// Both sides of the barycenter identity
/// `Σ_{i,j}|x_i−y_j|² = Σ_{i<j}|x_i−x_j|² + Σ_{i<j}|y_i−y_j|² + n²|x̄−ȳ|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual<T> {
    pub cross_sum: T,
    pub residual: T,
}

impl<T: Field> IdentityResidual<T> {
    /// Residual relative to the magnitude of the cross sum (at least 1).
    pub fn relative(&self) -> f64 {
        self.residual.to_f64() / self.cross_sum.to_f64().abs().max(1.0)
    }
}

pub fn barycenter_identity_check<T: Field>(
    x: &PointSet<T>,
    y: &PointSet<T>,
) -> Result<IdentityResidual<T>> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch(format!(
            "cardinalities {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let n = x.len();
    let mut cross = T::zero();
    for p in x.points() {
        for q in y.points() {
            cross = cross + sq_dist(p, q);
        }
    }
    let within = |s: &PointSet<T>| {
        let mut acc = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                acc = acc + s.sq_dist(i, j);
            }
        }
        acc
    };
    let nn = T::from_int((n * n) as i64);
    let rhs = within(x) + within(y) + nn * sq_dist(&barycenter(x), &barycenter(y));
    Ok(IdentityResidual {
        residual: (cross.clone() - rhs).abs(),
        cross_sum: cross,
    })
}
