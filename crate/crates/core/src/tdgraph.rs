//! Two-distance almost-equidistant sets and triangle-free graphs.
//!
//! If every distance in an almost-equidistant set is 1 or a > 1, then
//! U/(a² − 1) is the adjacency matrix of the a-distance graph, which is
//! triangle-free. This module builds that graph and studies the rank of
//! A − λ₂I over triangle-free graphs, where λ₂ is the second largest
//! adjacency eigenvalue.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rational_from_f64_exact, Field, Rational};
use crate::geometry::{BitGraph, PointSet, Tolerance};
use crate::matrix::Matrix;
use crate::poly::{char_poly, Poly};
use crate::spectral::eigenvalues;

/// Simple undirected graph with edges stored as sorted pairs `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::Precondition(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::OutOfRange(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self { n, edges: norm })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: vec![] }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a)
            .flat_map(|i| (a..a + b).map(move |j| (i, j)))
            .collect();
        Self { n: a + b, edges }
    }

    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, e).expect("valid petersen edges")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn complement(&self) -> Self {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.edges.binary_search(&(i, j)).is_err() {
                    edges.push((i, j));
                }
            }
        }
        Self { n: self.n, edges }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        Self::new(
            self.n,
            self.edges
                .iter()
                .map(|&(u, v)| (perm[u], perm[v]))
                .collect(),
        )
    }

    pub fn adjacency<T: Field>(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n);
        for &(u, v) in &self.edges {
            m.set(u, v, T::one());
            m.set(v, u, T::one());
        }
        m
    }

    fn bits(&self) -> BitGraph {
        let mut b = BitGraph::new(self.n);
        for &(u, v) in &self.edges {
            b.add_edge(u, v);
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCheck {
    pub triangle_free: bool,
    /// Lexicographically first triangle when one exists.
    pub witness: Option<[usize; 3]>,
}

pub fn is_triangle_free(g: &Graph) -> TriangleCheck {
    let witness = g.bits().find_triangle();
    TriangleCheck {
        triangle_free: witness.is_none(),
        witness,
    }
}

/// Graph of the pairs at distance `a` in a set whose distances are all 1 or `a`.
pub fn two_distance_to_graph<T: Field>(s: &PointSet<T>, a: f64, tol: &Tolerance) -> Result<Graph> {
    if !(a > 1.0) {
        return Err(Error::OutOfRange(format!(
            "second distance a = {a} must exceed 1"
        )));
    }
    let a_sq = T::from_f64(a * a).ok_or_else(|| Error::OutOfRange(format!("a = {a}")))?;
    let dt = T::tolerance(tol.dist_tol);
    let at = T::tolerance(tol.dist_tol * a * a);
    let mut edges = Vec::new();
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let sq = s.sq_dist(i, j);
            if (sq.clone() - T::one()).abs() <= dt {
                continue;
            }
            if (sq.clone() - a_sq.clone()).abs() <= at {
                edges.push((i, j));
            } else {
                return Err(Error::Precondition(format!(
                    "pair ({i}, {j}) at distance {} is neither 1 nor {a}",
                    sq.to_f64().sqrt()
                )));
            }
        }
    }
    let g = Graph::new(s.len(), edges)?;
    if let Some(witness) = is_triangle_free(&g).witness {
        return Err(Error::NotAlmostEquidistant { witness });
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRankRecord {
    pub graph: Graph,
    pub lambda2: f64,
    /// Exact multiplicity when computed, otherwise the numerical cluster size.
    pub multiplicity: usize,
    pub rank: usize,
    pub lambda2_positive: bool,
    pub numeric_multiplicity: usize,
    pub exact_multiplicity: Option<usize>,
}

/// Second largest adjacency eigenvalue, its multiplicity and rank(A − λ₂I).
///
/// With `exact`, the multiplicity is recomputed from the square-free
/// decomposition of the integer characteristic polynomial by Sturm counts
/// on a rational interval that isolates λ₂.
pub fn lambda2_rank(g: &Graph, tol: &Tolerance, exact: bool) -> Result<GraphRankRecord> {
    let n = g.n();
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "need at least 2 vertices, got {n}"
        )));
    }
    let eig_tol = tol.eig_tol.max(1e-12);
    let spec = eigenvalues(&g.adjacency::<f64>(), eig_tol)?;
    let lambda2 = spec.values[1];
    let numeric = spec
        .values
        .iter()
        .filter(|v| (*v - lambda2).abs() <= eig_tol)
        .count();
    let exact_multiplicity = if exact {
        Some(exact_multiplicity(g, &spec.values)?)
    } else {
        None
    };
    let multiplicity = exact_multiplicity.unwrap_or(numeric);
    Ok(GraphRankRecord {
        graph: g.clone(),
        lambda2,
        multiplicity,
        rank: n - multiplicity,
        lambda2_positive: lambda2 > eig_tol,
        numeric_multiplicity: numeric,
        exact_multiplicity,
    })
}

fn roots_with_multiplicity(
    factors: &[(Poly, usize)],
    lo: &Rational,
    hi: &Rational,
) -> (usize, usize) {
    factors.iter().fold((0, 0), |(distinct, total), (f, k)| {
        let c = f.count_distinct_roots(lo, hi);
        (distinct + c, total + c * k)
    })
}

fn exact_multiplicity(g: &Graph, values: &[f64]) -> Result<usize> {
    let n = g.n();
    let p = char_poly(&g.adjacency::<Rational>());
    let factors = p.square_free_decomposition();
    // all eigenvalues of a 0/1 matrix lie in [−n, n]
    let top = Rational::from_int(n as i64 + 1);
    let lambda2 = values[1];
    let mut eps = 1e-4;
    for _ in 0..12 {
        let lo = rational_from_f64_exact(lambda2 - eps).expect("finite");
        let hi = rational_from_f64_exact(lambda2 + eps).expect("finite");
        let (distinct, inside) = roots_with_multiplicity(&factors, &lo, &hi);
        let (_, above) = roots_with_multiplicity(&factors, &hi, &top);
        if distinct == 1 && above <= 1 && above + inside >= 2 {
            return Ok(inside);
        }
        eps /= 16.0;
    }
    Err(Error::Precondition(format!(
        "could not isolate the second eigenvalue {lambda2} exactly"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinRankScan {
    /// Minimum rank over graphs with λ₂ > 0; absent when every graph was skipped.
    pub min_rank: Option<usize>,
    /// Stream indices and records attaining the minimum, in stream order.
    pub argmin: Vec<(usize, GraphRankRecord)>,
    /// All computed records with their stream index, in stream order.
    pub records: Vec<(usize, GraphRankRecord)>,
    pub skipped: usize,
}

/// Minimum of rank(A − λ₂I) over a stream of triangle-free graphs on `n`
/// vertices. Graphs with λ₂ ≤ 0 are skipped.
pub fn min_rank_scan(
    n: usize,
    graphs: &[Graph],
    tol: &Tolerance,
    exact: bool,
) -> Result<MinRankScan> {
    for (index, g) in graphs.iter().enumerate() {
        if g.n() != n {
            return Err(Error::SizeMismatch(format!(
                "graph {index} has {} vertices, expected {n}",
                g.n()
            )));
        }
        if let Some(witness) = is_triangle_free(g).witness {
            return Err(Error::NotTriangleFree { index, witness });
        }
    }
    let records = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| lambda2_rank(g, tol, exact).map(|r| (i, r)))
        .collect::<Result<Vec<_>>>()?;
    let positive: Vec<&(usize, GraphRankRecord)> =
        records.iter().filter(|(_, r)| r.lambda2_positive).collect();
    let min_rank = positive.iter().map(|(_, r)| r.rank).min();
    let argmin = positive
        .iter()
        .filter(|(_, r)| Some(r.rank) == min_rank)
        .map(|&x| x.clone())
        .collect();
    Ok(MinRankScan {
        min_rank,
        argmin,
        skipped: records.len() - positive.len(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_examples() {
        assert!(is_triangle_free(&Graph::cycle(5).unwrap()).triangle_free);
        let k3 = Graph::cycle(3).unwrap();
        assert_eq!(is_triangle_free(&k3).witness, Some([0, 1, 2]));
        let p = Graph::petersen();
        assert_eq!(p.edges().len(), 15);
        assert!(is_triangle_free(&p).triangle_free);
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 3)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        let g = Graph::new(3, vec![(2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2)]);
        assert_eq!(g.complement().edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn c5_record() {
        let tol = Tolerance::default();
        let r = lambda2_rank(&Graph::cycle(5).unwrap(), &tol, true).unwrap();
        let expected = 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos();
        assert!((r.lambda2 - expected).abs() < 1e-12);
        assert_eq!(
            (r.multiplicity, r.rank, r.exact_multiplicity),
            (2, 3, Some(2))
        );
        assert!(r.lambda2_positive);
    }

    #[test]
    fn k22_and_empty_graph() {
        let tol = Tolerance::default();
        let r = lambda2_rank(&Graph::complete_bipartite(2, 2), &tol, true).unwrap();
        assert!(r.lambda2.abs() < 1e-12 && !r.lambda2_positive);
        assert_eq!(r.multiplicity, 2);

        let r = lambda2_rank(&Graph::empty(4), &tol, true).unwrap();
        assert_eq!((r.lambda2, r.multiplicity, r.rank), (0.0, 4, 0));
        assert!(!r.lambda2_positive);

        assert!(lambda2_rank(&Graph::empty(1), &tol, false).is_err());
    }

    #[test]
    fn petersen_lambda2() {
        // spectrum 3, 1 (×5), −2 (×4)
        let r = lambda2_rank(&Graph::petersen(), &Tolerance::default(), true).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-12);
        assert_eq!((r.multiplicity, r.rank), (5, 5));
    }

    #[test]
    fn two_distance_square() {
        let tol = Tolerance::default();
        let s = PointSet::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
        )
        .unwrap();
        let g = two_distance_to_graph(&s, 2f64.sqrt(), &tol).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);
        assert!(two_distance_to_graph(&s, 0.5, &tol).is_err());
        assert!(two_distance_to_graph(&s, 1.5, &tol).is_err());

        let line = PointSet::new(1, vec![vec![0.0], vec![2.0], vec![4.0]]).unwrap();
        assert!(matches!(
            two_distance_to_graph(&line, 2.0, &tol),
            Err(Error::Precondition(_)) | Err(Error::NotAlmostEquidistant { .. })
        ));
    }

    #[test]
    fn scan_examples() {
        let tol = Tolerance::default();
        let r = min_rank_scan(5, &[Graph::cycle(5).unwrap()], &tol, false).unwrap();
        assert_eq!(r.min_rank, Some(3));
        assert_eq!(r.argmin.len(), 1);

        let err = min_rank_scan(3, &[Graph::empty(3), Graph::cycle(3).unwrap()], &tol, false);
        assert_eq!(
            err,
            Err(Error::NotTriangleFree {
                index: 1,
                witness: [0, 1, 2]
            })
        );
    }
}
