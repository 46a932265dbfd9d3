#![allow(dead_code)]

use aeq_core::constructions::{construct_rosenfeld, construct_simplex, construct_two_simplices};
use aeq_core::field::{parse_rational, Rational};
use aeq_core::geometry::{ExactSet, FloatSet, PointSet, Tolerance};
use aeq_core::io::parse_graph_list;
use aeq_core::search::{optimize, SearchConfig, SearchConstraint, SearchResult};
use aeq_core::tdgraph::Graph;

pub const TRIANGLE_FREE_LE8: &str = include_str!("../fixtures/triangle_free_le8.txt");

pub fn triangle_free_graphs() -> Vec<Graph> {
    parse_graph_list(TRIANGLE_FREE_LE8).expect("fixture parses")
}

pub fn tol() -> Tolerance {
    Tolerance::default()
}

/// Regular pentagon whose diagonals have unit length.
pub fn unit_diagonal_pentagon() -> FloatSet {
    let r = 1.0 / (2.0 * (2.0 * std::f64::consts::PI / 5.0).sin());
    let pts = (0..5)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            vec![r * a.cos(), r * a.sin()]
        })
        .collect();
    PointSet::new(2, pts).unwrap()
}

/// Every construction output used by the fixture-wide checks, labelled.
pub fn construction_fixtures() -> Vec<(String, FloatSet)> {
    let mut out = Vec::new();
    for d in 1..=8 {
        for k in 2..=d + 1 {
            out.push((
                format!("simplex k={k} d={d}"),
                construct_simplex(k, d).unwrap(),
            ));
        }
    }
    for d in 2..=12 {
        out.push((
            format!("two_simplices d={d}"),
            construct_two_simplices(d, &tol()).unwrap().points,
        ));
        out.push((format!("rosenfeld d={d}"), construct_rosenfeld(d).unwrap()));
    }
    out.push(("pentagon".into(), unit_diagonal_pentagon()));
    out
}

/// Diameter-at-most-1 almost-equidistant sets.
pub fn diameter_fixtures() -> Vec<(String, FloatSet)> {
    let mut out = Vec::new();
    for d in 1..=10 {
        out.push((
            format!("simplex d={d}"),
            construct_simplex(d + 1, d).unwrap(),
        ));
    }
    out.push(("pentagon".into(), unit_diagonal_pentagon()));
    for (d, n) in [(2, 5), (3, 6)] {
        let res = diameter_search(d, n);
        assert!(
            res.feasible,
            "diameter search d={d} n={n} should be feasible"
        );
        out.push((format!("search d={d} n={n}"), res.best_points));
    }
    out
}

pub fn diameter_search(d: usize, n: usize) -> SearchResult {
    let mut cfg = SearchConfig::new(d, n);
    cfg.max_iters = 1500;
    cfg.constraint = SearchConstraint::DiameterLeOne;
    optimize(&cfg).unwrap()
}

/// The frozen 7-point planar search: seed 0, 16 restarts, 1500 iterations.
pub fn moser_search() -> SearchResult {
    let mut cfg = SearchConfig::new(2, 7);
    cfg.max_iters = 1500;
    optimize(&cfg).unwrap()
}

fn exact(dim: usize, rows: &[&[&str]]) -> ExactSet {
    let pts: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
        .collect();
    PointSet::new(dim, pts).unwrap()
}

/// Almost-equidistant sets with rational coordinates.
pub fn exact_fixtures() -> Vec<(String, ExactSet)> {
    vec![
        ("segment chain".into(), exact(1, &[&["0"], &["1"], &["2"]])),
        (
            "unit square".into(),
            exact(2, &[&["0", "0"], &["1", "0"], &["0", "1"], &["1", "1"]]),
        ),
        (
            "3-4-5 rhombus".into(),
            exact(
                2,
                &[&["0", "0"], &["1", "0"], &["3/5", "4/5"], &["8/5", "4/5"]],
            ),
        ),
        (
            "unit-step lattice path".into(),
            exact(
                3,
                &[
                    &["0", "0", "0"],
                    &["1", "0", "0"],
                    &["1", "1", "0"],
                    &["1", "1", "1"],
                ],
            ),
        ),
    ]
}
