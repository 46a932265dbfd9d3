mod common;

use proptest::prelude::*;

use aeq_core::bounds::{ball_bound_threshold, f_statistic, recentred_norm_bounds};
use aeq_core::constructions::{construct_simplex, construct_two_simplices, lift_to_halfsphere};
use aeq_core::field::{format_rational, parse_rational, Rational};
use aeq_core::geometry::{
    is_almost_equidistant, min_enclosing_ball, recenter_to_barycenter, ExactSet, FloatSet,
    PointSet, Tolerance,
};
use aeq_core::io::{
    graph_to_line, parse_graph_list, parse_point_set_csv, parse_point_set_json, point_set_to_csv,
    point_set_to_json, AnyPointSet,
};
use aeq_core::poly::Poly;
use aeq_core::search::triple_penalty;
use aeq_core::spectral::{build_u, certify, cubic_inequality};
use aeq_core::tdgraph::{is_triangle_free, lambda2_rank, Graph};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn exact_set(max_n: usize, max_d: usize) -> impl Strategy<Value = ExactSet> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(small_rational(), d), n)
            .prop_map(move |pts| PointSet::new(d, pts).unwrap())
    })
}

fn float_set(max_n: usize, max_d: usize) -> impl Strategy<Value = FloatSet> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-2.0f64..2.0, d), n)
            .prop_map(move |pts| PointSet::new(d, pts).unwrap())
    })
}

/// A construction together with a subset mask; subsets of
/// almost-equidistant sets stay almost-equidistant.
fn ae_subset() -> impl Strategy<Value = FloatSet> {
    (2usize..=6, any::<u64>()).prop_map(|(d, mask)| {
        let full = construct_two_simplices(d, &Tolerance::default())
            .unwrap()
            .points;
        let mut keep: Vec<Vec<f64>> = full
            .points()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        if keep.is_empty() {
            keep.push(full.point(0).to_vec());
        }
        PointSet::new(d, keep).unwrap()
    })
}

fn permute<T: aeq_core::field::Field>(s: &PointSet<T>, seed: u64) -> PointSet<T> {
    let mut idx: Vec<usize> = (0..s.len()).collect();
    let mut state = seed | 1;
    for i in (1..idx.len()).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        idx.swap(i, (state % (i as u64 + 1)) as usize);
    }
    PointSet::new(s.dim(), idx.iter().map(|&i| s.point(i).to_vec()).collect()).unwrap()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        prop::collection::vec(any::<bool>(), pairs.len()).prop_map(move |bits| {
            let edges = pairs
                .iter()
                .zip(&bits)
                .filter(|(_, b)| **b)
                .map(|(e, _)| *e)
                .collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_penalty_vanishes_iff_almost_equidistant(s in exact_set(6, 3)) {
        let zero = triple_penalty(&s) == Rational::from_integer(0.into());
        prop_assert_eq!(zero, is_almost_equidistant(&s, &Tolerance::exact()).holds);
    }

    #[test]
    fn verdict_is_permutation_invariant(s in exact_set(7, 3), seed in any::<u64>()) {
        let tol = Tolerance::exact();
        prop_assert_eq!(is_almost_equidistant(&s, &tol).holds, is_almost_equidistant(&permute(&s, seed), &tol).holds);
    }

    #[test]
    fn witness_triple_has_no_unit_pair(s in exact_set(7, 2)) {
        let one = Rational::from_integer(1.into());
        if let Some([i, j, k]) = is_almost_equidistant(&s, &Tolerance::exact()).witness {
            prop_assert!(s.sq_dist(i, j) != one && s.sq_dist(j, k) != one && s.sq_dist(i, k) != one);
        }
    }

    #[test]
    fn u_row_sums_match_f_statistic(s in exact_set(7, 4)) {
        let f = f_statistic(&s);
        let rows: Vec<f64> = build_u(&s).row_sums().iter().map(aeq_core::field::Field::to_f64).collect();
        prop_assert_eq!(f.per_point_sums, rows);
    }

    #[test]
    fn subsets_of_constructions_certify(s in ae_subset()) {
        let tol = Tolerance::default();
        prop_assert!(is_almost_equidistant(&s, &tol).holds);
        let c = certify(&s, &tol).unwrap();
        prop_assert!(c.count_gt_one <= 1);
        prop_assert!(c.count_eq_one + s.dim() + 2 >= s.len());
        let centred = recenter_to_barycenter(&s);
        prop_assert!(recentred_norm_bounds(&centred, &tol).unwrap().holds);
    }

    #[test]
    fn certificate_is_permutation_invariant(s in ae_subset(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let a = certify(&s, &tol).unwrap();
        let b = certify(&permute(&s, seed), &tol).unwrap();
        prop_assert_eq!((a.count_eq_one, a.count_gt_one), (b.count_eq_one, b.count_gt_one));
        prop_assert!((a.lambda_max - b.lambda_max).abs() < 1e-9);
    }

    #[test]
    fn lift_preserves_distances(d in 1usize..=8, k_off in 0usize..=7) {
        let k = 2 + k_off % d.max(1);
        let s = construct_simplex(k.min(d + 1), d).unwrap();
        let r = s.sq_norm(0).sqrt();
        let lifted = lift_to_halfsphere(&s, r, &Tolerance::default()).unwrap();
        for i in 0..s.len() {
            prop_assert!((lifted.sq_norm(i) - 0.5).abs() < 1e-9);
            for j in 0..s.len() {
                prop_assert!((lifted.sq_dist(i, j) - s.sq_dist(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn enclosing_ball_contains_every_point(s in exact_set(8, 3)) {
        let ball = min_enclosing_ball(&s);
        for p in s.points() {
            let dist = p.iter().zip(&ball.center).fold(Rational::from_integer(0.into()), |acc, (a, c)| {
                acc + (a - c) * (a - c)
            });
            prop_assert!(dist <= ball.radius_sq);
        }
    }

    #[test]
    fn enclosing_ball_float_agrees_with_exact(s in exact_set(6, 3)) {
        let exact = min_enclosing_ball(&s);
        let float = min_enclosing_ball(&s.to_float());
        let want = aeq_core::field::Field::to_f64(&exact.radius_sq);
        prop_assert!((float.radius_sq - want).abs() <= 1e-9 * want.max(1.0));
    }

    #[test]
    fn cubic_bound_holds(xs in prop::collection::vec(-2.0f64..6.0, 1..50)) {
        let m = xs.len() as f64;
        let sum: f64 = xs.iter().sum();
        prop_assume!(sum >= m);
        let r = cubic_inequality(&xs, sum - m, 1e-9).unwrap();
        prop_assert!(r.holds && r.remark_holds);
    }

    #[test]
    fn ball_threshold_monotone(d in 1usize..=30, a in 0.0f64..0.45, b in 0.0f64..0.45) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(ball_bound_threshold(d, lo).unwrap() <= ball_bound_threshold(d, hi).unwrap());
        prop_assert!(ball_bound_threshold(d, lo).unwrap() >= 2 * d + 2);
    }

    #[test]
    fn graph_rank_is_relabelling_invariant(g in graph_strategy(7), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        let mut state = seed | 1;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let h = g.permuted(&perm).unwrap();
        let tol = Tolerance::default();
        let a = lambda2_rank(&g, &tol, false).unwrap();
        let b = lambda2_rank(&h, &tol, false).unwrap();
        prop_assert_eq!((a.multiplicity, a.rank), (b.multiplicity, b.rank));
        prop_assert_eq!(is_triangle_free(&g).triangle_free, is_triangle_free(&h).triangle_free);
    }

    #[test]
    fn exact_multiplicity_matches_numeric(g in graph_strategy(7)) {
        let r = lambda2_rank(&g, &Tolerance::default(), true).unwrap();
        prop_assert_eq!(r.exact_multiplicity, Some(r.numeric_multiplicity));
    }

    #[test]
    fn complement_is_an_involution(g in graph_strategy(8)) {
        prop_assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn sturm_counts_integer_roots(roots in prop::collection::vec((-5i64..=5, 1usize..=3), 1..5)) {
        let mut p = Poly::one();
        let mut distinct = std::collections::BTreeMap::new();
        for (r, k) in &roots {
            *distinct.entry(*r).or_insert(0) += k;
            for _ in 0..*k {
                p = p.mul(&Poly::linear(Rational::from_integer((*r).into())));
            }
        }
        let lo = Rational::from_integer((-6).into());
        let hi = Rational::from_integer(6.into());
        prop_assert_eq!(p.count_distinct_roots(&lo, &hi), distinct.len());
        for (r, k) in &distinct {
            prop_assert_eq!(p.root_multiplicity(&Rational::from_integer((*r).into())), *k);
        }
        let degree: usize = p.square_free_decomposition().iter().map(|(f, k)| f.degree().unwrap_or(0) * k).sum();
        prop_assert_eq!(Some(degree), p.degree());
    }

    #[test]
    fn rational_text_round_trips(r in small_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn exact_json_round_trips(s in exact_set(6, 4)) {
        let text = point_set_to_json(&s).to_string();
        match parse_point_set_json(&text).unwrap() {
            AnyPointSet::Exact(back) => prop_assert_eq!(back, s),
            AnyPointSet::Float(_) => prop_assert!(false, "mode lost"),
        }
    }

    #[test]
    fn float_json_and_csv_round_trip(s in float_set(6, 4)) {
        let text = point_set_to_json(&s).to_string();
        prop_assert_eq!(parse_point_set_json(&text).unwrap().to_float(), s.clone());
        prop_assert_eq!(parse_point_set_csv(&point_set_to_csv(&s)).unwrap(), s);
    }

    #[test]
    fn graph_lines_round_trip(gs in prop::collection::vec(graph_strategy(8), 1..6)) {
        let text: String = gs.iter().map(|g| graph_to_line(g) + "\n").collect();
        prop_assert_eq!(parse_graph_list(&text).unwrap(), gs);
    }
}
