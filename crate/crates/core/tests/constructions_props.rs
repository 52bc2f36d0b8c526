use geodom::constructions::{split_graph_polygons, trigrid_realization, universal_pattern, verify_split, verify_trigrid, SplitGraph};
use geodom::exactnum::{rat, QuadNum};
use geodom::graphcore::IntersectionGraph;
use geodom::pattern1d::Pattern1D;
use proptest::prelude::*;

fn q(s: &str) -> QuadNum {
    s.parse().unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (Just(n), proptest::sample::subsequence(pairs, 0..=m))
    })
}

fn arb_split() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize)>)> {
    (0..=5usize, 0..=5usize).prop_filter("nonempty", |(c, i)| c + i > 0).prop_flat_map(|(c, i)| {
        let cross: Vec<(usize, usize)> = (0..c).flat_map(|v| (c..c + i).map(move |u| (v, u))).collect();
        let m = cross.len();
        (Just(c), Just(i), proptest::sample::subsequence(cross, 0..=m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn universal_pattern_realizes_graph((n, edges) in arb_graph(7)) {
        let g = IntersectionGraph::from_edges(n, &edges).unwrap();
        let (pattern, xs) = universal_pattern(&g).unwrap();
        prop_assert_eq!(xs.len(), n);
        // pairwise oracle independent of the graph builder
        for u in 0..n {
            for v in u + 1..n {
                let hit = pattern.points().iter().any(|a| pattern.points().iter().any(|b| &xs[u] + a == &xs[v] + b));
                prop_assert_eq!(hit, edges.contains(&(u, v)));
            }
        }
    }

    #[test]
    fn split_polygons_realize_graph((c, i, cross) in arb_split()) {
        let sg = SplitGraph::new(c, i, &cross).unwrap();
        let real = split_graph_polygons(&sg).unwrap();
        let report = verify_split(&sg, &real.polygons);
        prop_assert!(report.passed(), "{:?}", report);
        for p in &real.polygons {
            prop_assert!(p.is_convex());
        }
    }
}

/// Multipliers `a` in `-10..=10` for which `a*x + Q` meets some integer translate of `Q`.
fn exhaustive_multipliers(p: &Pattern1D, x: &QuadNum) -> Vec<i64> {
    let span = p.span().to_f64().abs() + 1.0;
    (-10i64..=10)
        .filter(|&a| {
            let shift = x.scale(&rat(a, 1));
            let reach = (shift.to_f64().abs() + span).ceil() as i64;
            (-reach..=reach).any(|k| p.translates_intersect(&shift, &QuadNum::from_int(k)))
        })
        .collect()
}

#[test]
fn trigrid_candidates_match_exhaustive_search() {
    let patterns = [
        vec!["0", "1", "sqrt(2)"],
        vec!["0", "1", "sqrt(2)", "2*sqrt(2)+1/2"],
        vec!["0", "1", "sqrt(3)", "3*sqrt(3)"],
        vec!["0", "3/2", "1/2+sqrt(5)", "sqrt(5)-4"],
    ];
    for pts in patterns {
        let p = Pattern1D::new(pts.iter().map(|s| q(s)).collect(), vec![]).unwrap().unit_span();
        let t = trigrid_realization(&p, 3).unwrap();
        let meets = exhaustive_multipliers(&p, &t.x_star);
        for a in &meets {
            assert!(t.candidates.contains(a), "{pts:?}: {a} missing from {:?}", t.candidates);
        }
        assert_eq!(meets.iter().max().copied(), Some(t.a_prime), "{pts:?}");
        assert!(verify_trigrid(&p, &t.translates, 3), "{pts:?}");
    }
}
