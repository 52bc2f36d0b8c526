use geodom::exactnum::rat;
use geodom::graphcore::brute_force_min_dominating;
use geodom::pattern1d::Pattern1D;
use geodom::solver1d::{
    integer_reduction, max_window_load, solve, solve_fpt_branching, solve_interval_pattern, window_bound,
};
use geodom::QuadNum;
use proptest::prelude::*;

fn q(s: &str) -> QuadNum {
    s.parse().unwrap()
}

fn interval_patterns() -> Vec<Pattern1D> {
    vec![
        Pattern1D::new(vec![], vec![(q("0"), q("1"))]).unwrap(),
        Pattern1D::new(vec![q("0")], vec![(q("1"), q("2"))]).unwrap(),
        Pattern1D::new(vec![q("3")], vec![(q("0"), q("1"))]).unwrap(),
    ]
}

fn arb_offsets(max: i64, den: i64) -> impl Strategy<Value = Vec<QuadNum>> {
    proptest::collection::vec(0..=max * den, 1..=10)
        .prop_map(move |v| v.into_iter().map(|k| QuadNum::rational(rat(k, den))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dp_matches_oracle(which in 0usize..3, xs in arb_offsets(9, 4)) {
        let p = &interval_patterns()[which];
        let g = p.graph(&xs);
        let sol = solve_interval_pattern(p, &xs).unwrap();
        prop_assert_eq!(sol.size, brute_force_min_dominating(&g).unwrap().0);
        prop_assert!(g.is_dominating(&sol.witness).unwrap());
        let bound = window_bound(p).unwrap();
        prop_assert!(max_window_load(&xs, &sol.witness, &p.span()) <= bound);
    }

    #[test]
    fn rational_points_match_oracle(which in 0usize..3, raw in proptest::collection::vec(0i64..20, 1..=10)) {
        let pats = [["0", "2", "3"].as_slice(), &["0", "1"], &["0", "3", "7"]];
        let p = Pattern1D::new(pats[which].iter().map(|s| q(s)).collect(), vec![]).unwrap();
        let xs: Vec<QuadNum> = raw.into_iter().map(QuadNum::from_int).collect();
        let t = integer_reduction(&p, &xs).unwrap();
        prop_assert!(p.graph(&xs).adjacency_equals(&t.q_prime.graph(&t.xs).edges()));
        let sol = solve(&p, &xs).unwrap();
        let g = p.graph(&xs);
        prop_assert_eq!(sol.size, brute_force_min_dominating(&g).unwrap().0);
        prop_assert!(g.is_dominating(&sol.witness).unwrap());
    }

    #[test]
    fn branching_matches_oracle(which in 0usize..2, raw in proptest::collection::vec((-3i64..4, -2i64..3), 1..=10)) {
        let p = if which == 0 {
            Pattern1D::new(vec![q("0"), q("1"), q("sqrt(2)")], vec![]).unwrap()
        } else {
            Pattern1D::new(vec![q("0"), q("sqrt(2)"), q("2")], vec![]).unwrap()
        };
        let xs: Vec<QuadNum> = raw
            .into_iter()
            .map(|(a, b)| QuadNum::new(rat(a, 1), rat(b, 1), 2.into()).unwrap())
            .collect();
        let g = p.graph(&xs);
        let best = brute_force_min_dominating(&g).unwrap().0;
        let sol = solve(&p, &xs).unwrap();
        prop_assert_eq!(sol.size, best);
        prop_assert!(g.is_dominating(&sol.witness).unwrap());
        if best > 0 {
            prop_assert_eq!(solve_fpt_branching(&p, &xs, best - 1).unwrap(), None);
        }
    }
}

#[test]
fn irrational_window_width() {
    // w = 1 + sqrt(2) is irrational; floor(3w) = 7
    let p = Pattern1D::new(vec![q("1+sqrt(2)")], vec![(q("0"), q("1"))]).unwrap();
    assert_eq!(window_bound(&p).unwrap(), 7);
    let xs: Vec<QuadNum> = ["0", "1", "sqrt(2)", "2+sqrt(2)", "3", "1/2"].iter().map(|s| q(s)).collect();
    let g = p.graph(&xs);
    assert_eq!(solve(&p, &xs).unwrap().size, brute_force_min_dominating(&g).unwrap().0);
}
