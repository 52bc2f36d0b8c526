use geodom::diskdom::{
    build_lookup, build_lookup_with, coverage_count, face_contains, vertical_decomposition, xp_minimum, xp_solve, DiskInstance,
    LookupTable,
};
use geodom::exactnum::rat;
use geodom::geom2d::Point2;
use geodom::graphcore::brute_force_min_dominating;
use proptest::prelude::*;

// half-integer grid points force tangencies and shared event abscissae
fn arb_centers(max_n: usize, grid: i64, den: i64) -> impl Strategy<Value = Vec<Point2>> {
    proptest::collection::btree_set((0..=grid, 0..=grid), 1..=max_n).prop_map(move |s| {
        s.into_iter()
            .map(|(x, y)| Point2::new(rat(x, den), rat(y, den)))
            .collect()
    })
}

fn arb_subset(n: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=max.min(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eager_coverage_matches_scan((centers, set) in arb_centers(9, 12, 2).prop_flat_map(|c| {
        let n = c.len();
        (Just(c), arb_subset(n, 5))
    })) {
        let inst = DiskInstance::new(centers).unwrap();
        let mut table = build_lookup(&inst).unwrap();
        prop_assert_eq!(coverage_count(&inst, &mut table, &set).unwrap(), inst.direct_count(&set));
    }

    #[test]
    fn lazy_coverage_matches_scan((centers, set) in arb_centers(50, 24, 3).prop_flat_map(|c| {
        let n = c.len();
        (Just(c), arb_subset(n, 5))
    })) {
        let inst = DiskInstance::new(centers).unwrap();
        let mut table = LookupTable::lazy();
        prop_assert_eq!(coverage_count(&inst, &mut table, &set).unwrap(), inst.direct_count(&set));
    }

    #[test]
    fn xp_minimum_matches_brute_force(centers in arb_centers(10, 10, 1)) {
        let inst = DiskInstance::new(centers).unwrap();
        let best = brute_force_min_dominating(&inst.graph()).unwrap().0;
        let mut table = LookupTable::lazy();
        let (k, witness) = xp_minimum(&inst, &mut table).unwrap();
        prop_assert_eq!(k, best);
        prop_assert!(inst.graph().is_dominating(&witness).unwrap());
        if k > 0 {
            prop_assert_eq!(xp_solve(&inst, &mut table, k - 1).unwrap(), None);
        }
    }

    #[test]
    fn faces_partition_the_plane(
        centers in arb_centers(5, 12, 2),
        queries in proptest::collection::vec((-12i64..=36, -12i64..=36), 20),
    ) {
        let ids: Vec<usize> = (0..centers.len()).collect();
        let dec = vertical_decomposition(&centers, &ids);
        for f in &dec.faces {
            prop_assert!(f.key.definers().len() <= 4);
        }
        for (x, y) in queries {
            // quarter-grid queries land on walls, arcs and vertices as well as open cells
            let p = Point2::new(rat(x, 4), rat(y, 4));
            let hits = dec.faces.iter().filter(|f| face_contains(&centers, &f.key, &p)).count();
            prop_assert_eq!(hits, 1, "point {} in {} faces", p, hits);
        }
    }
}

#[test]
fn single_circle_counts_sum_to_n() {
    let centers: Vec<Point2> = (0..30)
        .map(|i| Point2::new(rat((i * 7) % 11, 2), rat((i * 5) % 13, 3)))
        .collect();
    let inst = DiskInstance::new(centers).unwrap();
    let table = build_lookup_with(&inst, 1).unwrap();
    for c in 0..inst.len() {
        let dec = vertical_decomposition(inst.centers(), &[c]);
        let total: usize = dec.faces.iter().map(|f| table.get(&f.key).unwrap()).sum();
        assert_eq!(total, inst.len());
    }
}

#[test]
fn eager_and_lazy_tables_agree() {
    let centers: Vec<Point2> = [(0, 0), (2, 0), (1, 1), (3, 2), (0, 3), (4, 4), (2, 4)]
        .iter()
        .map(|&(x, y)| Point2::new(rat(x, 1), rat(y, 1)))
        .collect();
    let inst = DiskInstance::new(centers).unwrap();
    let mut eager = build_lookup(&inst).unwrap();
    let mut lazy = LookupTable::lazy();
    for a in 0..inst.len() {
        for b in a + 1..inst.len() {
            for c in b + 1..inst.len() {
                let set = [a, b, c];
                assert_eq!(
                    coverage_count(&inst, &mut eager, &set).unwrap(),
                    coverage_count(&inst, &mut lazy, &set).unwrap()
                );
            }
        }
    }
    let all: Vec<usize> = (0..inst.len()).collect();
    assert_eq!(coverage_count(&inst, &mut eager, &all).unwrap(), inst.len());
}
