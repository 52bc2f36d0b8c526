use geodom::geom2d::{pt, Polygon};
use geodom::squarelike::{compute_squarelike_vectors, verify_squarelike};

fn polygons() -> Vec<(&'static str, Polygon)> {
    vec![
        ("square", Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()),
        ("triangle", Polygon::new(vec![pt(0, 0), pt(4, 0), pt(0, 3)]).unwrap()),
        (
            "hexagon",
            Polygon::new(vec![pt(0, 0), pt(2, 0), pt(3, 1), pt(2, 2), pt(0, 2), pt(-1, 1)]).unwrap(),
        ),
        (
            "l-shape",
            Polygon::new(vec![pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)]).unwrap(),
        ),
    ]
}

#[test]
fn certificates_verify() {
    for (name, poly) in polygons() {
        for n in [2usize, 3] {
            let cert = compute_squarelike_vectors(&poly, n).unwrap_or_else(|e| panic!("{name} n={n}: {e}"));
            let report = verify_squarelike(&poly, &cert, n);
            assert!(report.passed(), "{name} n={n}: {:?}", report.first_failure());
            let log2n = (usize::BITS - (n - 1).leading_zeros()) as u64;
            assert!(cert.bit_length() <= 64 + 4 * log2n, "{name} n={n}: {} bits", cert.bit_length());
            println!("{name} n={n}\n{cert}");
        }
    }
}
