use std::cmp::Ordering;

use geodom::exactnum::{cmp_quadratic, int, rat, Rational, SqrtExpr};
use geodom::QuadNum;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn quad(a: (i64, i64), b: (i64, i64), d: i64) -> QuadNum {
    QuadNum::new(rat(a.0, a.1), rat(b.0, b.1), BigInt::from(d)).unwrap()
}

fn arb_quad(d: i64) -> impl Strategy<Value = QuadNum> {
    (-50i64..50, 1i64..12, -50i64..50, 1i64..12).prop_map(move |(p, q, r, s)| quad((p, q), (r, s), d))
}

/// Fixed-point value * 10^digits, computed with integer square roots only.
fn fixed(a: &Rational, b: &Rational, s: &Rational, digits: u32) -> BigInt {
    let scale = BigInt::from(10).pow(digits);
    let a_fixed = (a * Rational::from_integer(scale.clone())).floor().to_integer();
    if b.is_zero() || s.is_zero() {
        return a_fixed;
    }
    // sqrt(s) * 10^digits = sqrt(s * 10^(2 digits))
    let radicand = (s * Rational::from_integer(&scale * &scale)).floor().to_integer();
    let root = radicand.sqrt();
    let b_part = (b * Rational::from_integer(root)).floor().to_integer();
    a_fixed + b_part
}

proptest! {
    #[test]
    fn field_axioms(x in arb_quad(2), y in arb_quad(2), z in arb_quad(2)) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, QuadNum::zero());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.recip().unwrap(), QuadNum::one());
            prop_assert_eq!(&(&y / &x) * &x, y.clone());
        }
    }

    #[test]
    fn sign_agrees_with_float_interval(x in arb_quad(3)) {
        let v = x.to_f64();
        // an interval of ±1e-9 around the double excludes zero => sign must match
        if v.abs() > 1e-9 {
            prop_assert_eq!(x.sign(), if v > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn cmp_quadratic_matches_fixed_point_oracle(
        p1 in -30i64..30, q1 in -30i64..30, s1 in 1i64..40,
        p2 in -30i64..30, q2 in -30i64..30, s2 in 1i64..40,
        r1 in 1i64..7, r2 in 1i64..7,
    ) {
        let x = SqrtExpr::new(int(p1), int(q1), int(r1), int(s1)).unwrap();
        let y = SqrtExpr::new(int(p2), int(q2), int(r2), int(s2)).unwrap();
        let fx = fixed(x.a(), x.b(), x.radicand(), 100);
        let fy = fixed(y.a(), y.b(), y.radicand(), 100);
        let got = cmp_quadratic(&x, &y);
        // the fixed-point values are within a few ulps of 10^-100; only decide when clearly apart
        if (&fx - &fy).abs() > BigInt::from(1000) {
            prop_assert_eq!(got, fx.cmp(&fy));
        }
        prop_assert_eq!(cmp_quadratic(&y, &x), got.reverse());
    }

    #[test]
    fn cmp_quadratic_transitive(
        v in proptest::collection::vec((-10i64..10, -5i64..5, 1i64..12), 3)
    ) {
        let xs: Vec<SqrtExpr> = v.iter()
            .map(|&(p, q, s)| SqrtExpr::new(int(p), int(q), int(1), int(s)).unwrap())
            .collect();
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        if cmp_quadratic(a, b) != Ordering::Greater && cmp_quadratic(b, c) != Ordering::Greater {
            prop_assert_ne!(cmp_quadratic(a, c), Ordering::Greater);
        }
    }

    #[test]
    fn literal_round_trip(x in arb_quad(5)) {
        let back: QuadNum = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        let pretty: QuadNum = x.pretty().parse().unwrap();
        prop_assert_eq!(pretty, x);
    }
}

#[test]
fn sign_on_ten_thousand_samples() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut decided = 0;
    for _ in 0..10_000 {
        let d = [2i64, 3, 5, 6, 7][rng.gen_range(0..5)];
        let x = quad(
            (rng.gen_range(-1000..1000), rng.gen_range(1..50)),
            (rng.gen_range(-1000..1000), rng.gen_range(1..50)),
            d,
        );
        let v = x.to_f64();
        let err = 1e-12 * (1.0 + v.abs());
        if v.abs() > err {
            decided += 1;
            assert_eq!(x.sign(), if v > 0.0 { 1 } else { -1 }, "{x}");
        }
    }
    assert!(decided > 9_900);
}
