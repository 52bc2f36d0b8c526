//! Base and offset vectors that make a simple polygon behave like a grid of squares.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::geom2d::{convex_hull, minkowski_sum_hull, polygons_intersect, Point2, Polygon, Vec2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareLikeCert {
    pub b1: Vec2,
    pub b2: Vec2,
    pub u1: Vec2,
    pub u2: Vec2,
    pub epsilon: Rational,
    pub n: usize,
}

impl SquareLikeCert {
    /// Largest bit length of any numerator or denominator in the four vectors.
    pub fn bit_length(&self) -> u64 {
        [&self.b1, &self.b2, &self.u1, &self.u2]
            .iter()
            .flat_map(|v| [&v.x, &v.y])
            .flat_map(|r| [r.numer().bits(), r.denom().bits()])
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for SquareLikeCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "b1 {} {}", self.b1.x, self.b1.y)?;
        writeln!(f, "b2 {} {}", self.b2.x, self.b2.y)?;
        writeln!(f, "u1 {} {}", self.u1.x, self.u1.y)?;
        writeln!(f, "u2 {} {}", self.u2.x, self.u2.y)?;
        write!(f, "epsilon {}", self.epsilon)
    }
}

/// Outcome per property; `None` means the property holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: [Option<String>; 4],
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.iter().all(Option::is_none)
    }

    /// 1-based index and description of the first failing property.
    pub fn first_failure(&self) -> Option<(usize, &str)> {
        self.failures
            .iter()
            .enumerate()
            .find_map(|(i, f)| f.as_deref().map(|s| (i + 1, s)))
    }
}

fn offset(cert: &SquareLikeCert, i: i64, j: i64) -> Vec2 {
    &cert.u1.scale(&Rational::from_integer(i.into())) + &cert.u2.scale(&Rational::from_integer(j.into()))
}

fn lattice(cert: &SquareLikeCert, k: i64, l: i64) -> Vec2 {
    &cert.b1.scale(&Rational::from_integer(k.into())) + &cert.b2.scale(&Rational::from_integer(l.into()))
}

fn hits(p: &Polygon, v: &Vec2) -> bool {
    polygons_intersect(p, &p.translate(v))
}

fn check_clique(p: &Polygon, cert: &SquareLikeCert, range: &[i64]) -> Option<String> {
    for &i in range {
        for &j in range {
            if !hits(p, &offset(cert, i, j)) {
                return Some(format!("S and S({i},{j}) are disjoint"));
            }
        }
    }
    None
}

fn check_neighbor(p: &Polygon, cert: &SquareLikeCert, vertical: bool, outer: &[i64], inner: &[i64]) -> Option<String> {
    let base = if vertical { &cert.b2 } else { &cert.b1 };
    let name = if vertical { "b2" } else { "b1" };
    for &a in outer {
        for &b in inner {
            let (i, j, key) = if vertical { (b, a, a) } else { (a, b, a) };
            let got = hits(p, &(base + &offset(cert, i, j)));
            if got != (key <= 0) {
                let verb = if got { "meets" } else { "misses" };
                return Some(format!("S {verb} {name} + S({i},{j})"));
            }
        }
    }
    None
}

/// Property 4: the union of the offset copies is disjoint from its lattice translates.
fn check_distant(p: &Polygon, cert: &SquareLikeCert) -> Option<String> {
    let big = 2 * (cert.n * cert.n) as i64;
    let corners: Vec<Vec2> = [(-big, -big), (-big, big), (big, -big), (big, big)]
        .iter()
        .map(|&(i, j)| offset(cert, i, j))
        .collect();
    let neg: Vec<Point2> = p.vertices().iter().map(|v| -v).collect();
    let diff = minkowski_sum_hull(p.vertices(), &neg).expect("polygon has area");
    let offsets_hull = convex_hull(&corners).ok();
    for k in -2i64..=2 {
        for l in -2i64..=2 {
            if k.abs() + l.abs() < 2 {
                continue;
            }
            let shift = lattice(cert, k, l);
            let separated = offsets_hull
                .as_ref()
                .is_some_and(|h| !polygons_intersect(&diff, &h.translate(&shift)));
            if separated {
                continue;
            }
            for di in -big..=big {
                for dj in -big..=big {
                    if hits(p, &(&shift + &offset(cert, di, dj))) {
                        return Some(format!("S meets {k}b1 + {l}b2 + S at offset difference ({di},{dj})"));
                    }
                }
            }
        }
    }
    // every point of (P - P) plus an offset difference has lattice coordinates below 3 in absolute value
    let det = cert.b1.cross(&cert.b2);
    if det.is_zero() {
        return Some("b1 and b2 are parallel".into());
    }
    let three = Rational::from_integer(3.into());
    for d in diff.vertices() {
        for c in &corners {
            let v = d + c;
            let alpha = (v.cross(&cert.b2) / &det).abs();
            let beta = (cert.b1.cross(&v) / &det).abs();
            if alpha >= three || beta >= three {
                return Some(format!("bounding region reaches lattice coordinate 3 at {v}"));
            }
        }
    }
    None
}

/// Checks all four properties exhaustively over `|i|, |j| <= n^2`.
pub fn verify_squarelike(p: &Polygon, cert: &SquareLikeCert, n: usize) -> VerifyReport {
    verify_inner(p, cert, n, false)
}

fn verify_inner(p: &Polygon, cert: &SquareLikeCert, n: usize, stop_early: bool) -> VerifyReport {
    let big = (n * n) as i64;
    let range: Vec<i64> = (-big..=big).collect();
    let mut report = VerifyReport::default();
    report.failures[0] = check_clique(p, cert, &range);
    if stop_early && report.failures[0].is_some() {
        return report;
    }
    report.failures[1] = check_neighbor(p, cert, false, &range, &range);
    if stop_early && report.failures[1].is_some() {
        return report;
    }
    report.failures[2] = check_neighbor(p, cert, true, &range, &range);
    if stop_early && report.failures[2].is_some() {
        return report;
    }
    let scoped = SquareLikeCert { n, ..cert.clone() };
    report.failures[3] = check_distant(p, &scoped);
    report
}

fn quick_reject(p: &Polygon, cert: &SquareLikeCert, n: usize) -> bool {
    let big = (n * n) as i64;
    let few = [-big, -1, 0, 1, big];
    check_clique(p, cert, &[-big, big]).is_some()
        || check_neighbor(p, cert, false, &few, &[-big, 0, big]).is_some()
        || check_neighbor(p, cert, true, &few, &[-big, 0, big]).is_some()
}

fn vertex_index(p: &Polygon, v: &Point2) -> usize {
    p.vertices().iter().position(|w| w == v).expect("vertex of the polygon")
}

/// Side following vertex `i` counter-clockwise, and the side following it clockwise.
fn sides(p: &Polygon, i: usize) -> (Vec2, Vec2) {
    let vs = p.vertices();
    let n = vs.len();
    (&vs[(i + 1) % n] - &vs[i], &vs[(i + n - 1) % n] - &vs[i])
}

/// Vertices of minimum and maximum height across `b1`, plus the clearance of every other vertex.
fn strip_touch(p: &Polygon, b1: &Vec2) -> (usize, usize, Rational) {
    let h: Vec<Rational> = p.vertices().iter().map(|v| b1.cross(v)).collect();
    let lo = (0..h.len()).min_by(|&a, &b| h[a].cmp(&h[b])).unwrap();
    let hi = (0..h.len()).max_by(|&a, &b| h[a].cmp(&h[b]).then(b.cmp(&a))).unwrap();
    let mut gap: Option<Rational> = None;
    for (i, hv) in h.iter().enumerate() {
        for (t, ht) in [(lo, &h[lo]), (hi, &h[hi])] {
            if i != t {
                let g = (hv - ht).abs();
                gap = Some(gap.map_or(g.clone(), |x| x.min(g)));
            }
        }
    }
    (lo, hi, gap.unwrap_or_else(Rational::zero))
}

/// Candidate `(b, s)` pairs around a base vector, the proof's preferred choices first.
fn perturbations(base: &Vec2, at_p: (Vec2, Vec2), at_q: (Vec2, Vec2), eps: &Rational) -> Vec<(Vec2, Vec2)> {
    let dirs = [
        -&at_q.0,
        at_p.0.clone(),
        at_q.0.clone(),
        -&at_p.0,
        -&at_q.1,
        at_p.1.clone(),
        at_q.1.clone(),
        -&at_p.1,
    ];
    let mut out: Vec<(Vec2, Vec2)> = Vec::new();
    for d in dirs {
        let s = d.scale(eps);
        if !out.iter().any(|(_, t)| t == &s) {
            out.push((base + &s, s));
        }
    }
    out
}

const MAX_HALVINGS: usize = 64;

/// Searches for a certificate, halving epsilon until one verifies exactly.
pub fn compute_squarelike_vectors(p: &Polygon, n: usize) -> Result<SquareLikeCert> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let (pv, qv) = crate::geom2d::diameter(p);
    let (pi, qi) = (vertex_index(p, &pv), vertex_index(p, &qv));
    let b0 = &qv - &pv;
    let scale = Rational::new(BigInt::from(1), BigInt::from(2 * n * n));
    let mut eps = Rational::new(1.into(), 8.into());
    let mut last_failure = String::from("no candidate tried");
    for _ in 0..MAX_HALVINGS {
        for (b1, s1) in perturbations(&b0, sides(p, pi), sides(p, qi), &eps) {
            let (lo, hi, gap) = strip_touch(p, &b1);
            // the strip lines must touch a single vertex per period
            if gap.is_zero() {
                continue;
            }
            let vs = p.vertices();
            let b0p = &vs[hi] - &vs[lo];
            for (b2, s2) in perturbations(&b0p, sides(p, lo), sides(p, hi), &eps) {
                if s1.cross(&s2).is_zero() {
                    continue;
                }
                let k = &eps * &scale;
                let u1 = s2.scale(&k);
                let u2 = s1.scale(&k);
                for (f1, f2) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                    let cert = SquareLikeCert {
                        b1: b1.clone(),
                        b2: b2.clone(),
                        u1: u1.scale(&Rational::from_integer(f1.into())),
                        u2: u2.scale(&Rational::from_integer(f2.into())),
                        epsilon: eps.clone(),
                        n,
                    };
                    if quick_reject(p, &cert, n) {
                        continue;
                    }
                    let report = verify_inner(p, &cert, n, true);
                    match report.first_failure() {
                        None => return Ok(cert),
                        Some((idx, what)) => last_failure = format!("property {idx}: {what}"),
                    }
                }
            }
        }
        eps /= Rational::from_integer(2.into());
    }
    Err(Error::SearchFailed(last_failure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::pt;

    fn square() -> Polygon {
        Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()
    }

    #[test]
    fn zero_offsets_fail_horizontal() {
        let cert = SquareLikeCert {
            b1: pt(1, 0),
            b2: pt(0, 1),
            u1: Point2::zero(),
            u2: Point2::zero(),
            epsilon: Rational::zero(),
            n: 2,
        };
        assert_eq!(verify_squarelike(&square(), &cert, 2).first_failure().unwrap().0, 2);
    }

    #[test]
    fn zero_base_fails_distant() {
        let cert = SquareLikeCert {
            b1: Point2::zero(),
            b2: pt(0, 3),
            u1: Point2::zero(),
            u2: Point2::zero(),
            epsilon: Rational::zero(),
            n: 1,
        };
        let report = verify_squarelike(&square(), &cert, 1);
        assert!(report.failures[3].as_deref().unwrap().contains("2b1 + 0b2"));
    }

    #[test]
    fn unit_square_certificate() {
        let cert = compute_squarelike_vectors(&square(), 2).unwrap();
        assert!(verify_squarelike(&square(), &cert, 2).passed());
    }
}
