//! Exact planar primitives over the rationals.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{parse_literal, Rational};
use crate::graphcore::column_of;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

pub type Vec2 = Point2;

pub fn pt(x: i64, y: i64) -> Point2 {
    Point2::new(Rational::from_integer(x.into()), Rational::from_integer(y.into()))
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn zero() -> Self {
        Point2::new(Rational::zero(), Rational::zero())
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point2) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, k: &Rational) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for &Point2 {
    type Output = Point2;
    fn add(self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point2 {
    type Output = Point2;
    fn sub(self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        &self + &o
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        &self - &o
    }
}

impl Neg for &Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-&self.x, -&self.y)
    }
}

impl Mul<&Point2> for &Rational {
    type Output = Point2;
    fn mul(self, p: &Point2) -> Point2 {
        p.scale(self)
    }
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> i32 {
    let v = (b - a).cross(&(c - a));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Closed segment intersection.
pub fn segments_intersect(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBox {
    pub lo: Point2,
    pub hi: Point2,
}

impl BBox {
    pub fn overlaps(&self, o: &BBox) -> bool {
        self.lo.x <= o.hi.x && o.lo.x <= self.hi.x && self.lo.y <= o.hi.y && o.lo.y <= self.hi.y
    }
}

/// Simple polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point2>,
    bbox: BBox,
}

fn twice_area(vs: &[Point2]) -> Rational {
    let n = vs.len();
    (0..n).fold(Rational::zero(), |acc, i| acc + vs[i].cross(&vs[(i + 1) % n]))
}

impl Polygon {
    /// Validates simplicity and reorients clockwise input.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidInput("polygon needs at least 3 vertices".into()));
        }
        let area = twice_area(&vertices);
        if area.is_zero() {
            return Err(Error::InvalidInput("polygon has zero area".into()));
        }
        if area.is_negative() {
            vertices.reverse();
        }
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            if a == b {
                return Err(Error::InvalidInput(format!("repeated vertex {a}")));
            }
            for j in i + 1..n {
                let (c, d) = (&vertices[j], &vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // consecutive edges may only share their common endpoint
                    let (p, s, r) = if j == i + 1 { (a, b, d) } else { (c, a, b) };
                    if orient(p, s, r) == 0 && (s - p).dot(&(r - s)).is_negative() {
                        return Err(Error::InvalidInput(format!("polygon folds back at {s}")));
                    }
                } else if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidInput(format!("edges {a}-{b} and {c}-{d} cross")));
                }
            }
        }
        let bbox = bbox_of(&vertices);
        Ok(Polygon { vertices, bbox })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bbox(&self) -> &BBox {
        &self.bbox
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point2, &Point2)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn twice_area(&self) -> Rational {
        twice_area(&self.vertices)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], &self.vertices[(i + 2) % n]) >= 0)
    }

    pub fn translate(&self, v: &Vec2) -> Polygon {
        let vertices: Vec<Point2> = self.vertices.iter().map(|p| p + v).collect();
        let bbox = BBox { lo: &self.bbox.lo + v, hi: &self.bbox.hi + v };
        Polygon { vertices, bbox }
    }

    pub fn scale(&self, k: &Rational) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|p| p.scale(k)).collect())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("poly {}\n", self.vertices.len());
        for p in &self.vertices {
            writeln!(out, "v {} {}", p.x, p.y).unwrap();
        }
        out
    }
}

fn bbox_of(vs: &[Point2]) -> BBox {
    let mut lo = vs[0].clone();
    let mut hi = vs[0].clone();
    for p in &vs[1..] {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    BBox { lo, hi }
}

/// Exact point location by boundary test plus crossing parity.
pub fn point_in_polygon(p: &Point2, poly: &Polygon) -> Location {
    let mut inside = false;
    for (a, b) in poly.edges() {
        if on_segment(p, a, b) {
            return Location::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            // crossing point is to the right of p iff orientation agrees with edge direction
            let o = orient(a, b, p);
            if (b.y > a.y && o > 0) || (b.y < a.y && o < 0) {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Whether the closed regions of two simple polygons share a point.
pub fn polygons_intersect(a: &Polygon, b: &Polygon) -> bool {
    if !a.bbox.overlaps(&b.bbox) {
        return false;
    }
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            if segments_intersect(p, q, r, s) {
                return true;
            }
        }
    }
    point_in_polygon(&a.vertices[0], b) != Location::Outside
        || point_in_polygon(&b.vertices[0], a) != Location::Outside
}

/// Vertex pair of maximum squared distance; ties go to the lexicographically
/// smallest pair of points, each pair ordered with its smaller point first.
pub fn diameter(poly: &Polygon) -> (Point2, Point2) {
    let vs = &poly.vertices;
    let mut best: Option<(Rational, Point2, Point2)> = None;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let (p, q) = if vs[i] <= vs[j] { (&vs[i], &vs[j]) } else { (&vs[j], &vs[i]) };
            let d = (q - p).norm2();
            let better = match &best {
                None => true,
                Some((bd, bp, bq)) => match d.cmp(bd) {
                    Ordering::Greater => true,
                    Ordering::Equal => (p, q) < (bp, bq),
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((d, p.clone(), q.clone()));
            }
        }
    }
    let (_, p, q) = best.expect("polygon has vertices");
    (p, q)
}

/// Convex hull without collinear points, counter-clockwise from the lowest-leftmost point.
pub fn convex_hull(points: &[Point2]) -> Result<Polygon> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::InvalidInput("hull needs three non-collinear points".into()));
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::InvalidInput("hull is degenerate".into()));
    }
    Polygon::new(lower)
}

pub fn minkowski_translate(poly: &Polygon, v: &Vec2) -> Polygon {
    poly.translate(v)
}

/// Minkowski sum of the convex hulls of two point sets.
pub fn minkowski_sum_hull(a: &[Point2], b: &[Point2]) -> Result<Polygon> {
    let sums: Vec<Point2> = a.iter().flat_map(|p| b.iter().map(move |q| p + q)).collect();
    convex_hull(&sums)
}

pub(crate) fn parse_coordinate(raw: &str, line: usize, token: &str) -> Result<Rational> {
    let col = column_of(raw, token);
    let v = parse_literal(token).map_err(|(c, msg)| Error::parse(line, col + c - 1, msg))?;
    v.as_rational()
        .cloned()
        .ok_or_else(|| Error::parse(line, col, "polygon coordinates must be rational"))
}

/// Parses one or more `poly <k>` blocks followed by `v <x> <y>` lines.
/// Lines with other leading keywords are passed to `extra`.
pub fn parse_polygons_with(
    text: &str,
    mut extra: impl FnMut(usize, &str, &[&str]) -> Result<()>,
) -> Result<Vec<Polygon>> {
    let mut polys = Vec::new();
    let mut current: Option<(usize, usize, Vec<Point2>)> = None;
    let finish = |cur: Option<(usize, usize, Vec<Point2>)>, polys: &mut Vec<Polygon>| -> Result<()> {
        if let Some((line, k, vs)) = cur {
            if vs.len() != k {
                return Err(Error::parse(line, 1, format!("expected {k} vertices, found {}", vs.len())));
            }
            polys.push(Polygon::new(vs).map_err(|e| Error::parse(line, 1, e.to_string()))?);
        }
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(&kind) = fields.first() else { continue };
        match kind {
            "poly" => {
                finish(current.take(), &mut polys)?;
                let k = fields
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .filter(|_| fields.len() == 2)
                    .ok_or_else(|| Error::parse(line_no, column_of(raw, kind), "expected 'poly <count>'"))?;
                current = Some((line_no, k, Vec::new()));
            }
            "v" => {
                if fields.len() != 3 {
                    return Err(Error::parse(line_no, column_of(raw, kind), "expected 'v <x> <y>'"));
                }
                let Some((_, _, vs)) = current.as_mut() else {
                    return Err(Error::parse(line_no, column_of(raw, kind), "vertex before 'poly' line"));
                };
                let x = parse_coordinate(raw, line_no, fields[1])?;
                let y = parse_coordinate(raw, line_no, fields[2])?;
                vs.push(Point2::new(x, y));
            }
            _ => {
                finish(current.take(), &mut polys)?;
                extra(line_no, raw, &fields)?;
            }
        }
    }
    finish(current.take(), &mut polys)?;
    Ok(polys)
}

pub fn parse_polygons(text: &str) -> Result<Vec<Polygon>> {
    parse_polygons_with(text, |line, raw, fields| {
        Err(Error::parse(line, column_of(raw, fields[0]), format!("unknown item '{}'", fields[0])))
    })
}

/// Parses a file holding exactly one polygon.
pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let mut polys = parse_polygons(text)?;
    match polys.len() {
        1 => Ok(polys.pop().unwrap()),
        k => Err(Error::InvalidInput(format!("expected one polygon, found {k}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn square() -> Polygon {
        Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap()
    }

    #[test]
    fn square_translates() {
        let s = square();
        assert!(!polygons_intersect(&s, &s.translate(&pt(2, 0))));
        assert!(polygons_intersect(&s, &s.translate(&pt(1, 0))));
        assert!(polygons_intersect(&s, &s.translate(&pt(1, 1))));
        assert!(polygons_intersect(&s, &s));
        let tri = Polygon::new(vec![pt(0, 0), pt(2, 0), pt(0, 2)]).unwrap();
        let sq = square().translate(&pt(1, 1));
        assert!(polygons_intersect(&tri, &sq));
        let far = square().translate(&Point2::new(rat(11, 10), rat(11, 10)));
        assert!(!polygons_intersect(&tri, &far));
    }

    #[test]
    fn containment_without_edge_contact() {
        let big = Polygon::new(vec![pt(0, 0), pt(10, 0), pt(10, 10), pt(0, 10)]).unwrap();
        let small = square().translate(&pt(4, 4));
        assert!(polygons_intersect(&big, &small));
        assert!(polygons_intersect(&small, &big));
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&square()), (pt(0, 0), pt(1, 1)));
        let tri = Polygon::new(vec![pt(0, 0), pt(4, 0), pt(0, 3)]).unwrap();
        let (p, q) = diameter(&tri);
        assert_eq!(((&q - &p).norm2(), p, q), (rat(25, 1), pt(0, 3), pt(4, 0)));
    }

    #[test]
    fn locations_and_hull() {
        let s = square();
        assert_eq!(point_in_polygon(&Point2::new(rat(1, 2), rat(1, 2)), &s), Location::Inside);
        assert_eq!(point_in_polygon(&pt(0, 0), &s), Location::Boundary);
        assert_eq!(point_in_polygon(&pt(2, 1), &s), Location::Outside);
        let h = convex_hull(&[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1), Point2::new(rat(1, 2), rat(1, 2))]).unwrap();
        assert_eq!(h, s);
        assert!(convex_hull(&[pt(0, 0), pt(1, 1), pt(2, 2)]).is_err());
    }

    #[test]
    fn construction_checks() {
        let cw = Polygon::new(vec![pt(0, 0), pt(0, 1), pt(1, 1), pt(1, 0)]).unwrap();
        assert!(cw.twice_area().is_positive());
        assert!(Polygon::new(vec![pt(0, 0), pt(1, 1), pt(1, 0), pt(0, 1)]).is_err());
        assert!(Polygon::new(vec![pt(0, 0), pt(1, 0)]).is_err());
        let l_shape = Polygon::new(vec![pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)]).unwrap();
        assert!(!l_shape.is_convex());
        assert_eq!(point_in_polygon(&Point2::new(rat(3, 2), rat(3, 2)), &l_shape), Location::Outside);
    }

    #[test]
    fn file_round_trip() {
        let text = square().to_file_string();
        assert_eq!(parse_polygon(&text).unwrap(), square());
        assert!(matches!(parse_polygon("poly 3\nv 0 0\nv 1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_polygon("poly 3\nv 0 0\nv 1 sqrt(2)\nv 0 1\n"),
            Err(Error::Parse { line: 3, column: 5, .. })
        ));
    }
}
