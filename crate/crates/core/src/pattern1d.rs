//! One-dimensional patterns of points and closed intervals.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::{parse_literal, ratio_is_rational, QuadNum};
use crate::graphcore::{column_of, IntersectionGraph};

pub(crate) fn qcmp(a: &QuadNum, b: &QuadNum) -> Ordering {
    a.cmp_exact(b).expect("values from one quadratic field")
}

/// A finite set of points and pairwise disjoint closed bounded intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern1D {
    points: Vec<QuadNum>,
    intervals: Vec<(QuadNum, QuadNum)>,
    d: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    HasInterval,
    RationalPoints,
    /// Carries the first irrational ratio `(p_i - p_0) / (p_1 - p_0)`.
    IrrationalPoints(QuadNum),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::HasInterval => write!(f, "HasInterval"),
            Classification::RationalPoints => write!(f, "RationalPoints"),
            Classification::IrrationalPoints(r) => write!(f, "IrrationalPoints ratio {}", r.pretty()),
        }
    }
}

fn shared_field<'a>(values: impl IntoIterator<Item = &'a QuadNum>) -> Result<BigInt> {
    let mut d = BigInt::one();
    for v in values {
        if v.field_d().is_one() {
            continue;
        }
        if d.is_one() {
            d = v.field_d().clone();
        } else if &d != v.field_d() {
            return Err(Error::IncompatibleFields(d.to_string(), v.field_d().to_string()));
        }
    }
    Ok(d)
}

impl Pattern1D {
    /// Sorts, merges overlapping or touching intervals and drops points covered by an interval.
    pub fn new(points: Vec<QuadNum>, intervals: Vec<(QuadNum, QuadNum)>) -> Result<Self> {
        if points.is_empty() && intervals.is_empty() {
            return Err(Error::InvalidInput("pattern must contain a point or an interval".into()));
        }
        let d = shared_field(points.iter().chain(intervals.iter().flat_map(|(l, h)| [l, h])))?;
        for (lo, hi) in &intervals {
            if qcmp(lo, hi) != Ordering::Less {
                return Err(Error::InvalidInput(format!("interval [{lo}, {hi}] needs lo < hi")));
            }
        }
        let mut ivs = intervals;
        ivs.sort_by(|a, b| qcmp(&a.0, &b.0));
        let mut merged: Vec<(QuadNum, QuadNum)> = Vec::new();
        for (lo, hi) in ivs {
            match merged.last_mut() {
                Some(last) if qcmp(&lo, &last.1) != Ordering::Greater => {
                    if qcmp(&hi, &last.1) == Ordering::Greater {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        let mut pts: Vec<QuadNum> = points
            .into_iter()
            .filter(|p| !merged.iter().any(|(l, h)| in_closed(p, l, h)))
            .collect();
        pts.sort_by(qcmp);
        pts.dedup();
        Ok(Pattern1D { points: pts, intervals: merged, d })
    }

    pub fn points(&self) -> &[QuadNum] {
        &self.points
    }

    pub fn intervals(&self) -> &[(QuadNum, QuadNum)] {
        &self.intervals
    }

    pub fn field_d(&self) -> &BigInt {
        &self.d
    }

    pub fn has_interval(&self) -> bool {
        !self.intervals.is_empty()
    }

    pub fn leftmost(&self) -> QuadNum {
        let a = self.points.first();
        let b = self.intervals.first().map(|iv| &iv.0);
        match (a, b) {
            (Some(a), Some(b)) => min_q(a, b).clone(),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!("pattern is nonempty"),
        }
    }

    pub fn rightmost(&self) -> QuadNum {
        let a = self.points.last();
        let b = self.intervals.iter().map(|iv| &iv.1).max_by(|x, y| qcmp(x, y));
        match (a, b) {
            (Some(a), Some(b)) => if qcmp(a, b) == Ordering::Less { b.clone() } else { a.clone() },
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!("pattern is nonempty"),
        }
    }

    pub fn span(&self) -> QuadNum {
        &self.rightmost() - &self.leftmost()
    }

    pub fn longest_interval(&self) -> Option<QuadNum> {
        self.intervals
            .iter()
            .map(|(l, h)| h - l)
            .max_by(qcmp)
    }

    /// Span divided by the length of the longest interval.
    pub fn w_ratio(&self) -> Result<QuadNum> {
        let len = self
            .longest_interval()
            .ok_or_else(|| Error::InvalidInput("w is undefined for a pattern without intervals".into()))?;
        self.span().try_div(&len)
    }

    pub fn translate(&self, t: &QuadNum) -> Result<Pattern1D> {
        self.map(|x| x.try_add(t))
    }

    fn map(&self, f: impl Fn(&QuadNum) -> Result<QuadNum>) -> Result<Pattern1D> {
        let points = self.points.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let intervals = self
            .intervals
            .iter()
            .map(|(l, h)| Ok((f(l)?, f(h)?)))
            .collect::<Result<Vec<_>>>()?;
        Pattern1D::new(points, intervals)
    }

    /// Shifts the leftmost coordinate to 0 and optionally rescales the longest interval to length 1.
    pub fn normalize(&self, rescale: bool) -> Pattern1D {
        let shift = -self.leftmost();
        let shifted = self.translate(&shift).expect("shift stays in the field");
        match shifted.longest_interval() {
            Some(len) if rescale => {
                let inv = len.recip().expect("interval length is positive");
                shifted.map(|x| x.try_mul(&inv)).expect("scaling stays in the field")
            }
            _ => shifted,
        }
    }

    /// Shifts the leftmost coordinate to 0 and scales the span to 1.
    pub fn unit_span(&self) -> Pattern1D {
        let shifted = self.translate(&-self.leftmost()).expect("shift stays in the field");
        let span = shifted.span();
        if span.is_zero() {
            return shifted;
        }
        let inv = span.recip().expect("span is positive");
        shifted.map(|x| x.try_mul(&inv)).expect("scaling stays in the field")
    }

    /// Whether `(x + Q)` and `(y + Q)` share a point.
    pub fn translates_intersect(&self, x: &QuadNum, y: &QuadNum) -> bool {
        let delta = y - x;
        self.offset_hits(&delta)
    }

    /// Whether `a - b = delta` for some `a, b` in the pattern.
    pub fn offset_hits(&self, delta: &QuadNum) -> bool {
        for p in &self.points {
            for q in &self.points {
                if &(p - q) == delta {
                    return true;
                }
            }
            let back = p - delta;
            let fwd = p + delta;
            for (l, h) in &self.intervals {
                if in_closed(&back, l, h) || in_closed(&fwd, l, h) {
                    return true;
                }
            }
        }
        for (l1, h1) in &self.intervals {
            for (l2, h2) in &self.intervals {
                let lo = l1 - h2;
                let hi = h1 - l2;
                if in_closed(delta, &lo, &hi) {
                    return true;
                }
            }
        }
        false
    }

    pub fn classify(&self) -> Classification {
        if self.has_interval() {
            return Classification::HasInterval;
        }
        if self.points.len() < 2 {
            return Classification::RationalPoints;
        }
        let p0 = &self.points[0];
        let reference = &self.points[1] - p0;
        for p in &self.points[2..] {
            let diff = p - p0;
            if !ratio_is_rational(&diff, &reference).expect("shared field") {
                let ratio = diff.try_div(&reference).expect("reference is nonzero");
                return Classification::IrrationalPoints(ratio);
            }
        }
        Classification::RationalPoints
    }

    /// Intersection graph of the translates `xs`.
    pub fn graph(&self, xs: &[QuadNum]) -> IntersectionGraph {
        let labels = xs.iter().map(|x| x.to_string()).collect();
        IntersectionGraph::build_labeled(xs, labels, |a, b| self.translates_intersect(a, b))
    }

    /// Pattern file text using canonical literals.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            writeln!(out, "point {p}").unwrap();
        }
        for (l, h) in &self.intervals {
            writeln!(out, "interval {l} {h}").unwrap();
        }
        out
    }
}

fn min_q<'a>(a: &'a QuadNum, b: &'a QuadNum) -> &'a QuadNum {
    if qcmp(a, b) == Ordering::Greater {
        b
    } else {
        a
    }
}

fn in_closed(x: &QuadNum, lo: &QuadNum, hi: &QuadNum) -> bool {
    qcmp(lo, x) != Ordering::Greater && qcmp(x, hi) != Ordering::Greater
}

/// Pattern as read from a file; unbounded intervals make every pair of translates intersect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternInput {
    Bounded(Pattern1D),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance1D {
    pub pattern: PatternInput,
    pub translates: Vec<QuadNum>,
}

impl Instance1D {
    pub fn to_file_string(&self) -> String {
        let mut out = match &self.pattern {
            PatternInput::Bounded(q) => q.to_file_string(),
            PatternInput::Unbounded => "interval -inf inf\n".to_string(),
        };
        for x in &self.translates {
            writeln!(out, "translate {x}").unwrap();
        }
        out
    }
}

enum Bound {
    Finite(QuadNum),
    Infinite,
}

fn parse_value(raw: &str, line: usize, token: &str, allow_inf: bool) -> Result<Bound> {
    if allow_inf && matches!(token, "inf" | "+inf" | "-inf") {
        return Ok(Bound::Infinite);
    }
    parse_literal(token)
        .map(Bound::Finite)
        .map_err(|(col, msg)| Error::parse(line, column_of(raw, token) + col - 1, msg))
}

fn parse_items(text: &str, allow_translates: bool) -> Result<(PatternInput, Vec<QuadNum>)> {
    let mut points = Vec::new();
    let mut intervals = Vec::new();
    let mut translates = Vec::new();
    let mut unbounded = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(&kind) = fields.first() else { continue };
        let want = |count: usize| -> Result<()> {
            if fields.len() == count {
                Ok(())
            } else {
                Err(Error::parse(line_no, column_of(raw, kind), format!("'{kind}' takes {} value(s)", count - 1)))
            }
        };
        let finite = |token: &str| -> Result<QuadNum> {
            match parse_value(raw, line_no, token, false)? {
                Bound::Finite(v) => Ok(v),
                Bound::Infinite => unreachable!(),
            }
        };
        match kind {
            "point" => {
                want(2)?;
                points.push(finite(fields[1])?);
            }
            "interval" => {
                want(3)?;
                let lo = parse_value(raw, line_no, fields[1], true)?;
                let hi = parse_value(raw, line_no, fields[2], true)?;
                match (lo, hi) {
                    (Bound::Finite(l), Bound::Finite(h)) => {
                        if qcmp_checked(&l, &h, raw, line_no, fields[1])? != Ordering::Less {
                            return Err(Error::parse(line_no, column_of(raw, fields[1]), "interval needs lo < hi"));
                        }
                        intervals.push((l, h));
                    }
                    _ => unbounded = true,
                }
            }
            "translate" if allow_translates => {
                want(2)?;
                translates.push(finite(fields[1])?);
            }
            _ => return Err(Error::parse(line_no, column_of(raw, kind), format!("unknown item '{kind}'"))),
        }
    }
    let pattern = if unbounded {
        PatternInput::Unbounded
    } else {
        PatternInput::Bounded(Pattern1D::new(points, intervals)?)
    };
    if let PatternInput::Bounded(q) = &pattern {
        let d = shared_field(translates.iter())?;
        if !d.is_one() && !q.field_d().is_one() && &d != q.field_d() {
            return Err(Error::IncompatibleFields(q.field_d().to_string(), d.to_string()));
        }
    }
    Ok((pattern, translates))
}

fn qcmp_checked(a: &QuadNum, b: &QuadNum, raw: &str, line: usize, token: &str) -> Result<Ordering> {
    a.cmp_exact(b)
        .map_err(|e| Error::parse(line, column_of(raw, token), e.to_string()))
}

/// Parses a pattern file. Unbounded intervals are rejected: every pair of translates of such a
/// pattern intersects, so the instance is a clique and needs no pattern at all.
pub fn parse_pattern(text: &str) -> Result<Pattern1D> {
    match parse_items(text, false)?.0 {
        PatternInput::Bounded(q) => Ok(q),
        PatternInput::Unbounded => Err(Error::InvalidInput(
            "unbounded interval: all translates intersect, so the graph is a clique".into(),
        )),
    }
}

/// Parses an instance file: a pattern block followed by `translate` lines.
pub fn parse_instance(text: &str) -> Result<Instance1D> {
    let (pattern, translates) = parse_items(text, true)?;
    Ok(Instance1D { pattern, translates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn pts(v: &[&str]) -> Pattern1D {
        Pattern1D::new(v.iter().map(|s| q(s)).collect(), vec![]).unwrap()
    }

    fn unit() -> Pattern1D {
        Pattern1D::new(vec![], vec![(q("0"), q("1"))]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pts(&["3", "5"]).normalize(false), pts(&["0", "2"]));
        let iv = Pattern1D::new(vec![], vec![(q("2"), q("6"))]).unwrap();
        assert_eq!(iv.normalize(true), unit());
        // the point 1+sqrt(2) lies inside [2,4] and is absorbed
        let absorbed = Pattern1D::new(vec![q("1+sqrt(2)")], vec![(q("2"), q("4"))]).unwrap();
        assert_eq!(absorbed.points(), &[] as &[QuadNum]);
        let moved = absorbed.translate(&q("-1-sqrt(2)")).unwrap();
        assert_eq!(moved.intervals(), &[(q("1-sqrt(2)"), q("3-sqrt(2)"))]);
        assert_eq!(absorbed.normalize(true), unit());
        let mixed = Pattern1D::new(vec![q("1+sqrt(2)")], vec![(q("3"), q("5"))]).unwrap();
        let shifted = mixed.normalize(false);
        assert_eq!(shifted.points(), &[q("0")]);
        assert_eq!(shifted.intervals(), &[(q("2-sqrt(2)"), q("4-sqrt(2)"))]);
        let scaled = mixed.normalize(true);
        assert_eq!(scaled.intervals()[0].0, QuadNum::new(rat(1, 1), rat(-1, 2), 2.into()).unwrap());
        assert_eq!(scaled.intervals()[0].1, QuadNum::new(rat(2, 1), rat(-1, 2), 2.into()).unwrap());
    }

    #[test]
    fn span_and_w() {
        assert_eq!((unit().span(), unit().w_ratio().unwrap()), (q("1"), q("1")));
        let a = Pattern1D::new(vec![q("0")], vec![(q("1"), q("2"))]).unwrap();
        assert_eq!((a.span(), a.w_ratio().unwrap()), (q("2"), q("2")));
        let b = Pattern1D::new(vec![q("3")], vec![(q("0"), q("1"))]).unwrap();
        assert_eq!((b.span(), b.w_ratio().unwrap()), (q("3"), q("3")));
        assert!(pts(&["0", "1"]).w_ratio().is_err());
    }

    #[test]
    fn intersections() {
        assert!(pts(&["0", "1"]).translates_intersect(&q("0"), &q("1")));
        assert!(unit().translates_intersect(&q("0"), &q("1")));
        assert!(!unit().translates_intersect(&q("0"), &q("1+1/1000")));
        let irr = pts(&["0", "1", "sqrt(2)"]);
        assert!(irr.translates_intersect(&q("0"), &q("-1+sqrt(2)")));
        assert!(!irr.translates_intersect(&q("0"), &q("1/2")));
        let mixed = Pattern1D::new(vec![q("0")], vec![(q("1"), q("2"))]).unwrap();
        assert!(mixed.translates_intersect(&q("0"), &q("3/2")));
        assert!(mixed.translates_intersect(&q("0"), &q("-3/2")));
        assert!(!mixed.translates_intersect(&q("0"), &q("5/2")));
    }

    #[test]
    fn classification() {
        assert_eq!(unit().classify(), Classification::HasInterval);
        assert_eq!(pts(&["0", "2", "3"]).classify(), Classification::RationalPoints);
        assert_eq!(pts(&["7"]).classify(), Classification::RationalPoints);
        let c = pts(&["0", "1", "sqrt(2)"]).classify();
        assert_eq!(c.to_string(), "IrrationalPoints ratio sqrt(2)");
    }

    #[test]
    fn construction_merges() {
        let p = Pattern1D::new(
            vec![q("1/2"), q("5"), q("5")],
            vec![(q("0"), q("1")), (q("1"), q("2")), (q("3"), q("4"))],
        )
        .unwrap();
        assert_eq!(p.points(), &[q("5")]);
        assert_eq!(p.intervals(), &[(q("0"), q("2")), (q("3"), q("4"))]);
        assert!(Pattern1D::new(vec![q("sqrt(2)"), q("sqrt(3)")], vec![]).is_err());
        assert!(Pattern1D::new(vec![], vec![]).is_err());
    }

    #[test]
    fn file_parsing() {
        let inst = parse_instance("# unit\ninterval 0 1\ntranslate 0\ntranslate 3/2\n").unwrap();
        assert_eq!(inst.pattern, PatternInput::Bounded(unit()));
        assert_eq!(inst.translates, vec![q("0"), q("3/2")]);
        assert_eq!(parse_instance(&inst.to_file_string()).unwrap(), inst);
        let unb = parse_instance("interval 0 inf\ntranslate 1\n").unwrap();
        assert_eq!(unb.pattern, PatternInput::Unbounded);
        assert!(matches!(parse_pattern("interval -inf 0\n"), Err(Error::InvalidInput(_))));
        match parse_pattern("point 1\npoint 2+x\n") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column >= 7);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pattern("interval 2 1\n"), Err(Error::Parse { line: 1, column: 10, .. })));
        assert!(matches!(parse_pattern("dot 1\n"), Err(Error::Parse { line: 1, column: 1, .. })));
    }
}
