//! Dominating sets of unit disk graphs through a vertical decomposition of
//! radius-2 circles.
//!
//! A unit disk at `p` meets the unit disk at `c` exactly when `p` lies in the
//! closed radius-2 disk around `c`. For a candidate set `D` the plane is cut
//! into relatively open faces by the circles around `D` and by vertical walls
//! through the arrangement's events. Each face is named by a descriptor that
//! mentions at most four circles, and the same descriptor names the same point
//! set in the decomposition of just those circles, so per-face point counts can
//! be tabulated once and summed for any `D`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{cmp_quadratic, rational_between, QuadNum, Rational, SqrtExpr};
use crate::geom2d::{parse_coordinate, Point2};
use crate::graphcore::{column_of, for_each_combination, IntersectionGraph};

fn four() -> Rational {
    Rational::from_integer(4.into())
}

/// Whether unit disks at `c1` and `c2` intersect (closed).
pub fn dominates_pair(c1: &Point2, c2: &Point2) -> bool {
    (c1 - c2).norm2() <= four()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskInstance {
    centers: Vec<Point2>,
}

impl DiskInstance {
    pub fn new(centers: Vec<Point2>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &centers {
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidInput(format!("duplicate center {c}")));
            }
        }
        Ok(DiskInstance { centers })
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn graph(&self) -> IntersectionGraph {
        IntersectionGraph::build(&self.centers, dominates_pair)
    }

    /// Number of centers within distance 2 of some center in `set`.
    pub fn direct_count(&self, set: &[usize]) -> usize {
        self.centers
            .iter()
            .filter(|p| set.iter().any(|&d| dominates_pair(p, &self.centers[d])))
            .count()
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for c in &self.centers {
            writeln!(out, "disk {} {}", c.x, c.y).unwrap();
        }
        out
    }
}

pub fn parse_disks(text: &str) -> Result<DiskInstance> {
    let mut centers = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(&kind) = fields.first() else { continue };
        if kind != "disk" || fields.len() != 3 {
            return Err(Error::parse(line_no, column_of(raw, kind), "expected 'disk <x> <y>'"));
        }
        let x = parse_coordinate(raw, line_no, fields[1])?;
        let y = parse_coordinate(raw, line_no, fields[2])?;
        centers.push(Point2::new(x, y));
    }
    DiskInstance::new(centers)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    Lower,
    Upper,
}

/// Field-free name of an arrangement event. `Cross(a, b, s)` has `a < b`; the
/// two crossings are `m + s*sqrt(t)*(-dy, dx)` for `s = +-1`, with `s = 0` at tangency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKey {
    Left(usize),
    Right(usize),
    Cross(usize, usize, i8),
}

impl EventKey {
    pub fn circles(&self) -> Vec<usize> {
        match *self {
            EventKey::Left(c) | EventKey::Right(c) => vec![c],
            EventKey::Cross(a, b, _) => vec![a, b],
        }
    }

    fn extra(&self, keep: &[usize]) -> usize {
        self.circles().iter().filter(|c| !keep.contains(c)).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceKey {
    Vertex(EventKey),
    Arc {
        circle: usize,
        half: Half,
        from: EventKey,
        to: EventKey,
    },
    /// Vertical segment from `event` up (or down) to the first crossing of `hit`.
    Wall {
        event: EventKey,
        up: bool,
        hit: Option<usize>,
    },
    Trapezoid {
        top: Option<(usize, Half)>,
        bottom: Option<(usize, Half)>,
        left: Option<EventKey>,
        right: Option<EventKey>,
    },
}

impl FaceKey {
    pub fn definers(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        match self {
            FaceKey::Vertex(e) => s.extend(e.circles()),
            FaceKey::Arc { circle, from, to, .. } => {
                s.insert(*circle);
                s.extend(from.circles());
                s.extend(to.circles());
            }
            FaceKey::Wall { event, hit, .. } => {
                s.extend(event.circles());
                s.extend(hit.iter().copied());
            }
            FaceKey::Trapezoid { top, bottom, left, right } => {
                s.extend(top.iter().map(|t| t.0));
                s.extend(bottom.iter().map(|t| t.0));
                s.extend(left.iter().flat_map(|e| e.circles()));
                s.extend(right.iter().flat_map(|e| e.circles()));
            }
        }
        s
    }

    pub fn dimension(&self) -> usize {
        match self {
            FaceKey::Vertex(_) => 0,
            FaceKey::Arc { .. } | FaceKey::Wall { .. } => 1,
            FaceKey::Trapezoid { .. } => 2,
        }
    }
}

/// Exact event coordinates, kept both in a quadratic field and as radical expressions.
#[derive(Clone, Debug)]
struct Event {
    key: EventKey,
    x: QuadNum,
    y: QuadNum,
    xs: SqrtExpr,
    ys: SqrtExpr,
}

impl Event {
    fn new(key: EventKey, x: QuadNum, y: QuadNum) -> Self {
        let xs = x.to_sqrt_expr();
        let ys = y.to_sqrt_expr();
        Event { key, x, y, xs, ys }
    }
}

/// Sign of `|p - c|^2 - 4` from floating-point coordinates, when it is unambiguous.
fn float_power(px: f64, py: f64, c: &Point2) -> Option<i32> {
    let cx = c.x.to_f64().unwrap_or(f64::NAN);
    let cy = c.y.to_f64().unwrap_or(f64::NAN);
    let (fx, fy) = (px - cx, py - cy);
    let f = fx * fx + fy * fy - 4.0;
    let scale = (px.abs() + cx.abs() + 1.0).powi(2) + (py.abs() + cy.abs() + 1.0).powi(2);
    (f.is_finite() && f.abs() > 1e-9 * scale).then_some(if f > 0.0 { 1 } else { -1 })
}

/// Geometry queries on the radius-2 circles around a fixed list of centers.
#[derive(Clone, Copy)]
struct Circles<'a> {
    centers: &'a [Point2],
}

fn sqrt_rational(s: &Rational) -> QuadNum {
    QuadNum::new(
        Rational::zero(),
        Rational::new(1.into(), s.denom().clone()),
        s.numer() * s.denom(),
    )
    .expect("radicand is positive and small")
}

impl<'a> Circles<'a> {
    fn c(&self, i: usize) -> &'a Point2 {
        &self.centers[i]
    }

    fn event(&self, key: EventKey) -> Event {
        match key {
            EventKey::Left(c) | EventKey::Right(c) => {
                let p = self.c(c);
                let dx = if matches!(key, EventKey::Left(_)) { -2 } else { 2 };
                Event::new(
                    key,
                    QuadNum::rational(&p.x + Rational::from_integer(dx.into())),
                    QuadNum::rational(p.y.clone()),
                )
            }
            EventKey::Cross(a, b, sign) => {
                let (ca, cb) = (self.c(a), self.c(b));
                let d = cb - ca;
                let mx = QuadNum::rational((&ca.x + &cb.x) / Rational::from_integer(2.into()));
                let my = QuadNum::rational((&ca.y + &cb.y) / Rational::from_integer(2.into()));
                if sign == 0 {
                    return Event::new(key, mx, my);
                }
                let s = four() / d.norm2() - Rational::new(1.into(), 4.into());
                let root = sqrt_rational(&s).scale(&Rational::from_integer(sign.into()));
                let x = &mx - &root.scale(&d.y);
                let y = &my + &root.scale(&d.x);
                Event::new(key, x, y)
            }
        }
    }

    /// All events of the circles in `ids`.
    fn events(&self, ids: &[usize]) -> Vec<Event> {
        let mut keys = Vec::new();
        for &c in ids {
            keys.push(EventKey::Left(c));
            keys.push(EventKey::Right(c));
        }
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let (a, b) = (a.min(b), a.max(b));
                let dist2 = (self.c(b) - self.c(a)).norm2();
                let limit = Rational::from_integer(16.into());
                match dist2.cmp(&limit) {
                    Ordering::Greater => {}
                    Ordering::Equal => keys.push(EventKey::Cross(a, b, 0)),
                    Ordering::Less => {
                        keys.push(EventKey::Cross(a, b, 1));
                        keys.push(EventKey::Cross(a, b, -1));
                    }
                }
            }
        }
        keys.into_iter().map(|k| self.event(k)).collect()
    }

    /// Sign of `|p - c|^2 - 4` for an event point.
    fn power(&self, c: usize, e: &Event) -> i32 {
        let cc = self.c(c);
        if let Some(sign) = float_power(e.xs.to_f64(), e.ys.to_f64(), cc) {
            return sign;
        }
        let (x, y) = (&e.x, &e.y);
        let dx = x - &QuadNum::rational(cc.x.clone());
        let dy = y - &QuadNum::rational(cc.y.clone());
        (&(&dx * &dx) + &(&dy * &dy) - QuadNum::rational(four())).sign()
    }

    fn power_rational(&self, c: usize, p: &Point2) -> Ordering {
        let cc = self.c(c);
        if let Some(sign) = float_power(p.x.to_f64().unwrap_or(f64::NAN), p.y.to_f64().unwrap_or(f64::NAN), cc) {
            return sign.cmp(&0);
        }
        (p - cc).norm2().cmp(&four())
    }

    /// Height of an arc at a rational abscissa inside the circle's x-range.
    fn arc_y(&self, c: usize, half: Half, x: &Rational) -> SqrtExpr {
        let cc = self.c(c);
        let dx = x - &cc.x;
        let b = if half == Half::Upper { Rational::one() } else { -Rational::one() };
        SqrtExpr::from_parts(cc.y.clone(), b, four() - &dx * &dx)
    }

    fn x_range(&self, c: usize) -> (SqrtExpr, SqrtExpr) {
        let x = &self.c(c).x;
        (
            SqrtExpr::rational(x - Rational::from_integer(2.into())),
            SqrtExpr::rational(x + Rational::from_integer(2.into())),
        )
    }

    /// Whether the circle meets the vertical line at `x` in two points.
    fn strictly_spans(&self, c: usize, x: &SqrtExpr) -> bool {
        let cx = self.c(c).x.to_f64().unwrap_or(f64::NAN);
        let off = (x.to_f64() - cx).abs();
        let tol = 1e-9 * (1.0 + x.to_f64().abs() + cx.abs());
        if off.is_finite() && (off - 2.0).abs() > tol {
            return off < 2.0;
        }
        let (lo, hi) = self.x_range(c);
        &lo < x && x < &hi
    }

    fn half_of(&self, c: usize, y: &SqrtExpr) -> Option<Half> {
        match cmp_quadratic(y, &SqrtExpr::rational(self.c(c).y.clone())) {
            Ordering::Greater => Some(Half::Upper),
            Ordering::Less => Some(Half::Lower),
            Ordering::Equal => None,
        }
    }
}

/// Item on an event line: a point where events coincide, or a plain arc crossing.
#[derive(Clone, Debug)]
enum LineItem {
    Group {
        events: Vec<usize>,
        /// Circles through the point.
        circles: BTreeSet<usize>,
    },
    Crossing(usize, Half),
}

#[derive(Clone, Debug)]
pub struct Face {
    pub key: FaceKey,
    pub covered: bool,
}

/// Vertical decomposition of the radius-2 circles around a subset of centers.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub faces: Vec<Face>,
    event_xs: Vec<SqrtExpr>,
}

impl Decomposition {
    /// Distinct event abscissae in increasing order.
    pub fn event_xs(&self) -> &[SqrtExpr] {
        &self.event_xs
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

fn canonical_event(events: &[Event], idx: &[usize], keep: &[usize]) -> EventKey {
    idx.iter()
        .map(|&i| events[i].key)
        .min_by_key(|k| (k.extra(keep), *k))
        .expect("group is nonempty")
}

fn bound_below(x: &SqrtExpr) -> Rational {
    x.approx_bounds(16).0 - Rational::one()
}

fn bound_above(x: &SqrtExpr) -> Rational {
    x.approx_bounds(16).1 + Rational::one()
}

/// Decomposes the arrangement of radius-2 circles around `centers[ids]`.
pub fn vertical_decomposition(centers: &[Point2], ids: &[usize]) -> Decomposition {
    let mut ids: Vec<usize> = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let circ = Circles { centers };
    let events = circ.events(&ids);

    // distinct abscissae
    let mut order: Vec<usize> = (0..events.len()).collect();
    order.sort_by(|&a, &b| cmp_quadratic(&events[a].xs, &events[b].xs).then(events[a].key.cmp(&events[b].key)));
    let mut xs: Vec<SqrtExpr> = Vec::new();
    let mut at_line: Vec<Vec<usize>> = Vec::new();
    for &e in &order {
        if xs.last() != Some(&events[e].xs) {
            xs.push(events[e].xs.clone());
            at_line.push(Vec::new());
        }
        at_line.last_mut().unwrap().push(e);
    }
    let lines = xs.len();

    // slabs: slab j lies left of line j; slab `lines` is the rightmost
    let samples: Vec<Rational> = (0..=lines)
        .map(|j| {
            if lines == 0 {
                Rational::zero()
            } else if j == 0 {
                bound_below(&xs[0])
            } else if j == lines {
                bound_above(&xs[lines - 1])
            } else {
                rational_between(&xs[j - 1], &xs[j])
            }
        })
        .collect();
    let slab_arcs: Vec<Vec<(usize, Half)>> = samples
        .iter()
        .map(|x| {
            let sx = SqrtExpr::rational(x.clone());
            let mut arcs: Vec<(usize, Half)> = ids
                .iter()
                .filter(|&&c| circ.strictly_spans(c, &sx))
                .flat_map(|&c| [(c, Half::Lower), (c, Half::Upper)])
                .collect();
            arcs.sort_by_cached_key(|a| circ.arc_y(a.0, a.1, x));
            arcs
        })
        .collect();
    let cell_base: Vec<usize> = slab_arcs
        .iter()
        .scan(0, |acc, arcs| {
            let base = *acc;
            *acc += arcs.len() + 1;
            Some(base)
        })
        .collect();
    let cell_total = cell_base.last().map_or(0, |b| b + slab_arcs.last().unwrap().len() + 1);
    let mut uf = UnionFind((0..cell_total).collect());

    struct Line {
        items: Vec<LineItem>,
        /// Right-slab cell adjacent to each segment.
        right_cell: Vec<usize>,
        wall: Vec<bool>,
        /// Item index where each arc of the left and right slab meets the line.
        left_lim: Vec<usize>,
        right_lim: Vec<usize>,
    }
    let mut line_data: Vec<Line> = Vec::with_capacity(lines);

    for j in 0..lines {
        let x = &xs[j];
        // group coincident events
        let mut items: Vec<LineItem> = Vec::new();
        let mut group_pts: Vec<usize> = Vec::new();
        for &e in &at_line[j] {
            match group_pts.iter().position(|&g| events[g].ys == events[e].ys && events[g].xs == events[e].xs) {
                Some(pos) => {
                    if let LineItem::Group { events: evs, circles } = &mut items[pos] {
                        evs.push(e);
                        circles.extend(events[e].key.circles());
                    }
                }
                None => {
                    group_pts.push(e);
                    items.push(LineItem::Group {
                        events: vec![e],
                        circles: events[e].key.circles().into_iter().collect(),
                    });
                }
            }
        }
        // circles crossing the line away from their extremes
        let spanning: Vec<usize> = ids.iter().copied().filter(|&c| circ.strictly_spans(c, x)).collect();
        let mut attach: HashMap<(usize, Half), usize> = HashMap::new();
        for &c in &spanning {
            for (gi, &g) in group_pts.iter().enumerate() {
                let through = match &items[gi] {
                    LineItem::Group { circles, .. } => circles.contains(&c),
                    LineItem::Crossing(..) => false,
                };
                if through || circ.power(c, &events[g]) == 0 {
                    let half = circ.half_of(c, &events[g].ys).expect("line crossing is off the equator");
                    attach.insert((c, half), gi);
                    if let LineItem::Group { circles, .. } = &mut items[gi] {
                        circles.insert(c);
                    }
                }
            }
        }
        for &c in &spanning {
            for half in [Half::Lower, Half::Upper] {
                if !attach.contains_key(&(c, half)) {
                    items.push(LineItem::Crossing(c, half));
                }
            }
        }
        let left_rank: HashMap<(usize, Half), usize> =
            slab_arcs[j].iter().enumerate().map(|(r, a)| (*a, r)).collect();
        let group_vs_arc = |g: &[usize], c: usize, h: Half| -> Ordering {
            let e = &events[g[0]];
            let above = if circ.power(c, e) < 0 {
                h == Half::Lower
            } else {
                circ.half_of(c, &e.ys) == Some(Half::Upper)
            };
            if above {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        };
        let cmp_items = |a: &LineItem, b: &LineItem| -> Ordering {
            match (a, b) {
                (LineItem::Group { events: ea, .. }, LineItem::Group { events: eb, .. }) => {
                    cmp_quadratic(&events[ea[0]].ys, &events[eb[0]].ys)
                }
                (LineItem::Crossing(c1, h1), LineItem::Crossing(c2, h2)) => {
                    left_rank[&(*c1, *h1)].cmp(&left_rank[&(*c2, *h2)])
                }
                (LineItem::Group { events: g, .. }, LineItem::Crossing(c, h)) => group_vs_arc(g, *c, *h),
                (LineItem::Crossing(c, h), LineItem::Group { events: g, .. }) => group_vs_arc(g, *c, *h).reverse(),
            }
        };
        items.sort_by(cmp_items);
        let m = items.len();

        // locate every left-slab and right-slab arc on the line
        let index_of_point = |c: usize, half: Half, ext: Option<EventKey>| -> usize {
            if let Some(k) = ext {
                return items
                    .iter()
                    .position(|it| matches!(it, LineItem::Group { events: evs, .. } if evs.iter().any(|&e| events[e].key == k)))
                    .expect("extreme event is on its line");
            }
            items
                .iter()
                .position(|it| match it {
                    LineItem::Crossing(c2, h2) => *c2 == c && *h2 == half,
                    LineItem::Group { events: evs, .. } => attach
                        .get(&(c, half))
                        .is_some_and(|&gi| evs.contains(&group_pts[gi])),
                })
                .expect("arc meets its line")
        };
        let limit = |slab: usize, right_side: bool| -> Vec<usize> {
            slab_arcs[slab]
                .iter()
                .map(|&(c, half)| {
                    if circ.strictly_spans(c, x) {
                        index_of_point(c, half, None)
                    } else if right_side {
                        index_of_point(c, half, Some(EventKey::Left(c)))
                    } else {
                        index_of_point(c, half, Some(EventKey::Right(c)))
                    }
                })
                .collect()
        };
        let left_lim = limit(j, false);
        let right_lim = limit(j + 1, true);
        let mut right_cell = Vec::with_capacity(m + 1);
        let mut wall = Vec::with_capacity(m + 1);
        for t in 0..=m {
            let lc = cell_base[j] + left_lim.iter().filter(|&&i| i < t).count();
            let rc = cell_base[j + 1] + right_lim.iter().filter(|&&i| i < t).count();
            let is_wall = (t >= 1 && matches!(items[t - 1], LineItem::Group { .. }))
                || (t < m && matches!(items[t], LineItem::Group { .. }));
            if !is_wall {
                uf.union(lc, rc);
            }
            right_cell.push(rc);
            wall.push(is_wall);
        }
        line_data.push(Line { items, right_cell, wall, left_lim, right_lim });
    }

    let mut faces: Vec<Face> = Vec::new();
    let covered_by_d = |p: &Point2| ids.iter().any(|&c| circ.power_rational(c, p) == Ordering::Less);

    // two-dimensional faces
    let mut cell_slab = Vec::with_capacity(cell_total);
    for (s, arcs) in slab_arcs.iter().enumerate() {
        for g in 0..=arcs.len() {
            cell_slab.push((s, g));
        }
    }
    let mut root_faces: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<(usize, Vec<usize>)> = Vec::new();
    for cell in 0..cell_total {
        let r = uf.find(cell);
        match root_faces.get(&r) {
            Some(&fi) => members[fi].1.push(cell),
            None => {
                root_faces.insert(r, members.len());
                members.push((r, vec![cell]));
            }
        }
    }
    let mut root_covered: HashMap<usize, bool> = HashMap::new();
    for (root, cells) in &members {
        let (s0, g0) = cell_slab[cells[0]];
        let arcs = &slab_arcs[s0];
        let bottom = if g0 >= 1 { Some(arcs[g0 - 1]) } else { None };
        let top = arcs.get(g0).copied();
        let keep: Vec<usize> = top.iter().chain(bottom.iter()).map(|t| t.0).collect();
        let smin = cells.iter().map(|&c| cell_slab[c].0).min().unwrap();
        let smax = cells.iter().map(|&c| cell_slab[c].0).max().unwrap();
        // groups on the face's closure along a bounding line
        let side = |line: usize, right_of_line: bool| -> EventKey {
            let ld = &line_data[line];
            let slab = if right_of_line { line + 1 } else { line };
            let lims = if right_of_line { &ld.right_lim } else { &ld.left_lim };
            let mut cands: Vec<usize> = Vec::new();
            for &cell in cells.iter().filter(|&&c| cell_slab[c].0 == slab) {
                let g = cell_slab[cell].1;
                let lo = if g >= 1 { lims[g - 1] } else { 0 };
                let hi = lims.get(g).copied().unwrap_or(ld.items.len().saturating_sub(1));
                for item in ld.items.iter().take(hi + 1).skip(lo) {
                    if let LineItem::Group { events: evs, .. } = item {
                        cands.extend(evs.iter().copied());
                    }
                }
            }
            canonical_event(&events, &cands, &keep)
        };
        let left = (smin > 0).then(|| side(smin - 1, true));
        let right = (smax < lines).then(|| side(smax, false));
        // sample point for coverage
        let sx = samples[s0].clone();
        let ylo = bottom.map(|(c, h)| circ.arc_y(c, h, &sx));
        let yhi = top.map(|(c, h)| circ.arc_y(c, h, &sx));
        let sy = match (&ylo, &yhi) {
            (Some(a), Some(b)) => rational_between(a, b),
            (Some(a), None) => bound_above(a),
            (None, Some(b)) => bound_below(b),
            (None, None) => Rational::zero(),
        };
        let covered = covered_by_d(&Point2::new(sx, sy));
        root_covered.insert(*root, covered);
        faces.push(Face { key: FaceKey::Trapezoid { top, bottom, left, right }, covered });
    }

    // walls
    for ld in &line_data {
        let m = ld.items.len();
        for t in 0..=m {
            if !ld.wall[t] {
                continue;
            }
            let lo = t.checked_sub(1).map(|i| &ld.items[i]);
            let hi = ld.items.get(t);
            let hit_circle = |it: Option<&LineItem>| -> Option<usize> {
                it.map(|it| match it {
                    LineItem::Crossing(c, _) => *c,
                    LineItem::Group { circles, .. } => *circles.iter().next().unwrap(),
                })
            };
            let key = match lo {
                Some(LineItem::Group { events: evs, .. }) => FaceKey::Wall {
                    event: canonical_event(&events, evs, &[]),
                    up: true,
                    hit: hit_circle(hi),
                },
                _ => match hi {
                    Some(LineItem::Group { events: evs, .. }) => FaceKey::Wall {
                        event: canonical_event(&events, evs, &[]),
                        up: false,
                        hit: hit_circle(lo),
                    },
                    _ => unreachable!("walls touch an event"),
                },
            };
            let covered = root_covered[&uf.find(ld.right_cell[t])];
            faces.push(Face { key, covered });
        }
    }

    // arcs and vertices
    let mut vertex_seen: Vec<usize> = Vec::new();
    for (gi, e) in events.iter().enumerate() {
        if vertex_seen.iter().any(|&v| events[v].xs == e.xs && events[v].ys == e.ys) {
            continue;
        }
        vertex_seen.push(gi);
        let same: Vec<usize> = (0..events.len())
            .filter(|&i| events[i].xs == e.xs && events[i].ys == e.ys)
            .collect();
        faces.push(Face { key: FaceKey::Vertex(canonical_event(&events, &same, &[])), covered: true });
    }
    for &c in &ids {
        for half in [Half::Lower, Half::Upper] {
            let mut pts: Vec<usize> = (0..events.len())
                .filter(|&i| {
                    let ev = &events[i];
                    ev.key.circles().contains(&c) && circ.half_of(c, &ev.ys).is_none_or(|h| h == half)
                })
                .collect();
            pts.sort_by(|&a, &b| cmp_quadratic(&events[a].xs, &events[b].xs));
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for i in pts {
                match groups.last_mut() {
                    Some(g) if events[g[0]].xs == events[i].xs => g.push(i),
                    _ => groups.push(vec![i]),
                }
            }
            for w in groups.windows(2) {
                let from = canonical_event(&events, &w[0], &[c]);
                let to = canonical_event(&events, &w[1], &[c]);
                faces.push(Face { key: FaceKey::Arc { circle: c, half, from, to }, covered: true });
            }
        }
    }
    Decomposition { faces, event_xs: xs }
}

/// Region membership of a rational point in the face named by `key`.
pub fn face_contains(centers: &[Point2], key: &FaceKey, p: &Point2) -> bool {
    FaceRegion::new(centers, key).contains(p)
}

/// Number of `points` inside the face named by `key`.
pub fn face_count(centers: &[Point2], key: &FaceKey, points: &[Point2]) -> usize {
    let region = FaceRegion::new(centers, key);
    points.iter().filter(|p| region.contains(p)).count()
}

/// A face descriptor with its event coordinates resolved once.
struct FaceRegion<'a> {
    circ: Circles<'a>,
    key: &'a FaceKey,
    /// Events named by the key, in the order they appear in it.
    ev: Vec<Event>,
    /// Rational bounds on the face's x-extent, for a cheap prefilter.
    x_lo: Option<Rational>,
    x_hi: Option<Rational>,
}

impl<'a> FaceRegion<'a> {
    fn new(centers: &'a [Point2], key: &'a FaceKey) -> Self {
        let circ = Circles { centers };
        let keys: Vec<EventKey> = match key {
            FaceKey::Vertex(e) | FaceKey::Wall { event: e, .. } => vec![*e],
            FaceKey::Arc { from, to, .. } => vec![*from, *to],
            FaceKey::Trapezoid { left, right, .. } => left.iter().chain(right.iter()).copied().collect(),
        };
        let ev: Vec<Event> = keys.into_iter().map(|k| circ.event(k)).collect();
        let (mut x_lo, mut x_hi) = (None, None);
        match key {
            FaceKey::Vertex(_) | FaceKey::Wall { .. } => {
                let (lo, hi) = ev[0].xs.approx_bounds(16);
                x_lo = Some(lo);
                x_hi = Some(hi);
            }
            FaceKey::Arc { .. } => {
                x_lo = Some(ev[0].xs.approx_bounds(16).0);
                x_hi = Some(ev[1].xs.approx_bounds(16).1);
            }
            FaceKey::Trapezoid { left, right, top, bottom } => {
                let mut i = 0;
                if left.is_some() {
                    x_lo = Some(ev[0].xs.approx_bounds(16).0);
                    i = 1;
                }
                if right.is_some() {
                    x_hi = Some(ev[i].xs.approx_bounds(16).1);
                }
                if let Some((c, _)) = top.or(*bottom) {
                    let cx = &centers[c].x;
                    let two = Rational::from_integer(2.into());
                    x_lo = Some(x_lo.map_or(cx - &two, |v| v.max(cx - &two)));
                    x_hi = Some(x_hi.map_or(cx + &two, |v| v.min(cx + &two)));
                }
            }
        }
        FaceRegion { circ, key, ev, x_lo, x_hi }
    }

    fn contains(&self, p: &Point2) -> bool {
        if self.x_lo.as_ref().is_some_and(|lo| &p.x < lo) || self.x_hi.as_ref().is_some_and(|hi| &p.x > hi) {
            return false;
        }
        let circ = self.circ;
        let px = SqrtExpr::rational(p.x.clone());
        let py = SqrtExpr::rational(p.y.clone());
        match self.key {
            FaceKey::Vertex(_) => self.ev[0].xs == px && self.ev[0].ys == py,
            FaceKey::Arc { circle, half, .. } => {
                circ.power_rational(*circle, p) == Ordering::Equal
                    && circ.half_of(*circle, &py) == Some(*half)
                    && self.ev[0].xs < px
                    && px < self.ev[1].xs
            }
            FaceKey::Wall { up, hit, .. } => {
                let ev = &self.ev[0];
                if ev.xs != px {
                    return false;
                }
                let beyond = if *up { py > ev.ys } else { py < ev.ys };
                if !beyond {
                    return false;
                }
                let Some(c) = hit else { return true };
                // nearest crossing of the hit circle beyond the event
                let lower = circ.arc_y(*c, Half::Lower, &p.x);
                let upper = circ.arc_y(*c, Half::Upper, &p.x);
                let end = if *up {
                    if lower > ev.ys { lower } else { upper }
                } else if upper < ev.ys {
                    upper
                } else {
                    lower
                };
                if *up { py < end } else { py > end }
            }
            FaceKey::Trapezoid { top, bottom, left, right } => {
                let mut i = 0;
                if left.is_some() {
                    if self.ev[0].xs >= px {
                        return false;
                    }
                    i = 1;
                }
                if right.is_some() && self.ev[i].xs <= px {
                    return false;
                }
                for (bound, is_top) in [(top, true), (bottom, false)] {
                    if let Some((c, h)) = bound {
                        if !circ.strictly_spans(*c, &px) {
                            return false;
                        }
                        let y = circ.arc_y(*c, *h, &p.x);
                        if (is_top && py >= y) || (!is_top && py <= y) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

/// Per-face point counts over the centers, keyed by descriptor.
#[derive(Clone, Debug)]
pub struct LookupTable {
    counts: HashMap<FaceKey, usize>,
    complete: bool,
}

impl LookupTable {
    /// Empty table that counts faces on first use.
    pub fn lazy() -> Self {
        LookupTable { counts: HashMap::new(), complete: false }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, key: &FaceKey) -> Option<usize> {
        self.counts.get(key).copied()
    }

    fn count(&mut self, inst: &DiskInstance, key: &FaceKey) -> Result<usize> {
        if let Some(&c) = self.counts.get(key) {
            return Ok(c);
        }
        if self.complete {
            return Err(Error::Internal(format!("face {key:?} missing from lookup table")));
        }
        let c = face_count(&inst.centers, key, &inst.centers);
        self.counts.insert(key.clone(), c);
        Ok(c)
    }
}

/// Tabulates every face of every decomposition of at most four circles, keyed by
/// descriptors whose definer set is exactly that subset.
pub fn build_lookup(inst: &DiskInstance) -> Result<LookupTable> {
    build_lookup_with(inst, 4)
}

/// Like [`build_lookup`] but only over subsets of at most `max_circles` circles.
pub fn build_lookup_with(inst: &DiskInstance, max_circles: usize) -> Result<LookupTable> {
    let n = inst.len();
    let mut counts = HashMap::new();
    for size in 1..=max_circles.min(4).min(n) {
        for_each_combination(n, size, |subset| {
            let dec = vertical_decomposition(&inst.centers, subset);
            for f in dec.faces {
                if f.key.definers().iter().copied().eq(subset.iter().copied()) {
                    let c = face_count(&inst.centers, &f.key, &inst.centers);
                    counts.insert(f.key, c);
                }
            }
            false
        });
    }
    if n > 0 {
        let whole = FaceKey::Trapezoid { top: None, bottom: None, left: None, right: None };
        let c = face_count(&inst.centers, &whole, &inst.centers);
        counts.insert(whole, c);
    }
    Ok(LookupTable { counts, complete: true })
}

/// Number of centers covered by the radius-2 disks around `set`, summed over covered faces.
pub fn coverage_count(inst: &DiskInstance, table: &mut LookupTable, set: &[usize]) -> Result<usize> {
    if let Some(&bad) = set.iter().find(|&&i| i >= inst.len()) {
        return Err(Error::VertexOutOfRange(bad, inst.len()));
    }
    let dec = vertical_decomposition(&inst.centers, set);
    let mut total = 0;
    for f in &dec.faces {
        if f.key.definers().len() > 4 {
            return Err(Error::Internal(format!("face {:?} has more than four definers", f.key)));
        }
        if f.covered {
            total += table.count(inst, &f.key)?;
        }
    }
    Ok(total)
}

/// First `k`-subset in lexicographic order whose disks cover every center.
pub fn xp_solve(inst: &DiskInstance, table: &mut LookupTable, k: usize) -> Result<Option<Vec<usize>>> {
    let n = inst.len();
    if n == 0 {
        return Ok(Some(vec![]));
    }
    let mut found = None;
    let mut err = None;
    for_each_combination(n, k.min(n), |subset| match coverage_count(inst, table, subset) {
        Ok(c) if c == n => {
            found = Some(subset.to_vec());
            true
        }
        Ok(_) => false,
        Err(e) => {
            err = Some(e);
            true
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Smallest `k` for which [`xp_solve`] succeeds, with its witness.
pub fn xp_minimum(inst: &DiskInstance, table: &mut LookupTable) -> Result<(usize, Vec<usize>)> {
    for k in 0..=inst.len() {
        if let Some(w) = xp_solve(inst, table, k)? {
            return Ok((k, w));
        }
    }
    Err(Error::Internal("no covering subset".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::geom2d::pt;

    #[test]
    fn pair_predicate() {
        assert!(dominates_pair(&pt(0, 0), &pt(2, 0)));
        assert!(!dominates_pair(&pt(0, 0), &pt(3, 0)));
        assert!(dominates_pair(&pt(0, 0), &Point2::new(rat(6, 5), rat(8, 5))));
    }

    #[test]
    fn two_circle_events() {
        let centers = vec![pt(0, 0), pt(2, 0)];
        let dec = vertical_decomposition(&centers, &[0, 1]);
        let xs: Vec<String> = dec.event_xs().iter().map(|x| x.to_string()).collect();
        assert_eq!(xs, ["-2/1", "0/1", "1/1", "2/1", "4/1"]);
        let circ = Circles { centers: &centers };
        let top = circ.event(EventKey::Cross(0, 1, 1));
        assert_eq!(top.x, QuadNum::from_int(1));
        assert_eq!(top.y, "sqrt(3)".parse::<QuadNum>().unwrap());
        assert!(dec.faces.iter().all(|f| f.key.definers().len() <= 4));
    }

    #[test]
    fn single_circle_faces() {
        let centers = vec![pt(0, 0)];
        let dec = vertical_decomposition(&centers, &[0]);
        let inside = dec
            .faces
            .iter()
            .find(|f| f.covered && f.key.dimension() == 2)
            .expect("interior face");
        assert_eq!(
            inside.key,
            FaceKey::Trapezoid {
                top: Some((0, Half::Upper)),
                bottom: Some((0, Half::Lower)),
                left: Some(EventKey::Left(0)),
                right: Some(EventKey::Right(0)),
            }
        );
        let inst = DiskInstance::new(vec![pt(0, 0), pt(1, 1), pt(3, 0)]).unwrap();
        let table = build_lookup(&inst).unwrap();
        assert_eq!(table.get(&inside.key), Some(2));
    }

    #[test]
    fn boundary_point_counts_on_arc() {
        let inst = DiskInstance::new(vec![pt(0, 0), Point2::new(rat(6, 5), rat(8, 5))]).unwrap();
        let dec = vertical_decomposition(inst.centers(), &[0]);
        let holders: Vec<&Face> = dec
            .faces
            .iter()
            .filter(|f| face_contains(inst.centers(), &f.key, &inst.centers()[1]))
            .collect();
        assert_eq!(holders.len(), 1);
        assert!(matches!(holders[0].key, FaceKey::Arc { circle: 0, half: Half::Upper, .. }));
    }

    #[test]
    fn coverage_examples() {
        let inst = DiskInstance::new(vec![pt(0, 0), pt(2, 0), pt(3, 0)]).unwrap();
        let mut table = build_lookup(&inst).unwrap();
        assert_eq!(coverage_count(&inst, &mut table, &[0]).unwrap(), 2);
        assert_eq!(coverage_count(&inst, &mut table, &[0, 1, 2]).unwrap(), 3);
    }

    #[test]
    fn xp_examples() {
        let inst = DiskInstance::new(vec![pt(0, 0), pt(2, 0), pt(4, 0)]).unwrap();
        let mut table = LookupTable::lazy();
        assert_eq!(xp_solve(&inst, &mut table, 1).unwrap(), Some(vec![1]));
        let far = DiskInstance::new(vec![pt(0, 0), pt(5, 0)]).unwrap();
        assert_eq!(xp_solve(&far, &mut LookupTable::lazy(), 1).unwrap(), None);
    }

    #[test]
    fn parse_round_trip() {
        let inst = DiskInstance::new(vec![pt(0, 0), Point2::new(rat(1, 2), rat(-3, 4))]).unwrap();
        assert_eq!(parse_disks(&inst.to_file_string()).unwrap(), inst);
        assert!(parse_disks("disk 0 0\ndisk 0 0\n").is_err());
        assert!(matches!(parse_disks("disk 1 x\n"), Err(Error::Parse { line: 1, column: 8, .. })));
    }
}
