use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactnum::{QuadNum, Rational};
use crate::graphcore::{brute_force_min_dominating, min_weighted_domination, IntersectionGraph};
use crate::pattern1d::{Classification, Pattern1D};

/// Index offsets of the six triangular-grid neighbours.
pub const TRIGRID_NEIGHBORS: [(i64, i64); 6] = [(-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigridRealization {
    pub x_star: QuadNum,
    /// Integers `a` for which `a*x_star + Q` can meet `Z + Q` by the irrational parts alone.
    pub candidates: Vec<i64>,
    pub a_prime: i64,
    pub y_star: QuadNum,
    pub radius: usize,
    /// `S(j, k) = j*y_star + k` for `j, k` in `-R..=R`, row-major in `j`.
    pub translates: Vec<QuadNum>,
}

impl TrigridRealization {
    pub fn index(&self, j: i64, k: i64) -> usize {
        grid_index(self.radius, j, k)
    }
}

fn grid_index(radius: usize, j: i64, k: i64) -> usize {
    let r = radius as i64;
    ((j + r) * (2 * r + 1) + (k + r)) as usize
}

fn is_integer(q: &QuadNum) -> bool {
    q.as_rational().is_some_and(|r| r.is_integer())
}

/// Whether `a*x + Q` meets `Z + Q`.
fn meets_integer_shifts(q: &Pattern1D, x: &QuadNum, a: i64) -> bool {
    let shift = x.scale(&Rational::from_integer(a.into()));
    q.points()
        .iter()
        .any(|z| q.points().iter().any(|z2| is_integer(&(&(&shift + z) - z2))))
}

/// Places translates of an irrational point pattern so that they form a triangular grid.
/// The neighbour structure relies on the pattern having span 1; see [`Pattern1D::unit_span`].
pub fn trigrid_realization(q: &Pattern1D, radius: usize) -> Result<TrigridRealization> {
    if !matches!(q.classify(), Classification::IrrationalPoints(_)) {
        return Err(Error::InvalidInput("pattern must be points with an irrational distance ratio".into()));
    }
    let x_star = q
        .points()
        .iter()
        .find(|p| !p.is_rational())
        .cloned()
        .ok_or_else(|| Error::InvalidInput("pattern has no irrational point".into()))?;
    let mut candidates = BTreeSet::new();
    for z in q.points() {
        for z2 in q.points() {
            let a = (z2.irr() - z.irr()) / x_star.irr();
            if a.is_integer() {
                let a = i64::try_from(a.to_integer())
                    .map_err(|_| Error::InvalidInput("grid multiplier out of range".into()))?;
                candidates.insert(a);
            }
        }
    }
    let a_prime = *candidates
        .iter()
        .rev()
        .find(|&&a| meets_integer_shifts(q, &x_star, a))
        .ok_or_else(|| Error::Internal("no grid multiplier meets the integer shifts".into()))?;
    let y_star = x_star.scale(&Rational::from_integer(a_prime.into()));
    let r = radius as i64;
    let mut translates = Vec::with_capacity((2 * radius + 1).pow(2));
    for j in -r..=r {
        for k in -r..=r {
            translates.push(&y_star.scale(&Rational::from_integer(j.into())) + &QuadNum::from_int(k));
        }
    }
    Ok(TrigridRealization {
        x_star,
        candidates: candidates.into_iter().collect(),
        a_prime,
        y_star,
        radius,
        translates,
    })
}

/// Checks that every interior translate meets exactly its six grid neighbours among
/// the translates at index distance at most 2.
pub fn verify_trigrid(q: &Pattern1D, translates: &[QuadNum], radius: usize) -> bool {
    let r = radius as i64;
    if translates.len() != (2 * radius + 1).pow(2) {
        return false;
    }
    for j in -(r - 1)..r {
        for k in -(r - 1)..r {
            let here = &translates[grid_index(radius, j, k)];
            for a in -2i64..=2 {
                for b in -2i64..=2 {
                    if (a, b) == (0, 0) || (j + a).abs() > r || (k + b).abs() > r {
                        continue;
                    }
                    let there = &translates[grid_index(radius, j + a, k + b)];
                    if q.translates_intersect(here, there) != TRIGRID_NEIGHBORS.contains(&(a, b)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Finite induced subgraph of the triangular grid on `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriGridGraph {
    vertices: Vec<(i64, i64)>,
}

impl TriGridGraph {
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<Self> {
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidInput("repeated grid vertex".into()));
        }
        Ok(TriGridGraph { vertices })
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn graph(&self) -> IntersectionGraph {
        IntersectionGraph::build(&self.vertices, |p, q| TRIGRID_NEIGHBORS.contains(&(q.0 - p.0, q.1 - p.1)))
    }
}

pub fn trigrid_brute_force(g: &TriGridGraph) -> Result<(usize, Vec<usize>)> {
    brute_force_min_dominating(&g.graph())
}

/// Induced cycle of length `3k`, numbered `C_0, C_1, ...` along the cycle.
///
/// For `k >= 2` this is the boundary of a hexagon with sides `p, q, p, q, p, q`, `p + q = k`.
pub fn trigrid_cycle(k: usize) -> Result<TriGridGraph> {
    if k == 0 {
        return Err(Error::InvalidInput("cycle needs k >= 1".into()));
    }
    if k == 1 {
        return TriGridGraph::new(vec![(0, 0), (1, 0), (0, 1)]);
    }
    let (p, q) = (k.div_ceil(2), k / 2);
    let dirs = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let mut at = (0i64, 0i64);
    let mut verts = Vec::with_capacity(3 * k);
    for (i, d) in dirs.iter().enumerate() {
        let len = if i % 2 == 0 { p } else { q };
        for _ in 0..len {
            verts.push(at);
            at = (at.0 + d.0, at.1 + d.1);
        }
    }
    debug_assert_eq!(at, (0, 0));
    TriGridGraph::new(verts)
}

/// Induced path of length `3k + 1`, vertices `P_0..P_(3k+1)` along a grid row.
pub fn trigrid_path(k: usize) -> Result<TriGridGraph> {
    TriGridGraph::new((0..=(3 * k as i64 + 1)).map(|i| (i, 0)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    Cycle,
    Path,
}

fn closed_nbhd(g: &IntersectionGraph, v: usize) -> BTreeSet<usize> {
    g.neighbors(v).iter().copied().chain([v]).collect()
}

/// Lower bound for the cycle and path gadgets: a dominating set uses at least `k`
/// vertices of a `3k`-cycle, and at least `k` inner vertices of a `(3k+1)`-path.
/// Also checks that the vertices `3l + 2` have pairwise disjoint closed neighbourhoods
/// inside the counted vertex set.
pub fn check_gadget_lower_bounds(kind: GadgetKind, k: usize) -> Result<bool> {
    let (gadget, counted): (TriGridGraph, Vec<usize>) = match kind {
        GadgetKind::Cycle => (trigrid_cycle(k)?, (0..3 * k).collect()),
        GadgetKind::Path => (trigrid_path(k)?, (1..=3 * k).collect()),
    };
    let g = gadget.graph();
    let shape_ok = match kind {
        GadgetKind::Cycle => {
            (0..g.n()).all(|v| g.degree(v) == 2) && g.connected_components().len() == 1
                && (0..g.n()).all(|v| g.adjacent(v, (v + 1) % g.n()))
        }
        GadgetKind::Path => g.edge_count() + 1 == g.n() && (1..g.n()).all(|v| g.adjacent(v - 1, v)),
    };
    if !shape_ok {
        return Ok(false);
    }
    let anchors: Vec<usize> = (0..k).map(|l| 3 * l + 2).collect();
    let mut seen = BTreeSet::new();
    for &a in &anchors {
        for v in closed_nbhd(&g, a) {
            if !counted.contains(&v) || !seen.insert(v) {
                return Ok(false);
            }
        }
    }
    let best = match kind {
        GadgetKind::Cycle => brute_force_min_dominating(&g)?.0,
        GadgetKind::Path => min_weighted_domination(&g, &counted)?,
    };
    Ok(best >= k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn standard() -> Pattern1D {
        Pattern1D::new(vec![q("0"), q("1"), q("sqrt(2)")], vec![]).unwrap()
    }

    #[test]
    fn sqrt2_pattern_grid() {
        let t = trigrid_realization(&standard(), 3).unwrap();
        assert_eq!(t.x_star, q("sqrt(2)"));
        assert_eq!(t.candidates, vec![-1, 0, 1]);
        assert_eq!(t.a_prime, 1);
        assert_eq!(t.y_star, q("sqrt(2)"));
        assert!(verify_trigrid(&standard(), &t.translates, 3));
    }

    #[test]
    fn grid_neighbours_by_hand() {
        let p = standard();
        let origin = QuadNum::zero();
        assert!(!p.translates_intersect(&origin, &q("sqrt(2)+1")));
        assert!(p.translates_intersect(&origin, &q("sqrt(2)-1")));
    }

    #[test]
    fn perturbed_grid_fails() {
        let mut t = trigrid_realization(&standard(), 3).unwrap();
        let i = t.index(0, 1);
        t.translates[i] = &t.translates[i] + &q("1/3");
        assert!(!verify_trigrid(&standard(), &t.translates, 3));
    }

    #[test]
    fn radius_one_is_vacuous() {
        let t = trigrid_realization(&standard(), 1).unwrap();
        assert!(verify_trigrid(&standard(), &t.translates, 1));
    }

    #[test]
    fn rejects_rational_pattern() {
        let p = Pattern1D::new(vec![q("0"), q("1"), q("3")], vec![]).unwrap();
        assert!(trigrid_realization(&p, 2).is_err());
    }

    #[test]
    fn gadget_bounds() {
        for k in 1..=6 {
            assert!(check_gadget_lower_bounds(GadgetKind::Cycle, k).unwrap(), "cycle k={k}");
            assert!(check_gadget_lower_bounds(GadgetKind::Path, k).unwrap(), "path k={k}");
        }
        assert_eq!(trigrid_brute_force(&trigrid_cycle(2).unwrap()).unwrap().0, 2);
    }
}
