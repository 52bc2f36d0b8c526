//! Minimum dominating sets for translates of a one-dimensional pattern.
//!
//! Patterns with an interval use a windowed dynamic program over the sorted
//! translates. Point patterns with rational distance ratios are reduced to
//! that case by replacing the leftmost point with a short interval. Point
//! patterns with an irrational ratio have bounded degree after removing
//! duplicates, so a bounded search tree finds the optimum.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{QuadNum, Rational};
use crate::graphcore::IntersectionGraph;
use crate::pattern1d::{qcmp, Classification, Instance1D, Pattern1D, PatternInput};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub size: usize,
    /// Indices into the translate list, ascending.
    pub witness: Vec<usize>,
}

impl Solution {
    fn from_witness(mut witness: Vec<usize>) -> Self {
        witness.sort_unstable();
        witness.dedup();
        Solution { size: witness.len(), witness }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Auto,
    Dp,
    Rational,
    Branch,
}

/// Distinct translate values with the first input index of each.
struct Dedup {
    values: Vec<QuadNum>,
    first_index: Vec<usize>,
}

fn dedup(xs: &[QuadNum]) -> Dedup {
    let mut seen: HashMap<&QuadNum, usize> = HashMap::new();
    let mut out = Dedup { values: Vec::new(), first_index: Vec::new() };
    for (i, x) in xs.iter().enumerate() {
        if !seen.contains_key(x) {
            seen.insert(x, out.values.len());
            out.values.push(x.clone());
            out.first_index.push(i);
        }
    }
    out
}

/// `floor(3w)` for the pattern's w ratio.
pub fn window_bound(q: &Pattern1D) -> Result<usize> {
    let w = q.w_ratio()?;
    (&w * &QuadNum::from_int(3))
        .floor()
        .to_usize()
        .ok_or_else(|| Error::InvalidInput("w ratio too large".into()))
}

/// Exact minimum dominating set for a pattern with at least one interval.
pub fn solve_interval_pattern(q: &Pattern1D, xs: &[QuadNum]) -> Result<Solution> {
    if !q.has_interval() {
        return Err(Error::InvalidInput("windowed DP needs a pattern with an interval".into()));
    }
    let bound = window_bound(q)?;
    let span = q.span();
    let dd = dedup(xs);
    let g = q.graph(&dd.values);
    let mut chosen = Vec::new();
    for comp in g.connected_components() {
        chosen.extend(dp_component(&g, &comp, &dd.values, &span, bound)?);
    }
    Ok(Solution::from_witness(chosen.into_iter().map(|v| dd.first_index[v]).collect()))
}

#[derive(Clone, Debug)]
struct Choice {
    mask: u64,
    size: usize,
    /// Dominated masks in windows j-1, j, j+1.
    cover: [u64; 3],
}

#[derive(Clone, Debug)]
struct Entry {
    value: usize,
    parent: (u64, u64),
    choice: u64,
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Subsets of a window of size `m` with at most `bound` members, by size then lexicographically.
fn bounded_subsets(m: usize, bound: usize) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut layer = vec![(0u64, 0usize)];
    for _ in 0..bound.min(m) {
        let mut next = Vec::new();
        for &(mask, from) in &layer {
            for b in from..m {
                next.push((mask | (1u64 << b), b + 1));
            }
        }
        out.extend(next.iter().map(|&(mask, _)| mask));
        layer = next;
    }
    out
}

/// Windowed DP on one connected component; returns the chosen vertices.
///
/// Windows have width `span` and hold the translates whose offset from the
/// component minimum falls in `[j*span, (j+1)*span)`. A translate only meets
/// translates in its own or an adjacent window. After choosing the sets for
/// windows `0..=j`, every window before `j` must be dominated; the state is the
/// pair of dominated masks of windows `j` and `j+1`.
fn dp_component(
    g: &IntersectionGraph,
    comp: &[usize],
    values: &[QuadNum],
    span: &QuadNum,
    bound: usize,
) -> Result<Vec<usize>> {
    let xmin = comp
        .iter()
        .map(|&v| &values[v])
        .min_by(|a, b| qcmp(a, b))
        .expect("components are nonempty")
        .clone();
    let inv_span = span.recip()?;
    let mut window_of = HashMap::new();
    let mut windows: Vec<Vec<usize>> = Vec::new();
    for &v in comp {
        let k = ((&values[v] - &xmin) * &inv_span)
            .floor()
            .to_usize()
            .ok_or_else(|| Error::Internal("window index overflow".into()))?;
        if windows.len() <= k {
            windows.resize(k + 1, Vec::new());
        }
        window_of.insert(v, (k, windows[k].len()));
        windows[k].push(v);
    }
    if let Some(w) = windows.iter().find(|w| w.len() > 63) {
        return Err(Error::SizeCutoff(w.len(), 63));
    }
    let count = windows.len();
    let full: Vec<u64> = windows.iter().map(|w| full_mask(w.len())).collect();

    // closed-neighborhood masks per vertex in windows j-1, j, j+1
    let nbr = |v: usize, j: usize| -> [u64; 3] {
        let mut m = [0u64; 3];
        let (wv, bv) = window_of[&v];
        m[wv + 1 - j] |= 1 << bv;
        for &u in g.neighbors(v) {
            let (wu, bu) = window_of[&u];
            debug_assert!(wu + 1 >= j && wu <= j + 1, "neighbors lie in adjacent windows");
            m[wu + 1 - j] |= 1 << bu;
        }
        m
    };

    let choices: Vec<Vec<Choice>> = windows
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let nbrs: Vec<[u64; 3]> = w.iter().map(|&v| nbr(v, j)).collect();
            let mut seen = std::collections::HashSet::new();
            bounded_subsets(w.len(), bound)
                .into_iter()
                .filter_map(|mask| {
                    let mut cover = [0u64; 3];
                    for (b, nb) in nbrs.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            for t in 0..3 {
                                cover[t] |= nb[t];
                            }
                        }
                    }
                    seen.insert(cover).then(|| Choice {
                        mask,
                        size: mask.count_ones() as usize,
                        cover,
                    })
                })
                .collect()
        })
        .collect();

    let mut stages: Vec<BTreeMap<(u64, u64), Entry>> = Vec::with_capacity(count);
    let mut first = BTreeMap::new();
    for c in &choices[0] {
        let key = (c.cover[1], c.cover[2]);
        first.entry(key).or_insert(Entry { value: c.size, parent: (0, 0), choice: c.mask });
    }
    stages.push(first);
    for j in 1..count {
        let mut next: BTreeMap<(u64, u64), Entry> = BTreeMap::new();
        for (&(dom_prev, dom_cur), entry) in &stages[j - 1] {
            for c in &choices[j] {
                if dom_prev | c.cover[0] != full[j - 1] {
                    continue;
                }
                let key = (dom_cur | c.cover[1], c.cover[2]);
                let value = entry.value + c.size;
                match next.get(&key) {
                    Some(e) if e.value <= value => {}
                    _ => {
                        next.insert(key, Entry { value, parent: (dom_prev, dom_cur), choice: c.mask });
                    }
                }
            }
        }
        stages.push(next);
    }

    let last = count - 1;
    let (mut key, _) = stages[last]
        .iter()
        .filter(|((dom, _), _)| *dom == full[last])
        .min_by_key(|(_, e)| e.value)
        .map(|(k, e)| (*k, e.value))
        .ok_or_else(|| Error::Internal("no feasible DP state".into()))?;
    let mut chosen = Vec::new();
    for j in (0..count).rev() {
        let e = &stages[j][&key];
        for (b, &v) in windows[j].iter().enumerate() {
            if e.choice >> b & 1 == 1 {
                chosen.push(v);
            }
        }
        key = e.parent;
    }
    Ok(chosen)
}

/// Result of rescaling a rational point pattern to integers and replacing its
/// leftmost point by `[0, 1/3]`.
#[derive(Clone, Debug)]
pub struct IntegerReduction {
    pub q_int: Pattern1D,
    pub q_prime: Pattern1D,
    /// Integer translates, one per input translate, with components spaced apart.
    pub xs: Vec<QuadNum>,
}

/// Rescales `q` and `xs` to an integer point pattern with integer translates,
/// keeping the intersection graph, and builds the interval pattern `Q'`.
pub fn integer_reduction(q: &Pattern1D, xs: &[QuadNum]) -> Result<IntegerReduction> {
    match q.classify() {
        Classification::RationalPoints => {}
        other => return Err(Error::InvalidInput(format!("expected a rational point pattern, got {other}"))),
    }
    let pts = q.points();
    let p0 = &pts[0];
    let reference = if pts.len() > 1 { &pts[1] - p0 } else { QuadNum::one() };
    let ratios: Vec<Rational> = pts
        .iter()
        .map(|p| {
            (p - p0)
                .try_div(&reference)?
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::Internal("ratio should be rational".into()))
        })
        .collect::<Result<_>>()?;
    let lcm = ratios.iter().fold(num_bigint::BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let gcd = ratios
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .fold(num_bigint::BigInt::zero(), |acc, v| acc.gcd(&v));
    let unit = if gcd.is_zero() { num_bigint::BigInt::one() } else { gcd };
    let factor = Rational::new(lcm, unit);
    let int_points: Vec<QuadNum> = ratios
        .iter()
        .map(|r| QuadNum::rational(r * &factor))
        .collect();
    let q_int = Pattern1D::new(int_points.clone(), vec![])?;
    let scale = QuadNum::rational(factor).try_div(&reference)?;
    let scaled: Vec<QuadNum> = xs.iter().map(|x| x.try_mul(&scale)).collect::<Result<_>>()?;

    let g = q.graph(xs);
    let extent = q_int.span();
    let mut out = vec![QuadNum::zero(); xs.len()];
    let mut start = QuadNum::zero();
    for comp in g.connected_components() {
        let base = comp
            .iter()
            .map(|&v| &scaled[v])
            .min_by(|a, b| qcmp(a, b))
            .expect("components are nonempty")
            .clone();
        let mut hi = QuadNum::zero();
        for &v in &comp {
            let off = &scaled[v] - &base;
            match off.as_rational() {
                Some(r) if r.is_integer() => {}
                _ => return Err(Error::Internal(format!("non-integer offset {off} inside a component"))),
            }
            if qcmp(&off, &hi).is_gt() {
                hi = off.clone();
            }
            out[v] = &start + &off;
        }
        start = &(&start + &hi) + &(&extent + &QuadNum::one());
    }

    let mut rest: Vec<QuadNum> = int_points;
    rest.remove(0);
    let q_prime = Pattern1D::new(rest, vec![(QuadNum::zero(), QuadNum::rational(Rational::new(1.into(), 3.into())))])?;
    Ok(IntegerReduction { q_int, q_prime, xs: out })
}

/// Exact minimum dominating set for a point pattern whose distance ratios are all rational.
pub fn solve_rational_points(q: &Pattern1D, xs: &[QuadNum]) -> Result<Solution> {
    let t = integer_reduction(q, xs)?;
    debug_assert!(q.graph(xs).adjacency_equals(&t.q_prime.graph(&t.xs).edges()));
    solve_interval_pattern(&t.q_prime, &t.xs)
}

/// Searches for a dominating set of size at most `k` by branching on the
/// lowest undominated vertex and its neighbors.
pub fn solve_fpt_branching(q: &Pattern1D, xs: &[QuadNum], k: usize) -> Result<Option<Vec<usize>>> {
    let dd = dedup(xs);
    let g = q.graph(&dd.values);
    if !q.has_interval() {
        let t = q.points().len();
        let limit = t * t - t;
        if g.max_degree() > limit {
            return Err(Error::Internal(format!(
                "deduplicated degree {} exceeds t^2 - t = {limit}",
                g.max_degree()
            )));
        }
    }
    Ok(branch_dominating(&g, k).map(|w| {
        let mut out: Vec<usize> = w.into_iter().map(|v| dd.first_index[v]).collect();
        out.sort_unstable();
        out
    }))
}

/// Bounded search tree on an arbitrary graph.
pub fn branch_dominating(g: &IntersectionGraph, k: usize) -> Option<Vec<usize>> {
    let mut covered = vec![0u32; g.n()];
    let mut chosen = Vec::new();
    branch(g, k, &mut covered, &mut chosen).then_some(chosen)
}

fn branch(g: &IntersectionGraph, budget: usize, covered: &mut [u32], chosen: &mut Vec<usize>) -> bool {
    let Some(v) = covered.iter().position(|&c| c == 0) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    let mut nbrs = g.neighbors(v).to_vec();
    nbrs.sort_unstable();
    for u in std::iter::once(v).chain(nbrs) {
        covered[u] += 1;
        for &x in g.neighbors(u) {
            covered[x] += 1;
        }
        chosen.push(u);
        if branch(g, budget - 1, covered, chosen) {
            return true;
        }
        chosen.pop();
        covered[u] -= 1;
        for &x in g.neighbors(u) {
            covered[x] -= 1;
        }
    }
    false
}

/// Smallest `k` for which branching succeeds.
pub fn solve_by_branching(q: &Pattern1D, xs: &[QuadNum]) -> Result<Solution> {
    for k in 0..=xs.len() {
        if let Some(w) = solve_fpt_branching(q, xs, k)? {
            return Ok(Solution::from_witness(w));
        }
    }
    Err(Error::Internal("branching found no dominating set".into()))
}

/// Routes by classification.
pub fn solve(q: &Pattern1D, xs: &[QuadNum]) -> Result<Solution> {
    solve_with(q, xs, Algo::Auto)
}

pub fn solve_with(q: &Pattern1D, xs: &[QuadNum], algo: Algo) -> Result<Solution> {
    if xs.is_empty() {
        return Ok(Solution { size: 0, witness: vec![] });
    }
    let algo = match (algo, q.classify()) {
        (Algo::Auto, Classification::HasInterval) => Algo::Dp,
        (Algo::Auto, Classification::RationalPoints) => Algo::Rational,
        (Algo::Auto, Classification::IrrationalPoints(_)) => Algo::Branch,
        (a, _) => a,
    };
    match algo {
        Algo::Dp => solve_interval_pattern(q, xs),
        Algo::Rational => solve_rational_points(q, xs),
        Algo::Branch => solve_by_branching(q, xs),
        Algo::Auto => unreachable!(),
    }
}

/// Solves a parsed instance; an unbounded pattern yields a clique.
pub fn solve_instance(inst: &Instance1D, algo: Algo) -> Result<Solution> {
    match &inst.pattern {
        PatternInput::Unbounded if inst.translates.is_empty() => Ok(Solution { size: 0, witness: vec![] }),
        PatternInput::Unbounded => Ok(Solution { size: 1, witness: vec![0] }),
        PatternInput::Bounded(q) => solve_with(q, &inst.translates, algo),
    }
}

/// Largest number of witness translates in a half-open window `[x_i, x_i + width)` anchored at a witness translate.
pub fn max_window_load(xs: &[QuadNum], witness: &[usize], width: &QuadNum) -> usize {
    witness
        .iter()
        .map(|&i| {
            let lo = &xs[i];
            let hi = lo + width;
            witness
                .iter()
                .filter(|&&j| !qcmp(&xs[j], lo).is_lt() && qcmp(&xs[j], &hi).is_lt())
                .count()
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::brute_force_min_dominating;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<QuadNum> {
        v.iter().map(|s| q(s)).collect()
    }

    fn points(v: &[&str]) -> Pattern1D {
        Pattern1D::new(qs(v), vec![]).unwrap()
    }

    fn oracle(p: &Pattern1D, xs: &[QuadNum]) -> usize {
        brute_force_min_dominating(&p.graph(xs)).unwrap().0
    }

    #[test]
    fn unit_interval_examples() {
        let unit = Pattern1D::new(vec![], vec![(q("0"), q("1"))]).unwrap();
        let xs = qs(&["0", "1", "2", "3", "4"]);
        let s = solve_interval_pattern(&unit, &xs).unwrap();
        assert_eq!(s.size, 2);
        assert!(unit.graph(&xs).is_dominating(&s.witness).unwrap());
        assert_eq!(solve_interval_pattern(&unit, &qs(&["0"])).unwrap().size, 1);
    }

    #[test]
    fn mixed_pattern_matches_oracle() {
        let p = Pattern1D::new(vec![q("0")], vec![(q("1"), q("2"))]).unwrap();
        let xs = qs(&["0", "1/2", "1", "3/2", "4"]);
        assert_eq!(solve_interval_pattern(&p, &xs).unwrap().size, oracle(&p, &xs));
    }

    #[test]
    fn state_pair_counterexample() {
        // the middle translate is dominated only from the next window
        let unit = Pattern1D::new(vec![], vec![(q("0"), q("1"))]).unwrap();
        let xs = qs(&["1/10", "21/20", "2"]);
        assert_eq!(oracle(&unit, &xs), 1);
        assert_eq!(solve_interval_pattern(&unit, &xs).unwrap().size, 1);
    }

    #[test]
    fn rational_point_examples() {
        assert_eq!(solve_rational_points(&points(&["0", "2", "3"]), &qs(&["0", "1"])).unwrap().size, 1);
        let s = solve_rational_points(&points(&["0", "1"]), &qs(&["0", "1", "2"])).unwrap();
        assert_eq!(s, Solution { size: 1, witness: vec![1] });
        assert_eq!(solve_rational_points(&points(&["0"]), &qs(&["0", "0", "7"])).unwrap().size, 2);
        assert!(solve_rational_points(&points(&["0", "1", "sqrt(2)"]), &qs(&["0"])).is_err());
    }

    #[test]
    fn integer_reduction_preserves_graph() {
        let p = points(&["0", "sqrt(2)", "3*sqrt(2)"]);
        let xs = qs(&["0", "sqrt(2)", "2*sqrt(2)", "1/2", "1/2+sqrt(2)"]);
        let t = integer_reduction(&p, &xs).unwrap();
        assert!(p.graph(&xs).adjacency_equals(&t.q_prime.graph(&t.xs).edges()));
        assert_eq!(solve_rational_points(&p, &xs).unwrap().size, oracle(&p, &xs));
    }

    #[test]
    fn branching_examples() {
        let p = points(&["0", "1", "sqrt(2)"]);
        let w = solve_fpt_branching(&p, &qs(&["0", "-1+sqrt(2)"]), 1).unwrap().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(solve_fpt_branching(&p, &qs(&["0"]), 0).unwrap(), None);
        let w = solve_fpt_branching(&points(&["0", "1"]), &qs(&["0", "1", "2"]), 1).unwrap();
        assert_eq!(w, Some(vec![1]));
    }

    #[test]
    fn dispatcher_and_unbounded() {
        let unit = Pattern1D::new(vec![], vec![(q("0"), q("1"))]).unwrap();
        assert_eq!(solve(&unit, &qs(&["0", "1", "2", "3", "4"])).unwrap().size, 2);
        assert_eq!(solve(&points(&["0", "1"]), &qs(&["0", "1", "2"])).unwrap().size, 1);
        assert_eq!(solve(&points(&["0", "1", "sqrt(2)"]), &qs(&["0", "-1+sqrt(2)"])).unwrap().size, 1);
        let inst = Instance1D { pattern: PatternInput::Unbounded, translates: qs(&["0", "5", "9"]) };
        assert_eq!(solve_instance(&inst, Algo::Auto).unwrap().size, 1);
    }

    #[test]
    fn subsets_order() {
        assert_eq!(bounded_subsets(3, 2), vec![0, 1, 2, 4, 3, 5, 6]);
        assert_eq!(bounded_subsets(2, 5).len(), 4);
    }
}
