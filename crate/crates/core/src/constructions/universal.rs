use num_bigint::BigInt;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::exactnum::{QuadNum, Rational};
use crate::graphcore::IntersectionGraph;
use crate::pattern1d::Pattern1D;

fn pow4(e: usize) -> BigInt {
    Pow::pow(BigInt::from(4), e)
}

fn int_point(v: BigInt) -> QuadNum {
    QuadNum::rational(Rational::from_integer(v))
}

/// A point pattern and translates whose intersection graph is `g`.
///
/// With vertices `v_1..v_n` and edges `e_1..e_m` (endpoints `a(k) < b(k)`), the pattern holds
/// `4^(q+k) - 4^a(k)` and `4^(q+k) - 4^b(k)` with `q = 2(n+m)`, and `x_i = 4^i`.
/// Vertex `i` of `g` is `v_(i+1)`.
pub fn universal_pattern(g: &IntersectionGraph) -> Result<(Pattern1D, Vec<QuadNum>)> {
    let n = g.n();
    let edges = g.edges();
    let q = 2 * (n + edges.len());
    let xs: Vec<QuadNum> = (1..=n).map(|i| int_point(pow4(i))).collect();
    let mut points = Vec::with_capacity(2 * edges.len());
    for (k, &(u, v)) in edges.iter().enumerate() {
        let top = pow4(q + k + 1);
        let (a, b) = (u.min(v) + 1, u.max(v) + 1);
        points.push(int_point(&top - pow4(a)));
        points.push(int_point(&top - pow4(b)));
    }
    if points.is_empty() {
        points.push(QuadNum::zero());
    }
    let pattern = Pattern1D::new(points, vec![])?;
    if !pattern.graph(&xs).adjacency_equals(&edges) {
        return Err(Error::Internal("universal pattern does not realize the graph".into()));
    }
    Ok((pattern, xs))
}

/// `4^e` as an exact value; handy for callers checking shared points.
pub fn power_of_four(e: usize) -> QuadNum {
    int_point(pow4(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_three_vertices() {
        let g = IntersectionGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (p, xs) = universal_pattern(&g).unwrap();
        let mut expect: Vec<QuadNum> = [(11, 1), (11, 2), (12, 2), (12, 3)]
            .iter()
            .map(|&(hi, lo)| int_point(pow4(hi) - pow4(lo)))
            .collect();
        let mut got = p.points().to_vec();
        got.sort_by(|a, b| a.cmp_exact(b).unwrap());
        expect.sort_by(|a, b| a.cmp_exact(b).unwrap());
        assert_eq!(got, expect);
        assert_eq!(xs, vec![power_of_four(1), power_of_four(2), power_of_four(3)]);
        let shared = power_of_four(11);
        assert!(p.translate(&xs[0]).unwrap().points().contains(&shared));
        assert!(p.translate(&xs[1]).unwrap().points().contains(&shared));
        assert!(!p.translates_intersect(&xs[0], &xs[2]));
    }

    #[test]
    fn edgeless_graph_gets_dummy_point() {
        let g = IntersectionGraph::from_edges(3, &[]).unwrap();
        let (p, xs) = universal_pattern(&g).unwrap();
        assert_eq!(p.points(), &[QuadNum::zero()]);
        assert_eq!(xs.len(), 3);
    }
}
