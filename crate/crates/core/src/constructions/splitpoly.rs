use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational};
use crate::geom2d::{convex_hull, parse_polygons_with, point_in_polygon, polygons_intersect, Location, Point2, Polygon};
use crate::graphcore::{column_of, IntersectionGraph};

/// Split graph with clique vertices `0..c` and independent vertices `c..c+i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitGraph {
    pub clique: usize,
    pub independent: usize,
    /// Cross edges as `(clique vertex, independent vertex)` in global numbering.
    pub cross: BTreeSet<(usize, usize)>,
}

impl SplitGraph {
    /// Accepts clique-clique edges (implied anyway) and rejects independent-independent ones.
    pub fn new(clique: usize, independent: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let n = clique + independent;
        let mut cross = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge {u}-{v} for {n} vertices")));
            }
            match (u < clique, v < clique) {
                (true, true) => {}
                (false, false) => {
                    return Err(Error::InvalidInput(format!("edge {u}-{v} joins two independent vertices")));
                }
                _ => {
                    cross.insert((u.min(v), u.max(v)));
                }
            }
        }
        Ok(SplitGraph { clique, independent, cross })
    }

    pub fn len(&self) -> usize {
        self.clique + self.independent
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All edges, including those inside the clique.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.clique).flat_map(|u| (u + 1..self.clique).map(move |v| (u, v))).collect();
        out.extend(self.cross.iter().copied());
        out
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("split {} {}\n", self.clique, self.independent);
        for (u, v) in &self.cross {
            writeln!(out, "e {u} {v}").unwrap();
        }
        out
    }
}

/// Parses `split <c> <i>` followed by `e <u> <v>` lines.
pub fn parse_split_graph(text: &str) -> Result<SplitGraph> {
    let mut header = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let fields: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some(&first) = fields.first() else { continue };
        let num = |tok: &str| -> Result<usize> {
            tok.parse().map_err(|_| Error::parse(line_no, column_of(raw, tok), "expected a nonnegative integer"))
        };
        match (first, fields.len()) {
            ("split", 3) => header = Some((num(fields[1])?, num(fields[2])?)),
            ("e", 3) => edges.push((num(fields[1])?, num(fields[2])?)),
            _ => return Err(Error::parse(line_no, column_of(raw, first), format!("unrecognized line '{}'", raw.trim()))),
        }
    }
    let (c, i) = header.ok_or_else(|| Error::parse(1, 1, "missing 'split <c> <i>' header"))?;
    SplitGraph::new(c, i, &edges)
}

/// `m` rational points on the unit circle in counter-clockwise order,
/// from the parametrization `((1-t^2)/(1+t^2), 2t/(1+t^2))`.
fn circle_points(m: usize) -> Vec<Point2> {
    let den = 4096;
    (0..m)
        .map(|k| {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / m as f64;
            let t = rat(((theta / 2.0).tan() * den as f64).round() as i64, den);
            let one = Rational::from_integer(1.into());
            let w = &one + &t * &t;
            Point2::new((&one - &t * &t) / &w, (&t + &t) / &w)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SplitRealization {
    /// One convex polygon per vertex of the split graph, in vertex order.
    pub polygons: Vec<Polygon>,
    /// Central polygon shared by every clique polygon.
    pub core: Polygon,
}

/// Convex polygons whose intersection graph is the given split graph.
///
/// Clique vertex `v` gets the hull of the core and the pocket apexes of `N(v)`;
/// independent vertex `i` gets its pocket triangle shrunk toward the centroid.
pub fn split_graph_polygons(sg: &SplitGraph) -> Result<SplitRealization> {
    let pockets = sg.independent.max(3);
    let pts = circle_points(2 * pockets);
    let vertex = |k: usize| pts[k % pts.len()].clone();
    let core = convex_hull(&(0..pockets).map(|i| vertex(2 * i)).collect::<Vec<_>>())?;
    let mut polygons = Vec::with_capacity(sg.len());
    for v in 0..sg.clique {
        let mut hull: Vec<Point2> = core.vertices().to_vec();
        hull.extend(
            sg.cross
                .iter()
                .filter(|&&(c, _)| c == v)
                .map(|&(_, u)| vertex(2 * (u - sg.clique) + 1)),
        );
        polygons.push(convex_hull(&hull)?);
    }
    let three = Rational::from_integer(3.into());
    let quarter = rat(1, 4);
    for i in 0..sg.independent {
        let tri = [vertex(2 * i), vertex(2 * i + 1), vertex(2 * i + 2)];
        let centroid = Point2::new(
            tri.iter().map(|p| p.x.clone()).sum::<Rational>() / &three,
            tri.iter().map(|p| p.y.clone()).sum::<Rational>() / &three,
        );
        let shrunk = tri
            .iter()
            .map(|p| Point2::new(&p.x + &(&centroid.x - &p.x) * &quarter, &p.y + &(&centroid.y - &p.y) * &quarter))
            .collect();
        polygons.push(Polygon::new(shrunk)?);
    }
    let real = SplitRealization { polygons, core };
    if !verify_split(sg, &real.polygons).passed() {
        return Err(Error::Internal("split polygons do not realize the graph".into()));
    }
    Ok(real)
}

/// The split graph followed by one `poly` block per vertex.
pub fn split_file_string(sg: &SplitGraph, polygons: &[Polygon]) -> String {
    let mut out = sg.to_file_string();
    for p in polygons {
        out.push_str(&p.to_file_string());
    }
    out
}

/// Parses the output of [`split_file_string`].
pub fn parse_split_file(text: &str) -> Result<(SplitGraph, Vec<Polygon>)> {
    let mut graph_text = String::new();
    let mut graph_lines = Vec::new();
    let polygons = parse_polygons_with(text, |line, raw, fields| match fields[0] {
        "split" | "e" => {
            graph_text.push_str(raw);
            graph_text.push('\n');
            graph_lines.push(line);
            Ok(())
        }
        other => Err(Error::parse(line, column_of(raw, other), format!("unrecognized line '{}'", raw.trim()))),
    })?;
    let sg = parse_split_graph(&graph_text).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Error::Parse { line: graph_lines.get(line - 1).copied().unwrap_or(line), column, message }
        }
        other => other,
    })?;
    Ok((sg, polygons))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub adjacency: bool,
    pub clique_intersects: bool,
    pub independent_disjoint: bool,
    /// Independent triangle lies inside a clique polygon exactly for cross edges.
    pub containment: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.adjacency && self.clique_intersects && self.independent_disjoint && self.containment
    }
}

fn contains(outer: &Polygon, inner: &Polygon) -> bool {
    inner.vertices().iter().all(|p| point_in_polygon(p, outer) != Location::Outside)
}

pub fn verify_split(sg: &SplitGraph, polygons: &[Polygon]) -> SplitReport {
    if polygons.len() != sg.len() {
        return SplitReport { adjacency: false, clique_intersects: false, independent_disjoint: false, containment: false };
    }
    let graph = IntersectionGraph::build(polygons, polygons_intersect);
    let c = sg.clique;
    let clique_intersects = (0..c).all(|u| (u + 1..c).all(|v| graph.adjacent(u, v)));
    let independent_disjoint = (c..sg.len()).all(|u| (u + 1..sg.len()).all(|v| !graph.adjacent(u, v)));
    let containment = (0..c).all(|v| (c..sg.len()).all(|u| contains(&polygons[v], &polygons[u]) == sg.cross.contains(&(v, u))));
    SplitReport {
        adjacency: graph.adjacency_equals(&sg.edges()),
        clique_intersects,
        independent_disjoint,
        containment,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_points_are_convex_and_ordered() {
        for m in [6, 8, 10] {
            let pts = circle_points(m);
            let hull = convex_hull(&pts).unwrap();
            assert_eq!(hull.len(), m);
            for p in &pts {
                assert_eq!(p.norm2(), Rational::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn one_clique_vertex_three_pockets() {
        let sg = SplitGraph::new(1, 3, &[(0, 1)]).unwrap();
        let real = split_graph_polygons(&sg).unwrap();
        let p = &real.polygons;
        assert!(contains(&p[0], &p[1]));
        assert!(!polygons_intersect(&p[0], &p[2]));
        assert!(!polygons_intersect(&p[0], &p[3]));
    }

    #[test]
    fn bare_clique_shares_core() {
        let sg = SplitGraph::new(2, 0, &[]).unwrap();
        let real = split_graph_polygons(&sg).unwrap();
        assert!(polygons_intersect(&real.polygons[0], &real.polygons[1]));
    }

    #[test]
    fn rejects_non_split_edges() {
        assert!(SplitGraph::new(1, 2, &[(1, 2)]).is_err());
        assert!(SplitGraph::new(1, 2, &[(0, 3)]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let sg = parse_split_graph("split 2 3\ne 0 2\ne 4 1\ne 0 1\n").unwrap();
        assert_eq!(sg.cross, BTreeSet::from([(0, 2), (1, 4)]));
        assert_eq!(parse_split_graph(&sg.to_file_string()).unwrap(), sg);
        assert!(parse_split_graph("e 0 1\n").is_err());
        let real = split_graph_polygons(&sg).unwrap();
        let (back, polys) = parse_split_file(&split_file_string(&sg, &real.polygons)).unwrap();
        assert_eq!(back, sg);
        assert_eq!(polys, real.polygons);
        assert!(verify_split(&back, &polys).passed());
    }
}
