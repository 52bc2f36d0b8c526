//! Intersection graphs, domination checks and the exhaustive oracle.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Default vertex limit for [`brute_force_min_dominating`].
pub const BRUTE_FORCE_CUTOFF: usize = 26;

/// Undirected simple graph whose vertices mirror an ordered list of objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    labels: Vec<String>,
    matrix: Vec<Vec<bool>>,
    lists: Vec<Vec<usize>>,
}

impl IntersectionGraph {
    /// Builds the graph with an edge `{i, j}` exactly when `intersects(o_i, o_j)`.
    pub fn build<T>(objects: &[T], intersects: impl Fn(&T, &T) -> bool) -> Self {
        let labels = (0..objects.len()).map(|i| i.to_string()).collect();
        Self::build_labeled(objects, labels, intersects)
    }

    pub fn build_labeled<T>(
        objects: &[T],
        labels: Vec<String>,
        intersects: impl Fn(&T, &T) -> bool,
    ) -> Self {
        assert_eq!(objects.len(), labels.len(), "one label per object");
        let n = objects.len();
        let mut g = Self::empty_labeled(labels);
        for i in 0..n {
            for j in i + 1..n {
                if intersects(&objects[i], &objects[j]) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty_labeled((0..n).map(|i| i.to_string()).collect());
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u != v && !g.matrix[u][v] {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    fn empty_labeled(labels: Vec<String>) -> Self {
        let n = labels.len();
        IntersectionGraph {
            labels,
            matrix: vec![vec![false; n]; n],
            lists: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.matrix[u][v] = true;
        self.matrix[v][u] = true;
        self.lists[u].push(v);
        self.lists[v].push(u);
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange(v, self.n()))
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.matrix[u][v]
    }

    /// Neighbors of `v` in insertion order (ascending for built graphs).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.lists[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted edge list with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.matrix[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Whether every vertex is in `set` or adjacent to a member of it.
    pub fn is_dominating(&self, set: &[usize]) -> Result<bool> {
        let mut dominated = vec![false; self.n()];
        for &v in set {
            self.check_vertex(v)?;
            dominated[v] = true;
            for &u in &self.lists[v] {
                dominated[u] = true;
            }
        }
        Ok(dominated.into_iter().all(|d| d))
    }

    /// Vertices of `targets` not dominated by `set`.
    pub fn undominated(&self, set: &[usize], targets: &[usize]) -> Vec<usize> {
        targets
            .iter()
            .copied()
            .filter(|&t| !set.iter().any(|&v| v == t || self.matrix[v][t]))
            .collect()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.lists[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Compares adjacency with `expected` under the identity vertex correspondence.
    pub fn adjacency_equals(&self, expected: &[(usize, usize)]) -> bool {
        let mut want: Vec<(usize, usize)> = expected
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        want.sort_unstable();
        want.dedup();
        want == self.edges()
    }

    /// Graph dump: `n <count>` then sorted `e <i> <j>` lines.
    pub fn dump(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (i, j) in self.edges() {
            writeln!(out, "e {i} {j}").unwrap();
        }
        out
    }

    /// Induced subgraph on `vertices` (renumbered in the given order).
    pub fn induced(&self, vertices: &[usize]) -> IntersectionGraph {
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let mut g = Self::empty_labeled(labels);
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.matrix[u][v] {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

/// Parses the graph dump format back into `(n, edges)`.
pub fn parse_graph(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |idx: usize| -> Result<usize> {
            fields
                .get(idx)
                .ok_or_else(|| Error::parse(lineno + 1, raw.len() + 1, "missing field"))?
                .parse()
                .map_err(|_| Error::parse(lineno + 1, column_of(raw, fields[idx]), "expected integer"))
        };
        match fields[0] {
            "n" if fields.len() == 2 => n = Some(num(1)?),
            "e" if fields.len() == 3 => {
                let count = n.ok_or_else(|| Error::parse(lineno + 1, 1, "edge before 'n' line"))?;
                let (u, v) = (num(1)?, num(2)?);
                if u >= count || v >= count || u == v {
                    return Err(Error::parse(lineno + 1, 1, format!("bad edge {u} {v}")));
                }
                edges.push((u, v));
            }
            _ => return Err(Error::parse(lineno + 1, 1, format!("unrecognized line '{line}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(1, 1, "missing 'n <count>' line"))?;
    Ok((n, edges))
}

pub(crate) fn column_of(line: &str, field: &str) -> usize {
    let base = line.as_ptr() as usize;
    let at = field.as_ptr() as usize;
    if at >= base && at <= base + line.len() {
        at - base + 1
    } else {
        1
    }
}

fn closed_masks(g: &IntersectionGraph) -> Vec<u64> {
    (0..g.n())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(1u64 << v, |m, &u| m | (1u64 << u))
        })
        .collect()
}

/// Calls `visit` with every `size`-subset of `0..n` in lexicographic order until it returns true.
pub(crate) fn for_each_combination(n: usize, size: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if size > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        let mut i = size;
        while i > 0 && idx[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact minimum dominating set by enumerating subsets in increasing size.
/// The witness is the lexicographically least minimum set.
pub fn brute_force_min_dominating(g: &IntersectionGraph) -> Result<(usize, Vec<usize>)> {
    brute_force_with_cutoff(g, BRUTE_FORCE_CUTOFF)
}

pub fn brute_force_with_cutoff(g: &IntersectionGraph, cutoff: usize) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    if n > cutoff.min(64) {
        return Err(Error::SizeCutoff(n, cutoff.min(64)));
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let masks = closed_masks(g);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for size in 1..=n {
        let mut found = None;
        for_each_combination(n, size, |c| {
            let cover = c.iter().fold(0u64, |m, &v| m | masks[v]);
            if cover == full {
                found = Some(c.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(w) = found {
            return Ok((size, w));
        }
    }
    unreachable!("the full vertex set dominates")
}

/// Every minimum dominating set, in lexicographic order.
pub fn all_minimum_dominating_sets(g: &IntersectionGraph) -> Result<Vec<Vec<usize>>> {
    let (size, _) = brute_force_min_dominating(g)?;
    let n = g.n();
    let masks = closed_masks(g);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    for_each_combination(n, size, |c| {
        if c.iter().fold(0u64, |m, &v| m | masks[v]) == full {
            out.push(c.to_vec());
        }
        false
    });
    Ok(out)
}

/// Whether some set of at most `k` vertices dominates `g` (exhaustive).
pub fn has_dominating_set_of_size(g: &IntersectionGraph, k: usize) -> Result<bool> {
    Ok(brute_force_min_dominating(g)?.0 <= k)
}

/// Minimum number of vertices from `weighted` in a dominating set when all other
/// vertices may be used for free.
pub fn min_weighted_domination(g: &IntersectionGraph, weighted: &[usize]) -> Result<usize> {
    let n = g.n();
    if n > 64 {
        return Err(Error::SizeCutoff(n, 64));
    }
    let masks = closed_masks(g);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let free: u64 = (0..n)
        .filter(|v| !weighted.contains(v))
        .fold(0u64, |m, v| m | masks[v]);
    for size in 0..=weighted.len() {
        let hit = for_each_combination(weighted.len(), size, |c| {
            c.iter().fold(free, |m, &i| m | masks[weighted[i]]) == full
        }) || (size == 0 && free == full);
        if hit {
            return Ok(size);
        }
    }
    Err(Error::Internal("no dominating set found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> IntersectionGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        IntersectionGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn domination_on_path() {
        let g = path(5);
        assert!(g.is_dominating(&[1, 3]).unwrap());
        assert!(!g.is_dominating(&[0]).unwrap());
        assert!(g.is_dominating(&[0, 1, 2, 3, 4]).unwrap());
        assert_eq!(g.is_dominating(&[7]), Err(Error::VertexOutOfRange(7, 5)));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(brute_force_min_dominating(&path(5)).unwrap(), (2, vec![0, 3]));
        let k4 = IntersectionGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(brute_force_min_dominating(&k4).unwrap().0, 1);
        let empty = IntersectionGraph::from_edges(3, &[]).unwrap();
        assert_eq!(brute_force_min_dominating(&empty).unwrap(), (3, vec![0, 1, 2]));
        let big = IntersectionGraph::from_edges(40, &[]).unwrap();
        assert!(matches!(brute_force_min_dominating(&big), Err(Error::SizeCutoff(40, _))));
    }

    #[test]
    fn components_and_dump() {
        let g = IntersectionGraph::from_edges(4, &[(2, 3), (0, 1)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(g.dump(), "n 4\ne 0 1\ne 2 3\n");
        assert_eq!(parse_graph(&g.dump()).unwrap(), (4, vec![(0, 1), (2, 3)]));
        assert!(g.adjacency_equals(&[(1, 0), (3, 2)]));
        assert!(!g.adjacency_equals(&[(0, 1)]));
        assert!(matches!(parse_graph("n 2\ne 0 x\n"), Err(Error::Parse { line: 2, column: 5, .. })));
    }

    #[test]
    fn weighted_domination_on_path() {
        let g = path(7);
        assert_eq!(min_weighted_domination(&g, &[1, 2, 3, 4, 5]).unwrap(), 1);
        let g = path(10);
        assert_eq!(min_weighted_domination(&g, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap(), 2);
    }

    #[test]
    fn all_minimum_sets_of_path() {
        let sets = all_minimum_dominating_sets(&path(4)).unwrap();
        assert_eq!(sets, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
    }
}
