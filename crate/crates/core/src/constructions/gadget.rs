use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::geom2d::{parse_coordinate, parse_polygons_with, polygons_intersect, Point2, Polygon};
use crate::graphcore::{column_of, IntersectionGraph};
use crate::squarelike::SquareLikeCert;

/// Grid tiling instance: a `k x k` array of nonempty subsets of `[n] x [n]`.
/// `cells[a-1][b-1]` is `U_(a,b)`; coordinates are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridTiling {
    pub k: usize,
    pub n: usize,
    cells: Vec<Vec<BTreeSet<(usize, usize)>>>,
}

impl GridTiling {
    pub fn new(k: usize, n: usize, cells: Vec<Vec<BTreeSet<(usize, usize)>>>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidInput("grid tiling needs k, n >= 1".into()));
        }
        if cells.len() != k || cells.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidInput(format!("expected {k}x{k} cells")));
        }
        for (a, row) in cells.iter().enumerate() {
            for (b, set) in row.iter().enumerate() {
                if set.is_empty() {
                    return Err(Error::InvalidInput(format!("cell ({}, {}) is empty", a + 1, b + 1)));
                }
                if let Some(&(x, y)) = set.iter().find(|&&(x, y)| x == 0 || y == 0 || x > n || y > n) {
                    return Err(Error::InvalidInput(format!("pair ({x},{y}) outside [{n}]x[{n}]")));
                }
            }
        }
        Ok(GridTiling { k, n, cells })
    }

    /// Every cell holds all of `[n] x [n]`.
    pub fn full(k: usize, n: usize) -> Result<Self> {
        let all: BTreeSet<_> = (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).collect();
        Self::new(k, n, vec![vec![all; k]; k])
    }

    pub fn cell(&self, a: usize, b: usize) -> &BTreeSet<(usize, usize)> {
        &self.cells[a - 1][b - 1]
    }

    /// Whether `choice[a-1][b-1]` picks from every cell and neighbours agree.
    pub fn is_solution(&self, choice: &[Vec<(usize, usize)>]) -> bool {
        if choice.len() != self.k || choice.iter().any(|r| r.len() != self.k) {
            return false;
        }
        (1..=self.k).all(|a| {
            (1..=self.k).all(|b| {
                let (x, y) = choice[a - 1][b - 1];
                self.cell(a, b).contains(&(x, y))
                    && (a == self.k || choice[a][b - 1].0 == x)
                    && (b == self.k || choice[a - 1][b].1 == y)
            })
        })
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("gt {} {}\n", self.k, self.n);
        for a in 1..=self.k {
            for b in 1..=self.k {
                write!(out, "cell {a} {b}:").unwrap();
                for (x, y) in self.cell(a, b) {
                    write!(out, " ({x},{y})").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Parses `gt <k> <n>` followed by `cell <a> <b>: (x,y) (x,y) ...` lines.
pub fn parse_grid_tiling(text: &str) -> Result<GridTiling> {
    let mut header: Option<(usize, usize)> = None;
    let mut cells: Vec<Vec<BTreeSet<(usize, usize)>>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(&first) = fields.first() else { continue };
        let num = |tok: &str| -> Result<usize> {
            tok.trim_end_matches(':')
                .parse()
                .map_err(|_| Error::parse(line_no, column_of(raw, tok), "expected a positive integer"))
        };
        match first {
            "gt" if fields.len() == 3 => {
                let (k, n) = (num(fields[1])?, num(fields[2])?);
                header = Some((k, n));
                cells = vec![vec![BTreeSet::new(); k]; k];
            }
            "cell" if fields.len() >= 3 => {
                let (k, _) = header.ok_or_else(|| Error::parse(line_no, 1, "cell before 'gt' header"))?;
                let (a, b) = (num(fields[1])?, num(fields[2])?);
                if a == 0 || b == 0 || a > k || b > k {
                    return Err(Error::parse(line_no, column_of(raw, fields[1]), format!("cell ({a},{b}) outside 1..{k}")));
                }
                let rest = &line[line.find(':').map_or(line.len(), |i| i + 1)..];
                for tok in rest.split_whitespace() {
                    let inner = tok
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .and_then(|t| t.split_once(','))
                        .ok_or_else(|| Error::parse(line_no, column_of(raw, tok), "expected (x,y)"))?;
                    let x = inner.0.trim().parse().map_err(|_| Error::parse(line_no, column_of(raw, tok), "bad x"))?;
                    let y = inner.1.trim().parse().map_err(|_| Error::parse(line_no, column_of(raw, tok), "bad y"))?;
                    cells[a - 1][b - 1].insert((x, y));
                }
            }
            _ => return Err(Error::parse(line_no, column_of(raw, first), format!("unrecognized line '{}'", line.trim()))),
        }
    }
    let (k, n) = header.ok_or_else(|| Error::parse(1, 1, "missing 'gt <k> <n>' header"))?;
    GridTiling::new(k, n, cells)
}

/// Exhaustive grid tiling solver; returns the lexicographically first solution.
pub fn gt_brute_solve(gt: &GridTiling) -> Option<Vec<Vec<(usize, usize)>>> {
    let k = gt.k;
    let mut choice = vec![vec![(0, 0); k]; k];
    fn go(gt: &GridTiling, pos: usize, choice: &mut Vec<Vec<(usize, usize)>>) -> bool {
        let k = gt.k;
        if pos == k * k {
            return true;
        }
        let (a, b) = (pos / k + 1, pos % k + 1);
        for &(x, y) in gt.cell(a, b) {
            if a > 1 && choice[a - 2][b - 1].0 != x {
                continue;
            }
            if b > 1 && choice[a - 1][b - 2].1 != y {
                continue;
            }
            choice[a - 1][b - 1] = (x, y);
            if go(gt, pos + 1, choice) {
                return true;
            }
        }
        false
    }
    go(gt, 0, &mut choice).then_some(choice)
}

/// `f(x, y) = (x - 1) n + y`.
pub fn pair_index(n: usize, x: usize, y: usize) -> usize {
    (x - 1) * n + y
}

/// Inverse of [`pair_index`] on `1..=n^2`.
pub fn index_pair(n: usize, j: usize) -> (usize, usize) {
    (1 + (j - 1) / n, 1 + (j - 1) % n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    X(u8),
    Y(u8),
    A,
    B,
    C,
    D,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKind::X(l) => write!(f, "X{l}"),
            BlockKind::Y(l) => write!(f, "Y{l}"),
            BlockKind::A => write!(f, "A"),
            BlockKind::B => write!(f, "B"),
            BlockKind::C => write!(f, "C"),
            BlockKind::D => write!(f, "D"),
        }
    }
}

/// Offset `(alpha, beta)` stored doubled so that half steps are integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Offset {
    pub twice_alpha: i64,
    pub twice_beta: i64,
}

impl Offset {
    pub fn alpha(&self) -> Rational {
        Rational::new(self.twice_alpha.into(), 2.into())
    }

    pub fn beta(&self) -> Rational {
        Rational::new(self.twice_beta.into(), 2.into())
    }
}

/// Offset of translate `j` in a block of the given kind.
pub fn block_offset(kind: BlockKind, j: usize, n: usize) -> Offset {
    let j = j as i64;
    let nn = (n * n) as i64;
    let n = n as i64;
    let (i1, i2) = if j >= 1 {
        let (x, y) = index_pair(n as usize, j as usize);
        (x as i64, y as i64)
    } else {
        (0, 0)
    };
    // whole steps are doubled, half steps are 2j + 1
    let h = 2 * j + 1;
    let (a, b) = match kind {
        BlockKind::X(1) => (2 * j, -2 * i2),
        BlockKind::X(2) => (2 * j, 2 * i2),
        BlockKind::X(3) => (-2 * i1, -2 * j),
        BlockKind::X(4) => (2 * i1, -2 * j),
        BlockKind::X(5) => (-2 * j, 2 * i2),
        BlockKind::X(6) => (-2 * j, -2 * i2),
        BlockKind::X(7) => (2 * i1, 2 * j),
        BlockKind::X(8) => (-2 * i1, 2 * j),
        BlockKind::Y(1) => (h, h),
        BlockKind::Y(2) => (h, -2 * n),
        BlockKind::Y(3) => (h, -h),
        BlockKind::Y(4) => (-2 * n, -h),
        BlockKind::Y(5) => (-h, -h),
        BlockKind::Y(6) => (-h, 2 * n),
        BlockKind::Y(7) => (-h, h),
        BlockKind::Y(8) => (2 * n, h),
        BlockKind::A => (-h, -2 * (nn + 1)),
        BlockKind::B => (h, 2 * (nn + 1)),
        BlockKind::C => (2 * (nn + 1), -h),
        BlockKind::D => (-2 * (nn + 1), h),
        BlockKind::X(_) | BlockKind::Y(_) => unreachable!("block labels run 1..=8"),
    };
    Offset { twice_alpha: a, twice_beta: b }
}

/// Cell of each gadget block on a 5x5 ring, in `(b1, b2)` grid units.
fn ring_cell(kind: BlockKind) -> (i64, i64) {
    match kind {
        BlockKind::Y(1) => (0, 4),
        BlockKind::X(1) => (1, 4),
        BlockKind::Y(2) => (2, 4),
        BlockKind::X(2) => (3, 4),
        BlockKind::Y(3) => (4, 4),
        BlockKind::X(3) => (4, 3),
        BlockKind::Y(4) => (4, 2),
        BlockKind::X(4) => (4, 1),
        BlockKind::Y(5) => (4, 0),
        BlockKind::X(5) => (3, 0),
        BlockKind::Y(6) => (2, 0),
        BlockKind::X(6) => (1, 0),
        BlockKind::Y(7) => (0, 0),
        BlockKind::X(7) => (0, 1),
        BlockKind::Y(8) => (0, 2),
        BlockKind::X(8) => (0, 3),
        // connectors, relative to the gadget to their left or below
        BlockKind::A => (5, 3),
        BlockKind::B => (5, 1),
        BlockKind::C => (1, 5),
        BlockKind::D => (3, 5),
        BlockKind::X(_) | BlockKind::Y(_) => unreachable!("block labels run 1..=8"),
    }
}

const GADGET_PITCH: i64 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Owning gadget `(a, b)`; for connectors the gadget on the left or below.
    pub gadget: (usize, usize),
    pub kind: BlockKind,
    /// Reference cell in `(b1, b2)` grid units.
    pub cell: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translate {
    pub block: usize,
    pub index: usize,
    pub offset: Offset,
    pub position: Point2,
}

#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub tiling: GridTiling,
    pub cert: SquareLikeCert,
    pub shape: Polygon,
    pub blocks: Vec<Block>,
    pub translates: Vec<Translate>,
    lookup: BTreeMap<((usize, usize), BlockKind, usize), usize>,
}

/// Smallest certificate parameter whose offset range covers the doubled gadget offsets.
pub fn required_cert_n(n: usize) -> usize {
    let need = 4 * n * n + 4;
    (1..).find(|m| m * m >= need).unwrap()
}

/// Builds the grid-tiling gadget instance with translates of `shape`.
///
/// Translate reference points are `c*b1 + r*b2 + 2a*u1 + 2b*u2` for block cell `(c, r)`
/// and offset `(a, b)`, so one certificate step is half an offset unit.
pub fn gadget_instance(gt: &GridTiling, shape: &Polygon, cert: &SquareLikeCert) -> Result<GadgetInstance> {
    let n = gt.n;
    if cert.n * cert.n < 4 * n * n + 4 {
        return Err(Error::InvalidInput(format!(
            "certificate parameter {} too small for n = {n}; need at least {}",
            cert.n,
            required_cert_n(n)
        )));
    }
    let mut blocks = Vec::new();
    let mut translates = Vec::new();
    let mut lookup = BTreeMap::new();
    let mut add_block = |gadget: (usize, usize), kind: BlockKind, indices: Vec<usize>| {
        let rel = ring_cell(kind);
        let cell = (
            GADGET_PITCH * (gadget.0 as i64 - 1) + rel.0,
            GADGET_PITCH * (gadget.1 as i64 - 1) + rel.1,
        );
        let base = &cert.b1.scale(&Rational::from_integer(cell.0.into())) + &cert.b2.scale(&Rational::from_integer(cell.1.into()));
        let bi = blocks.len();
        blocks.push(Block { gadget, kind, cell });
        for j in indices {
            let offset = block_offset(kind, j, n);
            let position = &(&base + &cert.u1.scale(&Rational::from_integer(offset.twice_alpha.into())))
                + &cert.u2.scale(&Rational::from_integer(offset.twice_beta.into()));
            lookup.insert((gadget, kind, j), translates.len());
            translates.push(Translate { block: bi, index: j, offset, position });
        }
    };
    let nn = n * n;
    for a in 1..=gt.k {
        for b in 1..=gt.k {
            let kept: Vec<usize> = (1..=nn).filter(|&j| gt.cell(a, b).contains(&index_pair(n, j))).collect();
            for l in 1..=8u8 {
                add_block((a, b), BlockKind::X(l), kept.clone());
                add_block((a, b), BlockKind::Y(l), (0..=nn).collect());
            }
            if a < gt.k {
                add_block((a, b), BlockKind::A, (0..=n).collect());
                add_block((a, b), BlockKind::B, (0..=n).collect());
            }
            if b < gt.k {
                add_block((a, b), BlockKind::C, (0..=n).collect());
                add_block((a, b), BlockKind::D, (0..=n).collect());
            }
        }
    }
    Ok(GadgetInstance {
        tiling: gt.clone(),
        cert: cert.clone(),
        shape: shape.clone(),
        blocks,
        translates,
        lookup,
    })
}

impl GadgetInstance {
    pub fn find(&self, gadget: (usize, usize), kind: BlockKind, j: usize) -> Option<usize> {
        self.lookup.get(&(gadget, kind, j)).copied()
    }

    pub fn label(&self, t: usize) -> String {
        let tr = &self.translates[t];
        let blk = &self.blocks[tr.block];
        format!("{}({})@{},{}", blk.kind, tr.index, blk.gadget.0, blk.gadget.1)
    }

    pub fn polygon(&self, t: usize) -> Polygon {
        self.shape.translate(&self.translates[t].position)
    }

    pub fn polygons(&self) -> Vec<Polygon> {
        (0..self.translates.len()).map(|t| self.polygon(t)).collect()
    }

    pub fn graph(&self) -> IntersectionGraph {
        let labels: Vec<String> = (0..self.translates.len()).map(|t| self.label(t)).collect();
        IntersectionGraph::build_labeled(&self.polygons(), labels, polygons_intersect)
    }

    fn hits(&self, s: usize, t: usize) -> bool {
        polygons_intersect(&self.polygon(s), &self.polygon(t))
    }

    /// Every surviving `X_l(j)` meets exactly `Y_l(j..=n^2)` and `Y_(l+1)(0..j)`.
    pub fn check_domination_pattern(&self) -> bool {
        let nn = self.tiling.n * self.tiling.n;
        for a in 1..=self.tiling.k {
            for b in 1..=self.tiling.k {
                for l in 1..=8u8 {
                    let next = l % 8 + 1;
                    for j in 1..=nn {
                        let Some(x) = self.find((a, b), BlockKind::X(l), j) else { continue };
                        for jj in 0..=nn {
                            let prev = self.find((a, b), BlockKind::Y(l), jj).unwrap();
                            let succ = self.find((a, b), BlockKind::Y(next), jj).unwrap();
                            if self.hits(x, prev) != (jj >= j) || self.hits(x, succ) != (jj < j) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Translates in blocks at grid distance at least two never meet,
    /// and translates in one block always do.
    pub fn check_block_separation(&self) -> bool {
        let polys = self.polygons();
        for s in 0..polys.len() {
            for t in s + 1..polys.len() {
                let (cs, ct) = (self.blocks[self.translates[s].block].cell, self.blocks[self.translates[t].block].cell);
                let dist = (cs.0 - ct.0).abs() + (cs.1 - ct.1).abs();
                let meets = polygons_intersect(&polys[s], &polys[t]);
                if (dist >= 2 && meets) || (dist == 0 && !meets) {
                    return false;
                }
            }
        }
        true
    }

    /// `X_1(j)..X_8(j)` in every gadget, with `j` encoding the chosen pair.
    pub fn canonical_set(&self, choice: &[Vec<(usize, usize)>]) -> Result<Vec<usize>> {
        let k = self.tiling.k;
        if choice.len() != k || choice.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput(format!("expected a {k}x{k} choice")));
        }
        let mut set = Vec::with_capacity(8 * k * k);
        for a in 1..=k {
            for b in 1..=k {
                let (x, y) = choice[a - 1][b - 1];
                if x == 0 || y == 0 || x > self.tiling.n || y > self.tiling.n {
                    return Err(Error::InvalidInput(format!("pair ({x},{y}) outside the grid")));
                }
                let j = pair_index(self.tiling.n, x, y);
                for l in 1..=8u8 {
                    let t = self.find((a, b), BlockKind::X(l), j).ok_or_else(|| {
                        Error::InvalidInput(format!("pair ({x},{y}) is not in cell ({a},{b})"))
                    })?;
                    set.push(t);
                }
            }
        }
        set.sort_unstable();
        Ok(set)
    }

    /// For the canonical set of `choice`, each connector block is fully dominated exactly
    /// when the connector condition on the neighbouring choices holds.
    pub fn check_connectors(&self, choice: &[Vec<(usize, usize)>]) -> Result<bool> {
        let set = self.canonical_set(choice)?;
        let polys: Vec<Polygon> = set.iter().map(|&t| self.polygon(t)).collect();
        for (bi, blk) in self.blocks.iter().enumerate() {
            let (a, b) = blk.gadget;
            let here = choice[a - 1][b - 1];
            let expected = match blk.kind {
                BlockKind::A => here.0 <= choice[a][b - 1].0,
                BlockKind::B => here.0 >= choice[a][b - 1].0,
                BlockKind::C => here.1 <= choice[a - 1][b].1,
                BlockKind::D => here.1 >= choice[a - 1][b].1,
                _ => continue,
            };
            let dominated = self
                .translates
                .iter()
                .enumerate()
                .filter(|(_, tr)| tr.block == bi)
                .all(|(t, _)| {
                    let p = self.polygon(t);
                    polys.iter().any(|q| polygons_intersect(&p, q))
                });
            if dominated != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `gadget <cert n>`, the tiling, the base shape, then one `at <x> <y>` line per translate.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("gadget {}\n", self.cert.n);
        out.push_str(&self.tiling.to_file_string());
        out.push_str(&self.shape.to_file_string());
        for (t, tr) in self.translates.iter().enumerate() {
            writeln!(out, "at {} {} # {}", tr.position.x, tr.position.y, self.label(t)).unwrap();
        }
        out
    }
}

/// Contents of a gadget file as written by [`GadgetInstance::to_file_string`].
#[derive(Clone, Debug)]
pub struct GadgetFile {
    pub cert_n: usize,
    pub tiling: GridTiling,
    pub shape: Polygon,
    pub positions: Vec<Point2>,
}

impl GadgetFile {
    /// Recomputes the certificate and instance and checks the listed positions against it.
    pub fn rebuild(&self) -> Result<GadgetInstance> {
        let cert = crate::squarelike::compute_squarelike_vectors(&self.shape, self.cert_n)?;
        let inst = gadget_instance(&self.tiling, &self.shape, &cert)?;
        let listed = inst.translates.iter().map(|t| &t.position);
        if inst.translates.len() != self.positions.len() || !listed.eq(self.positions.iter()) {
            return Err(Error::InvalidInput("translate positions do not match the rebuilt instance".into()));
        }
        Ok(inst)
    }
}

pub fn parse_gadget_file(text: &str) -> Result<GadgetFile> {
    let mut cert_n = None;
    let mut tiling_text = String::new();
    let mut tiling_lines = Vec::new();
    let mut positions = Vec::new();
    let shapes = parse_polygons_with(text, |line, raw, fields| {
        match fields[0] {
            "gadget" if fields.len() == 2 => {
                let n = fields[1].parse().map_err(|_| Error::parse(line, column_of(raw, fields[1]), "expected an integer"))?;
                cert_n = Some(n);
            }
            "gt" | "cell" => {
                tiling_text.push_str(raw);
                tiling_text.push('\n');
                tiling_lines.push(line);
            }
            "at" if fields.len() == 3 => {
                let x = parse_coordinate(raw, line, fields[1])?;
                let y = parse_coordinate(raw, line, fields[2])?;
                positions.push(Point2::new(x, y));
            }
            other => return Err(Error::parse(line, column_of(raw, other), format!("unrecognized line '{}'", raw.trim()))),
        }
        Ok(())
    })?;
    let cert_n = cert_n.ok_or_else(|| Error::parse(1, 1, "missing 'gadget <n>' header"))?;
    // report tiling errors against the original line numbers
    let tiling = parse_grid_tiling(&tiling_text).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Error::Parse { line: tiling_lines.get(line - 1).copied().unwrap_or(line), column, message }
        }
        other => other,
    })?;
    let shape = match <[Polygon; 1]>::try_from(shapes) {
        Ok([p]) => p,
        Err(v) => return Err(Error::InvalidInput(format!("expected one base shape, found {}", v.len()))),
    };
    Ok(GadgetFile { cert_n, tiling, shape, positions })
}
