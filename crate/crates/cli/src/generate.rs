use std::fs;
use std::path::Path;

use geodom::constructions::{
    gadget_instance, gt_brute_solve, parse_gadget_file, parse_grid_tiling, parse_split_file, parse_split_graph,
    required_cert_n, split_file_string, split_graph_polygons, trigrid_realization, universal_pattern, verify_split,
    verify_trigrid, GadgetInstance, SplitGraph,
};
use geodom::exactnum::QuadNum;
use geodom::geom2d::{parse_polygon, Polygon};
use geodom::graphcore::{parse_graph, IntersectionGraph};
use geodom::pattern1d::{parse_instance, parse_pattern, Instance1D, Pattern1D, PatternInput};
use geodom::squarelike::compute_squarelike_vectors;
use serde_json::json;

use crate::context::{check_lines, checks_json, CliError, CliResult, Inputs, Outcome, EXIT_INTERNAL, EXIT_NONE};

type Checks = Vec<(String, bool)>;

/// Writes the generated file with the checks appended as comments.
fn emit(body: String, checks: &Checks, out: Option<&Path>, extra: serde_json::Value) -> CliResult<Outcome> {
    let mut text = body;
    for (name, ok) in checks {
        text.push_str(&format!("# verify {} {name}\n", if *ok { "PASS" } else { "FAIL" }));
    }
    let stdout = match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            check_lines(checks)
        }
        None => text,
    };
    let passed = checks.iter().all(|(_, ok)| *ok);
    let payload = json!({ "checks": checks_json(checks), "passed": passed, "details": extra });
    Ok(Outcome { stdout, payload, code: if passed { 0 } else { EXIT_INTERNAL } })
}

/// Outcome of `verify`: PASS/FAIL lines and exit code 1 on any failure.
fn verdict(checks: Checks) -> Outcome {
    let passed = checks.iter().all(|(_, ok)| *ok);
    let mut stdout = check_lines(&checks);
    stdout.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Outcome { stdout, payload: json!({ "checks": checks_json(&checks), "passed": passed }), code: if passed { 0 } else { EXIT_NONE } }
}

fn universal_checks(p: &Pattern1D, xs: &[QuadNum], n: usize, edges: &[(usize, usize)]) -> Checks {
    vec![
        ("translate count matches graph".into(), xs.len() == n),
        ("adjacency equals graph".into(), xs.len() == n && p.graph(xs).adjacency_equals(edges)),
    ]
}

pub fn gen_universal(inputs: &mut Inputs, graph: &Path, out: Option<&Path>) -> CliResult<Outcome> {
    let (n, edges) = inputs.parse(graph, parse_graph)?;
    let g = IntersectionGraph::from_edges(n, &edges)?;
    let (p, xs) = universal_pattern(&g)?;
    let checks = universal_checks(&p, &xs, n, &edges);
    let inst = Instance1D { pattern: PatternInput::Bounded(p), translates: xs };
    emit(inst.to_file_string(), &checks, out, json!({ "vertices": n, "edges": edges.len() }))
}

fn bounded(inst: Instance1D) -> CliResult<(Pattern1D, Vec<QuadNum>)> {
    match inst.pattern {
        PatternInput::Bounded(p) => Ok((p, inst.translates)),
        PatternInput::Unbounded => Err(CliError::input("expected a bounded pattern")),
    }
}

fn grid_radius(count: usize) -> Option<usize> {
    let side = (1..=count).find(|s| s * s >= count)?;
    (side * side == count && side % 2 == 1).then_some(side / 2)
}

pub fn gen_trigrid(
    inputs: &mut Inputs,
    pattern: &Path,
    radius: usize,
    keep_scale: bool,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let q = inputs.parse(pattern, parse_pattern)?;
    let q = if keep_scale { q } else { q.unit_span() };
    let real = trigrid_realization(&q, radius)?;
    let checks = vec![(format!("triangular grid adjacency at radius {radius}"), verify_trigrid(&q, &real.translates, radius))];
    let extra = json!({
        "x_star": real.x_star.to_string(),
        "candidates": real.candidates,
        "a_prime": real.a_prime,
        "y_star": real.y_star.to_string(),
    });
    let inst = Instance1D { pattern: PatternInput::Bounded(q), translates: real.translates };
    emit(inst.to_file_string(), &checks, out, extra)
}

fn gadget_checks(inst: &GadgetInstance) -> CliResult<Checks> {
    let mut checks = vec![
        ("domination pattern of X blocks".to_string(), inst.check_domination_pattern()),
        ("blocks at distance >= 2 are disjoint".to_string(), inst.check_block_separation()),
    ];
    match gt_brute_solve(&inst.tiling) {
        Some(sol) => {
            let set = inst.canonical_set(&sol)?;
            let k = inst.tiling.k;
            checks.push((format!("canonical set has size {}", 8 * k * k), set.len() == 8 * k * k));
            checks.push(("canonical set dominates".into(), inst.graph().is_dominating(&set)?));
            checks.push(("connector conditions".into(), inst.check_connectors(&sol)?));
        }
        None => checks.push(("tiling has no solution; canonical checks skipped".into(), true)),
    }
    Ok(checks)
}

pub fn gen_gadget(
    inputs: &mut Inputs,
    gridtiling: &Path,
    poly: &Path,
    cert_n: Option<usize>,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let gt = inputs.parse(gridtiling, parse_grid_tiling)?;
    let shape: Polygon = inputs.parse(poly, parse_polygon)?;
    let n = cert_n.unwrap_or_else(|| required_cert_n(gt.n));
    let cert = compute_squarelike_vectors(&shape, n)?;
    let inst = gadget_instance(&gt, &shape, &cert)?;
    let checks = gadget_checks(&inst)?;
    let extra = json!({ "translates": inst.translates.len(), "blocks": inst.blocks.len(), "cert_n": n });
    emit(inst.to_file_string(), &checks, out, extra)
}

fn split_checks(sg: &SplitGraph, polygons: &[Polygon]) -> Checks {
    let r = verify_split(sg, polygons);
    vec![
        ("adjacency equals split graph".into(), r.adjacency),
        ("clique polygons pairwise intersect".into(), r.clique_intersects),
        ("independent polygons pairwise disjoint".into(), r.independent_disjoint),
        ("containment exactly on cross edges".into(), r.containment),
        ("polygons are convex".into(), polygons.iter().all(Polygon::is_convex)),
    ]
}

pub fn gen_splitpoly(inputs: &mut Inputs, split: &Path, out: Option<&Path>) -> CliResult<Outcome> {
    let sg = inputs.parse(split, parse_split_graph)?;
    let real = split_graph_polygons(&sg)?;
    let checks = split_checks(&sg, &real.polygons);
    let extra = json!({ "clique": sg.clique, "independent": sg.independent });
    emit(split_file_string(&sg, &real.polygons), &checks, out, extra)
}

pub enum VerifyTarget<'a> {
    Universal { instance: &'a Path, graph: &'a Path },
    Trigrid { instance: &'a Path, radius: Option<usize> },
    Gadget(&'a Path),
    Splitpoly(&'a Path),
}

pub fn verify(inputs: &mut Inputs, target: VerifyTarget<'_>) -> CliResult<Outcome> {
    let checks = match target {
        VerifyTarget::Universal { instance, graph } => {
            let (p, xs) = bounded(inputs.parse(instance, parse_instance)?)?;
            let (n, edges) = inputs.parse(graph, parse_graph)?;
            universal_checks(&p, &xs, n, &edges)
        }
        VerifyTarget::Trigrid { instance, radius } => {
            let (p, xs) = bounded(inputs.parse(instance, parse_instance)?)?;
            let r = match radius {
                Some(r) => r,
                None => grid_radius(xs.len())
                    .ok_or_else(|| CliError::input(format!("{} translates do not form a square grid", xs.len())))?,
            };
            vec![(format!("triangular grid adjacency at radius {r}"), verify_trigrid(&p, &xs, r))]
        }
        VerifyTarget::Gadget(path) => {
            let file = inputs.parse(path, parse_gadget_file)?;
            gadget_checks(&file.rebuild()?)?
        }
        VerifyTarget::Splitpoly(path) => {
            let (sg, polygons) = inputs.parse(path, parse_split_file)?;
            let mut checks = vec![("one polygon per vertex".to_string(), polygons.len() == sg.len())];
            checks.extend(split_checks(&sg, &polygons));
            checks
        }
    };
    Ok(verdict(checks))
}
