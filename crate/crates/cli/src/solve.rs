use std::path::Path;

use geodom::diskdom::{coverage_count, parse_disks, xp_minimum, xp_solve, LookupTable};
use geodom::geom2d::parse_polygon;
use geodom::pattern1d::{parse_instance, parse_pattern, Classification, Instance1D, PatternInput};
use geodom::solver1d::{solve_fpt_branching, solve_instance, Algo};
use geodom::squarelike::{compute_squarelike_vectors, verify_squarelike};
use geodom::suite::run_suite;
use serde_json::json;

use crate::context::{CliError, CliResult, Inputs, Outcome, EXIT_INTERNAL, EXIT_NONE};

fn witness_text(witness: &[usize]) -> String {
    let ids: Vec<String> = witness.iter().map(|i| i.to_string()).collect();
    format!("size {}\nwitness {}\n", witness.len(), ids.join(" "))
}

fn found(witness: Vec<usize>) -> Outcome {
    Outcome::ok(witness_text(&witness), json!({ "size": witness.len(), "witness": witness }))
}

fn none_found(message: String) -> Outcome {
    Outcome { stdout: format!("none: {message}\n"), payload: json!({ "size": null, "message": message }), code: EXIT_NONE }
}

pub fn classify(inputs: &mut Inputs, pattern: &Path) -> CliResult<Outcome> {
    let q = inputs.parse(pattern, parse_pattern)?;
    let verdict = q.classify();
    let ratio = match &verdict {
        Classification::IrrationalPoints(r) => Some(r.pretty()),
        _ => None,
    };
    Ok(Outcome::ok(format!("{verdict}\n"), json!({ "verdict": verdict.to_string(), "ratio": ratio })))
}

/// Reads the instance, taking the pattern from `pattern` when given.
fn load_instance(inputs: &mut Inputs, pattern: Option<&Path>, instance: &Path) -> CliResult<Instance1D> {
    let Some(pattern) = pattern else {
        return inputs.parse(instance, parse_instance);
    };
    let q = inputs.parse(pattern, parse_pattern)?;
    let mut inst = inputs.parse(instance, |text| {
        // translate-only files get the pattern prepended; line numbers are shifted back on error
        let head = q.to_file_string();
        let shift = head.lines().count();
        parse_instance(&format!("{head}{text}")).map_err(|e| match e {
            geodom::Error::Parse { line, column, message } if line > shift => {
                geodom::Error::Parse { line: line - shift, column, message }
            }
            other => other,
        })
    })?;
    inst.pattern = PatternInput::Bounded(q);
    Ok(inst)
}

pub fn solve_1d(
    inputs: &mut Inputs,
    pattern: Option<&Path>,
    instance: &Path,
    algo: Algo,
    k: Option<usize>,
) -> CliResult<Outcome> {
    let inst = load_instance(inputs, pattern, instance)?;
    if let (Algo::Branch, Some(k)) = (algo, k) {
        let PatternInput::Bounded(q) = &inst.pattern else {
            return Err(CliError::input("branching needs a bounded pattern"));
        };
        return Ok(match solve_fpt_branching(q, &inst.translates, k)? {
            Some(w) => found(w),
            None => none_found(format!("no dominating set of size at most {k}")),
        });
    }
    let sol = solve_instance(&inst, algo)?;
    match k {
        Some(k) if sol.size > k => Ok(none_found(format!("minimum size {} exceeds {k}", sol.size))),
        _ => Ok(found(sol.witness)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DiskMode {
    Xp,
    Check,
}

pub fn disk_solve(
    inputs: &mut Inputs,
    instance: &Path,
    k: Option<usize>,
    mode: DiskMode,
    set: Option<&[usize]>,
) -> CliResult<Outcome> {
    let inst = inputs.parse(instance, parse_disks)?;
    let mut table = LookupTable::lazy();
    match mode {
        DiskMode::Xp => match k {
            Some(k) => Ok(match xp_solve(&inst, &mut table, k)? {
                Some(w) => found(w),
                None => none_found(format!("no dominating set of size at most {k}")),
            }),
            None => Ok(found(xp_minimum(&inst, &mut table)?.1)),
        },
        DiskMode::Check => {
            let set = set.ok_or_else(|| CliError::input("--mode check needs --set"))?;
            let covered = coverage_count(&inst, &mut table, set)?;
            let dominating = covered == inst.len();
            let within = k.is_none_or(|k| set.len() <= k);
            let stdout = format!(
                "covered {covered} of {}\ndominating {}\n",
                inst.len(),
                if dominating { "yes" } else { "no" }
            );
            let payload = json!({ "covered": covered, "n": inst.len(), "dominating": dominating, "within_k": within });
            let code = if dominating && within { 0 } else { EXIT_NONE };
            Ok(Outcome { stdout, payload, code })
        }
    }
}

pub fn squarelike(inputs: &mut Inputs, poly: &Path, n: usize) -> CliResult<Outcome> {
    let p = inputs.parse(poly, parse_polygon)?;
    let cert = compute_squarelike_vectors(&p, n)?;
    let report = verify_squarelike(&p, &cert, n);
    let mut stdout = format!("{cert}\nbits {}\n", cert.bit_length());
    let mut props = Vec::new();
    for (i, failure) in report.failures.iter().enumerate() {
        match failure {
            None => stdout.push_str(&format!("property {} PASS\n", i + 1)),
            Some(msg) => stdout.push_str(&format!("property {} FAIL: {msg}\n", i + 1)),
        }
        props.push(json!({ "property": i + 1, "passed": failure.is_none(), "failure": failure }));
    }
    let payload = json!({
        "b1": [cert.b1.x.to_string(), cert.b1.y.to_string()],
        "b2": [cert.b2.x.to_string(), cert.b2.y.to_string()],
        "u1": [cert.u1.x.to_string(), cert.u1.y.to_string()],
        "u2": [cert.u2.x.to_string(), cert.u2.y.to_string()],
        "epsilon": cert.epsilon.to_string(),
        "bits": cert.bit_length(),
        "properties": props,
    });
    let code = if report.passed() { 0 } else { EXIT_INTERNAL };
    Ok(Outcome { stdout, payload, code })
}

pub fn bench(seed: u64) -> Outcome {
    let report = run_suite(seed);
    let mut stdout = String::new();
    for c in &report.criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        stdout.push_str(&format!("{verdict} [{}] {} ({} checks, {} failed)\n", c.id, c.name, c.cases, c.failures));
    }
    let payload = serde_json::from_str(&report.to_json()).expect("report is valid JSON");
    let code = if report.passed() { 0 } else { EXIT_INTERNAL };
    Outcome { stdout, payload, code }
}
