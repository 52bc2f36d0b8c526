use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_NONE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<geodom::Error> for CliError {
    fn from(e: geodom::Error) -> Self {
        use geodom::Error as E;
        let code = match e {
            E::Internal(_) => EXIT_INTERNAL,
            E::SearchFailed(_) => EXIT_NONE,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What a command printed, its structured payload and its exit code.
pub struct Outcome {
    pub stdout: String,
    pub payload: Value,
    pub code: u8,
}

impl Outcome {
    pub fn ok(stdout: String, payload: Value) -> Self {
        Outcome { stdout, payload, code: 0 }
    }
}

/// Reads input files, remembering a digest of each for the run report.
#[derive(Default)]
pub struct Inputs {
    digests: Vec<(PathBuf, String)>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        self.digests.push((path.to_path_buf(), hex::encode(Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|_| CliError::input(format!("{}: not valid UTF-8", path.display())))
    }

    /// Parses a file, prefixing parse errors with its path.
    pub fn parse<T>(&mut self, path: &Path, parse: impl FnOnce(&str) -> geodom::Result<T>) -> CliResult<T> {
        let text = self.read(path)?;
        parse(&text).map_err(|e| {
            let mut err = CliError::from(e);
            err.message = format!("{}: {}", path.display(), err.message);
            err
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.digests
                .iter()
                .map(|(p, d)| json!({ "path": p.display().to_string(), "sha256": d }))
                .collect(),
        )
    }
}

pub fn run_report(command: &str, inputs: &Inputs, outcome: &Outcome, elapsed: Duration, seed: u64) -> Value {
    json!({
        "command": command,
        "inputs": inputs.to_json(),
        "exit_code": outcome.code,
        "result": outcome.payload,
        "wall_time_ms": elapsed.as_secs_f64() * 1000.0,
        "seed": seed,
    })
}

/// PASS/FAIL lines for a list of named checks.
pub fn check_lines(checks: &[(String, bool)]) -> String {
    checks
        .iter()
        .map(|(name, ok)| format!("{} {name}\n", if *ok { "PASS" } else { "FAIL" }))
        .collect()
}

pub fn checks_json(checks: &[(String, bool)]) -> Value {
    Value::Array(checks.iter().map(|(name, ok)| json!({ "check": name, "passed": ok })).collect())
}
