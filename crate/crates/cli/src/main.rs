mod context;
mod generate;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use geodom::solver1d::Algo;
use geodom::suite::DEFAULT_SEED;

use context::{run_report, CliError, CliResult, Inputs, Outcome, EXIT_INPUT};
use generate::VerifyTarget;
use solve::DiskMode;

const FORMATS: &str = "\
FILE FORMATS (blank lines and text after '#' are ignored)

  pattern      point <v>            one line per point
               interval <lo> <hi>   closed interval, lo < hi
               Values are rationals or quadratic surds: 3, -1/2, sqrt(2), 1/2+3*sqrt(5).
  1D instance  a pattern followed by 'translate <v>' lines.
               With --pattern, the instance file may hold only translate lines.
  graph        n <count>, then 'e <u> <v>' per edge (0-based vertices).
  disks        disk <x> <y>         one radius-1 disk per line, rational center.
  polygon      poly <k>, then k lines 'v <x> <y>' in boundary order.
  grid tiling  gt <k> <n>, then 'cell <a> <b>: (x,y) (x,y) ...' (all 1-based).
  split graph  split <c> <i>, then 'e <u> <v>' per cross edge. Vertices 0..c form
               the clique and c..c+i the independent set.
  gadget       gadget <cert n>, a grid tiling, the base polygon, then one
               'at <x> <y>' line per translate (written by gen-gadget).
  split file   a split graph followed by one polygon per vertex (written by gen-splitpoly).

EXIT CODES
  0 success, 1 infeasible or verification failed, 2 input error, 3 internal invariant violation";

#[derive(Parser)]
#[command(name = "geodom", version, about = "Dominating sets in geometric intersection graphs", after_long_help = FORMATS)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write a JSON run report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auto,
    Dp,
    Rational,
    Branch,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Auto => Algo::Auto,
            AlgoArg::Dp => Algo::Dp,
            AlgoArg::Rational => Algo::Rational,
            AlgoArg::Branch => Algo::Branch,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a 1D pattern: HasInterval, RationalPoints or IrrationalPoints.
    Classify {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Minimum dominating set of 1D pattern translates.
    #[command(name = "solve-1d")]
    Solve1d {
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algo: AlgoArg,
        /// Size budget; exit 1 when no dominating set fits.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Dominating set of unit disks by face lookup.
    #[command(name = "disk-solve")]
    DiskSolve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "xp")]
        mode: DiskMode,
        /// Comma-separated disk indices for --mode check.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
    /// Compute and verify square-like vectors for a polygon.
    Squarelike {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Pattern and translates realizing a graph.
    #[command(name = "gen-universal")]
    GenUniversal {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translates of an irrational point pattern forming a triangular grid.
    #[command(name = "gen-trigrid")]
    GenTrigrid {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Use the pattern as given instead of rescaling it to span 1.
        #[arg(long)]
        keep_scale: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polygon translates encoding a grid tiling instance.
    #[command(name = "gen-gadget")]
    GenGadget {
        #[arg(long)]
        gridtiling: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        /// Certificate parameter; defaults to the smallest that fits the tiling.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convex polygons realizing a split graph.
    #[command(name = "gen-splitpoly")]
    GenSplitpoly {
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a generated file.
    #[command(group(ArgGroup::new("target").required(true).args(["universal", "trigrid", "gadget", "splitpoly"])))]
    Verify {
        /// 1D instance from gen-universal; needs --graph.
        #[arg(long, requires = "graph")]
        universal: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// 1D instance from gen-trigrid.
        #[arg(long)]
        trigrid: Option<PathBuf>,
        #[arg(long)]
        radius: Option<usize>,
        /// Gadget file from gen-gadget.
        #[arg(long)]
        gadget: Option<PathBuf>,
        /// Split file from gen-splitpoly.
        #[arg(long)]
        splitpoly: Option<PathBuf>,
    },
    /// Run the seeded end-to-end check suite.
    Bench,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Solve1d { .. } => "solve-1d",
            Command::DiskSolve { .. } => "disk-solve",
            Command::Squarelike { .. } => "squarelike",
            Command::GenUniversal { .. } => "gen-universal",
            Command::GenTrigrid { .. } => "gen-trigrid",
            Command::GenGadget { .. } => "gen-gadget",
            Command::GenSplitpoly { .. } => "gen-splitpoly",
            Command::Verify { .. } => "verify",
            Command::Bench => "bench",
        }
    }
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> CliResult<Outcome> {
    match &cli.command {
        Command::Classify { pattern } => solve::classify(inputs, pattern),
        Command::Solve1d { pattern, instance, algo, k } => {
            solve::solve_1d(inputs, pattern.as_deref(), instance, (*algo).into(), *k)
        }
        Command::DiskSolve { instance, k, mode, set } => solve::disk_solve(inputs, instance, *k, *mode, set.as_deref()),
        Command::Squarelike { poly, n } => solve::squarelike(inputs, poly, *n),
        Command::GenUniversal { graph, out } => generate::gen_universal(inputs, graph, out.as_deref()),
        Command::GenTrigrid { pattern, radius, keep_scale, out } => {
            generate::gen_trigrid(inputs, pattern, *radius, *keep_scale, out.as_deref())
        }
        Command::GenGadget { gridtiling, poly, n, out } => {
            generate::gen_gadget(inputs, gridtiling, poly, *n, out.as_deref())
        }
        Command::GenSplitpoly { split, out } => generate::gen_splitpoly(inputs, split, out.as_deref()),
        Command::Verify { universal, graph, trigrid, radius, gadget, splitpoly } => {
            let target = if let (Some(instance), Some(graph)) = (universal, graph) {
                VerifyTarget::Universal { instance, graph }
            } else if let Some(instance) = trigrid {
                VerifyTarget::Trigrid { instance, radius: *radius }
            } else if let Some(path) = gadget {
                VerifyTarget::Gadget(path)
            } else if let Some(path) = splitpoly {
                VerifyTarget::Splitpoly(path)
            } else {
                return Err(CliError::input("nothing to verify"));
            };
            generate::verify(inputs, target)
        }
        Command::Bench => Ok(solve::bench(cli.seed)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match dispatch(&cli, &mut inputs) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            let payload = serde_json::json!({ "error": e.message });
            Outcome { stdout: String::new(), payload, code: e.code }
        }
    };
    print!("{}", outcome.stdout);
    if let Some(path) = &cli.report {
        let report = run_report(cli.command.name(), &inputs, &outcome, start.elapsed(), cli.seed);
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    }
    ExitCode::from(outcome.code)
}
