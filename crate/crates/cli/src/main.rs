use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use circlepack::genseq::{GenKind, GenSpec};
use circlepack::SquareMode;
use circlepack_cli::io::{parse_radii, to_json};
use circlepack_cli::svg::render_svg;
use circlepack_cli::{batch, bounds, eps_from_env, exit_code, gen, run_pack, verify, BatchConfig, BoundsQuery, RunConfig};
use clap::{Args, Parser, Subcommand};

/// Online circle packing into the unit square and 1 x b rectangles.
#[derive(Parser)]
#[command(name = "circlepack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack a radius sequence online. Exit 0 all packed, 2 rejected, 1 input error.
    Pack(PackArgs),
    /// Validate a packing result JSON. Exit 0 valid, 1 invalid.
    Verify {
        /// Result JSON, `-` or absent for stdin.
        input: Option<PathBuf>,
    },
    /// Print density bounds or the class table.
    Bounds {
        /// Dense-block density for relative radius bound q.
        #[arg(long = "delta", value_name = "q")]
        delta: Option<f64>,
        /// Guarantee of the 1 x b rectangle.
        #[arg(long = "rect", value_name = "b")]
        rect: Option<f64>,
        /// Guarantee of the square in this mode (general, no-tiny).
        #[arg(long = "square-mode", value_name = "m")]
        square_mode: Option<SquareMode>,
        /// Class table as CSV (of the square mode when given).
        #[arg(long)]
        table: bool,
    },
    /// Generate a radius sequence, one per line.
    Gen(GenArgs),
    /// Pack many generated sequences in parallel and summarize.
    Batch {
        #[command(flatten)]
        container: ContainerArgs,
        #[command(flatten)]
        gen: GenArgs,
        /// Number of runs; run seeds are derived from --seed.
        #[arg(long, default_value_t = 100)]
        runs: u64,
        /// Shrink the first rejected sequence to a minimal counterexample.
        #[arg(long)]
        minimize: bool,
    },
}

#[derive(Args)]
struct ContainerArgs {
    /// `square` or `rect`.
    #[arg(long, default_value = "square")]
    container: String,
    /// Rectangle length (b >= 1).
    #[arg(long)]
    b: Option<f64>,
    /// Square mode: general or no-tiny.
    #[arg(long)]
    mode: Option<SquareMode>,
}

#[derive(Args)]
struct PackArgs {
    #[command(flatten)]
    container: ContainerArgs,
    /// Radii, one per line or a JSON array; `-` or absent for stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Result JSON path; stdout when absent.
    #[arg(long)]
    json: Option<PathBuf>,
    /// SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// SVG pixels per unit.
    #[arg(long, default_value_t = 500.0)]
    scale: f64,
    /// Block ledger JSON path.
    #[arg(long)]
    ledger: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "greedy-adversary")]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Area budget; defaults to 1 for `gen`, to the container guarantee for `batch`.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    rmin: Option<f64>,
    #[arg(long)]
    rmax: Option<f64>,
    /// Sequence length of the uniform kind.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Base lane width of the class-boundary kind.
    #[arg(long, default_value_t = 1.0)]
    width: f64,
}

impl GenArgs {
    fn spec(&self, threshold: f64, r_min: f64, r_max: f64) -> GenSpec {
        let mut spec = GenSpec::new(
            self.kind,
            self.seed,
            self.threshold.unwrap_or(threshold),
            self.rmin.unwrap_or(r_min),
            self.rmax.unwrap_or(r_max),
        );
        spec.count = self.count;
        spec.width = self.width;
        spec
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read stdin")?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn config(c: &ContainerArgs, eps: f64) -> Result<RunConfig> {
    RunConfig::new(&c.container, c.b, c.mode, eps)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Pack(a) => {
            let cfg = config(&a.container, eps_from_env()?)?;
            let radii = parse_radii(&read_input(a.input.as_deref())?)?;
            let run = run_pack(&cfg, &radii)?;
            write_output(a.json.as_deref(), &to_json(&run.result)?)?;
            if let Some(p) = &a.svg {
                write_output(Some(p), &render_svg(&run.result, a.scale))?;
            }
            if let Some(p) = &a.ledger {
                write_output(Some(p), &to_json(&run.ledgers)?)?;
            }
            Ok(exit_code(run.result.status))
        }
        Command::Verify { input } => {
            let report = verify(&read_input(input.as_deref())?, eps_from_env()?)?;
            write_output(None, &to_json(&report)?)?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Bounds { delta, rect, square_mode, table } => {
            write_output(None, &bounds(&BoundsQuery { delta, rect, square_mode, table })?)?;
            Ok(0)
        }
        Command::Gen(g) => {
            write_output(None, &gen(&g.spec(1.0, 1e-3, 0.5))?)?;
            Ok(0)
        }
        Command::Batch { container, gen, runs, minimize } => {
            let run = config(&container, eps_from_env()?)?;
            let spec = gen.spec(run.guarantee(), run.min_radius(), run.max_radius());
            let summary = batch(&BatchConfig { run, gen: spec, runs, minimize })?;
            write_output(None, &to_json(&summary)?)?;
            Ok(summary.exit_code())
        }
    }
}

fn main() -> ExitCode {
    // usage errors are input errors (exit 1); exit 2 means a rejection
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
