use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyrigid::rational::parse_rational;
use polyrigid::{Error, Rational};

mod commands;
mod input;

#[derive(Parser)]
#[command(name = "polyrigid", version, about = "Rigidity of frameworks in polyhedral normed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Well-positionedness, colouring, rank and rigidity of a framework.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Global rigidity: generic certificates, then the exact search.
    Global {
        file: PathBuf,
        /// Maximum partial colourings examined per search task.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Report generic certificates as the verdict and skip the exact
        /// search when one applies.
        #[arg(long)]
        assume_generic: bool,
        #[arg(long, env = "POLYRIGID_THREADS", default_value_t = 1)]
        threads: usize,
        /// Exit with status 3 when the budget runs out.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Sparsity matroid statistics of a graph.
    Sparsity {
        /// A graph or framework file, or a name: `K5`, `C6`, `P3`,
        /// `octahedron`, `double-banana`.
        graph: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Write a framework file.
    Generate {
        #[command(subcommand)]
        kind: Generate,
        #[command(flatten)]
        output: Output,
    },
    /// Numeric search for an equivalent, non-congruent realisation.
    Witness {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        restarts: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "POLYRIGID_THREADS", default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NormName {
    Linf,
    L1,
}

#[derive(Subcommand)]
enum Generate {
    /// `K_n` realised from the rigid `K_{2d}` in ℓ∞^d.
    K2d {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "1/4", value_parser = rational)]
        epsilon: Rational,
        /// Emit the rigid spanning subgraph instead of `K_n`.
        #[arg(long)]
        rigid_part: bool,
    },
    /// `K_{2^d}` on the cube `{-1, 1}^d` in ℓ∞^d.
    Hypercube {
        #[arg(long)]
        d: usize,
    },
    /// The octahedron with 2-connected colour classes in ℓ∞².
    Octahedron,
    /// The ℓ∞^d gadget built from a framework in ℓ∞¹.
    NpGadget {
        /// Framework file of the ℓ∞¹ seed.
        #[arg(long)]
        seed: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1/2", value_parser = rational)]
        epsilon: Rational,
    },
    /// A well-positioned flexible realisation along a smooth direction.
    Flexible {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value = "linf")]
        norm: NormName,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Seeded random well-positioned rational realisation.
    Random {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value = "linf")]
        norm: NormName,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        denominator_bound: i64,
        /// Redraw until infinitesimally rigid.
        #[arg(long)]
        rigid: bool,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Invalid(String),
    Budget,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(output: &Output, command: &str, started: Instant, mut doc: Value) -> Result<(), Failure> {
    doc["command"] = json!(command);
    doc["elapsed_ms"] = json!(started.elapsed().as_secs_f64() * 1000.0);
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    emit(output, &text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let started = Instant::now();
    match cli.command {
        Command::Analyze { file, output } => {
            let fw = input::framework(&file)?;
            report(&output, "analyze", started, commands::analyze(&fw)?)
        }
        Command::Global { file, budget, assume_generic, threads, strict, output } => {
            let fw = input::framework(&file)?;
            let (doc, exceeded) = commands::global(&fw, budget, assume_generic, threads)?;
            report(&output, "global", started, doc)?;
            if exceeded && strict {
                return Err(Failure::Budget);
            }
            Ok(())
        }
        Command::Sparsity { graph, d, k, output } => {
            let g = input::graph(&graph)?;
            report(&output, "sparsity", started, commands::sparsity(&g, d, k)?)
        }
        Command::Generate { kind, output } => emit(&output, &commands::generate(kind)?),
        Command::Witness { file, restarts, seed, threads, output } => {
            let fw = input::framework(&file)?;
            report(&output, "witness", started, commands::witness(&fw, restarts, seed, threads))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget) => {
            eprintln!("error: budget exceeded");
            ExitCode::from(3)
        }
    }
}
