use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cutcactus::cuts::Budget;
use cutcactus::generalized::Mode;
use cutcactus::golden::generate_golden;
use cutcactus::graph::{parse_graph, GraphDocument, Multigraph, TerminalSet};
use cutcactus::oracle::verify_instance;
use cutcactus::pipeline::analyze;
use cutcactus::random::random_instance;
use cutcactus::report::{to_dot, AnalysisDocument};
use cutcactus::Error;

#[derive(Parser)]
#[command(name = "cutcactus", version, about = "Cactus representations of minimum edge cuts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the cactus of a graph and write it as JSON.
    Build {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Largest edge count for exhaustive enumeration.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check every structural claim against the brute-force oracle.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(short)]
        k: Option<usize>,
        /// Largest edge count for exhaustive enumeration.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Write a seeded random connected multigraph.
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        terminals: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Regenerate the golden file of oracle values for the fixtures.
    Golden {
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::from_name(s).ok_or_else(|| format!("unknown mode `{s}`; expected ends, global, thin or slim"))
}

const VERIFICATION_FAILED: u8 = 1;
const USAGE: u8 = 2;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Structural(_) => VERIFICATION_FAILED,
        _ => USAGE,
    }
}

fn budget(edges: Option<usize>) -> Budget {
    let mut b = Budget::default();
    if let Some(edges) = edges {
        b.max_edges = edges;
    }
    b
}

fn load(path: &Path) -> Result<(Multigraph, TerminalSet), Error> {
    parse_graph(&fs::read_to_string(path)?)
}

fn check_k(mode: Mode, k: Option<usize>) -> Result<(), String> {
    match (mode.needs_k(), k) {
        (true, None) => Err(format!("mode {mode} requires -k")),
        (true, Some(0)) => Err("-k must be at least 1".into()),
        _ => Ok(()),
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Build { input, mode, k, output, dot, budget: edges } => {
            let (g, t) = load(&input)?;
            let a = analyze(&g, &t, mode, k, &budget(edges))?;
            fs::write(&output, AnalysisDocument::new(&a).to_json())?;
            if let Some(dot) = dot {
                fs::write(dot, to_dot(&a))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, mode, k, budget: edges } => {
            let (g, t) = load(&input)?;
            let report = verify_instance(&g, &t, mode, k, &budget(edges));
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(VERIFICATION_FAILED))
            }
        }
        Command::Random { vertices, edges, terminals, seed, output } => {
            let (g, t) = random_instance(vertices, edges, terminals, seed)?;
            let mut text = serde_json::to_string_pretty(&GraphDocument::from_graph(&g, &t))?;
            text.push('\n');
            fs::write(output, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Golden { output } => {
            fs::write(output, generate_golden(&Budget::default())?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode_and_k = match &cli.command {
        Command::Build { mode, k, .. } | Command::Verify { mode, k, .. } => Some((*mode, *k)),
        _ => None,
    };
    if let Some((mode, k)) = mode_and_k {
        if let Err(msg) = check_k(mode, k) {
            eprintln!("error: {msg}");
            return ExitCode::from(USAGE);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
