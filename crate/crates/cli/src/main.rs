//! `fdes`: command-line front end for fdes-core.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict,
//! 2 invalid input or I/O failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "fdes", version, about = "Supervisory control of fuzzy discrete-event systems")]
struct Cli {
    /// Write a JSON run report (command, input digests, verdict, outputs).
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Include wall-clock timing in the run report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that files parse and satisfy their invariants.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Operations on fuzzy languages.
    Lang {
        #[arg(long, value_enum)]
        op: LangOp,
        left: PathBuf,
        right: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Product or parallel composition of two automata.
    Compose {
        #[arg(long, value_enum)]
        op: ComposeOp,
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Controllability of a specification with respect to a plant.
    Check(PairArgs),
    /// Build a supervisor realizing a controllable specification.
    Synthesize {
        #[command(flatten)]
        pair: PairArgs,
        /// Always emit a tabled supervisor, even for a deterministic
        /// specification automaton.
        #[arg(long)]
        table: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Supremal controllable sublanguage of the specification.
    Supremal {
        #[command(flatten)]
        pair: PairArgs,
        /// Write the automaton-mode algorithm trace here.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Infimal controllable superlanguage of the specification.
    Infimal {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Supervisory control problem between a minimal and a maximal language.
    Scp {
        #[arg(long)]
        plant: PathBuf,
        #[arg(long)]
        min: PathBuf,
        #[arg(long)]
        max: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Crisp set of words whose grade is at least theta.
    Threshold {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long)]
        theta: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the cross-checking suites (seed from --seed or FDES_SEED).
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    plant: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    /// Treat both inputs as languages (automata are enumerated).
    #[arg(long, conflicts_with = "auto")]
    lang: bool,
    /// Treat both inputs as automata.
    #[arg(long)]
    auto: bool,
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LangOp {
    Union,
    Intersection,
    Concat,
    Contains,
    Support,
    Show,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComposeOp {
    Product,
    Parallel,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let mut ctx = report::Context::default();
    let result = commands::run(&cli.command, &mut ctx);
    let code = match &result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    if let Some(path) = &cli.report {
        let timing = cli.timing.then(|| started.elapsed());
        if let Err(e) = ctx.write(path, code, timing) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
