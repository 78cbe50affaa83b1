use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use locclab::cli::{
    self, instantiate_protocol, parse_ensemble, parse_protocol, DemoKind, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};
use locclab::error::{Error, ParseErrorKind, Result};

/// Bipartite LOCC discrimination lab.
///
/// Exit codes: 0 success, 2 parse/usage error, 3 precondition violation,
/// 4 internal invariant breach.
#[derive(Parser)]
#[command(name = "locclab", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in demonstration.
    Demo {
        #[arg(value_enum)]
        which: DemoArg,
        /// Haar samples per spoiling scan.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Seed for all stochastic steps.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print only the machine-readable KEY=VALUE section.
        #[arg(long)]
        machine_only: bool,
    },
    /// Holism verdict for an ensemble file.
    Verdict {
        ensemble: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        machine_only: bool,
    },
    /// Score a protocol file against an ensemble file.
    Discriminate {
        ensemble: PathBuf,
        protocol: PathBuf,
        #[arg(long)]
        machine_only: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DemoArg {
    BellParity,
    Domino,
    Classical,
}

impl From<DemoArg> for DemoKind {
    fn from(value: DemoArg) -> Self {
        match value {
            DemoArg::BellParity => DemoKind::BellParity,
            DemoArg::Domino => DemoKind::Domino,
            DemoArg::Classical => DemoKind::Classical,
        }
    }
}

/// 0 or unset means automatic sizing; anything else pins the pool width.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("LOCCLAB_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        col: 0,
        kind: ParseErrorKind::Syntax,
        msg: format!("cannot read '{}': {}", path.display(), e),
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".into())
}

fn run(args: Args) -> Result<String> {
    match args.command {
        Command::Demo {
            which,
            samples,
            seed,
            machine_only,
        } => {
            let report = cli::run_demo(which.into(), samples, seed)?;
            Ok(report.render(machine_only))
        }
        Command::Verdict {
            ensemble,
            samples,
            seed,
            machine_only,
        } => {
            let text = read_input(&ensemble)?;
            let parsed = parse_ensemble(&text)?.with_id(stem(&ensemble));
            let report = cli::run_verdict(&parsed, samples, seed)?;
            Ok(report.render(machine_only))
        }
        Command::Discriminate {
            ensemble,
            protocol,
            machine_only,
        } => {
            let ensemble_text = read_input(&ensemble)?;
            let parsed = parse_ensemble(&ensemble_text)?.with_id(stem(&ensemble));
            let protocol_text = read_input(&protocol)?;
            let spec = parse_protocol(&protocol_text)?;
            let bound = instantiate_protocol(&spec, &stem(&protocol), parsed.dims())?;
            let report = cli::run_discriminate(&parsed, &bound)?;
            Ok(report.render(machine_only))
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    init_thread_pool();
    match run(args) {
        Ok(rendered) => {
            print!("{}", rendered);
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {}", error);
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
