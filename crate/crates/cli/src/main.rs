use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Report;

/// Hamiltonian simulation toolkit: classify, close, isolate, synthesize,
/// verify and sweep.
#[derive(Parser, Debug)]
#[command(name = "paulilie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    output: OutputArgs,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Print the machine-readable report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,

    /// Also write the machine-readable report to this file.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide dynamic universality. Exit code 0 universal, 2 odd, 3 not entangling.
    Classify { file: PathBuf },

    /// Commutator closure with local unitaries.
    Closure {
        file: PathBuf,
        /// Leave out the single-qubit strings.
        #[arg(long)]
        no_locals: bool,
        /// List every element, one string per line.
        #[arg(long)]
        dump: bool,
    },

    /// Isolate one term by conjugate-and-add.
    Isolate {
        file: PathBuf,
        /// Term index in canonical order, or its Pauli string.
        #[arg(long)]
        term: String,
        #[arg(long, value_enum, default_value_t = Method::Det)]
        method: Method,
        /// Number of random layers.
        #[arg(long, default_value_t = 8)]
        m: usize,
        /// Generated and reported when absent.
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Derive a target string from the Hamiltonian.
    Synthesize {
        file: PathBuf,
        #[arg(long)]
        target: String,
        /// Target acts on the first n−1 qubits; the last qubit is an ancilla in |0>.
        #[arg(long)]
        encoded: bool,
        /// Write the derivation tree as JSON.
        #[arg(long)]
        dump_tree: Option<PathBuf>,
    },

    /// Compile derivations and compare with exact evolution. Emits CSV.
    Verify {
        #[arg(long = "derivation", required = true)]
        derivations: Vec<PathBuf>,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        delta: f64,
        /// Commutator cycle width; defaults to --delta.
        #[arg(long)]
        cycle_delta: Option<f64>,
        /// Number of halvings of both widths.
        #[arg(long, default_value_t = 1)]
        ladder: usize,
        #[command(flatten)]
        threads: ThreadArgs,
    },

    /// Randomized isolation failure rates over a Hamiltonian family. Emits CSV.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(short, long = "n", required = true, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(short, long = "m", required = true, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Trial `i` uses seed + i. Generated and reported when absent.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        threads: ThreadArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ThreadArgs {
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, env = "PAULILIE_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Det,
    Rand,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// X_i X_{i+1} and X_i X_{i+1} X_{i+2}.
    Chain,
    /// X on every subset of at least two qubits.
    Subsets,
}

fn init_threads(args: ThreadArgs) {
    if args.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build_global() {
            log::warn!("could not size thread pool: {e}");
        }
    }
}

fn run(cli: &Cli) -> Result<Report, commands::Error> {
    match &cli.command {
        Command::Classify { file } => commands::classify(file),
        Command::Closure { file, no_locals, dump } => commands::closure(file, !no_locals, *dump),
        Command::Isolate { file, term, method, m, seed } => {
            commands::isolate(file, term, *method == Method::Rand, *m, *seed)
        }
        Command::Synthesize { file, target, encoded, dump_tree } => {
            commands::synthesize(file, target, *encoded, dump_tree.as_deref())
        }
        Command::Verify { derivations, time, delta, cycle_delta, ladder, threads } => {
            init_threads(*threads);
            commands::verify(derivations, *time, *delta, cycle_delta.unwrap_or(*delta), *ladder)
        }
        Command::Sweep { family, n, m, trials, seed, threads } => {
            init_threads(*threads);
            commands::sweep(*family == Family::Subsets, n, m, *trials, *seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(path) = &cli.output.output {
        if let Err(e) = std::fs::write(path, &report.machine) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if cli.output.json || report.text.is_empty() {
        print!("{}", report.machine);
    } else {
        print!("{}", report.text);
    }
    ExitCode::from(report.exit)
}
