use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

mod commands;
mod report;

#[derive(Parser)]
#[command(name = "quadsemi", version, about = "Irreducibility tools for semigroups generated by x^2 + c")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

/// A comma-separated list of map constants.
#[derive(Args)]
struct Generators {
    /// Constants c of the maps x^2 + c, comma-separated.
    #[arg(short = 'c', long = "c", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    c: Vec<BigInt>,
}

#[derive(Subcommand)]
enum Command {
    /// Adjusted critical orbit and stability verdict of one word.
    Orbit {
        #[command(flatten)]
        gens: Generators,
        /// 1-based generator indices, outermost first.
        #[arg(short = 'w', long, value_delimiter = ',', required = true)]
        word: Vec<usize>,
    },
    /// Stability verdicts for every word up to a length.
    ScanWords {
        #[command(flatten)]
        gens: Generators,
        #[arg(short = 'L', long = "length")]
        length: usize,
        #[arg(long, default_value_t = quadsemi::dynamics::DEFAULT_SCAN_BUDGET)]
        budget: u128,
    },
    /// Periodic and preperiodic points of x^2 + c.
    Portrait {
        #[arg(short = 'c', long = "c", allow_hyphen_values = true)]
        c: BigInt,
    },
    /// Classify one pair of maps.
    Exceptional {
        #[arg(long = "c1", allow_hyphen_values = true)]
        c1: BigInt,
        #[arg(long = "c2", allow_hyphen_values = true)]
        c2: BigInt,
    },
    /// All exceptional pairs with entries in a range.
    ScanPairs {
        #[arg(long, allow_hyphen_values = true)]
        min: i64,
        #[arg(long, allow_hyphen_values = true)]
        max: i64,
    },
    /// A prefix that makes every extension irreducible.
    ConstructPrefix {
        #[command(flatten)]
        gens: Generators,
    },
    /// Compare bounded solutions of registry systems with their claimed lists.
    VerifyLemma {
        /// Registry id such as case1.1.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        id: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = quadsemi::diophantine::DEFAULT_BOUND)]
        bound: u32,
    },
    /// Residue-class obstruction for a mod-tagged registry entry.
    Obstruction {
        id: String,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Integer points on y^2 = a4 q^4 + a2 q^2 + a0.
    CurvePoints {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, required = true)]
        coeffs: Vec<i64>,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Minimum height, integral points on phi^2 and the iterate bound.
    Heights {
        #[arg(short = 'c', long = "c", allow_hyphen_values = true)]
        c: BigInt,
        #[arg(long, default_value_t = quadsemi::heights::DEFAULT_ITERATIONS)]
        iterations: u32,
        /// Search box half-width; raised to |c| + 1 if smaller.
        #[arg(long = "box", default_value_t = BigInt::from(0))]
        search_box: BigInt,
    },
    /// Monte Carlo estimate of the square-free fraction at a fixed depth.
    McStability {
        #[command(flatten)]
        gens: Generators,
        #[arg(short = 'L', long = "length")]
        length: usize,
        #[arg(short = 'T', long = "trials")]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Letter probabilities, comma-separated; uniform if omitted.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Compare certificates with exact factorisation on short words.
    CrossValidate {
        #[command(flatten)]
        gens: Generators,
        #[arg(short = 'L', long = "length")]
        length: usize,
        #[arg(long, default_value_t = quadsemi::oracle::DEFAULT_ORACLE_DEGREE_CAP)]
        cap: usize,
    },
}

/// `-c1`/`-c2` read naturally but clap would split them as `-c 1`.
fn normalize_args(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| match a.as_str() {
        "-c1" => "--c1".to_string(),
        "-c2" => "--c2".to_string(),
        _ => a,
    })
    .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize_args(std::env::args())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match commands::run(cli.command, cli.verbose) {
        Ok(report) => {
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            // a closed pipe (e.g. `| head`) is not an error worth a panic
            let mut out = std::io::stdout().lock();
            if cli.json {
                let text = serde_json::to_string_pretty(&report.to_json(elapsed_ms)).expect("serializable");
                let _ = writeln!(out, "{text}");
            } else {
                for line in &report.text {
                    let _ = writeln!(out, "{line}");
                }
            }
            if cli.verbose {
                eprintln!("elapsed: {elapsed_ms:.1} ms");
            }
            ExitCode::from(report.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
