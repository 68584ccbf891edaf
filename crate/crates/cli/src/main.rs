use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gre_cli::{run_suite, Format, Suite, SuiteConfig};

/// Run a verification suite and write its report.
#[derive(Debug, Parser)]
#[command(name = "gre", version)]
struct Args {
    suite: Suite,
    #[arg(long, default_value_t = 1_000_000)]
    sieve_limit: u64,
    #[arg(long, default_value_t = 1.5)]
    eta: f64,
    #[arg(long, default_value_t = 5)]
    p0: u64,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() -> ExitCode {
    // `gre verify <suite>` and `gre <suite>` are the same command
    let argv: Vec<String> = std::env::args()
        .enumerate()
        .filter(|(i, a)| !(*i == 1 && a == "verify"))
        .map(|(_, a)| a)
        .collect();
    let args = Args::parse_from(argv);
    let cfg = SuiteConfig {
        suite: args.suite,
        sieve_limit: args.sieve_limit,
        eta: args.eta,
        p0: args.p0,
        format: args.format,
        seed: args.seed,
    };
    let outcome = match run_suite(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("gre {}: {e}", cfg.suite.name());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = outcome.render(&cfg);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("gre: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("gre {}: verification failed", cfg.suite.name());
        ExitCode::from(1)
    }
}
