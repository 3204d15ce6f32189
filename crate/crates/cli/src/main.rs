use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use idxcheck::{ExitClass, Options, render_json, typecheck_path};

/// Typechecker for .idx programs: higher-rank polymorphism, existentials,
/// and length-indexed vectors with coverage checking.
#[derive(Parser)]
#[command(name = "idxcheck", version, arg_required_else_help = true)]
struct Cli {
    /// Source files to check (each gets an independent session).
    #[arg(required = true)]
    files: Vec<PathBuf>,

    /// Print the final algorithmic context after checking.
    #[arg(long)]
    dump_context: bool,

    /// Print one line per applied typing rule.
    #[arg(long)]
    trace: bool,

    /// Re-validate every accepted definition against the declarative oracle.
    #[arg(long)]
    oracle_check: bool,

    /// Maximum size of monotypes the oracle may guess.
    #[arg(long, default_value_t = 3)]
    guess_size: usize,

    /// Maximum derivation depth for the oracle.
    #[arg(long, default_value_t = 32)]
    depth: usize,

    /// Emit a machine-readable JSON report on stdout.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        dump_context: cli.dump_context,
        trace: cli.trace,
        oracle_check: cli.oracle_check,
        guess_size: cli.guess_size,
        depth: cli.depth,
        json: cli.json,
    };

    let mut exit = ExitClass::Ok;
    let mut reports = Vec::new();
    for file in &cli.files {
        let report = typecheck_path(file, &opts);
        exit = exit.max(report.exit);
        if !opts.json {
            print!("{}", report.stdout);
        }
        eprint!("{}", report.stderr);
        reports.push(report);
    }
    if opts.json {
        println!("{}", render_json(&reports));
    }
    ExitCode::from(exit as u8)
}
