use clap::Parser;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ppvkit::cli::document::parse_prolongation;
use ppvkit::cli::{run, Command, Options};

/// Exact parameterized Picard-Vessiot computations over Q(t)(x).
#[derive(Parser)]
#[command(name = "ppvkit", version)]
struct Args {
    /// One of: prolong, pv, ppv, constant-quotient, rational-integral, relations.
    command: String,
    /// TOML input document.
    input: PathBuf,
    /// Prolongation bound; for `prolong` the level to compute.
    #[arg(long)]
    max_s: Option<usize>,
    /// `jet` or `iterated`.
    #[arg(long)]
    prolongation: Option<String>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(command) = Command::parse(&args.command) else {
        eprintln!("unknown command '{}'", args.command);
        return ExitCode::from(1);
    };
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input.display());
            return ExitCode::from(1);
        }
    };
    let prolongation = match args.prolongation.as_deref().map(parse_prolongation).transpose() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let opts = Options {
        max_s: args.max_s,
        prolongation,
    };
    match run(command, &text, &opts) {
        Ok(report) => {
            let _ = writeln!(std::io::stdout(), "{}", report.text);
            if let Some(path) = &args.json {
                let body = serde_json::to_string_pretty(&report.json).expect("report serializes");
                if let Err(e) = std::fs::write(path, body + "\n") {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
