use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gwloc::config::{CaseFile, ConfigError, RunConfig};
use gwloc::run::{self, Failure, Outcome, EXIT_OK};
use gwloc_core::identities::IdentityId;
use serde_json::Value;

/// Exact genus-0 Gromov-Witten invariants by torus localization.
#[derive(Parser)]
#[command(name = "gwloc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one (possibly twisted) invariant.
    Compute {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check an identity on a case file, or on every bundled case.
    Verify {
        #[arg(long, value_parser = parse_identity)]
        identity: Option<IdentityId>,
        #[arg(long, conflicts_with = "all")]
        case: Option<PathBuf>,
        #[arg(long)]
        all: bool,
    },
    /// Print an oracle table.
    Oracle {
        name: String,
        #[arg(long)]
        d_max: Option<u32>,
    },
    /// Write the fixed-locus graphs of a configuration as JSON lines.
    DumpGraphs {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    IdentityId::parse(s).ok_or_else(|| {
        let names: Vec<&str> = IdentityId::ALL.iter().map(|i| i.name()).collect();
        format!("unknown identity {s:?}; expected one of {}", names.join(", "))
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|err| ConfigError::Io { path: path.to_path_buf(), err }.into())
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn execute(cmd: Command) -> Result<i32, Failure> {
    let outcome: Outcome = match cmd {
        Command::Compute { config } => run::compute(&RunConfig::from_json(&read(&config)?)?)?,
        Command::Verify { identity, case, all } => {
            let case = case.map(|p| read(&p).and_then(|t| Ok(CaseFile::from_json(&t)?))).transpose()?;
            run::verify(identity, case.as_ref(), all)?
        }
        Command::Oracle { name, d_max } => run::oracle(&name, d_max)?,
        Command::DumpGraphs { config } => {
            let graphs = run::dump_graphs(&RunConfig::from_json(&read(&config)?)?)?;
            let mut out = std::io::stdout().lock();
            for g in graphs {
                // A closed pipe (e.g. `| head`) just ends the listing.
                if writeln!(out, "{g}").is_err() {
                    break;
                }
            }
            return Ok(EXIT_OK);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    print(&outcome.json);
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli.command) {
        Ok(code) => code,
        Err(f) => {
            if let Failure::Usage(msg) = &f {
                eprintln!("error: {msg}");
            } else {
                print(&f.to_json());
            }
            f.code()
        }
    };
    ExitCode::from(code as u8)
}
