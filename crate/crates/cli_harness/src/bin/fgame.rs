use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cli_harness::experiments::{describe_all, run};
use cli_harness::output::write_atomic;
use cli_harness::{verify, ExperimentSpec, RunError, SpecError};

#[derive(Parser)]
#[command(name = "fgame", version, about = "Run experiments and acceptance checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON spec file or by registered name.
    Run {
        spec: String,
        /// Output directory (default: $FGAME_OUT_DIR or ./fgame_out).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// key=value override; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run an acceptance suite: rates, equivalence, momentum,
    /// projection_free, saddle or all.
    Verify {
        suite: String,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List experiments and their parameters.
    List,
}

const USAGE: u8 = 2;

fn load_spec(arg: &str) -> Result<ExperimentSpec, SpecError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io(format!("{arg}: {e}")))?;
        ExperimentSpec::from_json(&text)
    } else {
        cli_harness::experiments::find(arg)?;
        Ok(ExperimentSpec::new(arg))
    }
}

fn cmd_run(spec: &str, out: Option<PathBuf>, seed: Option<u64>, set: &[String]) -> ExitCode {
    let spec = match load_spec(spec).and_then(|s| s.with_overrides(set)) {
        Ok(mut s) => {
            if let Some(seed) = seed {
                s.seed = seed;
            }
            s
        }
        Err(e) => {
            eprintln!("fgame: {e}");
            return ExitCode::from(USAGE);
        }
    };
    let out = out
        .or_else(|| std::env::var_os("FGAME_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("fgame_out"));
    match run(&spec, &out) {
        Ok(res) => {
            for f in res.files.iter().chain([&res.sidecar]) {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Spec(e)) => {
            eprintln!("fgame: {e}");
            ExitCode::from(USAGE)
        }
        Err(e) => {
            eprintln!("fgame: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_verify(suite: &str, json: Option<PathBuf>) -> ExitCode {
    let report = match verify(suite) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fgame: {e}");
            return ExitCode::from(USAGE);
        }
    };
    print!("{}", report.to_table());
    if let Some(path) = json {
        if let Err(e) = write_atomic(&path, report.to_json().as_bytes()) {
            eprintln!("fgame: cannot write {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { spec, out, seed, set } => cmd_run(&spec, out, seed, &set),
        Command::Verify { suite, json } => cmd_verify(&suite, json),
        Command::List => {
            print!("{}", describe_all());
            ExitCode::SUCCESS
        }
    }
}
