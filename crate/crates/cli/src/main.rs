use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use adic_cli::report::Bounds;
use adic_cli::{runner, selftest};

#[derive(Parser)]
#[command(name = "adic", version, about = "Adic flatness, Koszul and Tor computations from scripts")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Highest truncation level A_k = A/a^(k+1) examined.
    #[arg(long, default_value_t = 4)]
    kmax: u32,
    /// Highest homological index examined.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Exit with status 1 if any report fails.
    #[arg(long)]
    strict: bool,
    /// Print a markdown summary table to standard error.
    #[arg(long)]
    summary: bool,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a .adic script, writing one JSON report per command.
    Run {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized Groebner soundness checks.
    Selftest {
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print the JSON schema of reports.
    Schema,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let (reports, common) = match cli.command {
        Cmd::Schema => {
            print!("{}", adic_cli::report::SCHEMA);
            return Ok(ExitCode::SUCCESS);
        }
        Cmd::Selftest { cases, common } => (vec![selftest::groebner_selftest(common.seed, cases)], common),
        Cmd::Run { file, common } => {
            let src = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let bounds = Bounds { kmax: common.kmax, depth: common.depth };
            let reports = adic_cli::run_script(&src, bounds).with_context(|| file.display().to_string())?;
            (reports, common)
        }
    };
    for r in &reports {
        println!("{}", r.to_json_line());
    }
    if common.summary {
        eprint!("{}", runner::summary_table(&reports));
    }
    Ok(if common.strict && runner::any_fail(&reports) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
