// Copyright 2026 The zenolab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use clap::{Parser, Subcommand};

use zenolab::error::ZenoError;
use zenolab::experiment::{
    cmd_reproduce, cmd_scan, cmd_solve_coeffs, parse_config, run_bounds_suite, ReproduceReport,
};

#[derive(Parser)]
#[command(name = "zenolab", about = "Numerical laboratory for higher-order quantum Zeno sequences")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// CSV output path (default: stdout).
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a declarative parameter scan from a config file.
    Scan {
        #[arg(long)]
        config: String,
    },
    /// Run a pinned reproduction recipe.
    Reproduce {
        /// One of: fig1, randomized_leftpanel, randomized_rightpanel,
        /// control_field, bounds_suite.
        name: String,
    },
    /// Solve the compact-sequence coefficient equations.
    SolveCoeffs { order: usize },
    /// Run the random-system bound-domination suite.
    VerifyBounds {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn write_csv(csv: &str, output: Option<&str>) -> Result<(), ZenoError> {
    match output {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| ZenoError::Io(format!("cannot write '{path}': {e}"))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn emit_report(report: &ReproduceReport, output: Option<&str>) -> Result<bool, ZenoError> {
    write_csv(&report.csv, output)?;
    for line in &report.verdicts {
        println!("{line}");
    }
    Ok(report.pass)
}

fn run(cli: Cli) -> Result<bool, ZenoError> {
    match cli.command {
        Command::Scan { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| ZenoError::Io(format!("cannot read '{config}': {e}")))?;
            let mut cfg = parse_config(&text)?;
            if cli.output.is_some() {
                cfg.output = cli.output.clone();
            }
            let csv = cmd_scan(&cfg)?;
            write_csv(&csv, cfg.output.as_deref())?;
            Ok(true)
        }
        Command::Reproduce { name } => {
            let report = cmd_reproduce(&name)?;
            emit_report(&report, cli.output.as_deref())
        }
        Command::SolveCoeffs { order } => {
            print!("{}", cmd_solve_coeffs(order)?);
            Ok(true)
        }
        Command::VerifyBounds { trials, seed } => {
            let report = run_bounds_suite(trials, seed)?;
            emit_report(&report, cli.output.as_deref())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
