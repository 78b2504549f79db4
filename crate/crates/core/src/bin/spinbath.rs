// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: single runs, seed sweeps, ground states.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinbath::output::{emit_csv, format_float, SUMMARY_HEADER};
use spinbath::runner::{ground_reference, run_scenario, run_sweep_outputs};
use spinbath::{preset, Error, Result, ScenarioConfig, PRESETS};

#[derive(Parser)]
#[command(
    name = "spinbath",
    version,
    about = "Decoherence of a central spin pair in a quantum spin bath"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its CSV files.
    Run(Common),
    /// Run one scenario per seed, in parallel.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Print the ground-state energy and central correlation.
    Ground(Common),
    /// List the preset registry.
    Presets,
}

#[derive(Args)]
struct Common {
    /// Config file applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<ScenarioConfig> {
        let mut config = match &self.preset {
            Some(name) => preset(name)?,
            None => ScenarioConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            config.apply_text(&text)?;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output_path = out.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

fn summary_row(summary: &spinbath::RunSummary) -> String {
    [
        summary.e_psi,
        summary.e0,
        summary.min_corr,
        summary.t_at_min,
        summary.corr0,
        summary.max_concurrence,
    ]
    .iter()
    .map(|&v| format_float(v))
    .collect::<Vec<_>>()
    .join(",")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn run(common: &Common) -> Result<()> {
    let config = common.resolve()?;
    let output = run_scenario(&config)?;
    emit_csv(
        &output.records,
        &output.summary,
        &config,
        &config.output_path,
    )?;
    println!("{SUMMARY_HEADER}\n{}", summary_row(&output.summary));
    Ok(())
}

fn sweep(common: &Common, seeds: &[u64], workers: usize) -> Result<()> {
    let base = common.resolve()?;
    let results = run_sweep_outputs(&base, seeds, workers)?;
    let mut table = format!("seed,{SUMMARY_HEADER}\n");
    let mut first_failure: Option<Error> = None;
    for (&seed, result) in seeds.iter().zip(results) {
        let written = result.and_then(|output| {
            let dir = base.output_path.join(format!("seed_{seed}"));
            let config = ScenarioConfig {
                seed,
                output_path: dir.clone(),
                ..base.clone()
            };
            emit_csv(&output.records, &output.summary, &config, &dir)?;
            Ok(output.summary)
        });
        match written {
            Ok(summary) => table.push_str(&format!("{seed},{}\n", summary_row(&summary))),
            Err(e) => {
                eprintln!("seed {seed}: {e}");
                first_failure.get_or_insert(e);
            }
        }
    }
    std::fs::create_dir_all(&base.output_path).map_err(|e| Error::Io {
        path: base.output_path.clone(),
        source: e,
    })?;
    write_text(&base.output_path.join("sweep.csv"), &table)?;
    print!("{table}");
    first_failure.map_or(Ok(()), Err)
}

fn ground(common: &Common) -> Result<()> {
    let config = common.resolve()?;
    let (e0, corr0) = ground_reference(&config)?;
    println!("e0 = {}\ncorr0 = {}", format_float(e0), format_float(corr0));
    Ok(())
}

fn list_presets() {
    let mut out = std::io::stdout().lock();
    for p in PRESETS {
        if writeln!(out, "{:<10} {}", p.name, p.description).is_err() {
            return;
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(common) => run(common),
        Command::Sweep {
            common,
            seeds,
            workers,
        } => sweep(common, seeds, *workers),
        Command::Ground(common) => ground(common),
        Command::Presets => {
            list_presets();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
