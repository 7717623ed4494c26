//! `twophoton-bench`: run bench scenarios from a config file.
//!
//! ```text
//! twophoton-bench run hom_even_dip sameport_hv --config bench.conf --out results
//! twophoton-bench validate --config bench.conf
//! ```
//!
//! Failures print one JSON object on stderr and exit nonzero.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use twophoton::bench::{digest, parse_config, run_scenario, write_outputs, BenchConfig, Scenario};

/// Overrides the configured output directory; `--out` still wins.
const OUT_ENV: &str = "TWOPHOTON_OUT";

#[derive(Parser)]
#[command(
    name = "twophoton-bench",
    version,
    about = "Two-photon interference bench scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and write CSV curves plus summary.txt.
    Run {
        /// Scenario names, or `all`.
        #[arg(required = true)]
        scenarios: Vec<String>,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write Poisson-sampled counts.
        #[arg(long)]
        noise: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse a config and print its digest.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    scenario: Option<String>,
}

impl Failure {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            scenario: None,
        }
    }

    fn emit(&self) {
        let mut obj = json!({ "error": self.kind, "message": self.message });
        if let Some(s) = &self.scenario {
            obj["scenario"] = json!(s);
        }
        eprintln!("{obj}");
    }
}

fn load(path: &Path) -> Result<BenchConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure::new("io", format!("{e:#}")))?;
    parse_config(&text).map_err(|e| Failure::new("config", format!("{}: {e}", path.display())))
}

fn resolve_scenarios(names: &[String]) -> Result<Vec<Scenario>, Failure> {
    let mut out: Vec<Scenario> = Vec::new();
    for name in names {
        if name == "all" {
            for s in Scenario::ALL {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            continue;
        }
        let s: Scenario = name
            .parse()
            .map_err(|e: twophoton::Error| Failure::new("usage", e.to_string()))?;
        if out.contains(&s) {
            return Err(Failure::new(
                "usage",
                format!("scenario `{name}` requested twice"),
            ));
        }
        out.push(s);
    }
    Ok(out)
}

fn run(
    names: &[String],
    config_path: &Path,
    out: Option<PathBuf>,
    noise: bool,
    seed: Option<u64>,
) -> Result<(), Vec<Failure>> {
    let scenarios = resolve_scenarios(names).map_err(|f| vec![f])?;
    let mut config = load(config_path).map_err(|f| vec![f])?;
    config.output.noise |= noise;
    if let Some(seed) = seed {
        config.output.seed = seed;
    }
    let directory = out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(&config.output.directory));

    let results: Vec<_> = scenarios
        .par_iter()
        .map(|&s| {
            log::info!("running {s}");
            run_scenario(&config, s).map_err(|e| Failure {
                kind: "scenario",
                message: e.to_string(),
                scenario: Some(s.name().to_string()),
            })
        })
        .collect();

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(report) => reports.push(report),
            Err(f) => failures.push(f),
        }
    }
    if !reports.is_empty() {
        match write_outputs(&reports, &directory) {
            Ok(paths) => {
                for p in paths {
                    println!("{}", p.display());
                }
            }
            Err(e) => failures.push(Failure::new("io", e.to_string())),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().to_string();
            Failure::new("usage", first.trim_start_matches("error: ")).emit();
            return ExitCode::from(2);
        }
    };

    let outcome = match cli.command {
        Command::Run {
            scenarios,
            config,
            out,
            noise,
            seed,
        } => run(&scenarios, &config, out, noise, seed),
        Command::Validate { config } => load(&config)
            .map(|c| println!("ok digest={}", digest(&c)))
            .map_err(|f| vec![f]),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failures) => {
            for f in &failures {
                f.emit();
            }
            ExitCode::FAILURE
        }
    }
}
