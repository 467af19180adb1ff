mod config;
mod error;
mod output;
mod run;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use config::Scenario;
use error::CliError;

/// Two qubits in coupled resonators: concurrence series and
/// entanglement-reciprocation runs from scenario files.
#[derive(Debug, Parser)]
#[command(name = "hopjc", version)]
struct Args {
    /// TOML file with one or more [[scenario]] tables.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Run a bundled scenario by name (repeatable); see --list.
    #[arg(long = "scenario", value_name = "NAME")]
    scenarios: Vec<String>,

    /// Output directory for CSV and JSON files.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Worker threads (0 = one per core).
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,

    /// Allow scenarios with truncation M >= 100.
    #[arg(long)]
    allow_expensive: bool,

    /// Print the bundled scenarios and exit.
    #[arg(long)]
    list: bool,
}

fn collect(args: &Args) -> Result<Vec<Scenario>, CliError> {
    let mut all = Vec::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        all.extend(config::parse(&text)?);
    }
    for name in &args.scenarios {
        all.push(scenarios::load(name)?);
    }
    if all.is_empty() {
        return Err(CliError::Config("no scenarios to run".into()));
    }
    let mut names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Config(format!("scenario '{}' requested twice", w[0])));
    }
    for s in &all {
        if run::is_expensive(s)? && !args.allow_expensive {
            return Err(CliError::Config(format!(
                "scenario '{}' needs truncation M={} and is expensive; pass --allow-expensive",
                s.name,
                run::planned_truncation(s)?
            )));
        }
    }
    Ok(all)
}

fn execute(args: &Args) -> Result<(), CliError> {
    let scenarios = collect(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let results: Vec<_> = pool.install(|| scenarios.par_iter().map(run::run).collect());

    let mut first_error = None;
    for (scenario, result) in scenarios.iter().zip(results) {
        match result {
            Ok(out) => {
                if out.metadata.max_norm_error > 1e-9 {
                    log::warn!("scenario '{}': norm error {:.2e}", scenario.name, out.metadata.max_norm_error);
                }
                let (csv, json) = output::write(&args.out, &out)?;
                log::info!(
                    "{}: {} rows in {:.2}s -> {}, {}",
                    scenario.name,
                    out.rows.len(),
                    out.metadata.wall_time_s,
                    csv.display(),
                    json.display()
                );
            }
            Err(e) => {
                log::error!("{e}");
                first_error.get_or_insert(e);
            }
        }
    }
    first_error.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    if args.list {
        for line in scenarios::listing() {
            println!("{line}");
        }
        return ExitCode::SUCCESS;
    }
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
