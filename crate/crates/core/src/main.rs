//! Command-line front end: loads a configuration, applies flag overrides,
//! runs one experiment, and reports. Exit codes: 0 clean, 1 when a checked
//! case fails, 2 for configuration or environment problems.

use std::path::PathBuf;

use clap::Parser;

use principal_lab::config::{ExperimentConfig, ExperimentKind};
use principal_lab::report::RunReport;
use principal_lab::{experiments, Error, Result};

#[derive(Parser)]
#[command(
    name = "principal-lab",
    version,
    about = "Trace-identity experiments on nearly normal operator truncations"
)]
struct Cli {
    /// Experiment: krein, doi, lemma1, moments, formula, reconstruct,
    /// ssf-slice, or positivity
    experiment: String,

    /// JSON configuration file; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,

    /// Model family: shift, elliptic, or qweighted
    #[arg(long)]
    model: Option<String>,

    /// Ambient truncation dimension
    #[arg(long = "M", value_name = "DIM")]
    ambient_dim: Option<usize>,

    /// Corner block size
    #[arg(long = "N", value_name = "DIM")]
    corner_dim: Option<usize>,

    /// Reconstruction basis degree
    #[arg(long)]
    degree: Option<usize>,

    /// Seed for every randomized case in the run
    #[arg(long)]
    seed: Option<u64>,

    /// Quadrature and reconstruction grid size per axis
    #[arg(long)]
    grid: Option<usize>,

    /// Directory for summary.json and the CSV artifacts
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated ambient dimensions for a sweep run
    #[arg(long, value_delimiter = ',', value_name = "M1,M2,...")]
    sweep: Option<Vec<usize>>,
}

fn parse_experiment(name: &str) -> Result<ExperimentKind> {
    Ok(match name {
        "krein" => ExperimentKind::Krein,
        "doi" => ExperimentKind::Doi,
        "lemma1" => ExperimentKind::Lemma1,
        "moments" => ExperimentKind::Moments,
        "formula" => ExperimentKind::Formula,
        "reconstruct" => ExperimentKind::Reconstruct,
        "ssf-slice" => ExperimentKind::SsfSlice,
        "positivity" => ExperimentKind::Positivity,
        other => {
            return Err(Error::config(format!(
                "unknown experiment '{other}' (expected krein, doi, lemma1, moments, formula, reconstruct, ssf-slice, or positivity)"
            )))
        }
    })
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("PRINCIPAL_LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config(format!("PRINCIPAL_LAB_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::config(format!("cannot size the worker pool: {e}")))
}

fn run_cli(cli: Cli) -> Result<RunReport> {
    let kind = parse_experiment(&cli.experiment)?;
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(stated) = config.experiment {
        if stated != kind {
            return Err(Error::config(format!(
                "configuration file names experiment '{}' but the command line asked for '{}'",
                stated.name(),
                kind.name()
            )));
        }
    }
    config.experiment = Some(kind);
    if let Some(model) = cli.model {
        config.model = model;
    }
    if let Some(m) = cli.ambient_dim {
        config.ambient_dim = m;
    }
    if let Some(n) = cli.corner_dim {
        config.corner_dim = n;
    }
    if let Some(degree) = cli.degree {
        config.degree = degree;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(grid) = cli.grid {
        config.grid_size = grid;
    }
    if let Some(out) = cli.out {
        config.output_dir = Some(out);
    }
    if let Some(sweep) = cli.sweep {
        config.sweep = sweep;
    }

    let report = experiments::run(&config)?;
    if let Some(dir) = &config.output_dir {
        report.write_to(dir)?;
    }
    Ok(report)
}

fn main() {
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    match run_cli(Cli::parse()) {
        Ok(report) => {
            print!("{}", report.render_text());
            std::process::exit(if report.failed() { 1 } else { 0 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
