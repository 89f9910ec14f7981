use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pulse_tangle::sweep::{figure_preset, run_sweep, write_csv, write_outputs, FigurePreset, ResultRow, SweepConfig};
use pulse_tangle::validate::run_checks;
use pulse_tangle::{Error, InitialState, Method};

const EXIT_FAILED_TRIPLE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(version, about = "Entanglement between a two-level atom and a driving laser pulse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write a CSV of final tangles.
    Sweep {
        /// Flat JSON configuration; every key is optional.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        area_bar: Option<f64>,
        /// Number of coarse-grained modes N.
        #[arg(long)]
        modes: Option<usize>,
        /// Comma-separated subset of full,lumped,closed,analytic,bound.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        /// Comma-separated subset of e,g,e+g,e-g,e+ig,e-ig.
        #[arg(long, value_delimiter = ',')]
        states: Option<Vec<InitialState>>,
        /// Comma-separated emission probabilities Γτ.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma_tau: Option<Vec<f64>>,
        #[arg(long)]
        substeps: Option<usize>,
        /// Output CSV; a `.params.txt` sidecar is written next to it.
        /// Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset sweep (fig2: full and closed models; fig4: trajectory bound).
    Figure {
        preset: FigurePreset,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        area_bar: Option<f64>,
        #[arg(long)]
        modes: Option<usize>,
    },
    /// Run the quick invariant suite.
    Validate,
}

fn report(rows: &[ResultRow]) -> ExitCode {
    let failed = rows.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        eprintln!("{failed} of {} triples failed", rows.len());
        ExitCode::from(EXIT_FAILED_TRIPLE)
    } else {
        ExitCode::SUCCESS
    }
}

fn config_error(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Sweep { config, area_bar, modes, methods, states, gamma_tau, substeps, out } => {
            let mut cfg = match config {
                Some(path) => match SweepConfig::from_file(&path) {
                    Ok(c) => c,
                    Err(e) => return config_error(e),
                },
                None => SweepConfig::default(),
            };
            cfg.area_bar = area_bar.unwrap_or(cfg.area_bar);
            cfg.n_modes = modes.unwrap_or(cfg.n_modes);
            cfg.methods = methods.unwrap_or(cfg.methods);
            cfg.initial_states = states.unwrap_or(cfg.initial_states);
            cfg.gamma_tau_grid = gamma_tau.or(cfg.gamma_tau_grid);
            cfg.substeps = substeps.unwrap_or(cfg.substeps);
            cfg.output_path = out.or(cfg.output_path);

            let rows = match run_sweep(&cfg) {
                Ok(rows) => rows,
                Err(e) => return config_error(e),
            };
            let written = match &cfg.output_path {
                Some(path) => write_outputs(&cfg, &rows, path),
                None => write_csv(&rows, io::stdout().lock()),
            };
            if let Err(e) = written {
                return config_error(e);
            }
            report(&rows)
        }
        Command::Figure { preset, out, area_bar, modes } => {
            let mut base = SweepConfig::default();
            base.area_bar = area_bar.unwrap_or(base.area_bar);
            base.n_modes = modes.unwrap_or(base.n_modes);
            match figure_preset(preset, &base, &out) {
                Ok(fig) => {
                    eprintln!("wrote {} and {}", fig.csv_path.display(), fig.sidecar_path.display());
                    report(&fig.rows)
                }
                Err(e) => config_error(e),
            }
        }
        Command::Validate => {
            let checks = run_checks();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED_TRIPLE)
            }
        }
    }
}
