//! Parameter sweeps over (method, initial state, Γτ) and their CSV output.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{closed_tangle_analytic, InitialState};
use crate::params::{Method, SimParams, DEFAULT_SUBSTEPS, MIN_AREA_BAR};
use crate::symmetric::{run_closed_evolution, run_full_evolution, run_lumped_evolution};
use crate::trajectory::tangle_upper_bound;

pub const DEFAULT_AREA_BAR: f64 = 1000.0;
pub const DEFAULT_N_MODES: usize = 1000;
pub const DEFAULT_GRID_POINTS: usize = 30;
pub const GRID_START: f64 = 1e-4;

/// Sweep configuration. Read from flat JSON; every key is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub area_bar: f64,
    pub n_modes: usize,
    /// Emission probabilities Γτ; `None` selects [`default_grid`].
    pub gamma_tau_grid: Option<Vec<f64>>,
    pub initial_states: Vec<InitialState>,
    pub methods: Vec<Method>,
    pub substeps: usize,
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            area_bar: DEFAULT_AREA_BAR,
            n_modes: DEFAULT_N_MODES,
            gamma_tau_grid: None,
            initial_states: InitialState::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            substeps: DEFAULT_SUBSTEPS,
            output_path: None,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The Γτ values to run, ascending.
    pub fn grid(&self) -> Vec<f64> {
        let mut grid = match &self.gamma_tau_grid {
            Some(g) => g.clone(),
            None => default_grid(self.area_bar, DEFAULT_GRID_POINTS),
        };
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area_bar.is_finite() && self.area_bar >= MIN_AREA_BAR) {
            return Err(Error::Config(format!("area_bar must be at least {MIN_AREA_BAR}, got {}", self.area_bar)));
        }
        if self.n_modes == 0 {
            return Err(Error::Config("n_modes must be at least 1".into()));
        }
        if self.substeps == 0 {
            return Err(Error::Config("substeps must be at least 1".into()));
        }
        let ceiling = self.area_bar.sqrt();
        for &gt in self.gamma_tau_grid.iter().flatten() {
            if !(gt.is_finite() && gt > 0.0) {
                return Err(Error::Config(format!("gamma_tau {gt} must be positive and finite")));
            }
            if gt > ceiling * (1.0 + 1e-12) {
                return Err(Error::Config(format!("gamma_tau {gt} exceeds sqrt(area_bar) = {ceiling}")));
            }
        }
        Ok(())
    }

    fn params(&self, state: InitialState, gamma_tau: f64) -> Result<SimParams> {
        SimParams::new(self.area_bar, self.n_modes, gamma_tau, state.atom_state())?.with_substeps(self.substeps)
    }
}

/// `points` log-spaced values from 10⁻⁴ to √Ā inclusive.
pub fn default_grid(area_bar: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = (GRID_START.ln(), area_bar.sqrt().ln());
    match points {
        0 => Vec::new(),
        1 => vec![GRID_START],
        _ => {
            let mut grid: Vec<f64> =
                (0..points).map(|k| (lo + (hi - lo) * k as f64 / (points - 1) as f64).exp()).collect();
            grid[0] = GRID_START;
            grid[points - 1] = area_bar.sqrt();
            grid
        }
    }
}

/// One (method, state, Γτ) result. Failed triples carry NaN and a reason.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub method: Method,
    pub initial_state: InitialState,
    pub gamma_tau: f64,
    pub final_tangle: f64,
    pub reason: Option<String>,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.reason.is_some()
    }
}

/// Computes the final tangle of one triple.
pub fn run_triple(config: &SweepConfig, method: Method, state: InitialState, gamma_tau: f64) -> Result<f64> {
    let p = config.params(state, gamma_tau)?;
    let tangle = match method {
        Method::Full => run_full_evolution(&p)?.final_tangle(),
        Method::Lumped => run_lumped_evolution(&p)?.final_tangle(),
        Method::Closed => run_closed_evolution(&p)?.final_tangle(),
        Method::Analytic => closed_tangle_analytic(&p.initial, p.kappa_tau()).value(),
        Method::Bound => tangle_upper_bound(&p)?.bound,
    };
    if !(0.0..=1.0).contains(&tangle) {
        return Err(Error::TangleOutOfRange(tangle));
    }
    Ok(tangle)
}

/// Runs every triple of the configuration. Numerical failures are recorded in
/// the row; only an invalid configuration is an error.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let mut methods = config.methods.clone();
    methods.sort();
    methods.dedup();
    let mut states = config.initial_states.clone();
    states.sort();
    states.dedup();
    let grid = config.grid();

    let mut triples = Vec::with_capacity(methods.len() * states.len() * grid.len());
    for &m in &methods {
        for &s in &states {
            triples.extend(grid.iter().map(|&gt| (m, s, gt)));
        }
    }

    let rows = triples
        .into_par_iter()
        .map(|(method, initial_state, gamma_tau)| {
            let (final_tangle, reason) = match run_triple(config, method, initial_state, gamma_tau) {
                Ok(t) => (t, None),
                Err(e) => {
                    log::error!("{method} {initial_state} gamma_tau={gamma_tau:e}: {e}");
                    (f64::NAN, Some(e.to_string()))
                }
            };
            ResultRow { method, initial_state, gamma_tau, final_tangle, reason }
        })
        .collect();
    Ok(rows)
}

/// 12 significant digits, independent of locale.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub const CSV_HEADER: [&str; 5] = ["method", "initial_state", "gamma_tau", "final_tangle", "reason"];

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_io = |e: csv::Error| Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(to_io)?;
    for row in rows {
        w.write_record([
            row.method.name(),
            row.initial_state.name(),
            &format_real(row.gamma_tau),
            &format_real(row.final_tangle),
            row.reason.as_deref().unwrap_or(""),
        ])
        .map_err(to_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Derived rates at every grid point, one whitespace-separated line each.
pub fn write_sidecar<W: Write>(config: &SweepConfig, mut out: W) -> Result<()> {
    writeln!(out, "# area_bar {}", format_real(config.area_bar))?;
    writeln!(out, "# n_modes {}", config.n_modes)?;
    writeln!(out, "# substeps {}", config.substeps)?;
    writeln!(out, "# units: Gamma = 1, hbar = 1")?;
    writeln!(out, "gamma_tau tau kappa dt g alpha gamma_prime")?;
    for gt in config.grid() {
        let r = config.params(InitialState::Ground, gt)?.rates();
        let fields = [gt, r.tau, r.kappa, r.dt, r.coupling, r.alpha, r.decay_nonparaxial];
        writeln!(out, "{}", fields.map(format_real).join(" "))?;
    }
    Ok(())
}

/// Sidecar location next to a CSV file: `x.csv` → `x.params.txt`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("params.txt")
}

/// Writes rows to `path` and the derived parameters next to it.
pub fn write_outputs(config: &SweepConfig, rows: &[ResultRow], path: &Path) -> Result<()> {
    write_csv(rows, fs::File::create(path)?)?;
    write_sidecar(config, fs::File::create(sidecar_path(path))?)
}

/// Named preset sweeps: `fig2` compares the full and closed models, `fig4` is the trajectory bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigurePreset {
    /// Full and closed tangles for the six initial states.
    Fig2,
    /// Trajectory bound for the six initial states.
    Fig4,
}

impl FigurePreset {
    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig4 => "fig4",
        }
    }

    pub fn methods(self) -> Vec<Method> {
        match self {
            FigurePreset::Fig2 => vec![Method::Full, Method::Closed],
            FigurePreset::Fig4 => vec![Method::Bound],
        }
    }

    /// The preset applied on top of `base` (which supplies Ā, N and the grid).
    pub fn config(self, base: &SweepConfig) -> SweepConfig {
        SweepConfig { methods: self.methods(), initial_states: InitialState::ALL.to_vec(), ..base.clone() }
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigurePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fig2" => Ok(FigurePreset::Fig2),
            "fig4" => Ok(FigurePreset::Fig4),
            other => Err(Error::UnknownName { kind: "figure", token: other.to_string() }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FigureOutput {
    pub csv_path: PathBuf,
    pub sidecar_path: PathBuf,
    pub rows: Vec<ResultRow>,
}

/// Runs a preset and writes `<out_dir>/<name>.csv` plus its sidecar.
pub fn figure_preset(preset: FigurePreset, base: &SweepConfig, out_dir: &Path) -> Result<FigureOutput> {
    let config = preset.config(base);
    let rows = run_sweep(&config)?;
    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{}.csv", preset.name()));
    write_outputs(&config, &rows, &csv_path)?;
    Ok(FigureOutput { sidecar_path: sidecar_path(&csv_path), csv_path, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(methods: Vec<Method>, states: Vec<InitialState>, grid: Vec<f64>) -> SweepConfig {
        SweepConfig {
            n_modes: 50,
            gamma_tau_grid: Some(grid),
            initial_states: states,
            methods,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn default_grid_spans_range() {
        let g = default_grid(1000.0, 30);
        assert_eq!(g.len(), 30);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[29], 1000f64.sqrt());
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let ratios: Vec<f64> = g.windows(2).map(|w| w[1] / w[0]).collect();
        assert!(ratios.iter().all(|r| (r - ratios[0]).abs() < 1e-9));
    }

    #[test]
    fn config_defaults_and_overrides() {
        let c = SweepConfig::from_json("{}").unwrap();
        assert_eq!(c, SweepConfig::default());
        let c =
            SweepConfig::from_json(r#"{"area_bar": 100, "methods": ["full", "bound"], "initial_states": ["e+ig"]}"#)
                .unwrap();
        assert_eq!(c.area_bar, 100.0);
        assert_eq!(c.methods, vec![Method::Full, Method::Bound]);
        assert_eq!(c.initial_states, vec![InitialState::PlusY]);
    }

    #[test]
    fn bad_config_tokens_are_reported() {
        let e = SweepConfig::from_json(r#"{"methods": ["fulll"]}"#).unwrap_err();
        assert!(e.to_string().contains("fulll"), "{e}");
        let e = SweepConfig::from_json(r#"{"initial_states": ["x"]}"#).unwrap_err();
        assert!(e.to_string().contains("\"x\"") || e.to_string().contains("`x`"), "{e}");
        assert!(SweepConfig::from_json(r#"{"modes": 3}"#).is_err());
    }

    #[test]
    fn grid_above_ceiling_is_rejected() {
        let c = small(vec![Method::Analytic], vec![InitialState::Excited], vec![40.0]);
        assert!(matches!(run_sweep(&c), Err(Error::Config(_))));
    }

    #[test]
    fn analytic_row() {
        let c = small(vec![Method::Analytic], vec![InitialState::Excited], vec![1e-3]);
        let rows = run_sweep(&c).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].final_tangle - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn empty_grid_gives_no_rows() {
        let c = small(vec![Method::Full], vec![InitialState::Excited], vec![]);
        assert!(run_sweep(&c).unwrap().is_empty());
    }

    #[test]
    fn rows_are_sorted() {
        let c = small(
            vec![Method::Closed, Method::Analytic],
            vec![InitialState::MinusY, InitialState::Excited],
            vec![1e-2, 1e-3],
        );
        let rows = run_sweep(&c).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.method, r.initial_state, r.gamma_tau)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        assert_eq!(keys, sorted);
        assert_eq!(rows.len(), 8);
    }

    #[test]
    fn csv_format() {
        let rows = vec![
            ResultRow {
                method: Method::Full,
                initial_state: InitialState::PlusX,
                gamma_tau: 1e-3,
                final_tangle: 4.0462e-7,
                reason: None,
            },
            ResultRow {
                method: Method::Bound,
                initial_state: InitialState::MinusY,
                gamma_tau: 0.5,
                final_tangle: f64::NAN,
                reason: Some("norm vanished, x".into()),
            },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "method,initial_state,gamma_tau,final_tangle,reason");
        assert_eq!(lines[1], "full,e+g,1.00000000000e-3,4.04620000000e-7,");
        assert_eq!(lines[2], "bound,e-ig,5.00000000000e-1,NaN,\"norm vanished, x\"");
    }

    #[test]
    fn sidecar_reproduces_rates() {
        let c = small(vec![Method::Closed], vec![InitialState::Excited], vec![1e-2]);
        let mut buf = Vec::new();
        write_sidecar(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last: Vec<f64> = text.lines().last().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
        let r = SimParams::new(1000.0, 50, 1e-2, InitialState::Excited.atom_state()).unwrap().rates();
        let expected = [1e-2, r.tau, r.kappa, r.dt, r.coupling, r.alpha, r.decay_nonparaxial];
        for (a, b) in last.iter().zip(expected) {
            assert!((a - b).abs() <= 1e-11 * b.abs());
        }
    }

    #[test]
    fn figure_names() {
        assert_eq!("fig2".parse::<FigurePreset>().unwrap(), FigurePreset::Fig2);
        assert!("fig3".parse::<FigurePreset>().is_err());
        let c = FigurePreset::Fig4.config(&SweepConfig::default());
        assert_eq!(c.methods, vec![Method::Bound]);
        assert_eq!(c.initial_states.len(), 6);
    }
}
