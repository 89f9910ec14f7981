//! Dimensionless experiment parameters and the rates derived from them.
//!
//! Units: Γ = 1 (total spontaneous emission rate), ħ = 1. The free
//! parameter is the emission probability Γτ; the pulse is fixed by the
//! condition gατ = π/2.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::AtomState;

pub const DEFAULT_SUBSTEPS: usize = 16;
pub const MIN_AREA_BAR: f64 = 10.0;

/// Which model produced a tangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Stepwise open-system evolution with a dynamic symmetric mode.
    Full,
    /// Single-mode driven Jaynes-Cummings with all decay lumped at rate Γ.
    Lumped,
    /// Single-mode driven Jaynes-Cummings without decay.
    Closed,
    /// First-order closed-form closed-system tangle.
    Analytic,
    /// Quantum-trajectory upper bound on atom/all-mode tangle.
    Bound,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Full, Method::Lumped, Method::Closed, Method::Analytic, Method::Bound];

    pub fn name(self) -> &'static str {
        match self {
            Method::Full => "full",
            Method::Lumped => "lumped",
            Method::Closed => "closed",
            Method::Analytic => "analytic",
            Method::Bound => "bound",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::UnknownName { kind: "method", token: s.to_string() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimParams {
    /// Beam area over the resonant scattering cross section, Ā = A/σ_eff.
    pub area_bar: f64,
    /// Number of coarse-grained modes N in the pulse.
    pub n_modes: usize,
    /// Emission probability Γτ.
    pub gamma_tau: f64,
    pub initial: AtomState,
    /// RK4 substeps per coarse-grained interval.
    pub substeps: usize,
}

impl SimParams {
    pub fn new(area_bar: f64, n_modes: usize, gamma_tau: f64, initial: AtomState) -> Result<Self> {
        let p = Self { area_bar, n_modes, gamma_tau, initial, substeps: DEFAULT_SUBSTEPS };
        p.validate()?;
        Ok(p)
    }

    pub fn with_substeps(mut self, substeps: usize) -> Result<Self> {
        self.substeps = substeps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_initial(mut self, initial: AtomState) -> Self {
        self.initial = initial;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area_bar.is_finite() && self.area_bar >= MIN_AREA_BAR) {
            return Err(Error::InvalidParams(format!(
                "area_bar must be at least {MIN_AREA_BAR} for the paraxial approximation, got {}",
                self.area_bar
            )));
        }
        if self.n_modes == 0 {
            return Err(Error::InvalidParams("n_modes must be at least 1".into()));
        }
        if !(self.gamma_tau.is_finite() && self.gamma_tau > 0.0) {
            return Err(Error::InvalidParams(format!("gamma_tau must be positive, got {}", self.gamma_tau)));
        }
        if self.substeps == 0 {
            return Err(Error::InvalidParams("substeps must be at least 1".into()));
        }
        Ok(())
    }

    /// κτ = Γτ/Ā.
    pub fn kappa_tau(&self) -> f64 {
        self.gamma_tau / self.area_bar
    }

    /// True when κτ exceeds 1/√Ā, beyond which the one-excitation
    /// truncation of the field is unreliable.
    pub fn beyond_truncation_limit(&self) -> bool {
        self.kappa_tau() > 1.0 / self.area_bar.sqrt()
    }

    pub fn rates(&self) -> Rates {
        if self.beyond_truncation_limit() {
            log::warn!(
                "kappa*tau = {:.3e} exceeds 1/sqrt(area_bar) = {:.3e}; one-excitation truncation is unreliable",
                self.kappa_tau(),
                1.0 / self.area_bar.sqrt()
            );
        }
        let gamma = 1.0;
        let tau = self.gamma_tau / gamma;
        let kappa = gamma / self.area_bar;
        let dt = tau / self.n_modes as f64;
        let coupling = (kappa / dt).sqrt();
        let alpha = PI / (2.0 * coupling * tau);
        Rates {
            tau,
            kappa,
            dt,
            coupling,
            alpha,
            drive: coupling * alpha,
            decay_nonparaxial: gamma - kappa,
            decay_total: gamma,
            n_modes: self.n_modes,
            substeps: self.substeps,
        }
    }
}

/// Derived rates for one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rates {
    /// Pulse duration τ.
    pub tau: f64,
    /// Measurement strength κ = Γ/Ā.
    pub kappa: f64,
    /// Coarse-graining interval Δt = τ/N.
    pub dt: f64,
    /// Coupling to each coarse-grained mode, g = √(κ/Δt).
    pub coupling: f64,
    /// Coherent amplitude α = π/(2gτ).
    pub alpha: f64,
    /// Semiclassical drive strength gα; the Rabi frequency is Ω = 2gα.
    pub drive: f64,
    /// Γ′ = Γ − κ, decay into nonparaxial modes.
    pub decay_nonparaxial: f64,
    /// Γ, used by the lumped model.
    pub decay_total: f64,
    pub n_modes: usize,
    pub substeps: usize,
}

impl Rates {
    /// Rabi frequency Ω = 2gα = π/τ.
    pub fn rabi(&self) -> f64 {
        2.0 * self.drive
    }

    /// Coupling of the single pulse mode in the lumped and closed models,
    /// g_s = √(κ/τ).
    pub fn single_mode_coupling(&self) -> f64 {
        (self.kappa / self.tau).sqrt()
    }

    /// The field decoupled from the atom (the Ā → ∞ limit), drive kept.
    pub fn decoupled(mut self) -> Self {
        self.coupling = 0.0;
        self.kappa = 0.0;
        self.decay_nonparaxial = self.decay_total;
        self
    }

    /// Coherent drive switched off (α = 0).
    pub fn without_drive(mut self) -> Self {
        self.alpha = 0.0;
        self.drive = 0.0;
        self
    }

    /// Nonparaxial decay switched off.
    pub fn without_decay(mut self) -> Self {
        self.decay_nonparaxial = 0.0;
        self.decay_total = 0.0;
        self
    }
}
