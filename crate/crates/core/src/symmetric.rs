//! Atom ⊗ laser-pulse-mode tangle.
//!
//! [`run_full_evolution`] follows the pulse one coarse-grained interval at a
//! time. At the start of interval n+1 the field is described by a single
//! "dynamic symmetric mode" spanning the n modes that have already passed the
//! atom. The incoming mode is appended in vacuum, the six-state system is
//! integrated for Δt under the master equation, the field is rotated into
//! symmetric/antisymmetric combinations over n+1 modes, and the antisymmetric
//! mode is traced out, leaving a 2⊗2 state again.
//!
//! [`run_lumped_evolution`] and [`run_closed_evolution`] replace this by a
//! single driven Jaynes-Cummings mode with all decay lumped at rate Γ, or
//! with no decay at all.
//!
//! Every model uses H = +gα(σ₊+σ₋) + g(âσ₊ + â†σ₋). Flipping the overall sign
//! of H complex-conjugates the dynamics and therefore swaps the tangles of
//! (|e⟩+i|g⟩)/√2 and (|e⟩−i|g⟩)/√2; the positive sign is the one for which
//! the state with ⟨σ_y⟩ = +1 attains the larger closed-form tangle.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kron, ops, ComplexMatrix, ZERO};
use crate::lindblad::{evolve_nonhermitian, integrate_master, LindbladSystem};
use crate::measures::{pure_tangle, wootters_tangle, AtomState, TangleValue};
use crate::params::{Method, Rates, SimParams};
use crate::state::{DensityOperator, PureState};
use crate::tol;

/// Six-state basis of atom ⊗ (symmetric slot over n passed modes) ⊗
/// (incoming mode), truncated to one paraxial excitation.
///
/// Index = 2·sector + atom, atom ∈ {e = 0, g = 1}, sector ∈ {vacuum,
/// photon in the symmetric slot, photon in the incoming mode}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SixStateBasis {
    pub n_passed: usize,
}

impl SixStateBasis {
    pub const E_VAC: usize = 0;
    pub const G_VAC: usize = 1;
    pub const E_SYM: usize = 2;
    pub const G_SYM: usize = 3;
    pub const E_NEW: usize = 4;
    pub const G_NEW: usize = 5;

    pub const LABELS: [&'static str; 6] = ["|e,0,0>", "|g,0,0>", "|e,1+,0>", "|g,1+,0>", "|e,0,1new>", "|g,0,1new>"];

    /// ρ_n ⊗ |0⟩⟨0| for the incoming mode. `rho4` is ordered (e,g)⊗(0,1).
    pub fn embed(&self, rho4: &DensityOperator) -> Result<DensityOperator> {
        if rho4.dims() != [2, 2] {
            return Err(Error::DimensionMismatch { context: "six-state embedding", expected: 4, found: rho4.dim() });
        }
        let m4 = rho4.matrix();
        let mut m6 = ComplexMatrix::zeros(6, 6);
        for a in 0..4 {
            for b in 0..4 {
                m6[(six_index(a), six_index(b))] = m4[(a, b)];
            }
        }
        DensityOperator::from_matrix(m6, vec![6])
    }
}

/// Maps (atom, symmetric-field) index a·2 + f to the six-state index.
fn six_index(i4: usize) -> usize {
    let (atom, field) = (i4 / 2, i4 % 2);
    2 * field + atom
}

/// Interval Hamiltonian on the six-state basis: the drive gα(σ₊+σ₋) acts in
/// every field sector, the Jaynes-Cummings coupling g links only |e,0,0⟩ and
/// |g,0,1new⟩. The photon already in the symmetric slot does not couple.
pub fn build_interval_hamiltonian(rates: &Rates) -> ComplexMatrix {
    type B = SixStateBasis;
    let mut h = ComplexMatrix::zeros(6, 6);
    let drive = C64::new(rates.drive, 0.0);
    for (e, g) in [(B::E_VAC, B::G_VAC), (B::E_SYM, B::G_SYM), (B::E_NEW, B::G_NEW)] {
        h[(e, g)] = drive;
        h[(g, e)] = drive;
    }
    let g = C64::new(rates.coupling, 0.0);
    h[(B::G_NEW, B::E_VAC)] = g;
    h[(B::E_VAC, B::G_NEW)] = g;
    h
}

/// Rotates the (symmetric slot, incoming mode) photon into the symmetric and
/// antisymmetric modes over n+1 passed modes and traces out the
/// antisymmetric one.
///
/// New symmetric amplitude = √(n/(n+1))·old + √(1/(n+1))·incoming. At n = 0
/// the incoming mode becomes the symmetric mode.
pub fn remix_and_trace(rho6: &DensityOperator, n: usize) -> Result<DensityOperator> {
    type B = SixStateBasis;
    if rho6.dim() != 6 {
        return Err(Error::DimensionMismatch { context: "remix_and_trace", expected: 6, found: rho6.dim() });
    }
    let nf = n as f64;
    let c = (nf / (nf + 1.0)).sqrt();
    let s = (1.0 / (nf + 1.0)).sqrt();
    let mut u = ComplexMatrix::identity(6);
    for atom in 0..2 {
        let (old, new) = (B::E_SYM + atom, B::E_NEW + atom);
        u[(old, old)] = C64::new(c, 0.0);
        u[(old, new)] = C64::new(s, 0.0);
        u[(new, old)] = C64::new(-s, 0.0);
        u[(new, new)] = C64::new(c, 0.0);
    }
    // Rows E_SYM/G_SYM now hold the new symmetric mode, E_NEW/G_NEW the antisymmetric one.
    let rotated = &(&u * rho6.matrix()) * &u.dagger();

    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            out[(2 * a, 2 * b)] = rotated[(B::E_VAC + a, B::E_VAC + b)] + rotated[(B::E_NEW + a, B::E_NEW + b)];
            out[(2 * a + 1, 2 * b + 1)] = rotated[(B::E_SYM + a, B::E_SYM + b)];
            out[(2 * a, 2 * b + 1)] = rotated[(B::E_VAC + a, B::E_SYM + b)];
            out[(2 * a + 1, 2 * b)] = rotated[(B::E_SYM + a, B::E_VAC + b)];
        }
    }
    let before = rho6.trace();
    let after = out.trace().re;
    if (before - after).abs() > 1e-10 {
        return Err(Error::TraceViolation { trace: after });
    }
    DensityOperator::from_matrix(out, vec![2, 2])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangleEntry {
    /// Interval index i, 1-based.
    pub step: usize,
    /// Elapsed fraction of the pulse, i/N.
    pub fraction: f64,
    pub tangle: f64,
}

/// Tangle after each interval of one run.
#[derive(Clone, Debug)]
pub struct TangleSeries {
    pub method: Method,
    pub params: SimParams,
    pub entries: Vec<TangleEntry>,
    /// Atom ⊗ symmetric-mode state after the last interval.
    pub final_state: DensityOperator,
}

impl TangleSeries {
    pub fn final_tangle(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.tangle)
    }

    fn push(&mut self, step: usize, tangle: TangleValue) {
        let fraction = step as f64 / self.params.n_modes as f64;
        self.entries.push(TangleEntry { step, fraction, tangle: tangle.value() });
    }
}

fn initial_product(initial: &AtomState) -> PureState {
    let [e, g] = initial.amplitudes();
    PureState::new(vec![e, ZERO, g, ZERO], vec![2, 2]).expect("4 amplitudes")
}

/// Stepwise open-system evolution of atom ⊗ dynamic symmetric mode.
pub fn run_full_evolution(params: &SimParams) -> Result<TangleSeries> {
    params.validate()?;
    run_full_evolution_with(params, &params.rates())
}

/// [`run_full_evolution`] with explicitly supplied rates (e.g. a decoupled
/// field for limit checks).
pub fn run_full_evolution_with(params: &SimParams, rates: &Rates) -> Result<TangleSeries> {
    let jump = kron(&ComplexMatrix::identity(3), &ops::sigma_minus());
    let sys = LindbladSystem::new(build_interval_hamiltonian(rates), jump, rates.decay_nonparaxial)?;
    let mut rho4 = DensityOperator::from_pure(&initial_product(&params.initial));
    let mut series = TangleSeries {
        method: Method::Full,
        params: *params,
        entries: Vec::with_capacity(rates.n_modes),
        final_state: rho4.clone(),
    };
    for step in 1..=rates.n_modes {
        let n_passed = step - 1;
        let rho6 = SixStateBasis { n_passed }.embed(&rho4)?;
        let evolved = integrate_master(&sys, &rho6, rates.dt, rates.substeps)?;
        rho4 = remix_and_trace(&evolved, n_passed)?;
        rho4.validate()?;
        series.push(step, wootters_tangle(&rho4)?);
    }
    series.final_state = rho4;
    Ok(series)
}

/// Driven Jaynes-Cummings Hamiltonian on atom ⊗ single mode, ordered
/// (e,g)⊗(0,1): sign·[(Ω/2)(σ₊+σ₋) + g_s(âσ₊ + â†σ₋)].
pub fn single_mode_hamiltonian(rates: &Rates, sign: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let a = ops::annihilation();
    let drive = kron(&ops::sigma_x(), &id).scale(C64::new(sign * rates.rabi() / 2.0, 0.0));
    let jc = &kron(&ops::sigma_plus(), &a) + &kron(&ops::sigma_minus(), &a.dagger());
    &drive + &jc.scale(C64::new(sign * rates.single_mode_coupling(), 0.0))
}

/// Single-mode model with all decoherence lumped into decay at rate Γ.
pub fn run_lumped_evolution(params: &SimParams) -> Result<TangleSeries> {
    params.validate()?;
    run_lumped_evolution_with(params, &params.rates(), 1.0)
}

/// [`run_lumped_evolution`] with explicit rates and Hamiltonian sign.
pub fn run_lumped_evolution_with(params: &SimParams, rates: &Rates, sign: f64) -> Result<TangleSeries> {
    let jump = kron(&ops::sigma_minus(), &ComplexMatrix::identity(2));
    let sys = LindbladSystem::new(single_mode_hamiltonian(rates, sign), jump, rates.decay_total)?;
    let mut rho = DensityOperator::from_pure(&initial_product(&params.initial));
    let mut series = TangleSeries {
        method: Method::Lumped,
        params: *params,
        entries: Vec::with_capacity(rates.n_modes),
        final_state: rho.clone(),
    };
    for step in 1..=rates.n_modes {
        rho = integrate_master(&sys, &rho, rates.dt, rates.substeps)?;
        series.push(step, wootters_tangle(&rho)?);
    }
    series.final_state = rho;
    Ok(series)
}

/// Single-mode model without decay; the state stays pure.
pub fn run_closed_evolution(params: &SimParams) -> Result<TangleSeries> {
    params.validate()?;
    run_closed_evolution_with(params, &params.rates(), 1.0)
}

/// [`run_closed_evolution`] with explicit rates and Hamiltonian sign.
pub fn run_closed_evolution_with(params: &SimParams, rates: &Rates, sign: f64) -> Result<TangleSeries> {
    let h = single_mode_hamiltonian(rates, sign);
    let mut psi = initial_product(&params.initial);
    let mut series = TangleSeries {
        method: Method::Closed,
        params: *params,
        entries: Vec::with_capacity(rates.n_modes),
        final_state: DensityOperator::from_pure(&psi),
    };
    for step in 1..=rates.n_modes {
        psi = evolve_nonhermitian(&h, &psi, rates.dt, rates.substeps)?;
        psi.check_normalized(tol::NORMALIZED)?;
        series.push(step, pure_tangle(&psi)?);
    }
    series.final_state = DensityOperator::from_pure(&psi);
    Ok(series)
}
