//! Upper bound on the tangle between the atom and all paraxial modes from a
//! photodetection unravelling of the master equation.
//!
//! Only the last jump of a record matters: a jump leaves the atom in |g⟩ and
//! the field separable from it, and by the Markov property the evolution
//! afterwards does not depend on when the jump happened. Two unnormalized
//! no-jump trajectories therefore suffice: ψ_A from the initial atomic
//! state and ψ_B from |g⟩ right after a jump. Their norms give the jump
//! statistics; the renewal equation for the jump density is solved exactly.
//!
//! The bound is
//!
//! ```text
//! T ≤ Σᵢ P_LJ(i) T(ψ_B(N−i)) + P_NJ T(ψ_A(N))
//! ```
//!
//! with P_LJ(i) the probability that the last jump falls in interval i and
//! P_NJ the no-jump probability.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, I, ZERO};
use crate::lindblad::nonhermitian_propagator;
use crate::measures::{four_det, AtomState, TangleValue};
use crate::params::{Rates, SimParams};
use crate::tol;

/// A no-jump trajectory, stored as the unnormalized atomic marginal after
/// each interval.
///
/// Within the one-excitation truncation the state after k intervals is
/// v_vac ⊗ |vac⟩ + Σ_j v_j ⊗ |1_j⟩. Passed modes no longer couple to the
/// atom, so every v_j evolves under the same 2×2 non-Hermitian drive and the
/// atomic marginal v_vac v_vac† + Σ_j v_j v_j† can be propagated without
/// keeping the k photon amplitudes.
#[derive(Clone, Debug)]
pub struct FiducialTrajectory {
    marginals: Vec<ComplexMatrix>,
    survival: Vec<f64>,
}

impl FiducialTrajectory {
    /// Number of intervals covered (entries run 0..=len).
    pub fn intervals(&self) -> usize {
        self.survival.len() - 1
    }

    /// No-jump probability ‖ψ(k)‖² for k = 0..=intervals.
    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    /// Unnormalized atomic marginal after k intervals; its trace is survival(k).
    pub fn atom_marginal(&self, k: usize) -> &ComplexMatrix {
        &self.marginals[k]
    }
}

/// Non-Hermitian Hamiltonian on [|e,vac⟩, |g,vac⟩, |e,1new⟩, |g,1new⟩].
fn vacuum_block_hamiltonian(rates: &Rates) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(4, 4);
    let drive = C64::new(rates.drive, 0.0);
    let g = C64::new(rates.coupling, 0.0);
    let loss = -I * (0.5 * rates.decay_nonparaxial);
    h[(0, 1)] = drive;
    h[(1, 0)] = drive;
    h[(2, 3)] = drive;
    h[(3, 2)] = drive;
    h[(3, 0)] = g;
    h[(0, 3)] = g;
    h[(0, 0)] = loss;
    h[(2, 2)] = loss;
    h
}

/// Atom-only non-Hermitian Hamiltonian acting inside each passed-photon sector.
fn passed_sector_hamiltonian(rates: &Rates) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(2, 2);
    h[(0, 1)] = C64::new(rates.drive, 0.0);
    h[(1, 0)] = C64::new(rates.drive, 0.0);
    h[(0, 0)] = -I * (0.5 * rates.decay_nonparaxial);
    h
}

/// Evolves the no-jump trajectory from `initial` ⊗ |vac⟩ for `k_max` intervals.
pub fn evolve_fiducial(params: &SimParams, initial: &AtomState, k_max: usize) -> Result<FiducialTrajectory> {
    params.validate()?;
    if k_max > params.n_modes {
        return Err(Error::InvalidParams(format!("k_max {k_max} exceeds n_modes {}", params.n_modes)));
    }
    evolve_fiducial_with(&params.rates(), initial, k_max)
}

/// [`evolve_fiducial`] with explicitly supplied rates.
pub fn evolve_fiducial_with(rates: &Rates, initial: &AtomState, k_max: usize) -> Result<FiducialTrajectory> {
    let block = nonhermitian_propagator(&vacuum_block_hamiltonian(rates), rates.dt, rates.substeps);
    let sector = nonhermitian_propagator(&passed_sector_hamiltonian(rates), rates.dt, rates.substeps);
    let sector_dag = sector.dagger();

    let mut vac = initial.amplitudes().to_vec();
    let mut passed = ComplexMatrix::zeros(2, 2);
    let mut marginals = Vec::with_capacity(k_max + 1);
    let mut survival = Vec::with_capacity(k_max + 1);
    marginals.push(ComplexMatrix::outer(&vac, &vac));
    survival.push(initial.amplitudes().iter().map(|z| z.norm_sqr()).sum());

    for _ in 0..k_max {
        let w = block.apply(&[vac[0], vac[1], ZERO, ZERO]);
        passed = &(&(&sector * &passed) * &sector_dag) + &ComplexMatrix::outer(&w[2..], &w[2..]);
        passed.hermitize();
        vac = w[..2].to_vec();
        let marginal = &ComplexMatrix::outer(&vac, &vac) + &passed;
        let norm = marginal.trace().re;
        let before = *survival.last().expect("nonempty");
        if norm > before * (1.0 + tol::NORM_GROWTH) + f64::MIN_POSITIVE {
            return Err(Error::NormIncrease { before, after: norm });
        }
        survival.push(norm);
        marginals.push(marginal);
    }
    Ok(FiducialTrajectory { marginals, survival })
}

/// Tangle between the atom and all field modes along the trajectory, from the
/// normalized atomic marginal: 4 det ρ_A.
pub fn trajectory_tangles(traj: &FiducialTrajectory) -> Result<Vec<TangleValue>> {
    traj.marginals
        .iter()
        .zip(&traj.survival)
        .map(|(m, &s)| {
            if s <= tol::VANISHING_NORM {
                return Err(Error::VanishingNorm { norm_sq: s });
            }
            TangleValue::new(four_det(m) / (s * s))
        })
        .collect()
}

/// Jump probabilities over N intervals. Arrays are indexed from 0 for
/// interval (or lag) 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpStatistics {
    /// P_A(i): first jump in interval i.
    pub p_first: Vec<f64>,
    /// P_B(m): next jump m intervals after a jump, none in between.
    pub p_interjump: Vec<f64>,
    /// Q(m) = P_J(i|j) with m = i − j: some jump m intervals after a jump.
    pub q: Vec<f64>,
    /// P_J(i): a jump (first or later) in interval i.
    pub p_jump: Vec<f64>,
    /// P_LJ(i): the last jump in interval i.
    pub p_lastjump: Vec<f64>,
    /// P_NJ: no jump at all.
    pub p_nojump: f64,
}

impl JumpStatistics {
    /// Builds the statistics from two survival curves with survival[0] = 1.
    /// `survival_a` must cover exactly N intervals, `survival_b` at least N.
    pub fn from_survival(survival_a: &[f64], survival_b: &[f64]) -> Result<Self> {
        let n = survival_a.len().saturating_sub(1);
        if n == 0 || survival_b.len() < n + 1 {
            return Err(Error::DimensionMismatch {
                context: "jump statistics",
                expected: n + 1,
                found: survival_b.len(),
            });
        }
        let p_first = decrements(&survival_a[..=n]);
        let p_interjump = decrements(&survival_b[..=n]);
        let q = renewal_density(&p_interjump);
        let p_jump = first_passage_convolution(&p_first, &q);
        let p_lastjump: Vec<f64> = (1..=n).map(|i| survival_b[n - i] * p_jump[i - 1]).collect();
        let stats = Self { p_first, p_interjump, q, p_jump, p_lastjump, p_nojump: survival_a[n] };
        stats.check_ranges()?;
        Ok(stats)
    }

    pub fn intervals(&self) -> usize {
        self.p_first.len()
    }

    /// P_NJ + Σ P_LJ − 1; zero when every record has either no jump or a last jump.
    pub fn closure_defect(&self) -> f64 {
        self.p_nojump + self.p_lastjump.iter().sum::<f64>() - 1.0
    }

    fn check_ranges(&self) -> Result<()> {
        let arrays: [(&'static str, &[f64]); 5] = [
            ("P_A", &self.p_first),
            ("P_B", &self.p_interjump),
            ("Q", &self.q),
            ("P_J", &self.p_jump),
            ("P_LJ", &self.p_lastjump),
        ];
        let in_range = |v: f64| (-tol::PROBABILITY..=1.0 + tol::PROBABILITY).contains(&v);
        for (what, values) in arrays {
            if let Some(&bad) = values.iter().find(|&&v| !in_range(v)) {
                return Err(Error::ProbabilityOutOfRange { what, value: bad });
            }
        }
        if !in_range(self.p_nojump) {
            return Err(Error::ProbabilityOutOfRange { what: "P_NJ", value: self.p_nojump });
        }
        Ok(())
    }
}

fn decrements(survival: &[f64]) -> Vec<f64> {
    survival.windows(2).map(|w| w[0] - w[1]).collect()
}

/// Exact solution of Q(m) = P_B(m) + Σ_{l=1}^{m−1} P_B(l) Q(m−l).
pub fn renewal_density(p_interjump: &[f64]) -> Vec<f64> {
    let n = p_interjump.len();
    let mut q = vec![0.0; n];
    for m in 0..n {
        // lags are m+1; l runs over 1..=m, Q index m−l.
        let mut acc = p_interjump[m];
        for l in 0..m {
            acc += p_interjump[l] * q[m - l - 1];
        }
        q[m] = acc;
    }
    q
}

/// The renewal recursion truncated after `max_extra_jumps` intermediate jumps.
/// Converges upward to [`renewal_density`].
pub fn renewal_density_truncated(p_interjump: &[f64], max_extra_jumps: usize) -> Vec<f64> {
    let n = p_interjump.len();
    let mut q = p_interjump.to_vec();
    for _ in 0..max_extra_jumps {
        let prev = q.clone();
        for m in 0..n {
            q[m] = p_interjump[m] + (0..m).map(|l| p_interjump[l] * prev[m - l - 1]).sum::<f64>();
        }
    }
    q
}

/// P_J(i) = P_A(i) + Σ_{j<i} Q(i−j) P_A(j).
fn first_passage_convolution(p_first: &[f64], q: &[f64]) -> Vec<f64> {
    (0..p_first.len()).map(|i| p_first[i] + (0..i).map(|j| q[i - j - 1] * p_first[j]).sum::<f64>()).collect()
}

/// Computes the jump statistics of two trajectories covering the same N.
pub fn jump_statistics(psi_a: &FiducialTrajectory, psi_b: &FiducialTrajectory) -> Result<JumpStatistics> {
    if psi_b.intervals() < psi_a.intervals() {
        return Err(Error::DimensionMismatch {
            context: "post-jump trajectory",
            expected: psi_a.intervals(),
            found: psi_b.intervals(),
        });
    }
    JumpStatistics::from_survival(psi_a.survival(), psi_b.survival())
}

/// The bound at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct BoundPoint {
    pub gamma_tau: f64,
    pub bound: f64,
    /// Tangle of the no-jump branch, T(ψ_A(N)).
    pub no_jump_tangle: f64,
    pub statistics: JumpStatistics,
}

#[derive(Clone, Debug)]
pub struct BoundSeries {
    pub params: SimParams,
    pub entries: Vec<BoundPoint>,
}

impl BoundSeries {
    /// Evaluates the bound at each Γτ with the other parameters from `params`.
    pub fn sweep(params: &SimParams, gamma_taus: &[f64]) -> Result<Self> {
        let entries = gamma_taus
            .par_iter()
            .map(|&gt| tangle_upper_bound(&SimParams { gamma_tau: gt, ..*params }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params: *params, entries })
    }
}

/// Convex-roof upper bound on the atom/all-paraxial-modes tangle.
pub fn tangle_upper_bound(params: &SimParams) -> Result<BoundPoint> {
    params.validate()?;
    tangle_upper_bound_with(params, &params.rates())
}

/// [`tangle_upper_bound`] with explicitly supplied rates.
pub fn tangle_upper_bound_with(params: &SimParams, rates: &Rates) -> Result<BoundPoint> {
    let n = rates.n_modes;
    let psi_a = evolve_fiducial_with(rates, &params.initial, n)?;
    let psi_b = evolve_fiducial_with(rates, &AtomState::ground(), n)?;
    let stats = jump_statistics(&psi_a, &psi_b)?;
    let defect = stats.closure_defect();
    if defect.abs() > 1e-8 {
        return Err(Error::ProbabilityOutOfRange { what: "P_NJ + sum P_LJ", value: 1.0 + defect });
    }
    let tangles_a = trajectory_tangles(&psi_a)?;
    let tangles_b = trajectory_tangles(&psi_b)?;
    let no_jump_tangle = tangles_a[n].value();
    let bound = (1..=n).map(|i| stats.p_lastjump[i - 1] * tangles_b[n - i].value()).sum::<f64>()
        + stats.p_nojump * no_jump_tangle;
    Ok(BoundPoint {
        gamma_tau: params.gamma_tau,
        bound: TangleValue::new(bound)?.value(),
        no_jump_tangle,
        statistics: stats,
    })
}

/// Empirical last-jump distribution from sampled jump records.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub samples: usize,
    pub p_lastjump: Vec<f64>,
    pub p_nojump: f64,
}

impl MonteCarloEstimate {
    /// Binomial standard error of an empirical probability.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

const MC_MIN_SAMPLES: usize = 10_000;
const MC_PARTITIONS: u64 = 64;

/// Samples jump records for `params` and histograms the last jump; an
/// independent check on [`JumpStatistics`].
pub fn monte_carlo_validate(params: &SimParams, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    params.validate()?;
    if samples < MC_MIN_SAMPLES {
        return Err(Error::InvalidParams(format!("need at least {MC_MIN_SAMPLES} samples, got {samples}")));
    }
    let rates = params.rates();
    let a = evolve_fiducial_with(&rates, &params.initial, rates.n_modes)?;
    let b = evolve_fiducial_with(&rates, &AtomState::ground(), rates.n_modes)?;
    Ok(sample_last_jumps(a.survival(), b.survival(), samples, seed))
}

/// Monte Carlo over jump records with per-interval hazards taken from the
/// survival curves. Work is split into a fixed number of partitions, each with
/// its own ChaCha stream, so the result does not depend on the thread count.
pub fn sample_last_jumps(survival_a: &[f64], survival_b: &[f64], samples: usize, seed: u64) -> MonteCarloEstimate {
    let n = survival_a.len() - 1;
    let hazard = |s: &[f64]| -> Vec<f64> {
        s.windows(2).map(|w| if w[0] > 0.0 { ((w[0] - w[1]) / w[0]).clamp(0.0, 1.0) } else { 1.0 }).collect()
    };
    let hazard_a = hazard(&survival_a[..=n]);
    let hazard_b = hazard(&survival_b[..=n]);

    let counts = (0..MC_PARTITIONS)
        .into_par_iter()
        .map(|part| {
            let share =
                samples / MC_PARTITIONS as usize + usize::from((part as usize) < samples % MC_PARTITIONS as usize);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(part);
            let mut last = vec![0u64; n + 1];
            for _ in 0..share {
                let mut since = 0;
                let mut after_jump = false;
                let mut last_jump = 0;
                for i in 1..=n {
                    let h = if after_jump { hazard_b[since] } else { hazard_a[since] };
                    since += 1;
                    if rng.gen::<f64>() < h {
                        last_jump = i;
                        after_jump = true;
                        since = 0;
                    }
                }
                last[last_jump] += 1;
            }
            last
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );

    let total = samples as f64;
    MonteCarloEstimate {
        samples,
        p_lastjump: counts[1..].iter().map(|&c| c as f64 / total).collect(),
        p_nojump: counts[0] as f64 / total,
    }
}
