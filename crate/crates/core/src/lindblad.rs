//! Master-equation and non-Hermitian Schrödinger integrators.
//!
//! Both use classical fourth-order Runge-Kutta with a fixed number of
//! substeps. Units: ħ = 1, rates and energies in units of the total
//! spontaneous emission rate.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, I};
use crate::state::{DensityOperator, PureState};
use crate::tol;

/// Generator dρ/dt = −i[H, ρ] + Γ(LρL† − ½{L†L, ρ}) with a single jump operator.
#[derive(Clone, Debug)]
pub struct LindbladSystem {
    hamiltonian: ComplexMatrix,
    jump_operator: ComplexMatrix,
    jump_rate: f64,
    jump_dagger: ComplexMatrix,
    jump_number: ComplexMatrix,
}

impl LindbladSystem {
    pub fn new(hamiltonian: ComplexMatrix, jump_operator: ComplexMatrix, jump_rate: f64) -> Result<Self> {
        if !hamiltonian.is_square() {
            return Err(Error::DimensionMismatch {
                context: "hamiltonian",
                expected: hamiltonian.rows(),
                found: hamiltonian.cols(),
            });
        }
        if jump_operator.rows() != hamiltonian.rows() || jump_operator.cols() != hamiltonian.cols() {
            return Err(Error::DimensionMismatch {
                context: "jump operator",
                expected: hamiltonian.rows(),
                found: jump_operator.rows(),
            });
        }
        let defect = hamiltonian.hermitian_defect();
        if defect > tol::HAMILTONIAN_HERMITIAN {
            return Err(Error::NotHermitian { defect });
        }
        if !(jump_rate.is_finite() && jump_rate >= 0.0) {
            return Err(Error::InvalidParams(format!("jump rate must be nonnegative, got {jump_rate}")));
        }
        let jump_dagger = jump_operator.dagger();
        let jump_number = &jump_dagger * &jump_operator;
        Ok(Self { hamiltonian, jump_operator, jump_rate, jump_dagger, jump_number })
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jump_operator(&self) -> &ComplexMatrix {
        &self.jump_operator
    }

    pub fn jump_rate(&self) -> f64 {
        self.jump_rate
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    /// H − (i/2)Γ L†L, the generator of no-jump evolution.
    pub fn effective_hamiltonian(&self) -> ComplexMatrix {
        let mut h = self.hamiltonian.clone();
        h.axpy(-I * (0.5 * self.jump_rate), &self.jump_number);
        h
    }

    /// Right-hand side of the master equation.
    pub fn rhs(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim() || rho.cols() != self.dim() {
            return Err(Error::DimensionMismatch { context: "lindblad rhs", expected: self.dim(), found: rho.rows() });
        }
        Ok(self.rhs_unchecked(rho))
    }

    fn rhs_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.hamiltonian.commutator(rho).scale(-I);
        if self.jump_rate > 0.0 {
            let sandwich = &(&self.jump_operator * rho) * &self.jump_dagger;
            out.axpy(C64::new(self.jump_rate, 0.0), &sandwich);
            out.axpy(C64::new(-0.5 * self.jump_rate, 0.0), &self.jump_number.anticommutator(rho));
        }
        out
    }
}

/// Integrates the master equation over `duration` with `substeps` RK4 steps
/// and checks the density-operator invariants of the result.
pub fn integrate_master(
    sys: &LindbladSystem,
    rho0: &DensityOperator,
    duration: f64,
    substeps: usize,
) -> Result<DensityOperator> {
    if substeps == 0 {
        return Err(Error::InvalidParams("substeps must be at least 1".into()));
    }
    if duration.is_nan() || duration < 0.0 {
        return Err(Error::InvalidParams(format!("duration must be nonnegative, got {duration}")));
    }
    if rho0.dim() != sys.dim() {
        return Err(Error::DimensionMismatch { context: "integrate_master", expected: sys.dim(), found: rho0.dim() });
    }
    let h = duration / substeps as f64;
    let mut rho = rho0.matrix().clone();
    for _ in 0..substeps {
        rho = rk4_step(&rho, h, |m| sys.rhs_unchecked(m));
    }
    let out = DensityOperator::from_matrix(rho, rho0.dims().to_vec())?;
    out.validate()?;
    Ok(out)
}

/// Integrates i dψ/dt = H_eff ψ for a (possibly) non-Hermitian H_eff.
///
/// The state is left unnormalized; its norm² is the no-jump survival
/// probability. Fails if norm² grows at any substep.
pub fn evolve_nonhermitian(
    h_eff: &ComplexMatrix,
    psi0: &PureState,
    duration: f64,
    substeps: usize,
) -> Result<PureState> {
    if substeps == 0 {
        return Err(Error::InvalidParams("substeps must be at least 1".into()));
    }
    if h_eff.rows() != psi0.amplitudes().len() || !h_eff.is_square() {
        return Err(Error::DimensionMismatch {
            context: "evolve_nonhermitian",
            expected: h_eff.rows(),
            found: psi0.amplitudes().len(),
        });
    }
    let h = duration / substeps as f64;
    let gen = h_eff.scale(-I);
    let mut psi = psi0.amplitudes().to_vec();
    let mut norm = psi0.norm_sqr();
    for _ in 0..substeps {
        psi = rk4_vec_step(&gen, &psi, h);
        let next: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if next > norm * (1.0 + tol::NORM_GROWTH) + f64::MIN_POSITIVE {
            return Err(Error::NormIncrease { before: norm, after: next });
        }
        norm = next;
    }
    PureState::new(psi, psi0.dims().to_vec())
}

/// The matrix that advances a state vector by `duration` under
/// i dψ/dt = H_eff ψ, equal to `substeps` applications of the RK4 step.
pub fn nonhermitian_propagator(h_eff: &ComplexMatrix, duration: f64, substeps: usize) -> ComplexMatrix {
    let n = h_eff.rows();
    let h = duration / substeps.max(1) as f64;
    // One RK4 step for a linear system is the degree-4 Taylor polynomial of exp(hA).
    let a = h_eff.scale(-I * h);
    let mut step = ComplexMatrix::identity(n);
    let mut power = ComplexMatrix::identity(n);
    for k in 1..=4 {
        power = &power * &a;
        step.axpy(C64::new(1.0 / factorial(k), 0.0), &power);
    }
    let mut out = ComplexMatrix::identity(n);
    for _ in 0..substeps.max(1) {
        out = &step * &out;
    }
    out
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn rk4_step<F>(y: &ComplexMatrix, h: f64, f: F) -> ComplexMatrix
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    let half = C64::new(0.5 * h, 0.0);
    let k1 = f(y);
    let mut y2 = y.clone();
    y2.axpy(half, &k1);
    let k2 = f(&y2);
    let mut y3 = y.clone();
    y3.axpy(half, &k2);
    let k3 = f(&y3);
    let mut y4 = y.clone();
    y4.axpy(C64::new(h, 0.0), &k3);
    let k4 = f(&y4);
    let mut out = y.clone();
    let sixth = h / 6.0;
    out.axpy(C64::new(sixth, 0.0), &k1);
    out.axpy(C64::new(2.0 * sixth, 0.0), &k2);
    out.axpy(C64::new(2.0 * sixth, 0.0), &k3);
    out.axpy(C64::new(sixth, 0.0), &k4);
    out
}

fn rk4_vec_step(gen: &ComplexMatrix, y: &[C64], h: f64) -> Vec<C64> {
    let shifted =
        |base: &[C64], k: &[C64], s: f64| -> Vec<C64> { base.iter().zip(k).map(|(b, k)| b + k * s).collect() };
    let k1 = gen.apply(y);
    let k2 = gen.apply(&shifted(y, &k1, 0.5 * h));
    let k3 = gen.apply(&shifted(y, &k2, 0.5 * h));
    let k4 = gen.apply(&shifted(y, &k3, h));
    (0..y.len()).map(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0)).collect()
}
