//! Tangle for pure qubit-bipartite states, Wootters' mixed two-qubit tangle,
//! the positive-partial-transpose test, and the first-order closed-system
//! tangle formula.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, kron, ops, singular_values, ComplexMatrix, ZERO};
use crate::state::{partial_transpose_second, DensityOperator, PureState};
use crate::tol;

/// Squared concurrence, in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct TangleValue(f64);

impl TangleValue {
    pub const ZERO: TangleValue = TangleValue(0.0);

    /// Accepts values within rounding of [0, 1] and clamps them into range.
    pub fn new(value: f64) -> Result<Self> {
        if !(-tol::TANGLE..=1.0 + tol::TANGLE).contains(&value) {
            return Err(Error::TangleOutOfRange(value));
        }
        Ok(Self(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<TangleValue> for f64 {
    fn from(t: TangleValue) -> f64 {
        t.0
    }
}

/// Normalized atomic state with amplitudes ordered (e, g).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomState {
    excited: C64,
    ground: C64,
}

impl AtomState {
    pub fn new(excited: C64, ground: C64) -> Result<Self> {
        let n = excited.norm_sqr() + ground.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Unnormalized { norm_sq: n });
        }
        Ok(Self { excited, ground })
    }

    pub fn excited() -> Self {
        Self { excited: C64::new(1.0, 0.0), ground: ZERO }
    }

    pub fn ground() -> Self {
        Self { excited: ZERO, ground: C64::new(1.0, 0.0) }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.excited, self.ground]
    }

    pub fn excited_amplitude(&self) -> C64 {
        self.excited
    }

    pub fn ground_amplitude(&self) -> C64 {
        self.ground
    }

    /// Expectation values (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩).
    pub fn bloch_vector(&self) -> [f64; 3] {
        let v = self.amplitudes();
        let expect = |m: &ComplexMatrix| -> f64 {
            let mv = m.apply(&v);
            v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<C64>().re
        };
        [expect(&ops::sigma_x()), expect(&ops::sigma_y()), expect(&ops::sigma_z())]
    }
}

/// The six initial atomic states used throughout the sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InitialState {
    #[serde(rename = "e")]
    Excited,
    #[serde(rename = "g")]
    Ground,
    #[serde(rename = "e+g")]
    PlusX,
    #[serde(rename = "e-g")]
    MinusX,
    #[serde(rename = "e+ig")]
    PlusY,
    #[serde(rename = "e-ig")]
    MinusY,
}

impl InitialState {
    pub const ALL: [InitialState; 6] = [
        InitialState::Excited,
        InitialState::Ground,
        InitialState::PlusX,
        InitialState::MinusX,
        InitialState::PlusY,
        InitialState::MinusY,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitialState::Excited => "e",
            InitialState::Ground => "g",
            InitialState::PlusX => "e+g",
            InitialState::MinusX => "e-g",
            InitialState::PlusY => "e+ig",
            InitialState::MinusY => "e-ig",
        }
    }

    pub fn atom_state(self) -> AtomState {
        let h = FRAC_1_SQRT_2;
        let (e, g) = match self {
            InitialState::Excited => (C64::new(1.0, 0.0), ZERO),
            InitialState::Ground => (ZERO, C64::new(1.0, 0.0)),
            InitialState::PlusX => (C64::new(h, 0.0), C64::new(h, 0.0)),
            InitialState::MinusX => (C64::new(h, 0.0), C64::new(-h, 0.0)),
            InitialState::PlusY => (C64::new(h, 0.0), C64::new(0.0, h)),
            InitialState::MinusY => (C64::new(h, 0.0), C64::new(0.0, -h)),
        };
        AtomState { excited: e, ground: g }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitialState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InitialState::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| Error::UnknownName { kind: "initial state", token: s.to_string() })
    }
}

/// T = 2(1 − Tr ρ_A²) = 4 det ρ_A for a normalized state whose first
/// subsystem is a qubit.
pub fn pure_tangle(psi: &PureState) -> Result<TangleValue> {
    if psi.dims()[0] != 2 {
        return Err(Error::DimensionMismatch { context: "pure_tangle qubit", expected: 2, found: psi.dims()[0] });
    }
    psi.check_normalized(tol::NORMALIZED)?;
    TangleValue::new(four_det(&psi.first_marginal()))
}

/// 4 det of a 2×2 Hermitian matrix.
pub(crate) fn four_det(m: &ComplexMatrix) -> f64 {
    4.0 * (m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr())
}

fn check_two_qubit(rho: &DensityOperator) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch { context: "two-qubit state", expected: 4, found: rho.dim() });
    }
    Ok(())
}

/// Wootters' tangle C² for a two-qubit density operator.
///
/// The spin-flip eigenvalues λᵢ (square roots of the eigenvalues of ρρ̃) are
/// obtained as the singular values of √ρ (σ_y⊗σ_y) √ρ*, whose Gram matrix is
/// √ρ ρ̃ √ρ.
pub fn wootters_tangle(rho: &DensityOperator) -> Result<TangleValue> {
    check_two_qubit(rho)?;
    rho.check_hermitian_and_trace()?;
    let (values, vectors) = hermitian_eigen(rho.matrix())?;
    let sqrt_diag: Vec<C64> = values.iter().map(|&p| C64::new(p.max(0.0).sqrt(), 0.0)).collect();
    let sqrt_rho = &(&vectors * &ComplexMatrix::from_diag(&sqrt_diag)) * &vectors.dagger();
    let yy = kron(&ops::sigma_y(), &ops::sigma_y());
    let x = &(&sqrt_rho * &yy) * &sqrt_rho.conj();
    let lambda = singular_values(&x);
    let concurrence = (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0);
    TangleValue::new(concurrence * concurrence)
}

/// Peres-Horodecki criterion; necessary and sufficient for two qubits.
pub fn ppt_separable(rho: &DensityOperator) -> Result<bool> {
    check_two_qubit(rho)?;
    Ok(min_partial_transpose_eigenvalue(rho)? >= tol::POSITIVITY)
}

/// Smallest eigenvalue of the partial transpose over the second qubit.
pub fn min_partial_transpose_eigenvalue(rho: &DensityOperator) -> Result<f64> {
    let pt = partial_transpose_second(rho)?;
    Ok(hermitian_eigenvalues(&pt)?[0])
}

/// First-order closed-system tangle after a π pulse of duration τ:
/// κτ[(2⟨σ_y⟩ + π)² + ⟨σ_x⟩²(4 − π²)]/π², expectations in the initial state.
///
/// Only meaningful for κτ ≪ 1; the result is capped at 1.
pub fn closed_tangle_analytic(initial: &AtomState, kappa_tau: f64) -> TangleValue {
    let [sx, sy, _] = initial.bloch_vector();
    let t = kappa_tau * ((2.0 * sy + PI).powi(2) + sx * sx * (4.0 - PI * PI)) / (PI * PI);
    TangleValue(t.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell() -> PureState {
        // (|e,1⟩ + |g,0⟩)/√2 in (e,g)⊗(0,1): indices 1 and 2.
        PureState::new(vec![ZERO, r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2), ZERO], vec![2, 2]).unwrap()
    }

    #[test]
    fn pure_tangle_examples() {
        assert!((pure_tangle(&bell()).unwrap().value() - 1.0).abs() < 1e-15);
        let product = PureState::new(vec![ONE, ZERO, ZERO, ZERO], vec![2, 2]).unwrap();
        assert_eq!(pure_tangle(&product).unwrap().value(), 0.0);
        let partial = PureState::new(vec![r(0.2f64.sqrt()), ZERO, ZERO, r(0.8f64.sqrt())], vec![2, 2]).unwrap();
        assert!((pure_tangle(&partial).unwrap().value() - 0.64).abs() < 1e-14);
    }

    #[test]
    fn pure_tangle_rejects_unnormalized_and_non_qubit() {
        let psi = PureState::new(vec![r(0.5), ZERO, ZERO, ZERO], vec![2, 2]).unwrap();
        assert!(matches!(pure_tangle(&psi), Err(Error::Unnormalized { .. })));
        let qutrit = PureState::new(vec![ONE, ZERO, ZERO, ZERO, ZERO, ZERO], vec![3, 2]).unwrap();
        assert!(pure_tangle(&qutrit).is_err());
    }

    #[test]
    fn wootters_on_bell_and_maximally_mixed() {
        let rho = DensityOperator::from_pure(&bell());
        assert!((wootters_tangle(&rho).unwrap().value() - 1.0).abs() < 1e-12);
        let mixed = DensityOperator::new(ComplexMatrix::identity(4).scale(r(0.25)), vec![2, 2]).unwrap();
        assert_eq!(wootters_tangle(&mixed).unwrap().value(), 0.0);
    }

    #[test]
    fn wootters_rejects_invalid_input() {
        let skew = DensityOperator::from_matrix(
            ComplexMatrix::from_real(4, 4, &[0.25, 0.1, 0., 0., 0., 0.25, 0., 0., 0., 0., 0.25, 0., 0., 0., 0., 0.25]),
            vec![2, 2],
        )
        .unwrap();
        assert!(wootters_tangle(&skew).is_err());
        let big = DensityOperator::from_matrix(ComplexMatrix::identity(4), vec![2, 2]).unwrap();
        assert!(matches!(wootters_tangle(&big), Err(Error::TraceViolation { .. })));
    }

    #[test]
    fn ppt_examples() {
        let product = DensityOperator::from_pure(&PureState::new(vec![ONE, ZERO, ZERO, ZERO], vec![2, 2]).unwrap());
        assert!(ppt_separable(&product).unwrap());
        assert!(!ppt_separable(&DensityOperator::from_pure(&bell())).unwrap());
    }

    #[test]
    fn analytic_formula_values() {
        let kt = 1e-3;
        let e = closed_tangle_analytic(&AtomState::excited(), kt).value();
        assert!((e - kt).abs() < 1e-18);
        let g = closed_tangle_analytic(&AtomState::ground(), kt).value();
        assert!((g - kt).abs() < 1e-18);
        let px = closed_tangle_analytic(&InitialState::PlusX.atom_state(), kt).value();
        let mx = closed_tangle_analytic(&InitialState::MinusX.atom_state(), kt).value();
        assert_eq!(px, mx);
        assert!((px - 4.0 * kt / (PI * PI)).abs() < 1e-16);
        let py = closed_tangle_analytic(&InitialState::PlusY.atom_state(), kt).value();
        let my = closed_tangle_analytic(&InitialState::MinusY.atom_state(), kt).value();
        assert!((py - kt * (PI + 2.0).powi(2) / (PI * PI)).abs() < 1e-15);
        assert!((my - kt * (PI - 2.0).powi(2) / (PI * PI)).abs() < 1e-15);
        assert!((py / kt - 2.678).abs() < 1e-3 && (my / kt - 0.1321).abs() < 1e-4);
    }

    #[test]
    fn bloch_vectors_of_named_states() {
        let b = InitialState::PlusY.atom_state().bloch_vector();
        assert!((b[0]).abs() < 1e-15 && (b[1] - 1.0).abs() < 1e-15 && b[2].abs() < 1e-15);
        let b = InitialState::MinusX.atom_state().bloch_vector();
        assert!((b[0] + 1.0).abs() < 1e-15);
        assert!((InitialState::Excited.atom_state().bloch_vector()[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn initial_state_names_round_trip() {
        for s in InitialState::ALL {
            assert_eq!(s.name().parse::<InitialState>().unwrap(), s);
        }
        let err = "x+y".parse::<InitialState>().unwrap_err();
        assert!(err.to_string().contains("x+y"));
    }

    #[test]
    fn tangle_value_bounds() {
        assert!(TangleValue::new(-1e-12).unwrap().value() == 0.0);
        assert!(TangleValue::new(1.1).is_err());
        assert!(TangleValue::new(f64::NAN).is_err());
    }
}
