//! Pure states and density operators over labelled product bases.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::tol;

/// Complex amplitude vector over a product basis; `dims` lists the subsystem
/// dimensions, first subsystem most significant.
///
/// Trajectory states are allowed to be unnormalized; use
/// [`PureState::check_normalized`] where unit norm is required.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if dims.is_empty() || size != amplitudes.len() {
            return Err(Error::DimensionMismatch { context: "pure state", expected: size, found: amplitudes.len() });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("pure state"));
        }
        Ok(Self { amplitudes, dims })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn check_normalized(&self, tolerance: f64) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > tolerance {
            return Err(Error::Unnormalized { norm_sq: n });
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= tol::VANISHING_NORM {
            return Err(Error::VanishingNorm { norm_sq: n });
        }
        let s = 1.0 / n.sqrt();
        Ok(Self { amplitudes: self.amplitudes.iter().map(|z| z * s).collect(), dims: self.dims.clone() })
    }

    /// Reduced density matrix of the first subsystem, Tr_rest |ψ⟩⟨ψ|,
    /// without normalization.
    pub fn first_marginal(&self) -> ComplexMatrix {
        let da = self.dims[0];
        let db = self.amplitudes.len() / da;
        let mut out = ComplexMatrix::zeros(da, da);
        for i in 0..da {
            for j in 0..da {
                let row_i = &self.amplitudes[i * db..(i + 1) * db];
                let row_j = &self.amplitudes[j * db..(j + 1) * db];
                out[(i, j)] = row_i.iter().zip(row_j).map(|(a, b)| a * b.conj()).sum();
            }
        }
        out
    }
}

/// Density operator with subsystem labelling.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Wraps a matrix without checking the physical invariants; see
    /// [`DensityOperator::validate`].
    pub fn from_matrix(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != size || dims.is_empty() {
            return Err(Error::DimensionMismatch { context: "density operator", expected: size, found: matrix.rows() });
        }
        Ok(Self { matrix, dims })
    }

    /// Validated density operator.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::from_matrix(matrix, dims)?;
        rho.validate()?;
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a normalized state.
    pub fn from_pure(psi: &PureState) -> Self {
        Self { matrix: ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()), dims: psi.dims().to_vec() }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Checks Hermiticity, unit trace and positivity at the crate tolerances.
    pub fn validate(&self) -> Result<()> {
        self.check_hermitian_and_trace()?;
        let min = hermitian_eigenvalues(&self.matrix)?[0];
        if min < tol::POSITIVITY {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(())
    }

    pub fn check_hermitian_and_trace(&self) -> Result<()> {
        let defect = self.matrix.hermitian_defect();
        if defect > tol::HERMITIAN {
            return Err(Error::NotHermitian { defect });
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::TraceViolation { trace: tr.re });
        }
        Ok(())
    }
}

/// Marginal over subsystem `keep`, tracing out every other subsystem.
pub fn partial_trace(rho: &DensityOperator, keep: usize) -> Result<DensityOperator> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::SubsystemOutOfRange { index: keep, count: dims.len() });
    }
    if keep >= dims.len() {
        return Err(Error::SubsystemOutOfRange { index: keep, count: dims.len() });
    }
    let d_keep = dims[keep];
    let d_after: usize = dims[keep + 1..].iter().product();
    let d_before: usize = dims[..keep].iter().product();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(d_keep, d_keep);
    let index = |before: usize, k: usize, after: usize| (before * d_keep + k) * d_after + after;
    for i in 0..d_keep {
        for j in 0..d_keep {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..d_before {
                for a in 0..d_after {
                    acc += m[(index(b, i, a), index(b, j, a))];
                }
            }
            out[(i, j)] = acc;
        }
    }
    DensityOperator::from_matrix(out, vec![d_keep])
}

/// Partial transpose of a bipartite operator over its second subsystem.
pub fn partial_transpose_second(rho: &DensityOperator) -> Result<ComplexMatrix> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch { context: "partial transpose", expected: 2, found: dims.len() });
    }
    let (da, db) = (dims[0], dims[1]);
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for a in 0..da {
        for b in 0..db {
            for c in 0..da {
                for d in 0..db {
                    out[(a * db + b, c * db + d)] = m[(a * db + d, c * db + b)];
                }
            }
        }
    }
    Ok(out)
}
