//! Two-qubit concurrence for unnormalized density operators.
//!
//! `C(rho) = max(0, l1 - l2 - l3 - l4)` where `l_i` are the descending square
//! roots of the eigenvalues of `rho * rho~`, with the spin flip
//! `rho~ = (Y x Y) rho* (Y x Y)`. The eigenvalues are taken from the Hermitian
//! operator `sqrt(rho) rho~ sqrt(rho)`, which has the same spectrum.
//! The kernel is positively homogeneous: `C(c rho) = c C(rho)`.

use crate::error::{Error, Result};
use crate::linalg::{self, c64, ComplexMatrix, HERMITIAN_TOL, PSD_TOL, ZERO};
use crate::pure_concurrence::RADICAND_FLOOR;
use crate::qstate::DensityMatrix;

/// Validated 4x4 two-qubit operator; the zero matrix is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

impl TwoQubitState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::Shape(format!(
                "two-qubit operator must be 4x4, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if trace > 1.0 + crate::qstate::TRACE_TOL {
            return Err(Error::Domain(format!("trace {trace} exceeds 1")));
        }
        linalg::assert_psd(&matrix, PSD_TOL)?;
        Ok(Self { matrix })
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dims().dims() != [2, 2] {
            return Err(Error::Shape(format!("expected a 2x2 two-qubit state, got {}", rho.dims())));
        }
        Self::new(rho.matrix().clone())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// `Y x Y` in the computational basis |00>, |01>, |10>, |11>.
fn sigma_y_sigma_y() -> ComplexMatrix {
    let one = c64(1.0, 0.0);
    let minus = c64(-1.0, 0.0);
    ComplexMatrix::from_fn(4, 4, |r, c| match (r, c) {
        (0, 3) | (3, 0) => minus,
        (1, 2) | (2, 1) => one,
        _ => ZERO,
    })
}

pub fn spin_flip(rho: &TwoQubitState) -> TwoQubitState {
    let yy = sigma_y_sigma_y();
    let flipped = yy.multiply(&rho.matrix.conj()).and_then(|m| m.multiply(&yy)).expect("4x4 shapes always agree");
    TwoQubitState { matrix: flipped }
}

pub fn concurrence_two_qubit(rho: &TwoQubitState) -> Result<f64> {
    let trace = rho.trace();
    if rho.matrix.is_zero() || trace <= 0.0 {
        return Ok(0.0);
    }
    let root = linalg::psd_sqrt(&rho.matrix)?;
    let flipped = spin_flip(rho);
    let r = root.multiply(&flipped.matrix)?.multiply(&root)?;
    let r = ComplexMatrix::from_fn(4, 4, |i, j| (r[(i, j)] + r[(j, i)].conj()) * 0.5);
    let mu = linalg::hermitian_spectrum(&r, HERMITIAN_TOL)?.into_vec();
    let floor = -PSD_TOL * trace * trace;
    if let Some(&bad) = mu.iter().find(|&&m| m < floor) {
        return Err(Error::Numeric(format!("rho * rho~ has eigenvalue {bad:e}")));
    }
    // Eigenvalues at the roundoff level are zero; their square roots would not be.
    let noise = RADICAND_FLOOR * trace * trace;
    let l: Vec<f64> = mu.iter().map(|&m| if m <= noise { 0.0 } else { m.sqrt() }).collect();
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Validates a raw 4x4 operator and returns its concurrence.
pub fn concurrence_of_matrix(m: &ComplexMatrix) -> Result<f64> {
    concurrence_two_qubit(&TwoQubitState::new(m.clone())?)
}

/// Concurrence of the two-party reduction of `rho` onto `(i, j)`; both parties must be qubits.
pub fn pair_concurrence(rho: &DensityMatrix, i: usize, j: usize) -> Result<f64> {
    let reduced = rho.partial_trace(&[i, j])?;
    concurrence_two_qubit(&TwoQubitState::from_density(&reduced)?)
}
