//! Named states and the two one-parameter mixed families used in the sweeps.

use num_complex::Complex64;

use super::{DensityMatrix, DimensionVector, PureState};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, ZERO};

fn check_unit_interval(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("mixing parameter x = {x} outside [0, 1]")));
    }
    Ok(())
}

/// `(|0...0> + |1...1> + ... + |d-1...d-1>) / sqrt(d)` on `n` parties.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    let dims = DimensionVector::new(vec![d; n])?;
    let amp = c64(1.0 / (d as f64).sqrt(), 0.0);
    let mut amplitudes = vec![ZERO; dims.total()];
    for level in 0..d {
        amplitudes[dims.encode(&vec![level; n])] = amp;
    }
    PureState::new(dims, amplitudes)
}

/// `n`-qubit W state: one excitation shared uniformly.
pub fn w_state(n: usize) -> Result<PureState> {
    let dims = DimensionVector::new(vec![2; n])?;
    let amp = c64(1.0 / (n as f64).sqrt(), 0.0);
    let mut amplitudes = vec![ZERO; dims.total()];
    for party in 0..n {
        amplitudes[1 << (n - 1 - party)] = amp;
    }
    PureState::new(dims, amplitudes)
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn bell() -> PureState {
    ghz(2, 2).expect("two qubits are always valid")
}

/// `(|01> - |10>) / sqrt(2)`.
pub fn singlet() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(DimensionVector::new(vec![2, 2]).unwrap(), vec![ZERO, c64(s, 0.0), c64(-s, 0.0), ZERO]).unwrap()
}

/// `(x/27) I_27 + (1-x) |GGHZ><GGHZ|` on three qutrits.
pub fn ggz_family(x: f64) -> Result<DensityMatrix> {
    check_unit_interval(x)?;
    let gghz = ghz(3, 3)?;
    let noise = ComplexMatrix::identity(27).scale(x / 27.0);
    let matrix = noise.add(&gghz.to_density().matrix().scale(1.0 - x))?;
    DensityMatrix::new(gghz.dims().clone(), matrix)
}

/// How the white-noise term of the 2x2x2x3 family is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseSupport {
    /// `I_24 / 24` on the full space.
    #[default]
    Full,
    /// `I_16 / 16` supported on the fourth-party levels {0, 2}, embedded in 2x2x2x3.
    Embedded16,
}

/// `|psi> = (|0000> + |0012> + |1100> + |1112>) / 2` on dims [2, 2, 2, 3].
pub fn example2_psi() -> PureState {
    let dims = DimensionVector::new(vec![2, 2, 2, 3]).unwrap();
    let mut amplitudes: Vec<Complex64> = vec![ZERO; dims.total()];
    for digits in [[0, 0, 0, 0], [0, 0, 1, 2], [1, 1, 0, 0], [1, 1, 1, 2]] {
        amplitudes[dims.encode(&digits)] = c64(0.5, 0.0);
    }
    PureState::new(dims, amplitudes).unwrap()
}

/// `(1-x) noise + x |psi><psi|` with the noise term chosen by `support`.
pub fn example2_family(x: f64, support: NoiseSupport) -> Result<DensityMatrix> {
    check_unit_interval(x)?;
    let psi = example2_psi();
    let dims = psi.dims().clone();
    let noise = match support {
        NoiseSupport::Full => ComplexMatrix::identity(24).scale((1.0 - x) / 24.0),
        NoiseSupport::Embedded16 => {
            let diag: Vec<f64> = (0..24).map(|i| if dims.decode(i)[3] != 1 { (1.0 - x) / 16.0 } else { 0.0 }).collect();
            ComplexMatrix::from_real_diagonal(&diag)
        }
    };
    let matrix = noise.add(&psi.to_density().matrix().scale(x))?;
    DensityMatrix::new(dims, matrix)
}

/// `p |psi^-><psi^-| + (1-p) I_4 / 4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_unit_interval(p)?;
    let s = singlet();
    let matrix = s.to_density().matrix().scale(p).add(&ComplexMatrix::identity(4).scale((1.0 - p) / 4.0))?;
    DensityMatrix::new(s.dims().clone(), matrix)
}
