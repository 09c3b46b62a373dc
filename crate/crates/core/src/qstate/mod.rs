//! Multipartite states: pure amplitude tensors and density matrices tagged
//! with a dimension vector.

mod density;
mod dims;
pub mod families;
pub mod io;
mod pure;
pub mod random;

pub use density::{DensityMatrix, TRACE_TOL};
pub use dims::{DimensionVector, Partition, DEFAULT_DIM_CAP};
pub use pure::{PureState, NORM_TOL};

use crate::error::Result;

/// Either kind of state, as read from a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl QuantumState {
    pub fn dims(&self) -> &DimensionVector {
        match self {
            Self::Pure(phi) => phi.dims(),
            Self::Density(rho) => rho.dims(),
        }
    }

    pub fn parties(&self) -> usize {
        self.dims().parties()
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Pure(phi) => phi.to_density(),
            Self::Density(rho) => rho.clone(),
        }
    }

    pub fn merge_parties(&self, partition: &Partition) -> Result<Self> {
        Ok(match self {
            Self::Pure(phi) => Self::Pure(phi.merge_parties(partition)?),
            Self::Density(rho) => Self::Density(rho.merge_parties(partition)?),
        })
    }
}

impl From<PureState> for QuantumState {
    fn from(phi: PureState) -> Self {
        Self::Pure(phi)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(rho: DensityMatrix) -> Self {
        Self::Density(rho)
    }
}
