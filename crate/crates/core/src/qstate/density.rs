use super::dims::{permutation_index_map, split_indices, DimensionVector, Partition};
use super::pure::{check_partition, check_permutation, merged_dims};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HERMITIAN_TOL, PSD_TOL};

/// Slack allowed above unit trace.
pub const TRACE_TOL: f64 = 1e-9;

/// Density operator over a multipartite space. The trace may be below one:
/// projected substates are deliberately left unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: DimensionVector,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity, positivity and `0 < trace <= 1`.
    pub fn new(dims: DimensionVector, matrix: ComplexMatrix) -> Result<Self> {
        let n = dims.total();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix does not match dimensions {dims} (expected {n}x{n})",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if !(trace > 0.0) || trace > 1.0 + TRACE_TOL {
            return Err(Error::Domain(format!("trace {trace} outside (0, 1]")));
        }
        linalg::assert_psd(&matrix, PSD_TOL)?;
        Ok(Self { dims, matrix })
    }

    pub(crate) fn from_raw(dims: DimensionVector, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.parties()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)`; the matrix is Hermitian so this is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// True when `tr(rho^2) = tr(rho)^2` to relative precision `tol`.
    pub fn is_rank_one(&self, tol: f64) -> bool {
        let t = self.trace();
        t > 0.0 && (self.purity() - t * t).abs() <= tol * t * t
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { dims: self.dims.clone(), matrix: self.matrix.scale(k) }
    }

    /// Same operator divided by its trace, or `None` when the trace vanishes.
    pub fn normalized(&self) -> Option<Self> {
        let t = self.trace();
        (t > 0.0).then(|| self.scaled(1.0 / t))
    }

    /// Traces out every party not in `keep`. Kept parties stay in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        self.dims.check_party_set(keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let (kept, rest, dk, _) = split_indices(&self.dims, &keep);
        let n = self.dims.total();
        let mut out = ComplexMatrix::zeros(dk, dk);
        for i in 0..n {
            for j in 0..n {
                if rest[i] == rest[j] {
                    out[(kept[i], kept[j])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(Self { dims: self.dims.project(&keep), matrix: out })
    }

    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.parties())?;
        let map = permutation_index_map(&self.dims, perm);
        let n = map.len();
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| self.matrix[(map[r], map[c])]);
        Ok(Self { dims: self.dims.project(perm), matrix })
    }

    pub fn merge_parties(&self, partition: &Partition) -> Result<Self> {
        check_partition(partition, self.parties())?;
        let permuted = self.permute_parties(&partition.flattened())?;
        Ok(Self { dims: merged_dims(&self.dims, partition), matrix: permuted.matrix })
    }

    /// Conjugates by a local unitary on one party.
    pub fn apply_local_unitary(&self, party: usize, u: &ComplexMatrix) -> Result<Self> {
        if party >= self.parties() || u.rows() != self.dims.dim(party) || !u.is_square() {
            return Err(Error::Dimension(format!("local operator does not fit party {party} of {}", self.dims)));
        }
        let mut full = ComplexMatrix::identity(1);
        for p in 0..self.parties() {
            let factor = if p == party { u.clone() } else { ComplexMatrix::identity(self.dims.dim(p)) };
            full = full.kron(&factor);
        }
        let matrix = full.multiply(&self.matrix)?.multiply(&full.adjoint())?;
        Ok(Self { dims: self.dims.clone(), matrix })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::qstate::PureState;

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            DimensionVector::new(vec![2, 2]).unwrap(),
            vec![c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn to_density_trace_tracks_norm() {
        let rho = bell().to_density();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        let half = bell().scaled(std::f64::consts::FRAC_1_SQRT_2).to_density();
        assert!((half.trace() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn basis_state_density_has_single_entry() {
        let phi = PureState::basis(DimensionVector::new(vec![2, 3]).unwrap(), &[0, 0]).unwrap();
        let rho = phi.to_density();
        let nonzero = rho.matrix().as_slice().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 1);
        assert_eq!(rho.matrix()[(0, 0)], c64(1.0, 0.0));
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let r = bell().to_density().partial_trace(&[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn product_reduction_scales_by_other_trace() {
        let a =
            ComplexMatrix::from_vec(2, 2, vec![c64(0.6, 0.0), c64(0.1, 0.2), c64(0.1, -0.2), c64(0.4, 0.0)]).unwrap();
        let b = ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.1]);
        let rho = DensityMatrix::new(DimensionVector::new(vec![2, 3]).unwrap(), a.kron(&b)).unwrap();
        let r = rho.partial_trace(&[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&a.scale(0.6)) < 1e-15);
    }

    #[test]
    fn bad_keep_sets() {
        let rho = bell().to_density();
        assert!(matches!(rho.partial_trace(&[]), Err(Error::Index(_))));
        assert!(matches!(rho.partial_trace(&[2]), Err(Error::Index(_))));
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let dims = DimensionVector::new(vec![2]).unwrap();
        let neg = ComplexMatrix::from_real_diagonal(&[1.0, -0.1]);
        assert!(matches!(DensityMatrix::new(dims.clone(), neg), Err(Error::NotPsd { .. })));
        let big = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        assert!(matches!(DensityMatrix::new(dims.clone(), big), Err(Error::Domain(_))));
        let skew =
            ComplexMatrix::from_vec(2, 2, vec![c64(0.5, 0.0), c64(0.1, 0.0), c64(0.2, 0.0), c64(0.5, 0.0)]).unwrap();
        assert!(matches!(DensityMatrix::new(dims, skew), Err(Error::NotHermitian { .. })));
    }
}
