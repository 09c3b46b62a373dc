use num_complex::Complex64;

use super::density::DensityMatrix;
use super::dims::{permutation_index_map, split_indices, DimensionVector, Partition};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

/// Slack allowed above unit norm.
pub const NORM_TOL: f64 = 1e-9;

/// Pure state vector, possibly sub-normalized (squared norm in (0, 1]).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: DimensionVector,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: DimensionVector, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::Dimension(format!(
                "{} amplitudes supplied for dimensions {dims} (expected {})",
                amplitudes.len(),
                dims.total()
            )));
        }
        if let Some(pos) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric(format!("non-finite amplitude at index {pos}")));
        }
        let state = Self { dims, amplitudes };
        let n = state.norm_sqr();
        if n <= 0.0 {
            return Err(Error::Domain("pure state has zero norm".into()));
        }
        if n > 1.0 + NORM_TOL {
            return Err(Error::Domain(format!("squared norm {n} exceeds 1")));
        }
        Ok(state)
    }

    /// Builds a normalized state from arbitrary nonzero amplitudes.
    pub fn normalized_from(dims: DimensionVector, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(dims, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Unvalidated constructor used for projected substates, which may vanish.
    pub(crate) fn from_raw(dims: DimensionVector, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(dims.total(), amplitudes.len());
        Self { dims, amplitudes }
    }

    /// Computational basis state `|digits>`.
    pub fn basis(dims: DimensionVector, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.parties() || digits.iter().zip(dims.dims()).any(|(&i, &d)| i >= d) {
            return Err(Error::Index(format!("basis label {digits:?} invalid for dimensions {dims}")));
        }
        let mut amplitudes = vec![ZERO; dims.total()];
        amplitudes[dims.encode(digits)] = Complex64::new(1.0, 0.0);
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.parties()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, digits: &[usize]) -> Complex64 {
        self.amplitudes[self.dims.encode(digits)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|z| *z == ZERO)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { dims: self.dims.clone(), amplitudes: self.amplitudes.iter().map(|z| z * k).collect() }
    }

    /// The unit-norm state along this vector, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr();
        (n > 0.0).then(|| self.scaled(1.0 / n.sqrt()))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_raw(self.dims.clone(), ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }

    /// Amplitudes reshaped into a `d_keep x d_rest` matrix.
    fn reshape(&self, keep: &[usize]) -> ComplexMatrix {
        let (kept, rest, dk, dr) = split_indices(&self.dims, keep);
        let mut m = ComplexMatrix::zeros(dk, dr);
        for (i, z) in self.amplitudes.iter().enumerate() {
            m[(kept[i], rest[i])] = *z;
        }
        m
    }

    /// Reduced density matrix on `keep` (sorted into original party order).
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        self.dims.check_party_set(keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let m = self.reshape(&keep);
        m.multiply(&m.adjoint())
    }

    /// `tr(rho_alpha^2)` for the reduction onto `keep`, homogeneous of degree 4.
    pub fn subset_purity(&self, keep: &[usize]) -> Result<f64> {
        self.dims.check_party_set(keep)?;
        let m = self.reshape(keep);
        // rho_alpha = M M^dagger and M^dagger M share their nonzero spectrum.
        let gram = if m.rows() <= m.cols() { m.multiply(&m.adjoint())? } else { m.adjoint().multiply(&m)? };
        Ok(gram.as_slice().iter().map(|z| z.norm_sqr()).sum())
    }

    /// Reorders parties so that new party `k` is old party `perm[k]`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.parties())?;
        let map = permutation_index_map(&self.dims, perm);
        Ok(Self { dims: self.dims.project(perm), amplitudes: map.iter().map(|&old| self.amplitudes[old]).collect() })
    }

    /// Treats each block of `partition` as a single party.
    pub fn merge_parties(&self, partition: &Partition) -> Result<Self> {
        check_partition(partition, self.parties())?;
        let permuted = self.permute_parties(&partition.flattened())?;
        Ok(Self { dims: merged_dims(&self.dims, partition), amplitudes: permuted.amplitudes })
    }

    /// Applies a local operator to one party.
    pub fn apply_local(&self, party: usize, op: &ComplexMatrix) -> Result<Self> {
        if party >= self.parties() || op.rows() != self.dims.dim(party) || op.cols() != self.dims.dim(party) {
            return Err(Error::Dimension(format!("local operator does not fit party {party} of {}", self.dims)));
        }
        let strides = self.dims.strides();
        let stride = strides[party];
        let d = self.dims.dim(party);
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (index, slot) in out.iter_mut().enumerate() {
            let digit = (index / stride) % d;
            let base = index - digit * stride;
            *slot = (0..d).map(|k| op[(digit, k)] * self.amplitudes[base + k * stride]).sum();
        }
        Ok(Self { dims: self.dims.clone(), amplitudes: out })
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.dims().to_vec();
        dims.extend_from_slice(other.dims.dims());
        let dims = DimensionVector::new(dims)?;
        let amplitudes = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        Ok(Self { dims, amplitudes })
    }
}

pub(crate) fn check_permutation(perm: &[usize], parties: usize) -> Result<()> {
    let mut seen = vec![false; parties];
    if perm.len() != parties {
        return Err(Error::Index(format!("permutation {perm:?} has wrong length for {parties} parties")));
    }
    for &p in perm {
        if p >= parties || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Index(format!("{perm:?} is not a permutation of {parties} parties")));
        }
    }
    Ok(())
}

pub(crate) fn check_partition(partition: &Partition, parties: usize) -> Result<()> {
    if partition.parties() != parties {
        return Err(Error::Partition(format!(
            "partition {partition} covers {} parties, state has {parties}",
            partition.parties()
        )));
    }
    Partition::new(partition.blocks().to_vec(), parties).map(|_| ())
}

pub(crate) fn merged_dims(dims: &DimensionVector, partition: &Partition) -> DimensionVector {
    DimensionVector::unchecked(partition.blocks().iter().map(|b| b.iter().map(|&p| dims.dim(p)).product()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn dims(d: &[usize]) -> DimensionVector {
        DimensionVector::new(d.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_amplitudes() {
        assert!(matches!(PureState::new(dims(&[2, 2]), vec![ZERO; 3]), Err(Error::Dimension(_))));
        assert!(matches!(PureState::new(dims(&[2]), vec![ZERO; 2]), Err(Error::Domain(_))));
        assert!(matches!(PureState::new(dims(&[2]), vec![c64(1.0, 0.0), c64(0.5, 0.0)]), Err(Error::Domain(_))));
    }

    #[test]
    fn merge_groups_dimensions() {
        let phi = PureState::normalized_from(dims(&[2, 2, 3]), (0..12).map(|k| c64(k as f64, 1.0)).collect()).unwrap();
        let merged = phi.merge_parties(&Partition::new(vec![vec![0], vec![1, 2]], 3).unwrap()).unwrap();
        assert_eq!(merged.dims().dims(), &[2, 6]);
        assert_eq!(merged.amplitudes(), phi.amplitudes());
        let same = phi.merge_parties(&Partition::singletons(3)).unwrap();
        assert_eq!(same, phi);
    }

    #[test]
    fn permutation_roundtrip() {
        let phi = PureState::normalized_from(dims(&[2, 3, 4]), (0..24).map(|k| c64(k as f64, -(k as f64))).collect())
            .unwrap();
        let perm = [2, 0, 1];
        let inverse = [1, 2, 0];
        let p = phi.permute_parties(&perm).unwrap();
        assert_eq!(p.dims().dims(), &[4, 2, 3]);
        assert_eq!(p.amplitude(&[3, 1, 2]), phi.amplitude(&[1, 2, 3]));
        assert_eq!(p.permute_parties(&inverse).unwrap(), phi);
    }

    #[test]
    fn reduced_of_product_basis_is_pure() {
        let phi = PureState::basis(dims(&[2, 3]), &[1, 2]).unwrap();
        let r = phi.reduced(&[1]).unwrap();
        assert_eq!(r, ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0]));
        assert!((phi.subset_purity(&[0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn local_operator_acts_on_single_party() {
        let phi = PureState::basis(dims(&[2, 3]), &[0, 1]).unwrap();
        let flip = ComplexMatrix::from_fn(2, 2, |r, c| if r != c { c64(1.0, 0.0) } else { ZERO });
        let out = phi.apply_local(0, &flip).unwrap();
        assert_eq!(out, PureState::basis(dims(&[2, 3]), &[1, 1]).unwrap());
    }
}
