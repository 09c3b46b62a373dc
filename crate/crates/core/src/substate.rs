//! Projected substates: compress a state onto per-party index subsets.
//!
//! For index subsets `S_p` the projector is `G = ⊗_p sum_{i in S_p} |i><i|`;
//! the substate is `G rho G^dagger` (or `G |phi>`) written in the compressed
//! basis, and is left unnormalized. Selections are streamed in lexicographic
//! order with the first party varying slowest.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, DimensionVector, PureState, QuantumState};

/// Per-party strictly increasing index subsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubstateSelection {
    indices: Vec<Vec<usize>>,
}

impl SubstateSelection {
    pub fn new(indices: Vec<Vec<usize>>, dims: &DimensionVector) -> Result<Self> {
        let sel = Self { indices };
        sel.check(dims)?;
        Ok(sel)
    }

    fn check(&self, dims: &DimensionVector) -> Result<()> {
        if self.indices.len() != dims.parties() {
            return Err(Error::Index(format!(
                "selection covers {} parties, state has {}",
                self.indices.len(),
                dims.parties()
            )));
        }
        for (p, (set, &d)) in self.indices.iter().zip(dims.dims()).enumerate() {
            if set.len() < 2 {
                return Err(Error::Index(format!("party {p}: selection {set:?} has fewer than 2 levels")));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Index(format!("party {p}: selection {set:?} is not strictly increasing")));
            }
            if set.iter().any(|&i| i >= d) {
                return Err(Error::Index(format!("party {p}: selection {set:?} exceeds dimension {d}")));
            }
        }
        Ok(())
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.indices.iter().map(Vec::len).collect()
    }

    pub fn compressed_dims(&self) -> DimensionVector {
        DimensionVector::new(self.sizes()).expect("sizes are >= 2 and bounded by the parent dims")
    }

    /// Full-space flat indices of the compressed basis, in compressed row-major order.
    pub fn full_indices(&self, dims: &DimensionVector) -> Vec<usize> {
        let strides = dims.strides();
        self.indices.iter().zip(&strides).fold(vec![0usize], |acc, (set, &stride)| {
            acc.iter().flat_map(|&base| set.iter().map(move |&i| base + i * stride)).collect()
        })
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn check_sizes(dims: &DimensionVector, sizes: &[usize]) -> Result<()> {
    if sizes.len() != dims.parties() {
        return Err(Error::Domain(format!("{} subspace sizes for {} parties", sizes.len(), dims.parties())));
    }
    for (p, (&s, &d)) in sizes.iter().zip(dims.dims()).enumerate() {
        if s < 2 || s > d {
            return Err(Error::Domain(format!("party {p}: subspace size {s} outside 2..={d}")));
        }
    }
    Ok(())
}

/// `prod_p binomial(d_p, s_p)`.
pub fn count_substates(dims: &DimensionVector, sizes: &[usize]) -> Result<u64> {
    check_sizes(dims, sizes)?;
    Ok(dims.dims().iter().zip(sizes).map(|(&d, &s)| binomial(d, s)).product())
}

/// Same size `s` for every party.
pub fn uniform_sizes(dims: &DimensionVector, s: usize) -> Vec<usize> {
    vec![s; dims.parties()]
}

/// Lazily enumerates every selection in lexicographic order.
pub fn enumerate_selections(
    dims: &DimensionVector,
    sizes: &[usize],
) -> Result<impl Iterator<Item = SubstateSelection>> {
    check_sizes(dims, sizes)?;
    let per_party: Vec<Vec<Vec<usize>>> =
        dims.dims().iter().zip(sizes).map(|(&d, &s)| (0..d).combinations(s).collect()).collect();
    Ok(per_party
        .into_iter()
        .map(|choices| choices.into_iter())
        .multi_cartesian_product()
        .map(|indices| SubstateSelection { indices }))
}

pub fn project_pure(phi: &PureState, sel: &SubstateSelection) -> Result<PureState> {
    sel.check(phi.dims())?;
    let amps = sel.full_indices(phi.dims()).iter().map(|&i| phi.amplitudes()[i]).collect();
    Ok(PureState::from_raw(sel.compressed_dims(), amps))
}

pub fn project_density(rho: &DensityMatrix, sel: &SubstateSelection) -> Result<DensityMatrix> {
    sel.check(rho.dims())?;
    let idx = sel.full_indices(rho.dims());
    Ok(DensityMatrix::from_raw(sel.compressed_dims(), rho.matrix().select(&idx, &idx)))
}

pub fn project_substate(state: &QuantumState, sel: &SubstateSelection) -> Result<QuantumState> {
    Ok(match state {
        QuantumState::Pure(phi) => QuantumState::Pure(project_pure(phi, sel)?),
        QuantumState::Density(rho) => QuantumState::Density(project_density(rho, sel)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{assert_psd, ComplexMatrix, PSD_TOL};
    use crate::qstate::families::{ggz_family, ghz};
    use crate::qstate::random::random_density;

    fn dims(d: &[usize]) -> DimensionVector {
        DimensionVector::new(d.to_vec()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(count_substates(&dims(&[3, 3, 3]), &[2, 2, 2]).unwrap(), 27);
        assert_eq!(count_substates(&dims(&[2, 2]), &[2, 2]).unwrap(), 1);
        assert_eq!(count_substates(&dims(&[2, 2, 2, 3]), &[2, 2, 2, 2]).unwrap(), 3);
        assert_eq!(count_substates(&dims(&[4, 5, 6, 6]), &[3, 3, 3, 3]).unwrap(), 4 * 10 * 20 * 20);
        assert!(matches!(count_substates(&dims(&[2, 3]), &[3, 2]), Err(Error::Domain(_))));
        assert!(matches!(count_substates(&dims(&[2, 3]), &[1, 2]), Err(Error::Domain(_))));
    }

    #[test]
    fn count_matches_closed_form() {
        // d1 d2 d3 (d1-1)(d2-1)(d3-1) / 8
        for d in [[2, 3, 4], [3, 3, 3], [5, 2, 4]] {
            let closed = d.iter().map(|&x| x * (x - 1)).product::<usize>() / 8;
            assert_eq!(count_substates(&dims(&d), &[2, 2, 2]).unwrap(), closed as u64);
        }
    }

    #[test]
    fn lexicographic_order() {
        let got: Vec<_> = enumerate_selections(&dims(&[3, 2]), &[2, 2]).unwrap().map(|s| s.indices).collect();
        assert_eq!(got, vec![vec![vec![0, 1], vec![0, 1]], vec![vec![0, 2], vec![0, 1]], vec![vec![1, 2], vec![0, 1]]]);
        assert_eq!(enumerate_selections(&dims(&[2, 2, 2]), &[2, 2, 2]).unwrap().count(), 1);
        let all: Vec<_> = enumerate_selections(&dims(&[3, 3, 3]), &[2, 2, 2]).unwrap().collect();
        assert_eq!(all.len(), 27);
        let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), 27);
    }

    #[test]
    fn invalid_selection() {
        let d = dims(&[3, 3]);
        assert!(SubstateSelection::new(vec![vec![0, 3], vec![0, 1]], &d).is_err());
        assert!(SubstateSelection::new(vec![vec![1, 0], vec![0, 1]], &d).is_err());
        assert!(SubstateSelection::new(vec![vec![0, 1]], &d).is_err());
        let sel = SubstateSelection::new(vec![vec![0, 1], vec![0, 1], vec![0, 1]], &dims(&[2, 2, 2])).unwrap();
        assert!(matches!(project_pure(&ghz(2, 3).unwrap(), &sel), Err(Error::Index(_))));
    }

    #[test]
    fn gghz_restrictions() {
        let g = ghz(3, 3).unwrap();
        let d = g.dims().clone();
        let aligned = SubstateSelection::new(vec![vec![0, 1]; 3], &d).unwrap();
        let sub = project_pure(&g, &aligned).unwrap();
        let a = 1.0 / 3f64.sqrt();
        assert!((sub.amplitude(&[0, 0, 0]).re - a).abs() < 1e-15);
        assert!((sub.amplitude(&[1, 1, 1]).re - a).abs() < 1e-15);
        assert!((sub.norm_sqr() - 2.0 / 3.0).abs() < 1e-15);

        let skew = SubstateSelection::new(vec![vec![0, 1], vec![0, 1], vec![0, 2]], &d).unwrap();
        let sub = project_pure(&g, &skew).unwrap();
        assert!((sub.norm_sqr() - 1.0 / 3.0).abs() < 1e-15);
        assert!((sub.amplitude(&[0, 0, 0]).re - a).abs() < 1e-15);
    }

    #[test]
    fn ggz_aligned_projection() {
        let x = 0.4;
        let rho = ggz_family(x).unwrap();
        let sel = SubstateSelection::new(vec![vec![0, 1]; 3], rho.dims()).unwrap();
        let sub = project_density(&rho, &sel).unwrap();
        let ghz3 = ghz(3, 2).unwrap().to_density().into_matrix();
        let expected = ComplexMatrix::identity(8).scale(x / 27.0).add(&ghz3.scale((1.0 - x) * 2.0 / 3.0)).unwrap();
        assert!(sub.matrix().max_abs_diff(&expected) < 1e-15);
        assert!((sub.trace() - (8.0 * x / 27.0 + (1.0 - x) * 2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn trace_bookkeeping_and_psd() {
        let d = dims(&[3, 2, 4]);
        let rho = random_density(&d, 11);
        for sizes in [[2, 2, 2], [3, 2, 3], [2, 2, 4]] {
            let mut total = 0.0;
            for sel in enumerate_selections(&d, &sizes).unwrap() {
                let sub = project_density(&rho, &sel).unwrap();
                assert_psd(sub.matrix(), PSD_TOL).unwrap();
                assert!(sub.matrix().hermitian_deviation() < 1e-15);
                total += sub.trace();
            }
            let mult: u64 = d.dims().iter().zip(sizes).map(|(&dp, s)| binomial(dp - 1, s - 1)).product();
            assert!((total - mult as f64).abs() < 1e-9, "{sizes:?}: {total} vs {mult}");
        }
    }
}
