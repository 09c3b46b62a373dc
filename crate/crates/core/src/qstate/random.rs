//! Seeded random states and unitaries.
//!
//! Every generator is a pure function of its arguments: the seed feeds a
//! ChaCha8 stream, so outputs are identical across platforms and runs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, DimensionVector, PureState};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng_for_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random `rows x cols` isometry (`rows >= cols`): Gram-Schmidt on a
/// complex Gaussian matrix, which yields the Q factor with positive R diagonal.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = gaussian_matrix(rows, cols, rng);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut v = g.column(c);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &columns {
                let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| columns[c][r])
}

pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    haar_isometry(n, n, rng)
}

/// Haar-uniform pure state (normalized complex Gaussian vector).
pub fn random_pure(dims: &DimensionVector, seed: u64) -> PureState {
    let mut rng = rng_from_seed(seed);
    random_pure_with(dims, &mut rng)
}

pub fn random_pure_with<R: Rng + ?Sized>(dims: &DimensionVector, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..dims.total()).map(|_| complex_gaussian(rng)).collect();
        if let Ok(state) = PureState::normalized_from(dims.clone(), amps) {
            return state;
        }
    }
}

/// Hilbert-Schmidt random density matrix (`G G^dagger / tr`, `G` square Gaussian).
pub fn random_density(dims: &DimensionVector, seed: u64) -> DensityMatrix {
    let n = dims.total();
    random_density_rank(dims, n, seed).expect("full rank is always admissible")
}

/// Induced-measure random density matrix of rank at most `rank` (`G` is `D x rank`).
pub fn random_density_rank(dims: &DimensionVector, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = rng_from_seed(seed);
    random_density_rank_with(dims, rank, &mut rng)
}

pub fn random_density_rank_with<R: Rng + ?Sized>(
    dims: &DimensionVector,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::Domain(format!("rank {rank} outside 1..={n}")));
    }
    let g = gaussian_matrix(n, rank, rng);
    let gg = g.multiply(&g.adjoint())?;
    let trace = gg.trace().re;
    // Exactly Hermitian copy, so validation never trips on roundoff.
    let m = ComplexMatrix::from_fn(n, n, |r, c| if r <= c { gg[(r, c)] / trace } else { gg[(c, r)].conj() / trace });
    DensityMatrix::new(dims.clone(), m)
}

/// Product of independent Haar unitaries, one per party, applied to a pure state.
pub fn random_local_unitaries<R: Rng + ?Sized>(phi: &PureState, rng: &mut R) -> Result<PureState> {
    let mut out = phi.clone();
    for p in 0..phi.parties() {
        let u = haar_unitary(phi.dims().dim(p), rng);
        out = out.apply_local(p, &u)?;
    }
    Ok(out)
}

/// Random permutation of the basis levels of one party, as a unitary matrix.
pub fn level_permutation<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    ComplexMatrix::from_fn(d, d, |r, c| if perm[c] == r { Complex64::new(1.0, 0.0) } else { ZERO })
}
