//! Exact concurrence of pure multipartite states.
//!
//! Two independent routes are provided:
//!
//! * the subset-purity formula
//!   `C_N = 2^{1-N/2} sqrt((2^N - 2) - sum_alpha tr(rho_alpha^2))`,
//!   summed over every proper nonempty party subset `alpha`;
//! * coefficient-difference sums over pairs of amplitudes, one family of
//!   `|a_r a_h - a_r' a_h'|^2` terms per bipartition (`r'`, `h'` are `r`, `h`
//!   with the indices of one side exchanged).
//!
//! The two agree identically; tests hold them to each other.
//!
//! All evaluators accept sub-normalized vectors. For squared norm `c` the
//! homogeneous value is `c * C(phi / sqrt(c))`, so squared values are
//! polynomials of degree 4 in the amplitudes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, Partition, PureState, NORM_TOL};

/// Radicands above `-RADICAND_ERROR` (relative to the squared norm) are clamped to zero.
pub const RADICAND_ERROR: f64 = 1e-8;

/// Radicands below this (relative) are roundoff and read as exactly zero;
/// otherwise the square root would turn 1e-17 noise into 3e-9 concurrence.
pub const RADICAND_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub squared: f64,
}

impl ConcurrenceValue {
    pub const ZERO: Self = Self { value: 0.0, squared: 0.0 };

    pub fn from_squared(squared: f64) -> Self {
        let squared = squared.max(0.0);
        Self { value: squared.sqrt(), squared }
    }
}

/// Every proper nonempty subset of `0..n`, ordered by bitmask.
pub fn proper_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let full = (1usize << n) - 1;
    (1..full).map(move |mask| (0..n).filter(|p| mask >> p & 1 == 1).collect())
}

/// `2^{2-N} ((2^N - 2) t^2 - purity_sum)` with clamping; `t^2` is the squared
/// norm (or squared trace) setting the scale of roundoff.
fn squared_from_purities(parties: usize, scale_sq: f64, purity_sum: f64) -> Result<f64> {
    let subsets = ((1u64 << parties) - 2) as f64;
    let radicand = subsets * scale_sq - purity_sum;
    if radicand < -RADICAND_ERROR * scale_sq {
        return Err(Error::Numeric(format!("negative concurrence radicand {radicand:e}")));
    }
    if radicand <= RADICAND_FLOOR * scale_sq {
        return Ok(0.0);
    }
    Ok(radicand * 2f64.powi(2 - parties as i32))
}

fn purity_sum(phi: &PureState) -> Result<f64> {
    proper_subsets(phi.parties()).map(|alpha| phi.subset_purity(&alpha)).sum()
}

/// Concurrence of a normalized pure state via subset purities.
pub fn concurrence_pure(phi: &PureState) -> Result<ConcurrenceValue> {
    let norm = phi.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain(format!(
            "concurrence_pure needs a normalized state (squared norm {norm}); use the homogeneous evaluator"
        )));
    }
    Ok(ConcurrenceValue::from_squared(squared_from_purities(phi.parties(), 1.0, purity_sum(phi)?)?))
}

/// `c * C(phi / sqrt(c))` for squared norm `c`; zero vector gives zero.
pub fn homogeneous_concurrence_pure(phi: &PureState) -> Result<ConcurrenceValue> {
    let c = phi.norm_sqr();
    if c == 0.0 {
        return Ok(ConcurrenceValue::ZERO);
    }
    Ok(ConcurrenceValue::from_squared(squared_from_purities(phi.parties(), c * c, purity_sum(phi)?)?))
}

/// Homogeneous concurrence of a rank-one operator `sigma = |v><v|`, evaluated
/// from the purities of its reductions without extracting `v`.
pub fn concurrence_rank_one(sigma: &DensityMatrix) -> Result<ConcurrenceValue> {
    let t = sigma.trace();
    if t <= 0.0 {
        return Ok(ConcurrenceValue::ZERO);
    }
    let sum = proper_subsets(sigma.parties())
        .map(|alpha| sigma.partial_trace(&alpha).map(|r| r.purity()))
        .sum::<Result<f64>>()?;
    Ok(ConcurrenceValue::from_squared(squared_from_purities(sigma.parties(), t * t, sum)?))
}

/// Concurrence with each block of `partition` treated as one party.
pub fn concurrence_partitioned(phi: &PureState, partition: &Partition) -> Result<ConcurrenceValue> {
    if partition.len() < 2 {
        return Err(Error::Partition(format!("partition {partition} needs at least two blocks")));
    }
    concurrence_pure(&phi.merge_parties(partition)?)
}

fn require_parties(phi: &PureState, n: usize) -> Result<()> {
    if phi.parties() != n {
        return Err(Error::Shape(format!("expected a {n}-party state, got {} parties", phi.parties())));
    }
    Ok(())
}

#[inline]
fn diff_sq(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    (a * b - c * d).norm_sqr()
}

/// Tripartite coefficient formula for `C_3^2` (squared moduli).
pub fn c3_squared_coefficients(phi: &PureState) -> Result<f64> {
    require_parties(phi, 3)?;
    let (d1, d2, d3) = (phi.dims().dim(0), phi.dims().dim(1), phi.dims().dim(2));
    let a = |i: usize, j: usize, k: usize| phi.amplitudes()[(i * d2 + j) * d3 + k];
    let mut sum = 0.0;
    for i in 0..d1 {
        for p in 0..d1 {
            for j in 0..d2 {
                for q in 0..d2 {
                    for k in 0..d3 {
                        for t in 0..d3 {
                            let x = a(i, j, k) * a(p, q, t);
                            sum += (x - a(i, j, t) * a(p, q, k)).norm_sqr()
                                + (x - a(i, q, k) * a(p, j, t)).norm_sqr()
                                + (x - a(p, j, k) * a(i, q, t)).norm_sqr();
                        }
                    }
                }
            }
        }
    }
    Ok(0.5 * sum)
}

/// The seven four-party difference families, in the order
/// `{1}, {2}, {3}, {4}, {1,2}, {1,3}, {1,4}` of the reduced state they pair with.
pub fn c4_family_sums(phi: &PureState) -> Result<[f64; 7]> {
    require_parties(phi, 4)?;
    let d = phi.dims().dims();
    let (d1, d2, d3, d4) = (d[0], d[1], d[2], d[3]);
    let amps = phi.amplitudes();
    let a = |i: usize, j: usize, k: usize, r: usize| amps[((i * d2 + j) * d3 + k) * d4 + r];
    let mut s = [0.0; 7];
    for i in 0..d1 {
        for p in 0..d1 {
            for j in 0..d2 {
                for q in 0..d2 {
                    for k in 0..d3 {
                        for t in 0..d3 {
                            for r in 0..d4 {
                                for h in 0..d4 {
                                    let (x, y) = (a(i, j, k, r), a(p, q, t, h));
                                    s[0] += diff_sq(x, y, a(p, j, k, r), a(i, q, t, h));
                                    s[1] += diff_sq(x, y, a(i, q, k, r), a(p, j, t, h));
                                    s[2] += diff_sq(x, y, a(i, j, t, r), a(p, q, k, h));
                                    s[3] += diff_sq(x, y, a(i, j, k, h), a(p, q, t, r));
                                    s[4] += diff_sq(x, y, a(i, j, t, h), a(p, q, k, r));
                                    s[5] += diff_sq(x, y, a(p, j, t, r), a(i, q, k, h));
                                    s[6] += diff_sq(x, y, a(p, j, k, h), a(i, q, t, r));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(s)
}

/// Four-party coefficient formula for `C_4^2`.
pub fn c4_squared_coefficients(phi: &PureState) -> Result<f64> {
    Ok(0.25 * c4_family_sums(phi)?.iter().sum::<f64>())
}

/// General `N`-party coefficient formula: `2^{2-N}` times the sum over all
/// bipartitions `{alpha, complement}` of the swap-difference family for `alpha`.
/// Each bipartition is represented once by the side that omits the last party.
pub fn cn_squared_coefficients(phi: &PureState) -> Result<f64> {
    let n = phi.parties();
    if n < 2 {
        return Err(Error::Shape("coefficient formula needs at least two parties".into()));
    }
    let dims = phi.dims();
    let strides = dims.strides();
    let total = dims.total();
    let digits: Vec<Vec<usize>> = (0..total).map(|i| dims.decode(i)).collect();
    let amps = phi.amplitudes();
    let families: Vec<Vec<usize>> =
        (1..(1usize << (n - 1))).map(|mask| (0..n - 1).filter(|p| mask >> p & 1 == 1).collect()).collect();

    let mut sum = 0.0;
    for family in &families {
        let mut family_sum = 0.0;
        for r in 0..total {
            for h in 0..total {
                // r' takes the family's indices from h, h' takes them from r
                let mut r_swap = r as isize;
                let mut h_swap = h as isize;
                for &p in family {
                    let delta = (digits[h][p] as isize - digits[r][p] as isize) * strides[p] as isize;
                    r_swap += delta;
                    h_swap -= delta;
                }
                family_sum += diff_sq(amps[r], amps[h], amps[r_swap as usize], amps[h_swap as usize]);
            }
        }
        sum += family_sum;
    }
    Ok(sum * 2f64.powi(2 - n as i32))
}

/// Largest deviation across the seven four-party identities
/// `I_0^2 - tr(rho_alpha^2) = (1/2) sum |a a - a a|^2`, with `I_0` the squared norm.
pub fn purity_identity_residual(phi: &PureState) -> Result<f64> {
    let families = c4_family_sums(phi)?;
    let i0 = phi.norm_sqr();
    let subsets: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    let mut worst: f64 = 0.0;
    for (alpha, family) in subsets.iter().zip(families) {
        let lhs = i0 * i0 - phi.subset_purity(alpha)?;
        worst = worst.max((lhs - 0.5 * family).abs());
    }
    Ok(worst)
}
