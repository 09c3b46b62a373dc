//! Brute-force checks: convex-roof upper estimates, monogamy residuals and
//! numerical inequality suites over random states.
//!
//! Everything here is seeded; trial and sample `k` draw from
//! `rng_for_stream(seed, k)` so results do not depend on thread scheduling.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundOptions, CoefficientMode, SubEvaluator};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, HERMITIAN_TOL};
use crate::pure_concurrence::{
    c3_squared_coefficients, c4_squared_coefficients, cn_squared_coefficients, concurrence_pure,
    homogeneous_concurrence_pure, purity_identity_residual,
};
use crate::qstate::random::{haar_isometry, random_density_rank_with, random_pure_with, rng_for_stream};
use crate::qstate::{DensityMatrix, DimensionVector, PureState};
use crate::substate::{enumerate_selections, project_pure};
use crate::wootters::pair_concurrence;

/// Largest rank the roof search accepts.
pub const MAX_ROOF_RANK: usize = 16;

/// Eigenvalues below this fraction of the trace are dropped.
pub const RANK_CUTOFF: f64 = 1e-10;

const TRACE_TOL: f64 = 1e-8;

/// Weighted pure-state decomposition of a density matrix.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        if members.iter().any(|(p, _)| !(*p > 0.0 && *p <= 1.0)) {
            return Err(Error::Domain("ensemble probabilities must lie in (0, 1]".into()));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("ensemble probabilities sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Builds the ensemble from sub-normalized vectors `psi_j` with `sum |psi_j><psi_j| = rho`.
    pub fn from_vectors(dims: &DimensionVector, vectors: &[Vec<Complex64>]) -> Result<Self> {
        let members = vectors
            .iter()
            .filter_map(|v| {
                let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                (p > 0.0).then(|| PureState::normalized_from(dims.clone(), v.clone()).map(|s| (p, s)))
            })
            .collect::<Result<Vec<_>>>()?;
        // Normalize away the roundoff in the probabilities.
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        Self::new(members.into_iter().map(|(p, s)| (p / total, s)).collect())
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.members[0].1.dims().total();
        self.members.iter().fold(ComplexMatrix::zeros(n, n), |acc, (p, s)| {
            acc.add(&ComplexMatrix::outer(s.amplitudes(), s.amplitudes()).scale(*p)).expect("same shape")
        })
    }

    /// `sum_i p_i C(phi_i)`.
    pub fn average_concurrence(&self) -> Result<f64> {
        self.members.iter().map(|(p, s)| Ok(p * concurrence_pure(s)?.value)).sum()
    }
}

/// `sqrt(lambda_i) e_i` for every eigenvalue above the rank cutoff.
fn eigen_vectors(rho: &DensityMatrix) -> Result<Vec<Vec<Complex64>>> {
    let trace = rho.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::Domain(format!("roof estimate needs a unit-trace state, trace is {trace}")));
    }
    let eig = hermitian_eigen(rho.matrix(), HERMITIAN_TOL)?;
    let vectors: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_CUTOFF * trace)
        .map(|(k, &l)| eig.vector(k).into_iter().map(|a| a * l.sqrt()).collect())
        .collect();
    if vectors.len() > MAX_ROOF_RANK {
        return Err(Error::Size(format!("rank {} exceeds the roof search limit {MAX_ROOF_RANK}", vectors.len())));
    }
    Ok(vectors)
}

/// Trial 0 is the eigen-ensemble; trial `t > 0` mixes it with a Haar isometry of `K x r`, `r <= K <= 2r`.
fn trial_vectors(base: &[Vec<Complex64>], seed: u64, trial: u64) -> Vec<Vec<Complex64>> {
    if trial == 0 {
        return base.to_vec();
    }
    use rand::Rng;
    let r = base.len();
    let n = base[0].len();
    let mut rng = rng_for_stream(seed, trial);
    let k = rng.random_range(r..=2 * r);
    let u = haar_isometry(k, r, &mut rng);
    (0..k)
        .map(|j| {
            let mut psi = vec![Complex64::new(0.0, 0.0); n];
            for (i, w) in base.iter().enumerate() {
                let c = u[(j, i)];
                for (out, a) in psi.iter_mut().zip(w) {
                    *out += c * a;
                }
            }
            psi
        })
        .collect()
}

/// The decomposition drawn for `trial`.
pub fn sampled_ensemble(rho: &DensityMatrix, seed: u64, trial: u64) -> Result<Ensemble> {
    let base = eigen_vectors(rho)?;
    Ensemble::from_vectors(rho.dims(), &trial_vectors(&base, seed, trial))
}

fn vectors_value(dims: &DimensionVector, vectors: &[Vec<Complex64>]) -> Result<f64> {
    vectors.iter().map(|v| Ok(homogeneous_concurrence_pure(&PureState::from_raw(dims.clone(), v.clone()))?.value)).sum()
}

/// Minimum of `sum p_i C(phi_i)` over `trials` sampled decompositions; an upper estimate of the roof.
pub fn convex_roof_upper(rho: &DensityMatrix, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Config("convex_roof_upper needs at least one trial".into()));
    }
    let base = eigen_vectors(rho)?;
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| vectors_value(rho.dims(), &trial_vectors(&base, seed, t)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

fn require_three_qubits(phi: &PureState) -> Result<()> {
    if phi.dims().dims() != [2, 2, 2] {
        return Err(Error::Shape(format!("expected three qubits, got {}", phi.dims())));
    }
    Ok(())
}

/// `min_i [C^2_{i|jk} - C^2_ij - C^2_ik]` for a normalized three-qubit state.
pub fn monogamy_residual(phi: &PureState) -> Result<f64> {
    require_three_qubits(phi)?;
    concurrence_pure(phi)?;
    let rho = phi.to_density();
    let mut pair = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let c = pair_concurrence(&rho, i, j)?;
            pair[i][j] = c * c;
            pair[j][i] = c * c;
        }
    }
    let mut worst = f64::INFINITY;
    for i in 0..3 {
        let one_vs_rest = 2.0 * (1.0 - phi.subset_purity(&[i])?);
        let others: f64 = (0..3).filter(|&j| j != i).map(|j| pair[i][j]).sum();
        worst = worst.min(one_vs_rest - others);
    }
    Ok(worst)
}

/// `C_3^2 - (C_12^2 + C_13^2 + C_23^2)` for a normalized three-qubit state.
pub fn pairwise_relaxation_margin(phi: &PureState) -> Result<f64> {
    require_three_qubits(phi)?;
    let c3 = concurrence_pure(phi)?.squared;
    Ok(c3 - bounds::pairwise_squared_sum(&phi.to_density())?)
}

/// `C^2(phi) - sum_sel C_hom^2(sub) / denominator` with sizes `sizes`.
pub fn projection_margin(phi: &PureState, sizes: &[usize], denominator: f64) -> Result<f64> {
    let exact = concurrence_pure(phi)?.squared;
    let sum = enumerate_selections(phi.dims(), sizes)?
        .map(|sel| Ok(homogeneous_concurrence_pure(&project_pure(phi, &sel)?)?.squared))
        .sum::<Result<f64>>()?;
    Ok(exact - sum / denominator)
}

/// Qubit-substate projection inequality (any number of parties).
pub fn qubit_projection_margin(phi: &PureState) -> Result<f64> {
    let denom: f64 = phi.dims().dims().iter().map(|&d| (d - 1) as f64).product();
    projection_margin(phi, &vec![2; phi.parties()], denom)
}

/// Four-party `s`-level projection inequality; dims must be ascending.
pub fn s_level_projection_margin(phi: &PureState, s: usize) -> Result<f64> {
    let dims = phi.dims().dims();
    if phi.parties() != 4 || dims.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Shape(format!("expected four parties with ascending dims, got {}", phi.dims())));
    }
    projection_margin(phi, &[s; 4], bounds::thm4_denominator(dims, s) as f64)
}

/// Direction of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Worst value must be `>= -tolerance`.
    Margin,
    /// Worst value must be `<= tolerance`.
    Deviation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub configuration: String,
    pub samples: usize,
    pub kind: CheckKind,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, configuration: String, samples: usize, kind: CheckKind, worst: f64, tolerance: f64) -> Self {
        let passed = match kind {
            CheckKind::Margin => worst >= -tolerance,
            CheckKind::Deviation => worst <= tolerance,
        };
        Self { name: name.into(), configuration, samples, kind, worst, tolerance, passed }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn find(&self, name: &str, configuration: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name && c.configuration == configuration)
    }
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x")
}

/// Derives an independent seed per configuration so suites do not share samples.
fn config_seed(seed: u64, tag: &str) -> u64 {
    tag.bytes().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Worst value of `f` over `samples` Haar-random pure states, taking min (margins) or max (deviations).
fn sample_pure<F>(dims: &[usize], samples: usize, seed: u64, kind: CheckKind, f: F) -> Result<f64>
where
    F: Fn(&PureState) -> Result<f64> + Sync,
{
    let d = DimensionVector::new(dims.to_vec())?;
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|k| f(&random_pure_with(&d, &mut rng_for_stream(seed, k))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(match kind {
        CheckKind::Margin => values.into_iter().fold(f64::INFINITY, f64::min),
        CheckKind::Deviation => values.into_iter().fold(0.0, f64::max),
    })
}

pub const INEQUALITY_TOL: f64 = 1e-8;
pub const FORMULA_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-10;
pub const SANDWICH_TOL: f64 = 1e-6;

/// Coefficient formulas against the subset-purity formula, and the four-party purity identities.
pub fn pure_formula_suite(seed: u64, samples: usize) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let seed = config_seed(seed, "pure-formulas");
    let deviation = |phi: &PureState, formula: fn(&PureState) -> Result<f64>| -> Result<f64> {
        Ok((formula(phi)? - concurrence_pure(phi)?.squared).abs())
    };
    let cases: [(&str, &[usize], fn(&PureState) -> Result<f64>); 6] = [
        ("three-party-coefficients", &[2, 2, 2], c3_squared_coefficients),
        ("three-party-coefficients", &[3, 3, 3], c3_squared_coefficients),
        ("four-party-coefficients", &[2, 2, 2, 2], c4_squared_coefficients),
        ("four-party-coefficients", &[2, 2, 2, 3], c4_squared_coefficients),
        ("n-party-coefficients", &[2, 2, 2, 2, 2], cn_squared_coefficients),
        ("n-party-coefficients", &[2, 3, 3], cn_squared_coefficients),
    ];
    for (i, (name, dims, formula)) in cases.iter().enumerate() {
        let worst = sample_pure(dims, samples, seed.wrapping_add(i as u64), CheckKind::Deviation, |phi| {
            deviation(phi, *formula)
        })?;
        report.checks.push(CheckResult::new(name, dims_label(dims), samples, CheckKind::Deviation, worst, FORMULA_TOL));
    }
    for (i, dims) in [[2usize, 2, 2, 2], [2, 2, 2, 3]].iter().enumerate() {
        let worst = sample_pure(
            dims,
            samples,
            seed.wrapping_add(100 + i as u64),
            CheckKind::Deviation,
            purity_identity_residual,
        )?;
        report.checks.push(CheckResult::new(
            "purity-identities",
            dims_label(dims),
            samples,
            CheckKind::Deviation,
            worst,
            IDENTITY_TOL,
        ));
    }
    Ok(report)
}

/// Monogamy residual and the pairwise relaxation of `C_3^2` on random three-qubit states.
pub fn monogamy_suite(seed: u64, samples: usize) -> Result<ValidationReport> {
    let seed = config_seed(seed, "monogamy");
    let mut report = ValidationReport::default();
    let worst = sample_pure(&[2, 2, 2], samples, seed, CheckKind::Margin, monogamy_residual)?;
    report.checks.push(CheckResult::new("monogamy", "2x2x2".into(), samples, CheckKind::Margin, worst, INEQUALITY_TOL));
    let worst = sample_pure(&[2, 2, 2], samples, seed.wrapping_add(1), CheckKind::Margin, pairwise_relaxation_margin)?;
    report.checks.push(CheckResult::new(
        "pairwise-relaxation",
        "2x2x2".into(),
        samples,
        CheckKind::Margin,
        worst,
        INEQUALITY_TOL,
    ));
    Ok(report)
}

/// Qubit-substate projection inequalities (three-party and bipartite) and the `s`-level four-party one.
pub fn projection_suite(seed: u64, samples: usize) -> Result<ValidationReport> {
    let seed = config_seed(seed, "projections");
    let mut report = ValidationReport::default();
    let qubit_cases: [(&str, &[usize]); 5] = [
        ("tripartite-projection", &[3, 3, 3]),
        ("tripartite-projection", &[2, 3, 3]),
        ("tripartite-projection", &[2, 3, 4]),
        ("bipartite-projection", &[3, 4]),
        ("bipartite-projection", &[3, 3]),
    ];
    for (i, (name, dims)) in qubit_cases.iter().enumerate() {
        let worst =
            sample_pure(dims, samples, seed.wrapping_add(i as u64), CheckKind::Margin, qubit_projection_margin)?;
        report.checks.push(CheckResult::new(name, dims_label(dims), samples, CheckKind::Margin, worst, INEQUALITY_TOL));
    }
    let s_cases: [(&[usize], usize); 4] =
        [(&[2, 2, 2, 3], 2), (&[3, 3, 3, 3], 2), (&[3, 3, 3, 3], 3), (&[2, 3, 3, 3], 2)];
    for (i, (dims, s)) in s_cases.iter().enumerate() {
        let worst = sample_pure(dims, samples, seed.wrapping_add(10 + i as u64), CheckKind::Margin, |phi| {
            s_level_projection_margin(phi, *s)
        })?;
        report.checks.push(CheckResult::new(
            "s-level-projection",
            format!("{} s={s}", dims_label(dims)),
            samples,
            CheckKind::Margin,
            worst,
            INEQUALITY_TOL,
        ));
    }
    Ok(report)
}

/// Monogamy and projection inequalities together.
pub fn inequality_suite(seed: u64, samples: usize) -> Result<ValidationReport> {
    let mut report = monogamy_suite(seed, samples)?;
    report.extend(projection_suite(seed, samples)?);
    Ok(report)
}

/// An evaluator paired with the dimensions it is tested on.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichConfig {
    pub label: String,
    pub dims: Vec<usize>,
    pub evaluate: SandwichEvaluator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SandwichEvaluator {
    Thm1,
    Thm2(CoefficientMode),
    Thm3,
    Thm4 { s: usize, sub_evaluator: SubEvaluator },
}

impl SandwichConfig {
    /// thm1 on 2x2x2 and 3x3x3, thm2 in both modes on four qubits, thm4 (s = 2) on 2x2x2x3, thm3 on five qubits.
    pub fn standard() -> Vec<Self> {
        let cfg = |label: &str, dims: &[usize], evaluate| Self { label: label.into(), dims: dims.to_vec(), evaluate };
        vec![
            cfg("thm1 2x2x2", &[2, 2, 2], SandwichEvaluator::Thm1),
            cfg("thm1 3x3x3", &[3, 3, 3], SandwichEvaluator::Thm1),
            cfg("thm2-conservative 2x2x2x2", &[2, 2, 2, 2], SandwichEvaluator::Thm2(CoefficientMode::Conservative)),
            cfg("thm2-paper 2x2x2x2", &[2, 2, 2, 2], SandwichEvaluator::Thm2(CoefficientMode::Paper)),
            cfg("thm4-s2 2x2x2x3", &[2, 2, 2, 3], SandwichEvaluator::Thm4 { s: 2, sub_evaluator: SubEvaluator::Thm2 }),
            cfg("thm3 2x2x2x2x2", &[2, 2, 2, 2, 2], SandwichEvaluator::Thm3),
        ]
    }

    pub fn bound(&self, rho: &DensityMatrix) -> Result<f64> {
        let mut options = BoundOptions::default();
        let report = match self.evaluate {
            SandwichEvaluator::Thm1 => bounds::thm1_bound(rho, &options)?,
            SandwichEvaluator::Thm2(mode) => {
                options.coefficient_mode = mode;
                bounds::thm2_bound(rho, &options)?
            }
            SandwichEvaluator::Thm3 => bounds::thm3_bound(rho, &options)?,
            SandwichEvaluator::Thm4 { s, sub_evaluator } => {
                options.sub_evaluator = sub_evaluator;
                bounds::thm4_bound(rho, s, &options)?
            }
        };
        Ok(report.bound)
    }
}

/// Mixed test states have rank 2, 3 or 4 so the roof search stays within its rank limit.
pub fn sandwich_state(dims: &DimensionVector, seed: u64, sample: u64) -> Result<DensityMatrix> {
    let rank = 2 + (sample % 3) as usize;
    random_density_rank_with(dims, rank, &mut rng_for_stream(seed, sample))
}

/// Worst `roof_upper - bound` over `samples` random mixed states.
pub fn sandwich_margin(config: &SandwichConfig, samples: usize, trials: usize, seed: u64) -> Result<f64> {
    let dims = DimensionVector::new(config.dims.clone())?;
    let seed = config_seed(seed, &config.label);
    let margins = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let rho = sandwich_state(&dims, seed, k)?;
            Ok(convex_roof_upper(&rho, trials, seed.wrapping_add(k))? - config.bound(&rho)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(margins.into_iter().fold(f64::INFINITY, f64::min))
}

pub fn sandwich_suite(seed: u64, samples: usize, trials: usize) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for config in SandwichConfig::standard() {
        let worst = sandwich_margin(&config, samples, trials, seed)?;
        report.checks.push(CheckResult::new("sandwich", config.label, samples, CheckKind::Margin, worst, SANDWICH_TOL));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::families::{ghz, w_state};
    use crate::qstate::random::{random_density_rank, random_pure};

    fn dims(d: &[usize]) -> DimensionVector {
        DimensionVector::new(d.to_vec()).unwrap()
    }

    #[test]
    fn roof_of_pure_state_is_exact() {
        let phi = random_pure(&dims(&[2, 3, 2]), 4);
        let exact = concurrence_pure(&phi).unwrap().value;
        for trials in [1, 20] {
            let roof = convex_roof_upper(&phi.to_density(), trials, 9).unwrap();
            assert!((roof - exact).abs() < 1e-9, "{roof} vs {exact}");
        }
    }

    #[test]
    fn diagonal_product_mixture_is_zero() {
        let rho = DensityMatrix::new(
            dims(&[2, 2, 2]),
            ComplexMatrix::from_real_diagonal(&[0.3, 0.0, 0.2, 0.0, 0.0, 0.1, 0.0, 0.4]),
        )
        .unwrap();
        let v = convex_roof_upper(&rho, 10, 1).unwrap();
        assert!(v.abs() < 1e-10, "{v}");
    }

    #[test]
    fn roof_is_a_running_minimum() {
        let rho = random_density_rank(&dims(&[2, 2, 2]), 3, 5).unwrap();
        let few = convex_roof_upper(&rho, 1, 3).unwrap();
        let many = convex_roof_upper(&rho, 500, 3).unwrap();
        assert!(many <= few);
        assert_eq!(many, convex_roof_upper(&rho, 500, 3).unwrap());
    }

    #[test]
    fn sampled_ensembles_reconstruct() {
        let rho = random_density_rank(&dims(&[2, 3]), 3, 2).unwrap();
        for trial in 0..5 {
            let e = sampled_ensemble(&rho, 17, trial).unwrap();
            assert!(e.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
            let total: f64 = e.members().iter().map(|(p, _)| p).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn high_rank_is_rejected() {
        let rho = crate::qstate::random::random_density(&dims(&[3, 3, 2]), 1);
        assert!(matches!(convex_roof_upper(&rho, 1, 0), Err(Error::Size(_))));
    }

    #[test]
    fn monogamy_reference_states() {
        let g = ghz(3, 2).unwrap();
        assert!((monogamy_residual(&g).unwrap() - 1.0).abs() < 1e-10);
        assert!(monogamy_residual(&w_state(3).unwrap()).unwrap().abs() < 1e-9);
        let product = PureState::basis(dims(&[2, 2, 2]), &[0, 1, 0]).unwrap();
        assert!(monogamy_residual(&product).unwrap().abs() < 1e-12);
        assert!(matches!(monogamy_residual(&ghz(3, 3).unwrap()), Err(Error::Shape(_))));
        assert!((pairwise_relaxation_margin(&g).unwrap() - 1.5).abs() < 1e-10);
    }

    #[test]
    fn projection_margins_trivial_cases() {
        let product = PureState::basis(dims(&[3, 3, 3]), &[0, 2, 1]).unwrap();
        assert!(qubit_projection_margin(&product).unwrap().abs() < 1e-12);
        let phi = random_pure(&dims(&[3, 3, 3, 3]), 2);
        assert!(s_level_projection_margin(&phi, 3).unwrap().abs() < 1e-10);
        assert!(s_level_projection_margin(&random_pure(&dims(&[3, 2, 2, 2]), 1), 2).is_err());
    }

    #[test]
    fn small_suites_pass() {
        assert!(monogamy_suite(1, 20).unwrap().passed());
        assert!(projection_suite(1, 3).unwrap().passed());
        let formulas = pure_formula_suite(1, 3).unwrap();
        assert!(formulas.passed(), "{formulas:?}");
    }

    #[test]
    fn ensemble_validation() {
        let phi = random_pure(&dims(&[2, 2]), 1);
        assert!(Ensemble::new(vec![(0.5, phi.clone())]).is_err());
        let e = Ensemble::new(vec![(1.0, phi.clone())]).unwrap();
        assert!((e.average_concurrence().unwrap() - concurrence_pure(&phi).unwrap().value).abs() < 1e-15);
    }
}
