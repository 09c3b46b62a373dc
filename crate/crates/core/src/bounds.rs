//! Projection-based lower bounds of concurrence.
//!
//! Every evaluator compresses the input onto product subspaces, evaluates a
//! computable quantity on each (unnormalized) substate and aggregates:
//!
//! | evaluator | parties | substates | per-substate quantity |
//! |-----------|---------|-----------|------------------------|
//! | [`thm1_bound`] | 3 | 2x2x2 | sum of pairwise two-qubit `C_mn^2` |
//! | [`thm2_bound`] | 4 | 2x2x2 of tripartite merges, 2x2 of bipartite merges | pairwise sums / two-qubit `C^2` |
//! | [`thm3_bound`] | N >= 5 | 2x...x2 | pairwise sums |
//! | [`thm4_bound`] | 4 | s x s x s x s | pluggable lower bound of `C^2` |
//!
//! Substate quantities are degree-1 homogeneous in the operator and are never
//! renormalized before evaluation, except where [`SubEvaluator::Thm2`]
//! explicitly rescales by the trace.
//!
//! The three-party concurrences that the four-party bound needs are convex
//! roofs; they are replaced by the pairwise relaxation
//! `C_3^2 >= C_12^2 + C_13^2 + C_23^2`, which still lower-bounds them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pure_concurrence::concurrence_rank_one;
use crate::qstate::{DensityMatrix, DimensionVector, Partition};
use crate::substate::{binomial, count_substates, enumerate_selections, project_density, SubstateSelection};
use crate::wootters::{concurrence_two_qubit, pair_concurrence, TwoQubitState};

/// Inputs to the theorems must have unit trace to this tolerance.
pub const INPUT_TRACE_TOL: f64 = 1e-8;

/// Relative tolerance for treating a substate as rank one in the pure-exact evaluator.
pub const RANK_ONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Thm1,
    Thm2,
    Thm3,
    Thm4,
    Corollary1,
}

/// Denominators used for merged two-party blocks in the four-party bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientMode {
    /// `d_a + d_b - 1` as printed.
    Paper,
    /// `d_a * d_b - 1`, what the projection inequality gives for a merged block.
    #[default]
    Conservative,
}

impl CoefficientMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Paper => "paper",
            Self::Conservative => "conservative",
        }
    }
}

/// Lower bound of `C^2` applied to each `s x s x s x s` substate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubEvaluator {
    /// Exact homogeneous pure concurrence for rank-one substates; others fall back to `Thm2`.
    PureExact,
    /// Four-party bound on `sigma / tr(sigma)`, squared and rescaled by `tr(sigma)^2`.
    #[default]
    Thm2,
    /// Contributes nothing (baseline).
    Zero,
}

impl SubEvaluator {
    pub fn name(self) -> &'static str {
        match self {
            Self::PureExact => "pure-exact",
            Self::Thm2 => "thm2",
            Self::Zero => "zero",
        }
    }
}

impl std::str::FromStr for SubEvaluator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure-exact" => Ok(Self::PureExact),
            "thm2" => Ok(Self::Thm2),
            "zero" => Ok(Self::Zero),
            other => Err(Error::Config(format!("unknown sub-evaluator {other:?}"))),
        }
    }
}

/// How per-substate terms are summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Parallel evaluation, summed sequentially in enumeration order (bit-reproducible).
    #[default]
    Deterministic,
    /// Parallel tree reduction; may differ from `Deterministic` in the last bits.
    Fast,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BoundOptions {
    pub coefficient_mode: CoefficientMode,
    pub sub_evaluator: SubEvaluator,
    pub reduction: Reduction,
    /// Lets the N-qubit aggregation run on four parties.
    pub allow_thm3_four_parties: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub theorem: TheoremId,
    pub substates_evaluated: u64,
    pub coefficient_mode: Option<CoefficientMode>,
    pub sub_evaluator: Option<SubEvaluator>,
    pub subspace_size: Option<usize>,
    /// Party order used internally (`new party k = old party party_order[k]`).
    pub party_order: Option<Vec<usize>>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(theorem: TheoremId, squared: f64, substates_evaluated: u64) -> Self {
        Self {
            bound: squared.max(0.0).sqrt(),
            theorem,
            substates_evaluated,
            coefficient_mode: None,
            sub_evaluator: None,
            subspace_size: None,
            party_order: None,
            notes: Vec::new(),
        }
    }

    pub fn squared(&self) -> f64 {
        self.bound * self.bound
    }
}

fn sum_terms<T, F>(items: &[T], reduction: Reduction, f: F) -> Result<f64>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    match reduction {
        Reduction::Deterministic => {
            let terms = items.par_iter().map(&f).collect::<Result<Vec<f64>>>()?;
            Ok(terms.iter().sum())
        }
        Reduction::Fast => items.par_iter().map(&f).try_reduce(|| 0.0, |a, b| Ok(a + b)),
    }
}

fn require_parties(rho: &DensityMatrix, ok: impl Fn(usize) -> bool, what: &str) -> Result<()> {
    if !ok(rho.parties()) {
        return Err(Error::Inapplicable(format!("{what}; input has {} parties", rho.parties())));
    }
    Ok(())
}

fn require_unit_trace(rho: &DensityMatrix) -> Result<()> {
    let t = rho.trace();
    if (t - 1.0).abs() > INPUT_TRACE_TOL {
        return Err(Error::Domain(format!("bound evaluators need a unit-trace state, trace is {t}")));
    }
    Ok(())
}

fn selections(dims: &DimensionVector, sizes: &[usize]) -> Result<Vec<SubstateSelection>> {
    Ok(enumerate_selections(dims, sizes)?.collect())
}

/// `sum_{i<j} C_ij^2` over the two-qubit reductions of an all-qubit operator.
pub fn pairwise_squared_sum(sub: &DensityMatrix) -> Result<f64> {
    if sub.dims().dims().iter().any(|&d| d != 2) {
        return Err(Error::Shape(format!("pairwise sum needs qubits, got {}", sub.dims())));
    }
    if sub.trace() <= 0.0 {
        return Ok(0.0);
    }
    let n = sub.parties();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let c = pair_concurrence(sub, i, j)?;
            total += c * c;
        }
    }
    Ok(total)
}

/// Sum of pairwise terms over every all-qubit substate of `rho`.
fn qubit_substate_sum(rho: &DensityMatrix, reduction: Reduction) -> Result<(f64, u64)> {
    let sels = selections(rho.dims(), &vec![2; rho.parties()])?;
    let sum = sum_terms(&sels, reduction, |sel| pairwise_squared_sum(&project_density(rho, sel)?))?;
    Ok((sum, sels.len() as u64))
}

fn reduced_dim_product(dims: &DimensionVector) -> f64 {
    dims.dims().iter().map(|&d| (d - 1) as f64).product()
}

/// Three-party bound from 2x2x2 substates and pairwise two-qubit concurrences.
pub fn thm1_bound(rho: &DensityMatrix, options: &BoundOptions) -> Result<BoundReport> {
    require_parties(rho, |n| n == 3, "the tripartite bound needs exactly 3 parties")?;
    require_unit_trace(rho)?;
    let (sum, count) = qubit_substate_sum(rho, options.reduction)?;
    Ok(BoundReport::new(TheoremId::Thm1, sum / reduced_dim_product(rho.dims()), count))
}

/// `N`-party bound from all-qubit substates: prefactor `N / (2^{N-2} prod (d_i - 1))`.
pub fn thm3_bound(rho: &DensityMatrix, options: &BoundOptions) -> Result<BoundReport> {
    let n = rho.parties();
    if n < 4 || (n == 4 && !options.allow_thm3_four_parties) {
        return Err(Error::Inapplicable(format!(
            "the N-qubit aggregation is stated for N >= 5 parties (N = 4 needs the override); input has {n}"
        )));
    }
    require_unit_trace(rho)?;
    let (sum, count) = qubit_substate_sum(rho, options.reduction)?;
    let prefactor = n as f64 / (2f64.powi(n as i32 - 2) * reduced_dim_product(rho.dims()));
    let mut report = BoundReport::new(TheoremId::Thm3, prefactor * sum, count);
    if n == 4 {
        report.notes.push("evaluated on 4 parties via override; the aggregation is only stated for N >= 5".into());
    }
    Ok(report)
}

/// One of the nine party groupings entering the four-party bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FourPartyGrouping {
    /// `a | b | cd`
    Tripartite { singles: [usize; 2], pair: [usize; 2] },
    /// `ab | cd`
    Bipartite { left: [usize; 2], right: [usize; 2] },
}

impl FourPartyGrouping {
    /// The six tripartite and three bipartite groupings, in the order
    /// 1|2|34, 1|3|24, 1|4|23, 12|3|4, 13|2|4, 14|2|3, 12|34, 13|24, 14|23.
    pub fn all() -> Vec<Self> {
        use FourPartyGrouping::*;
        vec![
            Tripartite { singles: [0, 1], pair: [2, 3] },
            Tripartite { singles: [0, 2], pair: [1, 3] },
            Tripartite { singles: [0, 3], pair: [1, 2] },
            Tripartite { singles: [2, 3], pair: [0, 1] },
            Tripartite { singles: [1, 3], pair: [0, 2] },
            Tripartite { singles: [1, 2], pair: [0, 3] },
            Bipartite { left: [0, 1], right: [2, 3] },
            Bipartite { left: [0, 2], right: [1, 3] },
            Bipartite { left: [0, 3], right: [1, 2] },
        ]
    }

    pub fn partition(&self) -> Partition {
        let blocks = match self {
            Self::Tripartite { singles, pair } => vec![vec![singles[0]], vec![singles[1]], pair.to_vec()],
            Self::Bipartite { left, right } => vec![left.to_vec(), right.to_vec()],
        };
        Partition::new(blocks, 4).expect("fixed groupings are valid")
    }

    /// Full coefficient of this grouping's substate sum (the leading 1/12 excluded).
    pub fn weight(&self, dims: &DimensionVector, mode: CoefficientMode) -> f64 {
        let d = |p: usize| dims.dim(p) as f64;
        let merged = |[a, b]: [usize; 2]| match mode {
            CoefficientMode::Paper => d(a) + d(b) - 1.0,
            CoefficientMode::Conservative => d(a) * d(b) - 1.0,
        };
        match *self {
            Self::Tripartite { singles, pair } => 2.0 / ((d(singles[0]) - 1.0) * (d(singles[1]) - 1.0) * merged(pair)),
            Self::Bipartite { left, right } => 1.0 / (merged(left) * merged(right)),
        }
    }

    /// Substate sum over the merged state.
    fn substate_sum(&self, rho: &DensityMatrix, reduction: Reduction) -> Result<(f64, u64)> {
        let merged = rho.merge_parties(&self.partition())?;
        match self {
            Self::Tripartite { .. } => qubit_substate_sum(&merged, reduction),
            Self::Bipartite { .. } => {
                let sels = selections(merged.dims(), &[2, 2])?;
                let sum = sum_terms(&sels, reduction, |sel| {
                    let sub = project_density(&merged, sel)?;
                    let c = concurrence_two_qubit(&TwoQubitState::new(sub.into_matrix())?)?;
                    Ok(c * c)
                })?;
                Ok((sum, sels.len() as u64))
            }
        }
    }
}

/// Squared four-party bounds in both coefficient modes, sharing one pass over substates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm2Squares {
    pub conservative: f64,
    pub paper: f64,
    pub substates: u64,
}

pub fn thm2_squares(rho: &DensityMatrix, reduction: Reduction) -> Result<Thm2Squares> {
    require_parties(rho, |n| n == 4, "the four-party bound needs exactly 4 parties")?;
    let mut out = Thm2Squares { conservative: 0.0, paper: 0.0, substates: 0 };
    for grouping in FourPartyGrouping::all() {
        let (sum, count) = grouping.substate_sum(rho, reduction)?;
        out.conservative += grouping.weight(rho.dims(), CoefficientMode::Conservative) * sum;
        out.paper += grouping.weight(rho.dims(), CoefficientMode::Paper) * sum;
        out.substates += count;
    }
    out.conservative /= 12.0;
    out.paper /= 12.0;
    if out.conservative > out.paper * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::Numeric(format!(
            "conservative four-party bound {} exceeds paper-mode bound {}",
            out.conservative, out.paper
        )));
    }
    Ok(out)
}

/// Four-party bound aggregated over the six tripartite and three bipartite groupings.
pub fn thm2_bound(rho: &DensityMatrix, options: &BoundOptions) -> Result<BoundReport> {
    require_parties(rho, |n| n == 4, "the four-party bound needs exactly 4 parties")?;
    require_unit_trace(rho)?;
    let squares = thm2_squares(rho, options.reduction)?;
    let squared = match options.coefficient_mode {
        CoefficientMode::Paper => squares.paper,
        CoefficientMode::Conservative => squares.conservative,
    };
    let mut report = BoundReport::new(TheoremId::Thm2, squared, squares.substates);
    report.coefficient_mode = Some(options.coefficient_mode);
    report.notes.push("three-party convex roofs replaced by the pairwise relaxation sum C_mn^2".into());
    if options.coefficient_mode == CoefficientMode::Paper {
        report.notes.push(format!(
            "paper-mode merged-block denominators (d_a+d_b-1); conservative value {:.12e}",
            squares.conservative.sqrt()
        ));
    }
    Ok(report)
}

/// Stable ascending sort of parties by local dimension.
pub fn ascending_party_order(dims: &DimensionVector) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dims.parties()).collect();
    order.sort_by_key(|&p| dims.dim(p));
    order
}

/// `binom(d1-2,s-2) binom(d2-2,s-2) binom(d3-1,s-1) binom(d4-1,s-1)` for ascending dims.
pub fn thm4_denominator(sorted_dims: &[usize], s: usize) -> u64 {
    binomial(sorted_dims[0] - 2, s - 2)
        * binomial(sorted_dims[1] - 2, s - 2)
        * binomial(sorted_dims[2] - 1, s - 1)
        * binomial(sorted_dims[3] - 1, s - 1)
}

/// Four-party bound from `s x s x s x s` substates.
pub fn thm4_bound(rho: &DensityMatrix, s: usize, options: &BoundOptions) -> Result<BoundReport> {
    require_parties(rho, |n| n == 4, "the s-level four-party bound needs exactly 4 parties")?;
    require_unit_trace(rho)?;
    let order = ascending_party_order(rho.dims());
    let rho = rho.permute_parties(&order)?;
    let sorted = rho.dims().dims().to_vec();
    if s < 2 || s > sorted[0] {
        return Err(Error::Domain(format!("subspace size s = {s} outside 2..={}", sorted[0])));
    }
    let sizes = [s; 4];
    let sels = selections(rho.dims(), &sizes)?;
    debug_assert_eq!(sels.len() as u64, count_substates(rho.dims(), &sizes)?);
    let fallbacks = std::sync::atomic::AtomicUsize::new(0);
    let inner = BoundOptions { reduction: Reduction::Deterministic, ..*options };

    let thm2_on = |sigma: &DensityMatrix| -> Result<f64> {
        let t = sigma.trace();
        if t <= 0.0 {
            return Ok(0.0);
        }
        let normalized = sigma.scaled(1.0 / t);
        Ok(thm2_bound(&normalized, &inner)?.squared() * t * t)
    };
    let sum = sum_terms(&sels, options.reduction, |sel| {
        let sigma = project_density(&rho, sel)?;
        match options.sub_evaluator {
            SubEvaluator::Zero => Ok(0.0),
            SubEvaluator::Thm2 => thm2_on(&sigma),
            SubEvaluator::PureExact => {
                if sigma.trace() <= 0.0 {
                    Ok(0.0)
                } else if sigma.is_rank_one(RANK_ONE_TOL) {
                    Ok(concurrence_rank_one(&sigma)?.squared)
                } else {
                    fallbacks.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    thm2_on(&sigma)
                }
            }
        }
    })?;

    let denominator = thm4_denominator(&sorted, s) as f64;
    let mut report = BoundReport::new(TheoremId::Thm4, sum / denominator, sels.len() as u64);
    report.sub_evaluator = Some(options.sub_evaluator);
    report.subspace_size = Some(s);
    report.party_order = Some(order);
    if options.sub_evaluator != SubEvaluator::Zero {
        report.coefficient_mode = Some(options.coefficient_mode);
    }
    let fallbacks = fallbacks.into_inner();
    if fallbacks > 0 {
        report.notes.push(format!("{fallbacks} mixed substate(s) evaluated with the thm2 sub-evaluator"));
    }
    Ok(report)
}

/// Weights for combining several subspace sizes.
#[derive(Debug, Clone, PartialEq)]
pub enum CorollaryWeights {
    /// `p_s` for `s = 2, 3, ..., m`.
    Convex(Vec<f64>),
    /// Largest single-`s` bound over `s = 2..=min d`.
    Best,
}

pub fn corollary1_bound(
    rho: &DensityMatrix,
    weights: &CorollaryWeights,
    options: &BoundOptions,
) -> Result<BoundReport> {
    require_parties(rho, |n| n == 4, "the combined s-level bound needs exactly 4 parties")?;
    let min_dim = *rho.dims().dims().iter().min().expect("nonempty");
    let (squared, substates, detail) = match weights {
        CorollaryWeights::Convex(p) => {
            let m = p.len() + 1;
            if p.is_empty() || m > min_dim {
                return Err(Error::Config(format!(
                    "{} weights need s up to {m}, but min dimension is {min_dim}",
                    p.len()
                )));
            }
            if p.iter().any(|&w| !(w >= 0.0) || w > 1.0) {
                return Err(Error::Config(format!("weights {p:?} must lie in [0, 1]")));
            }
            let total: f64 = p.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Config(format!("weights sum to {total}, not 1")));
            }
            let mut squared = 0.0;
            let mut substates = 0;
            for (k, &w) in p.iter().enumerate() {
                if w > 0.0 {
                    let r = thm4_bound(rho, k + 2, options)?;
                    squared += w * r.squared();
                    substates += r.substates_evaluated;
                }
            }
            (squared, substates, format!("weights {p:?} over s = 2..={m}"))
        }
        CorollaryWeights::Best => {
            let mut best = (0.0f64, 2usize);
            let mut substates = 0;
            for s in 2..=min_dim {
                let r = thm4_bound(rho, s, options)?;
                substates += r.substates_evaluated;
                if r.squared() > best.0 {
                    best = (r.squared(), s);
                }
            }
            (best.0, substates, format!("best single s = {}", best.1))
        }
    };
    let mut report = BoundReport::new(TheoremId::Corollary1, squared, substates);
    report.sub_evaluator = Some(options.sub_evaluator);
    report.notes.push(detail);
    Ok(report)
}

/// The printed closed-form curves, transcribed verbatim for comparison output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForms {
    pub example1: f64,
    pub example2: f64,
    pub ref23: f64,
}

pub fn example1_closed_form(x: f64) -> f64 {
    3.0 * 2f64.sqrt() * (11.0 * x - 9.0) / (4.0 * (5.0 * x - 9.0))
}

pub fn example2_closed_form(x: f64) -> f64 {
    let r = (3.0 * x + 1.0).sqrt();
    let a = (x + 2.0 * x * r + 4.0 * x * x + 2.0).sqrt();
    let b = (x - 2.0 * x * r + 4.0 * x * x + 2.0).sqrt();
    7f64.sqrt() / 4.0 * (a - b) / (5.0 + 3.0 * x)
}

pub fn ref23_closed_form(x: f64) -> f64 {
    (3.0 * x - 1.0) / 2.0
}

pub fn paper_closed_forms(x: f64) -> Result<ClosedForms> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    Ok(ClosedForms {
        example1: example1_closed_form(x),
        example2: example2_closed_form(x),
        ref23: ref23_closed_form(x),
    })
}

/// Runs the requested evaluator.
pub fn evaluate(
    theorem: TheoremId,
    rho: &DensityMatrix,
    s: Option<usize>,
    options: &BoundOptions,
) -> Result<BoundReport> {
    match theorem {
        TheoremId::Thm1 => thm1_bound(rho, options),
        TheoremId::Thm2 => thm2_bound(rho, options),
        TheoremId::Thm3 => thm3_bound(rho, options),
        TheoremId::Thm4 => thm4_bound(rho, s.unwrap_or(2), options),
        TheoremId::Corollary1 => corollary1_bound(rho, &CorollaryWeights::Best, options),
    }
}
