//! `mcb` command-line front end: load or generate states, evaluate bounds,
//! run validation suites and sweep the example families.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use mcb_core::bounds::{
    corollary1_bound, paper_closed_forms, thm1_bound, thm2_bound, thm2_squares, thm3_bound, thm4_bound, BoundOptions,
    BoundReport, CoefficientMode, CorollaryWeights, Reduction, SubEvaluator,
};
use mcb_core::oracle::{self, ValidationReport};
use mcb_core::qstate::families::{example2_family, ggz_family, NoiseSupport};
use mcb_core::qstate::io::{parse_state, write_state};
use mcb_core::qstate::{DensityMatrix, QuantumState, DEFAULT_DIM_CAP};
use mcb_core::Error;

pub const DIM_CAP_ENV: &str = "MCB_DIM_CAP";

pub mod exit {
    pub const OK: i32 = 0;
    /// Validation ran but at least one check failed.
    pub const CHECK_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const INAPPLICABLE: i32 = 3;
    pub const NUMERIC: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Usage(_) => exit::INPUT,
            Self::Core(e) => match e {
                Error::Inapplicable(_) => exit::INAPPLICABLE,
                Error::Numeric(_) | Error::NotPsd { .. } | Error::NotHermitian { .. } | Error::Dimension(_) => {
                    exit::NUMERIC
                }
                _ => exit::INPUT,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mcb", version, about = "Projection-based lower bounds of multipartite concurrence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound on a state file and emit a JSON result document.
    Bound(BoundArgs),
    /// Evaluate bounds along an example family and emit CSV.
    Sweep(SweepArgs),
    /// Run numerical validation suites.
    Validate(ValidateArgs),
    /// Write an example-family state file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubEvalArg {
    PureExact,
    Thm2,
    Zero,
}

impl From<SubEvalArg> for SubEvaluator {
    fn from(a: SubEvalArg) -> Self {
        match a {
            SubEvalArg::PureExact => SubEvaluator::PureExact,
            SubEvalArg::Thm2 => SubEvaluator::Thm2,
            SubEvalArg::Zero => SubEvaluator::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffModeArg {
    Paper,
    Conservative,
}

impl From<CoeffModeArg> for CoefficientMode {
    fn from(a: CoeffModeArg) -> Self {
        match a {
            CoeffModeArg::Paper => CoefficientMode::Paper,
            CoeffModeArg::Conservative => CoefficientMode::Conservative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ParallelArg {
    #[default]
    Det,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Example1,
    Example2,
    #[value(name = "example2-embedded16")]
    Example2Embedded16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PureFormulas,
    Monogamy,
    Projections,
    Sandwich,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct EvalFlags {
    #[arg(long = "sub-eval", value_enum, default_value = "thm2")]
    pub sub_eval: SubEvalArg,
    #[arg(long = "coeff-mode", value_enum, default_value = "conservative")]
    pub coeff_mode: CoeffModeArg,
    #[arg(long, value_enum, default_value = "det")]
    pub parallel: ParallelArg,
    /// Allow the N-qubit aggregation on four parties.
    #[arg(long)]
    pub allow_thm3_n4: bool,
}

impl EvalFlags {
    fn options(&self) -> BoundOptions {
        BoundOptions {
            coefficient_mode: self.coeff_mode.into(),
            sub_evaluator: self.sub_eval.into(),
            reduction: match self.parallel {
                ParallelArg::Det => Reduction::Deterministic,
                ParallelArg::Fast => Reduction::Fast,
            },
            allow_thm3_four_parties: self.allow_thm3_n4,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub theorem: u8,
    /// Subspace size for theorem 4.
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    /// Combine several subspace sizes for theorem 4: `best` or comma-separated weights for s = 2, 3, ...
    #[arg(long)]
    pub combine: Option<String>,
    #[command(flatten)]
    pub eval: EvalFlags,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Evaluators to tabulate (repeatable); defaults depend on the family.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub theorem: Vec<u8>,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub eval: EvalFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Samples per configuration; each suite has its own default.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Roof-search trials per state in the sandwich suite.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn format_g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= DIGITS {
        let mantissa = trim_fraction(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (DIGITS - 1 - exponent).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn dim_cap() -> CliResult<usize> {
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c >= 4)
            .ok_or_else(|| CliError::Usage(format!("{DIM_CAP_ENV}={v:?} is not an integer >= 4"))),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
struct BoundDocument<'a> {
    tool: &'static str,
    version: &'static str,
    input_sha256: String,
    dims: Vec<usize>,
    #[serde(flatten)]
    report: &'a BoundReport,
}

fn parse_weights(text: &str) -> CliResult<CorollaryWeights> {
    if text == "best" {
        return Ok(CorollaryWeights::Best);
    }
    text.split(',')
        .map(|w| w.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad weight {w:?} in --combine"))))
        .collect::<CliResult<Vec<f64>>>()
        .map(CorollaryWeights::Convex)
}

pub fn evaluate_bound(args: &BoundArgs, rho: &DensityMatrix) -> CliResult<BoundReport> {
    let options = args.eval.options();
    Ok(match (args.theorem, &args.combine) {
        (1, _) => thm1_bound(rho, &options)?,
        (2, _) => thm2_bound(rho, &options)?,
        (3, _) => thm3_bound(rho, &options)?,
        (4, None) => thm4_bound(rho, args.s, &options)?,
        (4, Some(c)) => corollary1_bound(rho, &parse_weights(c)?, &options)?,
        (t, _) => return Err(CliError::Usage(format!("unknown theorem {t}"))),
    })
}

pub fn cmd_bound(args: &BoundArgs) -> CliResult<()> {
    let bytes = read_file(&args.input)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::Core(Error::Load(format!("{}: not UTF-8: {e}", args.input.display()))))?;
    let state = parse_state(&text, dim_cap()?)
        .map_err(|e| CliError::Core(Error::Load(format!("{}: {e}", args.input.display()))))?;
    let rho = state.to_density();
    let report = evaluate_bound(args, &rho)?;
    if !report.bound.is_finite() {
        return Err(Error::Numeric(format!("non-finite bound {}", report.bound)).into());
    }
    let doc = BoundDocument {
        tool: "mcb",
        version: env!("CARGO_PKG_VERSION"),
        input_sha256: hex::encode(Sha256::digest(&bytes)),
        dims: rho.dims().dims().to_vec(),
        report: &report,
    };
    let mut json = serde_json::to_string_pretty(&doc).expect("report serializes");
    json.push('\n');
    emit(args.out.as_deref(), &json)
}

pub fn family_state(family: Family, x: f64) -> CliResult<DensityMatrix> {
    Ok(match family {
        Family::Example1 => ggz_family(x)?,
        Family::Example2 => example2_family(x, NoiseSupport::Full)?,
        Family::Example2Embedded16 => example2_family(x, NoiseSupport::Embedded16)?,
    })
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let rho = family_state(args.family, args.x)?;
    emit(args.out.as_deref(), &write_state(&QuantumState::Density(rho)))
}

/// `x_k = from + k step` for `k = 0..=floor((to - from) / step)`.
pub fn sweep_grid(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step {step} must be positive")).into());
    }
    if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from > to {
        return Err(Error::Domain(format!("need 0 <= from <= to <= 1, got from={from} to={to}")).into());
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| (from + k as f64 * step).min(to)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Column {
    Thm1,
    Thm2Both,
    Thm3,
    Thm4 { s: usize },
}

fn sweep_columns(args: &SweepArgs) -> Vec<Column> {
    let requested: Vec<u8> = if args.theorem.is_empty() {
        match args.family {
            Family::Example1 => vec![1],
            Family::Example2 | Family::Example2Embedded16 => vec![2, 4],
        }
    } else {
        args.theorem.clone()
    };
    let mut columns = Vec::new();
    for t in requested {
        let c = match t {
            1 => Column::Thm1,
            2 => Column::Thm2Both,
            3 => Column::Thm3,
            _ => Column::Thm4 { s: args.s },
        };
        if !columns.contains(&c) {
            columns.push(c);
        }
    }
    columns
}

const EXAMPLE1_NOTE: &str = "thm1 is the bound computed by this tool; paper_formula_example1 is the published \
closed form, transcribed verbatim for comparison. They disagree: every 2x2x2 substate of this family has \
diagonal two-qubit reductions, so the pipeline evaluates to 0, while the closed form is positive on (0, 9/11). \
The closed form is not reproduced.";

const EXAMPLE2_NOTE: &str = "paper_formula_* columns are published closed forms transcribed verbatim for \
comparison; they are not outputs of this tool. thm2 is shown with conservative (d_a*d_b-1) and paper \
(d_a+d_b-1) merged-block denominators; only the conservative column is derivation-safe.";

pub fn sweep_csv(args: &SweepArgs) -> CliResult<String> {
    let grid = sweep_grid(args.from, args.to, args.step)?;
    let columns = sweep_columns(args);
    let options = args.eval.options();
    let sub = options.sub_evaluator.name();

    let mut header = vec!["x".to_string()];
    for c in &columns {
        match c {
            Column::Thm1 => header.push("thm1".into()),
            Column::Thm2Both => {
                header.push("thm2_conservative".into());
                header.push("thm2_paper".into());
            }
            Column::Thm3 => header.push("thm3".into()),
            Column::Thm4 { s } => header.push(format!("thm4_s{s}_{}", sub.replace('-', "_"))),
        }
    }
    let example1 = args.family == Family::Example1;
    if example1 {
        header.push("paper_formula_example1".into());
    } else {
        header.push("paper_formula_example2".into());
        header.push("paper_formula_ref23".into());
    }

    let family_name = args.family.to_possible_value().expect("named").get_name().to_string();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# mcb {} sweep family={family_name} from={} to={} step={} rows={}",
        env!("CARGO_PKG_VERSION"),
        format_g12(args.from),
        format_g12(args.to),
        format_g12(args.step),
        grid.len()
    );
    let _ = writeln!(out, "# note: {}", if example1 { EXAMPLE1_NOTE } else { EXAMPLE2_NOTE });
    let _ = writeln!(out, "{}", header.join(","));

    for &x in &grid {
        let rho = family_state(args.family, x)?;
        let mut row = vec![format_g12(x)];
        for c in &columns {
            match *c {
                Column::Thm1 => row.push(format_g12(thm1_bound(&rho, &options)?.bound)),
                Column::Thm2Both => {
                    let sq = thm2_squares(&rho, options.reduction)?;
                    row.push(format_g12(sq.conservative.sqrt()));
                    row.push(format_g12(sq.paper.sqrt()));
                }
                Column::Thm3 => row.push(format_g12(thm3_bound(&rho, &options)?.bound)),
                Column::Thm4 { s } => row.push(format_g12(thm4_bound(&rho, s, &options)?.bound)),
            }
        }
        let forms = paper_closed_forms(x)?;
        if example1 {
            row.push(format_g12(forms.example1));
        } else {
            row.push(format_g12(forms.example2));
            row.push(format_g12(forms.ref23));
        }
        let _ = writeln!(out, "{}", row.join(","));
    }
    Ok(out)
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let csv = sweep_csv(args)?;
    emit(args.out.as_deref(), &csv)
}

#[derive(Debug, Serialize)]
struct ValidationDocument {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    passed: bool,
    #[serde(flatten)]
    report: ValidationReport,
}

pub fn run_suite(suite: Suite, samples: Option<usize>, seed: u64, trials: usize) -> CliResult<ValidationReport> {
    let pick = |default: usize| samples.unwrap_or(default);
    let mut report = ValidationReport::default();
    if matches!(suite, Suite::PureFormulas | Suite::All) {
        report.extend(oracle::pure_formula_suite(seed, pick(100))?);
    }
    if matches!(suite, Suite::Monogamy | Suite::All) {
        report.extend(oracle::monogamy_suite(seed, pick(1000))?);
    }
    if matches!(suite, Suite::Projections | Suite::All) {
        report.extend(oracle::projection_suite(seed, pick(200))?);
    }
    if matches!(suite, Suite::Sandwich | Suite::All) {
        report.extend(oracle::sandwich_suite(seed, pick(50), trials)?);
    }
    Ok(report)
}

/// Returns the exit code: `OK` when every check passes.
pub fn cmd_validate(args: &ValidateArgs) -> CliResult<i32> {
    let report = run_suite(args.suite, args.samples, args.seed, args.trials)?;
    let passed = report.passed();
    let doc = ValidationDocument { tool: "mcb", version: env!("CARGO_PKG_VERSION"), seed: args.seed, passed, report };
    let mut json = serde_json::to_string_pretty(&doc).expect("report serializes");
    json.push('\n');
    emit(args.out.as_deref(), &json)?;
    Ok(if passed { exit::OK } else { exit::CHECK_FAILED })
}

pub fn run(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Bound(a) => cmd_bound(a).map(|_| exit::OK),
        Command::Sweep(a) => cmd_sweep(a).map(|_| exit::OK),
        Command::Validate(a) => cmd_validate(a),
        Command::Gen(a) => cmd_gen(a).map(|_| exit::OK),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.1 + 0.2, "0.3"),
            (0.01 * 3.0, "0.03"),
            (1.0606601717798214, "1.06066017178"),
            (123456789012345.0, "1.23456789012e+14"),
            (0.00001234, "1.234e-05"),
            (0.0001234, "0.0001234"),
            (-2.5, "-2.5"),
            (1e-300, "1e-300"),
            (999999999999.5, "1e+12"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g12(x), want, "{x}");
        }
    }

    #[test]
    fn grid_counts() {
        assert_eq!(sweep_grid(0.0, 0.81, 0.01).unwrap().len(), 82);
        assert_eq!(sweep_grid(0.0, 1.0, 1.0 / 31.0).unwrap().len(), 32);
        assert_eq!(sweep_grid(0.5, 0.5, 0.1).unwrap(), vec![0.5]);
        assert!(sweep_grid(0.0, 1.0, 0.0).is_err());
        assert!(sweep_grid(0.6, 0.5, 0.1).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::Inapplicable("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::Numeric("x".into())).exit_code(), 4);
        assert_eq!(CliError::from(Error::NotPsd { eigenvalue: -1.0 }).exit_code(), 4);
        assert_eq!(CliError::from(Error::Load("x".into())).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }

    #[test]
    fn weights_parse() {
        assert_eq!(parse_weights("best").unwrap(), CorollaryWeights::Best);
        assert_eq!(parse_weights("0.5, 0.5").unwrap(), CorollaryWeights::Convex(vec![0.5, 0.5]));
        assert!(parse_weights("a,b").is_err());
    }
}
