//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use mcb_core::bounds::{
    example1_closed_form, example2_closed_form, paper_closed_forms, ref23_closed_form, thm1_bound, thm3_bound,
    thm4_bound, BoundOptions, SubEvaluator,
};
use mcb_core::oracle::{monogamy_suite, projection_suite, pure_formula_suite, sandwich_suite, ValidationReport};
use mcb_core::pure_concurrence::concurrence_pure;
use mcb_core::qstate::families::{bell, example2_family, example2_psi, ggz_family, ghz, w_state, werner, NoiseSupport};
use mcb_core::qstate::random::{random_density, rng_from_seed};
use mcb_core::qstate::DimensionVector;
use mcb_core::wootters::concurrence_of_matrix;

const SEED: u64 = 20240607;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within_time(mut o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    let in_time = elapsed < limit;
    o.detail = format!("{}; {:.2}s (limit {}s)", o.detail, elapsed.as_secs_f64(), limit.as_secs());
    o.passed &= in_time;
    o
}

fn failures(report: &ValidationReport) -> String {
    let bad: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} {} worst={:e}", c.name, c.configuration, c.worst))
        .collect();
    if bad.is_empty() {
        "none".into()
    } else {
        bad.join("; ")
    }
}

fn worst_margin(report: &ValidationReport) -> f64 {
    report.checks.iter().map(|c| c.worst).fold(f64::INFINITY, f64::min)
}

fn worst_deviation(report: &ValidationReport) -> f64 {
    report.checks.iter().map(|c| c.worst).fold(0.0, f64::max)
}

fn wootters_kernel() -> Outcome {
    let start = Instant::now();
    let bell_c = concurrence_of_matrix(bell().to_density().matrix()).unwrap();
    let bell_ok = (bell_c - 1.0).abs() < 1e-10;
    let mut werner_err: f64 = 0.0;
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let c = concurrence_of_matrix(werner(p).unwrap().matrix()).unwrap();
        werner_err = werner_err.max((c - 0f64.max((3.0 * p - 1.0) / 2.0)).abs());
    }
    let dims = DimensionVector::new(vec![2, 2]).unwrap();
    let mut rng = rng_from_seed(SEED);
    let mut homog_err: f64 = 0.0;
    for k in 0..100 {
        let rho = random_density(&dims, SEED + k);
        let c: f64 = rng.random_range(0.01..1.0);
        let full = concurrence_of_matrix(rho.matrix()).unwrap();
        let scaled = concurrence_of_matrix(&rho.matrix().scale(c)).unwrap();
        homog_err = homog_err.max((scaled - c * full).abs());
    }
    let o = outcome(
        bell_ok && werner_err < 1e-8 && homog_err < 1e-10,
        format!("bell={bell_c:.12}, werner max err={werner_err:.1e}, homogeneity max err={homog_err:.1e}"),
    );
    within_time(o, start.elapsed(), Duration::from_secs(5))
}

fn pure_formulas() -> Outcome {
    let start = Instant::now();
    let mut report = pure_formula_suite(SEED, 100).unwrap();
    report.checks.retain(|c| c.name != "purity-identities");
    let o = outcome(
        report.passed(),
        format!("{} configurations x 100 states, max deviation {:.1e}", report.checks.len(), worst_deviation(&report)),
    );
    within_time(o, start.elapsed(), Duration::from_secs(60))
}

fn purity_identities() -> Outcome {
    let mut report = pure_formula_suite(SEED, 100).unwrap();
    report.checks.retain(|c| c.name == "purity-identities");
    outcome(
        report.passed() && !report.checks.is_empty(),
        format!("2x2x2x2 and 2x2x2x3, 100 states each, max residual {:.1e}", worst_deviation(&report)),
    )
}

fn inequalities() -> Outcome {
    let mut report = monogamy_suite(SEED, 1000).unwrap();
    report.extend(projection_suite(SEED, 200).unwrap());
    outcome(
        report.passed(),
        format!(
            "{} inequality configurations, min margin {:.1e}, failures: {}",
            report.checks.len(),
            worst_margin(&report),
            failures(&report)
        ),
    )
}

fn sandwich() -> Outcome {
    let start = Instant::now();
    let report = sandwich_suite(SEED, 50, 200).unwrap();
    let o = outcome(
        report.passed(),
        format!(
            "{} configurations x 50 mixed states, 200 trials, min roof-bound gap {:.3e}, failures: {}",
            report.checks.len(),
            worst_margin(&report),
            failures(&report)
        ),
    );
    within_time(o, start.elapsed(), Duration::from_secs(600))
}

fn worked_values() -> Outcome {
    let exact = BoundOptions { sub_evaluator: SubEvaluator::PureExact, ..BoundOptions::default() };
    let thm4 = thm4_bound(&example2_family(1.0, NoiseSupport::Full).unwrap(), 2, &exact).unwrap().bound;
    let c4 = concurrence_pure(&example2_psi()).unwrap().value;
    let gghz = concurrence_pure(&ghz(3, 3).unwrap()).unwrap().value;
    let w5 = thm3_bound(&w_state(5).unwrap().to_density(), &BoundOptions::default()).unwrap().bound;
    let ok = (thm4 - (9.0f64 / 8.0).sqrt()).abs() < 1e-9
        && (c4 - 7f64.sqrt() / 2.0).abs() < 1e-9
        && (gghz - 2f64.sqrt()).abs() < 1e-9
        && (w5 - 1.0).abs() < 1e-8;
    outcome(ok, format!("thm4={thm4:.12}, C4(psi)={c4:.12}, C3(GGHZ)={gghz:.12}, thm3(W5)={w5:.12}"))
}

fn closed_forms() -> Outcome {
    let at0 = paper_closed_forms(0.0).unwrap().example1;
    let at_root = example1_closed_form(9.0 / 11.0);
    let ref_root = ref23_closed_form(1.0 / 3.0);
    let transcription = (at0 - 1.06066).abs() < 1e-5 && at_root.abs() < 1e-9 && ref_root.abs() < 1e-15;

    let mut violations = Vec::new();
    for k in 0..=13 {
        let x = 1.0 / 3.0 + k as f64 * 0.005;
        let (ours, line) = (example2_closed_form(x), ref23_closed_form(x));
        if ours < line {
            violations.push(format!("x={x:.5} ({ours:.5} < {line:.5})"));
        }
    }
    // The comparison claim fails on the upper end of the grid; this is reported, and frozen so that
    // any change in the transcription shows up here.
    let expected_violations = 4;
    let dominance = if violations.is_empty() {
        "example2 formula >= ref23 line on all 14 grid points".to_string()
    } else {
        format!(
            "example2 formula >= ref23 line fails at {}/14 grid points: {}",
            violations.len(),
            violations.join(", ")
        )
    };
    outcome(
        transcription && violations.len() == expected_violations,
        format!(
            "example1(0)={at0:.6}, example1(9/11)={at_root:.1e}, ref23(1/3)={ref_root:.1e}; {dominance} (reported; violation count frozen at {expected_violations})"
        ),
    )
}

fn run_mcb(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mcb")).args(args).output().expect("run mcb");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn non_reproduction_record() -> Outcome {
    let step = format!("{}", 1.0 / 31.0);
    let (code, csv) = run_mcb(&["sweep", "--family", "example1", "--from", "0", "--to", "1", "--step", &step]);
    if code != 0 {
        return outcome(false, format!("sweep exited with {code}"));
    }
    let has_note = csv.lines().any(|l| l.starts_with("# note:") && l.contains("not reproduced"));
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (Some(xi), Some(ti), Some(pi)) = (col("x"), col("thm1"), col("paper_formula_example1")) else {
        return outcome(false, format!("missing columns in header {header:?}"));
    };
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap_or(f64::NAN)).collect()).collect();
    let pipeline_zero = rows.iter().all(|r| r[ti] == 0.0);
    let formula_positive = rows.iter().filter(|r| r[xi] > 0.0 && r[xi] < 9.0 / 11.0).all(|r| r[pi] > 0.0);
    // Library path agrees with the CSV.
    let library_zero = (0..32)
        .all(|k| thm1_bound(&ggz_family(k as f64 / 31.0).unwrap(), &BoundOptions::default()).unwrap().bound == 0.0);
    outcome(
        rows.len() == 32 && pipeline_zero && formula_positive && has_note && library_zero,
        format!(
            "{} rows, thm1 all zero: {pipeline_zero}, closed form positive on (0, 9/11): {formula_positive}, note present: {has_note}",
            rows.len()
        ),
    )
}

fn determinism() -> Outcome {
    let args = ["sweep", "--family", "example2", "--from", "0", "--to", "1", "--step", "0.125"];
    let (c1, a) = run_mcb(&args);
    let (c2, b) = run_mcb(&args);
    let (c3, e1) = run_mcb(&["sweep", "--family", "example1", "--from", "0", "--to", "0.81", "--step", "0.01"]);
    let (c4, e2) = run_mcb(&["sweep", "--family", "example1", "--from", "0", "--to", "0.81", "--step", "0.01"]);
    let ok = c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0 && a == b && e1 == e2 && !a.is_empty();
    outcome(
        ok,
        format!(
            "example2 sweep {} bytes, example1 sweep {} bytes, identical across runs: {}",
            a.len(),
            e1.len(),
            a == b && e1 == e2
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("wootters kernel", wootters_kernel),
        ("pure-formula equivalence", pure_formulas),
        ("purity identities", purity_identities),
        ("inequality suite", inequalities),
        ("soundness sandwich", sandwich),
        ("worked values", worked_values),
        ("closed-form transcription", closed_forms),
        ("non-reproduction record", non_reproduction_record),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        all &= o.passed;
        println!("{} criterion {} ({name}): {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
