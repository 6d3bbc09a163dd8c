//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p heinz-cli --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use heinz_cli::{run_suite, CheckReport, SuiteConfig};
use heinz_core::functionals::{check_jensen_bounds, ConvexFn, JensenParams, MARGIN_TOLERANCE};
use heinz_core::linalg::{is_psd, svd, sym_eig, Matrix, SeededRng};
use heinz_core::means::{heinz_scalar, heron_scalar, kantorovich_factor, loewner_matrix};
use heinz_core::{Evaluator, MeanTriple, NormKind};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn criterion_config() -> SuiteConfig {
    SuiteConfig {
        suites: vec!["all".into()],
        dims: vec![2, 3, 4, 6],
        trials: 1000,
        seed: 1,
        norms: NormKind::TEST_SET.to_vec(),
        ..SuiteConfig::default()
    }
}

fn zou_reproduction() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_heinz"))
        .arg("zou")
        .output()
        .expect("heinz binary runs");
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Outcome::new(false, format!("exit status {}", out.status));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| l.starts_with("  "))
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    let field = |key: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .map(str::trim)
    };
    let det: f64 = field("determinant:")
        .and_then(|v| v.parse().ok())
        .unwrap_or(f64::NAN);
    let psd = field("psd:");
    let round4 = |v: f64| (v * 1e4).round() / 1e4;
    let offdiag = if rows.len() == 3 && rows.iter().all(|r| r.len() == 3) {
        [rows[0][1], rows[0][2], rows[1][2]]
    } else {
        [f64::NAN; 3]
    };
    let symmetric = rows.len() == 3
        && rows[1][0] == rows[0][1]
        && rows[2][0] == rows[0][2]
        && rows[2][1] == rows[1][2];
    let entries_ok = offdiag.map(round4) == [0.8023, 0.9454, 0.9560];
    let passed = symmetric
        && entries_ok
        && (det - (-0.0012)).abs() <= 5e-4
        && psd == Some("false")
        && elapsed < Duration::from_secs(1);
    Outcome::new(
        passed,
        format!(
            "off-diagonal {offdiag:?}, determinant {det:e}, psd {psd:?}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn full_suite(report: &CheckReport, elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    for s in report.suites.iter().filter(|s| !s.expected_negative) {
        if s.failed > 0 || s.worst_relative_margin < -1.0 || s.total == 0 {
            bad.push(format!(
                "{} failed {} worst relative {:e}",
                s.name, s.failed, s.worst_relative_margin
            ));
        }
    }
    if !report.errors.is_empty() {
        bad.push(format!("{} evaluation errors", report.errors.len()));
    }
    let cases: usize = report.suites.iter().map(|s| s.total).sum();
    let passed = bad.is_empty() && elapsed < Duration::from_secs(300);
    let detail = if bad.is_empty() {
        format!(
            "{} checkers, {cases} cases, {:.1} s",
            report.suites.len(),
            elapsed.as_secs_f64()
        )
    } else {
        bad.join("; ")
    };
    Outcome::new(passed, detail)
}

fn cofactor_det(m: &Matrix) -> f64 {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)];
    }
    (0..n)
        .map(|j| {
            let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })]
            });
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[(0, j)] * cofactor_det(&minor)
        })
        .sum()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = SeededRng::new(0x0ac1e);
    let (mut worst_svd, mut worst_det, mut det_cases) = (0.0f64, 0.0f64, 0);
    for _ in 0..500 {
        let rows = 1 + (rng.next_u64() % 6) as usize;
        let cols = 1 + (rng.next_u64() % 6) as usize;
        let x = rng.gaussian_matrix(rows, cols);
        let got = svd(&x).expect("svd").values;
        let gram = x.transpose().matmul(&x).unwrap();
        let mut want: Vec<f64> = sym_eig(&gram)
            .unwrap()
            .eigenvalues
            .iter()
            .map(|l| l.max(0.0).sqrt())
            .collect();
        want.reverse();
        for (g, w) in got.iter().zip(&want) {
            worst_svd = worst_svd.max((g - w).abs() / got[0]);
        }
        if rows <= 4 {
            let square = rng.gaussian_matrix(rows, rows);
            let det = square.determinant().unwrap();
            let oracle = cofactor_det(&square);
            worst_det = worst_det.max((det - oracle).abs() / oracle.abs());
            det_cases += 1;
        }
    }
    Outcome::new(
        worst_svd <= 1e-9 && worst_det <= 1e-10,
        format!("worst SVD relative error {worst_svd:.2e}, worst determinant relative error {worst_det:.2e} over {det_cases} matrices"),
    )
}

fn scalar_chains() -> Outcome {
    let start = Instant::now();
    let mut rng = SeededRng::new(0x5ca1a);
    let mut worst = f64::INFINITY;
    for _ in 0..100_000 {
        let a = 10f64.powf(rng.uniform_in(-3.0, 3.0));
        let b = 10f64.powf(rng.uniform_in(-3.0, 3.0));
        let nu = rng.uniform();
        let (g, m) = ((a * b).sqrt(), (a + b) / 2.0);
        let h = heinz_scalar(a, b, nu).unwrap();
        let f = heron_scalar(a, b, nu).unwrap();
        let bhatia = heron_scalar(a, b, (2.0 * nu - 1.0).powi(2)).unwrap();
        let kantorovich = kantorovich_factor(a, b).unwrap().powf(1.0 - nu) * f;
        let margins = [f - g, m - f, h - g, m - h, bhatia - h, kantorovich - h];
        let scaled = margins
            .iter()
            .fold(f64::INFINITY, |acc, d| acc.min(d / (a + b)));
        worst = worst.min(scaled);
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst >= -1e-12 && elapsed < Duration::from_secs(5),
        format!(
            "worst margin / (a+b) {worst:.2e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn tau(values: &[f64]) -> f64 {
    MARGIN_TOLERANCE * values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn convexity_symmetry() -> Outcome {
    let unit: Vec<f64> = (0..33).map(|i| i as f64 / 32.0).collect();
    let wide: Vec<f64> = (0..33).map(|i| -2.0 + 5.0 * i as f64 / 32.0).collect();
    let mut violations = Vec::new();
    let mut checks = 0usize;
    for trial in 0..100u64 {
        let dim = 2 + (trial % 5) as usize;
        let t = MeanTriple::random(dim, 0.1, 10.0, 0xc0fe + trial).unwrap();
        let ev = Evaluator::new(&t);
        let kind = NormKind::TEST_SET[(trial % 6) as usize].restricted_to(dim);
        let r = [0.5, 1.0, 2.0][(trial % 3) as usize];
        type Eval<'a> = Box<dyn Fn(f64) -> f64 + 'a>;
        let fns: [(&str, Eval, &[f64]); 4] = [
            ("F", Box::new(|v| ev.f(kind, v).unwrap()), &unit),
            ("K", Box::new(|v| ev.k(kind, v).unwrap()), &unit),
            ("K wide", Box::new(|v| ev.k(kind, v).unwrap()), &wide),
            ("phi", Box::new(|v| ev.phi(kind, v, r).unwrap()), &unit),
        ];
        for (name, f, grid) in &fns {
            let values: Vec<f64> = grid.iter().map(|&v| f(v)).collect();
            let mut fail = |what: &str| violations.push(format!("{name} {what} trial {trial}"));
            if grid[0] == 0.0 {
                for (i, v) in values.iter().enumerate() {
                    let mirror = values[values.len() - 1 - i];
                    let scale = v.abs().max(mirror.abs());
                    if (v - mirror).abs() > 1e-10 * scale {
                        fail("symmetry");
                    }
                    let mid = values[values.len() / 2];
                    if mid > v + tau(&[mid, *v]) {
                        fail("midpoint minimum");
                    }
                    checks += 2;
                }
            }
            for (w, pair) in values.windows(2).zip(grid.windows(2)) {
                let mid = f((pair[0] + pair[1]) / 2.0);
                if mid > (w[0] + w[1]) / 2.0 + tau(&[mid, w[0], w[1]]) {
                    fail("midpoint convexity");
                }
                checks += 1;
            }
        }
    }
    let detail = match violations.first() {
        None => format!("{checks} grid checks over 100 triples"),
        Some(first) => format!("{} violations, first: {first}", violations.len()),
    };
    Outcome::new(violations.is_empty(), detail)
}

fn loewner_positivity() -> Outcome {
    let mut rng = SeededRng::new(0x10e);
    let mut failures = 0;
    for _ in 0..500 {
        let len = 1 + (rng.next_u64() % 6) as usize;
        let mu: Vec<f64> = (0..len)
            .map(|_| 10f64.powf(rng.uniform_in(-2.0, 2.0)))
            .collect();
        let r = rng.uniform();
        if !is_psd(&loewner_matrix(&mu, r).unwrap(), 1e-10).unwrap() {
            failures += 1;
        }
    }
    Outcome::new(failures == 0, format!("{failures} of 500 not PSD"))
}

fn determinism(first: &CheckReport) -> Outcome {
    let second = run_suite(&criterion_config()).expect("suite runs");
    let (a, b) = (first.canonical_json(), second.canonical_json());
    Outcome::new(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn jensen_sanity() -> Outcome {
    let p = JensenParams::new(0.25, 0.0, 1.0).unwrap();
    let result = check_jensen_bounds(&ConvexFn::Square, &p).unwrap();
    let chain = result.values();
    let ok = chain.len() == 3
        && chain
            .iter()
            .zip([0.125, 0.1875, 0.375])
            .all(|(g, w)| (g - w).abs() <= 1e-12);
    Outcome::new(ok, format!("chain {chain:?}"))
}

fn main() {
    let mut outcomes = vec![("zou counterexample", zou_reproduction())];

    let start = Instant::now();
    let report = run_suite(&criterion_config()).expect("suite runs");
    outcomes.push((
        "full inequality suite",
        full_suite(&report, start.elapsed()),
    ));
    outcomes.push(("oracle equivalence", oracle_equivalence()));
    outcomes.push(("scalar chain fuzzing", scalar_chains()));
    outcomes.push(("convexity and symmetry grids", convexity_symmetry()));
    outcomes.push(("Loewner positivity", loewner_positivity()));
    outcomes.push(("determinism", determinism(&report)));
    outcomes.push(("Jensen bound sanity", jensen_sanity()));

    for (i, (name, o)) in outcomes.iter().enumerate() {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name}: {}", i + 1, o.detail);
    }
    let failed = outcomes.iter().filter(|(_, o)| !o.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
