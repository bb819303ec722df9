//! Runs the twelve acceptance criteria at their stated ranges and prints one
//! line per criterion. Exits nonzero if any status differs from the table
//! below. Criterion 3 is expected to fail: the printed three-variable
//! coefficient has a misoriented factor; the corrected orientation passes.

use std::process::ExitCode;
use std::time::Instant;

use maclab_core::checks::{self, EqualityMode};
use maclab_core::laumon::ShirForm;
use maclab_core::report::{combine, Status, VerificationReport};

const EXACT: EqualityMode = EqualityMode::Exact;

fn dominant_up_to(max_sum: u32, max_n: usize) -> Vec<Vec<i64>> {
    checks::dominant_weights(max_sum, max_n)
}

fn nondominant_small() -> Vec<Vec<i64>> {
    let mut out = vec![vec![-1]];
    for a in -1..=1 {
        for b in -1..=1 {
            if a == -1 || b == -1 {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

fn run_criterion(id: usize) -> VerificationReport {
    match id {
        1 => checks::tableau_vs_oracle(5, 4, EXACT),
        2 => checks::eigen_identity(5, 4, EXACT),
        3 => combine(
            "c-n-consistency",
            vec![
                checks::c_n_consistency(2, 4, EXACT),
                checks::printed_c2(2, EXACT),
                checks::printed_c3(2, false, EXACT),
            ],
        ),
        4 => checks::specialization(4, 3, EXACT),
        5 => combine(
            "local-operator",
            vec![
                checks::shir(2, 3, ShirForm::Derived),
                checks::shir(3, 2, ShirForm::Derived),
            ],
        ),
        6 => combine(
            "local-limit",
            vec![checks::junichi(2, 2, 5), checks::junichi(3, 2, 4)],
        ),
        7 => {
            let mut parts: Vec<VerificationReport> =
                (2..=4).map(|n| checks::h0_counting(n, 8)).collect();
            parts.push(checks::h0_limit(2, 2, 5));
            parts.push(checks::h0_limit(3, 2, 4));
            combine("h0", parts)
        }
        8 => combine(
            "h-equals-p",
            dominant_up_to(2, 3)
                .iter()
                .map(|l| checks::h_equals_p(l, 2, if l.len() == 1 { 5 } else { 4 }))
                .collect(),
        ),
        9 => combine(
            "weight-difference-equation",
            dominant_up_to(2, 3)
                .iter()
                .map(|l| checks::cor_diff(l))
                .collect(),
        ),
        10 => combine(
            "vanishing",
            nondominant_small()
                .iter()
                .map(|l| checks::vanishing(l, 2, if l.len() == 1 { 5 } else { 4 }))
                .collect(),
        ),
        11 => combine(
            "chi-bq",
            [vec![0], vec![1], vec![0, 0], vec![1, 0]]
                .iter()
                .map(|l| checks::chi_bq(l, 2))
                .collect(),
        ),
        _ => unreachable!(),
    }
}

const DESCRIPTIONS: [&str; 12] = [
    "tableau sum equals eigenvector oracle, |lambda| <= 5, N <= 4",
    "D^1_N eigen identity, |lambda| <= 5, N <= 4",
    "closed c_N equals recursion (entries <= 2, N <= 4) and printed c_2, c_3",
    "specialized f_N has support Pol_lambda and equals P_lambda, |lambda| <= 4, N <= 3",
    "operator residual on J vanishes, degree <= 3 (N=2), <= 2 (N=3)",
    "J_alpha stabilizes to the infinite product, order 2, N <= 3",
    "H_0 = W F to t^8 (N <= 4); H at weight 0 stabilizes to H_0 (N <= 3)",
    "stabilized H equals H_0 * prefactor * P, sum l <= 2, N <= 3",
    "exact difference equation on the closed-form family, sum l <= 2, N <= 3",
    "H stabilizes to zero for nondominant weights, N <= 3",
    "closed chi_bQ equals the truncated Weyl sum, order 2, N <= 3",
    "byte-identical reports at parallelism 1 and 8",
];

/// Expected status per criterion. Only criterion 3 is expected to fail.
fn expected(id: usize) -> Status {
    if id == 3 {
        Status::Failed
    } else {
        Status::Passed
    }
}

fn run_all(threads: usize) -> Vec<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        (1..=11)
            .map(|id| {
                let t = Instant::now();
                let mut r = run_criterion(id);
                r.wall_time_ms = Some(t.elapsed().as_millis() as u64);
                r
            })
            .collect()
    })
}

fn line(id: usize, status: Status, note: &str) -> String {
    let verdict = if status == Status::Passed {
        "PASS"
    } else {
        "FAIL"
    };
    format!(
        "criterion {id:>2}: {verdict} [{status}] {}{note}",
        DESCRIPTIONS[id - 1]
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let wide = run_all(8);
    let narrow = run_all(1);
    let mut unexpected = 0;
    for (i, r) in wide.iter().enumerate() {
        let id = i + 1;
        let mut note = format!(
            " (cases={}, {} ms)",
            r.cases,
            r.wall_time_ms.unwrap_or_default()
        );
        if id == 3 {
            let fixed = checks::printed_c3(2, true, EXACT);
            note.push_str(&format!(
                "; verbatim printed c_3 disagrees at {} matrices, corrected orientation: {}",
                r.witnesses.len(),
                fixed.status
            ));
            if !fixed.passed() {
                unexpected += 1;
            }
        }
        println!("{}", line(id, r.status, &note));
        if r.status != expected(id) {
            unexpected += 1;
            for w in &r.witnesses {
                println!(
                    "    witness {}: expected {}, got {}",
                    w.index, w.expected, w.actual
                );
            }
        }
    }
    let differing: Vec<usize> = wide
        .iter()
        .zip(&narrow)
        .enumerate()
        .filter(|(_, (a, b))| a.canonical_json() != b.canonical_json())
        .map(|(i, _)| i + 1)
        .collect();
    let det = if differing.is_empty() {
        Status::Passed
    } else {
        Status::Failed
    };
    let note = if differing.is_empty() {
        String::new()
    } else {
        format!(" (differs for criteria {differing:?})")
    };
    println!("{}", line(12, det, &note));
    if det != expected(12) {
        unexpected += 1;
    }
    let failed = wide.iter().filter(|r| !r.passed()).count() + usize::from(det != Status::Passed);
    println!(
        "acceptance: {} of 12 criteria pass, {failed} fail, {unexpected} unexpected outcome(s), {:.1} s",
        12 - failed,
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
