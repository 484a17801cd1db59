//! Acceptance criteria, one test per criterion. Each prints a single
//! `PASS`/`FAIL` line before asserting.

use std::time::Instant;

use grover_rga::cli::CircuitExport;
use grover_rga::experiments::{fit_sweep_n, sweep_eps, sweep_n, Method};
use grover_rga::optimizer::DEFAULT_MAX_ITER;
use grover_rga::verification::{
    first_order_suite, geometry_suite, oracle_suite, theory_trajectories, verify_inequality_suite,
    verify_marked_set_invariance, CheckReport,
};
use grover_rga::{rga_run, Criterion, GroverInstance, RetractionKind, StepPolicy, Trajectory};

fn verdict(name: &str, ok: bool, detail: String, start: Instant) {
    println!(
        "{} {name}: {detail} [{:.1}s]",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    assert!(ok, "{name}: {detail}");
}

fn failures(reports: &[CheckReport]) -> Vec<String> {
    reports.iter().filter(|r| !r.passed).map(|r| r.to_string()).collect()
}

fn summarize(reports: &[CheckReport]) -> String {
    let worst = reports.iter().map(|r| r.max_violation).fold(0.0, f64::max);
    let bad = failures(reports);
    if bad.is_empty() {
        format!("{} checks, worst violation {worst:.2e}", reports.len())
    } else {
        format!("{} of {} checks failed: {}", bad.len(), reports.len(), bad.join("; "))
    }
}

fn within(value: u64, target: u64, rel: f64) -> bool {
    (value as f64 - target as f64).abs() <= rel * target as f64
}

fn n15_fixed(eps: f64) -> Trajectory {
    let inst = GroverInstance::new(15, 1, None, None).unwrap();
    rga_run(&inst, RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz, eps, Criterion::CostGap, DEFAULT_MAX_ITER)
        .unwrap()
}

#[test]
fn oracle_equivalence() {
    let start = Instant::now();
    let reports: Vec<_> =
        oracle_suite(50).unwrap().into_iter().filter(|r| r.check.starts_with("reduced-vs-full")).collect();
    assert_eq!(reports.len(), 9 * 2 * 3 * 2);
    verdict("oracle equivalence", failures(&reports).is_empty(), summarize(&reports), start);
}

#[test]
fn retraction_correctness() {
    let start = Instant::now();
    let reports = first_order_suite(100, 20_240_601).unwrap();
    verdict("retraction correctness", failures(&reports).is_empty(), summarize(&reports), start);
}

#[test]
fn geometry_lemmas() {
    let start = Instant::now();
    let reports = geometry_suite(1000, 7).unwrap();
    verdict("geometry lemmas", failures(&reports).is_empty(), summarize(&reports), start);
}

#[test]
fn fixed_step_reference_counts() {
    let start = Instant::now();
    let lo = n15_fixed(1e-2).total_h_exp_calls;
    let hi = n15_fixed(1e-12).total_h_exp_calls;
    let ok = within(lo, 3942, 0.01) && within(hi, 9888, 0.01);
    verdict(
        "fixed-step reference counts",
        ok,
        format!("H-exp calls {lo} at eps=1e-2 (target 3942 +-1%), {hi} at eps=1e-12 (target 9888 +-1%)"),
        start,
    );
}

#[test]
fn line_search_reference_counts() {
    let start = Instant::now();
    let methods = Method::parse_list("5-els,6-els,8-els").unwrap();
    let rows = sweep_eps(15, &[1e-2, 1e-12], &methods).unwrap();
    let targets = [("5-factor-els", 261, 290), ("6-factor-els", 178, 210), ("8-factor-els", 162, 192)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (method, lo, hi) in targets {
        let calls = |eps: f64| rows.iter().find(|r| r.method == method && r.epsilon == eps).unwrap().h_exp_calls;
        let (a, b) = (calls(1e-2), calls(1e-12));
        ok &= within(a, lo, 0.15) && within(b, hi, 0.15);
        detail.push(format!("{method} {a}->{b} (target {lo}->{hi})"));
    }
    verdict("line-search reference counts", ok, detail.join(", "), start);
}

#[test]
fn scaling_law() {
    let start = Instant::now();
    let rows = sweep_n(2, 25, 1e-4, &Method::standard()).unwrap();
    let fits = fit_sweep_n(&rows).unwrap();
    let mut detail: Vec<String> = fits.iter().map(|f| format!("{} r2={:.5}", f.method, f.fit.r2)).collect();
    let mut ok = fits.len() == 4 && fits.iter().all(|f| f.fit.r2 >= 0.99);

    let calls = |m: &str, n: u32| rows.iter().find(|r| r.method == m && r.n == n).unwrap().h_exp_calls;
    let mut misordered = Vec::new();
    for n in 8..=25 {
        let (five, six, eight) = (calls("5-factor-els", n), calls("6-factor-els", n), calls("8-factor-els", n));
        if !(eight < six && six < five) {
            misordered.push(format!("n={n}: 8f={eight} 6f={six} 5f={five}"));
        }
    }
    ok &= misordered.is_empty();
    if misordered.is_empty() {
        detail.push("8<6<5 ordering holds for n=8..25".into());
    } else {
        detail.push(format!("ordering 8<6<5 violated at {}", misordered.join(", ")));
    }
    verdict("scaling law", ok, detail.join("; "), start);
}

#[test]
fn convergence_theory() {
    let start = Instant::now();
    let mut trajectories = theory_trajectories().unwrap();
    for k in 2..=12 {
        trajectories.push(n15_fixed(10f64.powi(-k)));
    }
    for n in 2..=25 {
        let inst = GroverInstance::new(n, 1, None, None).unwrap();
        trajectories.push(
            rga_run(&inst, RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz, 1e-4, Criterion::CostGap, DEFAULT_MAX_ITER)
                .unwrap(),
        );
    }
    let mut reports = Vec::new();
    for t in &trajectories {
        reports.extend(verify_inequality_suite(t).unwrap());
    }
    let kinds = ["monotone", "ascent-recurrence", "pl-inequality", "linear-rate-bound", "baseline-bound"];
    for k in kinds {
        assert!(reports.iter().any(|r| r.check.starts_with(k)), "no {k} check ran");
    }
    verdict(
        "convergence theory",
        failures(&reports).is_empty(),
        format!("{} trajectories, {}", trajectories.len(), summarize(&reports)),
        start,
    );
}

#[test]
fn invariance() {
    let start = Instant::now();
    let mut reports: Vec<_> =
        oracle_suite(50).unwrap().into_iter().filter(|r| r.check.starts_with("plane-residual")).collect();
    for kind in RetractionKind::ALL {
        for n in [5, 8] {
            for m in [1, 3] {
                reports.push(verify_marked_set_invariance(n, m, &[11, 12, 13, 14, 15], kind, 50).unwrap());
            }
        }
    }
    verdict("invariance", failures(&reports).is_empty(), summarize(&reports), start);
}

#[test]
fn circuit_round_trip() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=12 {
        let inst = GroverInstance::with_marked_set(n, 1 + u64::from(n % 3).min((1 << n) - 2), u64::from(n)).unwrap();
        for kind in RetractionKind::ALL {
            for policy in [StepPolicy::FixedInverseLipschitz, StepPolicy::els()] {
                let traj = rga_run(&inst, kind, policy, 1e-6, Criterion::CostGap, DEFAULT_MAX_ITER).unwrap();
                let json = serde_json::to_string(&CircuitExport::from_trajectory(&traj, &inst).unwrap()).unwrap();
                let back: CircuitExport = serde_json::from_str(&json).unwrap();
                worst = worst.max((back.replay().unwrap() - back.expected_final_q).abs());
                count += 1;
            }
        }
    }
    verdict(
        "circuit round-trip",
        worst <= 1e-10,
        format!("{count} circuits, worst replay mismatch {worst:.2e}"),
        start,
    );
}
