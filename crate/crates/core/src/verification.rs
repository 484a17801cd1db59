//! Executable property suites tying the reduced dynamics, the statevector
//! simulator and the dense oracle together.
//!
//! Every check produces a [`CheckReport`] whose `passed` flag is exactly
//! `max_violation <= tolerance`. Failures are reports, never errors, unless
//! the inputs themselves are invalid.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::dense::{check_euclid_lipschitz, frob_inner, frob_norm, unitarity_defect, DenseOp, DenseOperators};
use crate::error::Result;
use crate::experiments::fit_line;
use crate::instance::GroverInstance;
use crate::optimizer::{advance, choose_step, rga_run, Criterion, StepPolicy, Trajectory};
use crate::reduced::PlaneState;
use crate::retraction::{retraction_gates, RetractionKind};
use crate::statevector::{apply_gates, FullState, grad_coords_full, plane_residual, success_prob, uniform_state};

/// Largest `n` for which the reduced-vs-full comparison also runs the dense oracle.
pub const DENSE_COMPARE_MAX_QUBITS: u32 = 8;

pub const ORACLE_TOL: f64 = 1e-10;
pub const INEQUALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub samples: usize,
    #[serde(serialize_with = "lossless")]
    pub max_violation: f64,
    #[serde(serialize_with = "lossless")]
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip)]
    pub details: String,
    #[serde(skip)]
    pub seed: Option<u64>,
}

fn lossless<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

impl CheckReport {
    pub fn new(check: impl Into<String>, samples: usize, max_violation: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            samples,
            max_violation,
            tolerance,
            // NaN violations fail.
            passed: max_violation <= tolerance,
            details: String::new(),
            seed: None,
        }
    }

    pub fn with_details(mut self, details: impl Into<String>) -> Self {
        self.details = details.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} samples={} max_violation={:.3e} tolerance={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check,
            self.samples,
            self.max_violation,
            self.tolerance
        )?;
        if let Some(seed) = self.seed {
            write!(f, " seed={seed}")?;
        }
        if !self.details.is_empty() {
            write!(f, " ({})", self.details)?;
        }
        Ok(())
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// Discrepancies collected while running the three engines side by side.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OracleComparison {
    pub iterations: usize,
    /// `max_k |q_k(reduced) - q_k(full)|`.
    pub q_diff: f64,
    /// Largest coordinate mismatch, reduced vs dense (zero above the dense cap).
    pub coord_diff: f64,
    /// Largest norm of the statevector component off the Grover plane.
    pub plane_residual: f64,
    pub dense_checked: bool,
}

/// Runs reduced, statevector and (for small `n`) dense engines in lockstep.
///
/// Step sizes come from the reduced engine; each other engine builds its
/// retraction fragment from its own gradient coordinates.
pub fn compare_engines(
    inst: &GroverInstance,
    kind: RetractionKind,
    policy: &StepPolicy,
    iters: usize,
) -> Result<OracleComparison> {
    let consts = inst.constants();
    let mut reduced = PlaneState::initial(inst.q0());
    let mut full = uniform_state(inst)?;
    let dense = if inst.n() <= DENSE_COMPARE_MAX_QUBITS { Some(DenseOperators::build(inst)?) } else { None };
    let mut u: Option<DenseOp> = dense.as_ref().map(|d| d.identity());

    let mut cmp = OracleComparison { dense_checked: dense.is_some(), ..Default::default() };
    let observe = |reduced: &PlaneState, full: &FullState, u: &Option<DenseOp>, cmp: &mut OracleComparison| -> Result<()> {
        cmp.q_diff = cmp.q_diff.max((reduced.q() - success_prob(full, inst)?).abs());
        cmp.plane_residual = cmp.plane_residual.max(plane_residual(full, inst)?);
        if let (Some(d), Some(u)) = (&dense, u) {
            let (x, y) = reduced.grad_coords();
            let (dx, dy) = d.grad_coords(u)?;
            cmp.coord_diff = cmp.coord_diff.max((x - dx).abs()).max((y - dy).abs());
        }
        Ok(())
    };

    observe(&reduced, &full, &u, &mut cmp)?;
    for _ in 0..iters {
        if reduced.grad_norm() == 0.0 {
            break;
        }
        let t = choose_step(&reduced, kind, policy, &consts)?;
        let (fx, fy) = grad_coords_full(&full, inst)?;
        apply_gates(&mut full, &retraction_gates(kind, t, fx, fy)?, inst)?;
        if let (Some(d), Some(u)) = (&dense, u.as_mut()) {
            let (dx, dy) = d.grad_coords(u)?;
            d.left_apply_sequence(&retraction_gates(kind, t, dx, dy)?, u);
        }
        reduced = advance(&reduced, kind, t)?;
        cmp.iterations += 1;
        observe(&reduced, &full, &u, &mut cmp)?;
    }
    if let Some(u) = &u {
        cmp.coord_diff = cmp.coord_diff.max(unitarity_defect(u));
    }
    Ok(cmp)
}

pub fn verify_reduced_vs_full(
    inst: &GroverInstance,
    kind: RetractionKind,
    policy: &StepPolicy,
    iters: usize,
    tol: f64,
) -> Result<CheckReport> {
    let cmp = compare_engines(inst, kind, policy, iters)?;
    let name = format!("reduced-vs-full/n={}/M={}/{kind}/{policy}", inst.n(), inst.marked_count());
    Ok(CheckReport::new(name, cmp.iterations + 1, cmp.q_diff.max(cmp.coord_diff), tol).with_details(format!(
        "q_diff={:.2e} coord_diff={:.2e} dense={}",
        cmp.q_diff, cmp.coord_diff, cmp.dense_checked
    )))
}

/// Plane residual of the statevector along the same lockstep run.
pub fn verify_plane_invariance(
    inst: &GroverInstance,
    kind: RetractionKind,
    policy: &StepPolicy,
    iters: usize,
) -> Result<CheckReport> {
    let cmp = compare_engines(inst, kind, policy, iters)?;
    let name = format!("plane-residual/n={}/M={}/{kind}/{policy}", inst.n(), inst.marked_count());
    Ok(CheckReport::new(name, cmp.iterations + 1, cmp.plane_residual, ORACLE_TOL))
}

pub const FIRST_ORDER_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const FIRST_ORDER_MIN_RATE: f64 = 0.9;
pub const FIRST_ORDER_MAX_REMAINDER: f64 = 1e-3;

/// Finite-difference check of `gamma(0) = U`, `gamma'(0) = eta` for the curve
/// `h -> V(h; x, y) U` at random reachable `U` and unit `(x, y)`.
///
/// Returns three reports: zero-step identity, remainder `d(1e-4)`, and the
/// shortfall of the fitted convergence rate below 0.9.
pub fn verify_retraction_first_order(
    inst: &GroverInstance,
    kind: RetractionKind,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let ops = DenseOperators::build(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut zero_step, mut remainder, mut rate_gap): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut min_rate = f64::INFINITY;

    for _ in 0..samples {
        let u = ops.random_reachable(&mut rng);
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        let (x, y) = (phi.cos(), phi.sin());
        let eta = ops.tangent(x, y) * &u;

        let v0 = ops.sequence(&retraction_gates(kind, 0.0, x, y)?);
        zero_step = zero_step.max(frob_norm(&(v0 - ops.identity())));

        let mut logs_h = Vec::new();
        let mut logs_d = Vec::new();
        let mut last = 0.0;
        for h in FIRST_ORDER_STEPS {
            let mut moved = u.clone();
            ops.left_apply_sequence(&retraction_gates(kind, h, x, y)?, &mut moved);
            let d = frob_norm(&((moved - &u) / num_complex::Complex64::new(h, 0.0) - &eta));
            logs_h.push(h.ln());
            logs_d.push(d.max(f64::MIN_POSITIVE).ln());
            last = d;
        }
        remainder = remainder.max(last);
        // A remainder at roundoff level carries no rate information.
        if logs_d[0].exp() > 1e-12 {
            let rate = fit_line(&logs_h, &logs_d)?.slope;
            min_rate = min_rate.min(rate);
            rate_gap = rate_gap.max(FIRST_ORDER_MIN_RATE - rate);
        }
    }

    let tag = format!("n={}/{kind}", inst.n());
    Ok(vec![
        CheckReport::new(format!("retraction-zero-step/{tag}"), samples, zero_step, 1e-12).with_seed(seed),
        CheckReport::new(format!("retraction-first-order-remainder/{tag}"), samples, remainder, FIRST_ORDER_MAX_REMAINDER)
            .with_seed(seed),
        CheckReport::new(format!("retraction-first-order-rate/{tag}"), samples, rate_gap.max(0.0), 0.0)
            .with_seed(seed)
            .with_details(format!("min fitted order {min_rate:.4}")),
    ])
}

/// Norm and orthogonality identities of the gradient-plane basis.
pub fn verify_plane_basis(inst: &GroverInstance) -> Result<CheckReport> {
    let ops = DenseOperators::build(inst)?;
    let c0 = inst.constants().c0;
    let violation = (frob_norm(&ops.x0) - c0)
        .abs()
        .max((frob_norm(&ops.y0) - c0).abs())
        .max(frob_inner(&ops.x0, &ops.y0).abs())
        .max(frob_norm(&(ops.x0.adjoint() + &ops.x0)))
        .max(frob_norm(&(ops.y0.adjoint() + &ops.y0)));
    Ok(CheckReport::new(format!("plane-basis/n={}/M={}", inst.n(), inst.marked_count()), 1, violation, 1e-12))
}

/// Norm of the tangent vector `x X0 + y Y0` at which the limit ratios are probed.
pub const TIGHT_PROBE_NORM: f64 = 1e-3;

/// First- and second-order bounds of the 5-factor retraction at `U = I`:
/// `||V(1) - I|| <= ||eta||` and `||V(1) - I - eta|| <= ||eta||^2 / (4 c0)`,
/// plus the limit ratios at `||eta|| = 1e-3`.
pub fn verify_tight_bounds(inst: &GroverInstance, samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let ops = DenseOperators::build(inst)?;
    let c0 = inst.constants().c0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut first, mut second): (f64, f64) = (0.0, 0.0);
    let (mut ratio1_gap, mut ratio2_gap): (f64, f64) = (0.0, 0.0);

    let bounds = |x: f64, y: f64| -> Result<(f64, f64, f64)> {
        let eta = ops.tangent(x, y);
        let v = ops.sequence(&retraction_gates(RetractionKind::FiveFactor, 1.0, x, y)?);
        let step = v - ops.identity();
        Ok((frob_norm(&step), frob_norm(&(step - &eta)), frob_norm(&eta)))
    };

    for _ in 0..samples {
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        // Tangent norms spread log-uniformly over [1e-4, 10].
        let norm = 10f64.powf(rng.gen_range(-4.0..1.0));
        let r = norm / c0;
        let (x, y) = (r * phi.cos(), r * phi.sin());
        let (d1, d2, e) = bounds(x, y)?;
        first = first.max(d1 - e);
        second = second.max(d2 - e * e / (4.0 * c0));

        let r = TIGHT_PROBE_NORM / c0;
        let (d1, d2, e) = bounds(r * phi.cos(), r * phi.sin())?;
        ratio1_gap = ratio1_gap.max((d1 / e - 1.0).abs());
        ratio2_gap = ratio2_gap.max((d2 / (e * e) * 4.0 * c0 - 1.0).abs());
    }

    let tag = format!("n={}/M={}", inst.n(), inst.marked_count());
    Ok(vec![
        CheckReport::new(format!("tight-first-order/{tag}"), samples, first.max(0.0), INEQUALITY_SLACK).with_seed(seed),
        CheckReport::new(format!("tight-second-order/{tag}"), samples, second.max(0.0), INEQUALITY_SLACK)
            .with_seed(seed),
        CheckReport::new(format!("tight-first-order-limit/{tag}"), samples, ratio1_gap, 0.05).with_seed(seed),
        CheckReport::new(format!("tight-second-order-limit/{tag}"), samples, ratio2_gap, 0.05).with_seed(seed),
    ])
}

/// `|f(R_U(eta)) - f(U) - <grad f(U), eta>| <= (L_Rie / 2) ||eta||^2` for the
/// 5-factor retraction at random reachable `U` and `||eta|| <= 1`.
pub fn verify_pullback_lipschitz(inst: &GroverInstance, samples: usize, seed: u64) -> Result<CheckReport> {
    let ops = DenseOperators::build(inst)?;
    let consts = inst.constants();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..samples {
        let u = ops.random_reachable(&mut rng);
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        let r = rng.gen::<f64>() / consts.c0;
        let (x, y) = (r * phi.cos(), r * phi.sin());
        let eta = ops.tangent(x, y);
        let mut moved = u.clone();
        ops.left_apply_sequence(&retraction_gates(RetractionKind::FiveFactor, 1.0, x, y)?, &mut moved);
        let lhs = (ops.cost(&moved) - ops.cost(&u) - frob_inner(&ops.skew_grad(&u), &eta)).abs();
        let e = frob_norm(&eta);
        worst = worst.max(lhs - consts.l_rie / 2.0 * e * e);
    }
    Ok(CheckReport::new(
        format!("pullback-lipschitz/n={}/M={}", inst.n(), inst.marked_count()),
        samples,
        worst.max(0.0),
        ORACLE_TOL,
    )
    .with_seed(seed)
    .with_details(format!("L_Rie={:.6}", consts.l_rie)))
}

/// Euclidean gradient Lipschitz constant 2: random pairs and the tight pair.
pub fn verify_euclid_lipschitz(inst: &GroverInstance, samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let ops = DenseOperators::build(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let audit = check_euclid_lipschitz(&ops, samples, &mut rng);
    let tag = format!("n={}/M={}", inst.n(), inst.marked_count());
    Ok(vec![
        CheckReport::new(format!("euclid-lipschitz/{tag}"), samples, (audit.max_ratio - 2.0).max(0.0), ORACLE_TOL)
            .with_seed(seed)
            .with_details(format!("max ratio {:.12}", audit.max_ratio)),
        CheckReport::new(format!("euclid-lipschitz-tight/{tag}"), 1, (audit.tight_ratio - 2.0).abs(), 1e-12)
            .with_seed(seed),
    ])
}

/// Iterations allowed by the linear-rate bound, `ceil(6 L ln(1/eps))`.
pub fn linear_rate_bound(l_rie: f64, eps: f64) -> usize {
    (6.0 * l_rie * (1.0 / eps).ln()).ceil() as usize
}

/// Iterations allowed by the baseline bound, `ceil(2 L / eps^2)`.
pub fn baseline_bound(l_rie: f64, eps: f64) -> usize {
    (2.0 * l_rie / (eps * eps)).ceil() as usize
}

/// Smallest tolerance at which the baseline check is run.
pub const BASELINE_MIN_EPS: f64 = 1e-2;

/// Theory checks on a fixed-step trajectory: monotonicity, ascent
/// recurrence, PL inequality, the linear-rate iteration bound and (for
/// `eps >= 1e-2`) the baseline gradient-norm bound.
pub fn verify_inequality_suite(traj: &Trajectory) -> Result<Vec<CheckReport>> {
    let l = traj.l_rie;
    let q0 = traj.instance.q0;
    let eps = traj.epsilon;
    let qs = traj.q_values();
    let gs = traj.grad_norms();
    let tag = format!(
        "n={}/M={}/{}/{}/eps={:e}",
        traj.instance.n, traj.instance.marked_count, traj.kind, traj.policy, eps
    );
    let steps = qs.len() - 1;

    let mut monotone: f64 = 0.0;
    let mut ascent: f64 = 0.0;
    for w in qs.windows(2) {
        monotone = monotone.max(w[0] - w[1]);
        ascent = ascent.max(w[0] + w[0] * (1.0 - w[0]) / l - w[1]);
    }
    let mut pl: f64 = 0.0;
    let mut pl_samples = 0;
    for (q, g) in qs.iter().zip(&gs) {
        if *q >= 0.5 {
            pl = pl.max((1.0 - q) - g * g);
            pl_samples += 1;
        }
    }

    let mut reports = vec![
        CheckReport::new(format!("monotone/{tag}"), steps, monotone.max(0.0), INEQUALITY_SLACK),
        CheckReport::new(format!("ascent-recurrence/{tag}"), steps, ascent.max(0.0), INEQUALITY_SLACK),
        CheckReport::new(format!("pl-inequality/{tag}"), pl_samples, pl.max(0.0), INEQUALITY_SLACK),
    ];

    if eps <= q0 && traj.criterion == Criterion::CostGap {
        let bound = linear_rate_bound(l, eps);
        let excess = if traj.converged { traj.iterations().saturating_sub(bound) as f64 } else { f64::INFINITY };
        reports.push(
            CheckReport::new(format!("linear-rate-bound/{tag}"), 1, excess, 0.0)
                .with_details(format!("T={} bound={bound}", traj.iterations())),
        );
    }

    if eps >= BASELINE_MIN_EPS {
        let bound = baseline_bound(l, eps);
        let inst = GroverInstance::new(traj.instance.n, traj.instance.marked_count, None, None)?;
        let run = rga_run(&inst, traj.kind, traj.policy, eps, Criterion::GradNorm, bound.max(1))?;
        let excess = if run.converged { 0.0 } else { f64::INFINITY };
        reports.push(
            CheckReport::new(format!("baseline-bound/{tag}"), 1, excess, 0.0)
                .with_details(format!("T_grad={} bound={bound}", run.iterations())),
        );
    }
    Ok(reports)
}

/// Fixed-step statevector ascent from the uniform state; returns `q_0..q_iters`.
pub fn full_ascent(inst: &GroverInstance, kind: RetractionKind, iters: usize) -> Result<Vec<f64>> {
    let t = 1.0 / inst.constants().l_rie;
    let mut state = uniform_state(inst)?;
    let mut qs = vec![success_prob(&state, inst)?];
    for _ in 0..iters {
        let (x, y) = grad_coords_full(&state, inst)?;
        apply_gates(&mut state, &retraction_gates(kind, t, x, y)?, inst)?;
        qs.push(success_prob(&state, inst)?);
    }
    Ok(qs)
}

/// Statevector trajectories for distinct random marked sets of equal size
/// must agree step by step.
pub fn verify_marked_set_invariance(
    n: u32,
    marked_count: u64,
    seeds: &[u64],
    kind: RetractionKind,
    iters: usize,
) -> Result<CheckReport> {
    let mut reference: Option<Vec<f64>> = None;
    let mut worst: f64 = 0.0;
    let mut distinct = std::collections::BTreeSet::new();
    for &seed in seeds {
        let inst = GroverInstance::with_marked_set(n, marked_count, seed)?;
        distinct.insert(inst.require_marked()?.to_vec());
        let qs = full_ascent(&inst, kind, iters)?;
        match &reference {
            None => reference = Some(qs),
            Some(r) => {
                for (a, b) in r.iter().zip(&qs) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    Ok(CheckReport::new(
        format!("marked-set-invariance/n={n}/M={marked_count}/{kind}"),
        seeds.len(),
        worst,
        ORACLE_TOL,
    )
    .with_details(format!("{} distinct marked sets", distinct.len())))
}

/// Copy of `traj` with one step's success probability pushed down, so that
/// monotonicity and the ascent recurrence must fail.
pub fn corrupted_trajectory(traj: &Trajectory) -> Trajectory {
    let mut bad = traj.clone();
    if let Some(r) = bad.records.get_mut(traj.records.len() / 2) {
        r.q *= 0.5;
    } else {
        bad.final_state.q *= 0.5;
    }
    bad
}

/// Named suites runnable from the command line. `negative-control` is
/// excluded from `all` because it must fail.
pub const SUITES: [&str; 7] =
    ["reduced-vs-full", "first-order", "geometry", "inequalities", "invariance", "negative-control", "all"];

/// Lockstep comparison over `n = 2..=10`, `M in {1, 3}`, every retraction and
/// both step policies: q agreement, dense coordinate agreement and plane
/// residual.
pub fn oracle_suite(iters: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for n in 2..=10u32 {
        for m in [1u64, 3] {
            let inst = GroverInstance::new(n, m, Some((0..m).map(|i| (i * 7 + 1) % (1 << n)).collect()), None)?;
            for kind in RetractionKind::ALL {
                for policy in [StepPolicy::FixedInverseLipschitz, StepPolicy::els()] {
                    let cmp = compare_engines(&inst, kind, &policy, iters)?;
                    let tag = format!("n={n}/M={m}/{kind}/{policy}");
                    reports.push(
                        CheckReport::new(
                            format!("reduced-vs-full/{tag}"),
                            cmp.iterations + 1,
                            cmp.q_diff.max(cmp.coord_diff),
                            ORACLE_TOL,
                        )
                        .with_details(format!("dense={}", cmp.dense_checked)),
                    );
                    reports.push(CheckReport::new(
                        format!("plane-residual/{tag}"),
                        cmp.iterations + 1,
                        cmp.plane_residual,
                        ORACLE_TOL,
                    ));
                }
            }
        }
    }
    Ok(reports)
}

pub fn first_order_suite(samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let inst = GroverInstance::with_marked_set(3, 2, seed)?;
    let mut reports = Vec::new();
    for kind in RetractionKind::ALL {
        reports.extend(verify_retraction_first_order(&inst, kind, samples, seed)?);
    }
    Ok(reports)
}

pub fn geometry_suite(samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for n in 2..=8u32 {
        for m in [1u64, 3] {
            reports.push(verify_plane_basis(&GroverInstance::with_marked_set(n, m, seed)?)?);
        }
    }
    let small = GroverInstance::with_marked_set(3, 1, seed)?;
    reports.extend(verify_tight_bounds(&small, samples, seed)?);
    reports.push(verify_pullback_lipschitz(&GroverInstance::with_marked_set(4, 3, seed)?, samples, seed)?);
    reports.extend(verify_euclid_lipschitz(&small, samples, seed)?);
    Ok(reports)
}

/// Fixed-step 5-factor trajectories used by the theory checks.
pub fn theory_trajectories() -> Result<Vec<Trajectory>> {
    let mut out = Vec::new();
    for n in [4u32, 6, 10, 15] {
        let inst = GroverInstance::new(n, 1, None, None)?;
        for eps in [1e-2, 1e-4, 1e-8, 1e-12] {
            out.push(rga_run(
                &inst,
                RetractionKind::FiveFactor,
                StepPolicy::FixedInverseLipschitz,
                eps,
                Criterion::CostGap,
                crate::optimizer::DEFAULT_MAX_ITER,
            )?);
        }
    }
    Ok(out)
}

pub fn inequality_suite() -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for traj in theory_trajectories()? {
        reports.extend(verify_inequality_suite(&traj)?);
    }
    Ok(reports)
}

pub fn invariance_suite(iters: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for kind in RetractionKind::ALL {
        reports.push(verify_marked_set_invariance(5, 1, &[1, 2, 3, 4, 5], kind, iters)?);
        reports.push(verify_marked_set_invariance(5, 3, &[1, 2, 3], kind, iters)?);
        reports.push(verify_marked_set_invariance(5, 31, &[1, 2, 3], kind, iters)?);
    }
    Ok(reports)
}

/// Theory checks on a deliberately corrupted trajectory.
pub fn negative_control_suite() -> Result<Vec<CheckReport>> {
    let inst = GroverInstance::new(6, 1, None, None)?;
    let traj = rga_run(
        &inst,
        RetractionKind::FiveFactor,
        StepPolicy::FixedInverseLipschitz,
        1e-4,
        Criterion::CostGap,
        crate::optimizer::DEFAULT_MAX_ITER,
    )?;
    let mut reports = verify_inequality_suite(&corrupted_trajectory(&traj))?;
    for r in &mut reports {
        r.check = format!("negative-control/{}", r.check);
    }
    Ok(reports)
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckReport>> {
    const SAMPLES: usize = 1000;
    const ITERS: usize = 50;
    Ok(match name {
        "reduced-vs-full" => oracle_suite(ITERS)?,
        "first-order" => first_order_suite(100, seed)?,
        "geometry" => geometry_suite(SAMPLES, seed)?,
        "inequalities" => inequality_suite()?,
        "invariance" => invariance_suite(ITERS)?,
        "negative-control" => negative_control_suite()?,
        "all" => {
            let mut all = Vec::new();
            for s in SUITES.iter().filter(|s| !matches!(**s, "all" | "negative-control")) {
                all.extend(run_suite(s, seed)?);
            }
            all
        }
        _ => {
            return Err(crate::error::Error::InvalidArgument(format!(
                "unknown suite '{name}'; expected one of {}",
                SUITES.join(", ")
            )))
        }
    })
}
