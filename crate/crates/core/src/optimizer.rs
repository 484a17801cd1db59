//! Riemannian gradient ascent over the reduced dynamics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{DerivedConstants, GroverInstance};
use crate::reduced::{plane_step, transfer_matrix, PlaneState};
use crate::retraction::{h_exp_multiplier, retraction_gates, GateSequence, RetractionKind};

pub const DEFAULT_GRID_POINTS: usize = 2048;
pub const DEFAULT_REFINE_ITERS: usize = 60;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSearchParams {
    pub grid_points: usize,
    pub refine_iters: usize,
}

impl LineSearchParams {
    pub fn new(grid_points: usize, refine_iters: usize) -> Result<Self> {
        if grid_points < 16 || refine_iters < 10 {
            return Err(Error::InvalidArgument(format!(
                "line search needs grid_points >= 16 and refine_iters >= 10, got {grid_points}/{refine_iters}"
            )));
        }
        Ok(Self { grid_points, refine_iters })
    }
}

impl Default for LineSearchParams {
    fn default() -> Self {
        Self { grid_points: DEFAULT_GRID_POINTS, refine_iters: DEFAULT_REFINE_ITERS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepPolicy {
    /// `t = 1 / L_Rie`.
    FixedInverseLipschitz,
    ExactLineSearch(LineSearchParams),
}

impl StepPolicy {
    pub fn els() -> Self {
        StepPolicy::ExactLineSearch(LineSearchParams::default())
    }

    pub fn label(&self) -> &'static str {
        match self {
            StepPolicy::FixedInverseLipschitz => "fixed",
            StepPolicy::ExactLineSearch(_) => "els",
        }
    }
}

impl fmt::Display for StepPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StepPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(StepPolicy::FixedInverseLipschitz),
            "els" => Ok(StepPolicy::els()),
            _ => Err(Error::InvalidArgument(format!("unknown step policy '{s}'; expected fixed or els"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    /// Stop once `|1 - q| < eps`.
    CostGap,
    /// Stop once the gradient norm is `<= eps`.
    GradNorm,
}

impl Criterion {
    pub fn satisfied(self, state: &PlaneState, eps: f64) -> bool {
        match self {
            Criterion::CostGap => (1.0 - state.q()).abs() < eps,
            Criterion::GradNorm => state.grad_norm() <= eps,
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cost" => Ok(Criterion::CostGap),
            "grad" => Ok(Criterion::GradNorm),
            _ => Err(Error::InvalidArgument(format!("unknown criterion '{s}'; expected cost or grad"))),
        }
    }
}

/// One ascent step: the state it started from and the step taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub q: f64,
    pub grad_norm: f64,
    pub x: f64,
    pub y: f64,
    pub t: f64,
    /// Cumulative H-exp calls after this step, `(k + 1) * multiplier`.
    pub h_exp_calls: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinalState {
    pub q: f64,
    pub grad_norm: f64,
    pub x: f64,
    pub y: f64,
}

impl From<&PlaneState> for FinalState {
    fn from(s: &PlaneState) -> Self {
        let (x, y) = s.grad_coords();
        Self { q: s.q(), grad_norm: s.grad_norm(), x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: u32,
    pub size: u64,
    pub marked_count: u64,
    pub q0: f64,
    pub seed: Option<u64>,
}

impl From<&GroverInstance> for InstanceSummary {
    fn from(inst: &GroverInstance) -> Self {
        Self {
            n: inst.n(),
            size: inst.size(),
            marked_count: inst.marked_count(),
            q0: inst.q0(),
            seed: inst.seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub instance: InstanceSummary,
    pub kind: RetractionKind,
    pub policy: StepPolicy,
    pub criterion: Criterion,
    pub epsilon: f64,
    pub l_rie: f64,
    pub records: Vec<IterationRecord>,
    /// State after the last step.
    pub final_state: FinalState,
    pub converged: bool,
    pub total_h_exp_calls: u64,
}

impl Trajectory {
    /// Number of ascent steps taken.
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Success probabilities `q_0, ..., q_T` including the final state.
    pub fn q_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.q).chain(std::iter::once(self.final_state.q)).collect()
    }

    pub fn grad_norms(&self) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| r.grad_norm)
            .chain(std::iter::once(self.final_state.grad_norm))
            .collect()
    }

    /// The full appended circuit, `V_{T-1} ... V_1 V_0`.
    pub fn circuit(&self) -> Result<GateSequence> {
        let mut gates = Vec::new();
        for r in self.records.iter().rev() {
            gates.extend_from_slice(retraction_gates(self.kind, r.t, r.x, r.y)?.gates());
        }
        GateSequence::from_gates(gates)
    }
}

pub fn fixed_step(consts: &DerivedConstants) -> f64 {
    1.0 / consts.l_rie
}

/// Upper end of the line-search window for a direction of modulus `r`.
///
/// The 5-factor fragment is exactly periodic in `t` with period `4 pi / r`.
/// The 6- and 8-factor fragments mix diffusion angles with incommensurate
/// coefficients, and their best step often lies beyond one such period, so
/// they search four periods.
pub fn search_window(kind: RetractionKind, r: f64) -> f64 {
    let periods = match kind {
        RetractionKind::FiveFactor => 1.0,
        RetractionKind::SixFactor | RetractionKind::EightFactor => 4.0,
    };
    periods * 4.0 * PI / r
}

/// Success probability after one retraction step of size `t` from `state`.
pub fn q_after_step(state: &PlaneState, kind: RetractionKind, t: f64) -> Result<f64> {
    let (x, y) = state.grad_coords();
    let m = transfer_matrix(&retraction_gates(kind, t, x, y)?, state.q0);
    let [alpha, _] = m.apply([state.alpha, state.beta]);
    Ok(state.q0 * alpha.norm_sqr())
}

/// Maximizes `q(t)` over `[0, search_window]` with a uniform grid followed by
/// golden-section refinement around the best grid point. Ties go to the
/// smallest step.
pub fn exact_line_search(state: &PlaneState, kind: RetractionKind, params: &LineSearchParams) -> Result<f64> {
    let (x, y) = state.grad_coords();
    let r = x.hypot(y);
    if r == 0.0 {
        return Err(Error::ZeroGradient);
    }
    let q = |t: f64| q_after_step(state, kind, t);

    let hi = search_window(kind, r);
    let last = params.grid_points - 1;
    let h = hi / last as f64;
    let (mut best_i, mut best_q) = (0, q(0.0)?);
    for i in 1..=last {
        let v = q(i as f64 * h)?;
        if v > best_q {
            best_i = i;
            best_q = v;
        }
    }
    let best_t = best_i as f64 * h;

    let mut a = best_i.saturating_sub(1) as f64 * h;
    let mut b = (best_i + 1).min(last) as f64 * h;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut qc, mut qd) = (q(c)?, q(d)?);
    for _ in 0..params.refine_iters {
        if qc >= qd {
            b = d;
            d = c;
            qd = qc;
            c = b - inv_phi * (b - a);
            qc = q(c)?;
        } else {
            a = c;
            c = d;
            qc = qd;
            d = a + inv_phi * (b - a);
            qd = q(d)?;
        }
    }
    let t_ref = 0.5 * (a + b);
    if q(t_ref)? > best_q {
        Ok(t_ref)
    } else {
        Ok(best_t)
    }
}

/// Step size chosen by `policy` at `state`.
pub fn choose_step(
    state: &PlaneState,
    kind: RetractionKind,
    policy: &StepPolicy,
    consts: &DerivedConstants,
) -> Result<f64> {
    match policy {
        StepPolicy::FixedInverseLipschitz => Ok(fixed_step(consts)),
        StepPolicy::ExactLineSearch(p) => exact_line_search(state, kind, p),
    }
}

/// Applies the retraction step `t` along the current gradient.
pub fn advance(state: &PlaneState, kind: RetractionKind, t: f64) -> Result<PlaneState> {
    let (x, y) = state.grad_coords();
    let gates = retraction_gates(kind, t, x, y)?;
    plane_step(state, &transfer_matrix(&gates, state.q0))
}

/// Runs the ascent from the uniform superposition (`U_0 = I`).
pub fn rga_run(
    inst: &GroverInstance,
    kind: RetractionKind,
    policy: StepPolicy,
    epsilon: f64,
    criterion: Criterion,
    max_iter: usize,
) -> Result<Trajectory> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {epsilon}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
    }
    let consts = inst.constants();
    let mult = h_exp_multiplier(kind);
    let mut state = PlaneState::initial(inst.q0());
    let mut records = Vec::new();
    let mut converged = false;

    loop {
        if criterion.satisfied(&state, epsilon) {
            converged = true;
            break;
        }
        if records.len() == max_iter {
            break;
        }
        let k = records.len();
        let t = choose_step(&state, kind, &policy, &consts)?;
        let (x, y) = state.grad_coords();
        records.push(IterationRecord {
            k,
            q: state.q(),
            grad_norm: state.grad_norm(),
            x,
            y,
            t,
            h_exp_calls: (k as u64 + 1) * mult,
        });
        state = advance(&state, kind, t)?;
    }

    Ok(Trajectory {
        instance: inst.into(),
        kind,
        policy,
        criterion,
        epsilon,
        l_rie: consts.l_rie,
        total_h_exp_calls: records.len() as u64 * mult,
        records,
        final_state: (&state).into(),
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u32, m: u64) -> GroverInstance {
        GroverInstance::new(n, m, None, None).unwrap()
    }

    #[test]
    fn fixed_step_values() {
        let k = DerivedConstants { c0: 1.0, l_rie: 2.0, l_euc: 2.0 };
        assert_eq!(fixed_step(&k), 0.5);
        let t = fixed_step(&inst(15, 1).constants());
        assert!((t - 1.0 / 130.002).abs() < 1e-7);
        let t = fixed_step(&inst(2, 1).constants());
        assert!((t - 1.0 / (2.0 + 4.0 / 6f64.sqrt())).abs() < 1e-15);
        assert!((t - 0.275_255).abs() < 1e-6);
    }

    #[test]
    fn n2_fixed_step_converges_with_ascent_recurrence() {
        let traj = rga_run(&inst(2, 1), RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz, 1e-6, Criterion::CostGap, 10_000)
            .unwrap();
        assert!(traj.converged);
        assert!(traj.final_state.q >= 1.0 - 1e-6);
        let q = traj.q_values();
        for w in q.windows(2) {
            assert!(w[1] >= w[0] + w[0] * (1.0 - w[0]) / traj.l_rie - 1e-12);
        }
    }

    #[test]
    fn records_count_h_exp_calls() {
        let traj = rga_run(&inst(6, 1), RetractionKind::SixFactor, StepPolicy::FixedInverseLipschitz, 1e-3, Criterion::CostGap, 100_000)
            .unwrap();
        for r in &traj.records {
            assert_eq!(r.h_exp_calls, (r.k as u64 + 1) * 3);
        }
        assert_eq!(traj.total_h_exp_calls, traj.iterations() as u64 * 3);
    }

    #[test]
    fn n2_line_search_best_first_step() {
        // The 5-factor curve from the uniform state at N = 4 peaks below 1;
        // the value comes from a dense scan of q(t) over one period.
        let s = PlaneState::initial(0.25);
        let t = exact_line_search(&s, RetractionKind::FiveFactor, &LineSearchParams::default()).unwrap();
        let q1 = q_after_step(&s, RetractionKind::FiveFactor, t).unwrap();
        assert!((q1 - 0.978_735_428).abs() < 1e-8, "q1 = {q1}");
        let traj = rga_run(&inst(2, 1), RetractionKind::FiveFactor, StepPolicy::els(), 1e-9, Criterion::CostGap, 100)
            .unwrap();
        assert!(traj.converged && traj.iterations() <= 4, "T = {}", traj.iterations());
    }

    #[test]
    fn line_search_rejects_zero_gradient() {
        let s = PlaneState::new(num_complex::Complex64::new(2.0, 0.0), num_complex::Complex64::new(0.0, 0.0), 0.25).unwrap();
        assert!(matches!(
            exact_line_search(&s, RetractionKind::FiveFactor, &LineSearchParams::default()),
            Err(Error::ZeroGradient)
        ));
    }

    #[test]
    fn line_search_params_validated() {
        assert!(LineSearchParams::new(15, 10).is_err());
        assert!(LineSearchParams::new(16, 9).is_err());
        assert!(LineSearchParams::new(16, 10).is_ok());
    }

    #[test]
    fn max_iter_stops_without_error() {
        let traj = rga_run(&inst(10, 1), RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz, 1e-6, Criterion::CostGap, 3)
            .unwrap();
        assert!(!traj.converged);
        assert_eq!(traj.iterations(), 3);
    }

    #[test]
    fn grad_norm_criterion() {
        let traj = rga_run(&inst(4, 1), RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz, 1e-3, Criterion::GradNorm, 100_000)
            .unwrap();
        assert!(traj.converged);
        assert!(traj.final_state.grad_norm <= 1e-3);
        assert!(traj.records.iter().all(|r| r.grad_norm > 1e-3));
    }

    #[test]
    fn invalid_arguments() {
        let i = inst(3, 1);
        let p = StepPolicy::FixedInverseLipschitz;
        assert!(rga_run(&i, RetractionKind::FiveFactor, p, 0.0, Criterion::CostGap, 10).is_err());
        assert!(rga_run(&i, RetractionKind::FiveFactor, p, 1e-3, Criterion::CostGap, 0).is_err());
    }

    #[test]
    fn policy_and_criterion_parsing() {
        assert_eq!("fixed".parse::<StepPolicy>().unwrap(), StepPolicy::FixedInverseLipschitz);
        assert!(matches!("els".parse::<StepPolicy>().unwrap(), StepPolicy::ExactLineSearch(_)));
        assert!("armijo".parse::<StepPolicy>().is_err());
        assert_eq!("grad".parse::<Criterion>().unwrap(), Criterion::GradNorm);
        assert!("x".parse::<Criterion>().is_err());
    }
}
