//! Trajectory, problem-size and accuracy sweeps, and least-squares fits.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::GroverInstance;
use crate::optimizer::{rga_run, Criterion, StepPolicy, Trajectory, DEFAULT_MAX_ITER};
use crate::reduced::{plane_step, transfer_matrix, PlaneState};
use crate::retraction::{h_exp_multiplier, Gate, GateSequence, RetractionKind};

pub const TRAJECTORY_HEADER: [&str; 7] = ["k", "q", "grad_norm", "x", "y", "t", "h_exp_calls"];
pub const SWEEP_HEADER: [&str; 10] =
    ["method", "retraction", "policy", "n", "N", "sqrt_N", "epsilon", "iterations", "h_exp_calls", "runtime_seconds"];
pub const FITS_HEADER: [&str; 5] = ["method", "x_variable", "slope", "intercept", "r2"];

/// Smallest `n` included in the fit over problem size.
pub const SWEEP_N_FIT_MIN: u32 = 8;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A retraction paired with a step policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Method {
    pub kind: RetractionKind,
    pub policy: StepPolicy,
}

impl Method {
    pub const fn new(kind: RetractionKind, policy: StepPolicy) -> Self {
        Self { kind, policy }
    }

    /// The four methods compared in the sweeps.
    pub fn standard() -> Vec<Method> {
        vec![
            Method::new(RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz),
            Method::new(RetractionKind::FiveFactor, StepPolicy::els()),
            Method::new(RetractionKind::SixFactor, StepPolicy::els()),
            Method::new(RetractionKind::EightFactor, StepPolicy::els()),
        ]
    }

    /// Parses `all` or a comma-separated list such as `5-fixed,8-els`.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let s = s.trim();
        if s == "all" {
            return Ok(Self::standard());
        }
        let methods: Vec<Method> = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        if methods.is_empty() {
            return Err(Error::InvalidArgument("empty method list".into()));
        }
        Ok(methods)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.kind, self.policy)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, policy) = s
            .rsplit_once('-')
            .ok_or_else(|| Error::InvalidArgument(format!("method '{s}' must look like 5-fixed or 6-factor-els")))?;
        Ok(Method::new(kind.parse()?, policy.parse()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: String,
    pub retraction: RetractionKind,
    pub policy: String,
    pub n: u32,
    pub size: u64,
    pub sqrt_n: f64,
    pub epsilon: f64,
    pub iterations: usize,
    pub h_exp_calls: u64,
    pub converged: bool,
    pub runtime_seconds: f64,
}

/// Runs one method on the reduced dynamics for `n` qubits, one marked item.
pub fn sweep_point(n: u32, method: Method, epsilon: f64) -> Result<SweepRow> {
    let inst = GroverInstance::new(n, 1, None, None)?;
    let start = Instant::now();
    let traj = rga_run(&inst, method.kind, method.policy, epsilon, Criterion::CostGap, DEFAULT_MAX_ITER)?;
    let runtime_seconds = start.elapsed().as_secs_f64();
    Ok(SweepRow {
        method: method.to_string(),
        retraction: method.kind,
        policy: method.policy.label().to_string(),
        n,
        size: inst.size(),
        sqrt_n: (inst.size() as f64).sqrt(),
        epsilon,
        iterations: traj.iterations(),
        h_exp_calls: traj.iterations() as u64 * h_exp_multiplier(method.kind),
        converged: traj.converged,
        runtime_seconds,
    })
}

fn run_grid(points: Vec<(u32, Method, f64)>) -> Result<Vec<SweepRow>> {
    let mut rows = points
        .into_par_iter()
        .map(|(n, m, eps)| sweep_point(n, m, eps))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.n.cmp(&b.n))
            .then(b.epsilon.total_cmp(&a.epsilon))
    });
    Ok(rows)
}

pub fn sweep_n(n_min: u32, n_max: u32, epsilon: f64, methods: &[Method]) -> Result<Vec<SweepRow>> {
    if n_min < 1 || n_min > n_max {
        return Err(Error::InvalidArgument(format!("bad qubit range {n_min}..={n_max}")));
    }
    if methods.is_empty() {
        return Err(Error::InvalidArgument("empty method list".into()));
    }
    let points = methods.iter().flat_map(|&m| (n_min..=n_max).map(move |n| (n, m, epsilon))).collect();
    run_grid(points)
}

pub fn sweep_eps(n: u32, eps_list: &[f64], methods: &[Method]) -> Result<Vec<SweepRow>> {
    if eps_list.is_empty() || methods.is_empty() {
        return Err(Error::InvalidArgument("empty tolerance or method list".into()));
    }
    let points = methods.iter().flat_map(|&m| eps_list.iter().map(move |&e| (n, m, e))).collect();
    run_grid(points)
}

/// `1e-2, 1e-3, ..., 1e-12`.
pub fn default_eps_list() -> Vec<f64> {
    (2..=12).map(|k| 10f64.powi(-k)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
///
/// `r2` is 1 when the targets have zero variance.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("fit needs at least two (x, y) pairs".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("degenerate fit: all x values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(FitResult { slope, intercept, r2 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub method: String,
    pub x_variable: String,
    pub fit: FitResult,
}

fn fit_by_method(rows: &[SweepRow], x_variable: &str, x: impl Fn(&SweepRow) -> f64) -> Result<Vec<FitRow>> {
    let mut methods: Vec<&str> = rows.iter().map(|r| r.method.as_str()).collect();
    methods.dedup();
    methods
        .into_iter()
        .map(|m| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                rows.iter().filter(|r| r.method == m).map(|r| (x(r), r.h_exp_calls as f64)).unzip();
            Ok(FitRow { method: m.to_string(), x_variable: x_variable.to_string(), fit: fit_line(&xs, &ys)? })
        })
        .collect()
}

/// H-exp calls against `sqrt(N)` per method, over rows with `n >= 8`.
pub fn fit_sweep_n(rows: &[SweepRow]) -> Result<Vec<FitRow>> {
    let window: Vec<SweepRow> = rows.iter().filter(|r| r.n >= SWEEP_N_FIT_MIN).cloned().collect();
    fit_by_method(&window, "sqrt_N", |r| r.sqrt_n)
}

/// H-exp calls against `log10(1 / eps)` per method.
pub fn fit_sweep_eps(rows: &[SweepRow]) -> Result<Vec<FitRow>> {
    fit_by_method(rows, "log10_inv_epsilon", |r| -r.epsilon.log10())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.clone(),
            r.retraction.to_string(),
            r.policy.clone(),
            r.n.to_string(),
            r.size.to_string(),
            fmt_f64(r.sqrt_n),
            fmt_f64(r.epsilon),
            r.iterations.to_string(),
            r.h_exp_calls.to_string(),
            fmt_f64(r.runtime_seconds),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fits_csv<W: Write>(fits: &[FitRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FITS_HEADER)?;
    for f in fits {
        w.write_record([
            f.method.clone(),
            f.x_variable.clone(),
            fmt_f64(f.fit.slope),
            fmt_f64(f.fit.intercept),
            fmt_f64(f.fit.r2),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per step, then a terminal row for the final state with an empty
/// step size and the total H-exp count.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for r in &traj.records {
        w.write_record([
            r.k.to_string(),
            fmt_f64(r.q),
            fmt_f64(r.grad_norm),
            fmt_f64(r.x),
            fmt_f64(r.y),
            fmt_f64(r.t),
            r.h_exp_calls.to_string(),
        ])?;
    }
    let f = &traj.final_state;
    w.write_record([
        traj.iterations().to_string(),
        fmt_f64(f.q),
        fmt_f64(f.grad_norm),
        fmt_f64(f.x),
        fmt_f64(f.y),
        String::new(),
        traj.total_h_exp_calls.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

/// The representative run: `n` qubits, one marked item, 5-factor retraction,
/// fixed step `1 / L_Rie`, stop at `|1 - q| < eps`.
pub fn run_trajectory_experiment(n: u32, epsilon: f64) -> Result<Trajectory> {
    let inst = GroverInstance::new(n, 1, None, None)?;
    rga_run(&inst, RetractionKind::FiveFactor, StepPolicy::FixedInverseLipschitz, epsilon, Criterion::CostGap, DEFAULT_MAX_ITER)
}

/// Success probabilities of fixed-angle Grover iterations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicRun {
    /// `q_0, ..., q_iterations`.
    pub q_values: Vec<f64>,
}

impl ClassicRun {
    /// Index and value of the largest success probability.
    pub fn peak(&self) -> (usize, f64) {
        self.q_values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, q)| if q > best.1 { (k, q) } else { best })
    }
}

/// Iterates the fixed pair `exp(i pi psi0) exp(i pi H)` on the reduced dynamics.
pub fn classic_grover_baseline(inst: &GroverInstance, iterations: usize) -> Result<ClassicRun> {
    let pair = GateSequence::from_gates(vec![Gate::psi0(std::f64::consts::PI), Gate::h(std::f64::consts::PI)])?;
    let m = transfer_matrix(&pair, inst.q0());
    let mut state = PlaneState::initial(inst.q0());
    let mut q_values = vec![state.q()];
    for _ in 0..iterations {
        state = plane_step(&state, &m)?;
        q_values.push(state.q());
    }
    Ok(ClassicRun { q_values })
}
