//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input or I/O failure, 2 when a run
//! does not converge or a verification check fails.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{
    default_eps_list, fit_sweep_eps, fit_sweep_n, fmt_f64, sweep_eps, sweep_n, write_fits_csv, write_sweep_csv, write_trajectory_csv,
    Method, SweepRow,
};
use crate::instance::GroverInstance;
use crate::optimizer::{rga_run, Criterion, StepPolicy, Trajectory, DEFAULT_MAX_ITER};
use crate::retraction::{h_exp_multiplier, Gate, GateSequence, RetractionKind};
use crate::statevector::{apply_gates, success_prob, uniform_state};
use crate::verification::{all_passed, run_suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "grover-rga", version, about = "Riemannian gradient ascent for Grover search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the ascent once and print a summary line.
    Run(RunArgs),
    /// Sweep the number of qubits at a fixed tolerance.
    SweepN(SweepNArgs),
    /// Sweep the tolerance at a fixed number of qubits.
    SweepEps(SweepEpsArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Run the ascent and write the appended circuit as JSON.
    ExportCircuit(ExportArgs),
}

#[derive(Debug, Args)]
pub struct RunSpec {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u64,
    /// Comma-separated marked indices.
    #[arg(long)]
    pub marked: Option<String>,
    /// 5, 6 or 8.
    #[arg(long)]
    pub retraction: String,
    /// fixed or els.
    #[arg(long)]
    pub policy: String,
    #[arg(long)]
    pub eps: f64,
    /// cost or grad.
    #[arg(long, default_value = "cost")]
    pub criterion: String,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    /// Trajectory CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepNArgs {
    #[arg(long)]
    pub n_min: u32,
    #[arg(long)]
    pub n_max: u32,
    #[arg(long)]
    pub eps: f64,
    /// `all` or a list such as `5-fixed,5-els,6-els,8-els`.
    #[arg(long, default_value = "all")]
    pub methods: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepEpsArgs {
    #[arg(long)]
    pub n: u32,
    /// Comma-separated tolerances; defaults to 1e-2 down to 1e-12 by decades.
    #[arg(long)]
    pub eps_list: Option<String>,
    #[arg(long, default_value = "all")]
    pub methods: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the reports as a JSON list.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitMetadata {
    pub n: u32,
    #[serde(rename = "M")]
    pub marked_count: u64,
    pub marked: Option<Vec<u64>>,
    pub q0: f64,
    pub kind: String,
    pub policy: String,
    pub epsilon: f64,
    pub seed: Option<u64>,
    pub iterations: usize,
    pub h_exp_multiplier: u64,
    pub h_exp_calls: u64,
}

/// A raw, unmerged gate list in operator order (first gate leftmost).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitExport {
    pub metadata: CircuitMetadata,
    pub gates: Vec<Gate>,
    pub expected_final_q: f64,
}

impl CircuitExport {
    pub fn from_trajectory(traj: &Trajectory, inst: &GroverInstance) -> Result<Self> {
        Ok(Self {
            metadata: CircuitMetadata {
                n: inst.n(),
                marked_count: inst.marked_count(),
                marked: inst.marked().map(<[u64]>::to_vec),
                q0: inst.q0(),
                kind: traj.kind.to_string(),
                policy: traj.policy.label().to_string(),
                epsilon: traj.epsilon,
                seed: inst.seed(),
                iterations: traj.iterations(),
                h_exp_multiplier: h_exp_multiplier(traj.kind),
                h_exp_calls: traj.total_h_exp_calls,
            },
            gates: traj.circuit()?.into(),
            expected_final_q: traj.final_state.q,
        })
    }

    /// Instance used for replay: the recorded marked set, else the first `M`
    /// basis states.
    pub fn replay_instance(&self) -> Result<GroverInstance> {
        let m = &self.metadata;
        let marked = m.marked.clone().unwrap_or_else(|| (0..m.marked_count).collect());
        GroverInstance::new(m.n, m.marked_count, Some(marked), m.seed)
    }

    /// Success probability after running the gates on the statevector simulator.
    pub fn replay(&self) -> Result<f64> {
        let inst = self.replay_instance()?;
        let mut state = uniform_state(&inst)?;
        apply_gates(&mut state, &GateSequence::from_gates(self.gates.clone())?, &inst)?;
        success_prob(&state, &inst)
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::InvalidArgument(format!("bad index '{p}'"))))
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::InvalidArgument(format!("bad number '{p}'"))))
        .collect::<Result<_>>()?;
    if v.iter().any(|e| e.is_nan() || *e <= 0.0 || *e >= 1.0) {
        return Err(Error::InvalidArgument("tolerances must lie in (0, 1)".into()));
    }
    Ok(v)
}

fn build_run(spec: &RunSpec) -> Result<(GroverInstance, Trajectory)> {
    let marked = spec.marked.as_deref().map(parse_u64_list).transpose()?;
    let inst = GroverInstance::new(spec.n, spec.m, marked, spec.seed)?;
    let kind: RetractionKind = spec.retraction.parse()?;
    let policy: StepPolicy = spec.policy.parse()?;
    let criterion: Criterion = spec.criterion.parse()?;
    let traj = rga_run(&inst, kind, policy, spec.eps, criterion, spec.max_iter)?;
    Ok((inst, traj))
}

fn create_file(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(fs::File::create(path)?)
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, traj) = build_run(&args.spec)?;
    if let Some(path) = &args.out {
        write_trajectory_csv(&traj, create_file(path)?)?;
    }
    writeln!(
        out,
        "converged={} T={} h_exp_calls={} final_q={}",
        traj.converged,
        traj.iterations(),
        traj.total_h_exp_calls,
        fmt_f64(traj.final_state.q)
    )?;
    Ok(if traj.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn write_sweep(rows: &[SweepRow], fits: &[crate::experiments::FitRow], dir: &Path, stem: &str) -> Result<i32> {
    fs::create_dir_all(dir)?;
    write_sweep_csv(rows, fs::File::create(dir.join(format!("{stem}.csv")))?)?;
    write_fits_csv(fits, fs::File::create(dir.join(format!("fits_{stem}.csv")))?)?;
    Ok(if rows.iter().all(|r| r.converged) { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_sweep_n(args: &SweepNArgs, out: &mut dyn Write) -> Result<i32> {
    let methods = Method::parse_list(&args.methods)?;
    let rows = sweep_n(args.n_min, args.n_max, args.eps, &methods)?;
    let fits = fit_sweep_n(&rows)?;
    for f in &fits {
        writeln!(out, "{} slope={:.6} intercept={:.6} r2={:.6}", f.method, f.fit.slope, f.fit.intercept, f.fit.r2)?;
    }
    write_sweep(&rows, &fits, &args.out, "sweep_n")
}

fn cmd_sweep_eps(args: &SweepEpsArgs, out: &mut dyn Write) -> Result<i32> {
    let methods = Method::parse_list(&args.methods)?;
    let eps_list = match &args.eps_list {
        Some(s) => parse_f64_list(s)?,
        None => default_eps_list(),
    };
    let rows = sweep_eps(args.n, &eps_list, &methods)?;
    let fits = fit_sweep_eps(&rows)?;
    for r in &rows {
        writeln!(out, "{} eps={:e} T={} h_exp_calls={}", r.method, r.epsilon, r.iterations, r.h_exp_calls)?;
    }
    write_sweep(&rows, &fits, &args.out, "sweep_eps")
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let reports = run_suite(&args.suite, args.seed)?;
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    if let Some(path) = &args.json {
        serde_json::to_writer_pretty(create_file(path)?, &reports)?;
    }
    Ok(if all_passed(&reports) { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_export_circuit(args: &ExportArgs, out: &mut dyn Write) -> Result<i32> {
    let (inst, traj) = build_run(&args.spec)?;
    let export = CircuitExport::from_trajectory(&traj, &inst)?;
    serde_json::to_writer_pretty(create_file(&args.out)?, &export)?;
    writeln!(
        out,
        "converged={} gates={} expected_final_q={}",
        traj.converged,
        export.gates.len(),
        fmt_f64(export.expected_final_q)
    )?;
    Ok(if traj.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::SweepN(a) => cmd_sweep_n(a, out),
        Command::SweepEps(a) => cmd_sweep_eps(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::ExportCircuit(a) => cmd_export_circuit(a, out),
    }
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (Result<i32>, String) {
        let cli = Cli::try_parse_from(std::iter::once("grover-rga").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = execute(&cli, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn run_summary_line() {
        let (code, out) = run_cli(&["run", "--n", "6", "--m", "1", "--retraction", "5", "--policy", "fixed", "--eps", "1e-4"]);
        assert_eq!(code.unwrap(), EXIT_OK);
        assert!(out.starts_with("converged=true T="), "{out}");
        assert!(out.contains(" h_exp_calls=") && out.contains(" final_q="));
    }

    #[test]
    fn invalid_inputs_are_errors() {
        for args in [
            &["run", "--n", "0", "--m", "1", "--retraction", "5", "--policy", "fixed", "--eps", "1e-4"][..],
            &["run", "--n", "4", "--m", "1", "--retraction", "7", "--policy", "fixed", "--eps", "1e-4"],
            &["run", "--n", "4", "--m", "1", "--retraction", "5", "--policy", "slow", "--eps", "1e-4"],
            &["run", "--n", "4", "--m", "2", "--marked", "1", "--retraction", "5", "--policy", "els", "--eps", "1e-4"],
            &["verify", "--suite", "nope"],
        ] {
            assert!(run_cli(args).0.is_err(), "{args:?}");
        }
    }

    #[test]
    fn non_convergence_exit_code() {
        let (code, out) = run_cli(&[
            "run", "--n", "10", "--m", "1", "--retraction", "5", "--policy", "fixed", "--eps", "1e-6", "--max-iter", "3",
        ]);
        assert_eq!(code.unwrap(), EXIT_NOT_CONVERGED);
        assert!(out.starts_with("converged=false T=3 h_exp_calls=6"));
    }

    #[test]
    fn circuit_export_replays() {
        let (inst, traj) = build_run(&RunSpec {
            n: 6,
            m: 2,
            marked: Some("3,40".into()),
            retraction: "5".into(),
            policy: "fixed".into(),
            eps: 1e-4,
            criterion: "cost".into(),
            max_iter: DEFAULT_MAX_ITER,
            seed: None,
        })
        .unwrap();
        let export = CircuitExport::from_trajectory(&traj, &inst).unwrap();
        assert_eq!(export.gates.len(), 5 * traj.iterations());
        let json = serde_json::to_string(&export).unwrap();
        let back: CircuitExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, export);
        assert!((back.replay().unwrap() - back.expected_final_q).abs() < 1e-10);
        assert!(json.contains(r#""generator":"PSI0""#) && json.contains(r#""generator":"H""#));
    }

    #[test]
    fn eps_list_validation() {
        assert_eq!(parse_f64_list("1e-2, 1e-3").unwrap(), vec![1e-2, 1e-3]);
        assert!(parse_f64_list("0").is_err());
        assert!(parse_f64_list("x").is_err());
        assert!(parse_u64_list("1,a").is_err());
    }
}
