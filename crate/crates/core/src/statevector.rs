//! Dense statevector simulator specialized to oracle and diffusion gates.
//!
//! An oracle exponential touches only the `M` marked amplitudes; a diffusion
//! exponential is a rank-one update through the overlap with `|psi0>`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::instance::GroverInstance;
use crate::retraction::{Gate, GateSequence, Generator};

pub const DEFAULT_MAX_QUBITS: u32 = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    amps: Vec<Complex64>,
}

impl FullState {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FullState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `<psi0|self>`.
    pub fn overlap_uniform(&self) -> Complex64 {
        let s: Complex64 = self.amps.iter().sum();
        s / (self.amps.len() as f64).sqrt()
    }
}

fn check_cap(inst: &GroverInstance, cap: u32) -> Result<()> {
    if inst.n() > cap {
        return Err(Error::CapExceeded { what: "statevector", n: inst.n(), cap });
    }
    Ok(())
}

/// `|psi0>` with the default cap of [`DEFAULT_MAX_QUBITS`].
pub fn uniform_state(inst: &GroverInstance) -> Result<FullState> {
    uniform_state_capped(inst, DEFAULT_MAX_QUBITS)
}

pub fn uniform_state_capped(inst: &GroverInstance, cap: u32) -> Result<FullState> {
    check_cap(inst, cap)?;
    let n = inst.size() as usize;
    let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    Ok(FullState { amps: vec![a; n] })
}

/// `|psi*>`: uniform over the marked items.
pub fn target_state(inst: &GroverInstance) -> Result<FullState> {
    let marked = inst.require_marked()?;
    check_cap(inst, DEFAULT_MAX_QUBITS)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); inst.size() as usize];
    let a = Complex64::new(1.0 / (marked.len() as f64).sqrt(), 0.0);
    for &i in marked {
        amps[i as usize] = a;
    }
    Ok(FullState { amps })
}

/// `exp(i theta H) = I + (e^{i theta} - 1) H`.
pub fn apply_h_exp(state: &mut FullState, theta: f64, inst: &GroverInstance) -> Result<()> {
    let marked = inst.require_marked()?;
    let phase = Complex64::cis(theta);
    for &i in marked {
        state.amps[i as usize] *= phase;
    }
    Ok(())
}

/// `exp(i theta psi0) = I + (e^{i theta} - 1) |psi0><psi0|`.
pub fn apply_psi0_exp(state: &mut FullState, theta: f64) {
    let n = state.amps.len() as f64;
    let shift = (Complex64::cis(theta) - 1.0) * state.overlap_uniform() / n.sqrt();
    for a in &mut state.amps {
        *a += shift;
    }
}

pub fn apply_gate(state: &mut FullState, gate: &Gate, inst: &GroverInstance) -> Result<()> {
    match gate.generator {
        Generator::HProj => apply_h_exp(state, gate.angle, inst),
        Generator::Psi0Proj => {
            apply_psi0_exp(state, gate.angle);
            Ok(())
        }
    }
}

/// Applies the sequence in operator order: rightmost gate first.
pub fn apply_gates(state: &mut FullState, gates: &GateSequence, inst: &GroverInstance) -> Result<()> {
    inst.require_marked()?;
    for g in gates.application_order() {
        apply_gate(state, g, inst)?;
    }
    Ok(())
}

/// Probability of measuring a marked item.
pub fn success_prob(state: &FullState, inst: &GroverInstance) -> Result<f64> {
    let marked = inst.require_marked()?;
    Ok(marked.iter().map(|&i| state.amps[i as usize].norm_sqr()).sum())
}

/// Coordinates `(alpha, beta)` of the projection onto the Grover plane in the
/// unnormalized basis `u = H|psi0>`, `v = (I - H)|psi0>`, together with the
/// norm of the component orthogonal to the plane.
pub fn plane_projection(state: &FullState, inst: &GroverInstance) -> Result<(Complex64, Complex64, f64)> {
    let marked = inst.require_marked()?;
    let n = inst.size() as f64;
    let q0 = inst.q0();
    let amp = 1.0 / n.sqrt();

    let total: Complex64 = state.amps.iter().sum();
    let on_marked: Complex64 = marked.iter().map(|&i| state.amps[i as usize]).sum();
    // <u|psi> / |u|^2 and <v|psi> / |v|^2
    let alpha = on_marked * amp / q0;
    let beta = (total - on_marked) * amp / (1.0 - q0);

    let mut is_marked = vec![false; state.amps.len()];
    for &i in marked {
        is_marked[i as usize] = true;
    }
    let a_amp = alpha * amp;
    let b_amp = beta * amp;
    let residual: f64 = state
        .amps
        .iter()
        .zip(&is_marked)
        .map(|(a, &m)| (a - if m { a_amp } else { b_amp }).norm_sqr())
        .sum();
    Ok((alpha, beta, residual.sqrt()))
}

/// Gradient coordinates `(Re z, Im z)` with `z = alpha conj(beta)`, computed
/// from the full state.
pub fn grad_coords_full(state: &FullState, inst: &GroverInstance) -> Result<(f64, f64)> {
    let (alpha, beta, _) = plane_projection(state, inst)?;
    let z = alpha * beta.conj();
    Ok((z.re, z.im))
}

/// Norm of the component of `state` outside `span{|psi0>, H|psi0>}`.
pub fn plane_residual(state: &FullState, inst: &GroverInstance) -> Result<f64> {
    Ok(plane_projection(state, inst)?.2)
}
