//! Exact two-dimensional simulation of the ascent iteration.
//!
//! Every state reached from the uniform superposition by oracle and
//! diffusion exponentials lives in the Grover plane spanned by
//! `u = H|psi0>` and `v = (I - H)|psi0>`. The basis is orthogonal but not
//! normalized (`|u|^2 = q0`, `|v|^2 = 1 - q0`), so a state `alpha u + beta v`
//! has weighted norm `q0 |alpha|^2 + (1 - q0) |beta|^2`.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::retraction::{Gate, GateSequence, Generator};

/// Drift beyond which `plane_step` reports a malformed transfer matrix.
pub const DRIFT_LIMIT: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// `exp(i theta H)` restricted to the plane: `diag(e^{i theta}, 1)`.
pub fn e_h(theta: f64) -> Mat2 {
    Mat2([[Complex64::cis(theta), ZERO], [ZERO, ONE]])
}

/// Plane representation of the diffusion projector `|psi0><psi0|`.
pub fn psi0_block(q0: f64) -> Mat2 {
    let a = Complex64::new(q0, 0.0);
    let b = Complex64::new(1.0 - q0, 0.0);
    Mat2([[a, b], [a, b]])
}

/// `exp(i theta psi0) = I + (e^{i theta} - 1) Psi0` in the plane.
pub fn e_psi0(theta: f64, q0: f64) -> Mat2 {
    let w = Complex64::cis(theta) - ONE;
    let p = psi0_block(q0).0;
    Mat2([[ONE + w * p[0][0], w * p[0][1]], [w * p[1][0], ONE + w * p[1][1]]])
}

pub fn gate_matrix(gate: &Gate, q0: f64) -> Mat2 {
    match gate.generator {
        Generator::HProj => e_h(gate.angle),
        Generator::Psi0Proj => e_psi0(gate.angle, q0),
    }
}

/// Product of the gate matrices in operator order (first gate leftmost).
pub fn transfer_matrix(gates: &GateSequence, q0: f64) -> Mat2 {
    gates.gates().iter().fold(Mat2::IDENTITY, |acc, g| acc * gate_matrix(g, q0))
}

/// Coordinates of a normalized state in the `{u, v}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub q0: f64,
}

impl PlaneState {
    /// The uniform superposition `|psi0> = u + v`.
    pub fn initial(q0: f64) -> Self {
        Self { alpha: ONE, beta: ONE, q0 }
    }

    pub fn new(alpha: Complex64, beta: Complex64, q0: f64) -> Result<Self> {
        let s = Self { alpha, beta, q0 };
        let drift = (s.weighted_norm() - 1.0).abs();
        if drift > DRIFT_LIMIT {
            return Err(Error::NormalizationDrift { drift });
        }
        Ok(s)
    }

    pub fn weighted_norm(&self) -> f64 {
        self.q0 * self.alpha.norm_sqr() + (1.0 - self.q0) * self.beta.norm_sqr()
    }

    /// Success probability `q = q0 |alpha|^2`.
    pub fn q(&self) -> f64 {
        self.q0 * self.alpha.norm_sqr()
    }

    /// `z = alpha * conj(beta)`; the gradient is `Re z X0 + Im z Y0`.
    pub fn z(&self) -> Complex64 {
        self.alpha * self.beta.conj()
    }

    pub fn grad_coords(&self) -> (f64, f64) {
        grad_coords(self)
    }

    /// Frobenius norm of the gradient, `sqrt(2 q (1 - q))`.
    pub fn grad_norm(&self) -> f64 {
        let q = self.q().clamp(0.0, 1.0);
        (2.0 * q * (1.0 - q)).sqrt()
    }

    pub fn scaled(&self, phase: Complex64) -> Self {
        Self { alpha: self.alpha * phase, beta: self.beta * phase, q0: self.q0 }
    }
}

/// Applies a transfer matrix. The result is never renormalized; drift past
/// [`DRIFT_LIMIT`] is reported as an error.
pub fn plane_step(state: &PlaneState, m: &Mat2) -> Result<PlaneState> {
    let [alpha, beta] = m.apply([state.alpha, state.beta]);
    PlaneState::new(alpha, beta, state.q0)
}

pub fn grad_coords(state: &PlaneState) -> (f64, f64) {
    let z = state.z();
    (z.re, z.im)
}

/// Gradient norm as a function of the success probability.
pub fn grad_norm(q: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&q) {
        return Err(Error::InvalidArgument(format!("success probability {q} outside [0, 1]")));
    }
    let q = q.clamp(0.0, 1.0);
    Ok((2.0 * q * (1.0 - q)).sqrt())
}
