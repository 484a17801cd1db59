//! Grover-compatible retractions.
//!
//! Each retraction maps a step size `t` and gradient coordinates `(x, y)`
//! (the direction `x X0 + y Y0` before scaling by `t`) to the fragment of
//! oracle and diffusion exponentials appended to the circuit. Sequences are
//! written in operator order: the first gate is the leftmost factor and is
//! therefore applied last to a ket.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Projector generating a gate `exp(i * angle * P)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// Oracle projector `H` onto the marked subspace.
    #[serde(rename = "H")]
    HProj,
    /// Rank-one projector onto the uniform superposition.
    #[serde(rename = "PSI0")]
    Psi0Proj,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub generator: Generator,
    /// Rotation angle in radians, unreduced.
    pub angle: f64,
}

impl Gate {
    pub fn h(angle: f64) -> Self {
        Self { generator: Generator::HProj, angle }
    }

    pub fn psi0(angle: f64) -> Self {
        Self { generator: Generator::Psi0Proj, angle }
    }
}

/// An ordered product of projector exponentials.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GateSequence {
    gates: Vec<Gate>,
}

impl GateSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails if any angle is non-finite.
    pub fn from_gates(gates: Vec<Gate>) -> Result<Self> {
        if let Some(g) = gates.iter().find(|g| !g.angle.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite gate angle {}", g.angle)));
        }
        Ok(Self { gates })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of oracle (`HProj`) exponentials in the raw sequence.
    pub fn h_exp_count(&self) -> usize {
        self.gates.iter().filter(|g| g.generator == Generator::HProj).count()
    }

    /// Prepends `later` so that the result applies `self` first, then `later`.
    pub fn then(&self, later: &GateSequence) -> GateSequence {
        let mut gates = later.gates.clone();
        gates.extend_from_slice(&self.gates);
        GateSequence { gates }
    }

    /// Iterates gates in application order (rightmost factor first).
    pub fn application_order(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().rev()
    }
}

impl From<GateSequence> for Vec<Gate> {
    fn from(seq: GateSequence) -> Self {
        seq.gates
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RetractionKind {
    FiveFactor,
    SixFactor,
    EightFactor,
}

impl RetractionKind {
    pub const ALL: [RetractionKind; 3] =
        [RetractionKind::FiveFactor, RetractionKind::SixFactor, RetractionKind::EightFactor];

    /// Number of factors in the retraction (5, 6 or 8).
    pub fn factors(self) -> u32 {
        match self {
            RetractionKind::FiveFactor => 5,
            RetractionKind::SixFactor => 6,
            RetractionKind::EightFactor => 8,
        }
    }

    pub fn from_factors(f: u32) -> Result<Self> {
        match f {
            5 => Ok(RetractionKind::FiveFactor),
            6 => Ok(RetractionKind::SixFactor),
            8 => Ok(RetractionKind::EightFactor),
            _ => Err(Error::InvalidArgument(format!("unknown retraction {f}; expected 5, 6 or 8"))),
        }
    }
}

impl fmt::Display for RetractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-factor", self.factors())
    }
}

impl FromStr for RetractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_end_matches("-factor");
        let f: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown retraction '{s}'")))?;
        Self::from_factors(f)
    }
}

/// H-exp calls charged per iteration.
///
/// For the 5-factor retraction the trailing `H` of one fragment and the
/// leading `H` of the next merge into a single exponential, so only two
/// oracle calls are charged even though the raw fragment has three.
pub fn h_exp_multiplier(kind: RetractionKind) -> u64 {
    match kind {
        RetractionKind::FiveFactor => 2,
        RetractionKind::SixFactor => 3,
        RetractionKind::EightFactor => 4,
    }
}

/// Gate fragment `V(t; x, y)` of the chosen retraction.
///
/// A zero direction yields the empty sequence (the identity).
pub fn retraction_gates(kind: RetractionKind, t: f64, x: f64, y: f64) -> Result<GateSequence> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("step size must be finite and >= 0, got {t}")));
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite direction ({x}, {y})")));
    }
    if x == 0.0 && y == 0.0 {
        return Ok(GateSequence::new());
    }

    let gates = match kind {
        RetractionKind::FiveFactor => {
            let arg = y.atan2(x);
            let half = t * x.hypot(y) / 2.0;
            let a1 = arg + FRAC_PI_2;
            let a2 = arg - FRAC_PI_2;
            vec![Gate::h(a1), Gate::psi0(-half), Gate::h(a2 - a1), Gate::psi0(half), Gate::h(-a2)]
        }
        RetractionKind::SixFactor => vec![
            Gate::h(FRAC_PI_2),
            Gate::psi0(-t * (x + y) / 2.0),
            Gate::h(-PI),
            Gate::psi0(t * (x - y) / 2.0),
            Gate::h(FRAC_PI_2),
            Gate::psi0(t * y),
        ],
        RetractionKind::EightFactor => vec![
            Gate::psi0(t * y / 2.0),
            Gate::h(FRAC_PI_2),
            Gate::psi0(-t * x / 2.0),
            Gate::h(-PI),
            Gate::psi0(t * x / 2.0),
            Gate::h(-FRAC_PI_2),
            Gate::psi0(-t * y / 2.0),
            Gate::h(PI),
        ],
    };
    GateSequence::from_gates(gates)
}
