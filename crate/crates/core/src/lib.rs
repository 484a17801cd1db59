//! Riemannian gradient ascent for Grover search.
//!
//! The optimizer runs on the exact two-dimensional reduced dynamics; the
//! statevector and dense-matrix modules are independent oracles used to
//! check it.

pub mod cli;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod instance;
pub mod optimizer;
pub mod reduced;
pub mod retraction;
pub mod statevector;
pub mod verification;

pub use error::{Error, Result};
pub use instance::{DerivedConstants, GroverInstance};
pub use optimizer::{rga_run, Criterion, LineSearchParams, StepPolicy, Trajectory};
pub use retraction::{retraction_gates, Gate, GateSequence, Generator, RetractionKind};
