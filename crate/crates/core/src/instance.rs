//! Search-problem definition: qubit count, marked set and derived constants.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported qubit count. `2^n` must fit comfortably in `u64` and
/// `M/N` must stay well above the double-precision underflow range.
pub const MAX_QUBITS: u32 = 62;

/// A Grover search instance over `N = 2^n` items with `M` of them marked.
///
/// The marked indices are optional: the reduced two-dimensional engine only
/// needs `q0 = M/N`, while the statevector and dense oracles need the
/// concrete set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverInstance {
    n: u32,
    size: u64,
    marked_count: u64,
    marked: Option<Vec<u64>>,
    seed: Option<u64>,
}

impl GroverInstance {
    /// Builds and validates an instance.
    ///
    /// When `marked` is `None` and `seed` is `Some`, `M` distinct indices are
    /// sampled uniformly without replacement from `[0, N)` with a ChaCha8
    /// generator seeded by `seed`. Sampling is only attempted for `n <= 32`;
    /// above that no oracle can hold the state anyway.
    pub fn new(n: u32, marked_count: u64, marked: Option<Vec<u64>>, seed: Option<u64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidInstance(format!(
                "qubit count must be in [1, {MAX_QUBITS}], got {n}"
            )));
        }
        let size = 1u64 << n;
        if marked_count == 0 || marked_count >= size {
            return Err(Error::InvalidInstance(format!(
                "marked count must be in [1, N-1] = [1, {}], got {marked_count}",
                size - 1
            )));
        }

        let marked = match (marked, seed) {
            (Some(mut idx), _) => {
                if idx.len() as u64 != marked_count {
                    return Err(Error::InvalidInstance(format!(
                        "expected {marked_count} marked indices, got {}",
                        idx.len()
                    )));
                }
                if let Some(&bad) = idx.iter().find(|&&i| i >= size) {
                    return Err(Error::InvalidInstance(format!(
                        "marked index {bad} out of range [0, {size})"
                    )));
                }
                idx.sort_unstable();
                if idx.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidInstance("duplicate marked index".into()));
                }
                Some(idx)
            }
            (None, Some(s)) if n <= 32 => Some(sample_marked(size, marked_count, s)),
            (None, _) => None,
        };

        Ok(Self { n, size, marked_count, marked, seed })
    }

    /// Convenience constructor that always materializes the marked set,
    /// sampling it from `seed` when not given.
    pub fn with_marked_set(n: u32, marked_count: u64, seed: u64) -> Result<Self> {
        Self::new(n, marked_count, None, Some(seed))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Search-space size `N = 2^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn marked_count(&self) -> u64 {
        self.marked_count
    }

    /// Sorted marked indices, if materialized.
    pub fn marked(&self) -> Option<&[u64]> {
        self.marked.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Initial success probability `q0 = M/N`.
    pub fn q0(&self) -> f64 {
        self.marked_count as f64 / self.size as f64
    }

    pub fn require_marked(&self) -> Result<&[u64]> {
        self.marked().ok_or(Error::MissingMarkedSet)
    }

    pub fn constants(&self) -> DerivedConstants {
        DerivedConstants::of(self)
    }
}

fn sample_marked(size: u64, count: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<u64> = index::sample(&mut rng, size as usize, count as usize)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    idx.sort_unstable();
    idx
}

/// Constants that control step sizes and the complexity bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Frobenius norm of `X0 = [H, psi0]` (and of `Y0`).
    pub c0: f64,
    /// Pullback Lipschitz constant `2 + N / sqrt(2 M (N - M))`.
    pub l_rie: f64,
    /// Euclidean gradient Lipschitz constant; always 2.
    pub l_euc: f64,
}

impl DerivedConstants {
    pub fn of(inst: &GroverInstance) -> Self {
        let n = inst.size() as f64;
        let m = inst.marked_count() as f64;
        let root = (2.0 * m * (n - m)).sqrt();
        Self { c0: root / n, l_rie: 2.0 + n / root, l_euc: 2.0 }
    }
}
