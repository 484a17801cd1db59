//! Small-`n` dense-matrix oracle on `U(N)`.
//!
//! Builds the oracle projector `H`, the diffusion projector `psi0`, the
//! gradient-plane basis `X0 = [H, psi0]`, `Y0 = i [H, X0]`, and evaluates the
//! cost, gradients and retraction curves with full `N x N` matrices. Inner
//! products are the real Frobenius product `Re Tr(A^dagger B)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::GroverInstance;
use crate::retraction::{Gate, GateSequence, Generator};

pub type DenseOp = DMatrix<Complex64>;

pub const MAX_DENSE_QUBITS: u32 = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn frob_inner(a: &DenseOp, b: &DenseOp) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frob_norm(a: &DenseOp) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &DenseOp, b: &DenseOp) -> DenseOp {
    a * b - b * a
}

/// `|| U^dagger U - I ||_F`.
pub fn unitarity_defect(u: &DenseOp) -> f64 {
    let n = u.nrows();
    frob_norm(&(u.adjoint() * u - DenseOp::identity(n, n)))
}

/// Dense operators for one instance.
#[derive(Debug, Clone)]
pub struct DenseOperators {
    pub h: DenseOp,
    pub psi0: DenseOp,
    pub x0: DenseOp,
    pub y0: DenseOp,
    /// `|psi0>` as a column.
    pub psi0_ket: DMatrix<Complex64>,
    marked: Vec<usize>,
}

impl DenseOperators {
    pub fn build(inst: &GroverInstance) -> Result<Self> {
        if inst.n() > MAX_DENSE_QUBITS {
            return Err(Error::CapExceeded { what: "dense oracle", n: inst.n(), cap: MAX_DENSE_QUBITS });
        }
        let marked: Vec<usize> = inst.require_marked()?.iter().map(|&i| i as usize).collect();
        let n = inst.size() as usize;

        let mut h = DenseOp::zeros(n, n);
        for &i in &marked {
            h[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        let psi0_ket = DMatrix::from_element(n, 1, amp);
        let psi0 = &psi0_ket * psi0_ket.adjoint();
        let x0 = commutator(&h, &psi0);
        let y0 = commutator(&h, &x0) * Complex64::i();

        Ok(Self { h, psi0, x0, y0, psi0_ket, marked })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn identity(&self) -> DenseOp {
        DenseOp::identity(self.dim(), self.dim())
    }

    /// `x X0 + y Y0`.
    pub fn tangent(&self, x: f64, y: f64) -> DenseOp {
        &self.x0 * Complex64::new(x, 0.0) + &self.y0 * Complex64::new(y, 0.0)
    }

    /// Full matrix `exp(i theta P) = I + (e^{i theta} - 1) P`.
    pub fn gate(&self, gate: &Gate) -> DenseOp {
        let p = match gate.generator {
            Generator::HProj => &self.h,
            Generator::Psi0Proj => &self.psi0,
        };
        self.identity() + p * (Complex64::cis(gate.angle) - 1.0)
    }

    /// Full matrix of a gate sequence (operator order, first gate leftmost).
    pub fn sequence(&self, seq: &GateSequence) -> DenseOp {
        seq.gates().iter().fold(self.identity(), |acc, g| acc * self.gate(g))
    }

    /// `gate * u` using the projector structure, `O(N^2)`.
    pub fn left_apply(&self, gate: &Gate, u: &mut DenseOp) {
        let w = Complex64::cis(gate.angle) - 1.0;
        match gate.generator {
            Generator::HProj => {
                for &i in &self.marked {
                    let mut row = u.row_mut(i);
                    row *= Complex64::cis(gate.angle);
                }
            }
            Generator::Psi0Proj => {
                // psi0 u = |psi0> (<psi0| u); every row of <psi0|u> is the
                // column sum scaled by 1/sqrt(N).
                let n = self.dim();
                let scale = w / n as f64;
                let col_sums: Vec<Complex64> = (0..n).map(|j| u.column(j).sum()).collect();
                for j in 0..n {
                    let shift = col_sums[j] * scale;
                    for i in 0..n {
                        u[(i, j)] += shift;
                    }
                }
            }
        }
    }

    /// `V u` for a gate sequence `V`, applied gate by gate.
    pub fn left_apply_sequence(&self, seq: &GateSequence, u: &mut DenseOp) {
        for g in seq.application_order() {
            self.left_apply(g, u);
        }
    }

    /// `U |psi0>`.
    pub fn evolved_ket(&self, u: &DenseOp) -> DMatrix<Complex64> {
        u * &self.psi0_ket
    }

    /// `psi_U = U psi0 U^dagger`.
    pub fn evolved_projector(&self, u: &DenseOp) -> DenseOp {
        let k = self.evolved_ket(u);
        &k * k.adjoint()
    }

    /// Cost `f(U) = Tr(H U psi0 U^dagger)`.
    pub fn cost(&self, u: &DenseOp) -> f64 {
        let k = self.evolved_ket(u);
        self.marked.iter().map(|&i| k[(i, 0)].norm_sqr()).sum()
    }

    /// Euclidean gradient `2 H U psi0`.
    pub fn euclid_grad(&self, u: &DenseOp) -> DenseOp {
        (&self.h * u * &self.psi0) * Complex64::new(2.0, 0.0)
    }

    /// Skew-Hermitian part `[H, U psi0 U^dagger]` of the Riemannian gradient.
    pub fn riemannian_grad(&self, u: &DenseOp) -> Result<DenseOp> {
        let defect = unitarity_defect(u);
        if defect > 1e-8 {
            return Err(Error::InvalidArgument(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(self.skew_grad(u))
    }

    /// `[H, U psi0 U^dagger]` without the `O(N^3)` unitarity check.
    pub fn skew_grad(&self, u: &DenseOp) -> DenseOp {
        let p = self.evolved_projector(u);
        // H is diagonal: H P scales rows, P H scales columns.
        let n = self.dim();
        let mut g = DenseOp::zeros(n, n);
        for &i in &self.marked {
            for j in 0..n {
                g[(i, j)] += p[(i, j)];
                g[(j, i)] -= p[(j, i)];
            }
        }
        g
    }

    /// Coordinates of the gradient in the `{X0, Y0}` basis. `u` is assumed
    /// unitary.
    pub fn grad_coords(&self, u: &DenseOp) -> Result<(f64, f64)> {
        let g = self.skew_grad(u);
        let c2 = frob_inner(&self.x0, &self.x0);
        let x = frob_inner(&self.x0, &g) / c2;
        let y = frob_inner(&self.y0, &g) / c2;
        let residual = frob_norm(&(g - self.tangent(x, y)));
        if residual > 1e-8 {
            return Err(Error::Unreachable { residual });
        }
        Ok((x, y))
    }

    /// Naive exponential-map update `exp(t G) U` with `G = [H, psi_U]`.
    ///
    /// `G` has rank two with eigenvalues `+-i lambda`, `lambda^2 = ||G||^2 / 2`,
    /// so `G^3 = -lambda^2 G` and the exponential has a closed form.
    pub fn exp_map_step(&self, u: &DenseOp, t: f64) -> Result<DenseOp> {
        let g = self.riemannian_grad(u)?;
        let lambda = frob_norm(&g) / 2f64.sqrt();
        if lambda == 0.0 {
            return Ok(u.clone());
        }
        let s = (lambda * t).sin() / lambda;
        let c = (1.0 - (lambda * t).cos()) / (lambda * lambda);
        let g2 = &g * &g;
        let e = self.identity() + &g * Complex64::new(s, 0.0) + g2 * Complex64::new(c, 0.0);
        Ok(e * u)
    }

    /// A unitary reachable from `I` by 1 to 20 random oracle/diffusion gates
    /// with angles uniform in `(-pi, pi]`.
    pub fn random_reachable<R: Rng>(&self, rng: &mut R) -> DenseOp {
        let count = rng.gen_range(1..=20);
        let mut u = self.identity();
        for _ in 0..count {
            let angle = std::f64::consts::PI - rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            let gate = if rng.gen::<bool>() { Gate::h(angle) } else { Gate::psi0(angle) };
            self.left_apply(&gate, &mut u);
        }
        u
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }
}

/// Largest and tight-pair ratios `||grad f(U1) - grad f(U2)|| / ||U1 - U2||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzAudit {
    pub samples: usize,
    pub max_ratio: f64,
    pub tight_ratio: f64,
}

/// Audits the Euclidean Lipschitz constant `2` on random complex matrix pairs
/// and on the pair `U1 - U2 = e_m <psi0|` with `e_m` a marked basis vector.
pub fn check_euclid_lipschitz<R: Rng>(ops: &DenseOperators, samples: usize, rng: &mut R) -> LipschitzAudit {
    let n = ops.dim();
    let random = |rng: &mut R| {
        DenseOp::from_fn(n, n, |_, _| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
    };
    let mut max_ratio: f64 = 0.0;
    for _ in 0..samples {
        let u1 = random(rng);
        let u2 = random(rng);
        let num = frob_norm(&(ops.euclid_grad(&u1) - ops.euclid_grad(&u2)));
        let den = frob_norm(&(&u1 - &u2));
        if den > 0.0 {
            max_ratio = max_ratio.max(num / den);
        }
    }

    let mut v = DMatrix::from_element(n, 1, ZERO);
    v[(ops.marked()[0], 0)] = Complex64::new(1.0, 0.0);
    let a = &v * ops.psi0_ket.adjoint();
    let u1 = random(rng);
    let u2 = &u1 - &a;
    let tight_ratio = frob_norm(&(ops.euclid_grad(&u1) - ops.euclid_grad(&u2))) / frob_norm(&a);

    LipschitzAudit { samples, max_ratio, tight_ratio }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduced::{plane_step, transfer_matrix, PlaneState};
    use crate::retraction::{retraction_gates, RetractionKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn ops(n: u32, marked: Vec<u64>) -> DenseOperators {
        let inst = GroverInstance::new(n, marked.len() as u64, Some(marked), None).unwrap();
        DenseOperators::build(&inst).unwrap()
    }

    #[test]
    fn builder_identities() {
        let o = ops(2, vec![3]);
        assert!(frob_norm(&(&o.h * &o.h - &o.h)) == 0.0);
        assert!(frob_norm(&(o.h.adjoint() - &o.h)) == 0.0);
        assert!(frob_norm(&(&o.psi0 * &o.psi0 - &o.psi0)) < 1e-15);
        assert!((frob_norm(&o.x0) - 6f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((frob_norm(&o.y0) - 6f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(frob_inner(&o.x0, &o.y0).abs() < 1e-15);
        assert!(frob_norm(&(o.x0.adjoint() + &o.x0)) < 1e-15);
        assert!(frob_norm(&(o.y0.adjoint() + &o.y0)) < 1e-15);
    }

    #[test]
    fn cap_and_marked_set_required() {
        let big = GroverInstance::with_marked_set(11, 1, 0).unwrap();
        assert!(matches!(DenseOperators::build(&big), Err(Error::CapExceeded { .. })));
        let unmarked = GroverInstance::new(3, 1, None, None).unwrap();
        assert!(matches!(DenseOperators::build(&unmarked), Err(Error::MissingMarkedSet)));
    }

    #[test]
    fn gate_matrices() {
        let o = ops(3, vec![2, 5]);
        let id = o.identity();
        assert!(frob_norm(&(o.gate(&Gate::h(0.0)) - &id)) == 0.0);
        let flip = o.gate(&Gate::h(-PI));
        let expect = &id - &o.h * Complex64::new(2.0, 0.0);
        assert!(frob_norm(&(flip - expect)) < 1e-15);
        for g in [Gate::h(0.7), Gate::psi0(-2.1)] {
            assert!(unitarity_defect(&o.gate(&g)) < 1e-12);
        }
    }

    #[test]
    fn structured_application_matches_products() {
        let o = ops(3, vec![1, 4]);
        let seq = retraction_gates(RetractionKind::EightFactor, 0.8, 0.3, -1.2).unwrap();
        let mut u = o.gate(&Gate::psi0(0.4));
        let expect = o.sequence(&seq) * &u;
        o.left_apply_sequence(&seq, &mut u);
        assert!(frob_norm(&(u - expect)) < 1e-13);
    }

    #[test]
    fn gradient_at_identity_and_target() {
        let o = ops(3, vec![6]);
        let g = o.riemannian_grad(&o.identity()).unwrap();
        assert!(frob_norm(&(g - &o.x0)) < 1e-15);
        assert_eq!(o.grad_coords(&o.identity()).unwrap().0, 1.0);

        // A unitary sending |psi0> to the marked item (up to phase): one
        // classic Grover iteration at N = 4.
        let o = ops(2, vec![1]);
        let pair = GateSequence::from_gates(vec![Gate::psi0(PI), Gate::h(PI)]).unwrap();
        let u = o.sequence(&pair);
        assert!((o.cost(&u) - 1.0).abs() < 1e-12);
        assert!(frob_norm(&o.riemannian_grad(&u).unwrap()) < 1e-10);
        let (x, y) = o.grad_coords(&u).unwrap();
        assert!(x.abs() < 1e-10 && y.abs() < 1e-10);
    }

    #[test]
    fn coordinates_match_plane_after_oracle_gate() {
        let o = ops(3, vec![3]);
        let u = o.gate(&Gate::h(PI));
        let (x, y) = o.grad_coords(&u).unwrap();
        let seq = GateSequence::from_gates(vec![Gate::h(PI)]).unwrap();
        let p = plane_step(&PlaneState::initial(1.0 / 8.0), &transfer_matrix(&seq, 1.0 / 8.0)).unwrap();
        let (px, py) = p.grad_coords();
        assert!((x - px).abs() < 1e-12 && (y - py).abs() < 1e-12);
    }

    #[test]
    fn gradient_stays_in_plane_for_reachable_unitaries() {
        let o = ops(4, vec![0, 7, 9]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let u = o.random_reachable(&mut rng);
            let g = o.riemannian_grad(&u).unwrap();
            let q = o.cost(&u);
            assert!((frob_norm(&g) - (2.0 * q * (1.0 - q)).sqrt()).abs() < 1e-10);
            assert!(o.grad_coords(&u).is_ok());
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let o = ops(2, vec![0]);
        let bad = o.identity() * Complex64::new(2.0, 0.0);
        assert!(o.riemannian_grad(&bad).is_err());
    }

    #[test]
    fn exp_map_closed_form_matches_series() {
        let o = ops(3, vec![2]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = o.random_reachable(&mut rng);
        let t = 0.9;
        let g = o.riemannian_grad(&u).unwrap();
        let series = (g * Complex64::new(t, 0.0)).exp() * &u;
        let closed = o.exp_map_step(&u, t).unwrap();
        assert!(frob_norm(&(series - &closed)) < 1e-10);
        assert!(unitarity_defect(&closed) < 1e-10);
        assert!(frob_norm(&(o.exp_map_step(&u, 0.0).unwrap() - &u)) < 1e-15);
    }

    #[test]
    fn exp_map_ascent_converges_monotonically() {
        let inst = GroverInstance::new(2, 1, Some(vec![2]), None).unwrap();
        let o = DenseOperators::build(&inst).unwrap();
        let t = 1.0 / inst.constants().l_rie;
        let mut u = o.identity();
        let mut prev = o.cost(&u);
        for _ in 0..200 {
            u = o.exp_map_step(&u, t).unwrap();
            let q = o.cost(&u);
            assert!(q >= prev - 1e-12);
            prev = q;
        }
        assert!(prev > 1.0 - 1e-9, "final q {prev}");
        assert!(unitarity_defect(&u) < 1e-10);
    }

    #[test]
    fn euclid_lipschitz_audit() {
        let o = ops(3, vec![5]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let audit = check_euclid_lipschitz(&o, 1000, &mut rng);
        assert!(audit.max_ratio <= 2.0 + 1e-10);
        assert!((audit.tight_ratio - 2.0).abs() < 1e-12);
    }
}
