//! Benchmark systems: free rotation of an asymmetric rigid body and a
//! one-degree-of-freedom Hamiltonian pendulum variant.

mod elliptic;

pub use elliptic::{complete_elliptic_k, jacobi_elliptic};

use alloc::vec;
use alloc::vec::Vec;

use crate::integrate::OdeSystem;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("elliptic parameter m = {m} is outside [0, 1)")]
    Domain { m: f64 },
}

/// Euler's equations for principal moments (I₁, I₂, I₃) = (1, 2, 3):
/// ω₁' = −ω₂ω₃, ω₂' = ω₁ω₃, ω₃' = −ω₁ω₂/3.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RigidBody;

impl RigidBody {
    pub const INERTIA: [f64; 3] = [1.0, 2.0, 3.0];
    pub const INITIAL: [f64; 3] = [12.0, 0.0, 7.0];
    /// Parameter of the Jacobi functions in the exact solution.
    pub const ELLIPTIC_M: f64 = 48.0 / 49.0;

    /// Period 4K(48/49)/7 of the exact solution.
    pub fn period() -> f64 {
        4.0 * complete_elliptic_k(Self::ELLIPTIC_M).expect("m < 1") / 7.0
    }

    /// (ω₁, ω₂, ω₃)(t) = (12 cn, 12 sn, 7 dn)(7t | 48/49).
    pub fn exact(t: f64) -> [f64; 3] {
        let (sn, cn, dn) = jacobi_elliptic(7.0 * t, Self::ELLIPTIC_M).expect("m < 1");
        [12.0 * cn, 12.0 * sn, 7.0 * dn]
    }
}

pub fn rigid_body_rhs(w: &[f64; 3]) -> [f64; 3] {
    [-w[1] * w[2], w[0] * w[2], -w[0] * w[1] / 3.0]
}

/// (Q₁, Q₂) = (ω₁² + ω₂², ω₂² + 3ω₃²).
pub fn quadratic_invariants(w: &[f64]) -> (f64, f64) {
    (w[0] * w[0] + w[1] * w[1], w[1] * w[1] + 3.0 * w[2] * w[2])
}

impl OdeSystem for RigidBody {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, _t: f64, x: &[f64], dx: &mut [f64]) {
        dx[0] = -x[1] * x[2];
        dx[1] = x[0] * x[2];
        dx[2] = -x[0] * x[1] / 3.0;
    }

    fn invariant_labels(&self) -> &[&'static str] {
        &["Q1", "Q2"]
    }

    fn invariants(&self, x: &[f64]) -> Vec<f64> {
        let (q1, q2) = quadratic_invariants(x);
        vec![q1, q2]
    }

    fn exact_solution(&self, t: f64) -> Option<Vec<f64>> {
        Some(RigidBody::exact(t).to_vec())
    }
}

/// ℋ(x, p) = p²/2 − (1 − p/6) cos x, state ordered (x, p).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Pendulum;

impl Pendulum {
    /// Level of the closed curve the benchmark follows.
    pub const ENERGY: f64 = 0.8;

    /// (arccos(−0.8), 0), on the level ℋ = 0.8.
    pub fn initial() -> [f64; 2] {
        [(-0.8f64).acos(), 0.0]
    }
}

pub fn hamiltonian(x: &[f64]) -> f64 {
    let (q, p) = (x[0], x[1]);
    0.5 * p * p - (1.0 - p / 6.0) * q.cos()
}

/// (∂ℋ/∂p, −∂ℋ/∂x) = (p + cos(x)/6, −(1 − p/6) sin x).
pub fn pendulum_rhs(x: &[f64]) -> [f64; 2] {
    let (q, p) = (x[0], x[1]);
    [p + q.cos() / 6.0, -(1.0 - p / 6.0) * q.sin()]
}

impl OdeSystem for Pendulum {
    fn dim(&self) -> usize {
        2
    }

    fn rhs(&self, _t: f64, x: &[f64], dx: &mut [f64]) {
        let [dq, dp] = pendulum_rhs(x);
        dx[0] = dq;
        dx[1] = dp;
    }

    fn invariant_labels(&self) -> &[&'static str] {
        &["H"]
    }

    fn invariants(&self, x: &[f64]) -> Vec<f64> {
        vec![hamiltonian(x)]
    }
}
