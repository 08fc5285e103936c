//! Analysis and fixed-step integration toolkit for explicit and implicit
//! Runge–Kutta methods, centred on the 8-stage pseudo-symplectic methods of
//! order (4, 8) and the 7-stage method of order (4, 9).
//!
//! The crate is `no_std` (it needs `alloc`). File formats, experiments and the
//! command-line tool live in the `psrk-harness` crate.
//!
//! Module map:
//!
//! * [`algebra`]: exact rationals and the cubic field ℚ(c₂).
//! * [`tableau`]: the Butcher tableau model, the method catalog, the ψ-family,
//!   the parity checks and the ζ(c₂, c₃) polynomial.
//! * [`trees`]: rooted trees, their combinatorial functionals and the
//!   derivative weights Φ(t).
//! * [`analysis`]: classical order, pseudo-symplectic order, error
//!   coefficients and stability-function diagnostics.
//! * [`integrate`]: fixed-step explicit and implicit stepping.
//! * [`problems`]: the rigid-body and pendulum benchmarks, with the Jacobi
//!   elliptic functions used by the exact rigid-body solution.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod analysis;
pub mod integrate;
pub mod problems;
pub mod tableau;
pub mod trees;

pub use algebra::{Qc2Element, Rational};
pub use analysis::{MethodAnalysis, PseudoSymplecticOrder};
pub use integrate::{OdeSystem, StepRecord, Stepper};
pub use tableau::{ButcherTableau, MethodKind};
pub use trees::RootedTree;
