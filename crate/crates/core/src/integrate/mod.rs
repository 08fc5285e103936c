//! Fixed-step Runge–Kutta integration.
//!
//! Explicit tableaux are stepped stage by stage; implicit ones solve the stage
//! equations by fixed-point iteration on the stage increments
//! Zᵢ = h Σⱼ a_ij f(t + c_j h, x + Z_j). All sums run in ascending stage order,
//! so repeated runs are bit-identical.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::tableau::ButcherTableau;

/// Default fixed-point tolerance on the sup-norm of the stage-increment update.
pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_ITER: usize = 50;

/// dx/dt = f(t, x).
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]);

    /// Names of the conserved quantities reported by [`OdeSystem::invariants`].
    fn invariant_labels(&self) -> &[&'static str] {
        &[]
    }

    fn invariants(&self, _x: &[f64]) -> Vec<f64> {
        Vec::new()
    }

    fn exact_solution(&self, _t: f64) -> Option<Vec<f64>> {
        None
    }
}

impl<S: OdeSystem + ?Sized> OdeSystem for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        (**self).rhs(t, x, dx)
    }
    fn invariant_labels(&self) -> &[&'static str] {
        (**self).invariant_labels()
    }
    fn invariants(&self, x: &[f64]) -> Vec<f64> {
        (**self).invariants(x)
    }
    fn exact_solution(&self, t: f64) -> Option<Vec<f64>> {
        (**self).exact_solution(t)
    }
}

/// A system given by a closure.
pub struct FnSystem<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnSystem<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnSystem { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for FnSystem<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        (self.f)(t, x, dx)
    }
}

/// Wraps a system and counts right-hand-side evaluations.
pub struct CountingSystem<S> {
    inner: S,
    evaluations: AtomicU64,
}

impl<S: OdeSystem> CountingSystem<S> {
    pub fn new(inner: S) -> Self {
        CountingSystem {
            inner,
            evaluations: AtomicU64::new(0),
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: OdeSystem> OdeSystem for CountingSystem<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn rhs(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.inner.rhs(t, x, dx)
    }
    fn invariant_labels(&self) -> &[&'static str] {
        self.inner.invariant_labels()
    }
    fn invariants(&self, x: &[f64]) -> Vec<f64> {
        self.inner.invariants(x)
    }
    fn exact_solution(&self, t: f64) -> Option<Vec<f64>> {
        self.inner.exact_solution(t)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrateError {
    #[error("non-finite right-hand side at stage {stage}{}", at_step(*.step))]
    NonFinite { stage: usize, step: Option<usize> },
    #[error(
        "fixed-point iteration did not converge in {iterations} iterations (last update {residual:e}){}",
        at_step(*.step)
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        step: Option<usize>,
    },
    #[error("state has {got} components, system expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

fn at_step(step: Option<usize>) -> alloc::string::String {
    match step {
        Some(n) => alloc::format!(" in step {n}"),
        None => alloc::string::String::new(),
    }
}

impl IntegrateError {
    fn in_step(self, n: usize) -> Self {
        match self {
            IntegrateError::NonFinite { stage, .. } => IntegrateError::NonFinite { stage, step: Some(n) },
            IntegrateError::NoConvergence {
                iterations,
                residual,
                ..
            } => IntegrateError::NoConvergence {
                iterations,
                residual,
                step: Some(n),
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub x: Vec<f64>,
    /// Fixed-point iterations of the step that produced this state (1 for
    /// explicit steps, 0 for the initial state).
    pub iterations: usize,
    /// Values of the system's invariants at `x`.
    pub invariants: Vec<f64>,
}

/// One-step integrator bound to a tableau, owning its scratch buffers.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    tab: &'a ButcherTableau,
    dim: usize,
    /// Stage derivatives F_j, stage-major.
    k: Vec<f64>,
    /// Stage increments Z_j (implicit only), stage-major.
    z: Vec<f64>,
    z_next: Vec<f64>,
    stage: Vec<f64>,
    increment: Vec<f64>,
    compensation: Option<Vec<f64>>,
    tol: f64,
    max_iter: usize,
    to_roundoff: bool,
}

impl<'a> Stepper<'a> {
    pub fn new(tab: &'a ButcherTableau, dim: usize) -> Self {
        let s = tab.stages();
        Stepper {
            tab,
            dim,
            k: vec![0.0; s * dim],
            z: vec![0.0; s * dim],
            z_next: vec![0.0; s * dim],
            stage: vec![0.0; dim],
            increment: vec![0.0; dim],
            compensation: None,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            to_roundoff: false,
        }
    }

    /// Accumulate x-updates with Kahan compensation.
    pub fn compensated(mut self) -> Self {
        self.compensation = Some(vec![0.0; self.dim]);
        self
    }

    pub fn with_tolerance(mut self, tol: f64, max_iter: usize) -> Self {
        self.tol = tol;
        self.max_iter = max_iter;
        self
    }

    /// Once the fixed-point update drops below the tolerance, keep iterating
    /// while it still shrinks. Stopping at a fixed tolerance leaves a
    /// per-step error of one sign, which shows up as linear drift over long
    /// runs.
    pub fn iterate_to_roundoff(mut self) -> Self {
        self.to_roundoff = true;
        self
    }

    pub fn tableau(&self) -> &ButcherTableau {
        self.tab
    }

    /// Clears the compensation term; call before reusing the stepper on an
    /// unrelated trajectory.
    pub fn reset(&mut self) {
        if let Some(comp) = &mut self.compensation {
            comp.iter_mut().for_each(|e| *e = 0.0);
        }
    }

    /// Advances `x` from `t` to `t + h` in place and returns the number of
    /// fixed-point iterations used.
    pub fn step<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &S,
        t: f64,
        x: &mut [f64],
        h: f64,
    ) -> Result<usize, IntegrateError> {
        if x.len() != self.dim || sys.dim() != self.dim {
            return Err(IntegrateError::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        let iterations = if self.tab.is_explicit() {
            self.explicit_stages(sys, t, x, h)?;
            1
        } else {
            self.implicit_stages(sys, t, x, h)?
        };
        self.apply_weights(x, h);
        Ok(iterations)
    }

    fn explicit_stages<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &S,
        t: f64,
        x: &[f64],
        h: f64,
    ) -> Result<(), IntegrateError> {
        let (tab, n) = (self.tab, self.dim);
        for i in 0..tab.stages() {
            self.increment.iter_mut().for_each(|v| *v = 0.0);
            for (j, &a) in tab.a_row(i)[..i].iter().enumerate() {
                if a != 0.0 {
                    let kj = &self.k[j * n..(j + 1) * n];
                    for (acc, kv) in self.increment.iter_mut().zip(kj) {
                        *acc += a * kv;
                    }
                }
            }
            for ((st, xv), inc) in self.stage.iter_mut().zip(x).zip(&self.increment) {
                *st = xv + h * inc;
            }
            let ki = &mut self.k[i * n..(i + 1) * n];
            sys.rhs(t + tab.c()[i] * h, &self.stage, ki);
            if !ki.iter().all(|v| v.is_finite()) {
                return Err(IntegrateError::NonFinite { stage: i + 1, step: None });
            }
        }
        Ok(())
    }

    fn implicit_stages<S: OdeSystem + ?Sized>(
        &mut self,
        sys: &S,
        t: f64,
        x: &[f64],
        h: f64,
    ) -> Result<usize, IntegrateError> {
        let (tab, n, s) = (self.tab, self.dim, self.tab.stages());
        self.z.iter_mut().for_each(|v| *v = 0.0);
        let mut residual = f64::INFINITY;
        let mut previous = f64::INFINITY;
        for iteration in 1..=self.max_iter {
            for j in 0..s {
                for ((st, xv), zv) in self.stage.iter_mut().zip(x).zip(&self.z[j * n..(j + 1) * n]) {
                    *st = xv + zv;
                }
                let kj = &mut self.k[j * n..(j + 1) * n];
                sys.rhs(t + tab.c()[j] * h, &self.stage, kj);
                if !kj.iter().all(|v| v.is_finite()) {
                    return Err(IntegrateError::NonFinite { stage: j + 1, step: None });
                }
            }
            residual = 0.0;
            for i in 0..s {
                for d in 0..n {
                    let mut acc = 0.0;
                    for (j, &a) in tab.a_row(i).iter().enumerate() {
                        acc += a * self.k[j * n + d];
                    }
                    let next = h * acc;
                    residual = f64::max(residual, (next - self.z[i * n + d]).abs());
                    self.z_next[i * n + d] = next;
                }
            }
            core::mem::swap(&mut self.z, &mut self.z_next);
            if residual <= self.tol && (!self.to_roundoff || residual == 0.0 || residual >= previous) {
                return Ok(iteration);
            }
            previous = residual;
        }
        Err(IntegrateError::NoConvergence {
            iterations: self.max_iter,
            residual,
            step: None,
        })
    }

    /// x ← x + h Σ b_j F_j.
    fn apply_weights(&mut self, x: &mut [f64], h: f64) {
        let n = self.dim;
        self.increment.iter_mut().for_each(|v| *v = 0.0);
        for (j, &b) in self.tab.b().iter().enumerate() {
            if b != 0.0 {
                for (acc, kv) in self.increment.iter_mut().zip(&self.k[j * n..(j + 1) * n]) {
                    *acc += b * kv;
                }
            }
        }
        match &mut self.compensation {
            None => {
                for (xv, inc) in x.iter_mut().zip(&self.increment) {
                    *xv += h * inc;
                }
            }
            Some(comp) => {
                for ((xv, inc), e) in x.iter_mut().zip(&self.increment).zip(comp.iter_mut()) {
                    let y = h * inc - *e;
                    let sum = *xv + y;
                    *e = (sum - *xv) - y;
                    *xv = sum;
                }
            }
        }
    }

    /// Takes `n_steps` steps of size `h` from (t0, x), calling
    /// `visit(step_index, t, x, iterations)` after each one. Times are
    /// t0 + n·h, computed without accumulation.
    pub fn run<S, V>(
        &mut self,
        sys: &S,
        t0: f64,
        x: &mut [f64],
        h: f64,
        n_steps: usize,
        mut visit: V,
    ) -> Result<(), IntegrateError>
    where
        S: OdeSystem + ?Sized,
        V: FnMut(usize, f64, &[f64], usize),
    {
        for n in 0..n_steps {
            let t = t0 + n as f64 * h;
            let iterations = self.step(sys, t, x, h).map_err(|e| e.in_step(n + 1))?;
            visit(n + 1, t0 + (n + 1) as f64 * h, x, iterations);
        }
        Ok(())
    }
}

/// Single explicit step; fails if the tableau is implicit.
pub fn erk_step<S: OdeSystem + ?Sized>(
    sys: &S,
    tab: &ButcherTableau,
    t: f64,
    x: &[f64],
    h: f64,
) -> Result<Vec<f64>, IntegrateError> {
    if !tab.is_explicit() {
        return Err(IntegrateError::InvalidArgument("erk_step needs an explicit tableau"));
    }
    let mut out = x.to_vec();
    Stepper::new(tab, x.len()).step(sys, t, &mut out, h)?;
    Ok(out)
}

/// Single implicit step by fixed-point iteration; returns the new state and
/// the iteration count.
pub fn irk_step<S: OdeSystem + ?Sized>(
    sys: &S,
    tab: &ButcherTableau,
    t: f64,
    x: &[f64],
    h: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize), IntegrateError> {
    let mut out = x.to_vec();
    let iterations = Stepper::new(tab, x.len())
        .with_tolerance(tol, max_iter)
        .step(sys, t, &mut out, h)?;
    Ok((out, iterations))
}

/// Integrates `n_steps` steps, recording t0, every `sample_every`-th state and
/// the final state.
pub fn integrate<S: OdeSystem + ?Sized>(
    sys: &S,
    tab: &ButcherTableau,
    t0: f64,
    x0: &[f64],
    h: f64,
    n_steps: usize,
    sample_every: usize,
) -> Result<Vec<StepRecord>, IntegrateError> {
    integrate_with(&mut Stepper::new(tab, x0.len()), sys, t0, x0, h, n_steps, sample_every)
}

/// [`integrate`] with a configured stepper.
pub fn integrate_with<S: OdeSystem + ?Sized>(
    stepper: &mut Stepper<'_>,
    sys: &S,
    t0: f64,
    x0: &[f64],
    h: f64,
    n_steps: usize,
    sample_every: usize,
) -> Result<Vec<StepRecord>, IntegrateError> {
    if n_steps == 0 {
        return Err(IntegrateError::InvalidArgument("n_steps must be at least 1"));
    }
    if sample_every == 0 {
        return Err(IntegrateError::InvalidArgument("sample_every must be at least 1"));
    }
    let mut records = vec![StepRecord {
        t: t0,
        x: x0.to_vec(),
        iterations: 0,
        invariants: sys.invariants(x0),
    }];
    let mut x = x0.to_vec();
    stepper.run(sys, t0, &mut x, h, n_steps, |n, t, x, iterations| {
        if n % sample_every == 0 || n == n_steps {
            records.push(StepRecord {
                t,
                x: x.to_vec(),
                iterations,
                invariants: sys.invariants(x),
            });
        }
    })?;
    Ok(records)
}
