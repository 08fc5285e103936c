//! Long-run invariant drift on the rigid body and the pendulum.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use psrk::integrate::{CountingSystem, OdeSystem, Stepper};
use psrk::problems::{Pendulum, RigidBody};
use psrk::ButcherTableau;
use rayon::prelude::*;

use crate::error::{HarnessError, Result};

/// Fewest samples a drift series may hold.
pub const MIN_SAMPLES: usize = 10;
/// Floor-detector multiple of the per-unit-time round-off estimate.
pub const FLOOR_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Rigid,
    Pendulum,
}

impl Problem {
    pub fn system(self) -> &'static (dyn OdeSystem + Sync) {
        match self {
            Problem::Rigid => &RigidBody,
            Problem::Pendulum => &Pendulum,
        }
    }

    pub fn initial(self) -> Vec<f64> {
        match self {
            Problem::Rigid => RigidBody::INITIAL.to_vec(),
            Problem::Pendulum => Pendulum::initial().to_vec(),
        }
    }

    /// Deviation of each invariant from its initial value: |Q_i − Q_i(0)|
    /// for the rigid body, the signed H − H(0) for the pendulum.
    fn deviations(self, now: &[f64], start: &[f64]) -> Vec<f64> {
        let d = now.iter().zip(start).map(|(x, x0)| x - x0);
        match self {
            Problem::Rigid => d.map(f64::abs).collect(),
            Problem::Pendulum => d.collect(),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Rigid => "rigid",
            Problem::Pendulum => "pendulum",
        })
    }
}

impl FromStr for Problem {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rigid" => Ok(Problem::Rigid),
            "pendulum" => Ok(Problem::Pendulum),
            other => Err(HarnessError::invalid(format!(
                "unknown problem `{other}` (expected rigid or pendulum)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSample {
    pub t: f64,
    pub deviations: Vec<f64>,
}

/// Invariant deviations along one trajectory with step h = s·h1.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSeries {
    pub method: String,
    pub problem: Problem,
    pub h1: f64,
    pub h: f64,
    pub labels: Vec<String>,
    pub samples: Vec<DriftSample>,
    pub rhs_evaluations: u64,
    pub steps: usize,
}

impl DriftSeries {
    /// Largest |deviation| over all samples and invariants.
    pub fn max_abs_deviation(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|s| s.deviations.iter())
            .fold(0.0, |m, d| m.max(d.abs()))
    }

    /// (t, deviation of invariant `k`) pairs.
    pub fn column(&self, k: usize) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.deviations[k])).collect()
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(HarnessError::invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

fn step_count(t_end: f64, h: f64) -> Result<usize> {
    let n = (t_end / h).round();
    if n < 1.0 || n > u32::MAX as f64 {
        return Err(HarnessError::invalid(format!("t_end = {t_end} with h = {h} gives {n} steps")));
    }
    Ok(n as usize)
}

fn run_context(tab: &ButcherTableau, problem: Problem, h1: f64) -> String {
    format!("{} on {problem} with h1 = {h1}", tab.name())
}

/// Integrates `problem` with step h = s·h1 up to `t_end`, recording invariant
/// deviations every `sample_dt` (rounded to a whole number of steps).
pub fn drift_experiment(
    problem: Problem,
    tab: &ButcherTableau,
    h1: f64,
    t_end: f64,
    sample_dt: f64,
) -> Result<DriftSeries> {
    check_positive("h1", h1)?;
    check_positive("t_end", t_end)?;
    check_positive("sample_dt", sample_dt)?;
    let h = tab.stages() as f64 * h1;
    let steps = step_count(t_end, h)?;
    let every = ((sample_dt / h).round() as usize).max(1);
    if steps / every < MIN_SAMPLES {
        return Err(HarnessError::invalid(format!(
            "t_end = {t_end} and sample_dt = {sample_dt} give {} samples; need at least {MIN_SAMPLES}",
            steps / every
        )));
    }

    let sys = CountingSystem::new(problem.system());
    let mut x = problem.initial();
    let q0 = sys.invariants(&x);
    let mut samples = vec![DriftSample {
        t: 0.0,
        deviations: vec![0.0; q0.len()],
    }];
    let mut stepper = Stepper::new(tab, x.len()).compensated().iterate_to_roundoff();
    stepper
        .run(&sys, 0.0, &mut x, h, steps, |n, t, x, _| {
            if n % every == 0 || n == steps {
                samples.push(DriftSample {
                    t,
                    deviations: problem.deviations(&sys.invariants(x), &q0),
                });
            }
        })
        .map_err(|source| HarnessError::Integrate {
            context: run_context(tab, problem, h1),
            source,
        })?;
    Ok(DriftSeries {
        method: tab.name().into(),
        problem,
        h1,
        h,
        labels: sys.invariant_labels().iter().map(|l| format!("d{l}")).collect(),
        samples,
        rhs_evaluations: sys.evaluations(),
        steps,
    })
}

/// Streaming sin²-weighted average over the open window (start, start + width).
///
/// Values are accumulated relative to the first one seen, so a constant
/// input averages to itself exactly.
#[derive(Debug, Clone)]
pub struct WindowAverage {
    start: f64,
    width: f64,
    reference: Option<f64>,
    weight: f64,
    weighted: f64,
    count: usize,
}

impl WindowAverage {
    pub fn new(start: f64, width: f64) -> Self {
        WindowAverage {
            start,
            width,
            reference: None,
            weight: 0.0,
            weighted: 0.0,
            count: 0,
        }
    }

    pub fn push(&mut self, t: f64, value: f64) {
        let u = t - self.start;
        if !(u > 0.0 && u < self.width) {
            return;
        }
        let w = (PI * u / self.width).sin().powi(2);
        let r = *self.reference.get_or_insert(value);
        self.weight += w;
        self.weighted += w * (value - r);
        self.count += 1;
    }

    pub fn value(&self) -> Result<f64> {
        match self.reference {
            Some(r) if self.count >= 2 && self.weight > 0.0 => Ok(r + self.weighted / self.weight),
            _ => Err(HarnessError::EmptyWindow {
                start: self.start,
                end: self.start + self.width,
                count: self.count,
            }),
        }
    }
}

/// ⟨H⟩(t): sin²((t_n − t)π/W)-weighted mean of the samples with t < t_n < t + W.
pub fn moving_average(samples: &[(f64, f64)], t: f64, width: f64) -> Result<f64> {
    check_positive("window", width)?;
    let mut acc = WindowAverage::new(t, width);
    for &(tn, v) in samples {
        acc.push(tn, v);
    }
    acc.value()
}

/// Drift speed between the first and last full windows of a series ending at
/// `t_end`: (⟨H⟩(t_end − W) − ⟨H⟩(0)) / (t_end − W).
pub fn drift_speed(samples: &[(f64, f64)], t_end: f64, width: f64) -> Result<f64> {
    if !(width < t_end) {
        return Err(HarnessError::invalid(format!("window {width} must be shorter than t_end = {t_end}")));
    }
    let late = t_end - width;
    Ok((moving_average(samples, late, width)? - moving_average(samples, 0.0, width)?) / late)
}

/// Drift speed measured at one step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPoint {
    pub h1: f64,
    pub h: f64,
    pub speed: f64,
    /// 100·ε·|H₀|/h1: the speed a random walk of rounding errors could fake.
    pub floor_threshold: f64,
    pub floor: bool,
}

impl SpeedPoint {
    pub fn new(h1: f64, h: f64, speed: f64, h0: f64) -> Self {
        let floor_threshold = FLOOR_FACTOR * f64::EPSILON * h0.abs() / h1;
        SpeedPoint {
            h1,
            h,
            speed,
            floor_threshold,
            floor: !(speed.abs() >= floor_threshold),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlopeEstimate {
    /// Least-squares slope of log|speed| against log h1 over `[h1_min, h1_max]`.
    Slope { slope: f64, h1_min: f64, h1_max: f64, points: usize },
    /// Exactly one point rose above the floor; no slope can be fitted.
    SinglePoint { h1: f64 },
    /// Every point is dominated by round-off.
    Floor,
}

impl SlopeEstimate {
    pub fn slope(&self) -> Option<f64> {
        match self {
            SlopeEstimate::Slope { slope, .. } => Some(*slope),
            _ => None,
        }
    }
}

impl fmt::Display for SlopeEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeEstimate::Slope {
                slope,
                h1_min,
                h1_max,
                points,
            } => write!(f, "slope {slope:.4} over h1 in [{h1_min:e}, {h1_max:e}] ({points} points)"),
            SlopeEstimate::SinglePoint { h1 } => write!(f, "only h1 = {h1:e} is above the round-off floor"),
            SlopeEstimate::Floor => f.write_str("floor: every point is round-off dominated"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpeedFit {
    pub method: String,
    pub problem: Problem,
    pub t_end: f64,
    pub window: f64,
    pub points: Vec<SpeedPoint>,
    pub estimate: SlopeEstimate,
}

/// Fits log|speed| against log h1 over the points above the floor.
pub fn fit_speeds(points: &[SpeedPoint]) -> SlopeEstimate {
    let used: Vec<_> = points.iter().filter(|p| !p.floor).collect();
    match used.as_slice() {
        [] => SlopeEstimate::Floor,
        [p] => SlopeEstimate::SinglePoint { h1: p.h1 },
        _ => {
            let xy: Vec<(f64, f64)> = used.iter().map(|p| (p.h1.ln(), p.speed.abs().ln())).collect();
            SlopeEstimate::Slope {
                slope: least_squares_slope(&xy),
                h1_min: used.iter().map(|p| p.h1).fold(f64::INFINITY, f64::min),
                h1_max: used.iter().map(|p| p.h1).fold(0.0, f64::max),
                points: used.len(),
            }
        }
    }
}

/// Slope of the least-squares line through `xy`.
pub fn least_squares_slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Drift speed of the first invariant at one h1, streaming both windows.
fn speed_at(problem: Problem, tab: &ButcherTableau, h1: f64, t_end: f64, width: f64) -> Result<SpeedPoint> {
    let h = tab.stages() as f64 * h1;
    let steps = step_count(t_end, h)?;
    let t_last = steps as f64 * h;
    let late_start = t_last - width;
    let sys = problem.system();
    let mut x = problem.initial();
    let h0 = sys.invariants(&x)[0];
    let mut early = WindowAverage::new(0.0, width);
    let mut late = WindowAverage::new(late_start, width);
    let mut stepper = Stepper::new(tab, x.len()).compensated().iterate_to_roundoff();
    stepper
        .run(sys, 0.0, &mut x, h, steps, |_, t, x, _| {
            let q = sys.invariants(x)[0];
            early.push(t, q);
            late.push(t, q);
        })
        .map_err(|source| HarnessError::Integrate {
            context: run_context(tab, problem, h1),
            source,
        })?;
    let speed = (late.value()? - early.value()?) / late_start;
    Ok(SpeedPoint::new(h1, h, speed, h0))
}

/// Thread pool capped by the RK_THREADS environment variable when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("RK_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| HarnessError::invalid(format!("RK_THREADS = `{v}` is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| HarnessError::invalid(format!("cannot start thread pool: {e}")))
}

/// Drift speeds for each h1 (in parallel) and their log-log slope.
///
/// `window` defaults to t_end/10.
pub fn drift_speed_slope(
    problem: Problem,
    tab: &ButcherTableau,
    h1_list: &[f64],
    t_end: f64,
    window: Option<f64>,
) -> Result<DriftSpeedFit> {
    if h1_list.len() < 3 {
        return Err(HarnessError::invalid(format!(
            "a slope needs at least 3 step sizes, got {}",
            h1_list.len()
        )));
    }
    check_positive("t_end", t_end)?;
    for &h1 in h1_list {
        check_positive("h1", h1)?;
    }
    let width = window.unwrap_or(t_end / 10.0);
    check_positive("window", width)?;
    if !(2.0 * width < t_end) {
        return Err(HarnessError::invalid(format!("window {width} must be below t_end/2 = {}", t_end / 2.0)));
    }
    let points = thread_pool()?.install(|| {
        h1_list
            .par_iter()
            .map(|&h1| speed_at(problem, tab, h1, t_end, width))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(DriftSpeedFit {
        method: tab.name().into(),
        problem,
        t_end,
        window: width,
        estimate: fit_speeds(&points),
        points,
    })
}

/// Slope of log|deviation| against log t over samples with t ≥ `t_min` and
/// a non-zero deviation; about ½ for a random walk of rounding errors.
pub fn growth_slope(samples: &[(f64, f64)], t_min: f64) -> Option<f64> {
    let xy: Vec<_> = samples
        .iter()
        .filter(|(t, d)| *t >= t_min && *t > 0.0 && *d != 0.0)
        .map(|(t, d)| (t.ln(), d.abs().ln()))
        .collect();
    (xy.len() >= 2).then(|| least_squares_slope(&xy))
}
