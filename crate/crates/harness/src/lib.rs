//! Experiments and file formats around the `psrk` core: tableau files,
//! invariant-drift runs, drift-speed slope fits, the method comparison table,
//! CSV output, and the `rk` command-line tool built on them.

pub mod drift;
pub mod error;
pub mod format;
pub mod output;
pub mod report;

pub use drift::{
    drift_experiment, drift_speed, drift_speed_slope, fit_speeds, moving_average, DriftSeries,
    DriftSpeedFit, Problem, SlopeEstimate, SpeedPoint, WindowAverage,
};
pub use error::{HarnessError, Result};
pub use format::{format_tableau, load_tableau, parse_tableau, save_tableau};
pub use report::{resolve_method, table1_report, Table1Row, TABLE1_METHODS};
