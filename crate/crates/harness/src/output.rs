//! CSV emission. Floats carry 17 significant digits, enough to read back the
//! same double.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::drift::{DriftSeries, DriftSpeedFit};
use crate::error::{HarnessError, Result};
use crate::report::{flag, Table1Row};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub const TABLE1_HEADER: [&str; 20] = [
    "method", "s", "p", "q", "T4", "T5", "T6", "r5", "r6", "r7", "r8", "rr_power", "rr_coefficient", "C2", "D1",
    "Dc", "Dc2", "DAc", "max_abs_a", "min_nonzero_b",
];

/// One row per available method.
pub fn write_table1<W: Write>(rows: &[Table1Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE1_HEADER)?;
    for row in rows {
        let Some(a) = &row.analysis else { continue };
        let f = &a.flags;
        let (power, coef) = match a.rr_leading {
            Some((k, x)) => (k.to_string(), fmt17(x)),
            None => (String::new(), fmt17(0.0)),
        };
        let mut rec = vec![row.id.clone(), a.stages.to_string(), a.p.to_string(), a.q.to_string()];
        rec.extend(a.t.iter().chain(&a.r_coeffs).map(|&x| fmt17(x)));
        rec.extend([power, coef]);
        rec.extend([f.c2, f.d_one, f.d_c, f.d_c2, f.d_ac].map(|b| flag(b).to_string()));
        rec.push(fmt17(a.max_abs_a));
        rec.push(a.min_nonzero_b.map(fmt17).unwrap_or_default());
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Columns `t` followed by one column per invariant deviation.
pub fn write_series<W: Write>(series: &DriftSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(series.labels.iter().cloned());
    w.write_record(&header)?;
    for s in &series.samples {
        let rec: Vec<String> = std::iter::once(s.t).chain(s.deviations.iter().copied()).map(fmt17).collect();
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const FIT_HEADER: [&str; 5] = ["h1", "h", "speed", "floor_threshold", "floor"];

pub fn write_fit<W: Write>(fit: &DriftSpeedFit, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FIT_HEADER)?;
    for p in &fit.points {
        w.write_record([
            fmt17(p.h1),
            fmt17(p.h),
            fmt17(p.speed),
            fmt17(p.floor_threshold),
            p.floor.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Creates `path` and hands it to `write`.
pub fn to_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(File) -> Result<()>,
{
    let file = File::create(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write(file)
}
