//! Method comparison table and method lookup.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use psrk::analysis::{MethodAnalysis, DEFAULT_Q_MAX};
use psrk::tableau::catalog;
use psrk::ButcherTableau;

use crate::error::{HarnessError, Result};
use crate::format::load_tableau;

/// Rows of the comparison table, in print order. Upper-case ids are not
/// built in and load from `<methods-dir>/<ID>.tab`.
pub const TABLE1_METHODS: [&str; 8] = ["rk4", "AC36", "CLMR47", "CCRL47", "eq2", "eq3", "CV8", "gl4"];

pub const TABLEAU_EXTENSION: &str = "tab";

/// A catalog id, or else a path to a tableau file.
pub fn resolve_method(id: &str) -> Result<ButcherTableau> {
    match catalog(id) {
        Ok(tab) => Ok(tab),
        Err(unknown) => {
            let path = Path::new(id);
            if path.is_file() {
                load_tableau(path)
            } else {
                Err(unknown.into())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub id: String,
    /// `None` when the method is external and its file was not supplied.
    pub analysis: Option<MethodAnalysis>,
    pub source: Option<PathBuf>,
}

impl Table1Row {
    pub fn is_available(&self) -> bool {
        self.analysis.is_some()
    }
}

/// Analyses every method in [`TABLE1_METHODS`]. External methods whose file
/// is missing from `methods_dir` become unavailable rows; a file that exists
/// but fails to load is an error.
pub fn table1_report(methods_dir: Option<&Path>) -> Result<Vec<Table1Row>> {
    TABLE1_METHODS
        .iter()
        .map(|&id| {
            let (tab, source) = match catalog(id) {
                Ok(tab) => (Some(tab), None),
                Err(_) => match methods_dir.map(|d| d.join(id).with_extension(TABLEAU_EXTENSION)) {
                    Some(path) if path.is_file() => (Some(load_tableau(&path)?), Some(path)),
                    _ => (None, None),
                },
            };
            Ok(Table1Row {
                id: id.into(),
                analysis: tab.map(|t| MethodAnalysis::with_q_max(&t, DEFAULT_Q_MAX)),
                source,
            })
        })
        .collect()
}

pub(crate) fn flag(b: bool) -> &'static str {
    if b {
        "T"
    } else {
        "F"
    }
}

/// R(z)R(−z) − 1 leading term, e.g. `+0.013888889 z^6`, or `0`.
pub fn rr_term(a: &MethodAnalysis) -> String {
    match a.rr_leading {
        Some((k, x)) => format!("{x:+.8} z^{k}"),
        None => "0".into(),
    }
}

/// Multi-line report for one method.
pub fn describe(a: &MethodAnalysis) -> String {
    let mut out = String::new();
    let f = &a.flags;
    writeln!(out, "method     {}", a.name).unwrap();
    writeln!(out, "kind       {}", a.kind.as_str()).unwrap();
    writeln!(out, "(s, p, q)  ({}, {}, {})", a.stages, a.p, a.q).unwrap();
    if a.q_below_p {
        writeln!(out, "note       q < p").unwrap();
    }
    writeln!(
        out,
        "T4, T5, T6 {:.5e}  {:.5e}  {:.5e}",
        a.t[0], a.t[1], a.t[2]
    )
    .unwrap();
    writeln!(
        out,
        "r5..r8     {:.6}  {:.6}  {:.6}  {:.6}",
        a.r_coeffs[0], a.r_coeffs[1], a.r_coeffs[2], a.r_coeffs[3]
    )
    .unwrap();
    writeln!(out, "R(z)R(-z)-1  {}", rr_term(a)).unwrap();
    writeln!(
        out,
        "C(2) D(1) D(c) D(c^2) D(Ac)  {} {} {} {} {}",
        flag(f.c2),
        flag(f.d_one),
        flag(f.d_c),
        flag(f.d_c2),
        flag(f.d_ac)
    )
    .unwrap();
    writeln!(out, "max|a_ij|  {:.6}", a.max_abs_a).unwrap();
    match a.min_nonzero_b {
        Some(b) => writeln!(out, "min b_j    {b:.6}").unwrap(),
        None => writeln!(out, "min b_j    -").unwrap(),
    }
    out
}

/// Aligned text table with one line per row.
pub fn render_table1(rows: &[Table1Row]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<8} {:>2} {:>2} {:>4} {:>11} {:>11} {:>11}  {:<22} {:<9} {:>9} {:>9}",
        "method", "s", "p", "q", "T4", "T5", "T6", "R(z)R(-z)-1", "C2 D1 Dc Dc2 DAc", "max|a|", "min b"
    )
    .unwrap();
    for row in rows {
        let Some(a) = &row.analysis else {
            writeln!(out, "{:<8} unavailable (no {}.{} supplied)", row.id, row.id, TABLEAU_EXTENSION).unwrap();
            continue;
        };
        let f = &a.flags;
        writeln!(
            out,
            "{:<8} {:>2} {:>2} {:>4} {:>11.5e} {:>11.5e} {:>11.5e}  {:<22} {}  {}  {}  {}   {}  {:>9.5} {:>9.5}",
            row.id,
            a.stages,
            a.p,
            a.q.to_string(),
            a.t[0],
            a.t[1],
            a.t[2],
            rr_term(a),
            flag(f.c2),
            flag(f.d_one),
            flag(f.d_c),
            flag(f.d_c2),
            flag(f.d_ac),
            a.max_abs_a,
            a.min_nonzero_b.unwrap_or(f64::NAN),
        )
        .unwrap();
    }
    out
}

/// Rejects q_max outside the analysable range.
pub fn check_q_max(q_max: usize) -> Result<usize> {
    if (2..=DEFAULT_Q_MAX).contains(&q_max) {
        Ok(q_max)
    } else {
        Err(HarnessError::InvalidArgument(format!("--qmax must be in 2..={DEFAULT_Q_MAX}, got {q_max}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use psrk::PseudoSymplecticOrder;

    #[test]
    fn catalog_ids_resolve_before_paths() {
        assert_eq!(resolve_method("eq3").unwrap().stages(), 8);
        let e = resolve_method("no-such-method").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("no-such-method"));
    }

    #[test]
    fn table_without_external_files() {
        let rows = table1_report(None).unwrap();
        let ids: Vec<_> = rows.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, TABLE1_METHODS);
        let available: Vec<_> = rows.iter().filter(|r| r.is_available()).map(|r| r.id.as_str()).collect();
        assert_eq!(available, ["rk4", "eq2", "eq3", "gl4"]);

        let eq3 = rows[5].analysis.as_ref().unwrap();
        assert_eq!((eq3.stages, eq3.p, eq3.q), (8, 4, PseudoSymplecticOrder::Finite(8)));
        assert!(eq3.t[0] < 1e-15);
        assert!(((eq3.t[1] - 0.64048e-3) / 0.64048e-3).abs() < 1e-4);
        assert!(((eq3.t[2] - 0.91796e-3) / 0.91796e-3).abs() < 1e-4);
        let (k, x) = eq3.rr_leading.unwrap();
        assert_eq!(k, 10);
        assert!(((x - 0.00000950) / 0.00000950).abs() < 1e-3);
        assert!((eq3.min_nonzero_b.unwrap() - 0.0644).abs() < 1e-4);

        let eq2 = rows[4].analysis.as_ref().unwrap();
        assert_eq!((eq2.stages, eq2.p, eq2.q), (7, 4, PseudoSymplecticOrder::Finite(9)));
        assert!((eq2.max_abs_a - 1.7024).abs() < 1e-4);

        let text = render_table1(&rows);
        assert_eq!(text.lines().count(), 9);
        assert!(text.contains("CV8      unavailable"));
    }

    #[test]
    fn description_mentions_orders() {
        let a = MethodAnalysis::new(&psrk::tableau::gl4());
        let text = describe(&a);
        assert!(text.contains("(s, p, q)  (2, 4, inf)"), "{text}");
        assert!(text.contains("R(z)R(-z)-1  0"));
    }

    #[test]
    fn q_max_range() {
        assert!(check_q_max(1).is_err());
        assert_eq!(check_q_max(10).unwrap(), 10);
        assert!(check_q_max(11).is_err());
    }
}
