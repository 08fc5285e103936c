//! Butcher tableaux, the built-in method catalog and the structural checks
//! used to derive the 8-stage family.

mod catalog;
mod parity;
mod zeta;

pub use catalog::{
    catalog, eq2, eq3, eq3_exact, family_tableau, family_varphi, gauss_collocation, gl4, point_r, rk4,
    CATALOG_NAMES, GAMMA,
};
pub use parity::{parity_report, parity_vectors, ParityReport, ParityVectors};
pub use zeta::{zeta, zeta_coefficient, zeta_exact, ZETA_TABLE};

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{ExactScalar, Qc2Element, Rational};

/// Row sums must match the nodes to this tolerance for a tableau to be accepted.
pub const ROW_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableauError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("row {row}: sum of a_ij differs from c_i by {residual:e}")]
    RowSum { row: usize, residual: f64 },
    #[error("row {row}: exact sum of a_ij differs from c_i")]
    ExactRowSum { row: usize },
    #[error("declared explicit but a[{row}][{col}] is non-zero")]
    NotExplicit { row: usize, col: usize },
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("psi = {psi} hits the pole of chi at varphi = {varphi}")]
    FamilyPole { psi: f64, varphi: f64 },
    #[error("parity checks need 7 or 8 stages with mirrored nodes; got {stages} stages")]
    ParityShape { stages: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Explicit,
    Implicit,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Explicit => "explicit",
            MethodKind::Implicit => "implicit",
        }
    }
}

/// Exact (A, b, c) over some exact scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficients<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

impl<T: ExactScalar> ExactCoefficients<T> {
    /// First row (1-based) whose exact sum differs from its node.
    pub fn row_sum_violation(&self) -> Option<usize> {
        self.a.iter().zip(&self.c).position(|(row, ci)| {
            let sum = row.iter().cloned().fold(T::zero(), |acc, x| acc + x);
            sum != *ci
        })
        .map(|i| i + 1)
    }

    pub fn weight_sum(&self) -> T {
        self.b.iter().cloned().fold(T::zero(), |acc, x| acc + x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExactTableau {
    Rational(ExactCoefficients<Rational>),
    Qc2(ExactCoefficients<Qc2Element>),
}

/// Exact scalars a tableau knows how to carry.
pub trait TableauScalar: ExactScalar {
    fn wrap(coeffs: ExactCoefficients<Self>) -> ExactTableau;
}

impl TableauScalar for Rational {
    fn wrap(coeffs: ExactCoefficients<Self>) -> ExactTableau {
        ExactTableau::Rational(coeffs)
    }
}

impl TableauScalar for Qc2Element {
    fn wrap(coeffs: ExactCoefficients<Self>) -> ExactTableau {
        ExactTableau::Qc2(coeffs)
    }
}

/// An s-stage Runge–Kutta method.
///
/// `A` is stored row-major. Every constructor checks that each row of `A`
/// sums to the corresponding node.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    name: String,
    kind: MethodKind,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    exact: Option<ExactTableau>,
}

impl ButcherTableau {
    /// Builds a tableau, inferring the kind from the sparsity of `A`.
    pub fn new(
        name: impl Into<String>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: Vec<f64>,
    ) -> Result<Self, TableauError> {
        let s = b.len();
        check_shape(s, &a, c.len())?;
        let explicit = a
            .iter()
            .enumerate()
            .all(|(i, row)| row[i..].iter().all(|&x| x == 0.0));
        let kind = if explicit {
            MethodKind::Explicit
        } else {
            MethodKind::Implicit
        };
        Self::with_kind(name, kind, a, b, c)
    }

    /// Builds a tableau with a declared kind; an explicit declaration is
    /// rejected if any a_ij with j ≥ i is non-zero.
    pub fn with_kind(
        name: impl Into<String>,
        kind: MethodKind,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: Vec<f64>,
    ) -> Result<Self, TableauError> {
        let s = b.len();
        check_shape(s, &a, c.len())?;
        if kind == MethodKind::Explicit {
            for (i, row) in a.iter().enumerate() {
                if let Some(j) = row[i..].iter().position(|&x| x != 0.0) {
                    return Err(TableauError::NotExplicit {
                        row: i + 1,
                        col: i + j + 1,
                    });
                }
            }
        }
        for (i, (row, &ci)) in a.iter().zip(&c).enumerate() {
            let residual = (row.iter().sum::<f64>() - ci).abs();
            if !(residual <= ROW_SUM_TOL) {
                return Err(TableauError::RowSum {
                    row: i + 1,
                    residual,
                });
            }
        }
        Ok(ButcherTableau {
            name: name.into(),
            kind,
            a: a.into_iter().flatten().collect(),
            b,
            c,
            exact: None,
        })
    }

    /// Builds a tableau from exact entries; row sums are checked exactly and
    /// the doubles are the embeddings of the exact values.
    pub fn from_exact<T: TableauScalar>(
        name: impl Into<String>,
        kind: Option<MethodKind>,
        coeffs: ExactCoefficients<T>,
    ) -> Result<Self, TableauError> {
        check_shape(coeffs.b.len(), &coeffs.a, coeffs.c.len())?;
        if let Some(row) = coeffs.row_sum_violation() {
            return Err(TableauError::ExactRowSum { row });
        }
        let to_f64 = |v: &[T]| v.iter().map(ExactScalar::to_f64).collect::<Vec<_>>();
        let a = coeffs.a.iter().map(|row| to_f64(row)).collect();
        let b = to_f64(&coeffs.b);
        let c = to_f64(&coeffs.c);
        let mut tab = match kind {
            Some(kind) => Self::with_kind(name, kind, a, b, c)?,
            None => Self::new(name, a, b, c)?,
        };
        tab.exact = Some(T::wrap(coeffs));
        Ok(tab)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn kind(&self) -> MethodKind {
        self.kind
    }

    pub fn is_explicit(&self) -> bool {
        self.kind == MethodKind::Explicit
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.stages() + j]
    }

    pub fn a_row(&self, i: usize) -> &[f64] {
        let s = self.stages();
        &self.a[i * s..(i + 1) * s]
    }

    pub fn a_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.a.chunks(self.stages())
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn exact(&self) -> Option<&ExactTableau> {
        self.exact.as_ref()
    }

    /// A·v.
    pub fn a_mul(&self, v: &[f64]) -> Vec<f64> {
        self.a_rows()
            .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// b·v.
    pub fn b_dot(&self, v: &[f64]) -> f64 {
        self.b.iter().zip(v).map(|(x, y)| x * y).sum()
    }

    pub fn max_row_sum_residual(&self) -> f64 {
        self.a_rows()
            .zip(&self.c)
            .map(|(row, ci)| (row.iter().sum::<f64>() - ci).abs())
            .fold(0.0, f64::max)
    }

    /// max |a_ij|.
    pub fn max_abs_a(&self) -> f64 {
        self.a.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Smallest weight among the non-zero ones.
    pub fn min_nonzero_weight(&self) -> Option<f64> {
        self.b
            .iter()
            .copied()
            .filter(|&x| x != 0.0)
            .reduce(f64::min)
    }
}

fn check_shape<T>(s: usize, a: &[Vec<T>], c_len: usize) -> Result<(), TableauError> {
    if s == 0 {
        return Err(TableauError::Shape("tableau needs at least one stage".into()));
    }
    if c_len != s {
        return Err(TableauError::Shape(alloc::format!(
            "{c_len} nodes for {s} weights"
        )));
    }
    if a.len() != s {
        return Err(TableauError::Shape(alloc::format!(
            "{} rows of A for {s} stages",
            a.len()
        )));
    }
    if let Some(i) = a.iter().position(|row| row.len() != s) {
        return Err(TableauError::Shape(alloc::format!(
            "row {} of A has {} entries, expected {s}",
            i + 1,
            a[i].len()
        )));
    }
    Ok(())
}
