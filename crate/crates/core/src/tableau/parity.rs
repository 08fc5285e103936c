//! "Even"/"odd" stage-vector checks.
//!
//! For the mirrored node layout (c₁ = 0, c_s = 1, c_{s+1−i} = 1 − c_i for the
//! first three stages, the remaining middle stages at ½) a vector x is even if
//! each mirrored pair agrees, and odd if each mirrored pair sums to zero and
//! every middle component vanishes.

use alloc::string::String;
use alloc::vec::Vec;

use super::{ButcherTableau, TableauError};

const NODE_TOL: f64 = 1e-14;

/// Shifted-Legendre vectors and the C(2) residual built from a tableau.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityVectors {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p3: Vec<f64>,
    /// q₁ = Ac − c²/2.
    pub q1: Vec<f64>,
    pub a_p1: Vec<f64>,
    pub a_p2: Vec<f64>,
    pub a_q1: Vec<f64>,
}

pub fn parity_vectors(tab: &ButcherTableau) -> ParityVectors {
    let c = tab.c();
    let p1: Vec<f64> = c.iter().map(|&x| 2.0 * x - 1.0).collect();
    let p2: Vec<f64> = c.iter().map(|&x| 6.0 * x * x - 6.0 * x + 1.0).collect();
    let p3 = c
        .iter()
        .map(|&x| 20.0 * x * x * x - 30.0 * x * x + 12.0 * x - 1.0)
        .collect();
    let ac = tab.a_mul(c);
    let q1: Vec<f64> = ac.iter().zip(c).map(|(y, x)| y - 0.5 * x * x).collect();
    ParityVectors {
        a_p1: tab.a_mul(&p1),
        a_p2: tab.a_mul(&p2),
        a_q1: tab.a_mul(&q1),
        p1,
        p2,
        p3,
        q1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    /// Whether the nodes follow the mirrored layout the checks assume.
    pub node_symmetric: bool,
    /// Max |x_i − x_mirror(i)| for "A p1" and "q1".
    pub even_residuals: Vec<(String, f64)>,
    /// Max |y_i + y_mirror(i)| and |y_middle| for "A p2" and "A q1".
    pub odd_residuals: Vec<(String, f64)>,
}

impl ParityReport {
    pub fn max_residual(&self) -> f64 {
        self.even_residuals
            .iter()
            .chain(&self.odd_residuals)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }

    pub fn residual(&self, label: &str) -> Option<f64> {
        self.even_residuals
            .iter()
            .chain(&self.odd_residuals)
            .find(|(l, _)| l == label)
            .map(|(_, r)| *r)
    }
}

/// Mirrored pairs and middle stages (0-based) for a 7- or 8-stage layout.
fn layout(s: usize) -> Option<([(usize, usize); 3], &'static [usize])> {
    match s {
        7 => Some(([(0, 6), (1, 5), (2, 4)], &[3])),
        8 => Some(([(0, 7), (1, 6), (2, 5)], &[3, 4])),
        _ => None,
    }
}

fn even_residual(x: &[f64], pairs: &[(usize, usize)]) -> f64 {
    pairs
        .iter()
        .map(|&(i, j)| (x[i] - x[j]).abs())
        .fold(0.0, f64::max)
}

fn odd_residual(y: &[f64], pairs: &[(usize, usize)], middle: &[usize]) -> f64 {
    let paired = pairs.iter().map(|&(i, j)| (y[i] + y[j]).abs());
    let centred = middle.iter().map(|&k| y[k].abs());
    paired.chain(centred).fold(0.0, f64::max)
}

/// Residuals of "A p1 even", "q1 even", "A p2 odd" and "A q1 odd".
///
/// Only 7- and 8-stage tableaux have the required layout; other stage counts
/// are rejected. A tableau of the right size whose nodes are not mirrored is
/// still evaluated but reported with `node_symmetric = false`.
pub fn parity_report(tab: &ButcherTableau) -> Result<ParityReport, TableauError> {
    let s = tab.stages();
    let (pairs, middle) = layout(s).ok_or(TableauError::ParityShape { stages: s })?;
    let c = tab.c();
    let node_symmetric = pairs
        .iter()
        .all(|&(i, j)| (c[i] + c[j] - 1.0).abs() <= NODE_TOL)
        && middle.iter().all(|&k| (c[k] - 0.5).abs() <= NODE_TOL);
    let v = parity_vectors(tab);
    Ok(ParityReport {
        node_symmetric,
        even_residuals: alloc::vec![
            ("A p1".into(), even_residual(&v.a_p1, &pairs)),
            ("q1".into(), even_residual(&v.q1, &pairs)),
        ],
        odd_residuals: alloc::vec![
            ("A p2".into(), odd_residual(&v.a_p2, &pairs, middle)),
            ("A q1".into(), odd_residual(&v.a_q1, &pairs, middle)),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{C2, C3};
    use crate::tableau::{eq2, eq3, family_tableau, point_r, rk4};

    #[test]
    fn eq3_is_fully_parity_symmetric() {
        let r = parity_report(&eq3()).unwrap();
        assert!(r.node_symmetric);
        assert!(r.max_residual() < 1e-14, "{r:?}");
    }

    #[test]
    fn eq3_a_p2_and_a_q1() {
        let v = parity_vectors(&eq3());
        let k = (1.0 - 2.0 * C3) / 4.0;
        let expected = [0.0, C2, k, 0.0, 0.0, -k, -C2, 0.0];
        for (x, y) in v.a_p2.iter().zip(expected) {
            assert!((x - y).abs() < 1e-14);
        }
        let third = -C2 * (6.0 * C3 - 1.0) / (48.0 * (1.0 - C2));
        assert!((v.a_q1[2] - third).abs() < 1e-14);
        assert!((v.a_q1[5] + third).abs() < 1e-14);
    }

    #[test]
    fn family_members_are_parity_symmetric() {
        for psi in [0.3, 0.7, 1.1] {
            let r = parity_report(&family_tableau(psi).unwrap()).unwrap();
            assert!(r.max_residual() < 1e-13, "psi = {psi}: {r:?}");
        }
    }

    #[test]
    fn seven_stage_layouts() {
        let r = parity_report(&eq2()).unwrap();
        assert!(r.node_symmetric);
        let r = parity_report(&point_r()).unwrap();
        assert!(!r.node_symmetric);
    }

    #[test]
    fn rk4_lacks_the_layout() {
        assert_eq!(
            parity_report(&rk4()).unwrap_err(),
            TableauError::ParityShape { stages: 4 }
        );
    }
}
