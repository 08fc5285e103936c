//! Properties of a method computed from its tableau alone: classical order,
//! pseudo-symplectic order, error coefficients, the 𝐃(Φ) flags and
//! stability-function diagnostics.
//!
//! Boolean decisions use [`DECISION_TOL`]; the test M = O uses [`M_ZERO_TOL`].

mod stability;

pub use stability::{rr_minus_one_leading, rr_minus_one_series, stability_coefficients};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::tableau::{ButcherTableau, MethodKind};
use crate::trees::{derivative_weights, enumerate_trees, RootedTree};
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance for order conditions, D(Φ₁, Φ₂) and 𝐃(Φ) decisions.
pub const DECISION_TOL: f64 = 1e-12;
/// Tolerance below which every |m_ij| counts as zero.
pub const M_ZERO_TOL: f64 = 1e-13;
/// Largest classical order probed.
pub const MAX_CLASSICAL_ORDER: usize = 8;
/// Default and largest accepted q_max.
pub const DEFAULT_Q_MAX: usize = 10;

/// A tree with its combinatorial data and Φ(t) for one tableau.
#[derive(Debug, Clone)]
pub struct WeightedTree {
    pub tree: RootedTree,
    pub factorial: f64,
    pub symmetry: f64,
    pub alpha: f64,
    pub phi: Vec<f64>,
    /// b·Φ(t).
    pub weight: f64,
}

impl WeightedTree {
    /// b·Φ(t) − 1/t!.
    pub fn residual(&self) -> f64 {
        self.weight - 1.0 / self.factorial
    }
}

/// Every tree up to a given order, with Φ(t) evaluated for one tableau.
#[derive(Debug, Clone)]
pub struct TreeWeights {
    by_order: Vec<Vec<WeightedTree>>,
}

impl TreeWeights {
    /// Panics if `max_order` is outside 1..=10.
    pub fn new(tab: &ButcherTableau, max_order: usize) -> Self {
        let groups = enumerate_trees(max_order).expect("tree order within the enumeration range");
        let by_order = groups
            .into_iter()
            .map(|group| {
                group
                    .into_iter()
                    .map(|tree| {
                        let phi = derivative_weights(&tree, tab);
                        WeightedTree {
                            factorial: big_to_f64(&tree.factorial()),
                            symmetry: big_to_f64(&tree.symmetry()),
                            alpha: big_to_f64(&tree.monotonic_labelings()),
                            weight: tab.b_dot(&phi),
                            phi,
                            tree,
                        }
                    })
                    .collect()
            })
            .collect();
        TreeWeights { by_order }
    }

    pub fn max_order(&self) -> usize {
        self.by_order.len()
    }

    /// Trees of exactly order `n` (empty outside the computed range).
    pub fn of_order(&self, n: usize) -> &[WeightedTree] {
        n.checked_sub(1)
            .and_then(|k| self.by_order.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeightedTree> {
        self.by_order.iter().flatten()
    }
}

fn big_to_f64(x: &num_bigint::BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// b·Φ(t) − 1/t! for every tree with |t| ≤ `max_order`.
pub fn order_residuals(tab: &ButcherTableau, max_order: usize) -> Vec<(RootedTree, f64)> {
    TreeWeights::new(tab, max_order)
        .iter()
        .map(|w| (w.tree.clone(), w.residual()))
        .collect()
}

fn classical_order_from(weights: &TreeWeights) -> usize {
    (1..=weights.max_order())
        .take_while(|&n| {
            weights
                .of_order(n)
                .iter()
                .all(|w| w.residual().abs() < DECISION_TOL)
        })
        .last()
        .unwrap_or(0)
}

/// Largest p ≤ 8 such that every order condition up to p holds.
pub fn classical_order(tab: &ButcherTableau) -> usize {
    classical_order_from(&TreeWeights::new(tab, MAX_CLASSICAL_ORDER))
}

/// m_ij = b_i a_ij + b_j a_ji − b_i b_j, row-major. Only the upper triangle is
/// evaluated; the lower one is copied, so the result is exactly symmetric.
pub fn m_matrix(tab: &ButcherTableau) -> Vec<f64> {
    let s = tab.stages();
    let b = tab.b();
    let mut m = vec![0.0; s * s];
    for i in 0..s {
        for j in i..s {
            let v = b[i] * tab.a(i, j) + b[j] * tab.a(j, i) - b[i] * b[j];
            m[i * s + j] = v;
            m[j * s + i] = v;
        }
    }
    m
}

fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    m.chunks(v.len())
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Φ₁ᵀ M Φ₂.
pub fn d_form(m: &[f64], phi1: &[f64], phi2: &[f64]) -> f64 {
    dot(phi1, &mat_vec(m, phi2))
}

/// The same bilinear form evaluated without M:
/// b(Φ₁.(AΦ₂)) + b((AΦ₁).Φ₂) − (bΦ₁)(bΦ₂).
pub fn d_form_via_weights(tab: &ButcherTableau, phi1: &[f64], phi2: &[f64]) -> f64 {
    let a1 = tab.a_mul(phi1);
    let a2 = tab.a_mul(phi2);
    let b = tab.b();
    let first: f64 = b.iter().zip(phi1).zip(&a2).map(|((w, x), y)| w * x * y).sum();
    let second: f64 = b.iter().zip(&a1).zip(phi2).map(|((w, x), y)| w * x * y).sum();
    first + second - tab.b_dot(phi1) * tab.b_dot(phi2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudoSymplecticOrder {
    Finite(usize),
    /// Every pair up to q_max passed but M is not zero.
    AtLeast(usize),
    /// M = O: the method is symplectic.
    Infinite,
}

impl PseudoSymplecticOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            PseudoSymplecticOrder::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl core::fmt::Display for PseudoSymplecticOrder {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PseudoSymplecticOrder::Finite(q) => write!(f, "{q}"),
            PseudoSymplecticOrder::AtLeast(q) => write!(f, ">={q}"),
            PseudoSymplecticOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// max |Φ(t₁)ᵀMΦ(t₂)| over all pairs with |t₁| + |t₂| = `total`.
pub fn max_d_residual(weights: &TreeWeights, m: &[f64], total: usize) -> f64 {
    let mut worst = 0.0f64;
    for n1 in 1..total {
        let n2 = total - n1;
        if n1 > n2 {
            break;
        }
        for w1 in weights.of_order(n1) {
            let m_phi1 = mat_vec(m, &w1.phi);
            for w2 in weights.of_order(n2) {
                worst = worst.max(dot(&m_phi1, &w2.phi).abs());
            }
        }
    }
    worst
}

fn pseudo_symplectic_order_from(weights: &TreeWeights, m: &[f64], q_max: usize) -> PseudoSymplecticOrder {
    if m.iter().all(|x| x.abs() < M_ZERO_TOL) {
        return PseudoSymplecticOrder::Infinite;
    }
    for total in 2..=q_max {
        if max_d_residual(weights, m, total) >= DECISION_TOL {
            return PseudoSymplecticOrder::Finite(total - 1);
        }
    }
    PseudoSymplecticOrder::AtLeast(q_max)
}

/// Largest q ≤ `q_max` with D(Φ(t₁), Φ(t₂)) for all |t₁| + |t₂| ≤ q.
///
/// Panics if `q_max` exceeds [`DEFAULT_Q_MAX`] or is below 2.
pub fn pseudo_symplectic_order(tab: &ButcherTableau, q_max: usize) -> PseudoSymplecticOrder {
    assert!((2..=DEFAULT_Q_MAX).contains(&q_max), "q_max must be in 2..=10");
    let weights = TreeWeights::new(tab, q_max - 1);
    pseudo_symplectic_order_from(&weights, &m_matrix(tab), q_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PropertyFlags {
    /// Explicit C(2): (Ac)_i = c_i²/2 for every i, except i = 2 when b₂ = 0.
    pub c2: bool,
    pub d_one: bool,
    pub d_c: bool,
    pub d_c2: bool,
    pub d_ac: bool,
}

/// 𝐃(Φ): MΦ = 0.
pub fn d_vector_holds(m: &[f64], phi: &[f64]) -> bool {
    mat_vec(m, phi).iter().all(|x| x.abs() < DECISION_TOL)
}

pub fn property_flags(tab: &ButcherTableau) -> PropertyFlags {
    let m = m_matrix(tab);
    let c = tab.c();
    let ones = vec![1.0; tab.stages()];
    let c_sq: Vec<f64> = c.iter().map(|x| x * x).collect();
    let ac = tab.a_mul(c);
    let c2 = ac.iter().zip(c).enumerate().all(|(i, (y, x))| {
        (y - 0.5 * x * x).abs() < DECISION_TOL || (i == 1 && tab.b()[1] == 0.0)
    });
    PropertyFlags {
        c2,
        d_one: d_vector_holds(&m, &ones),
        d_c: d_vector_holds(&m, c),
        d_c2: d_vector_holds(&m, &c_sq),
        d_ac: d_vector_holds(&m, &ac),
    }
}

fn error_coefficient_from(weights: &TreeWeights, p: usize) -> f64 {
    weights
        .of_order(p)
        .iter()
        .map(|w| (w.residual() / w.symmetry).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn error_coefficient_alpha_from(weights: &TreeWeights, p: usize) -> f64 {
    let p_fact: f64 = (1..=p).map(|k| k as f64).product();
    weights
        .of_order(p)
        .iter()
        .map(|w| (w.alpha * (w.factorial * w.weight - 1.0)).powi(2))
        .sum::<f64>()
        .sqrt()
        / p_fact
}

/// T_p² = Σ_{|t|=p} (bΦ(t) − 1/t!)²/σ(t)².
pub fn error_coefficient(tab: &ButcherTableau, p: usize) -> f64 {
    error_coefficient_from(&TreeWeights::new(tab, p), p)
}

/// T_p through monotonic labelings: (1/p!)² Σ α(t)² (t!·bΦ(t) − 1)².
pub fn error_coefficient_alpha(tab: &ButcherTableau, p: usize) -> f64 {
    error_coefficient_alpha_from(&TreeWeights::new(tab, p), p)
}

/// Everything reported for one method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodAnalysis {
    pub name: String,
    pub stages: usize,
    pub kind: MethodKind,
    pub p: usize,
    pub q: PseudoSymplecticOrder,
    /// q < p: M is small enough to pass some orders but not all up to p.
    pub q_below_p: bool,
    /// (T₄, T₅, T₆).
    pub t: [f64; 3],
    /// r₅ … r₈ with r_k = k!·[z^k]R(z).
    pub r_coeffs: [f64; 4],
    /// First non-zero term of R(z)R(−z) − 1, as (power, coefficient).
    pub rr_leading: Option<(usize, f64)>,
    pub flags: PropertyFlags,
    pub max_abs_a: f64,
    pub min_nonzero_b: Option<f64>,
}

impl MethodAnalysis {
    pub fn new(tab: &ButcherTableau) -> Self {
        Self::with_q_max(tab, DEFAULT_Q_MAX)
    }

    pub fn with_q_max(tab: &ButcherTableau, q_max: usize) -> Self {
        assert!((2..=DEFAULT_Q_MAX).contains(&q_max), "q_max must be in 2..=10");
        let weights = TreeWeights::new(tab, MAX_CLASSICAL_ORDER.max(q_max - 1));
        let m = m_matrix(tab);
        let p = classical_order_from(&weights);
        let q = pseudo_symplectic_order_from(&weights, &m, q_max);
        let r = stability_coefficients(tab, 8);
        MethodAnalysis {
            name: tab.name().into(),
            stages: tab.stages(),
            kind: tab.kind(),
            p,
            q,
            q_below_p: matches!(q, PseudoSymplecticOrder::Finite(q) if q < p),
            t: [4, 5, 6].map(|k| error_coefficient_from(&weights, k)),
            r_coeffs: [r[5], r[6], r[7], r[8]],
            rr_leading: rr_minus_one_leading(tab),
            flags: property_flags(tab),
            max_abs_a: tab.max_abs_a(),
            min_nonzero_b: tab.min_nonzero_weight(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{eq2, eq3, gl4, point_r, rk4};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn classical_orders() {
        assert_eq!(classical_order(&rk4()), 4);
        assert_eq!(classical_order(&gl4()), 4);
        assert_eq!(classical_order(&eq2()), 4);
        assert_eq!(classical_order(&eq3()), 4);
        assert_eq!(classical_order(&point_r()), 4);
    }

    #[test]
    fn residual_listing() {
        let res = order_residuals(&rk4(), 5);
        assert_eq!(res.len(), 1 + 1 + 2 + 4 + 9);
        assert!(res.iter().filter(|(t, _)| t.order() <= 4).all(|(_, r)| r.abs() < 1e-15));
        assert!(res.iter().any(|(t, r)| t.order() == 5 && r.abs() > 1e-3));
    }

    #[test]
    fn pseudo_symplectic_orders() {
        assert_eq!(pseudo_symplectic_order(&rk4(), 10), PseudoSymplecticOrder::Finite(4));
        assert_eq!(pseudo_symplectic_order(&eq3(), 10), PseudoSymplecticOrder::Finite(8));
        assert_eq!(pseudo_symplectic_order(&eq2(), 10), PseudoSymplecticOrder::Finite(9));
        assert_eq!(pseudo_symplectic_order(&gl4(), 10), PseudoSymplecticOrder::Infinite);
        assert_eq!(pseudo_symplectic_order(&point_r(), 10), PseudoSymplecticOrder::Finite(6));
    }

    #[test]
    fn q_max_caps_the_search() {
        assert_eq!(pseudo_symplectic_order(&eq3(), 6), PseudoSymplecticOrder::AtLeast(6));
    }

    #[test]
    fn midpoint_equivalent_m_matrix() {
        let t = ButcherTableau::new(
            "two-stage midpoint",
            vec![vec![0.5, 0.0], vec![0.0, 0.5]],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
        )
        .unwrap();
        assert_eq!(m_matrix(&t), [0.25, -0.25, -0.25, 0.25]);
    }

    #[test]
    fn m_matrix_of_zero_weights_vanishes() {
        let t = ButcherTableau::new(
            "zero weights",
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            vec![0.0, 0.0],
            vec![0.0, 1.0],
        )
        .unwrap();
        assert!(m_matrix(&t).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gl4_m_is_zero() {
        assert!(m_matrix(&gl4()).iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn flags_match_table() {
        let f = property_flags(&eq3());
        assert_eq!(f, PropertyFlags { c2: false, d_one: true, d_c: true, d_c2: true, d_ac: true });
        let f = property_flags(&rk4());
        assert_eq!(f, PropertyFlags { c2: false, d_one: true, d_c: false, d_c2: false, d_ac: false });
        let f = property_flags(&gl4());
        assert_eq!(f, PropertyFlags { c2: true, d_one: true, d_c: true, d_c2: true, d_ac: true });
        let f = property_flags(&eq2());
        assert_eq!(f, PropertyFlags { c2: false, d_one: true, d_c: true, d_c2: true, d_ac: true });
    }

    #[test]
    fn error_coefficients() {
        assert!(rel(error_coefficient(&rk4(), 5), 14.504e-3) < 1e-4);
        assert!(rel(error_coefficient(&rk4(), 6), 16.035e-3) < 1e-4);
        assert!(rel(error_coefficient(&eq3(), 5), 0.64048e-3) < 1e-4);
        assert!(rel(error_coefficient(&eq3(), 6), 0.91796e-3) < 1e-4);
        assert!(rel(error_coefficient(&eq2(), 5), 112.99e-3) < 1e-4);
        assert!(rel(error_coefficient(&eq2(), 6), 132.54e-3) < 1e-4);
        assert!(rel(error_coefficient(&gl4(), 5), 4.3306e-3) < 1e-4);
        assert!(rel(error_coefficient(&gl4(), 6), 5.6178e-3) < 1e-4);
        assert!(error_coefficient(&eq3(), 4) < 1e-14);
    }

    #[test]
    fn both_error_coefficient_forms_agree() {
        for tab in [rk4(), gl4(), eq2(), eq3(), point_r()] {
            for p in 5..=7 {
                let a = error_coefficient(&tab, p);
                let b = error_coefficient_alpha(&tab, p);
                assert!(rel(b, a) < 1e-12, "{} p={p}: {a} vs {b}", tab.name());
            }
        }
    }

    #[test]
    fn bilinear_routes_agree() {
        let tab = eq2();
        let m = m_matrix(&tab);
        let w = TreeWeights::new(&tab, 5);
        for t1 in w.iter() {
            for t2 in w.iter() {
                let x = d_form(&m, &t1.phi, &t2.phi);
                let y = d_form_via_weights(&tab, &t1.phi, &t2.phi);
                assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn full_analysis_of_eq3() {
        let a = MethodAnalysis::new(&eq3());
        assert_eq!((a.stages, a.p, a.q), (8, 4, PseudoSymplecticOrder::Finite(8)));
        assert!(!a.q_below_p);
        assert!(a.t[0] < 1e-14);
        let (power, coef) = a.rr_leading.unwrap();
        assert_eq!(power, 10);
        assert!(rel(coef, 0.00000950) < 1e-2);
    }
}
