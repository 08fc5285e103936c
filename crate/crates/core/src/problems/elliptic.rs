//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind, both via the arithmetic-geometric mean.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use super::ProblemError;
#[allow(unused_imports)]
use num_traits::Float;

/// Descending Landen stops once c_n falls below this.
const AGM_TOL: f64 = 1e-16;
const MAX_AGM_STEPS: usize = 64;

fn check_parameter(m: f64) -> Result<(), ProblemError> {
    if (0.0..1.0).contains(&m) {
        Ok(())
    } else {
        Err(ProblemError::Domain { m })
    }
}

/// K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ) = π / (2·AGM(1, √(1 − m))).
pub fn complete_elliptic_k(m: f64) -> Result<f64, ProblemError> {
    check_parameter(m)?;
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// (sn, cn, dn)(u | m) for 0 ≤ m < 1.
pub fn jacobi_elliptic(u: f64, m: f64) -> Result<(f64, f64, f64), ProblemError> {
    check_parameter(m)?;
    if m == 0.0 {
        return Ok((u.sin(), u.cos(), 1.0));
    }
    // Ratios c_n / a_n of the AGM sequence, kept for the backward sweep.
    let mut ratios: Vec<f64> = Vec::new();
    let (mut a, mut b, mut c) = (1.0f64, (1.0 - m).sqrt(), m.sqrt());
    while c.abs() > AGM_TOL && ratios.len() < MAX_AGM_STEPS {
        let next = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = next;
        ratios.push(c / a);
    }
    let mut phi = u * a * (1u64 << ratios.len()) as f64;
    for &r in ratios.iter().rev() {
        let s = (r * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = ((1.0 - m) + m * cn * cn).sqrt();
    Ok((sn, cn, dn))
}
