//! Van Loock-Furusawa separability criterion for the two output modes.
//!
//! The nullifiers are the quadrature combinations whose total variance is
//! bounded below for separable states; for two equally squeezed inputs the
//! bound reduces to the closed-form condition
//! `2 t sqrt(1-t^2) sin(phi/2) e^{2r} > 1`, which is what this module
//! evaluates. The criterion is sufficient for entanglement; states failing
//! it are reported as "separable by this criterion" rather than separable.

use serde::Serialize;

/// Outcome of the criterion at one parameter point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EntanglementReport {
    /// Left-hand side of the criterion; entangled when above 1.
    pub degree: f64,
    pub entangled: bool,
    /// Total variance of the two nullifiers, `e^{-2r}/2 + e^{-2r}/2`.
    pub nullifier_variance_sum: f64,
}

/// Evaluate the criterion at (r, phi, t).
pub fn entanglement_degree(r: f64, phi: f64, t: f64) -> EntanglementReport {
    let rho = (1.0 - t * t).max(0.0).sqrt();
    let degree = 2.0 * t * rho * (phi / 2.0).sin() * (2.0 * r).exp();
    EntanglementReport {
        degree,
        entangled: degree > 1.0,
        nullifier_variance_sum: (-2.0 * r).exp(),
    }
}

/// One row of the boundary table: the transmission interval with
/// `degree > 1` at a given phase, or `None` when the criterion is never
/// violated there.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundarySample {
    pub phi: f64,
    pub t_low: Option<f64>,
    pub t_high: Option<f64>,
}

/// Entangled t-interval as a function of phi at fixed r.
///
/// Solving `2 t sqrt(1-t^2) sin(phi/2) e^{2r} = 1` as a quadratic in `t^2`
/// gives `t^2 = (1 -/+ sqrt(1 - q^2)) / 2` with `q = e^{-2r}/sin(phi/2)`;
/// no solution exists when `q > 1`.
pub fn separability_boundary(r: f64, phi_samples: usize) -> Vec<BoundarySample> {
    assert!(phi_samples >= 2, "need at least 2 phase samples");
    let step = std::f64::consts::PI / (phi_samples - 1) as f64;
    (0..phi_samples)
        .map(|i| {
            let phi = i as f64 * step;
            let s = (phi / 2.0).sin();
            let q = (-2.0 * r).exp() / s;
            if !(q < 1.0) || r == 0.0 {
                return BoundarySample { phi, t_low: None, t_high: None };
            }
            let root = (1.0 - q * q).sqrt();
            BoundarySample {
                phi,
                t_low: Some(((1.0 - root) / 2.0).sqrt()),
                t_high: Some(((1.0 + root) / 2.0).sqrt()),
            }
        })
        .collect()
}

/// CSV serialization of a boundary table (`phi,t_low,t_high`, empty fields
/// where the interval is empty).
pub fn boundary_to_csv(rows: &[BoundarySample]) -> String {
    let mut out = String::from("phi,t_low,t_high\n");
    for row in rows {
        match (row.t_low, row.t_high) {
            (Some(lo), Some(hi)) => {
                out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", row.phi, lo, hi))
            }
            _ => out.push_str(&format!("{:.16e},,\n", row.phi)),
        }
    }
    out
}
