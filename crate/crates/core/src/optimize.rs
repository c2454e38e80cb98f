//! Closed-form optimal beam-splitter transmissions and squeezing degrees for
//! the cat and squeezed-cat targets, plus a deterministic derivative-free
//! maximizer (coarse grid scan + compass pattern search) for exploring the
//! objectives away from the closed-form manifold.

use serde::Serialize;
use thiserror::Error;

use crate::scheme::{herald_probability, SchemeError, SchemeParams};
use crate::targets::{fidelity_cat_closed, fidelity_scat_closed};

const E: f64 = std::f64::consts::E;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("squeezing r = {r} below validity threshold {threshold} of the closed-form optimum")]
    BelowThreshold { r: f64, threshold: f64 },
    #[error("objective evaluation failed at (r={r}, phi={phi}, t={t}): {source}")]
    Objective {
        r: f64,
        phi: f64,
        t: f64,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

fn arccoth(y: f64) -> f64 {
    0.5 * ((y + 1.0) / (y - 1.0)).ln()
}

/// Smallest squeezing for which the optimal cat transmission stays below 1.
pub fn cat_threshold() -> f64 {
    arccoth((3.0 + 73f64.sqrt()) / 8.0)
}

/// Optimal transmission for the odd-cat target (alpha = 2, n = 1, phi = pi).
pub fn optimal_t_cat(r: f64) -> Result<f64, OptimizeError> {
    let threshold = cat_threshold();
    if r < threshold {
        return Err(OptimizeError::BelowThreshold { r, threshold });
    }
    Ok(0.25 * ((73f64.sqrt() - 3.0) * coth(r) + 8.0).sqrt())
}

/// Smallest squeezing for which the optimal squeezed-cat transmission exists.
pub fn scat_threshold() -> f64 {
    let e4 = E.powi(4);
    arccoth((3.0 + 3.0 * e4 + E * E * (36.0 + e4).sqrt()) / (2.0 * e4 - 3.0))
}

/// Optimal transmission for the squeezed-cat target (alpha = 1/2, R = 1,
/// n = 1, phi = pi).
pub fn optimal_t_scat(r: f64) -> Result<f64, OptimizeError> {
    let threshold = scat_threshold();
    if r < threshold {
        return Err(OptimizeError::BelowThreshold { r, threshold });
    }
    let e4 = E.powi(4);
    Ok((((E * E * (36.0 + e4).sqrt() - 3.0 * (1.0 + e4)) * coth(r) + 4.0 * e4 - 3.0)
        / (8.0 * e4 - 6.0))
        .sqrt())
}

/// Heralding probability on the optimal cat manifold, P(1, r, t_cat(r), pi).
pub fn probability_cat_closed(r: f64) -> f64 {
    let s73 = 73f64.sqrt();
    4.0 * 2f64.sqrt() * (32.0 * r.tanh().powi(2) + 3.0 * s73 - 41.0)
        / ((3.0 * s73 - 9.0).powf(1.5) * r.cosh().powi(2))
}

/// Heralding probability on the optimal squeezed-cat manifold.
pub fn probability_scat_closed(r: f64) -> f64 {
    let e4 = E.powi(4);
    let g = E.powi(6) - 13.0 * E * E + (36.0 + e4).sqrt() * (e4 + 1.0);
    (6.0 * E * E * (4.0 * e4 - 3.0) * g * r.cosh().powi(2) - (4.0 * e4 - 3.0).powi(3))
        / (6.0 * 6f64.sqrt() * E.powi(3) * g.powf(1.5) * r.cosh().powi(4))
}

/// Squeezing maximizing the cat probability and the probability there.
///
/// The optimum is `r* = arccosh(8 / sqrt(3 sqrt(73) - 9))`.
pub fn best_probability_cat() -> (f64, f64) {
    let r = (8.0 / (3.0 * 73f64.sqrt() - 9.0).sqrt()).acosh();
    (r, probability_cat_closed(r))
}

/// Squeezing maximizing the squeezed-cat probability and the probability
/// there (found by deterministic 1D pattern search on the closed form).
pub fn best_probability_scat() -> (f64, f64) {
    let mut r = 1.0;
    let mut best = probability_scat_closed(r);
    let mut step = 0.25;
    while step > 1e-9 {
        let mut moved = false;
        for cand in [r - step, r + step] {
            if cand > scat_threshold() {
                let v = probability_scat_closed(cand);
                if v > best {
                    r = cand;
                    best = v;
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    (r, best)
}

/// What [`maximize`] optimizes over the scheme parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    /// Closed-form odd-cat fidelity (n = 1).
    FidelityCat,
    /// Closed-form squeezed-cat fidelity (n = 1).
    FidelityScat,
    /// Heralding probability for the herald count in the search space.
    Probability,
    /// Wigner negativity for the herald count in the search space.
    Negativity,
}

/// Box constraints; a dimension with equal endpoints is held fixed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchSpace {
    pub r: (f64, f64),
    pub phi: (f64, f64),
    pub t: (f64, f64),
    /// Herald count, used by the probability and negativity objectives.
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Optimum {
    pub r: f64,
    pub phi: f64,
    pub t: f64,
    pub value: f64,
}

fn evaluate(objective: Objective, n: usize, x: [f64; 3]) -> Result<f64, OptimizeError> {
    let [r, phi, t] = x;
    let fail = |source: Box<dyn std::error::Error + Send + Sync>| OptimizeError::Objective {
        r,
        phi,
        t,
        source,
    };
    match objective {
        Objective::FidelityCat => Ok(fidelity_cat_closed(r, t, phi)),
        Objective::FidelityScat => {
            fidelity_scat_closed(r, t, phi).map_err(|e| fail(Box::new(e)))
        }
        Objective::Probability => {
            let p = SchemeParams::new(r, phi, t, n)
                .map_err(|e: SchemeError| fail(Box::new(e)))?;
            Ok(herald_probability(&p))
        }
        Objective::Negativity => {
            // fixed-resolution estimate: its small bias varies smoothly with
            // the parameters, so the argmax is reliable while each call stays
            // cheap enough for a search loop
            let p = SchemeParams::new(r, phi, t, n)
                .map_err(|e: SchemeError| fail(Box::new(e)))?;
            crate::phase_space::wigner_negativity_fixed(&p, 220)
                .map_err(|e: SchemeError| fail(Box::new(e)))
        }
    }
}

/// Coarse grid scan over the free dimensions followed by a compass pattern
/// search with shrinking step (tolerance 1e-6). Deterministic: fixed grids,
/// fixed probe order.
pub fn maximize(objective: Objective, space: &SearchSpace) -> Result<Optimum, OptimizeError> {
    let lo = [space.r.0, space.phi.0, space.t.0];
    let hi = [space.r.1, space.phi.1, space.t.1];
    for d in 0..3 {
        assert!(lo[d] <= hi[d], "empty bounds in dimension {d}");
    }
    let free: Vec<usize> = (0..3).filter(|&d| hi[d] > lo[d]).collect();

    // Coarse scan, 9 points per free dimension.
    let grid = |d: usize, i: usize| lo[d] + (hi[d] - lo[d]) * i as f64 / 8.0;
    let mut best_x = lo;
    let mut best = f64::NEG_INFINITY;
    let steps = |d: usize| if hi[d] > lo[d] { 9 } else { 1 };
    for i in 0..steps(0) {
        for j in 0..steps(1) {
            for k in 0..steps(2) {
                let x = [grid(0, i), grid(1, j), grid(2, k)];
                let v = evaluate(objective, space.n, x)?;
                if v > best {
                    best = v;
                    best_x = x;
                }
            }
        }
    }

    // Compass search on the free dimensions.
    let mut step: Vec<f64> = free.iter().map(|&d| (hi[d] - lo[d]) / 16.0).collect();
    while step.iter().any(|&s| s > 1e-6) {
        let mut moved = false;
        for (si, &d) in free.iter().enumerate() {
            for sign in [-1.0, 1.0] {
                let mut x = best_x;
                x[d] = (x[d] + sign * step[si]).clamp(lo[d], hi[d]);
                if x[d] == best_x[d] {
                    continue;
                }
                let v = evaluate(objective, space.n, x)?;
                if v > best {
                    best = v;
                    best_x = x;
                    moved = true;
                }
            }
        }
        if !moved {
            for s in step.iter_mut() {
                *s /= 2.0;
            }
        }
    }
    Ok(Optimum { r: best_x[0], phi: best_x[1], t: best_x[2], value: best })
}
