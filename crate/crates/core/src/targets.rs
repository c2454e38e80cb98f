//! Target states (odd/even cats, squeezed cats, Fock states), their
//! wavefunctions, the numeric overlap fidelity with the heralded output, and
//! the closed-form fidelities for the single-photon herald.
//!
//! Conventions: coherent amplitude alpha is real and displaces the position
//! quadrature by `sqrt(2) alpha`; the cat squeezing `R` (nepers) narrows the
//! x-quadrature by `e^{-R}`, i.e. the squeezed coherent state is
//! `pi^{-1/4} e^{R/2} exp(-e^{2R}(x - sqrt(2) alpha)^2 / 2)`. Both choices
//! are pinned by the closed-form/numeric fidelity agreement tests.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::quad::{self, QuadError};
use crate::scheme::{output_wavefunction, SchemeError, SchemeParams};

const PI: f64 = std::f64::consts::PI;
const E: f64 = std::f64::consts::E;

#[derive(Debug, Error)]
pub enum TargetError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("closed-form denominator vanishes at (r={r}, t={t}, phi={phi}); perturb the parameters")]
    SingularDenominator { r: f64, t: f64, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Reference state the heralded output is compared against.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum TargetState {
    /// `(|alpha> + parity |-alpha>) / sqrt(N_cat)`.
    Cat { alpha: f64, parity: Parity },
    /// Cat built from squeezed coherent states `D(alpha) S(R) |0>`.
    SqueezedCat { alpha: f64, squeezing: f64, parity: Parity },
    Fock { n: usize },
}

impl TargetState {
    pub fn odd_cat(alpha: f64) -> Self {
        TargetState::Cat { alpha, parity: Parity::Odd }
    }

    pub fn odd_squeezed_cat(alpha: f64, squeezing: f64) -> Self {
        TargetState::SqueezedCat { alpha, squeezing, parity: Parity::Odd }
    }

    /// Squared norm of the bare superposition.
    ///
    /// For the plain cat this is `N_cat = 2 (1 + parity * e^{-2 alpha^2})` in
    /// closed form; the squeezed-cat constant is obtained by quadrature.
    pub fn norm_constant(&self) -> f64 {
        match *self {
            TargetState::Cat { alpha, parity } => {
                2.0 * (1.0 + parity.sign() * (-2.0 * alpha * alpha).exp())
            }
            TargetState::SqueezedCat { .. } => {
                let half = self.support_halfwidth();
                quad::simpson(-half, half, 4000, |x| self.bare(x).norm_sqr())
            }
            TargetState::Fock { .. } => 1.0,
        }
    }

    /// Unnormalized superposition (or Hermite function for Fock targets).
    fn bare(&self, x: f64) -> Complex64 {
        match *self {
            TargetState::Cat { alpha, parity } => {
                gaussian_lobe(alpha, 0.0, x) + parity.sign() * gaussian_lobe(-alpha, 0.0, x)
            }
            TargetState::SqueezedCat { alpha, squeezing, parity } => {
                gaussian_lobe(alpha, squeezing, x)
                    + parity.sign() * gaussian_lobe(-alpha, squeezing, x)
            }
            TargetState::Fock { n } => Complex64::new(hermite_function(n, x), 0.0),
        }
    }

    pub fn support_halfwidth(&self) -> f64 {
        match *self {
            TargetState::Cat { alpha, .. } => 2f64.sqrt() * alpha.abs() + 8.0,
            TargetState::SqueezedCat { alpha, squeezing, .. } => {
                2f64.sqrt() * alpha.abs() + 8.0 * (-squeezing).exp().max(1.0)
            }
            TargetState::Fock { n } => (2.0 * n as f64 + 1.0).sqrt() + 6.0,
        }
    }
}

/// Squeezed coherent lobe `pi^{-1/4} e^{R/2} exp(-e^{2R}(x - sqrt(2) a)^2/2)`.
fn gaussian_lobe(alpha: f64, squeezing: f64, x: f64) -> Complex64 {
    let d = 2f64.sqrt() * alpha;
    let u = x - d;
    Complex64::new(
        PI.powf(-0.25) * (squeezing / 2.0).exp() * (-(2.0 * squeezing).exp() * u * u / 2.0).exp(),
        0.0,
    )
}

/// Normalized Hermite function `pi^{-1/4} H_n(x) e^{-x^2/2} / sqrt(2^n n!)`
/// via the stable three-term recurrence.
pub(crate) fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-x * x / 2.0).exp();
    for m in 0..n {
        let next = (2.0 / (m as f64 + 1.0)).sqrt() * x * cur
            - (m as f64 / (m as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized target wavefunction at `x`.
pub fn target_wavefunction(ts: &TargetState, x: f64) -> Complex64 {
    ts.bare(x) / ts.norm_constant().sqrt()
}

/// `|<target|output>|^2` by self-convergent quadrature.
pub fn fidelity_numeric(p: &SchemeParams, ts: &TargetState) -> Result<f64, TargetError> {
    let wf = output_wavefunction(p)?;
    let norm = ts.norm_constant().sqrt();
    let half = wf.support_halfwidth().max(ts.support_halfwidth());
    let overlap = quad::simpson_complex_adaptive(-half, half, 512, 1e-11, 10, |x| {
        (ts.bare(x) / norm).conj() * wf.evaluate(x)
    })?;
    Ok(overlap.norm_sqr().min(1.0 + 1e-9))
}

/// Closed-form fidelity of the n=1 herald with the odd cat of amplitude 2.
pub fn fidelity_cat_closed(r: f64, t: f64, phi: f64) -> f64 {
    let gamma = 2.0 * t * (1.0 - t * t).sqrt() * (phi / 2.0).sin() * r.sinh();
    let s = (phi / 2.0).sin();
    4.0 * (gamma * gamma + 1.0).powf(1.5)
        * (-4.0 * r.tanh() * (1.0 - 2.0 * t * t * s * s)).exp()
        / (4f64.sinh() * r.cosh().powi(3))
}

/// Closed-form fidelity of the n=1 herald with the odd squeezed cat
/// (alpha = 1/2, R = 1).
pub fn fidelity_scat_closed(r: f64, t: f64, phi: f64) -> Result<f64, TargetError> {
    let s = (phi / 2.0).sin();
    let cot = (phi / 2.0).cos() / s;
    let e2 = E * E;
    let one_m_eip = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, phi);
    let ts2 = t * t * r.sinh();
    let num = Complex64::new(1.0, 0.0) + r.exp() * one_m_eip * ts2;
    let den = r.exp() * (e2 - 1.0) * one_m_eip * ts2
        + Complex64::new((2.0 * r).exp() + e2, 0.0);
    let rad = (1.0 + 4.0 * t * t * (1.0 - t * t) * r.sinh().powi(2) * s * s)
        / (cot * cot + (((2.0 * r).exp() - 1.0) * t * t + 1.0).powi(2));
    let g = r.exp() * (num / den).norm() * rad.sqrt();
    let inner = Complex64::new(1.0 - e2, 0.0)
        - 2.0 * r.exp() * r.cosh() / (Complex64::new(1.0, 0.0) + one_m_eip * r.exp() * ts2);
    if inner.norm() < 1e-12 * (1.0 + e2) {
        return Err(TargetError::SingularDenominator { r, t, phi });
    }
    let coth_q = 1.0 / (e2 / 4.0).tanh();
    Ok(2.0 * g.powi(3) * E.powi(5) * (coth_q - 1.0) / s.powi(3)
        * (-(e2 * e2 / 2.0) * (1.0 / inner).re).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::{optimal_t_cat, optimal_t_scat};

    fn params(r: f64, phi: f64, t: f64, n: usize) -> SchemeParams {
        SchemeParams::new(r, phi, t, n).unwrap()
    }

    #[test]
    fn even_cat_zero_amplitude_is_vacuum() {
        let ts = TargetState::Cat { alpha: 0.0, parity: Parity::Even };
        for &x in &[-1.5f64, 0.0, 0.7] {
            let want = PI.powf(-0.25) * (-x * x / 2.0).exp();
            assert!((target_wavefunction(&ts, x).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn odd_cat_vanishes_at_origin() {
        for &alpha in &[0.5, 1.0, 2.0] {
            let ts = TargetState::odd_cat(alpha);
            assert!(target_wavefunction(&ts, 0.0).norm() < 1e-14);
        }
    }

    #[test]
    fn targets_are_normalized() {
        for ts in [
            TargetState::odd_cat(2.0),
            TargetState::SqueezedCat { alpha: 0.5, squeezing: 1.0, parity: Parity::Even },
            TargetState::Fock { n: 4 },
        ] {
            let half = ts.support_halfwidth();
            let got = quad::simpson(-half, half, 6000, |x| target_wavefunction(&ts, x).norm_sqr());
            assert!((got - 1.0).abs() < 1e-10, "{ts:?}: {got}");
        }
    }

    #[test]
    fn squeezed_cat_norm_matches_overlap_formula() {
        // <a,R|-a,R> = exp(-2 alpha^2 e^{2R}), so N = 2(1 +/- that).
        let ts = TargetState::odd_squeezed_cat(0.5, 1.0);
        let want = 2.0 * (1.0 - (-2.0 * 0.25 * 2.0f64.exp()).exp());
        assert!((ts.norm_constant() - want).abs() < 1e-9);
    }

    #[test]
    fn fock_point_fidelity_is_one() {
        let r8 = crate::db_to_nepers(8.0);
        for n in 1..=3 {
            let p = params(r8, PI, std::f64::consts::FRAC_1_SQRT_2, n);
            let f = fidelity_numeric(&p, &TargetState::Fock { n }).unwrap();
            assert!(f >= 1.0 - 1e-9, "n={n}: {f}");
        }
    }

    #[test]
    fn parity_orthogonality() {
        let p = params(0.9, 2.0, 0.6, 1);
        let f = fidelity_numeric(&p, &TargetState::Cat { alpha: 1.5, parity: Parity::Even })
            .unwrap();
        assert!(f < 1e-10, "{f}");
        let p2 = params(0.9, 2.0, 0.6, 2);
        let f2 = fidelity_numeric(&p2, &TargetState::odd_cat(1.5)).unwrap();
        assert!(f2 < 1e-10, "{f2}");
    }

    #[test]
    fn cat_closed_form_matches_numeric() {
        let ts = TargetState::odd_cat(2.0);
        for &r in &[0.4, 0.9, 1.4] {
            for &t in &[0.25, 0.55, 0.85] {
                for &phi in &[0.9, 2.0, PI] {
                    let closed = fidelity_cat_closed(r, t, phi);
                    let numeric = fidelity_numeric(&params(r, phi, t, 1), &ts).unwrap();
                    assert!(
                        (closed - numeric).abs() < 1e-7,
                        "r={r} t={t} phi={phi}: {closed} vs {numeric}"
                    );
                }
            }
        }
    }

    #[test]
    fn scat_closed_form_matches_numeric() {
        let ts = TargetState::odd_squeezed_cat(0.5, 1.0);
        for &r in &[0.5, 0.9, 1.3] {
            for &t in &[0.3, 0.6, 0.85] {
                for &phi in &[1.1, 2.2, PI] {
                    let closed = fidelity_scat_closed(r, t, phi).unwrap();
                    let numeric = fidelity_numeric(&params(r, phi, t, 1), &ts).unwrap();
                    assert!(
                        (closed - numeric).abs() < 1e-6,
                        "r={r} t={t} phi={phi}: {closed} vs {numeric}"
                    );
                }
            }
        }
    }

    #[test]
    fn optimized_cat_fidelity_constant() {
        let values: Vec<f64> = [0.86, 1.0, 1.3]
            .iter()
            .map(|&r| fidelity_cat_closed(r, optimal_t_cat(r).unwrap(), PI))
            .collect();
        for &f in &values {
            assert!((f - 0.88).abs() < 5e-3, "{f}");
        }
        let spread = values.iter().cloned().fold(f64::MIN, f64::max)
            - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-3, "{spread}");
    }

    #[test]
    fn optimized_scat_fidelity() {
        for &r in &[0.6, 1.032, 1.3] {
            let f = fidelity_scat_closed(r, optimal_t_scat(r).unwrap(), PI).unwrap();
            assert!((f - 0.98).abs() < 5e-3, "r={r}: {f}");
        }
    }

    #[test]
    fn balanced_splitter_is_suboptimal_for_scat() {
        let tau = optimal_t_scat(1.0).unwrap();
        let best = fidelity_scat_closed(1.0, tau, PI).unwrap();
        let balanced = fidelity_scat_closed(1.0, std::f64::consts::FRAC_1_SQRT_2, PI).unwrap();
        assert!(balanced < best);
    }

    #[test]
    fn small_transmission_cat_fidelity_is_low() {
        for &r in &[0.3, 0.8, 1.4] {
            let f = fidelity_cat_closed(r, 0.01, 2.0);
            assert!(f < 0.2, "r={r}: {f}");
        }
    }

    #[test]
    fn closed_forms_stay_in_unit_interval() {
        let mut state = 99u64;
        let mut unif = move |lo: f64, hi: f64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            lo + (hi - lo) * ((state >> 11) as f64 / (1u64 << 53) as f64)
        };
        for _ in 0..10_000 {
            let (r, t, phi) = (unif(0.01, 1.4), unif(0.01, 0.99), unif(0.05, PI));
            let fc = fidelity_cat_closed(r, t, phi);
            assert!((0.0..=1.0 + 1e-12).contains(&fc), "cat {fc} at r={r} t={t} phi={phi}");
            let fs = fidelity_scat_closed(r, t, phi).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&fs), "scat {fs} at r={r} t={t} phi={phi}");
        }
    }
}
