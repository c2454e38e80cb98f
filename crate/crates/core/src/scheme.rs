//! The physical scheme: two equally squeezed vacua on a beam splitter, a
//! photon-number measurement on one arm, and the closed-form description of
//! the heralded state in the other arm.

use num_complex::Complex64;
use thiserror::Error;

use crate::specfun::gen_hermite;

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("invalid scheme parameter {name}: {value} outside {bound}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        bound: &'static str,
    },
    /// Separable configuration (gamma = 0): both input states are even, so an
    /// odd photon count can never be detected.
    #[error("impossible outcome: odd herald n = {n} in a separable configuration (gamma = 0)")]
    ImpossibleOutcome { n: usize },
}

/// The four physical knobs of the scheme.
///
/// `r` is the common squeezing degree of both inputs (nepers), `phi` the
/// relative phase between them, `t` the beam-splitter amplitude transmission,
/// and `n` the photon count reported by the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    r: f64,
    phi: f64,
    t: f64,
    n: usize,
}

impl SchemeParams {
    pub fn new(r: f64, phi: f64, t: f64, n: usize) -> Result<Self, SchemeError> {
        let check = |name: &'static str, value: f64, lo: f64, hi: f64, bound: &'static str| {
            if !value.is_finite() || value < lo || value > hi {
                Err(SchemeError::InvalidParameter { name, value, bound })
            } else {
                Ok(())
            }
        };
        check("r", r, 0.0, f64::INFINITY, "[0, inf)")?;
        check("phi", phi, 0.0, std::f64::consts::PI, "[0, pi]")?;
        check("t", t, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { r, phi, t, n })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Amplitude reflection, `rho = sqrt(1 - t^2)`.
    pub fn rho(&self) -> f64 {
        (1.0 - self.t * self.t).sqrt()
    }
    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..*self }
    }

    /// True when the two beam-splitter outputs are separable (gamma = 0):
    /// `t` at an endpoint or no relative phase.
    pub fn is_separable_configuration(&self) -> bool {
        self.t == 0.0 || self.t == 1.0 || self.phi == 0.0 || self.r == 0.0
    }
}

/// Coefficients derived from the scheme parameters that appear throughout the
/// closed forms.
#[derive(Debug, Clone, Copy)]
pub struct DerivedCoefficients {
    /// Gaussian-integral parameter multiplying `x1^2` in the projection integral.
    pub a: Complex64,
    /// Cross-term parameter multiplying `x1 x2`.
    pub b: Complex64,
    /// Output-coordinate parameter multiplying `x2^2`.
    pub c: Complex64,
    /// `xi = (1 + (e^{2r}-1) t^2) sin(phi/2) + i cos(phi/2)`.
    pub xi: Complex64,
    /// `gamma = 2 t sqrt(1-t^2) sin(phi/2) sinh r`; zero iff separable.
    pub gamma: f64,
    /// `eta = t^2 sin(phi) sinh(2r)` (Wigner cross term).
    pub eta: f64,
}

/// Wavefunction of a squeezed vacuum with squeezing `r` and phase-plane
/// rotation `phi/2`:
/// `pi^(-1/4) (cosh 2r - cos phi sinh 2r)^(-1/4)
///  exp(-(x^2/2)(1 + i sin phi sinh 2r)/(cosh 2r - cos phi sinh 2r))`.
pub fn squeezed_vacuum_wavefunction(r: f64, phi: f64, x: f64) -> Complex64 {
    let den = (2.0 * r).cosh() - phi.cos() * (2.0 * r).sinh();
    let pref = std::f64::consts::PI.powf(-0.25) * den.powf(-0.25);
    let w = Complex64::new(1.0, phi.sin() * (2.0 * r).sinh()) / den;
    pref * (-w * x * x / 2.0).exp()
}

/// Complex envelope coefficient of the squeezed-vacuum wavefunction: the
/// state is `C exp(-(w/2) x^2)` with `w` returned here.
fn squeezed_vacuum_exponent(r: f64, phi: f64) -> Complex64 {
    let den = (2.0 * r).cosh() - phi.cos() * (2.0 * r).sinh();
    Complex64::new(1.0, phi.sin() * (2.0 * r).sinh()) / den
}

pub fn derived_coefficients(p: &SchemeParams) -> DerivedCoefficients {
    let (r, phi, t) = (p.r(), p.phi(), p.t());
    let t2 = t * t;
    let den = (2.0 * r).cosh() - phi.cos() * (2.0 * r).sinh();
    let w = Complex64::new(1.0, phi.sin() * (2.0 * r).sinh()) / den;
    let e2r = (2.0 * r).exp();
    let a = 0.5 * (Complex64::new(1.0 + e2r * t2, 0.0) - (t2 - 1.0) * w);
    let b = ((4.0 * r).exp() - 1.0) * t * (1.0 - t2).sqrt() * (phi / 2.0).sin()
        / Complex64::new(e2r * (phi / 2.0).sin(), (phi / 2.0).cos());
    let c = 0.5 * (t2 * w - Complex64::new(e2r * (t2 - 1.0), 0.0));
    let xi = Complex64::new((1.0 + (e2r - 1.0) * t2) * (phi / 2.0).sin(), (phi / 2.0).cos());
    let gamma = 2.0 * t * (1.0 - t2).sqrt() * (phi / 2.0).sin() * r.sinh();
    let eta = t2 * phi.sin() * (2.0 * r).sinh();
    DerivedCoefficients { a, b, c, xi, gamma, eta }
}

/// The heralded output state in closed form: a Gaussian envelope times a
/// generalized Hermite polynomial,
/// `psi(x) = norm_factor * exp(envelope_coeff x^2) * H_deg(hermite_linear x, hermite_offset)`.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormWavefunction {
    pub norm_factor: Complex64,
    /// Coefficient of `x^2` in the exponent; `Re < 0` (normalizable).
    pub envelope_coeff: Complex64,
    /// Coefficient of `x` in the first Hermite slot.
    pub hermite_linear: Complex64,
    /// Constant second Hermite slot (chi).
    pub hermite_offset: Complex64,
    /// Detected photon count.
    pub n: usize,
    /// Degree of the Hermite factor (0 on the separable path).
    hermite_degree: usize,
}

impl ClosedFormWavefunction {
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.norm_factor
            * (self.envelope_coeff * x * x).exp()
            * gen_hermite(self.hermite_degree, self.hermite_linear * x, self.hermite_offset)
    }

    /// Half-width of a domain outside which `|psi|^2` is negligible.
    pub fn support_halfwidth(&self) -> f64 {
        let sigma = (-0.5 / self.envelope_coeff.re).sqrt();
        8.0 * sigma + (2.0 * self.n as f64 + 1.0).sqrt()
    }
}

/// Closed-form output wavefunction for detecting `n` photons.
///
/// On the separable path (gamma = 0) the unmeasured arm is simply the
/// appropriate squeezed vacuum for even `n`; an odd herald is impossible.
pub fn output_wavefunction(p: &SchemeParams) -> Result<ClosedFormWavefunction, SchemeError> {
    if p.is_separable_configuration() {
        if p.n() % 2 == 1 {
            return Err(SchemeError::ImpossibleOutcome { n: p.n() });
        }
        // Unmeasured arm: t = 1 leaves the phi-rotated input there, otherwise
        // (t = 0 or phi = 0) the unrotated one.
        let phi_out = if p.t() == 1.0 { p.phi() } else { 0.0 };
        let w = squeezed_vacuum_exponent(p.r(), phi_out);
        let den = (2.0 * p.r()).cosh() - phi_out.cos() * (2.0 * p.r()).sinh();
        let pref = std::f64::consts::PI.powf(-0.25) * den.powf(-0.25);
        return Ok(ClosedFormWavefunction {
            norm_factor: Complex64::new(pref, 0.0),
            envelope_coeff: -w / 2.0,
            hermite_linear: Complex64::new(0.0, 0.0),
            hermite_offset: Complex64::new(0.0, 0.0),
            n: p.n(),
            hermite_degree: 0,
        });
    }

    let d = derived_coefficients(p);
    let (r, phi, t) = (p.r(), p.phi(), p.t());
    let n = p.n();
    let norm = normalization(p);
    let cot = (phi / 2.0).cos() / (phi / 2.0).sin();
    let one_minus_eiphi = Complex64::new(1.0, 0.0) - Complex64::new(0.0, phi).exp();
    let sinh_r = r.sinh();
    let num = Complex64::new(r.exp(), 0.0) - one_minus_eiphi * t * t * sinh_r;
    let den = Complex64::new((-r).exp(), 0.0) + one_minus_eiphi * t * t * sinh_r;
    let pref = (r.exp() * Complex64::new((2.0 * r).exp(), cot) / d.xi).sqrt();
    Ok(ClosedFormWavefunction {
        norm_factor: pref / norm.sqrt(),
        envelope_coeff: -num / (2.0 * den),
        hermite_linear: -2.0 * r.exp() * d.gamma / d.xi,
        hermite_offset: r.tanh() * (2.0 * (1.0 - t * t) * (phi / 2.0).sin() / d.xi - 1.0),
        n,
        hermite_degree: n,
    })
}

/// Normalization `N(n, r, t, phi)` of the unnormalized closed form.
///
/// The `(2 gamma^2 / (gamma^2+1))^n` prefactor and the terminating 2F1 with
/// argument `(sinh^2 r - gamma^2)/(gamma^4 cosh^2 r)` are combined term by
/// term, so each term carries `gamma^(2n-4k)` with non-negative exponent and
/// the separable limit stays finite.
pub fn normalization(p: &SchemeParams) -> f64 {
    let (r, phi) = (p.r(), p.phi());
    let n = p.n();
    let g = derived_coefficients(p).gamma;
    let g2p1 = g * g + 1.0;
    let cot = (phi / 2.0).cos() / (phi / 2.0).sin();
    let sh2 = r.sinh() * r.sinh();
    let ch2 = r.cosh() * r.cosh();
    let a0 = (1.0 - n as f64) / 2.0;
    let b0 = -(n as f64) / 2.0;
    let mut sum = 0.0;
    let mut poch = 1.0; // (a0)_k (b0)_k / (k!)^2
    for k in 0..=n / 2 {
        let kf = k as f64;
        sum += poch * g.powi(2 * n as i32 - 4 * k as i32) * (sh2 - g * g).powi(k as i32)
            / ch2.powi(k as i32);
        poch *= (a0 + kf) * (b0 + kf) / ((1.0 + kf) * (1.0 + kf));
    }
    let mut nfact = 1.0;
    for k in 1..=n {
        nfact *= k as f64;
    }
    std::f64::consts::PI.sqrt()
        * nfact
        * ((cot * cot + (4.0 * r).exp()) / g2p1).sqrt()
        * (2.0 / g2p1).powi(n as i32)
        * sum
}

/// Photon-number distribution of a squeezed vacuum (any phase): nonzero only
/// for even counts, `P(2m) = (2m)! tanh^{2m} r / (4^m (m!)^2 cosh r)`.
pub fn squeezed_vacuum_photon_probability(r: f64, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    // (2m)! / (4^m (m!)^2) by term ratios
    let mut ratio = 1.0;
    for k in 1..=m {
        ratio *= (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
    }
    ratio * r.tanh().powi(2 * m as i32) / r.cosh()
}

/// Probability of the detector reporting `n` photons.
pub fn herald_probability(p: &SchemeParams) -> f64 {
    if p.is_separable_configuration() {
        // Measured arm is itself a squeezed vacuum (or exact vacuum at r=0).
        if p.r() == 0.0 {
            return if p.n() == 0 { 1.0 } else { 0.0 };
        }
        return squeezed_vacuum_photon_probability(p.r(), p.n());
    }
    let (r, phi) = (p.r(), p.phi());
    let norm = normalization(p);
    let den = (2.0 * r).cosh() - phi.cos() * (2.0 * r).sinh();
    let mut pow2_nfact = 1.0; // 2^n n!
    for k in 1..=p.n() {
        pow2_nfact *= 2.0 * k as f64;
    }
    (phi / 2.0).sin() * norm
        / (pow2_nfact * r.exp() * r.cosh() * (std::f64::consts::PI * den).sqrt())
}
