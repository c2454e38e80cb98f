//! Analytic Wigner function of the heralded state, dense grid evaluation,
//! and Wigner negativity by self-convergent 2D quadrature.
//!
//! The Wigner transform convention is
//! `W(x,p) = (1/pi) ∫ psi(x+y) psi*(x-y) exp(-2iyp) dy`; the y-integral is a
//! Gaussian times a product of two generalized Hermite polynomials and is
//! evaluated with the two-index Hermite closed form. The result is real up
//! to rounding; the imaginary residue is asserted below 1e-10 and dropped.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::scheme::{
    derived_coefficients, normalization, output_wavefunction, SchemeError, SchemeParams,
};
use crate::specfun::two_index_hermite;

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum PhaseSpaceError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("negativity did not converge: last estimates {last} and {previous} (tol {tol})")]
    NoConvergence { last: f64, previous: f64, tol: f64 },
}

/// Precomputed pieces of the closed-form Wigner function of one output state.
#[derive(Debug, Clone, Copy)]
pub struct WignerKernel {
    /// Real Gaussian width of the y-integral, `alpha = Re[env]` with
    /// `env` twice the negated envelope coefficient of the wavefunction.
    alpha_w: f64,
    /// Imaginary part of `env`; enters the linear term `beta`.
    im_env: f64,
    /// Hermite linear coefficient delta of the output wavefunction.
    delta: Complex64,
    /// Hermite offset slot chi.
    chi: Complex64,
    /// Constant prefactor `|pref|^2 / (pi N)`.
    front: f64,
    n: usize,
}

impl WignerKernel {
    pub fn new(p: &SchemeParams) -> Result<Self, SchemeError> {
        let wf = output_wavefunction(p)?;
        if p.is_separable_configuration() {
            // Gaussian state; delta = 0 makes the Hermite factor trivial.
            let env = -2.0 * wf.envelope_coeff;
            return Ok(Self {
                alpha_w: env.re,
                im_env: env.im,
                delta: Complex64::new(0.0, 0.0),
                chi: Complex64::new(0.0, 0.0),
                front: wf.norm_factor.norm_sqr() / PI,
                n: 0,
            });
        }
        let d = derived_coefficients(p);
        let norm = normalization(p);
        let env = -2.0 * wf.envelope_coeff; // (e^r - (1-e^{i phi}) t^2 sinh r)/(e^{-r} + ...)
        let cot = (p.phi() / 2.0).cos() / (p.phi() / 2.0).sin();
        let pref_sq =
            (p.r().exp() * Complex64::new((2.0 * p.r()).exp(), cot) / d.xi).norm();
        Ok(Self {
            alpha_w: env.re,
            im_env: env.im,
            delta: wf.hermite_linear,
            chi: wf.hermite_offset,
            front: pref_sq / (PI * norm),
            n: p.n(),
        })
    }

    /// Wigner function value at phase-space point (x, p).
    pub fn evaluate(&self, x: f64, mom: f64) -> f64 {
        let alpha = self.alpha_w;
        let beta = Complex64::new(0.0, -2.0 * (self.im_env * x + mom));
        let gauss = (PI / alpha).sqrt() * (beta * beta / (4.0 * alpha)).re.exp();
        let d = self.delta;
        let dc = d.conj();
        let h = two_index_hermite(
            self.n,
            self.n,
            d * x + d * beta / (2.0 * alpha),
            self.chi + d * d / (4.0 * alpha),
            dc * x + dc * beta.conj() / (2.0 * alpha),
            self.chi.conj() + dc * dc / (4.0 * alpha),
            Complex64::new(-d.norm_sqr() / (2.0 * alpha), 0.0),
        );
        let w = self.front * (-alpha * x * x).exp() * gauss * h;
        assert!(
            w.im.abs() <= 1e-10 * (1.0 + w.re.abs()),
            "imaginary residue {} in Wigner value",
            w.im
        );
        w.re
    }

    /// Largest standard deviation of the Gaussian envelope of `|W|`.
    ///
    /// The envelope is `exp(-q11 x^2 - 2 q12 x p - q22 p^2)`; the covariance
    /// is half the inverse of the q-matrix.
    pub fn envelope_sigma_max(&self) -> f64 {
        let q11 = self.alpha_w + self.im_env * self.im_env / self.alpha_w;
        let q12 = self.im_env / self.alpha_w;
        let q22 = 1.0 / self.alpha_w;
        let det = q11 * q22 - q12 * q12;
        // eigenvalues of inverse(Q)/2
        let tr_inv = (q11 + q22) / det;
        let det_inv = 1.0 / det;
        let disc = (tr_inv * tr_inv / 4.0 - det_inv).max(0.0).sqrt();
        (0.5 * (tr_inv / 2.0 + disc)).sqrt()
    }

    fn default_halfwidth(&self) -> f64 {
        6.0 * self.envelope_sigma_max() + (2.0 * self.n as f64 + 1.0).sqrt()
    }
}

/// Closed-form Wigner function of the output state at one point.
pub fn wigner_at(p: &SchemeParams, x: f64, mom: f64) -> Result<f64, SchemeError> {
    Ok(WignerKernel::new(p)?.evaluate(x, mom))
}

/// Rectangular grid request for [`wigner_grid`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn square(half: f64, points: usize) -> Self {
        Self {
            x_min: -half,
            x_max: half,
            p_min: -half,
            p_max: half,
            nx: points,
            np: points,
        }
    }
}

/// Dense Wigner evaluation with spacing metadata and the achieved
/// normalization `sum W dx dp`.
#[derive(Debug, Clone, Serialize)]
pub struct WignerGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
    pub dx: f64,
    pub dp: f64,
    /// Row-major: `values[ix * np + ip]`.
    #[serde(skip)]
    pub values: Vec<f64>,
    pub normalization: f64,
    /// Set when the normalization deviates from 1 by more than 1e-4.
    pub warning: Option<String>,
}

impl WignerGrid {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.np + ip]
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        self.x_min + ix as f64 * self.dx
    }

    pub fn p_at(&self, ip: usize) -> f64 {
        self.p_min + ip as f64 * self.dp
    }

    /// CSV serialization: header then one `x,p,W` triple per line, row-major,
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 32);
        out.push_str("x,p,W\n");
        for ix in 0..self.nx {
            for ip in 0..self.np {
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e}\n",
                    self.x_at(ix),
                    self.p_at(ip),
                    self.value(ix, ip)
                ));
            }
        }
        out
    }
}

/// Build a [`WignerGrid`] from a kernel (shared by the analytic and Fock
/// oracle paths so both emit the identical format).
pub(crate) fn grid_from_fn<F: Fn(f64, f64) -> f64 + Sync>(spec: &GridSpec, f: F) -> WignerGrid {
    assert!(spec.nx >= 2 && spec.np >= 2, "grid needs at least 2x2 points");
    let dx = (spec.x_max - spec.x_min) / (spec.nx - 1) as f64;
    let dp = (spec.p_max - spec.p_min) / (spec.np - 1) as f64;
    let values: Vec<f64> = (0..spec.nx)
        .into_par_iter()
        .flat_map_iter(|ix| {
            let x = spec.x_min + ix as f64 * dx;
            (0..spec.np).map(move |ip| (x, spec.p_min + ip as f64 * dp))
        })
        .map(|(x, p)| f(x, p))
        .collect();
    let normalization: f64 = values.iter().sum::<f64>() * dx * dp;
    let warning = if (normalization - 1.0).abs() > 1e-4 {
        Some(format!(
            "grid normalization {normalization:.6} deviates from 1; enlarge bounds or resolution"
        ))
    } else {
        None
    };
    WignerGrid {
        x_min: spec.x_min,
        x_max: spec.x_max,
        p_min: spec.p_min,
        p_max: spec.p_max,
        nx: spec.nx,
        np: spec.np,
        dx,
        dp,
        values,
        normalization,
        warning,
    }
}

pub fn wigner_grid(p: &SchemeParams, spec: &GridSpec) -> Result<WignerGrid, SchemeError> {
    let kernel = WignerKernel::new(p)?;
    Ok(grid_from_fn(spec, |x, mom| kernel.evaluate(x, mom)))
}

/// `∫ |W| dx dp - 1` on an adaptively enlarged and refined grid.
///
/// Successive estimates (domain grown, resolution doubled) must agree to
/// `tol`; after six refinements without agreement the last two estimates are
/// reported as an error.
pub fn wigner_negativity(p: &SchemeParams, tol: f64) -> Result<f64, PhaseSpaceError> {
    assert!(tol > 0.0);
    let kernel = WignerKernel::new(p)?;
    negativity_of_kernel(&|x, mom| kernel.evaluate(x, mom), kernel.default_halfwidth(), tol)
}

/// Single fixed-resolution negativity estimate, for optimization loops where
/// a smooth deterministic objective matters more than certified accuracy.
pub fn wigner_negativity_fixed(p: &SchemeParams, nx: usize) -> Result<f64, SchemeError> {
    let kernel = WignerKernel::new(p)?;
    let half = kernel.default_halfwidth() + 0.5;
    Ok(abs_integral(&|x, mom| kernel.evaluate(x, mom), half, nx) - 1.0)
}

/// Shared negativity driver; `half0` is the initial half-width of the square
/// integration domain.
pub(crate) fn negativity_of_kernel<F: Fn(f64, f64) -> f64 + Sync>(
    f: &F,
    half0: f64,
    tol: f64,
) -> Result<f64, PhaseSpaceError> {
    let mut half = half0;
    let mut nx = 160usize;
    let mut prev = abs_integral(f, half, nx) - 1.0;
    let mut prev2 = f64::NAN;
    for _ in 0..6 {
        half += 0.5;
        nx *= 2;
        let cur = abs_integral(f, half, nx) - 1.0;
        if (cur - prev).abs() <= tol {
            return Ok(cur);
        }
        prev2 = prev;
        prev = cur;
    }
    Err(PhaseSpaceError::NoConvergence { last: prev, previous: prev2, tol })
}

/// `∫∫ |f| dx dp`: trapezoid over x of line integrals that split each p-line
/// at the sign changes of `f`, so the kinks of `|f|` never meet a quadrature
/// panel. The integrand is signed and smooth inside each segment, making the
/// inner Simpson rule high-order.
fn abs_integral<F: Fn(f64, f64) -> f64 + Sync>(f: &F, half: f64, nx: usize) -> f64 {
    let h = 2.0 * half / nx as f64;
    let total: f64 = (0..=nx)
        .into_par_iter()
        .map(|i| {
            let x = -half + i as f64 * h;
            let w = if i == 0 || i == nx { 0.5 } else { 1.0 };
            w * line_abs_integral(&|p| f(x, p), half, nx)
        })
        .sum();
    total * h
}

/// `∫ |g(p)| dp` over `[-half, half]`: bracket the roots of `g` on a uniform
/// sample, bisect each bracket, then Simpson the signed integrand between
/// consecutive roots and sum absolute values.
fn line_abs_integral<G: Fn(f64) -> f64>(g: &G, half: f64, np: usize) -> f64 {
    let h = 2.0 * half / np as f64;
    let samples: Vec<f64> = (0..=np).map(|j| g(-half + j as f64 * h)).collect();
    let mut cuts = vec![-half];
    for j in 0..np {
        let (a, b) = (samples[j], samples[j + 1]);
        if a == 0.0 {
            if j > 0 {
                cuts.push(-half + j as f64 * h);
            }
        } else if a * b < 0.0 {
            let (mut lo, mut hi) = (-half + j as f64 * h, -half + (j + 1) as f64 * h);
            let mut g_lo = a;
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                let g_mid = g(mid);
                if g_lo * g_mid <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    g_lo = g_mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
        }
    }
    cuts.push(half);
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let panels = (((b - a) / h).ceil() as usize * 2).max(8);
        total += crate::quad::simpson(a, b, panels, g).abs();
    }
    total
}
