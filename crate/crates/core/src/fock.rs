//! Independent brute-force verifier: truncated Fock-basis simulation of the
//! whole scheme (squeezed inputs, beam splitter, photon-number projection),
//! plus direct numeric evaluation of the heralding projection integral and a
//! Laguerre-based Wigner synthesis. Nothing here shares code with the
//! closed-form path, so agreement between the two is meaningful.

use num_complex::Complex64;
use thiserror::Error;

use crate::phase_space::{grid_from_fn, negativity_of_kernel, GridSpec, PhaseSpaceError, WignerGrid};
use crate::quad;
use crate::scheme::{derived_coefficients, SchemeParams};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum FockError {
    #[error(
        "truncation loss {loss:.3e} at cutoff {cutoff} exceeds 1e-8; use cutoff >= {required}"
    )]
    TruncationLoss { loss: f64, cutoff: usize, required: usize },
    #[error("impossible detector outcome n = {n} (probability below 1e-14)")]
    ImpossibleOutcome { n: usize },
    #[error("projection integral requires Re(a) > 0, got {re_a}")]
    DivergentIntegrand { re_a: f64 },
}

/// Truncated single-mode state in the photon-number basis.
#[derive(Debug, Clone)]
pub struct FockVector {
    pub amplitudes: Vec<Complex64>,
    pub cutoff: usize,
    /// `1 - sum |c_k|^2` at preparation time; zero after renormalization.
    pub truncation_loss: f64,
}

impl FockVector {
    pub fn vacuum(cutoff: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { amplitudes, cutoff, truncation_loss: 0.0 }
    }

    pub fn fock(n: usize, cutoff: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self { amplitudes, cutoff, truncation_loss: 0.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Position wavefunction by Hermite-function synthesis.
    pub fn position_wavefunction(&self, x: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut prev = 0.0;
        let mut cur = PI.powf(-0.25) * (-x * x / 2.0).exp();
        for (m, c) in self.amplitudes.iter().enumerate() {
            total += c * cur;
            let next = (2.0 / (m as f64 + 1.0)).sqrt() * x * cur
                - (m as f64 / (m as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        total
    }

    /// Largest index carrying non-negligible amplitude.
    fn significant_cutoff(&self) -> usize {
        self.amplitudes
            .iter()
            .rposition(|c| c.norm() > 1e-9)
            .unwrap_or(0)
    }
}

/// Cutoff keeping the squeezed-vacuum truncation loss below 1e-8 for
/// r <= 1.2, rounded up to even.
pub fn required_cutoff(r: f64) -> usize {
    let c = (10.0 * (2.0 * r).exp()).ceil() as usize;
    let c = c.max(60);
    c + c % 2
}

/// Squeezed vacuum in the Fock basis,
/// `c_{2m} = (-e^{i phi} tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r)`.
///
/// The reconstructed position wavefunction agrees with the closed-form
/// squeezed-vacuum wavefunction up to a global phase.
pub fn squeezed_vacuum_fock(r: f64, phi: f64, cutoff: usize) -> Result<FockVector, FockError> {
    assert!(cutoff >= 2, "cutoff below 2");
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    let base = -Complex64::from_polar(r.tanh(), phi);
    let mut coef = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    amplitudes[0] = coef;
    for m in 1..=cutoff / 2 {
        // ratio of successive even amplitudes: base * sqrt((2m)(2m-1)) / (2m)
        let mf = m as f64;
        coef *= base * (2.0 * mf * (2.0 * mf - 1.0)).sqrt() / (2.0 * mf);
        amplitudes[2 * m] = coef;
    }
    let loss = 1.0 - amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if loss > 1e-8 {
        return Err(FockError::TruncationLoss {
            loss,
            cutoff,
            required: required_cutoff(r),
        });
    }
    Ok(FockVector { amplitudes, cutoff, truncation_loss: loss.max(0.0) })
}

/// Two-mode state after the beam splitter, amplitudes indexed
/// `[n1 * dim + n2]` with `dim = 2 cutoff + 1`.
#[derive(Debug, Clone)]
pub struct TwoModeFock {
    pub amplitudes: Vec<Complex64>,
    pub dim: usize,
}

impl TwoModeFock {
    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex64 {
        self.amplitudes[n1 * self.dim + n2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Joint position wavefunction on one point, for convention checks.
    pub fn position_wavefunction(&self, x1: f64, x2: f64) -> Complex64 {
        let u1: Vec<f64> = hermite_functions(self.dim - 1, x1);
        let u2: Vec<f64> = hermite_functions(self.dim - 1, x2);
        let mut total = Complex64::new(0.0, 0.0);
        for n1 in 0..self.dim {
            for n2 in 0..self.dim {
                let c = self.amplitude(n1, n2);
                if c.norm_sqr() > 0.0 {
                    total += c * u1[n1] * u2[n2];
                }
            }
        }
        total
    }
}

fn hermite_functions(nmax: usize, x: f64) -> Vec<f64> {
    let mut u = Vec::with_capacity(nmax + 1);
    u.push(PI.powf(-0.25) * (-x * x / 2.0).exp());
    for m in 0..nmax {
        let next = (2.0 / (m as f64 + 1.0)).sqrt() * x * u[m]
            - (m as f64 / (m as f64 + 1.0)).sqrt() * if m == 0 { 0.0 } else { u[m - 1] };
        u.push(next);
    }
    u
}

fn log_factorials(up_to: usize) -> Vec<f64> {
    let mut lf = vec![0.0; up_to + 1];
    for i in 1..=up_to {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    lf
}

/// Beam splitter on `|j,k>`: mode operators transform so that the position
/// arguments map as `(t x1 + rho x2, -rho x1 + t x2)`; in creation-operator
/// form `a1+ -> t a1+ + rho a2+`, `a2+ -> -rho a1+ + t a2+` (sign convention
/// fixed by the wavefunction-level test below).
pub fn beam_splitter_apply(v1: &FockVector, v2: &FockVector, t: f64) -> TwoModeFock {
    assert_eq!(v1.cutoff, v2.cutoff, "inputs need a common cutoff");
    let cut = v1.cutoff;
    let rho = (1.0 - t * t).sqrt();
    let dim = 2 * cut + 1;
    let lf = log_factorials(dim);
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    // binomial tables in log space are avoided: C(j,p) = exp(lf[j]-lf[p]-lf[j-p])
    for j in 0..=cut {
        if v1.amplitudes[j].norm_sqr() == 0.0 {
            continue;
        }
        for k in 0..=cut {
            let amp_in = v1.amplitudes[j] * v2.amplitudes[k];
            if amp_in.norm_sqr() == 0.0 {
                continue;
            }
            for p in 0..=j {
                for q in 0..=k {
                    let m1 = p + q;
                    let m2 = j + k - m1;
                    let log_mag = lf[j] - lf[p] - lf[j - p] + lf[k] - lf[q] - lf[k - q]
                        + 0.5 * (lf[m1] + lf[m2] - lf[j] - lf[k]);
                    let coef = log_mag.exp()
                        * t.powi((p + k - q) as i32)
                        * rho.powi((j - p) as i32)
                        * (-rho).powi(q as i32);
                    out[m1 * dim + m2] += amp_in * coef;
                }
            }
        }
    }
    TwoModeFock { amplitudes: out, dim }
}

/// Photon-number projection on mode 1: conditional state of mode 2 and the
/// outcome probability.
pub fn project_pnrd(state: &TwoModeFock, n: usize) -> Result<(FockVector, f64), FockError> {
    assert!(n < state.dim, "outcome beyond cutoff");
    let row = &state.amplitudes[n * state.dim..(n + 1) * state.dim];
    let prob: f64 = row.iter().map(|c| c.norm_sqr()).sum();
    if prob < 1e-14 {
        return Err(FockError::ImpossibleOutcome { n });
    }
    let scale = 1.0 / prob.sqrt();
    Ok((
        FockVector {
            amplitudes: row.iter().map(|c| c * scale).collect(),
            cutoff: state.dim - 1,
            truncation_loss: 0.0,
        },
        prob,
    ))
}

/// Full scheme in the Fock basis: conditional state of the surviving mode
/// and the heralding probability.
pub fn heralded_fock_state(
    p: &SchemeParams,
    cutoff: usize,
) -> Result<(FockVector, f64), FockError> {
    let v1 = squeezed_vacuum_fock(p.r(), 0.0, cutoff)?;
    let v2 = squeezed_vacuum_fock(p.r(), p.phi(), cutoff)?;
    let joint = beam_splitter_apply(&v1, &v2, p.t());
    project_pnrd(&joint, p.n())
}

/// Unnormalized heralded wavefunction samples from the projection integral
/// `e^{-c x2^2} ∫ e^{-a x1^2 + b x1 x2} H_n(x1) dx1` evaluated by quadrature.
pub fn direct_projection_integral(
    p: &SchemeParams,
    x_grid: &[f64],
) -> Result<Vec<Complex64>, FockError> {
    let d = derived_coefficients(p);
    if d.a.re <= 0.0 {
        return Err(FockError::DivergentIntegrand { re_a: d.a.re });
    }
    let n = p.n();
    Ok(x_grid
        .iter()
        .map(|&x2| {
            let center = (d.b * x2).re / (2.0 * d.a.re);
            let half = 10.0 / d.a.re.sqrt() + (2.0 * n as f64 + 1.0).sqrt();
            let integral = quad::simpson_complex(center - half, center + half, 4000, |x1| {
                (-d.a * x1 * x1 + d.b * x1 * x2).exp() * hermite_poly(n, x1)
            });
            (-d.c * x2 * x2).exp() * integral
        })
        .collect())
}

/// Physicists' Hermite polynomial by the plain recurrence.
fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        let next = 2.0 * x * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Wigner function of a truncated Fock-basis state at one point, from the
/// Laguerre closed form of the cross terms
/// `W_{|n><m|} = (1/pi)(-1)^m sqrt(m!/n!) u^{n-m} e^{-(x^2+p^2)}
/// L_m^{n-m}(2(x^2+p^2))` with `u = sqrt(2)(x - ip)`, n >= m.
pub fn fock_wigner_at(state: &FockVector, x: f64, mom: f64) -> f64 {
    let top = state.significant_cutoff();
    let z = 2.0 * (x * x + mom * mom);
    let lf = log_factorials(top + 1);
    let u = 2f64.sqrt() * Complex64::new(x, -mom);
    let (u_mag, u_arg) = (u.norm(), u.arg());
    let gauss = (-(x * x + mom * mom)).exp();
    // laguerre[k] holds L_m^k(z) for the current m, built by upward recurrence
    // in m from L_0^k = 1, L_1^k = 1 + k - z.
    let mut lag_prev: Vec<f64> = Vec::new();
    let mut lag: Vec<f64> = vec![1.0; top + 1];
    let mut total = 0.0;
    for m in 0..=top {
        if m > 0 {
            let next: Vec<f64> = (0..=top)
                .map(|k| {
                    let (mf, kf) = ((m - 1) as f64, k as f64);
                    if m == 1 {
                        1.0 + kf - z
                    } else {
                        ((2.0 * mf + 1.0 + kf - z) * lag[k] - (mf + kf) * lag_prev[k]) / (mf + 1.0)
                    }
                })
                .collect();
            lag_prev = std::mem::take(&mut lag);
            lag = next;
        }
        let cm = state.amplitudes[m];
        if cm.norm() < 1e-16 {
            continue;
        }
        let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
        for n in m..=top {
            let cn = state.amplitudes[n];
            if cn.norm() < 1e-16 {
                continue;
            }
            let k = n - m;
            let mag = (0.5 * (lf[m] - lf[n]) + k as f64 * u_mag.ln().max(f64::MIN)).exp();
            let mag = if u_mag == 0.0 && k > 0 { 0.0 } else { mag };
            let base = parity / PI
                * gauss
                * lag[k]
                * mag
                * Complex64::from_polar(1.0, u_arg * k as f64);
            let contrib = cn * cm.conj() * base;
            total += if k == 0 { contrib.re } else { 2.0 * contrib.re };
        }
    }
    total
}

/// Dense Wigner grid of a Fock-basis state, same conventions and format as
/// the analytic grid.
pub fn fock_wigner(state: &FockVector, spec: &GridSpec) -> WignerGrid {
    grid_from_fn(spec, |x, mom| fock_wigner_at(state, x, mom))
}

/// Wigner negativity of a Fock-basis state by the shared adaptive driver.
pub fn fock_negativity(state: &FockVector, tol: f64) -> Result<f64, PhaseSpaceError> {
    let top = state.significant_cutoff();
    let half0 = (2.0 * top as f64 + 1.0).sqrt() + 5.0;
    negativity_of_kernel(&|x, mom| fock_wigner_at(state, x, mom), half0, tol)
}
