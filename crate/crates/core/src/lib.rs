//! Heralded non-Gaussian state generation from two squeezed vacua.
//!
//! Two equally squeezed vacuum states with relative phase `phi` interfere on a
//! beam splitter of amplitude transmission `t`; a photon-number-resolving
//! detector measuring `n` photons in one output arm heralds a non-Gaussian
//! state in the other. This crate implements the closed-form wavefunction,
//! normalization, heralding probability and Wigner function of that state,
//! its Wigner negativity, a van Loock-Furusawa entanglement criterion, and
//! fidelities with (squeezed) Schroedinger-cat targets. Everything is
//! cross-checked against an independent truncated-Fock-basis simulation of
//! the whole scheme ([`fock`]).
//!
//! Conventions: unit-free quadratures with vacuum wavefunction
//! `pi^(-1/4) exp(-x^2/2)` (variance 1/2), squeezing in nepers
//! (`r_dB = 20 r / ln 10`), Wigner transform
//! `W(x,p) = (1/pi) ∫ psi(x+y) psi*(x-y) exp(-2iyp) dy`.

pub mod entanglement;
pub mod fock;
pub mod optimize;
pub mod phase_space;
pub mod quad;
pub mod scheme;
pub mod specfun;
pub mod targets;

pub use num_complex::Complex64;

pub use phase_space::{
    wigner_at, wigner_grid, wigner_negativity, wigner_negativity_fixed, GridSpec, WignerGrid,
};
pub use scheme::{
    derived_coefficients, herald_probability, normalization, output_wavefunction,
    squeezed_vacuum_wavefunction, ClosedFormWavefunction, DerivedCoefficients, SchemeParams,
};

/// Squeezing expressed in decibels, `r_dB = 20 r / ln 10`.
pub fn nepers_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

/// Inverse of [`nepers_to_db`].
pub fn db_to_nepers(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}
