//! Special functions behind every closed form in the crate: generalized
//! two-variable Hermite polynomials, two-index Hermite polynomials, the
//! analytic Gaussian-Hermite integral, and the terminating Gauss
//! hypergeometric 2F1.
//!
//! All sums are evaluated by iterative coefficient recursions so no factorial
//! is ever formed on its own; orders up to n = 60 stay well inside f64 range.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpecFunError {
    /// The Gaussian-Hermite integral only converges for Re(alpha) > 0.
    #[error("divergent Gaussian integral: Re(alpha) = {0} <= 0")]
    DivergentIntegral(f64),
}

/// Generalized two-variable Hermite polynomial
/// `H_n(x, y) = n! sum_{k=0}^{floor(n/2)} x^(n-2k) y^k / ((n-2k)! k!)`.
///
/// Reduces to the physicists' Hermite polynomial via `H_n(2x, -1)`.
pub fn gen_hermite(n: usize, x: Complex64, y: Complex64) -> Complex64 {
    // three-term recurrence H_{m+1} = x H_m + 2 m y H_{m-1}: unlike the
    // explicit alternating sum it loses no digits to cancellation at large n
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for m in 0..n {
        let next = x * cur + 2.0 * m as f64 * y * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Two-index Hermite polynomial
/// `H_{m,n}(x, y, w, z | t) = sum_k n! m! / ((m-k)!(n-k)!k!) t^k H_{m-k}(x,y) H_{n-k}(w,z)`.
pub fn two_index_hermite(
    m: usize,
    n: usize,
    x: Complex64,
    y: Complex64,
    w: Complex64,
    z: Complex64,
    t: Complex64,
) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coef = 1.0_f64; // n! m! / ((m-k)!(n-k)!k!) at k = 0
    let mut tk = Complex64::new(1.0, 0.0);
    for k in 0..=m.min(n) {
        sum += coef * tk * gen_hermite(m - k, x, y) * gen_hermite(n - k, w, z);
        coef *= ((m - k) * (n - k)) as f64 / (k as f64 + 1.0);
        tk *= t;
    }
    sum
}

/// Analytic value of
/// `∫ H_m(d1 x + e1, f1) H_n(d2 x + e2, f2) exp(-alpha x^2 + beta x) dx`
/// over the real line, written with the two-index Hermite polynomial.
/// Principal branches of the complex square root and exponential.
#[allow(clippy::too_many_arguments)]
pub fn gauss_hermite_integral(
    m: usize,
    n: usize,
    d1: Complex64,
    e1: Complex64,
    f1: Complex64,
    d2: Complex64,
    e2: Complex64,
    f2: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Result<Complex64, SpecFunError> {
    if alpha.re <= 0.0 {
        return Err(SpecFunError::DivergentIntegral(alpha.re));
    }
    let pref = (std::f64::consts::PI / alpha).sqrt() * (beta * beta / (4.0 * alpha)).exp();
    let h = two_index_hermite(
        m,
        n,
        e1 + d1 * beta / (2.0 * alpha),
        f1 + d1 * d1 / (4.0 * alpha),
        e2 + d2 * beta / (2.0 * alpha),
        f2 + d2 * d2 / (4.0 * alpha),
        d1 * d2 / (2.0 * alpha),
    );
    Ok(pref * h)
}

/// Terminating Gauss hypergeometric `2F1((1-n)/2, -n/2; 1; z)`.
///
/// One upper parameter is a non-positive integer for every n >= 0, so the
/// series is a polynomial of degree floor(n/2); it is evaluated exactly.
pub fn hyp2f1_terminating(n: usize, z: Complex64) -> Complex64 {
    let a = (1.0 - n as f64) / 2.0;
    let b = -(n as f64) / 2.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=n / 2 {
        sum += term;
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((1.0 + kf) * (1.0 + kf)) * z;
    }
    sum
}
