//! Deterministic quadrature helpers: composite Simpson rules on uniform
//! grids, with self-convergent refinement for the overlap integrals used by
//! the fidelity and negativity routines. No Monte Carlo anywhere.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    /// Refinement stopped improving before reaching the requested tolerance.
    #[error("quadrature did not converge: last estimates {last} and {previous} (tol {tol})")]
    NoConvergence { last: f64, previous: f64, tol: f64 },
}

/// Composite Simpson rule for a real integrand; `n` is rounded up to even.
pub fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Composite Simpson rule for a complex integrand.
pub fn simpson_complex<F: Fn(f64) -> Complex64>(a: f64, b: f64, n: usize, f: F) -> Complex64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Simpson with panel doubling until two successive complex estimates agree
/// to `tol` in modulus. Starts from `n0` panels, gives up after `max_refine`
/// doublings.
pub fn simpson_complex_adaptive<F: Fn(f64) -> Complex64>(
    a: f64,
    b: f64,
    n0: usize,
    tol: f64,
    max_refine: usize,
    f: F,
) -> Result<Complex64, QuadError> {
    let mut n = n0.max(8);
    let mut prev = simpson_complex(a, b, n, &f);
    for _ in 0..max_refine {
        n *= 2;
        let cur = simpson_complex(a, b, n, &f);
        if (cur - prev).norm() <= tol * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(QuadError::NoConvergence {
        last: prev.norm(),
        previous: f64::NAN,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_gaussian() {
        let got = simpson(-8.0, 8.0, 400, |x| (-x * x).exp());
        assert!((got - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn simpson_complex_oscillatory() {
        // ∫ exp(-x^2 + i x) dx = sqrt(pi) exp(-1/4)
        let got = simpson_complex(-8.0, 8.0, 800, |x| Complex64::new(-x * x, x).exp());
        let want = std::f64::consts::PI.sqrt() * (-0.25f64).exp();
        assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12);
    }

    #[test]
    fn adaptive_converges() {
        let got =
            simpson_complex_adaptive(-6.0, 6.0, 16, 1e-12, 12, |x| Complex64::new((-x * x).exp(), 0.0))
                .unwrap();
        assert!((got.re - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }
}
