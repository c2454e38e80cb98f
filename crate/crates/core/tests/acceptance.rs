//! End-to-end acceptance checks. Each test prints a single `criterion N:
//! pass` line on success; tolerances are pinned in the assertions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use nongauss::entanglement::entanglement_degree;
use nongauss::fock::{
    fock_negativity, heralded_fock_state, required_cutoff, FockVector,
};
use nongauss::optimize::{
    best_probability_cat, best_probability_scat, optimal_t_cat, optimal_t_scat,
};
use nongauss::quad;
use nongauss::specfun::gen_hermite;
use nongauss::targets::{
    fidelity_cat_closed, fidelity_numeric, fidelity_scat_closed, TargetState,
};
use nongauss::{
    herald_probability, nepers_to_db, output_wavefunction, wigner_negativity,
    wigner_negativity_fixed, Complex64, SchemeParams,
};

fn params(r: f64, phi: f64, t: f64, n: usize) -> SchemeParams {
    SchemeParams::new(r, phi, t, n).unwrap()
}

/// Optimized cat fidelity is ~0.88, flat in r above threshold.
#[test]
fn criterion_1_optimized_cat_fidelity() {
    let rs = [0.86, 1.0, 1.2946, 1.4];
    let fids: Vec<f64> =
        rs.iter().map(|&r| fidelity_cat_closed(r, optimal_t_cat(r).unwrap(), PI)).collect();
    for (&r, &f) in rs.iter().zip(&fids) {
        assert!((f - 0.88).abs() <= 0.005, "r={r}: F_cat={f}");
    }
    let spread = fids.iter().cloned().fold(f64::MIN, f64::max)
        - fids.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-3, "spread={spread}");
    println!("criterion 1 (optimized cat fidelity 0.88 +/- 0.005, spread < 1e-3): pass");
}

/// Best single-photon cat heralding probability and where it sits.
#[test]
fn criterion_2_cat_probability_optimum() {
    let (r_star, p_star) = best_probability_cat();
    let expected_r = (8.0 / (3.0 * 73f64.sqrt() - 9.0).sqrt()).acosh();
    assert!((p_star - 0.18).abs() <= 0.005, "P={p_star}");
    assert!((r_star - expected_r).abs() <= 0.01, "r={r_star} vs {expected_r}");
    assert!((nepers_to_db(r_star) - 11.24).abs() <= 0.02, "dB={}", nepers_to_db(r_star));
    println!("criterion 2 (cat probability 0.18 at r = {expected_r:.4} = 11.24 dB): pass");
}

/// Squeezed-cat fidelity plateau and probability optimum, cross-checked
/// against the numeric overlap at the reported optimum.
#[test]
fn criterion_3_squeezed_cat_optimum() {
    for r in [0.6, 1.032, 1.3] {
        let t = optimal_t_scat(r).unwrap();
        let f = fidelity_scat_closed(r, t, PI).unwrap();
        assert!((f - 0.98).abs() <= 0.005, "r={r}: F_scat={f}");
    }
    let (r_star, p_star) = best_probability_scat();
    assert!((p_star - 0.22).abs() <= 0.005, "P={p_star}");
    assert!((r_star - 1.032).abs() <= 0.01, "r={r_star}");
    let t = optimal_t_scat(r_star).unwrap();
    let numeric = fidelity_numeric(
        &params(r_star, PI, t, 1),
        &TargetState::odd_squeezed_cat(0.5, 1.0),
    )
    .unwrap();
    assert!(
        (numeric - fidelity_scat_closed(r_star, t, PI).unwrap()).abs() < 1e-6,
        "closed form vs numeric overlap at the optimum"
    );
    println!("criterion 3 (squeezed-cat fidelity 0.98, max probability 0.22 at r = 1.032): pass");
}

/// The n=1 negativity is the parameter-independent single-photon value
/// 2/sqrt(e) - 1 wherever the herald is possible.
#[test]
fn criterion_4_single_photon_negativity_plateau() {
    let start = Instant::now();
    let sets = [
        // separable by the criterion (degree <= 1)
        (0.3, 0.4, 0.30),
        (0.5, PI, 0.08),
        (0.4, 1.0, 0.95),
        (0.9, 0.15, 0.50),
        (0.35, 2.0, 0.15),
        // entangled (degree > 1)
        (0.5, PI, FRAC_1_SQRT_2),
        (0.9, 2.5, 0.60),
        (1.2, PI, 0.25),
        (0.7, 1.8, 0.80),
        (1.0, 3.0, 0.45),
    ];
    let mut seen_separable = false;
    let mut seen_entangled = false;
    for &(r, phi, t) in &sets {
        let entangled = entanglement_degree(r, phi, t).entangled;
        seen_separable |= !entangled;
        seen_entangled |= entangled;
        let neg = wigner_negativity(&params(r, phi, t, 1), 1e-3).unwrap();
        assert!((neg - 0.426).abs() <= 0.002, "(r,phi,t)=({r},{phi},{t}): {neg}");
    }
    assert!(seen_separable && seen_entangled, "sets must span both regions");
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "took {elapsed:.1} s");
    println!("criterion 4 (n=1 negativity 0.426 +/- 0.002 over 10 parameter sets): pass");
}

/// At (phi=pi, t=1/sqrt2, r=0.9210) the herald is an almost pure Fock state.
#[test]
fn criterion_5_fock_point_reduction() {
    let tol = 5e-4;
    for n in [1usize, 2, 3] {
        let p = params(0.9210, PI, FRAC_1_SQRT_2, n);
        let fid = fidelity_numeric(&p, &TargetState::Fock { n }).unwrap();
        assert!(fid >= 1.0 - 1e-8, "n={n}: F={fid}");
        let neg = wigner_negativity(&p, tol).unwrap();
        let oracle = fock_negativity(&FockVector::fock(n, 40), tol).unwrap();
        assert!((neg - oracle).abs() <= 2.0 * tol, "n={n}: {neg} vs {oracle}");
    }
    println!("criterion 5 (Fock-point fidelity >= 1-1e-8, negativity matches oracle): pass");
}

/// Closed forms agree with the truncated-Fock oracle across a parameter grid.
#[test]
fn criterion_6_oracle_equivalence_sweep() {
    let start = Instant::now();
    for i in 0..5 {
        let r = 0.3 + 0.9 * i as f64 / 4.0;
        let cutoff = required_cutoff(r);
        for j in 0..5 {
            let phi = (j + 1) as f64 * PI / 5.0;
            for k in 0..5 {
                let t = (k + 1) as f64 / 6.0;
                for n in 0..=4usize {
                    let p = params(r, phi, t, n);
                    let (cond, prob) = heralded_fock_state(&p, cutoff).unwrap();
                    let analytic = herald_probability(&p);
                    assert!(
                        (prob - analytic).abs() <= 1e-7,
                        "P mismatch at (r,phi,t,n)=({r},{phi},{t},{n})"
                    );
                    let wf = output_wavefunction(&p).unwrap();
                    let half = wf.support_halfwidth();
                    let overlap = quad::simpson_complex(-half, half, 2000, |x| {
                        wf.evaluate(x).conj() * cond.position_wavefunction(x)
                    });
                    assert!(
                        overlap.norm_sqr() >= 1.0 - 1e-6,
                        "fidelity at (r,phi,t,n)=({r},{phi},{t},{n}): {}",
                        overlap.norm_sqr()
                    );
                }
                let total: f64 =
                    (0..=90).map(|n| herald_probability(&params(r, phi, t, n))).sum();
                assert!((total - 1.0).abs() <= 1e-6, "sum P at (r,phi,t)=({r},{phi},{t})");
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "took {elapsed:.1} s");
    println!("criterion 6 (5x5x5 oracle sweep, n <= 4): pass");
}

/// Deterministic spot checks of every invariant in the property suite; the
/// randomized versions live in the `properties` test target.
#[test]
fn criterion_7_property_suite() {
    // parity (-1)^n of the heralded wavefunction
    for n in 0..=4usize {
        let wf = output_wavefunction(&params(0.7, 2.2, 0.6, n)).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for x in [0.35, 1.1, 2.4] {
            let diff = (wf.evaluate(-x) - sign * wf.evaluate(x)).norm();
            assert!(diff < 1e-12, "parity n={n}");
        }
    }
    // wavefunction normalization (1e-8) and Wigner normalization / purity (1e-6)
    for &(r, phi, t, n) in &[(0.5, PI, FRAC_1_SQRT_2, 2usize), (1.0, 1.3, 0.35, 3)] {
        let p = params(r, phi, t, n);
        let wf = output_wavefunction(&p).unwrap();
        let half = wf.support_halfwidth();
        let norm = quad::simpson(-half, half, 4000, |x| wf.evaluate(x).norm_sqr());
        assert!((norm - 1.0).abs() < 1e-8, "wavefunction norm");
        let kernel = nongauss::phase_space::WignerKernel::new(&p).unwrap();
        let kernel_half = 6.0 * kernel.envelope_sigma_max() + (2.0 * n as f64 + 1.0).sqrt();
        let m = 400usize;
        let h = 2.0 * kernel_half / m as f64;
        let mut total = 0.0;
        let mut purity = 0.0;
        for ix in 0..=m {
            let x = -kernel_half + ix as f64 * h;
            let wx = if ix == 0 || ix == m { 0.5 } else { 1.0 };
            for ip in 0..=m {
                let mom = -kernel_half + ip as f64 * h;
                let wp = if ip == 0 || ip == m { 0.5 } else { 1.0 };
                let w = nongauss::wigner_at(&p, x, mom).unwrap();
                total += wx * wp * w;
                purity += wx * wp * w * w;
            }
        }
        total *= h * h;
        purity *= h * h;
        assert!((total - 1.0).abs() < 1e-6, "Wigner norm {total}");
        assert!((purity - 0.5 / PI).abs() < 1e-6, "purity {purity}");
    }
    // closed-form fidelities vs numeric overlaps (1e-6)
    for &(r, t, phi) in &[(0.9, 0.55, PI), (1.1, 0.7, 2.6)] {
        let p = params(r, phi, t, 1);
        let cat = fidelity_numeric(&p, &TargetState::odd_cat(2.0)).unwrap();
        assert!((cat - fidelity_cat_closed(r, t, phi)).abs() < 1e-6, "cat fidelity");
        let scat = fidelity_numeric(&p, &TargetState::odd_squeezed_cat(0.5, 1.0)).unwrap();
        assert!((scat - fidelity_scat_closed(r, t, phi).unwrap()).abs() < 1e-6, "scat fidelity");
    }
    // entanglement boundary residuals (1e-10)
    for row in nongauss::entanglement::separability_boundary(0.6, 33) {
        for t in [row.t_low, row.t_high].into_iter().flatten() {
            let residual = (entanglement_degree(0.6, row.phi, t).degree - 1.0).abs();
            assert!(residual < 1e-10, "boundary residual {residual}");
        }
    }
    // specfun recurrence and reduction identities (1e-12 relative)
    for n in [3usize, 10, 29] {
        let x = Complex64::new(-3.3, 0.0);
        let classical = {
            let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
            for m in 0..n {
                let next = 2.0 * x * cur - 2.0 * m as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        };
        let reduced = gen_hermite(n, 2.0 * x, Complex64::new(-1.0, 0.0));
        assert!((reduced - classical).norm() <= 1e-12 * classical.norm(), "reduction n={n}");
        let y = Complex64::new(0.4, -0.2);
        let lhs = gen_hermite(n + 1, x, y);
        let rhs = x * gen_hermite(n, x, y) + 2.0 * n as f64 * y * gen_hermite(n - 1, x, y);
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "recurrence n={n}");
    }
    println!("criterion 7 (property spot checks, zero skips): pass");
}

/// Shape of the n=2 negativity surface and coincidence of the zero-negativity
/// region with the separability criterion.
#[test]
fn criterion_8_figure_reproduction() {
    // zero at the transmission edges, maximal at (phi, t) = (pi, 1/sqrt2)
    let r = 0.5;
    for t in [0.0, 1.0] {
        let neg = wigner_negativity(&params(r, PI, t, 2), 1e-4).unwrap();
        assert!(neg.abs() < 1e-6, "edge t={t}: {neg}");
    }
    let peak = wigner_negativity_fixed(&params(r, PI, FRAC_1_SQRT_2, 2), 220).unwrap();
    let mut mismatches = Vec::new();
    for j in 0..20 {
        let phi = (j + 1) as f64 * PI / 20.0;
        for k in 0..20 {
            let t = (k + 1) as f64 / 21.0;
            let neg = wigner_negativity_fixed(&params(r, phi, t, 2), 220).unwrap();
            assert!(neg <= peak + 1e-6, "({phi},{t}) exceeds the (pi, 1/sqrt2) peak");
            let separable = !entanglement_degree(r, phi, t).entangled;
            if separable != (neg < 1e-3) {
                mismatches.push((phi, t, neg));
            }
        }
    }
    assert!(mismatches.is_empty(), "mask mismatches: {mismatches:?}");
    println!("criterion 8 (n=2 surface shape, separability mask coincides): pass");
}
