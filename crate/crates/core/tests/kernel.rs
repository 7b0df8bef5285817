#[path = "common/oracle.rs"]
mod oracle;

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use proptime::dynamics::ParticleParams;
use proptime::minkowski::{boost_coordinates, BoostParams};
use proptime::numerics::QuadratureSpec;
use proptime::propagator::*;
use proptime::Error;

const UNITS: ParticleParams = ParticleParams {
    m: 1.0,
    zeta: 1.0,
    c: 1.0,
    hbar: 1.0,
};

/// `(m²c)/(4πħ²N) τ⁻¹ (J1 - iY1)(mc²τ/ħ)` from the test-side Bessel oracle.
fn hankel_kernel(p: &ParticleParams, tau: f64, n: f64) -> Complex64 {
    let x = p.m * p.c * p.c * tau / p.hbar;
    let pref = p.m * p.m * p.c / (4.0 * PI * p.hbar * p.hbar * n * tau);
    Complex64::new(oracle::j1(x), -oracle::y1(x)) * pref
}

fn gaussian_slice(p: &ParticleParams, d: f64, sigma: f64) -> Complex64 {
    let pref = (Complex64::new(p.m, 0.0) / Complex64::new(0.0, 2.0 * PI * p.hbar * sigma)).sqrt();
    pref * Complex64::cis(p.m * d * d / (2.0 * p.hbar * sigma))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn closed_form_matches_hankel_oracle() {
    let params = ParticleParams {
        m: 2.0,
        c: 1.5,
        hbar: 0.7,
        zeta: 1.0,
    };
    for tau in [0.05, 0.3, 1.0, 4.0, 25.0] {
        let k =
            kernel_closed_form(&params, &SpacetimeSeparation::at_rest(tau, params.c), 1.3).unwrap();
        let o = hankel_kernel(&params, tau, 1.3);
        assert!(rel(k.amplitude, o) < 1e-10, "tau = {tau}");
        assert_eq!(k.normalization, Normalization::Applied(1.3));
    }
    let unit = kernel_closed_form(&UNITS, &SpacetimeSeparation::at_rest(1.0, 1.0), 1.0).unwrap();
    let h = Complex64::new(oracle::j1(1.0), -oracle::y1(1.0)) / (4.0 * PI);
    assert!(rel(unit.amplitude, h) < 1e-12);
}

#[test]
fn quadrature_matches_closed_form() {
    let start = Instant::now();
    let spec = kernel_quadrature_spec();
    let rows = kernel_table(&UNITS, &[0.5, 1.0, 2.0, 5.0, 10.0], 1.0, &spec).unwrap();
    for r in &rows {
        assert!(r.discrepancy < 1e-5, "tau = {}: {:e}", r.tau, r.discrepancy);
        let o = hankel_kernel(&UNITS, r.tau, 1.0);
        assert!(rel(r.quadrature.amplitude, o) < 1e-5);
        assert_eq!(r.quadrature.sigma, SigmaTag::Integrated);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn quadrature_in_other_units() {
    let params = ParticleParams {
        m: 0.8,
        c: 2.0,
        hbar: 1.5,
        zeta: 1.0,
    };
    let sep = SpacetimeSeparation::new([0.4, -0.2, 0.1], 1.2, params.c);
    let r = kernel_free(&params, &sep, 1.0, &kernel_quadrature_spec()).unwrap();
    let o = hankel_kernel(&params, sep.tau().unwrap(), 1.0);
    assert!(
        rel(r.quadrature.amplitude, o) < 1e-5,
        "{:e}",
        rel(r.quadrature.amplitude, o)
    );
}

#[test]
fn closed_form_is_lorentz_invariant() {
    let params = ParticleParams { c: 2.0, ..UNITS };
    let (qa, ta) = ([0.1, 0.2, -0.3], 0.5);
    let (qb, tb) = ([0.9, -0.4, 0.2], 2.9);
    let base = kernel_closed_form(
        &params,
        &SpacetimeSeparation::between(qa, ta, qb, tb, params.c),
        1.0,
    )
    .unwrap();
    for beta in [[0.6, 0.0, 0.0], [0.3, -0.5, 0.2], [0.0, 0.0, -0.89]] {
        let b = BoostParams::new(beta).unwrap();
        let (qa2, ta2) = boost_coordinates(qa, ta, params.c, &b);
        let (qb2, tb2) = boost_coordinates(qb, tb, params.c, &b);
        let k = kernel_closed_form(
            &params,
            &SpacetimeSeparation::between(qa2, ta2, qb2, tb2, params.c),
            1.0,
        )
        .unwrap();
        assert!(rel(k.amplitude, base.amplitude) < 1e-12, "{beta:?}");
    }
}

#[test]
fn spacelike_and_lightlike_are_rejected() {
    let spacelike = SpacetimeSeparation::new([2.0, 0.0, 0.0], 1.0, 1.0);
    assert_eq!(spacelike.kind(), SeparationKind::Spacelike);
    assert!(matches!(
        kernel_closed_form(&UNITS, &spacelike, 1.0),
        Err(Error::UnsupportedSeparation { .. })
    ));
    let light = SpacetimeSeparation::new([1.0, 0.0, 0.0], 1.0, 1.0);
    assert_eq!(light.kind(), SeparationKind::Lightlike);
    assert!(kernel_free(&UNITS, &light, 1.0, &kernel_quadrature_spec()).is_err());
    assert!(kernel_table(&UNITS, &[1.0, 0.0], 1.0, &kernel_quadrature_spec()).is_err());
}

#[test]
fn sigma_kernel_factorizes_into_slices() {
    let params = ParticleParams {
        m: 1.4,
        c: 1.2,
        hbar: 0.9,
        zeta: 1.0,
    };
    let sep = SpacetimeSeparation::new([0.3, -0.1, 0.5], 2.0, params.c);
    for sigma in [0.2, 1.0, 3.5] {
        let mut product = kernel_sigma_time_slice(&params, 0.0, sep.dt, sigma).unwrap();
        for d in sep.dq {
            product *= gaussian_slice(&params, d, sigma);
        }
        product *= Complex64::cis(-params.m * params.c * params.c * sigma / (2.0 * params.hbar));
        let k = kernel_sigma_free(&params, &sep, sigma).unwrap();
        assert!(rel(k.amplitude, product) < 1e-12);
        assert_eq!(k.sigma, SigmaTag::Fixed(sigma));
    }
}

#[test]
fn slice_matches_gaussian() {
    for (d, sigma) in [(0.0, 1.0), (0.7, 0.3), (-2.0, 5.0)] {
        let k = kernel_sigma_slice(&UNITS, 1.0, 1.0 + d, sigma).unwrap();
        assert!(rel(k, gaussian_slice(&UNITS, d, sigma)) < 1e-14);
    }
    assert!(kernel_sigma_slice(&UNITS, 0.0, 1.0, 0.0).is_err());
}

#[test]
fn two_slice_semigroup() {
    let (s1, s2) = (0.8, 1.3);
    let (qa, qb) = (0.2, 1.1);
    let r = compose_slices(&UNITS, qa, qb, &[s1, s2], &composition_quadrature_spec()).unwrap();
    let exact = gaussian_slice(&UNITS, qb - qa, s1 + s2);
    assert!(rel(r.value, exact) < 1e-4, "{:e}", rel(r.value, exact));
}

#[test]
fn three_slice_lattice() {
    let spec = QuadratureSpec {
        damping: 0.2,
        rel_tol: 1e-6,
        ..composition_quadrature_spec()
    };
    let sigmas = [0.5, 0.7, 0.6];
    let r = compose_slices(&UNITS, -0.3, 0.4, &sigmas, &spec).unwrap();
    let exact = gaussian_slice(&UNITS, 0.7, sigmas.iter().sum());
    assert!(rel(r.value, exact) < 1e-4, "{:e}", rel(r.value, exact));
}

#[test]
fn csv_rows_round_trip() {
    let rows = kernel_table(&UNITS, &[1.0, 2.0], 1.0, &kernel_quadrature_spec()).unwrap();
    let mut buf = Vec::new();
    write_kernel_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("tau,re_k,im_k,re_k_quad,im_k_quad,discrepancy")
    );
    for (line, row) in lines.zip(&rows) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(v[0], row.tau);
        assert_eq!(v[1], row.closed_form.amplitude.re);
        assert_eq!(v[2], row.closed_form.amplitude.im);
        assert_eq!(v[5], row.discrepancy);
    }
}
