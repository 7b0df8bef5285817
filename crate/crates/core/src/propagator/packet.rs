use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::ParticleParams;
use crate::error::{Error, Result};
use crate::grid::{GridLayout, GridMeta, WaveGrid};
use crate::numerics::{adaptive_gk, bessel_pair, QuadratureSpec};

/// A target event `(t, r)` of a spherically symmetric propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetPoint {
    pub t: f64,
    pub r: f64,
}

/// Propagated value and its time derivative at one target event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatedSample {
    pub value: Complex64,
    pub dt: Complex64,
}

// 4-point Gauss-Legendre rule on [-1, 1].
const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

/// `2π ∫₋₁¹ K(τ(μ)) dμ` over the relative angle of two shells at radii
/// `ra`, `rb`, and its derivative with respect to the target time.
///
/// With `τ² = Δt² - (ra² + rb² - 2 ra rb μ)/c²` and `K ∝ τ⁻¹ H₁⁽²⁾(κτ)`,
/// `dμ = (c²/ra rb) τ dτ` turns the integrand into `H₁⁽²⁾(κτ)`, whose
/// antiderivative is `-H₀⁽²⁾(κτ)/κ`. Narrow ranges fall back to a
/// 4-point Gauss-Legendre rule in `μ`.
fn shell_kernel(
    params: &ParticleParams,
    dt: f64,
    ra: f64,
    rb: f64,
    n: f64,
) -> Result<(Complex64, Complex64)> {
    let (m, c, hbar) = (params.m, params.c, params.hbar);
    let kappa = m * c * c / hbar;
    let pref = m * m * c / (4.0 * PI * hbar * hbar * n);
    let tau_min_sq = dt * dt - (ra + rb).powi(2) / (c * c);
    if !(tau_min_sq > 0.0) {
        let kind = if tau_min_sq == 0.0 {
            "lightlike"
        } else {
            "spacelike"
        };
        return Err(Error::UnsupportedSeparation {
            kind,
            tau_sq: tau_min_sq,
        });
    }
    let tau_max_sq = dt * dt - (ra - rb).powi(2) / (c * c);
    let (tau_min, tau_max) = (tau_min_sq.sqrt(), tau_max_sq.sqrt());

    if kappa * (tau_max - tau_min) > 0.1 {
        let b = 2.0 * ra * rb / (c * c);
        let lo = bessel_pair(kappa * tau_min)?;
        let hi = bessel_pair(kappa * tau_max)?;
        let value = (lo.hankel2_0() - hi.hankel2_0()) * (2.0 * pref / (b * kappa));
        let dt_value =
            (hi.hankel2_1() / tau_max - lo.hankel2_1() / tau_min) * (2.0 * pref * dt / b);
        return Ok((value * (2.0 * PI), dt_value * (2.0 * PI)));
    }
    let (mut value, mut dt_value) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (mu, w) in GL4 {
        let tau = (dt * dt - (ra * ra + rb * rb - 2.0 * ra * rb * mu) / (c * c)).sqrt();
        let bp = bessel_pair(kappa * tau)?;
        let (h0, h1) = (bp.hankel2_0(), bp.hankel2_1());
        value += h1 * (pref * w / tau);
        // d/dτ [τ⁻¹ H₁(κτ)] = κ H₀/τ - 2 H₁/τ²
        dt_value += (h0 * (kappa / tau) - h1 * (2.0 / (tau * tau))) * (pref * w * dt / tau);
    }
    Ok((value * (2.0 * PI), dt_value * (2.0 * PI)))
}

fn check_source(source: &WaveGrid, n: f64) -> Result<()> {
    if source.layout() != GridLayout::Radial {
        return Err(Error::domain(
            "propagate_wavepacket",
            "sources must be spherically symmetric (radial grids)",
        ));
    }
    if !(n.is_finite() && n != 0.0) {
        return Err(Error::domain(
            "propagate_wavepacket",
            "normalization N must be finite and nonzero",
        ));
    }
    Ok(())
}

/// Propagates a spherically symmetric source with the free kernel,
/// `ψ(b) = ∫ K(b, a) ψ(a) d³q_a dt_a`, returning values and `∂_t` at every
/// target.
///
/// Each source sample stands for a cell: radial weight `4π`-reduced
/// `h_q r²`, temporal weight `h_t`, or `1` (per unit source duration) when
/// the grid holds a single time slice. Cell-centred radii make this the
/// midpoint rule.
pub fn propagate_wavepacket_jet(
    source: &WaveGrid,
    targets: &[TargetPoint],
    params: &ParticleParams,
    n: f64,
) -> Result<Vec<PropagatedSample>> {
    params.validate()?;
    check_source(source, n)?;
    let (nt, nq) = source.shape();
    let meta = source.meta();
    let w_t = if nt == 1 { 1.0 } else { meta.h_t };
    targets
        .par_iter()
        .map(|b| {
            let mut acc = PropagatedSample {
                value: Complex64::new(0.0, 0.0),
                dt: Complex64::new(0.0, 0.0),
            };
            for it in 0..nt {
                for iq in 0..nq {
                    let psi = source.get(it, iq);
                    if psi == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let ra = source.q(iq);
                    let (k, dk) = shell_kernel(params, b.t - source.t(it), ra, b.r, n)?;
                    let w = psi * (w_t * meta.h_q * ra * ra);
                    acc.value += k * w;
                    acc.dt += dk * w;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Values of [`propagate_wavepacket_jet`].
pub fn propagate_wavepacket(
    source: &WaveGrid,
    targets: &[TargetPoint],
    params: &ParticleParams,
    n: f64,
) -> Result<Vec<Complex64>> {
    Ok(propagate_wavepacket_jet(source, targets, params, n)?
        .into_iter()
        .map(|s| s.value)
        .collect())
}

/// Gaussian test packet for [`calibrate_norm`].
///
/// The source is the `t = 0` slice `amplitude · exp(-r²/2w²)` of the
/// positive-frequency solution with momentum profile `exp(-k²w²/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub width: f64,
    pub amplitude: f64,
    /// Source radius in widths.
    pub extent: f64,
    pub source_step: f64,
    pub target_step: f64,
    /// Times of the constant-`t` slices on which the norm is compared.
    pub target_times: Vec<f64>,
    /// Distance kept between the target slice and the light cone of the
    /// source edge.
    pub margin: f64,
}

impl PacketSpec {
    /// A packet of width `w` in natural units compared at `t = 20w, 22.5w, 25w`.
    pub fn gaussian(width: f64) -> Self {
        PacketSpec {
            width,
            amplitude: 1.0,
            extent: 5.0,
            source_step: 0.25,
            target_step: 0.5,
            target_times: vec![20.0 * width, 22.5 * width, 25.0 * width],
            margin: 5.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            self.width,
            self.extent,
            self.source_step,
            self.target_step,
            self.margin,
        ];
        if !positive.iter().all(|x| *x > 0.0 && x.is_finite()) || !self.amplitude.is_finite() {
            return Err(Error::domain(
                "PacketSpec",
                "width, extent, steps and margin must be positive and finite",
            ));
        }
        if self.target_times.is_empty() {
            return Err(Error::domain("PacketSpec", "need at least one target time"));
        }
        Ok(())
    }
}

/// Fitted normalization constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormCalibration {
    pub n: f64,
    /// Relative RMS deviation of the propagated norms from the source norm.
    pub residual: f64,
    /// Klein-Gordon norm of the source slice.
    pub source_norm: f64,
    /// `(t, norm)` of the propagation with `N = 1`.
    pub raw_norms: Vec<(f64, f64)>,
}

/// Fits `N` so that the Klein-Gordon current norm
/// `∫ (iħ/2mc²)(ψ*∂_tψ - ψ∂_tψ*) d³q` of the propagated packet on the
/// constant-`t` target slices equals that of the source.
pub fn calibrate_norm(
    packet: &PacketSpec,
    params: &ParticleParams,
    spec: &QuadratureSpec,
) -> Result<NormCalibration> {
    params.validate()?;
    packet.validate()?;
    let (m, c, hbar) = (params.m, params.c, params.hbar);
    let kappa = m * c / hbar;
    let w = packet.width;
    let h = packet.source_step;
    let n_src = (packet.extent * w / h).ceil() as usize;
    let meta = GridMeta {
        layout: GridLayout::Radial,
        nt: 1,
        nq: n_src,
        h_t: 1.0,
        h_q: h,
        t0: 0.0,
        q0: 0.5 * h,
    };
    let source = WaveGrid::from_fn(meta, |_, r| {
        Complex64::new(packet.amplitude * (-r * r / (2.0 * w * w)).exp(), 0.0)
    })?;

    // (ωψ)(0, r) from the Fourier-Bessel representation of the source.
    let k_max = 12.0 / w;
    let norm = w.powi(3) * (2.0 / PI).sqrt() * packet.amplitude;
    let mut source_norm = 0.0;
    for iq in 0..n_src {
        let r = source.q(iq);
        let f = |k: f64| {
            let omega = c * (k * k + kappa * kappa).sqrt();
            let j0 = if k * r < 1e-8 {
                1.0
            } else {
                (k * r).sin() / (k * r)
            };
            Complex64::new(omega * (-0.5 * k * k * w * w).exp() * j0 * k * k, 0.0)
        };
        let (omega_psi, _, _) = adaptive_gk(
            &f,
            0.0,
            k_max,
            16,
            spec.rel_tol,
            spec.abs_tol,
            spec.max_evals,
        )?;
        let rho = hbar / (m * c * c) * source.get(0, iq).re * omega_psi.re * norm;
        source_norm += 4.0 * PI * r * r * h * rho;
    }
    if !(source_norm > 0.0 && source_norm.is_finite()) {
        return Err(Error::IllConditioned(format!(
            "source norm {source_norm} is not positive"
        )));
    }

    let edge = n_src as f64 * h;
    let mut raw_norms = Vec::with_capacity(packet.target_times.len());
    for &t in &packet.target_times {
        let r_max = c * t - edge - packet.margin;
        if !(r_max > packet.target_step) {
            return Err(Error::domain(
                "calibrate_norm",
                format!("target time {t} is too early to clear the source"),
            ));
        }
        let n_tgt = (r_max / packet.target_step).floor() as usize;
        let targets: Vec<TargetPoint> = (0..n_tgt)
            .map(|j| TargetPoint {
                t,
                r: (j as f64 + 0.5) * packet.target_step,
            })
            .collect();
        let jets = propagate_wavepacket_jet(&source, &targets, params, 1.0)?;
        let q: f64 = targets
            .iter()
            .zip(&jets)
            .map(|(b, s)| {
                -hbar / (m * c * c)
                    * (s.value.conj() * s.dt).im
                    * 4.0
                    * PI
                    * b.r
                    * b.r
                    * packet.target_step
            })
            .sum();
        raw_norms.push((t, q));
    }

    let sum: f64 = raw_norms.iter().map(|(_, q)| q).sum();
    let sum_sq: f64 = raw_norms.iter().map(|(_, q)| q * q).sum();
    let inv_n_sq = source_norm * sum / sum_sq;
    if !(inv_n_sq > 0.0 && inv_n_sq.is_finite()) {
        return Err(Error::IllConditioned(format!(
            "propagated norms {raw_norms:?} do not fix a real N"
        )));
    }
    let residual = (raw_norms
        .iter()
        .map(|(_, q)| (q * inv_n_sq / source_norm - 1.0).powi(2))
        .sum::<f64>()
        / raw_norms.len() as f64)
        .sqrt();
    Ok(NormCalibration {
        n: inv_n_sq.sqrt().recip(),
        residual,
        source_norm,
        raw_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::kernel::closed_form_at;

    const NATURAL: ParticleParams = ParticleParams {
        m: 1.0,
        zeta: 1.0,
        c: 1.0,
        hbar: 1.0,
    };

    fn shell_by_quadrature(dt: f64, ra: f64, rb: f64) -> Complex64 {
        let f = |mu: f64| {
            let tau = (dt * dt - (ra * ra + rb * rb - 2.0 * ra * rb * mu)).sqrt();
            closed_form_at(&NATURAL, tau, 1.0).unwrap()
        };
        adaptive_gk(&f, -1.0, 1.0, 64, 1e-12, 0.0, 1_000_000)
            .unwrap()
            .0
            * (2.0 * PI)
    }

    #[test]
    fn angular_integral_matches_quadrature() {
        for (dt, ra, rb) in [
            (10.0, 2.0, 3.0),
            (40.0, 10.0, 20.0),
            (5.0, 1e-3, 2.0),
            (3.0, 0.5, 0.0),
        ] {
            let (k, _) = shell_kernel(&NATURAL, dt, ra, rb, 1.0).unwrap();
            let q = shell_by_quadrature(dt, ra, rb);
            assert!(
                (k - q).norm() < 1e-9 * q.norm(),
                "{dt} {ra} {rb}: {k} vs {q}"
            );
        }
    }

    #[test]
    fn time_derivative_matches_differences() {
        for (dt, ra, rb) in [(10.0, 2.0, 3.0), (5.0, 1e-3, 2.0)] {
            let (_, dk) = shell_kernel(&NATURAL, dt, ra, rb, 1.0).unwrap();
            let h = 1e-5;
            let fd = (shell_kernel(&NATURAL, dt + h, ra, rb, 1.0).unwrap().0
                - shell_kernel(&NATURAL, dt - h, ra, rb, 1.0).unwrap().0)
                / (2.0 * h);
            assert!((dk - fd).norm() < 1e-6 * dk.norm(), "{dk} vs {fd}");
        }
    }

    #[test]
    fn spacelike_pairs_are_rejected() {
        let meta = GridMeta {
            layout: GridLayout::Radial,
            nt: 1,
            nq: 4,
            h_t: 1.0,
            h_q: 1.0,
            t0: 0.0,
            q0: 0.5,
        };
        let src = WaveGrid::from_fn(meta, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let err = propagate_wavepacket(&src, &[TargetPoint { t: 5.0, r: 2.0 }], &NATURAL, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::UnsupportedSeparation { .. }));
    }

    #[test]
    fn delta_source_is_proportional_to_kernel() {
        let ra = 1e-3;
        let meta = GridMeta {
            layout: GridLayout::Radial,
            nt: 1,
            nq: 1,
            h_t: 1.0,
            h_q: 1.0,
            t0: 0.0,
            q0: ra,
        };
        let src = WaveGrid::from_fn(meta, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let targets = [
            TargetPoint { t: 4.0, r: 1.0 },
            TargetPoint { t: 7.0, r: 3.0 },
        ];
        let out = propagate_wavepacket(&src, &targets, &NATURAL, 1.0).unwrap();
        for (b, v) in targets.iter().zip(out) {
            let k = closed_form_at(&NATURAL, (b.t * b.t - b.r * b.r).sqrt(), 1.0).unwrap();
            let ratio = v / k;
            assert!(
                (ratio - 4.0 * PI * ra * ra).norm() < 1e-5 * 4.0 * PI * ra * ra,
                "{ratio}"
            );
        }
    }

    #[test]
    fn gaussian_packet_calibration() {
        let spec = QuadratureSpec {
            rel_tol: 1e-12,
            ..QuadratureSpec::default()
        };
        let cal = calibrate_norm(&PacketSpec::gaussian(6.0), &NATURAL, &spec).unwrap();
        assert!(cal.residual < 1e-6, "{cal:?}");
        assert!(cal.n > 0.9 && cal.n < 1.0, "{cal:?}");
    }
}
