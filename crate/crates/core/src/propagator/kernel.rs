use std::cell::RefCell;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::ParticleParams;
use crate::error::{Error, Result};
use crate::numerics::{
    adaptive_gk, bessel_pair, richardson_to_zero, DampingProfile, Extrapolated, QuadratureSpec,
};

/// Causal character of a separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationKind {
    Timelike,
    Lightlike,
    Spacelike,
}

impl SeparationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SeparationKind::Timelike => "timelike",
            SeparationKind::Lightlike => "lightlike",
            SeparationKind::Spacelike => "spacelike",
        }
    }
}

/// The separation `b - a` of two events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSeparation {
    pub dq: [f64; 3],
    pub dt: f64,
    pub c: f64,
}

impl SpacetimeSeparation {
    pub fn new(dq: [f64; 3], dt: f64, c: f64) -> Self {
        SpacetimeSeparation { dq, dt, c }
    }

    /// Separation of event `b = (qb, tb)` from event `a = (qa, ta)`.
    pub fn between(qa: [f64; 3], ta: f64, qb: [f64; 3], tb: f64, c: f64) -> Self {
        Self::new([qb[0] - qa[0], qb[1] - qa[1], qb[2] - qa[2]], tb - ta, c)
    }

    /// A purely temporal separation of proper time `tau`.
    pub fn at_rest(tau: f64, c: f64) -> Self {
        Self::new([0.0; 3], tau, c)
    }

    fn spatial_sq(&self) -> f64 {
        self.dq.iter().map(|x| x * x).sum::<f64>() / (self.c * self.c)
    }

    /// `τ² = Δt² - Δq²/c²`.
    pub fn tau_sq(&self) -> f64 {
        self.dt * self.dt - self.spatial_sq()
    }

    /// Proper time `τ`, for timelike separations only.
    pub fn tau(&self) -> Option<f64> {
        (self.kind() == SeparationKind::Timelike).then(|| self.tau_sq().sqrt())
    }

    pub fn kind(&self) -> SeparationKind {
        let tau_sq = self.tau_sq();
        let scale = self.dt * self.dt + self.spatial_sq();
        if tau_sq.abs() <= 4.0 * f64::EPSILON * scale {
            SeparationKind::Lightlike
        } else if tau_sq > 0.0 {
            SeparationKind::Timelike
        } else {
            SeparationKind::Spacelike
        }
    }

    fn require_timelike(&self) -> Result<f64> {
        if !(self.c > 0.0) || !self.tau_sq().is_finite() {
            return Err(Error::domain(
                "SpacetimeSeparation",
                "separation and c must be finite, c > 0",
            ));
        }
        self.tau().ok_or(Error::UnsupportedSeparation {
            kind: self.kind().as_str(),
            tau_sq: self.tau_sq(),
        })
    }
}

/// Whether the kernel is evaluated at a fixed parameter length or
/// integrated over all of them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaTag {
    Fixed(f64),
    Integrated,
}

/// Normalization carried by a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// No normalization constant applied.
    Raw,
    /// Divided by `N`.
    Applied(f64),
}

/// A complex kernel amplitude and where it was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub amplitude: Complex64,
    pub sigma: SigmaTag,
    /// `τ²` of the separation.
    pub tau_sq: f64,
    pub normalization: Normalization,
}

impl KernelValue {
    fn new(
        amplitude: Complex64,
        sigma: SigmaTag,
        tau_sq: f64,
        normalization: Normalization,
    ) -> Result<Self> {
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(Error::NonFinite("kernel amplitude"));
        }
        Ok(KernelValue {
            amplitude,
            sigma,
            tau_sq,
            normalization,
        })
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "kernel",
            format!("parameter length sigma must be positive, got {sigma}"),
        ))
    }
}

/// `√(m/(2πiħσ))` on the principal branch.
fn slice_prefactor(params: &ParticleParams, sigma: f64) -> Complex64 {
    let modulus = (params.m / (2.0 * PI * params.hbar * sigma)).sqrt();
    Complex64::from_polar(modulus, -PI / 4.0)
}

/// Kernel of one spatial degree of freedom at fixed `σ`:
/// `√(m/(2πiħσ)) exp[(i/ħ)(m/2)(qb - qa)²/σ]`.
pub fn kernel_sigma_slice(
    params: &ParticleParams,
    qa: f64,
    qb: f64,
    sigma: f64,
) -> Result<Complex64> {
    params.validate()?;
    check_sigma(sigma)?;
    Ok(slice_unchecked(params, qa, qb, sigma))
}

fn slice_unchecked(params: &ParticleParams, qa: f64, qb: f64, sigma: f64) -> Complex64 {
    let d = qb - qa;
    let phase = params.m * d * d / (2.0 * params.hbar * sigma);
    slice_prefactor(params, sigma) * Complex64::cis(phase)
}

/// Kernel of the time degree of freedom `q⁰ = ct` at fixed `σ`.
///
/// The metric sign flips the phase and the measure `d(ct)` contributes a
/// factor `c`: `c √(m/(2πiħσ)) exp[-(i/ħ)(m/2) c²(tb - ta)²/σ]`.
pub fn kernel_sigma_time_slice(
    params: &ParticleParams,
    ta: f64,
    tb: f64,
    sigma: f64,
) -> Result<Complex64> {
    params.validate()?;
    check_sigma(sigma)?;
    let d = params.c * (tb - ta);
    let phase = -params.m * d * d / (2.0 * params.hbar * sigma);
    Ok(slice_prefactor(params, sigma) * params.c * Complex64::cis(phase))
}

/// Total parameterized kernel
/// `K_σ = -(m²c)/(4π²ħ²σ²) exp[-(i/ħ)(mc²/2)(τ²/σ + σ)]`.
pub fn kernel_sigma_free(
    params: &ParticleParams,
    sep: &SpacetimeSeparation,
    sigma: f64,
) -> Result<KernelValue> {
    params.validate()?;
    check_sigma(sigma)?;
    let (m, c, hbar) = (params.m, params.c, params.hbar);
    let tau_sq = sep.tau_sq();
    let modulus = m * m * c / (4.0 * PI * PI * hbar * hbar * sigma * sigma);
    let phase = -m * c * c / (2.0 * hbar) * (tau_sq / sigma + sigma);
    KernelValue::new(
        -modulus * Complex64::cis(phase),
        SigmaTag::Fixed(sigma),
        tau_sq,
        Normalization::Raw,
    )
}

/// `e^{-imc²σ/2ħ}`, the phase of the constant `½mc²` in the extended Hamiltonian.
pub fn rest_energy_phase(params: &ParticleParams, sigma: f64) -> Complex64 {
    Complex64::cis(-params.m * params.c * params.c * sigma / (2.0 * params.hbar))
}

/// Closed form `K = (m²c)/(4πħ²N) τ⁻¹ H₁⁽²⁾(mc²τ/ħ)` for a timelike separation.
pub fn kernel_closed_form(
    params: &ParticleParams,
    sep: &SpacetimeSeparation,
    n: f64,
) -> Result<KernelValue> {
    params.validate()?;
    check_norm(n)?;
    let tau = sep.require_timelike()?;
    let amplitude = closed_form_at(params, tau, n)?;
    KernelValue::new(
        amplitude,
        SigmaTag::Integrated,
        sep.tau_sq(),
        Normalization::Applied(n),
    )
}

pub(crate) fn closed_form_at(params: &ParticleParams, tau: f64, n: f64) -> Result<Complex64> {
    let (m, c, hbar) = (params.m, params.c, params.hbar);
    let h1 = bessel_pair(m * c * c * tau / hbar)?.hankel2_1();
    Ok(h1 * (m * m * c / (4.0 * PI * hbar * hbar * n * tau)))
}

fn check_norm(n: f64) -> Result<()> {
    if n.is_finite() && n != 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "kernel",
            "normalization N must be finite and nonzero",
        ))
    }
}

/// Quadrature settings for [`kernel_free`].
///
/// The σ-integral is carried out in `x = σ/τ`, so `sigma_min`/`sigma_max`
/// bound `x`, and `damping` is `ε·τ` for the regularization
/// `z = mc²/ħ - iε`. The matching weight is
/// `DampingProfile::Reciprocal { pivot: 1 }`.
pub fn kernel_quadrature_spec() -> QuadratureSpec {
    let damping = 0.05;
    let levels = 4;
    let x_max = 100.0 / (damping / f64::powi(2.0, levels - 1));
    QuadratureSpec {
        damping,
        profile: DampingProfile::Reciprocal { pivot: 1.0 },
        sigma_min: 1.0 / x_max,
        sigma_max: x_max,
        rel_tol: 1e-10,
        abs_tol: 0.0,
        max_evals: 4_000_000,
        extrapolation_levels: levels as usize,
    }
}

/// Closed-form and σ-quadrature kernel values with their discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelComparison {
    pub tau: f64,
    pub closed_form: KernelValue,
    pub quadrature: KernelValue,
    /// `|K_quad - K| / |K|`.
    pub discrepancy: f64,
    /// Extrapolation error estimate of the quadrature.
    pub quadrature_error: f64,
    pub evals: usize,
}

/// Integrates [`kernel_sigma_free`] over `σ ∈ (0, ∞)` with damping
/// extrapolation and compares against [`kernel_closed_form`].
pub fn kernel_free(
    params: &ParticleParams,
    sep: &SpacetimeSeparation,
    n: f64,
    spec: &QuadratureSpec,
) -> Result<KernelComparison> {
    params.validate()?;
    check_norm(n)?;
    let tau = sep.require_timelike()?;
    let (m, c, hbar) = (params.m, params.c, params.hbar);
    let k_tau = m * c * c * tau / hbar;
    let closed_form = kernel_closed_form(params, sep, n)?;

    let integrand = |x: f64| Complex64::cis(-0.5 * k_tau * (x + 1.0 / x)) / (x * x);
    let ex = crate::numerics::extrapolated_quadrature(integrand, spec)?;
    let scale = -m * m * c / (4.0 * PI * PI * hbar * hbar * n * tau);
    let quadrature = KernelValue::new(
        ex.value * scale,
        SigmaTag::Integrated,
        sep.tau_sq(),
        Normalization::Applied(n),
    )?;

    let discrepancy =
        (quadrature.amplitude - closed_form.amplitude).norm() / closed_form.amplitude.norm();
    Ok(KernelComparison {
        tau,
        closed_form,
        quadrature,
        discrepancy,
        quadrature_error: ex.error * scale.abs(),
        evals: ex.evals,
    })
}

/// [`kernel_free`] at rest-frame separations `τ`, evaluated in parallel.
pub fn kernel_table(
    params: &ParticleParams,
    taus: &[f64],
    n: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<KernelComparison>> {
    taus.par_iter()
        .map(|&tau| {
            kernel_free(
                params,
                &SpacetimeSeparation::at_rest(tau, params.c),
                n,
                spec,
            )
        })
        .collect()
}

/// Writes `tau,re_k,im_k,re_k_quad,im_k_quad,discrepancy` rows.
pub fn write_kernel_csv<W: Write>(rows: &[KernelComparison], mut w: W) -> Result<()> {
    writeln!(w, "tau,re_k,im_k,re_k_quad,im_k_quad,discrepancy")?;
    for r in rows {
        let (k, q) = (r.closed_form.amplitude, r.quadrature.amplitude);
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.tau, k.re, k.im, q.re, q.im, r.discrepancy
        )?;
    }
    Ok(())
}

/// Quadrature settings for [`compose_slices`].
///
/// Each intermediate coordinate is integrated as `x = x_c ± ξℓ` around the
/// stationary point `x_c`, with `ℓ = √(ħ σ_min/m)` for the shortest slice,
/// under the damping weight `exp(-ε ξ²)`. `ξ` runs over
/// `[0, min(sigma_max, √(18/ε))]`; `sigma_min` is not used.
pub fn composition_quadrature_spec() -> QuadratureSpec {
    QuadratureSpec {
        damping: 0.15,
        profile: DampingProfile::Gaussian,
        sigma_min: 1e-9,
        sigma_max: 100.0,
        rel_tol: 1e-8,
        abs_tol: 0.0,
        max_evals: 2_000_000,
        extrapolation_levels: 4,
    }
}

/// Chains one-degree kernels `K_{σ₁}(qa → x₁) K_{σ₂}(x₁ → x₂) ⋯ K_{σₙ}(→ qb)`,
/// integrating every intermediate `xₖ` over the real line by nested damped
/// quadrature, then extrapolates to vanishing damping.
///
/// A single slice returns the slice kernel itself.
pub fn compose_slices(
    params: &ParticleParams,
    qa: f64,
    qb: f64,
    sigmas: &[f64],
    spec: &QuadratureSpec,
) -> Result<Extrapolated> {
    params.validate()?;
    spec.validate()?;
    if spec.profile != DampingProfile::Gaussian {
        return Err(Error::domain(
            "compose_slices",
            "composition uses the gaussian damping profile",
        ));
    }
    if sigmas.is_empty() {
        return Err(Error::domain("compose_slices", "need at least one slice"));
    }
    for &s in sigmas {
        check_sigma(s)?;
    }
    if sigmas.len() == 1 {
        let v = kernel_sigma_slice(params, qa, qb, sigmas[0])?;
        return Ok(Extrapolated {
            value: v,
            error: 0.0,
            levels: vec![],
            evals: 1,
        });
    }
    if spec.extrapolation_levels < 2 {
        return Err(Error::domain(
            "QuadratureSpec",
            "extrapolation needs at least two damping levels",
        ));
    }
    let sigma_min = sigmas.iter().copied().fold(f64::INFINITY, f64::min);
    let ell = (params.hbar * sigma_min / params.m).sqrt();

    let results: Vec<Result<(f64, Complex64, usize)>> = spec
        .damping_levels()
        .into_par_iter()
        .map(|eps| {
            let chain = Chain {
                params,
                qb,
                ell,
                eps,
                xi_max: spec.sigma_max.min((18.0 / eps).sqrt()),
                spec,
                evals: RefCell::new(0),
            };
            let v = chain.integrate(qa, sigmas)?;
            Ok((eps, v, chain.evals.into_inner()))
        })
        .collect();
    let mut levels = Vec::with_capacity(results.len());
    let mut evals = 0;
    for r in results {
        let (eps, v, e) = r?;
        evals += e;
        levels.push((eps, v));
    }
    let value = richardson_to_zero(&levels);
    let coarse = richardson_to_zero(&levels[..levels.len() - 1]);
    Ok(Extrapolated {
        value,
        error: (value - coarse).norm(),
        levels,
        evals,
    })
}

struct Chain<'a> {
    params: &'a ParticleParams,
    qb: f64,
    ell: f64,
    eps: f64,
    xi_max: f64,
    spec: &'a QuadratureSpec,
    evals: RefCell<usize>,
}

impl Chain<'_> {
    /// Amplitude from `x` to `qb` through the slices `sigmas`.
    fn integrate(&self, x: f64, sigmas: &[f64]) -> Result<Complex64> {
        let (first, rest) = sigmas.split_first().expect("non-empty slice list");
        if rest.is_empty() {
            return Ok(slice_unchecked(self.params, x, self.qb, *first));
        }
        let rest_total: f64 = rest.iter().sum();
        let centre = x + (self.qb - x) * first / (first + rest_total);
        let failure = RefCell::new(None);
        let integrand = |xi: f64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in [centre + xi * self.ell, centre - xi * self.ell] {
                let step = self
                    .integrate(y, rest)
                    .map(|k| k * slice_unchecked(self.params, x, y, *first));
                match step {
                    Ok(v) => acc += v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                    }
                }
            }
            acc * (self.ell * (-self.eps * xi * xi).exp())
        };
        let panels = (self.xi_max * self.xi_max / (2.0 * PI)).ceil() as usize + 8;
        let s = self.spec;
        let (value, _, evals) = adaptive_gk(
            &integrand,
            0.0,
            self.xi_max,
            panels,
            s.rel_tol,
            s.abs_tol,
            s.max_evals,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        *self.evals.borrow_mut() += evals;
        Ok(value)
    }
}
