//! Damped quadrature over `(0, ∞)` for oscillatory complex integrands.
//!
//! The integrand is multiplied by a damping weight `w_ε(σ)` (see
//! [`DampingProfile`]), the variable is changed to `u = ln σ`, and the
//! truncated window `[σ_min, σ_max]` is integrated with globally adaptive
//! Gauss-Kronrod (10, 21) panels. [`extrapolated_quadrature`] repeats this
//! for a geometric ladder of damping values and extrapolates the results
//! polynomially to `ε → 0`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the damping weight applied to the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DampingProfile {
    /// `exp(-ε σ)`.
    Exponential,
    /// `exp(-ε σ²)`.
    Gaussian,
    /// `exp(-ε (σ + pivot/σ) / 2)`: the weight produced by giving a phase
    /// `-(z/2)(pivot/σ + σ)` a negative imaginary part `-ε` in `z`.
    Reciprocal { pivot: f64 },
}

impl DampingProfile {
    pub fn weight(&self, eps: f64, sigma: f64) -> f64 {
        match *self {
            DampingProfile::Exponential => (-eps * sigma).exp(),
            DampingProfile::Gaussian => (-eps * sigma * sigma).exp(),
            DampingProfile::Reciprocal { pivot } => (-0.5 * eps * (sigma + pivot / sigma)).exp(),
        }
    }
}

/// Parameters of the damped quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Damping `ε_reg` of the first (largest) level.
    pub damping: f64,
    pub profile: DampingProfile,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rel_tol: f64,
    #[serde(default)]
    pub abs_tol: f64,
    pub max_evals: usize,
    /// Number of damping values `ε, ε/2, ε/4, ...` used for extrapolation.
    pub extrapolation_levels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            damping: 0.05,
            profile: DampingProfile::Exponential,
            sigma_min: 1e-12,
            sigma_max: 1e4,
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_evals: 4_000_000,
            extrapolation_levels: 4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_min > 0.0 && self.sigma_min < self.sigma_max && self.sigma_max.is_finite())
        {
            return Err(Error::domain(
                "QuadratureSpec",
                format!(
                    "need 0 < sigma_min < sigma_max, got [{}, {}]",
                    self.sigma_min, self.sigma_max
                ),
            ));
        }
        if !(self.damping > 0.0 && self.damping.is_finite()) {
            return Err(Error::domain("QuadratureSpec", "damping must be positive"));
        }
        if !(self.rel_tol > 0.0) || self.abs_tol < 0.0 {
            return Err(Error::domain(
                "QuadratureSpec",
                "rel_tol must be positive and abs_tol non-negative",
            ));
        }
        if let DampingProfile::Reciprocal { pivot } = self.profile {
            if !(pivot >= 0.0 && pivot.is_finite()) {
                return Err(Error::domain(
                    "QuadratureSpec",
                    "reciprocal pivot must be non-negative",
                ));
            }
        }
        if self.max_evals == 0 {
            return Err(Error::domain(
                "QuadratureSpec",
                "max_evals must be positive",
            ));
        }
        Ok(())
    }

    /// The damping ladder `ε_reg / 2^k`.
    pub fn damping_levels(&self) -> Vec<f64> {
        (0..self.extrapolation_levels.max(1))
            .map(|k| self.damping / f64::powi(2.0, k as i32))
            .collect()
    }
}

/// Result of a single damped quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
    /// Estimated magnitude left outside `[σ_min, σ_max]`.
    pub tail: f64,
}

/// Damping-extrapolated quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolated {
    pub value: Complex64,
    /// Difference between the extrapolants using all levels and all but the
    /// smallest damping.
    pub error: f64,
    pub levels: Vec<(f64, Complex64)>,
    pub evals: usize,
}

// Gauss-Kronrod 10/21 abscissae and weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_846_175,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// One Gauss-Kronrod panel: (Kronrod estimate, |Kronrod - Gauss|).
pub(crate) fn gk21<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    if !(kron.re.is_finite() && kron.im.is_finite()) {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    Ok((kron * half, ((kron - gauss) * half).norm()))
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of a complex function on
/// `[a, b]`, starting from `initial_panels` equal panels.
pub fn adaptive_gk<F>(
    f: &F,
    a: f64,
    b: f64,
    initial_panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
) -> Result<(Complex64, f64, usize)>
where
    F: Fn(f64) -> Complex64,
{
    let n0 = initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(4 * n0);
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut evals = 0;
    for i in 0..n0 {
        let pa = a + width * i as f64;
        let pb = if i + 1 == n0 { b } else { pa + width };
        let (value, error) = gk21(f, pa, pb)?;
        evals += 21;
        total += value;
        total_err += error;
        heap.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
        });
    }
    loop {
        let tol = abs_tol.max(rel_tol * total.norm());
        if total_err <= tol {
            break;
        }
        if evals + 42 > max_evals {
            return Err(Error::NoConvergence {
                max_evals,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further; accept the panel as is
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let (v1, e1) = gk21(f, worst.a, mid)?;
        let (v2, e2) = gk21(f, mid, worst.b)?;
        evals += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, p| acc + p.value);
    let error = panels.iter().map(|p| p.error).sum();
    Ok((value, error, evals))
}

/// Integrates `integrand(σ) · w_ε(σ)` over `(0, ∞)` with `ε = spec.damping`.
pub fn damped_semiinfinite_quadrature<F>(
    integrand: F,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    damped_at(&integrand, spec, spec.damping)
}

fn damped_at<F>(integrand: &F, spec: &QuadratureSpec, eps: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    let profile = spec.profile;
    let g = |u: f64| {
        let sigma = u.exp();
        let w = profile.weight(eps, sigma);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        integrand(sigma) * (w * sigma)
    };
    let (ua, ub) = (spec.sigma_min.ln(), spec.sigma_max.ln());
    let panels = ((ub - ua) * 4.0).ceil() as usize;
    let (value, error, evals) = adaptive_gk(
        &g,
        ua,
        ub,
        panels,
        spec.rel_tol,
        spec.abs_tol,
        spec.max_evals,
    )?;

    let tail = g(ua).norm() + g(ub).norm();
    if !tail.is_finite() {
        return Err(Error::NonFinite("quadrature tail estimate"));
    }
    let tol = spec.abs_tol.max(spec.rel_tol * value.norm());
    if tail > tol.max(1e3 * f64::EPSILON * value.norm()) {
        return Err(Error::TruncatedMass {
            tail,
            value: value.norm(),
        });
    }
    Ok(QuadratureResult {
        value,
        error,
        evals: evals + 2,
        tail,
    })
}

/// Runs the damped quadrature on the ladder [`QuadratureSpec::damping_levels`]
/// and extrapolates to vanishing damping.
pub fn extrapolated_quadrature<F>(integrand: F, spec: &QuadratureSpec) -> Result<Extrapolated>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if spec.extrapolation_levels < 2 {
        return Err(Error::domain(
            "QuadratureSpec",
            "extrapolation needs at least two damping levels",
        ));
    }
    let mut levels = Vec::with_capacity(spec.extrapolation_levels);
    let mut evals = 0;
    for eps in spec.damping_levels() {
        let r = damped_at(&integrand, spec, eps)?;
        evals += r.evals;
        levels.push((eps, r.value));
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

/// Evaluates at zero the interpolating polynomial through `(ε_k, v_k)`
/// (Neville's scheme).
pub fn richardson_to_zero(points: &[(f64, Complex64)]) -> Complex64 {
    assert!(!points.is_empty(), "need at least one point");
    let mut p: Vec<Complex64> = points.iter().map(|&(_, v)| v).collect();
    let n = points.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (points[i].0, points[i + m].0);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}
