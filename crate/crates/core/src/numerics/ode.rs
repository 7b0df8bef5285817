//! Explicit embedded Runge-Kutta integration (Dormand-Prince 5(4)) with a
//! PI step-size controller.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budgets for [`integrate_ode`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest permitted step. Non-positive means unbounded.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeSpec {
    fn default() -> Self {
        OdeSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.0,
            max_steps: 1_000_000,
        }
    }
}

impl OdeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("OdeSpec", "tolerances must be positive"));
        }
        if !self.max_step.is_finite() || self.max_steps == 0 {
            return Err(Error::domain(
                "OdeSpec",
                "max_step must be finite and max_steps non-zero",
            ));
        }
        Ok(())
    }
}

/// Step statistics of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Accepted samples of an integration, including the right-hand side at
/// each sample (useful for Hermite interpolation).
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub s: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub dy: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl OdeSolution {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.y
            .last()
            .expect("solution always holds the initial sample")
    }
}

// Dormand-Prince coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// error coefficients: b - b*
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
// PI controller exponents (Hairer & Wanner, order 5)
const ALPHA: f64 = 0.7 / 5.0;
const BETA: f64 = 0.4 / 5.0;

/// Integrates `dy/ds = rhs(s, y)` over `span`.
///
/// `rhs` writes the derivative into its output slice and may fail, which
/// aborts the integration. Samples are recorded at every accepted step.
pub fn integrate_ode<F>(
    mut rhs: F,
    y0: &[f64],
    span: [f64; 2],
    spec: &OdeSpec,
) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    spec.validate()?;
    let [s0, s1] = span;
    if !(s0.is_finite() && s1.is_finite()) || s1 < s0 {
        return Err(Error::domain(
            "integrate_ode",
            format!("span [{s0}, {s1}] must be finite and ordered"),
        ));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    let n = y0.len();
    let mut stats = StepStats::default();
    let mut eval = |s: f64, y: &[f64], out: &mut [f64], stats: &mut StepStats| -> Result<()> {
        stats.rhs_evals += 1;
        rhs(s, y, out)?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("ode right-hand side"));
        }
        Ok(())
    };

    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    eval(s0, &y, &mut k1, &mut stats)?;
    let mut sol = OdeSolution {
        s: vec![s0],
        y: vec![y.clone()],
        dy: vec![k1.clone()],
        stats,
    };
    if s1 == s0 {
        sol.stats = stats;
        return Ok(sol);
    }

    let max_step = if spec.max_step > 0.0 {
        spec.max_step
    } else {
        s1 - s0
    };
    let mut h = initial_step(&y, &k1, spec).min(max_step).min(s1 - s0);
    let mut s = s0;
    let mut err_prev: f64 = 1e-4;

    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    while s < s1 {
        if stats.accepted + stats.rejected >= spec.max_steps {
            return Err(Error::MaxSteps {
                max_steps: spec.max_steps,
                at: s,
            });
        }
        let last = s + h >= s1 || (s1 - (s + h)) < 1e-12 * h;
        if last {
            h = s1 - s;
        }
        if h <= f64::EPSILON * s.abs().max(1.0) {
            return Err(Error::StepUnderflow { at: s });
        }

        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        eval(s + C2 * h, &tmp, &mut k2, &mut stats)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        eval(s + C3 * h, &tmp, &mut k3, &mut stats)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        eval(s + C4 * h, &tmp, &mut k4, &mut stats)?;
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        eval(s + C5 * h, &tmp, &mut k5, &mut stats)?;
        for i in 0..n {
            tmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let s_new = if last { s1 } else { s + h };
        eval(s_new, &tmp, &mut k6, &mut stats)?;
        for i in 0..n {
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        eval(s_new, &y_new, &mut k7, &mut stats)?;

        let mut err_sq = 0.0;
        for i in 0..n {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = spec.abs_tol + spec.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-ALPHA) * err_prev.powf(BETA)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            err_prev = err.max(1e-4);
            s = s_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            stats.accepted += 1;
            sol.s.push(s);
            sol.y.push(y.clone());
            sol.dy.push(k1.clone());
            h = (h * factor).min(max_step);
        } else {
            stats.rejected += 1;
            let factor = (SAFETY * err.powf(-ALPHA)).clamp(MIN_FACTOR, 1.0);
            h *= factor;
        }
    }
    sol.stats = stats;
    Ok(sol)
}

fn initial_step(y: &[f64], dy: &[f64], spec: &OdeSpec) -> f64 {
    let n = y.len().max(1) as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, fi) in y.iter().zip(dy) {
        let scale = spec.abs_tol + spec.rel_tol * yi.abs();
        d0 += (yi / scale).powi(2);
        d1 += (fi / scale).powi(2);
    }
    let d0 = (d0 / n).sqrt();
    let d1 = (d1 / n).sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.max(1e-12)
}

/// Cubic Hermite interpolation between two samples with derivatives.
pub fn hermite(s0: f64, y0: f64, d0: f64, s1: f64, y1: f64, d1: f64, s: f64) -> f64 {
    let h = s1 - s0;
    let u = (s - s0) / h;
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}
