//! Integration of the extended canonical equations in `s` and of the
//! conventional equations in `t`.
//!
//! Extended states are packed as `[t, e, q1, q2, q3, p1, p2, p3]`:
//!
//! ```text
//! dt/ds  = (e - ζφ)/(mc²)
//! de/ds  = -(ζ/mc)(p - ζA/c)·∂A/∂t + (ζ/mc²)(e - ζφ) ∂φ/∂t
//! dq/ds  = (p - ζA/c)/m
//! dp/ds  = (ζ/mc)(p - ζA/c)·∂A/∂q - (ζ/mc²)(e - ζφ) ∂φ/∂q
//! ```

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{
    h1_from_potentials, kinetic_energy, kinetic_momentum, EmHamiltonian, Hamiltonian,
};
use super::state::{dot3, ExtendedPhasePoint, ExtendedVelocity, ParticleParams};
use crate::error::{Error, Result};
use crate::fields::FieldConfig;
use crate::numerics::ode::{hermite, integrate_ode, OdeSpec, StepStats};

/// Normalized mass-shell residual accepted for an initial point.
pub const ON_SHELL_TOL: f64 = 1e-8;

/// Constraint diagnostics at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// `(dt/ds)² - (1/c²)(dq/ds)² - 1`.
    pub residual_v: f64,
    /// `[(e - ζφ)² - c²(p - ζA/c)² - m²c⁴] / (m²c⁴)`.
    pub residual_e: f64,
    /// Value `e₁` of the extended Hamiltonian.
    pub e1: f64,
}

/// Which extended Hamiltonian generated a [`TrajectoryRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowKind {
    /// The quadratic `H₁` of a charged particle.
    Extended,
    /// `H₁ = H - e`. Constraint columns then hold `dt/ds - 1`,
    /// `(e - H)/(mc²)` and `H - e`.
    Trivial,
}

/// Samples of an extended trajectory together with `d/ds` of each packed
/// state and per-sample constraint diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub kind: FlowKind,
    pub params: ParticleParams,
    pub field: Option<FieldConfig>,
    pub spec: OdeSpec,
    pub stats: StepStats,
    pub samples: Vec<ExtendedPhasePoint>,
    pub rates: Vec<[f64; 8]>,
    pub constraints: Vec<ConstraintReport>,
}

/// A sample of a trajectory parameterized by time.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeSample {
    pub t: f64,
    pub e: f64,
    pub q: [f64; 3],
    pub p: [f64; 3],
}

impl TimeSample {
    fn pack(&self) -> [f64; 7] {
        let (q, p) = (self.q, self.p);
        [self.e, q[0], q[1], q[2], p[0], p[1], p[2]]
    }

    fn unpack(t: f64, y: &[f64]) -> Self {
        TimeSample {
            t,
            e: y[0],
            q: [y[1], y[2], y[3]],
            p: [y[4], y[5], y[6]],
        }
    }
}

/// Samples in `t` with `d/dt` of `(e, q, p)` at each sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeTrajectory {
    pub samples: Vec<TimeSample>,
    pub rates: Vec<[f64; 7]>,
    pub stats: StepStats,
}

impl TimeTrajectory {
    /// Cubic Hermite interpolation at time `t`.
    pub fn at(&self, t: f64) -> Result<TimeSample> {
        let ts: Vec<f64> = self.samples.iter().map(|s| s.t).collect();
        let i = bracket(&ts, t)?;
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let (ya, yb) = (a.pack(), b.pack());
        let y: Vec<f64> = (0..7)
            .map(|k| {
                hermite(
                    a.t,
                    ya[k],
                    self.rates[i][k],
                    b.t,
                    yb[k],
                    self.rates[i + 1][k],
                    t,
                )
            })
            .collect();
        Ok(TimeSample::unpack(t, &y))
    }
}

fn bracket(xs: &[f64], x: f64) -> Result<usize> {
    let n = xs.len();
    if n < 2 || !(x >= xs[0] && x <= xs[n - 1]) {
        return Err(Error::domain(
            "interpolation",
            format!("{x} lies outside the sampled range"),
        ));
    }
    let i = xs.partition_point(|&v| v <= x);
    Ok(i.saturating_sub(1).min(n - 2))
}

/// An on-shell point at `s = 0` for a particle at `q0` with velocity `v0`:
/// `p = γmv + ζA/c`, `e = γmc² + ζφ`.
pub fn on_shell_from_velocity(
    params: &ParticleParams,
    field: &FieldConfig,
    q0: [f64; 3],
    v0: [f64; 3],
    t0: f64,
) -> Result<ExtendedPhasePoint> {
    params.validate()?;
    let (m, c, zeta) = (params.m, params.c, params.zeta);
    let vel = ExtendedVelocity::from_velocity(v0, c)?;
    let pot = field.eval(q0, t0, c)?;
    let p = [0, 1, 2].map(|i| m * vel.dq_ds[i] + zeta / c * pot.a[i]);
    Ok(ExtendedPhasePoint {
        s: 0.0,
        t: t0,
        e: m * c * c * vel.dt_ds + zeta * pot.phi,
        q: q0,
        p,
    })
}

/// An on-shell point at `s = 0` with `e` completed from the mass shell.
pub fn on_shell_from_momentum(
    params: &ParticleParams,
    field: &FieldConfig,
    q0: [f64; 3],
    p0: [f64; 3],
    t0: f64,
) -> Result<ExtendedPhasePoint> {
    params.validate()?;
    let pot = field.eval(q0, t0, params.c)?;
    let e = kinetic_energy(params, &p0, &pot)? + params.zeta * pot.phi;
    Ok(ExtendedPhasePoint {
        s: 0.0,
        t: t0,
        e,
        q: q0,
        p: p0,
    })
}

/// Constraint diagnostics of a phase point; the velocity form uses the
/// velocities implied by the momenta.
pub fn constraint_residuals(
    params: &ParticleParams,
    point: &ExtendedPhasePoint,
    field: &FieldConfig,
) -> Result<ConstraintReport> {
    let mut rates = [0.0; 8];
    extended_rhs(params, field, &pack(point), &mut rates)?;
    let pot = field.eval(point.q, point.t, params.c)?;
    let (m, c) = (params.m, params.c);
    let pk = kinetic_momentum(params, &point.p, &pot);
    let ek = point.e - params.zeta * pot.phi;
    let mc2 = m * c * c;
    let vel = ExtendedVelocity {
        dt_ds: rates[0],
        dq_ds: [rates[2], rates[3], rates[4]],
    };
    Ok(ConstraintReport {
        residual_v: velocity_constraint_residual(&vel, c),
        residual_e: (ek * ek - c * c * dot3(&pk, &pk) - mc2 * mc2) / (mc2 * mc2),
        e1: h1_from_potentials(params, point, &pot),
    })
}

/// `(dt/ds)² - (1/c²)(dq/ds)² - 1`.
pub fn velocity_constraint_residual(vel: &ExtendedVelocity, c: f64) -> f64 {
    vel.dt_ds * vel.dt_ds - dot3(&vel.dq_ds, &vel.dq_ds) / (c * c) - 1.0
}

fn pack(z: &ExtendedPhasePoint) -> [f64; 8] {
    [z.t, z.e, z.q[0], z.q[1], z.q[2], z.p[0], z.p[1], z.p[2]]
}

fn unpack(s: f64, y: &[f64]) -> ExtendedPhasePoint {
    ExtendedPhasePoint {
        s,
        t: y[0],
        e: y[1],
        q: [y[2], y[3], y[4]],
        p: [y[5], y[6], y[7]],
    }
}

/// Right-hand side of the extended canonical equations.
pub fn extended_rhs(
    params: &ParticleParams,
    field: &FieldConfig,
    y: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let (m, c, zeta) = (params.m, params.c, params.zeta);
    let (t, e) = (y[0], y[1]);
    let q = [y[2], y[3], y[4]];
    let p = [y[5], y[6], y[7]];
    let pot = field.eval(q, t, c)?;
    let pk = kinetic_momentum(params, &p, &pot);
    let ek = e - zeta * pot.phi;
    let dt_ds = ek / (m * c * c);
    if !(dt_ds > 0.0) {
        return Err(Error::BackwardBranch { dt_ds });
    }
    out[0] = dt_ds;
    out[1] = -zeta / (m * c) * dot3(&pk, &pot.da_dt) + zeta / (m * c * c) * ek * pot.dphi_dt;
    for i in 0..3 {
        out[2 + i] = pk[i] / m;
        let pk_da: f64 = (0..3).map(|j| pk[j] * pot.da_dq[j][i]).sum();
        out[5 + i] = zeta / (m * c) * pk_da - zeta / (m * c * c) * ek * pot.dphi_dq[i];
    }
    Ok(())
}

/// Integrates the extended equations over `span` in `s`, starting from an
/// on-shell `point0` (its `s` is replaced by `span[0]`).
pub fn integrate_extended(
    params: &ParticleParams,
    point0: &ExtendedPhasePoint,
    field: &FieldConfig,
    span: [f64; 2],
    spec: &OdeSpec,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    let report = constraint_residuals(params, point0, field)?;
    if !(report.residual_e.abs() <= ON_SHELL_TOL) {
        return Err(Error::OffConstraint {
            residual: report.residual_e,
        });
    }
    integrate_extended_off_shell(params, point0, field, span, spec)
}

/// As [`integrate_extended`] but without the mass-shell check on `point0`.
pub fn integrate_extended_off_shell(
    params: &ParticleParams,
    point0: &ExtendedPhasePoint,
    field: &FieldConfig,
    span: [f64; 2],
    spec: &OdeSpec,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    field.validate()?;
    if !point0.is_finite() {
        return Err(Error::NonFinite("initial phase point"));
    }
    let sol = integrate_ode(
        |_, y, out| extended_rhs(params, field, y, out),
        &pack(point0),
        span,
        spec,
    )?;
    let mut samples = Vec::with_capacity(sol.len());
    let mut rates = Vec::with_capacity(sol.len());
    let mut constraints = Vec::with_capacity(sol.len());
    for k in 0..sol.len() {
        let z = unpack(sol.s[k], &sol.y[k]);
        constraints.push(constraint_residuals(params, &z, field)?);
        samples.push(z);
        rates.push(to8(&sol.dy[k]));
    }
    Ok(TrajectoryRecord {
        kind: FlowKind::Extended,
        params: *params,
        field: Some(*field),
        spec: *spec,
        stats: sol.stats,
        samples,
        rates,
        constraints,
    })
}

fn to8(v: &[f64]) -> [f64; 8] {
    let mut a = [0.0; 8];
    a.copy_from_slice(v);
    a
}

/// Integrates the conventional equations in `t` from `(q0, p0)`; `e` starts
/// at `H(q0, p0, t0)` and is carried along:
///
/// ```text
/// dq/dt = c² p_k / W,   W = √(c² p_k² + m²c⁴),   p_k = p - ζA/c
/// dp/dt = (ζc/W) p_k·∂A/∂q - ζ ∂φ/∂q
/// de/dt = -(ζc/W) p_k·∂A/∂t + ζ ∂φ/∂t
/// ```
pub fn integrate_conventional(
    params: &ParticleParams,
    q0: [f64; 3],
    p0: [f64; 3],
    t_span: [f64; 2],
    field: &FieldConfig,
    spec: &OdeSpec,
) -> Result<TimeTrajectory> {
    params.validate()?;
    field.validate()?;
    let ham = EmHamiltonian {
        params: *params,
        field: *field,
    };
    let e0 = ham.value(q0, p0, t_span[0])?;
    let y0 = [e0, q0[0], q0[1], q0[2], p0[0], p0[1], p0[2]];
    let rhs = |t: f64, y: &[f64], out: &mut [f64]| {
        let (dh_dq, dh_dp, dh_dt) = ham.gradient([y[1], y[2], y[3]], [y[4], y[5], y[6]], t)?;
        out[0] = dh_dt;
        for i in 0..3 {
            out[1 + i] = dh_dp[i];
            out[4 + i] = -dh_dq[i];
        }
        Ok(())
    };
    let sol = integrate_ode(rhs, &y0, t_span, spec)?;
    let samples = (0..sol.len())
        .map(|k| TimeSample::unpack(sol.s[k], &sol.y[k]))
        .collect();
    let rates = sol
        .dy
        .iter()
        .map(|d| {
            let mut a = [0.0; 7];
            a.copy_from_slice(d);
            a
        })
        .collect();
    Ok(TimeTrajectory {
        samples,
        rates,
        stats: sol.stats,
    })
}

/// Interpolates an extended trajectory onto `n` uniformly spaced times
/// between its first and last sample.
pub fn reparameterize_to_t(record: &TrajectoryRecord, n: usize) -> Result<TimeTrajectory> {
    if n < 2 {
        return Err(Error::domain(
            "reparameterize_to_t",
            "need at least two output times",
        ));
    }
    check_monotone(record)?;
    let (t0, t1) = (record.samples[0].t, record.samples.last().unwrap().t);
    let times: Vec<f64> = (0..n)
        .map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64)
        .collect();
    sample_at_times(record, &times)
}

fn check_monotone(record: &TrajectoryRecord) -> Result<()> {
    if record.samples.len() < 2 {
        return Err(Error::domain(
            "reparameterize_to_t",
            "trajectory has fewer than two samples",
        ));
    }
    for (i, r) in record.rates.iter().enumerate() {
        if !(r[0] > 0.0) {
            return Err(Error::BackwardBranch { dt_ds: r[0] });
        }
        if i > 0 && !(record.samples[i].t > record.samples[i - 1].t) {
            return Err(Error::NonMonotoneTime { index: i });
        }
    }
    Ok(())
}

/// Interpolates an extended trajectory at the given times by inverting
/// `t(s)` on the Hermite interpolant.
pub fn sample_at_times(record: &TrajectoryRecord, times: &[f64]) -> Result<TimeTrajectory> {
    check_monotone(record)?;
    let ts: Vec<f64> = record.samples.iter().map(|z| z.t).collect();
    let mut samples = Vec::with_capacity(times.len());
    let mut rates = Vec::with_capacity(times.len());
    for &target in times {
        let i = bracket(&ts, target)?;
        let (za, zb) = (&record.samples[i], &record.samples[i + 1]);
        let (ya, yb) = (pack(za), pack(zb));
        let (da, db) = (&record.rates[i], &record.rates[i + 1]);
        let interp = |k: usize, s: f64| hermite(za.s, ya[k], da[k], zb.s, yb[k], db[k], s);
        let slope = |k: usize, s: f64| hermite_slope(za.s, ya[k], da[k], zb.s, yb[k], db[k], s);

        // Newton on t(s) = target, safeguarded by bisection
        let (mut lo, mut hi) = (za.s, zb.s);
        let mut s = za.s + (zb.s - za.s) * (target - za.t) / (zb.t - za.t);
        for _ in 0..60 {
            let f = interp(0, s) - target;
            if f == 0.0 {
                break;
            }
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let d = slope(0, s);
            let mut next = s - f / d;
            if !(d > 0.0) || next <= lo || next >= hi {
                next = 0.5 * (lo + hi);
            }
            if (next - s).abs() <= 4.0 * f64::EPSILON * s.abs().max(1.0) {
                s = next;
                break;
            }
            s = next;
        }
        let y: Vec<f64> = (0..8).map(|k| interp(k, s)).collect();
        let dy: Vec<f64> = (0..8).map(|k| slope(k, s)).collect();
        let z = unpack(s, &y);
        samples.push(TimeSample {
            t: target,
            e: z.e,
            q: z.q,
            p: z.p,
        });
        let mut r = [0.0; 7];
        for k in 0..7 {
            r[k] = dy[k + 1] / dy[0];
        }
        rates.push(r);
    }
    Ok(TimeTrajectory {
        samples,
        rates,
        stats: record.stats,
    })
}

fn hermite_slope(s0: f64, y0: f64, d0: f64, s1: f64, y1: f64, d1: f64, s: f64) -> f64 {
    let h = s1 - s0;
    let u = (s - s0) / h;
    let u2 = u * u;
    let dh00 = (6.0 * u2 - 6.0 * u) / h;
    let dh10 = 3.0 * u2 - 4.0 * u + 1.0;
    let dh01 = (-6.0 * u2 + 6.0 * u) / h;
    let dh11 = 3.0 * u2 - 2.0 * u;
    dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1
}

/// Integrates the canonical equations of the trivial extended Hamiltonian
/// `H₁ = H - e`, for which `dt/ds = 1`.
pub fn trivial_extended_flow<H: Hamiltonian>(
    params: &ParticleParams,
    ham: &H,
    point0: &ExtendedPhasePoint,
    span: [f64; 2],
    spec: &OdeSpec,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    if !point0.is_finite() {
        return Err(Error::NonFinite("initial phase point"));
    }
    let rhs = |_: f64, y: &[f64], out: &mut [f64]| {
        let (dh_dq, dh_dp, dh_dt) = ham.gradient([y[2], y[3], y[4]], [y[5], y[6], y[7]], y[0])?;
        out[0] = 1.0;
        out[1] = dh_dt;
        for i in 0..3 {
            out[2 + i] = dh_dp[i];
            out[5 + i] = -dh_dq[i];
        }
        Ok(())
    };
    let sol = integrate_ode(rhs, &pack(point0), span, spec)?;
    let mc2 = params.rest_energy();
    let mut samples = Vec::with_capacity(sol.len());
    let mut rates = Vec::with_capacity(sol.len());
    let mut constraints = Vec::with_capacity(sol.len());
    for k in 0..sol.len() {
        let z = unpack(sol.s[k], &sol.y[k]);
        let h = ham.value(z.q, z.p, z.t)?;
        constraints.push(ConstraintReport {
            residual_v: sol.dy[k][0] - 1.0,
            residual_e: (z.e - h) / mc2,
            e1: h - z.e,
        });
        samples.push(z);
        rates.push(to8(&sol.dy[k]));
    }
    Ok(TrajectoryRecord {
        kind: FlowKind::Trivial,
        params: *params,
        field: None,
        spec: *spec,
        stats: sol.stats,
        samples,
        rates,
        constraints,
    })
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> &ExtendedPhasePoint {
        self.samples
            .last()
            .expect("a record holds at least its initial sample")
    }

    /// Largest `|residual_e|` and `|residual_v|` over all samples.
    pub fn max_residuals(&self) -> (f64, f64) {
        self.constraints.iter().fold((0.0f64, 0.0f64), |(e, v), r| {
            (e.max(r.residual_e.abs()), v.max(r.residual_v.abs()))
        })
    }

    /// Largest deviation of `e₁` from its initial value.
    pub fn e1_drift(&self) -> f64 {
        let e0 = self.constraints[0].e1;
        self.constraints
            .iter()
            .map(|r| (r.e1 - e0).abs())
            .fold(0.0, f64::max)
    }

    /// Writes the CSV table `s,t,e,q1,q2,q3,p1,p2,p3,residual_v,residual_e,e1`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s,t,e,q1,q2,q3,p1,p2,p3,residual_v,residual_e,e1")?;
        for (z, r) in self.samples.iter().zip(&self.constraints) {
            let row = [
                z.s,
                z.t,
                z.e,
                z.q[0],
                z.q[1],
                z.q[2],
                z.p[0],
                z.p[1],
                z.p[2],
                r.residual_v,
                r.residual_e,
                r.e1,
            ];
            write_row(&mut w, &row)?;
        }
        Ok(())
    }
}

impl TimeTrajectory {
    /// Writes the CSV table `t,e,q1,q2,q3,p1,p2,p3`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,e,q1,q2,q3,p1,p2,p3")?;
        for z in &self.samples {
            write_row(
                &mut w,
                &[z.t, z.e, z.q[0], z.q[1], z.q[2], z.p[0], z.p[1], z.p[2]],
            )?;
        }
        Ok(())
    }
}

/// One CSV row with 17 significant digits per value.
pub(crate) fn write_row<W: Write>(w: &mut W, row: &[f64]) -> Result<()> {
    let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
    writeln!(w, "{}", cells.join(","))?;
    Ok(())
}
