use super::lagrangian::extended_lagrangian_em;
use super::motion::{extended_rhs, FlowKind, TrajectoryRecord};
use super::state::{ExtendedVelocity, ParticleParams};
use crate::error::{Error, Result};
use crate::fields::FieldConfig;
use crate::numerics::ode::hermite;

/// Relative error bound for [`classical_action`].
pub const ACTION_REL_TOL: f64 = 1e-8;

/// `∫ L₁ ds` along a recorded extended trajectory.
///
/// Each interval is integrated with Simpson's rule, using a Hermite midpoint
/// state; velocities come from the equations of motion. The result is
/// compared with Simpson's rule over pairs of intervals, and a disagreement
/// above [`ACTION_REL_TOL`] is reported as [`Error::TooSparse`].
pub fn classical_action(
    record: &TrajectoryRecord,
    params: &ParticleParams,
    field: &FieldConfig,
) -> Result<f64> {
    if record.kind != FlowKind::Extended {
        return Err(Error::domain(
            "classical_action",
            "only records of the charged-particle H1 are supported",
        ));
    }
    let n = record.samples.len();
    if n < 2 {
        return Err(Error::TooSparse {
            error: f64::INFINITY,
        });
    }
    let lag_at = |y: &[f64; 8]| -> Result<f64> {
        let mut d = [0.0; 8];
        extended_rhs(params, field, y, &mut d)?;
        let vel = ExtendedVelocity {
            dt_ds: d[0],
            dq_ds: [d[2], d[3], d[4]],
        };
        extended_lagrangian_em(params, &vel, [y[2], y[3], y[4]], y[0], field)
    };
    let packed: Vec<[f64; 8]> = record
        .samples
        .iter()
        .map(|z| [z.t, z.e, z.q[0], z.q[1], z.q[2], z.p[0], z.p[1], z.p[2]])
        .collect();
    let s: Vec<f64> = record.samples.iter().map(|z| z.s).collect();
    let nodes: Vec<f64> = packed.iter().map(lag_at).collect::<Result<_>>()?;

    let mut fine = Vec::with_capacity(n - 1);
    let mut magnitude = 0.0;
    for i in 0..n - 1 {
        let sm = 0.5 * (s[i] + s[i + 1]);
        let mut ym = [0.0; 8];
        for (k, v) in ym.iter_mut().enumerate() {
            *v = hermite(
                s[i],
                packed[i][k],
                record.rates[i][k],
                s[i + 1],
                packed[i + 1][k],
                record.rates[i + 1][k],
                sm,
            );
        }
        let lm = lag_at(&ym)?;
        let h = s[i + 1] - s[i];
        fine.push(h / 6.0 * (nodes[i] + 4.0 * lm + nodes[i + 1]));
        magnitude += h / 6.0 * (nodes[i].abs() + 4.0 * lm.abs() + nodes[i + 1].abs());
    }
    let value: f64 = fine.iter().sum();

    let mut coarse = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let (h1, h2) = (s[i + 1] - s[i], s[i + 2] - s[i + 1]);
        let w = (h1 + h2) / 6.0;
        coarse += w
            * ((2.0 - h2 / h1) * nodes[i]
                + (h1 + h2) * (h1 + h2) / (h1 * h2) * nodes[i + 1]
                + (2.0 - h1 / h2) * nodes[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        // a single trailing interval: compare against the trapezoid rule
        let h = s[i + 1] - s[i];
        coarse += 0.5 * h * (nodes[i] + nodes[i + 1]);
    }
    let error = (value - coarse).abs() / 15.0;
    if error > ACTION_REL_TOL * magnitude.max(f64::MIN_POSITIVE) {
        return Err(Error::TooSparse { error });
    }
    Ok(value)
}
