use serde::Serialize;

use super::hamiltonian::extended_hamiltonian_em;
use super::state::{dot3, ExtendedPhasePoint, ExtendedVelocity, ParticleParams};
use crate::error::{Error, Result};
use crate::fields::FieldConfig;

/// Extended Lagrangian
/// `L₁ = ½mc²[(1/c²)(dq/ds)² - (dt/ds)² - 1] + (ζ/c)A·dq/ds - ζφ dt/ds`.
pub fn extended_lagrangian_em(
    params: &ParticleParams,
    vel: &ExtendedVelocity,
    q: [f64; 3],
    t: f64,
    field: &FieldConfig,
) -> Result<f64> {
    let (m, c, zeta) = (params.m, params.c, params.zeta);
    let pot = field.eval(q, t, c)?;
    let u2 = dot3(&vel.dq_ds, &vel.dq_ds);
    let free = 0.5 * m * c * c * (u2 / (c * c) - vel.dt_ds * vel.dt_ds - 1.0);
    Ok(free + zeta / c * dot3(&pot.a, &vel.dq_ds) - zeta * pot.phi * vel.dt_ds)
}

/// Conventional Lagrangian `-mc²√(1 - v²/c²) + (ζ/c)A·v - ζφ`.
pub fn conventional_lagrangian_em(
    params: &ParticleParams,
    v: [f64; 3],
    q: [f64; 3],
    t: f64,
    field: &FieldConfig,
) -> Result<f64> {
    let (m, c, zeta) = (params.m, params.c, params.zeta);
    let beta2 = dot3(&v, &v) / (c * c);
    if beta2 >= 1.0 {
        return Err(Error::domain(
            "conventional_lagrangian_em",
            format!("|v|/c = {} is not below 1", beta2.sqrt()),
        ));
    }
    let pot = field.eval(q, t, c)?;
    Ok(-m * c * c * (1.0 - beta2).sqrt() + zeta / c * dot3(&pot.a, &v) - zeta * pot.phi)
}

/// Outcome of [`legendre_roundtrip_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreReport {
    /// Canonical momentum `p = m dq/ds + (ζ/c)A`.
    pub p: [f64; 3],
    /// Kinetic momentum `m dq/ds`.
    pub p_kinetic: [f64; 3],
    /// `e = mc² dt/ds + ζφ`.
    pub e: f64,
    /// Kinetic energy value `mc² dt/ds`.
    pub e_kinetic: f64,
    pub l1: f64,
    pub h1: f64,
    /// `Σ p_μ dq^μ/ds = p·dq/ds - e dt/ds`.
    pub pairing: f64,
    /// `|H₁ + L₁ - Σ p_μ dq^μ/ds|`.
    pub residual: f64,
}

/// Legendre-transforms `L₁` at the given velocity and checks
/// `H₁ + L₁ = Σ p_μ dq^μ/ds`.
pub fn legendre_roundtrip_check(
    params: &ParticleParams,
    vel: &ExtendedVelocity,
    q: [f64; 3],
    t: f64,
    field: &FieldConfig,
) -> Result<LegendreReport> {
    let (m, c, zeta) = (params.m, params.c, params.zeta);
    let pot = field.eval(q, t, c)?;
    let p_kinetic = vel.dq_ds.map(|u| m * u);
    let p = [0, 1, 2].map(|i| p_kinetic[i] + zeta / c * pot.a[i]);
    let e_kinetic = m * c * c * vel.dt_ds;
    let e = e_kinetic + zeta * pot.phi;
    let l1 = extended_lagrangian_em(params, vel, q, t, field)?;
    let h1 = extended_hamiltonian_em(params, &ExtendedPhasePoint { s: 0.0, t, e, q, p }, field)?;
    let pairing = dot3(&p, &vel.dq_ds) - e * vel.dt_ds;
    Ok(LegendreReport {
        p,
        p_kinetic,
        e,
        e_kinetic,
        l1,
        h1,
        pairing,
        residual: (h1 + l1 - pairing).abs(),
    })
}

/// Determinants of the finite-difference velocity Hessian of `L₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianReport {
    /// `det ∂²L₁/(∂u^μ ∂u_ν)`, one index lowered with the metric; `m⁴`.
    pub mixed: f64,
    /// `det ∂²L₁/(∂u^μ ∂u^ν)` in the contravariant velocities `u^μ`; `-m⁴`.
    pub contravariant: f64,
}

/// Builds the 4×4 Hessian of `L₁` in `u^μ = (c dt/ds, dq/ds)` by central
/// differences with step `h` and returns its determinants.
pub fn hessian_determinant(
    params: &ParticleParams,
    vel: &ExtendedVelocity,
    q: [f64; 3],
    t: f64,
    field: &FieldConfig,
    h: f64,
) -> Result<HessianReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(
            "hessian_determinant",
            "step must be positive",
        ));
    }
    let c = params.c;
    let u0 = [c * vel.dt_ds, vel.dq_ds[0], vel.dq_ds[1], vel.dq_ds[2]];
    let lag = |u: [f64; 4]| {
        let v = ExtendedVelocity {
            dt_ds: u[0] / c,
            dq_ds: [u[1], u[2], u[3]],
        };
        extended_lagrangian_em(params, &v, q, t, field)
    };
    let shifted = |i: usize, di: f64, j: usize, dj: f64| {
        let mut u = u0;
        u[i] += di;
        u[j] += dj;
        lag(u)
    };
    let mut hess = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let v = if i == j {
                (shifted(i, h, i, 0.0)? - 2.0 * lag(u0)? + shifted(i, -h, i, 0.0)?) / (h * h)
            } else {
                (shifted(i, h, j, h)? - shifted(i, h, j, -h)? - shifted(i, -h, j, h)?
                    + shifted(i, -h, j, -h)?)
                    / (4.0 * h * h)
            };
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    let contravariant = det4(&hess);
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let mut mixed = hess;
    for row in mixed.iter_mut() {
        for (x, g) in row.iter_mut().zip(eta) {
            *x *= g;
        }
    }
    Ok(HessianReport {
        mixed: det4(&mixed),
        contravariant,
    })
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    const NATURAL: ParticleParams = ParticleParams {
        m: 1.0,
        zeta: 1.0,
        c: 1.0,
        hbar: 1.0,
    };

    #[test]
    fn rest_particle() {
        let vel = ExtendedVelocity {
            dq_ds: [0.0; 3],
            dt_ds: 1.0,
        };
        let l = extended_lagrangian_em(&NATURAL, &vel, [0.0; 3], 0.0, &FieldConfig::Zero).unwrap();
        assert_eq!(l, -1.0);
    }

    #[test]
    fn on_shell_extended_lagrangian_is_minus_rest_energy() {
        let p = ParticleParams {
            m: 2.0,
            c: 3.0,
            ..NATURAL
        };
        for v in [0.0, 0.5, 2.0, 2.9] {
            let vel = ExtendedVelocity::from_velocity([v, 0.0, 0.0], p.c).unwrap();
            let l = extended_lagrangian_em(&p, &vel, [0.0; 3], 0.0, &FieldConfig::Zero).unwrap();
            assert!((l + 18.0).abs() < 1e-12 * 18.0 * vel.dt_ds * vel.dt_ds);
        }
    }

    #[test]
    fn conventional_values() {
        let l = conventional_lagrangian_em(
            &NATURAL,
            [0.6, 0.0, 0.0],
            [0.0; 3],
            0.0,
            &FieldConfig::Zero,
        )
        .unwrap();
        assert!((l + 0.8).abs() < 1e-15);
        assert!(conventional_lagrangian_em(
            &NATURAL,
            [1.0, 0.0, 0.0],
            [0.0; 3],
            0.0,
            &FieldConfig::Zero
        )
        .is_err());
    }

    #[test]
    fn extended_projects_to_conventional() {
        let field = FieldConfig::UniformMagnetic {
            b: [0.2, -0.1, 0.7],
        };
        let v = [0.3, 0.4, -0.2];
        let vel = ExtendedVelocity::from_velocity(v, 1.0).unwrap();
        let q = [0.5, 1.0, -0.3];
        let l1 = extended_lagrangian_em(&NATURAL, &vel, q, 0.0, &field).unwrap();
        let l = conventional_lagrangian_em(&NATURAL, v, q, 0.0, &field).unwrap();
        assert!((l1 / vel.dt_ds - l).abs() < 1e-14);
    }

    #[test]
    fn legendre_roundtrip() {
        let field = FieldConfig::UniformMagnetic { b: [0.0, 0.0, 1.3] };
        let vel = ExtendedVelocity {
            dq_ds: [0.7, -0.2, 0.4],
            dt_ds: 1.9,
        };
        let r = legendre_roundtrip_check(&NATURAL, &vel, [0.3, 0.2, 0.1], 0.5, &field).unwrap();
        assert!(r.residual < 1e-12);
        assert_ne!(r.p, r.p_kinetic);
        let zero =
            legendre_roundtrip_check(&NATURAL, &vel, [0.3, 0.2, 0.1], 0.5, &FieldConfig::Zero)
                .unwrap();
        assert_eq!(zero.p, zero.p_kinetic);
    }

    #[test]
    fn on_shell_h1_vanishes() {
        let vel = ExtendedVelocity::from_velocity([0.1, 0.5, 0.3], 1.0).unwrap();
        let r =
            legendre_roundtrip_check(&NATURAL, &vel, [0.0; 3], 0.0, &FieldConfig::Zero).unwrap();
        assert!(r.h1.abs() < 1e-14);
    }

    #[test]
    fn hessian_is_m_to_the_fourth() {
        let vel = ExtendedVelocity {
            dq_ds: [0.3, 0.1, -0.2],
            dt_ds: 1.2,
        };
        for m in [0.5, 1.0, 2.0] {
            let p = ParticleParams { m, ..NATURAL };
            for field in [
                FieldConfig::Zero,
                FieldConfig::UniformMagnetic { b: [0.0, 1.0, 2.0] },
            ] {
                let r = hessian_determinant(&p, &vel, [0.4, 0.5, 0.6], 0.0, &field, 1e-2).unwrap();
                assert!((r.mixed / m.powi(4) - 1.0).abs() < 1e-8, "{r:?}");
                assert!((r.contravariant / m.powi(4) + 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn determinant_helper() {
        let m = [
            [2.0, 0.0, 0.0, 1.0],
            [0.0, 3.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 1.0],
        ];
        assert!((det4(&m) - 3.0).abs() < 1e-15);
    }
}
