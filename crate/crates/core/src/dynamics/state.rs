use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass, charge, light speed and action quantum of the particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleParams {
    pub m: f64,
    pub zeta: f64,
    pub c: f64,
    pub hbar: f64,
}

impl Default for ParticleParams {
    /// Natural units, `m = ζ = c = ħ = 1`.
    fn default() -> Self {
        ParticleParams {
            m: 1.0,
            zeta: 1.0,
            c: 1.0,
            hbar: 1.0,
        }
    }
}

impl ParticleParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("m", self.m), ("c", self.c), ("hbar", self.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(
                    "ParticleParams",
                    format!("{name} must be positive and finite, got {v}"),
                ));
            }
        }
        if !self.zeta.is_finite() {
            return Err(Error::domain("ParticleParams", "charge must be finite"));
        }
        Ok(())
    }

    /// Rest energy `mc²`.
    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }
}

/// A point `(t, e, q, p)` of extended phase space at parameter `s`.
///
/// `(t, -e)` and `(q, p)` are canonically conjugate pairs; in covariant
/// notation `q⁰ = ct` and `p₀ = -e/c`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendedPhasePoint {
    pub s: f64,
    pub t: f64,
    pub e: f64,
    pub q: [f64; 3],
    pub p: [f64; 3],
}

impl ExtendedPhasePoint {
    /// Packs into `[t, q1, q2, q3, -e, p1, p2, p3]`, coordinates first.
    pub fn to_canonical(&self) -> [f64; 8] {
        let (q, p) = (self.q, self.p);
        [self.t, q[0], q[1], q[2], -self.e, p[0], p[1], p[2]]
    }

    pub fn from_canonical(s: f64, z: &[f64; 8]) -> Self {
        ExtendedPhasePoint {
            s,
            t: z[0],
            e: -z[4],
            q: [z[1], z[2], z[3]],
            p: [z[5], z[6], z[7]],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_canonical().iter().all(|x| x.is_finite()) && self.s.is_finite()
    }
}

/// Derivatives `dq/ds` and `dt/ds`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendedVelocity {
    pub dq_ds: [f64; 3],
    pub dt_ds: f64,
}

impl ExtendedVelocity {
    /// The on-shell four-velocity of a particle moving with velocity `v`:
    /// `dt/ds = γ`, `dq/ds = γ v`.
    pub fn from_velocity(v: [f64; 3], c: f64) -> Result<Self> {
        let v2 = dot3(&v, &v);
        if v2 >= c * c {
            return Err(Error::domain(
                "ExtendedVelocity",
                format!("|v| = {} is not below c = {c}", v2.sqrt()),
            ));
        }
        let gamma = 1.0 / (1.0 - v2 / (c * c)).sqrt();
        Ok(ExtendedVelocity {
            dq_ds: scale3(gamma, &v),
            dt_ds: gamma,
        })
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn scale3(k: f64, a: &[f64; 3]) -> [f64; 3] {
    [k * a[0], k * a[1], k * a[2]]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
