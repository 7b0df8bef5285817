//! External electromagnetic potentials `(φ, A)` with analytic first
//! derivatives.

use serde::{Deserialize, Serialize};

use crate::dynamics::state::{cross3, dot3};
use crate::error::{Error, Result};
use crate::minkowski::FourVector;

/// An external field, described by its potentials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldConfig {
    #[default]
    Zero,
    /// Constant potentials; no field strength, but a nonzero gauge.
    ConstantPotential { phi: f64, a: [f64; 3] },
    /// `φ = -E·q`, `A = 0`.
    UniformElectric { e: [f64; 3] },
    /// Symmetric gauge `A = ½ B × q`.
    UniformMagnetic { b: [f64; 3] },
    /// `A = amplitude · cos(k·q - c|k| t + phase)`, `φ = 0`.
    PlaneWave {
        amplitude: [f64; 3],
        wave_vector: [f64; 3],
        phase: f64,
    },
    /// `φ = strength / √(|q|² + softening²)`.
    Coulomb { strength: f64, softening: f64 },
}

/// Potentials and their first derivatives at one space-time point.
///
/// `da_dq[i][j]` is `∂A_i/∂q_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PotentialSample {
    pub phi: f64,
    pub a: [f64; 3],
    pub dphi_dq: [f64; 3],
    pub dphi_dt: f64,
    pub da_dq: [[f64; 3]; 3],
    pub da_dt: [f64; 3],
}

impl PotentialSample {
    /// `∂_α A^α = (1/c) ∂φ/∂t + ∇·A`, with `A⁰ = φ` and `∂₀ = (1/c) ∂_t`.
    pub fn four_divergence(&self, c: f64) -> f64 {
        self.dphi_dt / c + self.da_dq[0][0] + self.da_dq[1][1] + self.da_dq[2][2]
    }

    /// `A_α A^α = -φ² + |A|²`.
    pub fn square(&self) -> f64 {
        dot3(&self.a, &self.a) - self.phi * self.phi
    }

    fn is_finite(&self) -> bool {
        let scalars = [self.phi, self.dphi_dt];
        scalars
            .iter()
            .chain(&self.a)
            .chain(&self.dphi_dq)
            .chain(self.da_dq.iter().flatten())
            .chain(&self.da_dt)
            .all(|x| x.is_finite())
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match self {
            FieldConfig::Zero => true,
            FieldConfig::ConstantPotential { phi, a } => phi.is_finite() && finite(a),
            FieldConfig::UniformElectric { e } => finite(e),
            FieldConfig::UniformMagnetic { b } => finite(b),
            FieldConfig::PlaneWave {
                amplitude,
                wave_vector,
                phase,
            } => finite(amplitude) && finite(wave_vector) && phase.is_finite(),
            FieldConfig::Coulomb {
                strength,
                softening,
            } => {
                if !(*softening >= 0.0) {
                    return Err(Error::domain(
                        "FieldConfig",
                        "coulomb softening must be non-negative",
                    ));
                }
                strength.is_finite() && softening.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(
                "FieldConfig",
                "field parameters must be finite",
            ))
        }
    }

    /// Whether the potentials are independent of time.
    pub fn is_static(&self) -> bool {
        !matches!(self, FieldConfig::PlaneWave { .. })
    }

    pub fn eval(&self, q: [f64; 3], t: f64, c: f64) -> Result<PotentialSample> {
        let mut s = PotentialSample::default();
        match *self {
            FieldConfig::Zero => {}
            FieldConfig::ConstantPotential { phi, a } => {
                s.phi = phi;
                s.a = a;
            }
            FieldConfig::UniformElectric { e } => {
                s.phi = -dot3(&e, &q);
                s.dphi_dq = [-e[0], -e[1], -e[2]];
            }
            FieldConfig::UniformMagnetic { b } => {
                s.a = cross3(&b, &q).map(|x| 0.5 * x);
                for j in 0..3 {
                    let mut unit = [0.0; 3];
                    unit[j] = 1.0;
                    let col = cross3(&b, &unit);
                    for i in 0..3 {
                        s.da_dq[i][j] = 0.5 * col[i];
                    }
                }
            }
            FieldConfig::PlaneWave {
                amplitude,
                wave_vector,
                phase,
            } => {
                let omega = c * dot3(&wave_vector, &wave_vector).sqrt();
                let theta = dot3(&wave_vector, &q) - omega * t + phase;
                let (sin, cos) = theta.sin_cos();
                for i in 0..3 {
                    s.a[i] = amplitude[i] * cos;
                    s.da_dt[i] = amplitude[i] * omega * sin;
                    for j in 0..3 {
                        s.da_dq[i][j] = -amplitude[i] * wave_vector[j] * sin;
                    }
                }
            }
            FieldConfig::Coulomb {
                strength,
                softening,
            } => {
                let rho2 = dot3(&q, &q) + softening * softening;
                if rho2 == 0.0 {
                    return Err(Error::domain(
                        "eval_potentials",
                        "coulomb potential evaluated at its singularity",
                    ));
                }
                let rho = rho2.sqrt();
                s.phi = strength / rho;
                let k = -strength / (rho2 * rho);
                s.dphi_dq = q.map(|x| k * x);
            }
        }
        if !s.is_finite() {
            return Err(Error::NonFinite("field potentials"));
        }
        Ok(s)
    }
}

/// Potentials and derivatives of `config` at `(q, t)`.
pub fn eval_potentials(
    config: &FieldConfig,
    q: [f64; 3],
    t: f64,
    c: f64,
) -> Result<PotentialSample> {
    config.eval(q, t, c)
}

/// Covariant four-potential `(A₀, A₁, A₂, A₃)` with `A₀ = -φ`.
pub fn covariant_potential(
    config: &FieldConfig,
    q: [f64; 3],
    t: f64,
    c: f64,
) -> Result<FourVector> {
    let s = config.eval(q, t, c)?;
    Ok(FourVector::from_parts(-s.phi, s.a))
}
