use super::state::{dot3, ExtendedPhasePoint, ParticleParams};
use crate::error::{Error, Result};
use crate::fields::{FieldConfig, PotentialSample};

/// Extended Hamiltonian
/// `H₁ = (1/2m)[(p - ζA/c)² - ((e - ζφ)/c)²] + ½mc²`.
pub fn extended_hamiltonian_em(
    params: &ParticleParams,
    point: &ExtendedPhasePoint,
    field: &FieldConfig,
) -> Result<f64> {
    let pot = field.eval(point.q, point.t, params.c)?;
    Ok(h1_from_potentials(params, point, &pot))
}

pub(crate) fn h1_from_potentials(
    params: &ParticleParams,
    point: &ExtendedPhasePoint,
    pot: &PotentialSample,
) -> f64 {
    let (m, c) = (params.m, params.c);
    let pk = kinetic_momentum(params, &point.p, pot);
    let ek = (point.e - params.zeta * pot.phi) / c;
    (dot3(&pk, &pk) - ek * ek) / (2.0 * m) + 0.5 * m * c * c
}

pub(crate) fn kinetic_momentum(
    params: &ParticleParams,
    p: &[f64; 3],
    pot: &PotentialSample,
) -> [f64; 3] {
    let k = params.zeta / params.c;
    [
        p[0] - k * pot.a[0],
        p[1] - k * pot.a[1],
        p[2] - k * pot.a[2],
    ]
}

/// Conventional Hamiltonian `√(c²(p - ζA/c)² + m²c⁴) + ζφ`.
pub fn conventional_hamiltonian_em(
    params: &ParticleParams,
    q: [f64; 3],
    p: [f64; 3],
    t: f64,
    field: &FieldConfig,
) -> Result<f64> {
    let pot = field.eval(q, t, params.c)?;
    Ok(kinetic_energy(params, &p, &pot)? + params.zeta * pot.phi)
}

/// `W = √(c² p_k² + m²c⁴)`.
pub(crate) fn kinetic_energy(
    params: &ParticleParams,
    p: &[f64; 3],
    pot: &PotentialSample,
) -> Result<f64> {
    let (m, c) = (params.m, params.c);
    let pk = kinetic_momentum(params, p, pot);
    let radicand = c * c * dot3(&pk, &pk) + m * m * c.powi(4);
    if !(radicand >= 0.0) || !radicand.is_finite() {
        return Err(Error::HamiltonianDomain { radicand });
    }
    Ok(radicand.sqrt())
}

/// A conventional Hamiltonian `H(q, p, t)` with its gradient.
pub trait Hamiltonian {
    fn value(&self, q: [f64; 3], p: [f64; 3], t: f64) -> Result<f64>;

    /// `(∂H/∂q, ∂H/∂p, ∂H/∂t)`.
    fn gradient(&self, q: [f64; 3], p: [f64; 3], t: f64) -> Result<([f64; 3], [f64; 3], f64)>;
}

/// The charged particle in an external field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmHamiltonian {
    pub params: ParticleParams,
    pub field: FieldConfig,
}

impl Hamiltonian for EmHamiltonian {
    fn value(&self, q: [f64; 3], p: [f64; 3], t: f64) -> Result<f64> {
        conventional_hamiltonian_em(&self.params, q, p, t, &self.field)
    }

    fn gradient(&self, q: [f64; 3], p: [f64; 3], t: f64) -> Result<([f64; 3], [f64; 3], f64)> {
        let prm = &self.params;
        let pot = self.field.eval(q, t, prm.c)?;
        let w = kinetic_energy(prm, &p, &pot)?;
        let pk = kinetic_momentum(prm, &p, &pot);
        let (c, zeta) = (prm.c, prm.zeta);
        let dh_dp = pk.map(|x| c * c * x / w);
        let mut dh_dq = [0.0; 3];
        for (i, d) in dh_dq.iter_mut().enumerate() {
            let pk_da: f64 = (0..3).map(|j| pk[j] * pot.da_dq[j][i]).sum();
            *d = -zeta * c / w * pk_da + zeta * pot.dphi_dq[i];
        }
        let dh_dt = -zeta * c / w * dot3(&pk, &pot.da_dt) + zeta * pot.dphi_dt;
        Ok((dh_dq, dh_dp, dh_dt))
    }
}
