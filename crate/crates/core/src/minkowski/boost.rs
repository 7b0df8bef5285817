//! Pure Lorentz boosts as extended canonical transformations.
//!
//! Primed quantities refer to the boosted frame. Coordinates map forward,
//! `(Q, cT) = Λ(β) (q, ct)`, and so do the contravariant momenta,
//! `(P_k, E_k/c) = Λ(β) (p_k, e_k/c)`. The conventional textbook orientation
//! writes the momentum rule the other way round, unprimed from primed,
//! which is [`boost_momentum_energy`]; [`inverse_boost_momentum_energy`]
//! gives the primed values.

use serde::{Deserialize, Serialize};

use super::four_vector::FourVector;
use crate::dynamics::state::dot3;
use crate::error::{Error, Result};

/// A boost with velocity ratio `β = v/c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoostParams {
    beta: [f64; 3],
    gamma: f64,
}

impl BoostParams {
    pub fn new(beta: [f64; 3]) -> Result<Self> {
        if !beta.iter().all(|b| b.is_finite()) {
            return Err(Error::domain("BoostParams", "beta must be finite"));
        }
        let b2 = dot3(&beta, &beta);
        if b2 >= 1.0 {
            return Err(Error::domain(
                "BoostParams",
                format!("|beta| = {} is not below 1", b2.sqrt()),
            ));
        }
        Ok(BoostParams {
            beta,
            gamma: 1.0 / (1.0 - b2).sqrt(),
        })
    }

    pub fn identity() -> Self {
        BoostParams {
            beta: [0.0; 3],
            gamma: 1.0,
        }
    }

    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The boost with `-β`.
    pub fn inverse(&self) -> Self {
        BoostParams {
            beta: [-self.beta[0], -self.beta[1], -self.beta[2]],
            gamma: self.gamma,
        }
    }

    /// `(γ - 1)/β²`, evaluated as `γ²/(γ + 1)`.
    pub fn longitudinal_factor(&self) -> f64 {
        self.gamma * self.gamma / (self.gamma + 1.0)
    }

    /// Applies `Λ(β)` to a contravariant four-vector.
    pub fn apply(&self, x: &FourVector) -> FourVector {
        let b = self.beta;
        let s = x.spatial();
        let bs = dot3(&b, &s);
        let k = self.longitudinal_factor() * bs - self.gamma * x.x0;
        FourVector::new(
            self.gamma * (x.x0 - bs),
            s[0] + k * b[0],
            s[1] + k * b[1],
            s[2] + k * b[2],
        )
    }

    /// Applies `Λ(-β)`.
    pub fn apply_inverse(&self, x: &FourVector) -> FourVector {
        self.inverse().apply(x)
    }
}

impl<'de> Deserialize<'de> for BoostParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            beta: [f64; 3],
        }
        let raw = Raw::deserialize(d)?;
        BoostParams::new(raw.beta).map_err(serde::de::Error::custom)
    }
}

/// `(Q, T)` in the boosted frame.
pub fn boost_coordinates(q: [f64; 3], t: f64, c: f64, b: &BoostParams) -> ([f64; 3], f64) {
    let x = b.apply(&FourVector::from_parts(c * t, q));
    (x.spatial(), x.x0 / c)
}

/// `(q, t)` from boosted-frame coordinates.
pub fn inverse_boost_coordinates(
    q_primed: [f64; 3],
    t_primed: f64,
    c: f64,
    b: &BoostParams,
) -> ([f64; 3], f64) {
    boost_coordinates(q_primed, t_primed, c, &b.inverse())
}

/// Unprimed kinetic momentum and energy `(p_k, e_k)` from the boosted-frame
/// values `(P_k, E_k)`:
/// `p_k = P_k + γβ E_k/c + (γ-1)/β² β (β·P_k)`, `e_k = γ E_k + cγ β·P_k`.
pub fn boost_momentum_energy(
    p_primed: [f64; 3],
    e_primed: f64,
    c: f64,
    b: &BoostParams,
) -> ([f64; 3], f64) {
    let x = b.apply_inverse(&FourVector::from_parts(e_primed / c, p_primed));
    (x.spatial(), c * x.x0)
}

/// Boosted-frame `(P_k, E_k)` from unprimed `(p_k, e_k)`.
pub fn inverse_boost_momentum_energy(
    p: [f64; 3],
    e: f64,
    c: f64,
    b: &BoostParams,
) -> ([f64; 3], f64) {
    let x = b.apply(&FourVector::from_parts(e / c, p));
    (x.spatial(), c * x.x0)
}

/// Unprimed potentials `(A, φ)` from boosted-frame `(A', φ')`; they follow
/// the same rule as `(p_k, e_k/c)`.
pub fn boost_potentials(a_primed: [f64; 3], phi_primed: f64, b: &BoostParams) -> ([f64; 3], f64) {
    let x = b.apply_inverse(&FourVector::from_parts(phi_primed, a_primed));
    (x.spatial(), x.x0)
}

/// Boosted-frame `(A', φ')` from unprimed `(A, φ)`.
pub fn inverse_boost_potentials(a: [f64; 3], phi: f64, b: &BoostParams) -> ([f64; 3], f64) {
    let x = b.apply(&FourVector::from_parts(phi, a));
    (x.spatial(), x.x0)
}

/// The type-2 generating function of the boost,
/// `F₂ = P_k·q - γ[E_k t + β·(P_k ct - E_k q/c)] + (γ-1)/β² (β·P_k)(β·q)`.
pub fn boost_generating_function(
    q: [f64; 3],
    p_primed: [f64; 3],
    t: f64,
    e_primed: f64,
    c: f64,
    b: &BoostParams,
) -> f64 {
    let beta = b.beta();
    let g = b.gamma();
    let mixed: f64 = (0..3)
        .map(|i| beta[i] * (p_primed[i] * c * t - e_primed * q[i] / c))
        .sum();
    dot3(&p_primed, &q) - g * (e_primed * t + mixed)
        + b.longitudinal_factor() * dot3(&beta, &p_primed) * dot3(&beta, &q)
}

/// Transformation rules read off from `F₂` by central differences:
/// `p_k = ∂F₂/∂q`, `Q = ∂F₂/∂P_k`, `e_k = -∂F₂/∂t`, `T = -∂F₂/∂E_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratingGradients {
    pub p: [f64; 3],
    pub q_primed: [f64; 3],
    pub e: f64,
    pub t_primed: f64,
}

pub fn boost_generating_gradients(
    q: [f64; 3],
    p_primed: [f64; 3],
    t: f64,
    e_primed: f64,
    c: f64,
    b: &BoostParams,
    h: f64,
) -> GeneratingGradients {
    let f =
        |q: [f64; 3], pp: [f64; 3], t: f64, ep: f64| boost_generating_function(q, pp, t, ep, c, b);
    let d = |plus: f64, minus: f64| (plus - minus) / (2.0 * h);
    let mut grad_q = [0.0; 3];
    let mut grad_p = [0.0; 3];
    for i in 0..3 {
        let (mut qp, mut qm) = (q, q);
        qp[i] += h;
        qm[i] -= h;
        grad_q[i] = d(f(qp, p_primed, t, e_primed), f(qm, p_primed, t, e_primed));
        let (mut pp, mut pm) = (p_primed, p_primed);
        pp[i] += h;
        pm[i] -= h;
        grad_p[i] = d(f(q, pp, t, e_primed), f(q, pm, t, e_primed));
    }
    GeneratingGradients {
        p: grad_q,
        q_primed: grad_p,
        e: -d(
            f(q, p_primed, t + h, e_primed),
            f(q, p_primed, t - h, e_primed),
        ),
        t_primed: -d(
            f(q, p_primed, t, e_primed + h),
            f(q, p_primed, t, e_primed - h),
        ),
    }
}

/// Conventional Hamiltonian in the unprimed frame from its boosted-frame
/// value: `H = γ(H' + c β·P_k)`.
pub fn hamiltonian_boost_rule(h_primed: f64, p_primed: [f64; 3], c: f64, b: &BoostParams) -> f64 {
    b.gamma() * (h_primed + c * dot3(&b.beta(), &p_primed))
}
