//! Numerical test of the derivative conditions that characterize an extended
//! canonical transformation `(q^μ, p_μ) ↦ (Q^μ, P_μ)`:
//!
//! ```text
//! ∂Q^μ/∂q^ν =  ∂p_ν/∂P_μ      ∂Q^μ/∂p_ν = -∂q^ν/∂P_μ
//! ∂P_μ/∂q^ν = -∂p_ν/∂Q^μ      ∂P_μ/∂p_ν =  ∂q^ν/∂Q^μ
//! ```
//!
//! The forward Jacobian is taken by central differences and the right-hand
//! sides come from its numerical inverse. The pairs used are `(t, -e)` and
//! `(q, p)`; rescaling to `(ct, -e/c)` does not affect the conditions.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::boost::{boost_coordinates, inverse_boost_momentum_energy, BoostParams};
use crate::dynamics::state::ExtendedPhasePoint;
use crate::error::{Error, Result};

type MapFn = dyn Fn(&ExtendedPhasePoint) -> Result<ExtendedPhasePoint> + Send + Sync;

/// A transformation of extended phase space with a descriptive label.
#[derive(Clone)]
pub struct CanonicalMap {
    label: String,
    map: Arc<MapFn>,
}

impl fmt::Debug for CanonicalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CanonicalMap")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl CanonicalMap {
    pub fn new<F>(label: impl Into<String>, map: F) -> Self
    where
        F: Fn(&ExtendedPhasePoint) -> Result<ExtendedPhasePoint> + Send + Sync + 'static,
    {
        CanonicalMap {
            label: label.into(),
            map: Arc::new(map),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, z: &ExtendedPhasePoint) -> Result<ExtendedPhasePoint> {
        (self.map)(z)
    }

    pub fn identity() -> Self {
        CanonicalMap::new("identity", |z| Ok(*z))
    }

    /// Lorentz boost acting on coordinates and canonical momenta alike.
    pub fn lorentz_boost(b: BoostParams, c: f64) -> Self {
        CanonicalMap::new(format!("boost beta={:?}", b.beta()), move |z| {
            let (q, t) = boost_coordinates(z.q, z.t, c, &b);
            let (p, e) = inverse_boost_momentum_energy(z.p, z.e, c, &b);
            Ok(ExtendedPhasePoint { s: z.s, t, e, q, p })
        })
    }

    /// `q ↦ kq, p ↦ kp`, canonical only for `k = ±1`.
    pub fn scaling(k: f64) -> Self {
        CanonicalMap::new(format!("scaling k={k}"), move |z| {
            let w = z.to_canonical().map(|x| k * x);
            Ok(ExtendedPhasePoint::from_canonical(z.s, &w))
        })
    }
}

/// Largest violation of each of the four block conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalReport {
    pub label: String,
    pub block_violations: [f64; 4],
    pub max_violation: f64,
}

impl CanonicalReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation < tol
    }
}

/// Checks the canonical conditions at `probe` with central-difference step `h`.
pub fn verify_extended_canonical(
    map: &CanonicalMap,
    probe: &ExtendedPhasePoint,
    h: f64,
) -> Result<CanonicalReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(
            "verify_extended_canonical",
            "step must be positive",
        ));
    }
    let z0 = probe.to_canonical();
    let mut jac = [[0.0; 8]; 8];
    for col in 0..8 {
        let (mut zp, mut zm) = (z0, z0);
        zp[col] += h;
        zm[col] -= h;
        let fp = map
            .apply(&ExtendedPhasePoint::from_canonical(probe.s, &zp))?
            .to_canonical();
        let fm = map
            .apply(&ExtendedPhasePoint::from_canonical(probe.s, &zm))?
            .to_canonical();
        for row in 0..8 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    let inv = invert8(&jac)?;

    // forward blocks A = ∂Q/∂q, B = ∂Q/∂p, C = ∂P/∂q, D = ∂P/∂p;
    // inverse blocks a = ∂q/∂Q, b = ∂q/∂P, c = ∂p/∂Q, d = ∂p/∂P
    let fwd = |r0: usize, c0: usize, i: usize, j: usize| jac[r0 + i][c0 + j];
    let bwd = |r0: usize, c0: usize, i: usize, j: usize| inv[r0 + i][c0 + j];
    let mut blocks = [0.0f64; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let conds = [
                fwd(0, 0, mu, nu) - bwd(4, 4, nu, mu),
                fwd(0, 4, mu, nu) + bwd(0, 4, nu, mu),
                fwd(4, 0, mu, nu) + bwd(4, 0, nu, mu),
                fwd(4, 4, mu, nu) - bwd(0, 0, nu, mu),
            ];
            for (b, v) in blocks.iter_mut().zip(conds) {
                *b = b.max(v.abs());
            }
        }
    }
    let max_violation = blocks.iter().cloned().fold(0.0, f64::max);
    if !max_violation.is_finite() {
        return Err(Error::NonFinite("canonical map Jacobian"));
    }
    Ok(CanonicalReport {
        label: map.label.clone(),
        block_violations: blocks,
        max_violation,
    })
}

fn invert8(m: &[[f64; 8]; 8]) -> Result<[[f64; 8]; 8]> {
    let mut a = *m;
    let mut inv = [[0.0; 8]; 8];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = m.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    for col in 0..8 {
        let pivot = (col..8)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= 1e-12 * scale {
            return Err(Error::IllConditioned(
                "canonical map Jacobian is singular".into(),
            ));
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for k in 0..8 {
            a[col][k] /= d;
            inv[col][k] /= d;
        }
        for row in 0..8 {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for k in 0..8 {
                        a[row][k] -= f * a[col][k];
                        inv[row][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Ok(inv)
}
