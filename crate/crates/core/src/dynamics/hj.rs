use super::hamiltonian::conventional_hamiltonian_em;
use super::state::ParticleParams;
use crate::error::{Error, Result};
use crate::fields::FieldConfig;

/// `H(q, ∇S, t) + ∂S/∂t` for a trial action `S(q, t)`, with central
/// differences of step `h`.
///
/// A non-real `S` at any stencil point (for example a square root of a
/// negative argument) is reported as a domain error rather than folded into
/// the residual.
pub fn hj_residual<S>(
    params: &ParticleParams,
    action: S,
    q: [f64; 3],
    t: f64,
    field: &FieldConfig,
    h: f64,
) -> Result<f64>
where
    S: Fn([f64; 3], f64) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain("hj_residual", "step must be positive"));
    }
    let eval = |q: [f64; 3], t: f64| {
        let v = action(q, t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(
                "hj_residual",
                format!("action is not real at q = {q:?}, t = {t}"),
            ))
        }
    };
    let mut grad = [0.0; 3];
    for (i, g) in grad.iter_mut().enumerate() {
        let (mut a, mut b) = (q, q);
        a[i] += h;
        b[i] -= h;
        *g = (eval(a, t)? - eval(b, t)?) / (2.0 * h);
    }
    let ds_dt = (eval(q, t + h)? - eval(q, t - h)?) / (2.0 * h);
    Ok(conventional_hamiltonian_em(params, q, grad, t, field)? + ds_dt)
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

    fn free_action(p: ParticleParams) -> impl Fn([f64; 3], f64) -> f64 {
        move |q, t| {
            let q2: f64 = q.iter().map(|x| x * x).sum();
            -p.m * p.c * p.c * (t * t - q2 / (p.c * p.c)).sqrt()
        }
    }

    #[test]
    fn free_particle_action_solves_hj() {
        let p = ParticleParams {
            m: 2.0,
            c: 1.5,
            ..NATURAL
        };
        let r = hj_residual(
            &p,
            free_action(p),
            [0.3, -0.2, 0.5],
            2.0,
            &FieldConfig::Zero,
            1e-5,
        )
        .unwrap();
        assert!(r.abs() < 1e-7, "{r}");
    }

    #[test]
    fn zero_action_leaves_rest_energy() {
        let r = hj_residual(
            &NATURAL,
            |_, _| 0.0,
            [1.0; 3],
            0.0,
            &FieldConfig::Zero,
            1e-5,
        )
        .unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn residual_is_not_homogeneous() {
        let s = free_action(NATURAL);
        let (q, t) = ([0.3, 0.1, 0.0], 1.5);
        let r1 = hj_residual(&NATURAL, &s, q, t, &FieldConfig::Zero, 1e-5).unwrap();
        let r2 = hj_residual(
            &NATURAL,
            |q, t| 2.0 * s(q, t),
            q,
            t,
            &FieldConfig::Zero,
            1e-5,
        )
        .unwrap();
        assert!((r2 - 2.0 * r1).abs() > 0.1);
    }

    #[test]
    fn spacelike_probe_is_a_domain_error() {
        let r = hj_residual(
            &NATURAL,
            free_action(NATURAL),
            [2.0, 0.0, 0.0],
            1.0,
            &FieldConfig::Zero,
            1e-5,
        );
        assert!(matches!(r, Err(Error::Domain { .. })));
    }
}
