use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::closed_form_at;
use crate::dynamics::ParticleParams;
use crate::error::{Error, Result};
use crate::fields::{FieldConfig, PotentialSample};
use crate::grid::{GridLayout, GridMeta, WaveGrid};
use crate::numerics::{central_gradient, finite_diff_dalembert};

/// Default light-cone exclusion: kernel grids need `τ² > 10 h²`.
pub const LIGHT_CONE_MARGIN: f64 = 10.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Pointwise Klein-Gordon residual over the interior of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KgResidual {
    /// Residual samples; boundary cells are zero.
    pub residual: WaveGrid,
    pub max_norm: f64,
    /// Interior point where `max_norm` is attained.
    pub argmax: (usize, usize),
}

/// Derivatives and potentials at one interior lattice point.
struct LocalJet {
    psi: Complex64,
    dalembert: Complex64,
    dt: Complex64,
    dq: Complex64,
    pot: PotentialSample,
}

fn check_grid(grid: &WaveGrid, field: &FieldConfig) -> Result<()> {
    let (nt, nq) = grid.shape();
    if nt < 3 || nq < 3 {
        return Err(Error::GridTooSmall(format!(
            "need at least 3x3 samples for central differences, got {nt}x{nq}"
        )));
    }
    field.validate()?;
    if grid.layout() == GridLayout::Radial {
        let spherical = match field {
            FieldConfig::Zero | FieldConfig::Coulomb { .. } => true,
            FieldConfig::ConstantPotential { a, .. } => a.iter().all(|&x| x == 0.0),
            _ => false,
        };
        if !spherical {
            return Err(Error::UnsupportedField(
                "radial grids need a spherically symmetric field".into(),
            ));
        }
    }
    Ok(())
}

fn local_jet(
    grid: &WaveGrid,
    params: &ParticleParams,
    field: &FieldConfig,
    it: usize,
    iq: usize,
) -> Result<LocalJet> {
    let dalembert = finite_diff_dalembert(grid, (it, iq), params.c)?;
    let (dt, dq) = central_gradient(grid, (it, iq))?;
    let pot = field.eval([grid.q(iq), 0.0, 0.0], grid.t(it), params.c)?;
    Ok(LocalJet {
        psi: grid.get(it, iq),
        dalembert,
        dt,
        dq,
        pot,
    })
}

/// `A^α ∂_α ψ = (φ/c) ∂_t ψ + A_x ∂_x ψ`; on radial grids `x` is the radius.
fn transport(jet: &LocalJet, c: f64) -> Complex64 {
    jet.dt * (jet.pot.phi / c) + jet.dq * jet.pot.a[0]
}

/// Maps every interior point through `f`, row-parallel, leaving the
/// boundary at `fallback`.
fn map_interior<F>(
    grid: &WaveGrid,
    fallback: impl Fn(usize, usize) -> Complex64 + Sync,
    f: F,
) -> Result<WaveGrid>
where
    F: Fn(usize, usize) -> Result<Complex64> + Sync,
{
    let (nt, nq) = grid.shape();
    let rows: Vec<Result<Vec<Complex64>>> = (0..nt)
        .into_par_iter()
        .map(|it| {
            (0..nq)
                .map(|iq| {
                    if grid.is_interior(it, iq) {
                        f(it, iq)
                    } else {
                        Ok(fallback(it, iq))
                    }
                })
                .collect()
        })
        .collect();
    let mut data = Vec::with_capacity(nt * nq);
    for row in rows {
        data.extend(row?);
    }
    WaveGrid::from_samples(*grid.meta(), data)
}

/// Applies `(∂_α - (iζ/ħc)A_α)(∂^α - (iζ/ħc)A^α)ψ - (mc/ħ)²ψ` by central
/// differences at every interior point.
pub fn kg_residual(
    grid: &WaveGrid,
    params: &ParticleParams,
    field: &FieldConfig,
) -> Result<KgResidual> {
    params.validate()?;
    check_grid(grid, field)?;
    let (c, hbar) = (params.c, params.hbar);
    let a = params.zeta / (hbar * c);
    let mass = (params.m * c / hbar).powi(2);
    let residual = map_interior(
        grid,
        |_, _| Complex64::new(0.0, 0.0),
        |it, iq| {
            let jet = local_jet(grid, params, field, it, iq)?;
            let div = jet.pot.four_divergence(c);
            Ok(jet.dalembert
                - I * a * (jet.psi * div + transport(&jet, c) * 2.0)
                - jet.psi * (a * a * jet.pot.square() + mass))
        },
    )?;
    let (mut max_norm, mut argmax) = (0.0, (1, 1));
    let (nt, nq) = grid.shape();
    for it in 1..nt - 1 {
        for iq in 1..nq - 1 {
            let v = residual.get(it, iq).norm();
            if v > max_norm {
                max_norm = v;
                argmax = (it, iq);
            }
        }
    }
    Ok(KgResidual {
        residual,
        max_norm,
        argmax,
    })
}

/// Samples the closed-form free kernel `K(t, r)` from a source event at the
/// origin onto a radial grid.
///
/// Every node must satisfy `τ² > margin · h²` with `h = max(h_t, h_q/c)`.
pub fn sample_kernel_grid(
    params: &ParticleParams,
    meta: GridMeta,
    n: f64,
    margin: f64,
) -> Result<WaveGrid> {
    params.validate()?;
    if meta.layout != GridLayout::Radial {
        return Err(Error::domain(
            "sample_kernel_grid",
            "the free kernel is sampled on radial grids",
        ));
    }
    let c = params.c;
    let h = meta.h_t.max(meta.h_q / c);
    let mut grid = WaveGrid::zeros(meta)?;
    for it in 0..meta.nt {
        for iq in 0..meta.nq {
            let (t, r) = (grid.t(it), grid.q(iq));
            let tau_sq = t * t - r * r / (c * c);
            if !(tau_sq > margin * h * h) {
                let kind = if tau_sq > 0.0 {
                    "timelike within the light-cone margin"
                } else {
                    "spacelike or lightlike"
                };
                return Err(Error::UnsupportedSeparation { kind, tau_sq });
            }
            grid.set(it, iq, closed_form_at(params, tau_sq.sqrt(), n)?);
        }
    }
    Ok(grid)
}

/// Output of [`short_time_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShortTimeStep {
    pub grid: WaveGrid,
    /// Row-major flags of the boundary cells copied through unchanged.
    pub passed_through: Vec<bool>,
}

impl ShortTimeStep {
    pub fn is_passed_through(&self, it: usize, iq: usize) -> bool {
        self.passed_through[it * self.grid.shape().1 + iq]
    }
}

/// One transition of parameter length `ε`:
/// `ψ ← (1 - iεmc²/2ħ)(1 - iεζ²A·A/2ħmc²)[ψ + ε(ζ/mc)A^α∂_αψ + ε(iħ/2m)(□ψ - (iζ/ħc)(∂_αA^α)ψ)]`.
pub fn short_time_step(
    grid: &WaveGrid,
    params: &ParticleParams,
    field: &FieldConfig,
    eps: f64,
) -> Result<ShortTimeStep> {
    params.validate()?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(
            "short_time_step",
            format!("step must be positive, got {eps}"),
        ));
    }
    check_grid(grid, field)?;
    let (m, c, hbar, zeta) = (params.m, params.c, params.hbar, params.zeta);
    let rest = Complex64::new(1.0, -eps * m * c * c / (2.0 * hbar));
    let next = map_interior(
        grid,
        |it, iq| grid.get(it, iq),
        |it, iq| {
            let jet = local_jet(grid, params, field, it, iq)?;
            let gauge = Complex64::new(
                1.0,
                -eps * zeta * zeta * jet.pot.square() / (2.0 * hbar * m * c * c),
            );
            let kinetic =
                jet.dalembert - I * (zeta / (hbar * c)) * jet.pot.four_divergence(c) * jet.psi;
            let bracket = jet.psi
                + transport(&jet, c) * (eps * zeta / (m * c))
                + I * (eps * hbar / (2.0 * m)) * kinetic;
            Ok(rest * gauge * bracket)
        },
    )?;
    let (nt, nq) = grid.shape();
    let passed_through = (0..nt * nq)
        .map(|k| !grid.is_interior(k / nq, k % nq))
        .collect();
    Ok(ShortTimeStep {
        grid: next,
        passed_through,
    })
}
