//! Invariant suites run by `proptime verify`, with pinned tolerances and
//! seeds. Reports carry no timings, so equal seeds give identical bytes.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use proptime::dynamics::*;
use proptime::fields::FieldConfig;
use proptime::grid::{GridLayout, GridMeta, WaveGrid};
use proptime::minkowski::*;
use proptime::numerics::{bessel_pair, OdeSpec, QuadratureSpec};
use proptime::propagator::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::write_json;
use crate::error::{CliError, Result};
use crate::random_beta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Dynamics,
    Minkowski,
    Propagator,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Dynamics => "dynamics",
            Suite::Minkowski => "minkowski",
            Suite::Propagator => "propagator",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dynamics" => Ok(Suite::Dynamics),
            "minkowski" => Ok(Suite::Minkowski),
            "propagator" => Ok(Suite::Propagator),
            "all" => Ok(Suite::All),
            other => Err(CliError::Config(format!(
                "unknown suite `{other}`; expected dynamics, minkowski, propagator or all"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Metric used by the four-vector checks. Anything but
    /// [`Metric::MINKOWSKI`] should make the minkowski suite fail.
    pub metric: Metric,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            metric: Metric::MINKOWSKI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub id: String,
    pub value: Option<f64>,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Invariant {
    fn new(id: &str, measured: proptime::Result<f64>, relation: Relation, threshold: f64) -> Self {
        match measured {
            Ok(v) => Invariant {
                id: id.into(),
                value: v.is_finite().then_some(v),
                relation,
                threshold,
                pass: match relation {
                    Relation::Below => v < threshold,
                    Relation::AtLeast => v >= threshold,
                },
                error: None,
            },
            Err(e) => Invariant {
                id: id.into(),
                value: None,
                relation,
                threshold,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }

    fn below(id: &str, measured: proptime::Result<f64>, threshold: f64) -> Self {
        Self::new(id, measured, Relation::Below, threshold)
    }

    fn at_least(id: &str, measured: proptime::Result<f64>, threshold: f64) -> Self {
        Self::new(id, measured, Relation::AtLeast, threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub invariants: Vec<Invariant>,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<String> {
        self.invariants
            .iter()
            .filter(|i| !i.pass)
            .map(|i| i.id.clone())
            .collect()
    }

    /// One line per invariant: `PASS|FAIL id value relation threshold`.
    pub fn human(&self) -> String {
        let mut out = String::new();
        for inv in &self.invariants {
            let value = inv
                .value
                .map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"));
            let rel = match inv.relation {
                Relation::Below => "<",
                Relation::AtLeast => ">=",
            };
            out.push_str(&format!(
                "{} {} {value} {rel} {:.1e}",
                if inv.pass { "PASS" } else { "FAIL" },
                inv.id,
                inv.threshold
            ));
            if let Some(e) = &inv.error {
                out.push_str(&format!(" ({e})"));
            }
            out.push('\n');
        }
        let failed = self.failures().len();
        out.push_str(&format!(
            "{}: {} of {} invariants passed\n",
            self.suite,
            self.invariants.len() - failed,
            self.invariants.len()
        ));
        out
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> VerifyReport {
    let invariants = match suite {
        Suite::Dynamics => dynamics_suite(),
        Suite::Minkowski => minkowski_suite(opts),
        Suite::Propagator => propagator_suite(),
        Suite::All => {
            let mut all = dynamics_suite();
            all.extend(minkowski_suite(opts));
            all.extend(propagator_suite());
            all
        }
    };
    VerifyReport {
        suite,
        seed: opts.seed,
        passed: invariants.iter().all(|i| i.pass),
        invariants,
    }
}

/// Runs `suite`, writes `verify_<suite>.json` into `dir` and fails with the
/// identifiers of any violated invariant.
pub fn cmd_verify(suite: Suite, opts: &SuiteOptions, dir: &Path) -> Result<VerifyReport> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let report = run_suite(suite, opts);
    write_json(&dir.join(format!("verify_{suite}.json")), &report)?;
    Ok(report)
}

const UNITS: ParticleParams = ParticleParams {
    m: 1.0,
    zeta: 1.0,
    c: 1.0,
    hbar: 1.0,
};

fn ode(rel_tol: f64) -> OdeSpec {
    OdeSpec {
        rel_tol,
        abs_tol: rel_tol * 1e-2,
        ..OdeSpec::default()
    }
}

fn norm3(x: &[f64; 3]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn scenarios() -> [(&'static str, FieldConfig, [f64; 3]); 3] {
    [
        ("free", FieldConfig::Zero, [0.0, 0.6, 0.0]),
        (
            "magnetic",
            FieldConfig::UniformMagnetic { b: [0.0, 0.0, 1.0] },
            [0.0, 0.9, 0.0],
        ),
        (
            "electric",
            FieldConfig::UniformElectric {
                e: [0.005, 0.0, 0.0],
            },
            [0.0, 0.3, 0.0],
        ),
    ]
}

/// Integrates over `periods` characteristic periods of `2π mc/(ζB)` in `s`.
fn scenario_run(
    field: &FieldConfig,
    v0: [f64; 3],
    periods: f64,
) -> proptime::Result<TrajectoryRecord> {
    let z0 = on_shell_from_velocity(&UNITS, field, [1.0, 0.0, 0.0], v0, 0.0)?;
    integrate_extended(&UNITS, &z0, field, [0.0, 2.0 * PI * periods], &ode(1e-12))
}

fn kinetic(field: &FieldConfig, z: &ExtendedPhasePoint) -> proptime::Result<[f64; 3]> {
    let pot = field.eval(z.q, z.t, UNITS.c)?;
    Ok(std::array::from_fn(|i| {
        z.p[i] - UNITS.zeta * pot.a[i] / UNITS.c
    }))
}

fn equivalence(rec: &TrajectoryRecord, field: &FieldConfig) -> proptime::Result<f64> {
    let z0 = rec.samples[0];
    let t_end = rec.last().t;
    let conv = integrate_conventional(&UNITS, z0.q, z0.p, [z0.t, t_end], field, &ode(1e-12))?;
    let times: Vec<f64> = (0..=200)
        .map(|k| (t_end * k as f64 / 200.0).min(t_end))
        .collect();
    let ext = sample_at_times(rec, &times)?;
    let mut worst = 0.0f64;
    for (a, &t) in ext.samples.iter().zip(&times) {
        let b = conv.at(t)?;
        for i in 0..3 {
            worst = worst.max((a.q[i] - b.q[i]).abs() / norm3(&a.q).max(1.0));
            worst = worst.max((a.p[i] - b.p[i]).abs() / norm3(&a.p).max(1.0));
        }
    }
    Ok(worst)
}

fn gamma_identity(rec: &TrajectoryRecord, field: &FieldConfig) -> proptime::Result<f64> {
    let mut worst = 0.0f64;
    for (z, rate) in rec.samples.iter().zip(&rec.rates) {
        let pk = kinetic(field, z)?;
        let gamma = (1.0 + norm3(&pk).powi(2) / (UNITS.m * UNITS.c).powi(2)).sqrt();
        worst = worst.max((rate[0] - gamma).abs() / gamma);
    }
    Ok(worst)
}

fn cyclotron() -> proptime::Result<f64> {
    let field = FieldConfig::UniformMagnetic { b: [0.0, 0.0, 1.0] };
    let rec = scenario_run(&field, [0.0, 0.9, 0.0], 10.0)?;
    let expected = UNITS.zeta * 1.0 / (UNITS.m * UNITS.c) * (1.0f64 - 0.81).sqrt();
    let mut turned = 0.0;
    let angle = |z: &ExtendedPhasePoint| kinetic(&field, z).map(|k| k[1].atan2(k[0]));
    let mut prev = angle(&rec.samples[0])?;
    for z in &rec.samples[1..] {
        let a = angle(z)?;
        let d = a - prev;
        turned += d - 2.0 * PI * (d / (2.0 * PI)).round();
        prev = a;
    }
    let omega = turned.abs() / (rec.last().t - rec.samples[0].t);
    Ok((omega - expected).abs() / expected)
}

fn hyperbolic() -> proptime::Result<f64> {
    let e = 0.5;
    let field = FieldConfig::UniformElectric { e: [e, 0.0, 0.0] };
    let z0 = on_shell_from_velocity(&UNITS, &field, [0.0; 3], [0.0; 3], 0.0)?;
    let rec = integrate_extended(&UNITS, &z0, &field, [0.0, 4.0], &ode(1e-12))?;
    let (c, a) = (UNITS.c, UNITS.zeta * e / UNITS.m);
    Ok(rec
        .samples
        .iter()
        .map(|z| {
            let x = c * c / a * ((a * z.s / c).cosh() - 1.0);
            (z.q[0] - x).abs() / x.max(1.0)
        })
        .fold(0.0, f64::max))
}

fn hessian() -> proptime::Result<f64> {
    let fields = [
        FieldConfig::Zero,
        FieldConfig::UniformMagnetic {
            b: [0.3, -0.2, 1.0],
        },
        FieldConfig::UniformElectric { e: [0.5, 0.1, 0.0] },
    ];
    let vel = ExtendedVelocity::from_velocity([0.3, -0.4, 0.2], UNITS.c)?;
    let mut worst = 0.0f64;
    for m in [0.5, 1.0, 2.0] {
        let params = ParticleParams { m, ..UNITS };
        for field in &fields {
            let h = hessian_determinant(&params, &vel, [0.4, 0.1, -0.2], 0.3, field, 1e-3)?;
            worst = worst.max((h.mixed - m.powi(4)).abs() / m.powi(4));
        }
    }
    Ok(worst)
}

fn hamilton_jacobi() -> proptime::Result<f64> {
    let (m, c) = (UNITS.m, UNITS.c);
    let action = |q: [f64; 3], t: f64| -m * c * c * (t * t - norm3(&q).powi(2) / (c * c)).sqrt();
    let probes = [
        ([0.1, 0.2, -0.3], 1.0),
        ([1.0, 0.0, 0.0], 2.5),
        ([-2.0, 1.5, 0.7], 4.0),
    ];
    let mut worst = 0.0f64;
    for (q, t) in probes {
        worst = worst.max(hj_residual(&UNITS, action, q, t, &FieldConfig::Zero, 1e-4)?.abs());
    }
    Ok(worst)
}

fn dynamics_suite() -> Vec<Invariant> {
    let mut out = Vec::new();
    for (name, field, v0) in scenarios() {
        let long = scenario_run(&field, v0, 100.0);
        out.push(Invariant::below(
            &format!("dynamics.constraints.{name}"),
            long.map(|r| {
                let (e, v) = r.max_residuals();
                e.max(v)
            }),
            1e-9,
        ));
        let short = scenario_run(&field, v0, 10.0);
        out.push(Invariant::below(
            &format!("dynamics.equivalence.{name}"),
            short.clone().and_then(|r| equivalence(&r, &field)),
            1e-6,
        ));
        out.push(Invariant::below(
            &format!("dynamics.gamma_identity.{name}"),
            short.and_then(|r| gamma_identity(&r, &field)),
            1e-9,
        ));
    }
    out.push(Invariant::below(
        "dynamics.cyclotron_frequency",
        cyclotron(),
        1e-6,
    ));
    out.push(Invariant::below(
        "dynamics.hyperbolic_motion",
        hyperbolic(),
        1e-8,
    ));
    out.push(Invariant::below("dynamics.hessian_m4", hessian(), 1e-8));
    out.push(Invariant::below(
        "dynamics.hamilton_jacobi",
        hamilton_jacobi(),
        1e-7,
    ));
    let legendre = ExtendedVelocity::from_velocity([0.5, 0.1, 0.0], UNITS.c).and_then(|vel| {
        let field = FieldConfig::UniformMagnetic { b: [0.0, 0.0, 2.0] };
        legendre_roundtrip_check(&UNITS, &vel, [0.2, 0.3, 0.0], 0.0, &field)
            .map(|r| r.residual.abs())
    });
    out.push(Invariant::below(
        "dynamics.legendre_roundtrip",
        legendre,
        1e-10,
    ));
    out
}

fn random3(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    std::array::from_fn(|_| rng.gen_range(-scale..scale))
}

fn minkowski_suite(opts: &SuiteOptions) -> Vec<Invariant> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let metric = opts.metric;
    let params = ParticleParams {
        m: 1.3,
        zeta: 0.7,
        c: 2.0,
        hbar: 1.0,
    };
    let c = params.c;
    let (mut h1_dev, mut shell_dev, mut interval_dev, mut mass_dev) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut failure = None;
    for _ in 0..100 {
        let b = BoostParams::new(random_beta(&mut rng, 0.9)).expect("|beta| <= 0.9");
        let (a, phi) = (random3(&mut rng, 0.5), rng.gen_range(-0.5..0.5));
        let z = ExtendedPhasePoint {
            s: 0.0,
            t: rng.gen_range(-2.0..2.0),
            e: rng.gen_range(2.0..4.0) * c * c,
            q: random3(&mut rng, 2.0),
            p: random3(&mut rng, c),
        };
        let (q, t) = boost_coordinates(z.q, z.t, c, &b);
        let (p, e) = inverse_boost_momentum_energy(z.p, z.e, c, &b);
        let (a2, phi2) = inverse_boost_potentials(a, phi, &b);
        let zb = ExtendedPhasePoint { s: 0.0, t, e, q, p };
        let here = FieldConfig::ConstantPotential { phi, a };
        let there = FieldConfig::ConstantPotential { phi: phi2, a: a2 };
        let measured = (|| -> proptime::Result<(f64, f64)> {
            let scale = params.rest_energy() + z.e * z.e / params.rest_energy();
            let h = extended_hamiltonian_em(&params, &z, &here)?;
            let hb = extended_hamiltonian_em(&params, &zb, &there)?;
            let r = constraint_residuals(&params, &z, &here)?.residual_e;
            let rb = constraint_residuals(&params, &zb, &there)?.residual_e;
            Ok(((h - hb).abs() / scale, (r - rb).abs() / (1.0 + r.abs())))
        })();
        match measured {
            Ok((dh, dr)) => {
                h1_dev = h1_dev.max(dh);
                shell_dev = shell_dev.max(dr);
            }
            Err(e) => failure = Some(e),
        }

        let x = FourVector::from_parts(z.t * c, z.q);
        let y = FourVector::from_parts(z.e / c, z.p);
        let scale = x.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
            * y.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
            * b.gamma().powi(2);
        let before = metric.dot(&x, &y);
        let after = metric.dot(&b.apply(&x), &b.apply(&y));
        interval_dev = interval_dev.max((before - after).abs() / scale);

        // an on-shell four-momentum has p·p = -m²c²
        let pk = random3(&mut rng, c);
        let mc = params.m * c;
        let energy_over_c = (mc * mc + norm3(&pk).powi(2)).sqrt();
        let four = b.apply(&FourVector::from_parts(energy_over_c, pk));
        mass_dev = mass_dev.max((metric.dot(&four, &four) + mc * mc).abs() / (mc * mc));
    }
    let h1 = failure.clone().map_or(Ok(h1_dev), Err);
    let shell = failure.map_or(Ok(shell_dev), Err);

    let mut grad_dev = 0.0f64;
    for _ in 0..50 {
        let b = BoostParams::new(random_beta(&mut rng, 0.9)).expect("|beta| <= 0.9");
        let q = random3(&mut rng, 1.0);
        let pp = random3(&mut rng, 1.0);
        let t = rng.gen_range(-1.0..1.0);
        let ep = rng.gen_range(3.0..6.0);
        let g = boost_generating_gradients(q, pp, t, ep, c, &b, 1e-4);
        let (p, e) = boost_momentum_energy(pp, ep, c, &b);
        let (qp, tp) = boost_coordinates(q, t, c, &b);
        for i in 0..3 {
            grad_dev = grad_dev
                .max((g.p[i] - p[i]).abs())
                .max((g.q_primed[i] - qp[i]).abs());
        }
        grad_dev = grad_dev.max((g.e - e).abs()).max((g.t_primed - tp).abs());
    }

    let probe = ExtendedPhasePoint {
        s: 0.0,
        t: 0.4,
        e: 2.0,
        q: [0.3, -0.2, 0.1],
        p: [0.5, 0.1, -0.3],
    };
    let mut canon: proptime::Result<f64> = Ok(0.0);
    for _ in 0..20 {
        let map = CanonicalMap::lorentz_boost(
            BoostParams::new(random_beta(&mut rng, 0.9)).expect("|beta| <= 0.9"),
            1.0,
        );
        canon = canon.and_then(|worst| {
            verify_extended_canonical(&map, &probe, 1e-4).map(|r| worst.max(r.max_violation))
        });
    }
    let scaling = verify_extended_canonical(&CanonicalMap::scaling(2.0), &probe, 1e-4)
        .map(|r| r.max_violation);

    vec![
        Invariant::below("minkowski.h1_invariance", h1, 1e-12),
        Invariant::below("minkowski.mass_shell_invariance", shell, 1e-12),
        Invariant::below("minkowski.interval_invariance", Ok(interval_dev), 1e-12),
        Invariant::below("minkowski.mass_shell_sign", Ok(mass_dev), 1e-12),
        Invariant::below("minkowski.generating_gradients", Ok(grad_dev), 1e-6),
        Invariant::below("minkowski.canonical_boosts", canon, 1e-6),
        Invariant::at_least("minkowski.canonical_rejects_scaling", scaling, 1e-6),
    ]
}

fn square(layout: GridLayout, n: usize, h: f64, t0: f64, q0: f64) -> GridMeta {
    GridMeta {
        layout,
        nt: n,
        nq: n,
        h_t: h,
        h_q: h,
        t0,
        q0,
    }
}

fn plane_wave(k: f64, delta: f64, h: f64) -> proptime::Result<WaveGrid> {
    let omega = (k * k + 1.0 - delta).sqrt();
    WaveGrid::from_fn(square(GridLayout::OnePlusOne, 5, h, 0.3, -0.2), |t, x| {
        Complex64::new(0.0, k * x - omega * t).exp()
    })
}

fn kernel_kg_ratio() -> proptime::Result<f64> {
    let residual = |h: f64| -> proptime::Result<f64> {
        let n = (0.4 / h).round() as usize + 1;
        let g = sample_kernel_grid(
            &UNITS,
            square(GridLayout::Radial, n, h, 4.0, 1.5),
            1.0,
            LIGHT_CONE_MARGIN,
        )?;
        Ok(kg_residual(&g, &UNITS, &FieldConfig::Zero)?.max_norm)
    };
    let r = [residual(0.04)?, residual(0.02)?, residual(0.01)?];
    Ok(r.windows(2)
        .map(|w| ((w[0] / w[1]) - 4.0).abs() / 4.0)
        .fold(0.0, f64::max))
}

fn least_order(errors: &[f64]) -> f64 {
    errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .fold(f64::INFINITY, f64::min)
}

fn plane_wave_order() -> proptime::Result<f64> {
    let mut r = Vec::new();
    for h in [0.04, 0.02, 0.01] {
        r.push(kg_residual(&plane_wave(1.1, 0.0, h)?, &UNITS, &FieldConfig::Zero)?.max_norm);
    }
    Ok(least_order(&r))
}

fn step_order(delta: f64) -> proptime::Result<f64> {
    let g = plane_wave(0.7, delta, 1e-3)?;
    let mut e = Vec::new();
    for eps in [2e-2, 1e-2, 5e-3] {
        let s = short_time_step(&g, &UNITS, &FieldConfig::Zero, eps)?;
        let ratio = s.grid.get(2, 2) / g.get(2, 2);
        let linear = Complex64::new(1.0, -eps * delta / (2.0 * UNITS.m * UNITS.hbar));
        e.push((ratio - linear).norm());
    }
    Ok(least_order(&e))
}

fn wronskian() -> proptime::Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..200 {
        let x = 1e-3 * 1e6f64.powf(k as f64 / 199.0);
        let p = bessel_pair(x)?;
        let expected = 2.0 / (PI * x);
        worst = worst.max((p.j1 * p.y0 - p.j0 * p.y1 - expected).abs() / expected);
    }
    Ok(worst)
}

fn semigroup() -> proptime::Result<f64> {
    let (s1, s2, qa, qb) = (0.8, 1.3, 0.2, 1.1);
    let r = compose_slices(&UNITS, qa, qb, &[s1, s2], &composition_quadrature_spec())?;
    let exact = kernel_sigma_slice(&UNITS, qa, qb, s1 + s2)?;
    Ok((r.value - exact).norm() / exact.norm())
}

fn kernel_invariance() -> proptime::Result<f64> {
    let c = 2.0;
    let params = ParticleParams { c, ..UNITS };
    let (qa, ta, qb, tb) = ([0.1, 0.2, -0.3], 0.5, [0.9, -0.4, 0.2], 2.9);
    let base = kernel_closed_form(
        &params,
        &SpacetimeSeparation::between(qa, ta, qb, tb, c),
        1.0,
    )?;
    let mut worst = 0.0f64;
    for beta in [[0.6, 0.0, 0.0], [0.3, -0.5, 0.2], [0.0, 0.0, -0.89]] {
        let b = BoostParams::new(beta)?;
        let (qa2, ta2) = boost_coordinates(qa, ta, c, &b);
        let (qb2, tb2) = boost_coordinates(qb, tb, c, &b);
        let k = kernel_closed_form(
            &params,
            &SpacetimeSeparation::between(qa2, ta2, qb2, tb2, c),
            1.0,
        )?;
        worst = worst.max((k.amplitude - base.amplitude).norm() / base.amplitude.norm());
    }
    Ok(worst)
}

fn propagator_suite() -> Vec<Invariant> {
    let quadrature = kernel_table(
        &UNITS,
        &[0.5, 1.0, 2.0, 5.0, 10.0],
        1.0,
        &kernel_quadrature_spec(),
    )
    .map(|rows| rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max));
    let calibration = calibrate_norm(
        &PacketSpec::gaussian(6.0),
        &UNITS,
        &QuadratureSpec {
            rel_tol: 1e-12,
            ..QuadratureSpec::default()
        },
    )
    .map(|c| c.residual);
    vec![
        Invariant::below("propagator.kernel_quadrature", quadrature, 1e-5),
        Invariant::below(
            "propagator.kernel_lorentz_invariance",
            kernel_invariance(),
            1e-12,
        ),
        Invariant::below("propagator.bessel_wronskian", wronskian(), 1e-9),
        Invariant::below("propagator.kernel_kg_convergence", kernel_kg_ratio(), 0.1),
        Invariant::at_least("propagator.plane_wave_kg_order", plane_wave_order(), 1.9),
        Invariant::at_least(
            "propagator.short_step_order.off_shell",
            step_order(0.4),
            1.9,
        ),
        Invariant::at_least("propagator.short_step_order.on_shell", step_order(0.0), 1.9),
        Invariant::below("propagator.semigroup", semigroup(), 1e-4),
        Invariant::below("propagator.norm_calibration", calibration, 1e-6),
    ]
}
