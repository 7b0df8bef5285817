//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use proptime::dynamics::*;
use proptime::fields::FieldConfig;
use proptime::grid::{GridLayout, GridMeta, WaveGrid};
use proptime::minkowski::*;
use proptime::numerics::{bessel_j1, bessel_pair, bessel_y1, OdeSpec, QuadratureSpec};
use proptime::propagator::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNITS: ParticleParams = ParticleParams {
    m: 1.0,
    zeta: 1.0,
    c: 1.0,
    hbar: 1.0,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ode(rel_tol: f64) -> OdeSpec {
    OdeSpec {
        rel_tol,
        ..OdeSpec::default()
    }
}

fn norm3(x: &[f64; 3]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Characteristic period `2π mc/(ζB)` of the proper-time parameter, with
/// `B = 1`; the free and electric scenarios use the same span.
const PERIOD: f64 = 2.0 * PI;

fn scenarios() -> [(&'static str, FieldConfig, [f64; 3]); 3] {
    [
        ("free", FieldConfig::Zero, [0.0, 0.6, 0.0]),
        (
            "uniform-B 0.9c",
            FieldConfig::UniformMagnetic { b: [0.0, 0.0, 1.0] },
            [0.0, 0.9, 0.0],
        ),
        (
            "uniform-E",
            FieldConfig::UniformElectric {
                e: [0.005, 0.0, 0.0],
            },
            [0.0, 0.3, 0.0],
        ),
    ]
}

fn run(field: &FieldConfig, v0: [f64; 3], periods: f64, spec: &OdeSpec) -> TrajectoryRecord {
    let z0 = on_shell_from_velocity(&UNITS, field, [1.0, 0.0, 0.0], v0, 0.0).unwrap();
    integrate_extended(&UNITS, &z0, field, [0.0, PERIOD * periods], spec).unwrap()
}

fn kinetic(field: &FieldConfig, z: &ExtendedPhasePoint) -> [f64; 3] {
    let pot = field.eval(z.q, z.t, UNITS.c).unwrap();
    std::array::from_fn(|i| z.p[i] - UNITS.zeta * pot.a[i] / UNITS.c)
}

fn constraint_conservation() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for (name, field, v0) in scenarios() {
        let rec = run(&field, v0, 100.0, &ode(1e-10));
        let (e, v) = rec.max_residuals();
        worst = worst.max(e.max(v));
        parts.push(format!("{name} {:.2e}", e.max(v)));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && secs < 5.0,
        format!("max residual {} (< 1e-9), {secs:.2} s", parts.join(", ")),
    )
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (_, field, v0) in scenarios() {
        let rec = run(&field, v0, 100.0, &ode(1e-12));
        let z0 = rec.samples[0];
        let t_end = rec.last().t;
        let conv =
            integrate_conventional(&UNITS, z0.q, z0.p, [0.0, t_end], &field, &ode(1e-12)).unwrap();
        let times: Vec<f64> = (0..=500)
            .map(|k| (t_end * k as f64 / 500.0).min(t_end))
            .collect();
        let ext = sample_at_times(&rec, &times).unwrap();
        for (a, &t) in ext.samples.iter().zip(&times) {
            let b = conv.at(t).unwrap();
            for i in 0..3 {
                worst = worst.max((a.q[i] - b.q[i]).abs() / norm3(&a.q).max(1.0));
                worst = worst.max((a.p[i] - b.p[i]).abs() / norm3(&a.p).max(1.0));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-6 && secs < 5.0,
        format!("max relative deviation {worst:.2e} (< 1e-6), {secs:.2} s"),
    )
}

fn analytic_oracles() -> Outcome {
    let b = 1.0;
    let field = FieldConfig::UniformMagnetic { b: [0.0, 0.0, b] };
    let rec = run(&field, [0.0, 0.9, 0.0], 10.0, &ode(1e-12));
    let gamma = 1.0 / (1.0f64 - 0.81).sqrt();
    let expected = UNITS.zeta * b / (gamma * UNITS.m * UNITS.c);
    let angle = |z: &ExtendedPhasePoint| {
        let k = kinetic(&field, z);
        k[1].atan2(k[0])
    };
    let (mut turned, mut prev) = (0.0, angle(&rec.samples[0]));
    for z in &rec.samples[1..] {
        let a = angle(z);
        let d = a - prev;
        turned += d - 2.0 * PI * (d / (2.0 * PI)).round();
        prev = a;
    }
    let omega = turned.abs() / (rec.last().t - rec.samples[0].t);
    let cyc = (omega - expected).abs() / expected;

    let e = 0.5;
    let field = FieldConfig::UniformElectric { e: [e, 0.0, 0.0] };
    let z0 = on_shell_from_velocity(&UNITS, &field, [0.0; 3], [0.0; 3], 0.0).unwrap();
    let rec = integrate_extended(&UNITS, &z0, &field, [0.0, 4.0], &ode(1e-12)).unwrap();
    let (c, a) = (UNITS.c, UNITS.zeta * e / UNITS.m);
    let hyp = rec
        .samples
        .iter()
        .map(|z| {
            let x = c * c / a * ((a * z.s / c).cosh() - 1.0);
            (z.q[0] - x).abs() / x.max(1.0)
        })
        .fold(0.0, f64::max);
    outcome(
        cyc < 1e-6 && hyp < 1e-8,
        format!("cyclotron {cyc:.2e} (< 1e-6), hyperbolic {hyp:.2e} (< 1e-8)"),
    )
}

fn gamma_identity() -> Outcome {
    let mut worst = 0.0f64;
    for (_, field, v0) in scenarios() {
        let rec = run(&field, v0, 100.0, &ode(1e-12));
        for (z, rate) in rec.samples.iter().zip(&rec.rates) {
            let pk = kinetic(&field, z);
            let g = (1.0 + norm3(&pk).powi(2) / (UNITS.m * UNITS.c).powi(2)).sqrt();
            worst = worst.max((rate[0] - g).abs() / g);
        }
    }
    outcome(
        worst < 1e-9,
        format!("max |dt/ds - gamma|/gamma {worst:.2e} (< 1e-9)"),
    )
}

fn random_beta(rng: &mut ChaCha8Rng) -> BoostParams {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let speed = rng.gen_range(0.0..=0.9);
    let r = (1.0 - z * z).sqrt();
    BoostParams::new([speed * r * phi.cos(), speed * r * phi.sin(), speed * z]).unwrap()
}

fn r3(rng: &mut ChaCha8Rng, s: f64) -> [f64; 3] {
    std::array::from_fn(|_| rng.gen_range(-s..s))
}

fn lorentz_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let params = ParticleParams {
        m: 1.3,
        zeta: 0.7,
        c: 2.0,
        hbar: 1.0,
    };
    let c = params.c;
    let (mut dh, mut dr) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let b = random_beta(&mut rng);
        let (a, phi) = (r3(&mut rng, 0.5), rng.gen_range(-0.5..0.5));
        let z = ExtendedPhasePoint {
            s: 0.0,
            t: rng.gen_range(-2.0..2.0),
            e: rng.gen_range(2.0..4.0) * c * c,
            q: r3(&mut rng, 2.0),
            p: r3(&mut rng, c),
        };
        let (q, t) = boost_coordinates(z.q, z.t, c, &b);
        let (p, e) = inverse_boost_momentum_energy(z.p, z.e, c, &b);
        let (a2, phi2) = inverse_boost_potentials(a, phi, &b);
        let zb = ExtendedPhasePoint { s: 0.0, t, e, q, p };
        let here = FieldConfig::ConstantPotential { phi, a };
        let there = FieldConfig::ConstantPotential { phi: phi2, a: a2 };
        let scale = params.rest_energy() + z.e * z.e / params.rest_energy();
        let h = extended_hamiltonian_em(&params, &z, &here).unwrap();
        let hb = extended_hamiltonian_em(&params, &zb, &there).unwrap();
        dh = dh.max((h - hb).abs() / scale);
        let r = constraint_residuals(&params, &z, &here).unwrap().residual_e;
        let rb = constraint_residuals(&params, &zb, &there)
            .unwrap()
            .residual_e;
        dr = dr.max((r - rb).abs() / (1.0 + r.abs()));
    }
    let mut dg = 0.0f64;
    for _ in 0..50 {
        let b = random_beta(&mut rng);
        let (q, pp) = (r3(&mut rng, 1.0), r3(&mut rng, 1.0));
        let (t, ep) = (rng.gen_range(-1.0..1.0), rng.gen_range(3.0..6.0));
        let g = boost_generating_gradients(q, pp, t, ep, c, &b, 1e-4);
        // matrix rules written out independently of the library
        let beta = b.beta();
        let gm = b.gamma();
        let bp: f64 = (0..3).map(|i| beta[i] * pp[i]).sum();
        let bq: f64 = (0..3).map(|i| beta[i] * q[i]).sum();
        let k = (gm - 1.0) / beta.iter().map(|x| x * x).sum::<f64>().max(1e-300);
        for i in 0..3 {
            let p = pp[i] + gm * beta[i] * ep / c + k * beta[i] * bp;
            let qp = q[i] + k * beta[i] * bq - gm * beta[i] * c * t;
            dg = dg.max((g.p[i] - p).abs()).max((g.q_primed[i] - qp).abs());
        }
        let e = gm * (ep + c * bp);
        let tp = gm * (t - bq / c);
        dg = dg.max((g.e - e).abs()).max((g.t_primed - tp).abs());
    }
    let probe = ExtendedPhasePoint {
        s: 0.0,
        t: 0.4,
        e: 2.0,
        q: [0.3, -0.2, 0.1],
        p: [0.5, 0.1, -0.3],
    };
    let mut canon = 0.0f64;
    for _ in 0..20 {
        let map = CanonicalMap::lorentz_boost(random_beta(&mut rng), 1.0);
        canon = canon.max(
            verify_extended_canonical(&map, &probe, 1e-4)
                .unwrap()
                .max_violation,
        );
    }
    let scaling = verify_extended_canonical(&CanonicalMap::scaling(2.0), &probe, 1e-4)
        .unwrap()
        .max_violation;
    outcome(
        dh < 1e-12 && dr < 1e-12 && dg < 1e-6 && canon < 1e-6 && scaling > 1e-6,
        format!(
            "H1 {dh:.2e}, mass shell {dr:.2e} (< 1e-12); gradients {dg:.2e} (< 1e-6); \
             boosts violate {canon:.2e}, scaling violates {scaling:.2e}"
        ),
    )
}

fn hessian() -> Outcome {
    let fields = [
        FieldConfig::Zero,
        FieldConfig::UniformMagnetic {
            b: [0.3, -0.2, 1.0],
        },
        FieldConfig::UniformElectric { e: [0.5, 0.1, 0.0] },
        FieldConfig::PlaneWave {
            amplitude: [0.0, 0.4, 0.0],
            wave_vector: [1.0, 0.0, 0.0],
            phase: 0.3,
        },
        FieldConfig::Coulomb {
            strength: 0.4,
            softening: 0.1,
        },
    ];
    let vel = ExtendedVelocity::from_velocity([0.3, -0.4, 0.2], 1.0).unwrap();
    let mut worst = 0.0f64;
    for m in [0.5, 1.0, 2.0] {
        let params = ParticleParams { m, ..UNITS };
        for f in &fields {
            let h = hessian_determinant(&params, &vel, [0.4, 0.1, -0.2], 0.3, f, 1e-3).unwrap();
            worst = worst.max((h.mixed - m.powi(4)).abs() / m.powi(4));
        }
    }
    outcome(
        worst < 1e-8,
        format!("max |det - m^4|/m^4 {worst:.2e} (< 1e-8)"),
    )
}

fn hankel_oracle(tau: f64) -> Complex64 {
    Complex64::new(oracle::j1(tau), -oracle::y1(tau)) / (4.0 * PI * tau)
}

fn kernel_cross_validation() -> Outcome {
    let start = Instant::now();
    let taus = [0.5, 1.0, 2.0, 5.0, 10.0];
    let rows = kernel_table(&UNITS, &taus, 1.0, &kernel_quadrature_spec()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut worst = 0.0f64;
    for r in &rows {
        let o = hankel_oracle(r.tau);
        worst = worst.max((r.quadrature.amplitude - o).norm() / o.norm());
        worst = worst.max(r.discrepancy);
    }
    outcome(
        worst < 1e-5 && secs < 10.0,
        format!("max relative discrepancy {worst:.2e} (< 1e-5), {secs:.2} s"),
    )
}

fn special_functions() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..50 {
        let x = 1e-3 * 1e6f64.powf(k as f64 / 49.0);
        let (j, y) = (bessel_j1(x).unwrap(), bessel_y1(x).unwrap());
        let (jo, yo) = (oracle::j1(x), oracle::y1(x));
        worst = worst
            .max((j - jo).abs() / jo.abs())
            .max((y - yo).abs() / yo.abs());
    }
    let mut wr = 0.0f64;
    for k in 0..50 {
        let x = 1e-3 * 1e6f64.powf(k as f64 / 49.0);
        let p = bessel_pair(x).unwrap();
        let expected = 2.0 / (PI * x);
        wr = wr.max((p.j1 * p.y0 - p.j0 * p.y1 - expected).abs() / expected);
    }
    outcome(
        worst < 1e-10 && wr < 1e-9,
        format!("oracle {worst:.2e} (< 1e-10), Wronskian {wr:.2e} (< 1e-9)"),
    )
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

fn plane_wave(k: f64, delta: f64, h: f64) -> WaveGrid {
    let omega = (k * k + 1.0 - delta).sqrt();
    WaveGrid::from_fn(square(GridLayout::OnePlusOne, 5, h, 0.3, -0.2), |t, x| {
        Complex64::new(0.0, k * x - omega * t).exp()
    })
    .unwrap()
}

fn orders(e: &[f64]) -> Vec<f64> {
    e.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn klein_gordon() -> Outcome {
    let kernel: Vec<f64> = [0.04f64, 0.02, 0.01]
        .iter()
        .map(|&h| {
            let n = (0.4f64 / h).round() as usize + 1;
            let meta = square(GridLayout::Radial, n, h, 4.0, 1.5);
            let g = sample_kernel_grid(&UNITS, meta, 1.0, LIGHT_CONE_MARGIN).unwrap();
            kg_residual(&g, &UNITS, &FieldConfig::Zero)
                .unwrap()
                .max_norm
        })
        .collect();
    let ratios: Vec<f64> = kernel.windows(2).map(|w| w[0] / w[1]).collect();
    let waves: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| {
            kg_residual(&plane_wave(1.1, 0.0, h), &UNITS, &FieldConfig::Zero)
                .unwrap()
                .max_norm
        })
        .collect();
    let wave_orders = orders(&waves);
    outcome(
        ratios.iter().all(|r| (r - 4.0).abs() <= 0.4) && wave_orders.iter().all(|p| *p > 1.9),
        format!("kernel ratios {ratios:.3?} (4 ± 10%), plane-wave orders {wave_orders:.3?}"),
    )
}

fn short_time_step_order() -> Outcome {
    let eps = [2e-2, 1e-2, 5e-3, 2.5e-3];
    let delta = 0.4;
    let off = plane_wave(0.7, delta, 1e-3);
    let on = plane_wave(0.7, 0.0, 1e-3);
    let (mut e_off, mut e_on) = (Vec::new(), Vec::new());
    for &x in &eps {
        let s = short_time_step(&off, &UNITS, &FieldConfig::Zero, x).unwrap();
        let linear = Complex64::new(1.0, -x * delta / (2.0 * UNITS.m * UNITS.hbar));
        e_off.push((s.grid.get(2, 2) / off.get(2, 2) - linear).norm());
        let s = short_time_step(&on, &UNITS, &FieldConfig::Zero, x).unwrap();
        e_on.push((s.grid.get(2, 2) / on.get(2, 2) - 1.0).norm());
    }
    let (p_off, p_on) = (orders(&e_off), orders(&e_on));
    let c_off = e_off
        .iter()
        .zip(&eps)
        .map(|(e, x)| e / (x * x))
        .fold(0.0, f64::max);
    outcome(
        p_off.iter().chain(&p_on).all(|p| *p >= 1.9),
        format!("off-shell orders {p_off:.3?} (C = {c_off:.3}), on-shell orders {p_on:.3?}"),
    )
}

fn hamilton_jacobi() -> Outcome {
    let action = |q: [f64; 3], t: f64| -(t * t - norm3(&q).powi(2)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let t = rng.gen_range(0.5..5.0);
        let q = r3(&mut rng, 1.0);
        let q = q.map(|x| x * 0.8 * t / 3f64.sqrt());
        let r = hj_residual(&UNITS, action, q, t, &FieldConfig::Zero, 1e-4).unwrap();
        worst = worst.max(r.abs());
    }
    outcome(
        worst < 1e-7,
        format!("max |H + dS/dt| {worst:.2e} (< 1e-7)"),
    )
}

fn gaussian_slice(d: f64, sigma: f64) -> Complex64 {
    (Complex64::new(1.0, 0.0) / Complex64::new(0.0, 2.0 * PI * sigma)).sqrt()
        * Complex64::cis(d * d / (2.0 * sigma))
}

fn semigroup() -> Outcome {
    let two = compose_slices(
        &UNITS,
        0.2,
        1.1,
        &[0.8, 1.3],
        &composition_quadrature_spec(),
    )
    .unwrap();
    let e2 = (two.value - gaussian_slice(0.9, 2.1)).norm() / gaussian_slice(0.9, 2.1).norm();
    let spec = QuadratureSpec {
        damping: 0.2,
        rel_tol: 1e-6,
        ..composition_quadrature_spec()
    };
    let three = compose_slices(&UNITS, -0.3, 0.4, &[0.5, 0.7, 0.6], &spec).unwrap();
    let e3 = (three.value - gaussian_slice(0.7, 1.8)).norm() / gaussian_slice(0.7, 1.8).norm();
    outcome(
        e2 < 1e-4 && e3 < 1e-4,
        format!("two slices {e2:.2e}, three slices {e3:.2e} (< 1e-4)"),
    )
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut codes = Vec::new();
    for d in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_proptime"))
            .args(["verify", "--suite", "all", "--seed", "42", "--out"])
            .arg(d.path())
            .output()
            .unwrap()
            .status;
        codes.push(status.code());
    }
    let secs = start.elapsed().as_secs_f64() / 2.0;
    let read = |i: usize| std::fs::read(dirs[i].path().join("verify_all.json")).unwrap_or_default();
    let same = read(0) == read(1) && !read(0).is_empty();
    outcome(
        codes.iter().all(|c| *c == Some(0)) && same && secs < 60.0,
        format!("exit codes {codes:?}, identical reports {same}, {secs:.2} s per run"),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("constraint conservation", constraint_conservation),
        ("extended/conventional equivalence", equivalence),
        ("analytic oracles", analytic_oracles),
        ("gamma identity", gamma_identity),
        ("Lorentz invariance", lorentz_invariance),
        ("Hessian determinant", hessian),
        ("kernel cross-validation", kernel_cross_validation),
        ("special functions", special_functions),
        ("Klein-Gordon consistency", klein_gordon),
        ("short-time step", short_time_step_order),
        ("Hamilton-Jacobi", hamilton_jacobi),
        ("semigroup", semigroup),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
