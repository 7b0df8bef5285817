//! The `trajectory`, `kernel` and `boost` subcommands. Each writes its
//! artifacts into an output directory and returns the JSON summary it wrote.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use proptime::dynamics::{
    extended_hamiltonian_em, integrate_conventional, integrate_extended, on_shell_from_momentum,
    on_shell_from_velocity, reparameterize_to_t, ExtendedPhasePoint, TimeSample,
};
use proptime::fields::FieldConfig;
use proptime::minkowski::{
    boost_coordinates, inverse_boost_momentum_energy, inverse_boost_potentials,
    verify_extended_canonical, BoostParams, CanonicalMap,
};
use proptime::numerics::StepStats;
use proptime::propagator::{kernel_quadrature_spec, kernel_table, write_kernel_csv};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::random_beta;

/// Tolerance on `|H₁ - H₁'| / mc²` for the boost report.
pub const H1_INVARIANCE_TOL: f64 = 1e-12;
/// Tolerance on the canonical-verifier violation for the boost report.
pub const CANONICAL_TOL: f64 = 1e-6;

/// Where artifacts go: `--out`, else the config's `output.dir`, else `.`.
pub fn output_dir(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<PathBuf> {
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

fn write_table(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut w = create(path)?;
    let mut body = String::with_capacity(rows.len() * 200);
    body.push_str(header);
    body.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        body.push_str(&cells.join(","));
        body.push('\n');
    }
    w.write_all(body.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

fn time_row(z: &TimeSample) -> Vec<f64> {
    vec![z.t, z.e, z.q[0], z.q[1], z.q[2], z.p[0], z.p[1], z.p[2]]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySummary {
    pub command: &'static str,
    pub field: FieldConfig,
    pub samples: usize,
    pub s_end: f64,
    pub t_end: f64,
    pub max_residual_v: f64,
    pub max_residual_e: f64,
    pub e1_drift: f64,
    /// Largest relative deviation between the reparameterized extended and
    /// the conventional trajectory at the tabulated times.
    pub max_equivalence_deviation: f64,
    pub extended_stats: StepStats,
    pub conventional_stats: StepStats,
    pub files: Vec<String>,
}

/// Integrates the extended and the conventional equations of motion and
/// writes `<stem>_extended.csv`, `<stem>_reparameterized.csv`,
/// `<stem>_conventional.csv`, `<stem>_constraints.csv` and
/// `<stem>_trajectory.json`.
pub fn cmd_trajectory(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<TrajectorySummary> {
    let init = cfg.require(&cfg.initial, "initial")?;
    let block = cfg.require(&cfg.trajectory, "trajectory")?;
    let dir = output_dir(cfg, out)?;
    let (params, field, spec) = (cfg.params(), cfg.field, cfg.integrator());

    let z0 = match (init.velocity, init.momentum) {
        (Some(v), _) => on_shell_from_velocity(&params, &field, init.q, v, init.t)?,
        (_, Some(p)) => on_shell_from_momentum(&params, &field, init.q, p, init.t)?,
        _ => unreachable!("validated: exactly one of velocity and momentum"),
    };
    let rec = integrate_extended(&params, &z0, &field, [0.0, block.s_end], &spec)?;
    let reparam = reparameterize_to_t(&rec, block.samples)?;
    let t_end = reparam.samples.last().map_or(z0.t, |z| z.t);
    let conv = integrate_conventional(&params, z0.q, z0.p, [z0.t, t_end], &field, &spec)?;
    let conv_rows: Vec<TimeSample> = reparam
        .samples
        .iter()
        .map(|z| conv.at(z.t.min(t_end)))
        .collect::<proptime::Result<_>>()?;

    let norm = |x: &[f64; 3]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut deviation = 0.0f64;
    for (a, b) in reparam.samples.iter().zip(&conv_rows) {
        for i in 0..3 {
            deviation = deviation.max((a.q[i] - b.q[i]).abs() / norm(&a.q).max(1.0));
            deviation = deviation.max((a.p[i] - b.p[i]).abs() / norm(&a.p).max(1.0));
        }
    }

    let stem = &cfg.output.stem;
    let names = [
        format!("{stem}_extended.csv"),
        format!("{stem}_reparameterized.csv"),
        format!("{stem}_conventional.csv"),
        format!("{stem}_constraints.csv"),
        format!("{stem}_trajectory.json"),
    ];
    let path = |i: usize| dir.join(&names[i]);

    rec.write_csv(create(&path(0))?)?;
    reparam.write_csv(create(&path(1))?)?;
    let rows: Vec<Vec<f64>> = conv_rows.iter().map(time_row).collect();
    write_table(&path(2), "t,e,q1,q2,q3,p1,p2,p3", &rows)?;
    let rows: Vec<Vec<f64>> = rec
        .samples
        .iter()
        .zip(&rec.constraints)
        .map(|(z, r)| vec![z.s, z.t, r.residual_v, r.residual_e, r.e1])
        .collect();
    write_table(&path(3), "s,t,residual_v,residual_e,e1", &rows)?;

    let (max_e, max_v) = rec.max_residuals();
    let summary = TrajectorySummary {
        command: "trajectory",
        field,
        samples: rec.len(),
        s_end: block.s_end,
        t_end,
        max_residual_v: max_v,
        max_residual_e: max_e,
        e1_drift: rec.e1_drift(),
        max_equivalence_deviation: deviation,
        extended_stats: rec.stats,
        conventional_stats: conv.stats,
        files: names.to_vec(),
    };
    write_json(&path(4), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSummary {
    pub command: &'static str,
    pub n: f64,
    pub rows: usize,
    pub max_discrepancy: f64,
    pub max_quadrature_error: f64,
    pub evals: usize,
    pub files: Vec<String>,
}

/// Tabulates the closed-form and σ-quadrature kernels at rest-frame
/// separations of proper time `τ` into `<stem>_kernel.csv`.
pub fn cmd_kernel(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<KernelSummary> {
    let block = cfg.require(&cfg.kernel, "kernel")?;
    let taus = block.taus();
    if taus.is_empty() {
        return Err(CliError::Config(
            "at `kernel`: no proper times requested".into(),
        ));
    }
    if let Some(tau) = taus.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(CliError::Spacelike(format!(
            "requested tau = {tau} is not a time-like separation"
        )));
    }
    if !(block.n.is_finite() && block.n != 0.0) {
        return Err(CliError::Config(
            "at `kernel.n`: must be finite and nonzero".into(),
        ));
    }
    let dir = output_dir(cfg, out)?;
    let spec = cfg.quadrature.unwrap_or_else(kernel_quadrature_spec);
    let rows = kernel_table(&cfg.params(), &taus, block.n, &spec)?;

    let stem = &cfg.output.stem;
    let names = vec![format!("{stem}_kernel.csv"), format!("{stem}_kernel.json")];
    let csv = dir.join(&names[0]);
    let mut w = create(&csv)?;
    write_kernel_csv(&rows, &mut w)?;
    w.flush().map_err(|e| CliError::io(&csv, e))?;

    let summary = KernelSummary {
        command: "kernel",
        n: block.n,
        rows: rows.len(),
        max_discrepancy: rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max),
        max_quadrature_error: rows.iter().map(|r| r.quadrature_error).fold(0.0, f64::max),
        evals: rows.iter().map(|r| r.evals).sum(),
        files: names.clone(),
    };
    write_json(&dir.join(&names[1]), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn below(value: f64, threshold: f64) -> Self {
        Check {
            value,
            threshold,
            pass: value < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub q: [f64; 3],
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Momentum {
    pub p: [f64; 3],
    pub e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Potentials {
    pub phi: f64,
    pub a: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoostReport {
    pub command: &'static str,
    pub beta: [f64; 3],
    pub gamma: f64,
    pub event: Event,
    pub boosted_event: Event,
    pub momentum: Momentum,
    pub boosted_momentum: Momentum,
    pub potentials: Potentials,
    pub boosted_potentials: Potentials,
    pub h1: f64,
    pub boosted_h1: f64,
    pub h1_invariance: Check,
    pub canonical_violation: Check,
}

/// Boosts an on-shell phase-space point together with the potentials at its
/// event and writes `<stem>_boost.json`.
pub fn cmd_boost(cfg: &ScenarioConfig, out: Option<&Path>, seed: u64) -> Result<BoostReport> {
    let block = cfg.require(&cfg.boost, "boost")?;
    let beta = match block.beta {
        Some(b) => b,
        None => random_beta(&mut ChaCha8Rng::seed_from_u64(seed), block.max_speed),
    };
    let b =
        BoostParams::new(beta).map_err(|e| CliError::Config(format!("at `boost.beta`: {e}")))?;
    let dir = output_dir(cfg, out)?;
    let (params, field) = (cfg.params(), cfg.field);
    let c = params.c;

    let z = on_shell_from_momentum(&params, &field, block.q, block.p, block.t)?;
    let pot = field.eval(z.q, z.t, c)?;
    let (q2, t2) = boost_coordinates(z.q, z.t, c, &b);
    let (p2, e2) = inverse_boost_momentum_energy(z.p, z.e, c, &b);
    let (a2, phi2) = inverse_boost_potentials(pot.a, pot.phi, &b);
    let zb = ExtendedPhasePoint {
        s: z.s,
        t: t2,
        e: e2,
        q: q2,
        p: p2,
    };
    // H₁ depends on the field only through the potentials at the event.
    let here = FieldConfig::ConstantPotential {
        phi: pot.phi,
        a: pot.a,
    };
    let there = FieldConfig::ConstantPotential { phi: phi2, a: a2 };
    let h1 = extended_hamiltonian_em(&params, &z, &here)?;
    let h1b = extended_hamiltonian_em(&params, &zb, &there)?;
    let canonical = verify_extended_canonical(&CanonicalMap::lorentz_boost(b, c), &z, 1e-4)?;

    let report = BoostReport {
        command: "boost",
        beta,
        gamma: b.gamma(),
        event: Event { q: z.q, t: z.t },
        boosted_event: Event { q: q2, t: t2 },
        momentum: Momentum { p: z.p, e: z.e },
        boosted_momentum: Momentum { p: p2, e: e2 },
        potentials: Potentials {
            phi: pot.phi,
            a: pot.a,
        },
        boosted_potentials: Potentials { phi: phi2, a: a2 },
        h1,
        boosted_h1: h1b,
        h1_invariance: Check::below((h1 - h1b).abs() / params.rest_energy(), H1_INVARIANCE_TOL),
        canonical_violation: Check::below(canonical.max_violation, CANONICAL_TOL),
    };
    write_json(
        &dir.join(format!("{}_boost.json", cfg.output.stem)),
        &report,
    )?;
    Ok(report)
}
