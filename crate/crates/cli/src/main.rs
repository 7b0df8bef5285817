use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proptime_cli::{
    cmd_boost, cmd_kernel, cmd_trajectory, cmd_verify, CliError, ScenarioConfig, Suite,
    SuiteOptions, THREADS_ENV,
};

#[derive(Parser)]
#[command(
    name = "proptime",
    version,
    about = "Proper-time mechanics and relativistic kernels"
)]
struct Cli {
    /// Worker threads for grid and table evaluation (default: all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate extended and conventional trajectories.
    Trajectory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate closed-form and quadrature kernels over proper time.
    Kernel {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boost a phase-space point and report the transformed quantities.
    Boost {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run invariant suites: dynamics, minkowski, propagator or all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("{THREADS_ENV}: {e}")))?;
    }
    match cli.command {
        Command::Trajectory { config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let s = cmd_trajectory(&cfg, out.as_deref())?;
            println!(
                "trajectory: {} samples, max residuals {:.3e} (v) {:.3e} (e), extended vs conventional {:.3e}",
                s.samples, s.max_residual_v, s.max_residual_e, s.max_equivalence_deviation
            );
        }
        Command::Kernel { config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let s = cmd_kernel(&cfg, out.as_deref())?;
            println!(
                "kernel: {} rows, max discrepancy {:.3e}",
                s.rows, s.max_discrepancy
            );
        }
        Command::Boost { config, out, seed } => {
            let cfg = ScenarioConfig::load(&config)?;
            let r = cmd_boost(&cfg, out.as_deref(), seed)?;
            println!(
                "boost: gamma {:.6}, H1 {:.3e} -> {:.3e} [{}], canonical violation {:.3e} [{}]",
                r.gamma,
                r.h1,
                r.boosted_h1,
                if r.h1_invariance.pass { "PASS" } else { "FAIL" },
                r.canonical_violation.value,
                if r.canonical_violation.pass {
                    "PASS"
                } else {
                    "FAIL"
                },
            );
        }
        Command::Verify { suite, seed, out } => {
            let suite: Suite = suite.parse()?;
            let opts = SuiteOptions {
                seed,
                ..SuiteOptions::default()
            };
            let report = cmd_verify(suite, &opts, &out)?;
            print!("{}", report.human());
            if !report.passed {
                return Err(CliError::Verify(report.failures()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("proptime: {e}");
            e.exit_code()
        }
    }
}
