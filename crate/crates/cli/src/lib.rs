//! Command-line front end of `proptime`: scenario configuration, the
//! `trajectory`, `kernel`, `boost` and `verify` commands, and their exit-code
//! contract (0 success, 1 failed invariant, 2 configuration, 3 numerical
//! failure, 4 non-timelike separation).

pub mod commands;
pub mod config;
pub mod error;
pub mod verify;

pub use commands::{cmd_boost, cmd_kernel, cmd_trajectory, output_dir};
pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use verify::{cmd_verify, run_suite, Suite, SuiteOptions, VerifyReport};

use rand::Rng;

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "PROPTIME_THREADS";

/// A boost velocity with isotropic direction and speed uniform in
/// `[0, max_speed]`.
pub fn random_beta<R: Rng>(rng: &mut R, max_speed: f64) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let speed = rng.gen_range(0.0..=max_speed);
    let r = (1.0 - z * z).sqrt();
    [speed * r * phi.cos(), speed * r * phi.sin(), speed * z]
}
