//! Scenario files: a TOML document with a schema version, validated on load.

use std::path::{Path, PathBuf};

use proptime::dynamics::ParticleParams;
use proptime::fields::FieldConfig;
use proptime::numerics::{OdeSpec, QuadratureSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// `m`, `zeta`, `c`, `hbar`; all four are required when the table is
    /// present. Natural units when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<ParticleParams>,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<OdeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<BoostBlock>,
}

/// Starting event and either the velocity or the canonical momentum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub q: [f64; 3],
    #[serde(default)]
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// File-name prefix of every artifact.
    #[serde(default = "default_stem")]
    pub stem: String,
}

fn default_stem() -> String {
    "proptime".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            stem: default_stem(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryBlock {
    /// Final value of the proper-time parameter `s`.
    pub s_end: f64,
    /// Number of equally spaced coordinate times in the reparameterized and
    /// conventional tables.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    201
}

/// Proper times of the kernel table: an explicit list, a linear range, or
/// both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBlock {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tau: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<TauRange>,
    /// Normalization constant `N`.
    #[serde(default = "unit")]
    pub n: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl KernelBlock {
    pub fn taus(&self) -> Vec<f64> {
        let mut out = self.tau.clone();
        if let Some(r) = self.range {
            match r.count {
                0 => {}
                1 => out.push(r.min),
                n => {
                    out.extend((0..n).map(|k| r.min + (r.max - r.min) * k as f64 / (n - 1) as f64))
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostBlock {
    /// Boost velocity in units of `c`. Omit and set `random = true` to draw
    /// one from `--seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 3]>,
    #[serde(default)]
    pub random: bool,
    /// Largest `|β|` of a random boost.
    #[serde(default = "default_max_speed")]
    pub max_speed: f64,
    #[serde(default)]
    pub q: [f64; 3],
    #[serde(default = "unit")]
    pub t: f64,
    /// Canonical momentum; the energy is put on the mass shell.
    #[serde(default)]
    pub p: [f64; 3],
}

fn default_max_speed() -> f64 {
    0.9
}

impl ScenarioConfig {
    /// A configuration with every optional block left out.
    pub fn minimal() -> Self {
        ScenarioConfig {
            schema_version: SCHEMA_VERSION,
            units: None,
            field: FieldConfig::Zero,
            initial: None,
            integrator: None,
            quadrature: None,
            output: OutputConfig::default(),
            trajectory: None,
            kernel: None,
            boost: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| CliError::Config(e.to_string()))?;
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Canonical serialization: fixed key order, defaults written out.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs are always representable in TOML")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "at `schema_version`: unsupported version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let at = |path: &str, e: proptime::Error| CliError::Config(format!("at `{path}`: {e}"));
        self.params().validate().map_err(|e| at("units", e))?;
        self.field.validate().map_err(|e| at("field", e))?;
        if let Some(spec) = &self.integrator {
            spec.validate().map_err(|e| at("integrator", e))?;
        }
        if let Some(spec) = &self.quadrature {
            spec.validate().map_err(|e| at("quadrature", e))?;
        }
        if let Some(init) = &self.initial {
            if init.velocity.is_some() == init.momentum.is_some() {
                return Err(CliError::Config(
                    "at `initial`: give exactly one of `velocity` and `momentum`".into(),
                ));
            }
        }
        if let Some(traj) = &self.trajectory {
            if !(traj.s_end > 0.0 && traj.s_end.is_finite()) || traj.samples < 2 {
                return Err(CliError::Config(
                    "at `trajectory`: need s_end > 0 and at least two samples".into(),
                ));
            }
        }
        if let Some(b) = &self.boost {
            if b.beta.is_some() == b.random {
                return Err(CliError::Config(
                    "at `boost`: give either `beta` or `random = true`".into(),
                ));
            }
            if !(b.max_speed >= 0.0 && b.max_speed < 1.0) {
                return Err(CliError::Config(
                    "at `boost.max_speed`: must lie in [0, 1)".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> ParticleParams {
        self.units.unwrap_or_default()
    }

    pub fn integrator(&self) -> OdeSpec {
        self.integrator.unwrap_or_default()
    }

    pub fn require<'a, T>(&self, block: &'a Option<T>, name: &str) -> Result<&'a T> {
        block
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("at `{name}`: table is required")))
    }
}
