//! Run configuration: a single JSON document, optionally overridden from the
//! command line with `--set key=value` (dotted paths, last writer wins).
//! Unknown keys are rejected so typos fail loudly.

use std::fs;
use std::path::Path;

use lambda_pt_core::model::{EffectiveParams, PtParams, SystemParams};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

fn default_hbar() -> f64 {
    1.0
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Full lab-frame parameter set (enables lab-frame output).
    pub system: Option<SystemSection>,
    /// Reduced PT-form parameters; takes precedence over `system` when both
    /// are present.
    pub pt: Option<PtSection>,
    pub integrator: Option<IntegratorSection>,
    #[serde(default)]
    pub initial: InitialCondition,
    pub sweep: Option<SweepSection>,
    /// Relative half-width of the exceptional-point classification band.
    pub ep_tol_rel: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub omega_p: f64,
    pub omega_c: f64,
    pub v_p: f64,
    pub v_c: f64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

impl SystemSection {
    pub fn to_params(&self) -> SystemParams {
        SystemParams {
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            gamma3: self.gamma3,
            omega1: self.omega1,
            omega2: self.omega2,
            omega3: self.omega3,
            omega_p: self.omega_p,
            omega_c: self.omega_c,
            v_p: self.v_p,
            v_c: self.v_c,
            hbar: self.hbar,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtSection {
    pub gamma_pt: Option<f64>,
    pub v: Option<f64>,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCondition {
    /// Ground-state start `(1, 0, 0)`.
    #[default]
    Ground,
    /// Three `[re, im]` pairs.
    Custom([[f64; 2]; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    V,
    GammaPt,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::V => "v",
            SweepParameter::GammaPt => "gamma_pt",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

/// Load the config file (empty document if none), apply `--set` overrides in
/// order, then deserialize with unknown-key rejection.
pub fn load(config_path: Option<&Path>, sets: &[String]) -> Result<RunConfig, CliError> {
    let mut value = match config_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("{}: {e}", path.display()))
            })?
        }
        None => Value::Object(Default::default()),
    };
    for spec in sets {
        apply_override(&mut value, spec)?;
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}

fn apply_override(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got `{spec}`")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(CliError::Config(format!("--set: empty key in `{spec}`")));
    }
    // bare words become strings, anything JSON-parsable keeps its type
    let value = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| Value::String(raw.into()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let obj = node.as_object_mut().ok_or_else(|| {
            CliError::Config(format!("--set {key}: `{part}` is not an object"))
        })?;
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let leaf = parts.last().expect("non-empty key");
    node.as_object_mut()
        .ok_or_else(|| CliError::Config(format!("--set {key}: parent is not an object")))?
        .insert(leaf.to_string(), value);
    Ok(())
}

impl RunConfig {
    /// PT-form parameters, from the `pt` section or reduced from `system`.
    pub fn resolve_pt(&self) -> Result<PtParams, CliError> {
        if let Some(pt) = &self.pt {
            let gamma_pt = pt.gamma_pt.ok_or_else(|| {
                CliError::Config("pt.gamma_pt is required".into())
            })?;
            let v = pt
                .v
                .ok_or_else(|| CliError::Config("pt.v is required".into()))?;
            return PtParams::new(gamma_pt, v, pt.hbar)
                .map_err(|e| CliError::Config(e.to_string()));
        }
        if let Some(system) = &self.system {
            let eff = EffectiveParams::from_system(&system.to_params())
                .map_err(|e| CliError::Config(e.to_string()))?;
            return eff.pt_params().map_err(|e| CliError::Config(e.to_string()));
        }
        Err(CliError::Config(
            "a `pt` or `system` section is required".into(),
        ))
    }

    pub fn require_integrator(&self) -> Result<&IntegratorSection, CliError> {
        self.integrator
            .as_ref()
            .ok_or_else(|| CliError::Config("an `integrator` section is required".into()))
    }

    pub fn require_sweep(&self) -> Result<&SweepSection, CliError> {
        self.sweep
            .as_ref()
            .ok_or_else(|| CliError::Config("a `sweep` section is required".into()))
    }
}
