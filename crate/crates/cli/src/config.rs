//! Experiment configuration: JSON, versioned, unknown keys rejected.

use crate::error::CliError;
use hfbdyn::hfb::Variant;
use hfbdyn::initial::InitialParams;
use hfbdyn::lattice::Lattice;
use hfbdyn::potential::PotentialParams;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub lattice: LatticeConfig,
    pub potential: PotentialConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
    /// Spin counts to sweep over; each entry replaces `lattice.n_sigma`.
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub appendix: AppendixConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub dim: usize,
    pub cutoff: i32,
    #[serde(default = "two")]
    pub spins: usize,
    pub n_sigma: Vec<usize>,
    /// Overrides the default ε = N^{-1/d}.
    #[serde(default)]
    pub eps: Option<f64>,
}

impl LatticeConfig {
    pub fn build(&self) -> hfbdyn::Result<Lattice> {
        Lattice::new(self.dim, self.cutoff, self.spins, self.n_sigma.clone(), self.eps)
    }

    pub fn with_counts(&self, n_sigma: &[usize]) -> hfbdyn::Result<Lattice> {
        Lattice::new(self.dim, self.cutoff, self.spins, n_sigma.to_vec(), self.eps)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: String,
    #[serde(default)]
    pub params: PotentialParams,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: String,
    #[serde(default)]
    pub params: InitialParams,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig { kind: "ffg".into(), params: InitialParams::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    #[serde(default = "hfb")]
    pub variant: Variant,
    #[serde(default = "midpoint")]
    pub integrator: String,
    #[serde(default = "one")]
    pub t_final: f64,
    /// Defaults to ε/20.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Log and snapshot every `stride` steps.
    #[serde(default = "one_usize")]
    pub stride: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig { variant: Variant::Hfb, integrator: midpoint(), t_final: 1.0, dt: None, stride: 1 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default)]
    pub enabled: bool,
    /// Largest mode count the exact oracle will accept.
    #[serde(default = "guard")]
    pub guard: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { enabled: false, guard: guard() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default)]
    pub directory: Option<String>,
    /// "csv" is always written; "json" adds a JSON copy of every table.
    #[serde(default = "csv")]
    pub formats: Vec<String>,
    /// Write states.json with (ω, α) at every logged time.
    #[serde(default)]
    pub snapshots: bool,
}

impl Default for OutputsConfig {
    fn default() -> Self {
        OutputsConfig { directory: None, formats: csv(), snapshots: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_sigma: Vec<Vec<usize>>,
    /// λ-state profile per entry, replacing `initial.params.profile`.
    #[serde(default)]
    pub profiles: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppendixConfig {
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub bounds: BoundsConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default = "trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { trials: trials(), seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    /// Momentum cutoff of the N grid lattices.
    #[serde(default = "bounds_cutoff")]
    pub cutoff: i32,
    /// Closed-shell particle counts per spin.
    #[serde(default = "bounds_counts")]
    pub counts: Vec<usize>,
    /// "shell" for the smooth λ-state, "ffg" for the unpaired reference.
    #[serde(default = "shell")]
    pub family: String,
    #[serde(default = "one")]
    pub shell_width: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig { cutoff: bounds_cutoff(), counts: bounds_counts(), family: shell(), shell_width: 1.0 }
    }
}

fn two() -> usize {
    2
}
fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn hfb() -> Variant {
    Variant::Hfb
}
fn midpoint() -> String {
    "unitary-midpoint".into()
}
fn guard() -> usize {
    16
}
fn csv() -> Vec<String> {
    vec!["csv".into()]
}
fn trials() -> usize {
    1000
}
fn bounds_cutoff() -> i32 {
    12
}
fn bounds_counts() -> Vec<usize> {
    vec![1, 3, 5, 7, 9]
}
fn shell() -> String {
    "shell".into()
}

impl ExperimentConfig {
    /// Parse, apply dot-path overrides, then validate against the schema.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::config("", format!("invalid JSON: {e}")))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let mut pointer = json_pointer(&e.path().to_string());
            let msg = e.inner().to_string();
            if let Some(field) = missing_field(&msg) {
                pointer = format!("{pointer}/{field}");
            }
            CliError::config(&pointer, msg)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(
                "/schema_version",
                format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        for f in &self.outputs.formats {
            if f != "csv" && f != "json" {
                return Err(CliError::config("/outputs/formats", format!("unknown format '{f}' (csv, json)")));
            }
        }
        if self.dynamics.stride == 0 {
            return Err(CliError::config("/dynamics/stride", "stride must be at least 1"));
        }
        if !(self.dynamics.t_final >= 0.0) {
            return Err(CliError::config("/dynamics/t_final", "t_final must be non-negative"));
        }
        if let Some(sw) = &self.sweep {
            if sw.profiles.as_ref().is_some_and(|p| p.len() != sw.n_sigma.len()) {
                return Err(CliError::config("/sweep/profiles", "need one profile per n_sigma entry"));
            }
        }
        if self.appendix.bounds.family != "shell" && self.appendix.bounds.family != "ffg" {
            return Err(CliError::config("/appendix/bounds/family", "family must be 'shell' or 'ffg'"));
        }
        Ok(())
    }

    /// Spin counts and initial-state parameters to run: the sweep entries if
    /// present, else the lattice block.
    pub fn entries(&self) -> Vec<(Vec<usize>, InitialParams)> {
        match &self.sweep {
            Some(s) => s
                .n_sigma
                .iter()
                .enumerate()
                .map(|(i, ns)| {
                    let mut p = self.initial.params.clone();
                    if let Some(profiles) = &s.profiles {
                        p.profile = Some(profiles[i].clone());
                    }
                    (ns.clone(), p)
                })
                .collect(),
            None => vec![(self.lattice.n_sigma.clone(), self.initial.params.clone())],
        }
    }

    /// sha256 of the canonical JSON form, ignoring where outputs go.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.outputs.directory = None;
        hex(&Sha256::digest(serde_json::to_vec(&c).expect("config serializes")))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// `a.b.0.c=value`; the value is read as JSON, falling back to a string.
pub fn apply_override(root: &mut Value, arg: &str) -> Result<(), CliError> {
    let (path, raw) = arg
        .split_once('=')
        .ok_or_else(|| CliError::config("", format!("override '{arg}' is not key=value")))?;
    let new: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::config("", format!("override path '{path}' has an empty segment")));
    }
    let mut cur = root;
    for (i, key) in keys.iter().enumerate() {
        let last = i + 1 == keys.len();
        let pointer = format!("/{}", keys[..=i].join("/"));
        if cur.is_null() {
            *cur = Value::Object(Default::default());
        }
        cur = match cur {
            Value::Array(items) => {
                let idx: usize = key
                    .parse()
                    .map_err(|_| CliError::config(&pointer, format!("'{key}' is not an array index")))?;
                items
                    .get_mut(idx)
                    .ok_or_else(|| CliError::config(&pointer, format!("index {idx} out of range")))?
            }
            Value::Object(map) => {
                if last {
                    map.insert(key.to_string(), Value::Null);
                }
                map.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            _ => return Err(CliError::config(&pointer, "cannot descend into a scalar")),
        };
    }
    *cur = new;
    Ok(())
}

fn json_pointer(path: &str) -> String {
    path.replace('[', ".").replace(']', "").split('.').filter(|s| !s.is_empty()).map(|s| format!("/{s}")).collect()
}

fn missing_field(msg: &str) -> Option<&str> {
    let rest = msg.strip_prefix("missing field `")?;
    rest.split('`').next()
}
