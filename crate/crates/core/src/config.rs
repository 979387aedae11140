//! JSON device configurations.
//!
//! ```json
//! {
//!   "notes": "free text",
//!   "device": { "kind": "waveguide_sps", "params": { ... } },
//!   "sweep": { "f_start": 4e9, "f_stop": 8e9, "points": 401 },
//!   "fit": { ... }
//! }
//! ```
//!
//! All values are SI base units. Unknown keys are rejected at every level.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{
    build_cavity_sps, build_purcell_filtered, build_waveguide_sps, CavitySpsParams, DeviceError, DeviceModel, Lumped,
    Netlist, Node, PurcellParams, WaveguideSpsParams,
};
use crate::fit::{FreeParameter, LumpedWaveguideParams, SumConstraint};
use crate::io::{load_impedance_table, parse_csv_impedance, parse_touchstone_s1p, ImpedanceTable, ImportError};
use crate::network::{ComplexImmittance, TransmissionLine};
use crate::sweep::{CSigmaMode, EjMode, SweepError, SweepOptions, TransmonSettings, ZinSource};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Import(#[from] ImportError),
}

impl ConfigError {
    fn from_device(prefix: &str, e: DeviceError) -> Self {
        match e {
            DeviceError::InvalidParameter { key, value, reason } => {
                ConfigError::Invalid { key: format!("{prefix}.{key}"), reason: format!("{value} {reason}") }
            }
            other => ConfigError::Invalid { key: prefix.to_string(), reason: other.to_string() },
        }
    }
}

/// A lumped element or line between two named nodes. `gnd` is ground.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetlistElement {
    Resistor { from: String, to: String, value: f64 },
    Capacitor { from: String, to: String, value: f64 },
    Inductor { from: String, to: String, value: f64 },
    Line { from: String, to: String, z0: f64, eps_eff: f64, length: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetlistParams {
    pub c_q: f64,
    /// Name of the junction node.
    pub junction: String,
    pub elements: Vec<NetlistElement>,
}

pub const GROUND: &str = "gnd";

impl NetlistParams {
    pub fn build(&self) -> Result<DeviceModel, DeviceError> {
        crate::device::require_positive("c_q", self.c_q)?;
        if self.junction == GROUND {
            return Err(DeviceError::Netlist("the junction cannot be ground".into()));
        }
        let mut net = Netlist::new();
        let mut nodes: HashMap<String, Node> = HashMap::new();
        nodes.insert(self.junction.clone(), net.junction());
        nodes.insert(GROUND.to_string(), Node::Ground);
        let mut node =
            |name: &str, net: &mut Netlist| *nodes.entry(name.to_string()).or_insert_with(|| net.add_node(name));
        for (i, el) in self.elements.iter().enumerate() {
            let key = format!("elements[{i}]");
            let res = match el {
                NetlistElement::Resistor { from, to, value } => {
                    let (a, b) = (node(from, &mut net), node(to, &mut net));
                    net.connect(a, b, Lumped::Resistor(*value))
                }
                NetlistElement::Capacitor { from, to, value } => {
                    let (a, b) = (node(from, &mut net), node(to, &mut net));
                    net.connect(a, b, Lumped::Capacitor(*value))
                }
                NetlistElement::Inductor { from, to, value } => {
                    let (a, b) = (node(from, &mut net), node(to, &mut net));
                    net.connect(a, b, Lumped::Inductor(*value))
                }
                NetlistElement::Line { from, to, z0, eps_eff, length } => {
                    let (a, b) = (node(from, &mut net), node(to, &mut net));
                    net.connect_line(a, b, TransmissionLine::new(*z0, *eps_eff, *length))
                }
            };
            res.map_err(|e| match e {
                DeviceError::InvalidParameter { key: k, value, .. } => {
                    let field =
                        if k.starts_with("line.") { k.trim_start_matches("line.").to_string() } else { "value".into() };
                    DeviceError::invalid(
                        format!("{key}.{field}"),
                        value,
                        "must be positive (lines: z0 > 0, eps_eff >= 1, length > 0)",
                    )
                }
                other => other,
            })?;
        }
        Ok(DeviceModel::nodal("netlist", self.c_q, net))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportFormat {
    Touchstone,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImportedParams {
    /// Relative paths resolve against the configuration file's directory.
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<ImportFormat>,
}

/// The `device` block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeviceSection {
    WaveguideSps(WaveguideSpsParams),
    CavitySps(CavitySpsParams),
    PurcellFiltered(PurcellParams),
    Netlist(NetlistParams),
    Imported(ImportedParams),
}

/// A built impedance source.
#[derive(Debug, Clone)]
pub enum Source {
    Model(DeviceModel),
    Table(ImpedanceTable),
}

impl ZinSource for Source {
    fn zin(&self, freq: f64) -> Result<ComplexImmittance, SweepError> {
        match self {
            Source::Model(m) => ZinSource::zin(m, freq),
            Source::Table(t) => ZinSource::zin(t, freq),
        }
    }

    fn frequency_range(&self) -> Option<(f64, f64)> {
        match self {
            Source::Model(_) => None,
            Source::Table(t) => t.frequency_range(),
        }
    }
}

pub fn read_table(path: &Path, format: Option<ImportFormat>) -> Result<ImpedanceTable, ConfigError> {
    let Some(format) = format else {
        return Ok(load_impedance_table(path)?);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let mut t = match format {
        ImportFormat::Touchstone => parse_touchstone_s1p(&text)?,
        ImportFormat::Csv => parse_csv_impedance(&text)?,
    };
    t.set_source(path.display().to_string());
    Ok(t)
}

impl DeviceSection {
    /// Builds the network model; imported tables are not models.
    pub fn build_model(&self) -> Result<DeviceModel, ConfigError> {
        let prefix = "device.params";
        let res = match self {
            DeviceSection::WaveguideSps(p) => build_waveguide_sps(p),
            DeviceSection::CavitySps(p) => build_cavity_sps(p),
            DeviceSection::PurcellFiltered(p) => build_purcell_filtered(p),
            DeviceSection::Netlist(p) => p.build(),
            DeviceSection::Imported(_) => {
                return Err(ConfigError::Invalid {
                    key: "device.kind".into(),
                    reason: "an imported table has no circuit parameters".into(),
                })
            }
        };
        res.map_err(|e| ConfigError::from_device(prefix, e))
    }

    pub fn build(&self, base_dir: &Path) -> Result<Source, ConfigError> {
        match self {
            DeviceSection::Imported(p) => Ok(Source::Table(read_table(&base_dir.join(&p.path), p.format)?)),
            _ => Ok(Source::Model(self.build_model()?)),
        }
    }
}

fn default_points() -> usize {
    401
}

/// The `sweep` block. The range may be omitted for imported tables, which
/// then sweep their full range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_stop: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub level: u32,
    #[serde(default)]
    pub e_j: EjMode,
    #[serde(default)]
    pub c_sigma: CSigmaMode,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            f_start: None,
            f_stop: None,
            points: default_points(),
            level: 0,
            e_j: EjMode::Pinned,
            c_sigma: CSigmaMode::Estimated,
        }
    }
}

impl SweepSection {
    pub fn settings(&self) -> TransmonSettings {
        TransmonSettings { level: self.level, e_j: self.e_j, c_sigma: self.c_sigma }
    }

    /// Resolves the grid; a missing bound falls back to `range`.
    pub fn options(&self, range: Option<(f64, f64)>) -> Result<SweepOptions, ConfigError> {
        let pick = |v: Option<f64>, fallback: Option<f64>, key: &str| {
            v.or(fallback)
                .ok_or_else(|| ConfigError::Invalid { key: format!("sweep.{key}"), reason: "required".into() })
        };
        let o = SweepOptions::new(
            pick(self.f_start, range.map(|r| r.0), "f_start")?,
            pick(self.f_stop, range.map(|r| r.1), "f_stop")?,
            self.points,
        )
        .with_settings(self.settings());
        o.validate().map_err(|e| ConfigError::Invalid { key: "sweep".into(), reason: e.to_string() })?;
        Ok(o)
    }
}

fn default_max_iterations() -> usize {
    crate::fit::DEFAULT_MAX_ITERATIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModelSection {
    /// Fit the parameters of the `device` block.
    Network,
    /// Fit the continuum rate `ω²Z0C_g²/C_q`.
    LumpedWaveguide(LumpedWaveguideParams),
}

/// The `fit` block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub model: FitModelSection,
    pub free: Vec<FreeParameter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<SumConstraint>,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub device: DeviceSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSection>,
}

impl DeviceConfig {
    /// Parses and validates a document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: DeviceConfig = serde_json::from_str(text).map_err(|e| ConfigError::Schema(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs always serialize")
    }

    /// Parameter checks that do not need external files.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !matches!(self.device, DeviceSection::Imported(_)) {
            self.device.build_model()?;
            self.sweep.options(None)?;
        } else if self.sweep.f_start.is_some() || self.sweep.f_stop.is_some() {
            // a partially given range is checked against the table later
            if let (Some(a), Some(b)) = (self.sweep.f_start, self.sweep.f_stop) {
                self.sweep.options(Some((a, b)))?;
            }
        }
        self.sweep
            .settings()
            .validate()
            .map_err(|e| ConfigError::Invalid { key: "sweep".into(), reason: e.to_string() })?;
        if let Some(fit) = &self.fit {
            crate::fit::validate_section(fit, &self.device)?;
        }
        Ok(())
    }
}
