//! Parametric builders for the waveguide, cavity and Purcell-filtered devices.

use serde::{Deserialize, Serialize};

use super::{
    require_non_negative, require_positive, validate_line, ChainElement, DeviceError, DeviceModel, Lumped, Netlist,
    OnePort,
};
use crate::network::TransmissionLine;

/// Port termination used when none is given (Ω).
pub const DEFAULT_TERMINATION: f64 = 50.0;
/// Stub-end fringing capacitance used when none is given (F).
pub const DEFAULT_C_OPEN: f64 = 0.01e-15;
/// Physical length of the cavity device's transmon (m).
pub const TRANSMON_LENGTH: f64 = 0.288e-3;

fn default_termination() -> f64 {
    DEFAULT_TERMINATION
}

fn default_c_open() -> f64 {
    DEFAULT_C_OPEN
}

fn line_element(line: TransmissionLine, length: f64) -> Option<ChainElement> {
    // zero-length connections are omitted
    (length > 0.0).then(|| ChainElement::Line(line.with_length(length)))
}

/// Transmon capacitively coupled to an emission line and, weakly, a control line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideSpsParams {
    pub c_q: f64,
    pub c_g_emit: f64,
    #[serde(default)]
    pub c_g_ctrl: f64,
    pub z0: f64,
    #[serde(default = "default_termination")]
    pub r_emit: f64,
    #[serde(default = "default_termination")]
    pub r_ctrl: f64,
}

impl WaveguideSpsParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        require_positive("c_q", self.c_q)?;
        require_positive("c_g_emit", self.c_g_emit)?;
        require_non_negative("c_g_ctrl", self.c_g_ctrl)?;
        require_positive("z0", self.z0)?;
        require_positive("r_emit", self.r_emit)?;
        require_positive("r_ctrl", self.r_ctrl)?;
        if self.c_g_ctrl >= self.c_g_emit {
            return Err(DeviceError::invalid(
                "c_g_ctrl",
                self.c_g_ctrl,
                "control coupling must be weaker than c_g_emit",
            ));
        }
        Ok(())
    }
}

/// Junction node: `C_q` ∥ (`C_g,emit` → `R_emit`) ∥ (`C_g,ctrl` → `R_ctrl`).
pub fn build_waveguide_sps(p: &WaveguideSpsParams) -> Result<DeviceModel, DeviceError> {
    p.validate()?;
    let coupled = |c: f64, r: f64| {
        OnePort::chain(vec![ChainElement::Series(Lumped::Capacitor(c))], OnePort::Lumped(Lumped::Resistor(r)))
    };
    let mut branches = vec![coupled(p.c_g_emit, p.r_emit)];
    if p.c_g_ctrl > 0.0 {
        branches.push(coupled(p.c_g_ctrl, p.r_ctrl));
    }
    Ok(DeviceModel::ladder("waveguide_sps", p.c_q, branches))
}

/// How the transmon couples onto the resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TapMode {
    /// All of `C_g` lands at `tap_position`.
    #[default]
    Point,
    /// `C_g/2` at each of `tap_position ± extent/2`.
    Split { extent: f64 },
}

/// Transmon on a half-wave resonator between an input and an output coupler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySpsParams {
    pub c_q: f64,
    pub c_g: f64,
    /// Input coupler.
    pub c1: f64,
    /// Output coupler.
    pub c2: f64,
    pub resonator: TransmissionLine,
    /// Distance of the tap from the input (`c1`) end (m).
    pub tap_position: f64,
    #[serde(default = "default_termination")]
    pub r1: f64,
    #[serde(default = "default_termination")]
    pub r2: f64,
    #[serde(default)]
    pub tap: TapMode,
}

impl CavitySpsParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        require_positive("c_q", self.c_q)?;
        require_positive("c_g", self.c_g)?;
        require_positive("c1", self.c1)?;
        require_positive("c2", self.c2)?;
        require_positive("r1", self.r1)?;
        require_positive("r2", self.r2)?;
        validate_line("resonator", &self.resonator)?;
        require_positive("resonator.length", self.resonator.length)?;
        let len = self.resonator.length;
        if !(self.tap_position.is_finite() && (0.0..=len).contains(&self.tap_position)) {
            return Err(DeviceError::invalid("tap_position", self.tap_position, format!("must lie in [0, {len}]")));
        }
        if let TapMode::Split { extent } = self.tap {
            require_positive("tap.split.extent", extent)?;
            if self.tap_position - extent / 2.0 < 0.0 || self.tap_position + extent / 2.0 > len {
                return Err(DeviceError::invalid("tap.split.extent", extent, "split taps must stay on the resonator"));
            }
        }
        Ok(())
    }

    /// Input-side section: line from a tap to `c1`, then `r1`.
    fn input_side(&self, length: f64) -> OnePort {
        let mut elements: Vec<ChainElement> = line_element(self.resonator, length).into_iter().collect();
        elements.push(ChainElement::Series(Lumped::Capacitor(self.c1)));
        OnePort::chain(elements, OnePort::Lumped(Lumped::Resistor(self.r1)))
    }

    /// Output-side section: line from a tap to `c2`, the output feedline
    /// (with any stubs), then `r2`.
    fn output_side(&self, length: f64, filter: Option<&PurcellParams>) -> OnePort {
        let mut elements: Vec<ChainElement> = line_element(self.resonator, length).into_iter().collect();
        elements.push(ChainElement::Series(Lumped::Capacitor(self.c2)));
        if let Some(pf) = filter {
            elements.extend(pf.feedline_elements());
        }
        OnePort::chain(elements, OnePort::Lumped(Lumped::Resistor(self.r2)))
    }

    fn build(&self, label: &str, filter: Option<&PurcellParams>) -> Result<DeviceModel, DeviceError> {
        let len = self.resonator.length;
        let x = self.tap_position;
        match self.tap {
            TapMode::Point => {
                let resonator_node = OnePort::Parallel(vec![self.input_side(x), self.output_side(len - x, filter)]);
                let branch = OnePort::chain(vec![ChainElement::Series(Lumped::Capacitor(self.c_g))], resonator_node);
                Ok(DeviceModel::ladder(label, self.c_q, vec![branch]))
            }
            TapMode::Split { extent } => {
                let mut net = Netlist::new();
                let jn = net.junction();
                let a = net.add_node("tap_in");
                let b = net.add_node("tap_out");
                net.connect(jn, a, Lumped::Capacitor(self.c_g / 2.0))?;
                net.connect(jn, b, Lumped::Capacitor(self.c_g / 2.0))?;
                net.connect_line(a, b, self.resonator.with_length(extent))?;
                net.attach(a, self.input_side(x - extent / 2.0))?;
                net.attach(b, self.output_side(len - x - extent / 2.0, filter))?;
                Ok(DeviceModel::nodal(label, self.c_q, net))
            }
        }
    }
}

/// `C_q` ∥ (`C_g` → resonator tap). The resonator splits at the tap into a
/// section of length `x` ending in `C1 → R1` and one of length `L − x` ending
/// in `C2 → R2`.
pub fn build_cavity_sps(p: &CavitySpsParams) -> Result<DeviceModel, DeviceError> {
    p.validate()?;
    p.build("cavity_sps", None)
}

/// Open-ended shunt stub on the output feedline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StubSpec {
    pub line: TransmissionLine,
    /// Attachment point measured along the feedline from `c2` (m).
    #[serde(default)]
    pub offset: f64,
}

/// Cross-section of the output feedline carrying the stubs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedLine {
    pub z0: f64,
    pub eps_eff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurcellParams {
    pub cavity: CavitySpsParams,
    #[serde(default)]
    pub stubs: Vec<StubSpec>,
    /// Defaults to the resonator cross-section.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedline: Option<FeedLine>,
    #[serde(default = "default_c_open")]
    pub c_open: f64,
}

impl PurcellParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        self.cavity.validate().map_err(|e| e.within("cavity"))?;
        require_positive("c_open", self.c_open)?;
        if let Some(feed) = &self.feedline {
            require_positive("feedline.z0", feed.z0)?;
            if !(feed.eps_eff.is_finite() && feed.eps_eff >= 1.0) {
                return Err(DeviceError::invalid("feedline.eps_eff", feed.eps_eff, "must be >= 1"));
            }
        }
        for (i, stub) in self.stubs.iter().enumerate() {
            validate_line(&format!("stubs[{i}].line"), &stub.line)?;
            require_non_negative(&format!("stubs[{i}].offset"), stub.offset)?;
        }
        Ok(())
    }

    fn feedline(&self) -> TransmissionLine {
        let feed =
            self.feedline.unwrap_or(FeedLine { z0: self.cavity.resonator.z0, eps_eff: self.cavity.resonator.eps_eff });
        TransmissionLine::new(feed.z0, feed.eps_eff, 0.0)
    }

    /// Feedline sections and stub shunts, ordered by offset from `c2`.
    fn feedline_elements(&self) -> Vec<ChainElement> {
        let feed = self.feedline();
        let mut stubs = self.stubs.clone();
        stubs.sort_by(|a, b| a.offset.total_cmp(&b.offset));
        let mut out = Vec::new();
        let mut position = 0.0;
        for stub in stubs {
            out.extend(line_element(feed, stub.offset - position));
            let stub_port = OnePort::chain(
                line_element(stub.line, stub.line.length).into_iter().collect(),
                OnePort::Lumped(Lumped::Capacitor(self.c_open)),
            );
            out.push(ChainElement::Shunt(stub_port));
            position = stub.offset;
        }
        out
    }
}

/// Cavity device with open-ended stubs shunted across the output feedline.
/// With no stubs this is exactly [`build_cavity_sps`].
pub fn build_purcell_filtered(p: &PurcellParams) -> Result<DeviceModel, DeviceError> {
    p.validate()?;
    if p.stubs.is_empty() {
        return p.cavity.build("purcell_filtered", None);
    }
    p.cavity.build("purcell_filtered", Some(p))
}
