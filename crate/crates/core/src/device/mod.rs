//! One-port network models of the electromagnetic environment seen by the
//! Josephson junction.
//!
//! A [`DeviceModel`] is the qubit shunt capacitance `C_q` in parallel with
//! either a set of ladder branches (trees of cascaded two-ports reduced with
//! chain matrices) or a general nodal netlist.

mod builders;
mod netlist;

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::angular;
use crate::network::{parallel_combine, AbcdMatrix, ComplexImmittance, TransmissionLine};

pub use builders::{
    build_cavity_sps, build_purcell_filtered, build_waveguide_sps, CavitySpsParams, FeedLine, PurcellParams, StubSpec,
    TapMode, WaveguideSpsParams, DEFAULT_C_OPEN, DEFAULT_TERMINATION, TRANSMON_LENGTH,
};
pub use netlist::{NetElement, Netlist, Node};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("invalid parameter `{key}` = {value}: {reason}")]
    InvalidParameter { key: String, value: f64, reason: String },
    #[error("frequency must be positive and finite, got {0}")]
    Frequency(f64),
    #[error("line between `{a}` and `{b}` is an exact multiple of a half wavelength at {freq} Hz")]
    SingularLine { a: String, b: String, freq: f64 },
    #[error("netlist: {0}")]
    Netlist(String),
}

impl DeviceError {
    pub(crate) fn invalid(key: impl Into<String>, value: f64, reason: impl Into<String>) -> Self {
        Self::InvalidParameter { key: key.into(), value, reason: reason.into() }
    }

    /// Prefixes the parameter key, e.g. `c_g` → `cavity.c_g`.
    pub fn within(self, prefix: &str) -> Self {
        match self {
            Self::InvalidParameter { key, value, reason } => {
                Self::InvalidParameter { key: format!("{prefix}.{key}"), value, reason }
            }
            other => other,
        }
    }
}

pub(crate) fn require_positive(key: &str, value: f64) -> Result<(), DeviceError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(DeviceError::invalid(key, value, "must be positive"))
    }
}

pub(crate) fn require_non_negative(key: &str, value: f64) -> Result<(), DeviceError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(DeviceError::invalid(key, value, "must be non-negative"))
    }
}

pub(crate) fn validate_line(key: &str, line: &TransmissionLine) -> Result<(), DeviceError> {
    require_positive(&format!("{key}.z0"), line.z0)?;
    if !(line.eps_eff.is_finite() && line.eps_eff >= 1.0) {
        return Err(DeviceError::invalid(format!("{key}.eps_eff"), line.eps_eff, "must be >= 1"));
    }
    require_non_negative(&format!("{key}.length"), line.length)
}

/// Lumped two-terminal element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lumped {
    Resistor(f64),
    Capacitor(f64),
    Inductor(f64),
}

impl Lumped {
    pub fn impedance(&self, freq: f64) -> ComplexImmittance {
        let omega = angular(freq);
        match *self {
            Lumped::Resistor(r) => ComplexImmittance::impedance(r, 0.0),
            Lumped::Capacitor(0.0) => ComplexImmittance::ResonantOpen,
            Lumped::Capacitor(c) => ComplexImmittance::Impedance(Complex64::new(0.0, omega * c).inv()),
            Lumped::Inductor(l) => ComplexImmittance::impedance(0.0, omega * l),
        }
    }

    pub fn is_resistive(&self) -> bool {
        matches!(self, Lumped::Resistor(_))
    }
}

/// Two-port element of a ladder cascade.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainElement {
    Series(Lumped),
    /// A one-port hung from the through-path to ground (stubs, shunt capacitors).
    Shunt(OnePort),
    Line(TransmissionLine),
}

/// Tree-structured one-port referenced to ground.
#[derive(Debug, Clone, PartialEq)]
pub enum OnePort {
    Open,
    Short,
    Lumped(Lumped),
    /// Elements listed from the input side toward `load`.
    Chain {
        elements: Vec<ChainElement>,
        load: Box<OnePort>,
    },
    Parallel(Vec<OnePort>),
}

impl OnePort {
    pub fn chain(elements: Vec<ChainElement>, load: OnePort) -> Self {
        OnePort::Chain { elements, load: Box::new(load) }
    }

    pub fn impedance(&self, freq: f64) -> ComplexImmittance {
        match self {
            OnePort::Open => ComplexImmittance::ResonantOpen,
            OnePort::Short => ComplexImmittance::short(),
            OnePort::Lumped(l) => l.impedance(freq),
            OnePort::Chain { elements, load } => {
                elements.iter().rev().fold(load.impedance(freq), |z, el| el.transform(z, freq))
            }
            OnePort::Parallel(members) => parallel_combine(members.iter().map(|m| m.impedance(freq))),
        }
    }

    pub fn has_resistor(&self) -> bool {
        match self {
            OnePort::Open | OnePort::Short => false,
            OnePort::Lumped(l) => l.is_resistive(),
            OnePort::Chain { elements, load } => {
                load.has_resistor()
                    || elements.iter().any(|e| match e {
                        ChainElement::Series(l) => l.is_resistive(),
                        ChainElement::Shunt(p) => p.has_resistor(),
                        ChainElement::Line(_) => false,
                    })
            }
            OnePort::Parallel(members) => members.iter().any(OnePort::has_resistor),
        }
    }
}

impl ChainElement {
    pub fn abcd(&self, freq: f64) -> Option<AbcdMatrix> {
        match self {
            ChainElement::Series(l) => l.impedance(freq).as_impedance().map(AbcdMatrix::series),
            ChainElement::Shunt(p) => p.impedance(freq).as_admittance().map(AbcdMatrix::shunt),
            ChainElement::Line(line) => Some(AbcdMatrix::tline(line, freq)),
        }
    }

    /// Impedance seen looking into this element when its far port sees `load`.
    fn transform(&self, load: ComplexImmittance, freq: f64) -> ComplexImmittance {
        match self.abcd(freq) {
            Some(m) => m.input_impedance(load),
            // infinite series impedance or a shorting shunt
            None => match self {
                ChainElement::Series(_) => ComplexImmittance::ResonantOpen,
                _ => ComplexImmittance::short(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    /// Branches in parallel at the junction node.
    Ladder(Vec<OnePort>),
    Nodal(Netlist),
}

/// One-port whose port is the Josephson junction terminals. `Z_in` includes
/// the qubit shunt `C_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceModel {
    pub label: String,
    pub c_q: f64,
    pub topology: Topology,
}

impl DeviceModel {
    pub fn ladder(label: impl Into<String>, c_q: f64, branches: Vec<OnePort>) -> Self {
        Self { label: label.into(), c_q, topology: Topology::Ladder(branches) }
    }

    pub fn nodal(label: impl Into<String>, c_q: f64, netlist: Netlist) -> Self {
        Self { label: label.into(), c_q, topology: Topology::Nodal(netlist) }
    }

    /// No resistive element anywhere: `Re{Z_in}` vanishes identically.
    pub fn is_lossless(&self) -> bool {
        match &self.topology {
            Topology::Ladder(branches) => !branches.iter().any(OnePort::has_resistor),
            Topology::Nodal(n) => !n.has_resistor(),
        }
    }

    /// Input impedance across the junction terminals at `freq`.
    pub fn zin(&self, freq: f64) -> Result<ComplexImmittance, DeviceError> {
        if !(freq.is_finite() && freq > 0.0) {
            return Err(DeviceError::Frequency(freq));
        }
        let shunt = Lumped::Capacitor(self.c_q).impedance(freq);
        match &self.topology {
            Topology::Ladder(branches) => {
                Ok(parallel_combine(std::iter::once(shunt).chain(branches.iter().map(|b| b.impedance(freq)))))
            }
            Topology::Nodal(netlist) => {
                let y_q = shunt.as_admittance().unwrap_or_default();
                netlist.input_impedance(freq, y_q)
            }
        }
    }
}

/// Junction input impedance of `device` at `freq`.
pub fn device_zin(device: &DeviceModel, freq: f64) -> Result<ComplexImmittance, DeviceError> {
    device.zin(freq)
}
