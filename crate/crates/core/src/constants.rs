//! Physical constants (CODATA 2018).
//!
//! `e`, `h` and `c0` are exact in the 2019 SI. `mu0` is the measured
//! CODATA 2018 value and `eps0` is tied to it through `1/(mu0 c0^2)`, so the
//! product `mu0 eps0 c0^2` is one to rounding.

use std::f64::consts::PI;

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability (H/m).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 1.0 / (MU0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// The constant set used throughout the crate, bundled for callers that want
/// to pass or inspect them as a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub e: f64,
    pub hbar: f64,
    pub h: f64,
    pub mu0: f64,
    pub eps0: f64,
    pub c0: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants =
        PhysicalConstants { e: ELEMENTARY_CHARGE, hbar: HBAR, h: PLANCK, mu0: MU0, eps0: EPS0, c0: SPEED_OF_LIGHT };

    /// `mu0 * eps0 * c0^2`, which should be one.
    pub fn wave_identity(&self) -> f64 {
        self.mu0 * self.eps0 * self.c0 * self.c0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Angular frequency for a frequency in Hz.
#[inline]
pub fn angular(freq: f64) -> f64 {
    2.0 * PI * freq
}
