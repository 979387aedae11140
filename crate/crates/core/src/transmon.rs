//! Transmon energy scales and the impedance-based emission rate.
//!
//! The emission rate of the `j+1 → j` transition is
//!
//! ```text
//! γ = 2ω / (ħ μ0 ε0 c²) · (2e |⟨j|n|j+1⟩|)² · Re{Z_in(ω)}
//! ```
//!
//! where `Z_in` is the impedance across the junction terminals. The charge
//! matrix element uses the large `E_J/E_C` asymptote and `E_J` is usually
//! pinned so that `√(8 E_J E_C)/h` equals the operating frequency.

use thiserror::Error;

use crate::constants::{angular, ELEMENTARY_CHARGE, EPS0, HBAR, MU0, PLANCK, SPEED_OF_LIGHT};

/// `E_J/E_C` below which the asymptotic matrix element is considered unreliable.
pub const MIN_EJ_EC_RATIO: f64 = 20.0;

/// `(ωC_gZ0)²` above which the lumped continuum rate is flagged.
pub const LUMPED_VALIDITY_LIMIT: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("{quantity} must be positive and finite, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },
    #[error("passivity violation: {quantity} = {value} is negative")]
    Passivity { quantity: &'static str, value: f64 },
    #[error("Im{{Z_in}} = {im_zin} Ω at {freq} Hz is not capacitive; C_sigma cannot be estimated")]
    NonCapacitive { freq: f64, im_zin: f64 },
}

fn positive(quantity: &'static str, value: f64) -> Result<f64, PhysicsError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(PhysicsError::NonPositive { quantity, value })
    }
}

/// Charging energy `E_C = e² / (2 C_Σ)` (J).
pub fn charging_energy(c_sigma: f64) -> Result<f64, PhysicsError> {
    let c = positive("c_sigma", c_sigma)?;
    Ok(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * c))
}

/// Josephson energy that places the transmon at `f0`: `E_J = (h f0)² / (8 E_C)`.
pub fn josephson_energy_for_frequency(f0: f64, e_c: f64) -> Result<f64, PhysicsError> {
    let f0 = positive("f0", f0)?;
    let e_c = positive("e_c", e_c)?;
    let hf = PLANCK * f0;
    Ok(hf * hf / (8.0 * e_c))
}

/// Transition frequency `√(8 E_J E_C) / h` (Hz).
pub fn transmon_frequency(e_j: f64, e_c: f64) -> f64 {
    (8.0 * e_j * e_c).sqrt() / PLANCK
}

/// `|⟨j|n|j+1⟩| ≈ √((j+1)/2) · (E_J / 8E_C)^{1/4}`.
pub fn charge_matrix_element(level: u32, e_j: f64, e_c: f64) -> Result<f64, PhysicsError> {
    let e_j = positive("e_j", e_j)?;
    let e_c = positive("e_c", e_c)?;
    Ok((0.5 * (level as f64 + 1.0)).sqrt() * (e_j / (8.0 * e_c)).powf(0.25))
}

/// Spontaneous emission rate (1/s) from the real part of the junction impedance.
pub fn ser_from_zin(f0: f64, matrix_element: f64, re_zin: f64) -> Result<f64, PhysicsError> {
    let f0 = positive("f0", f0)?;
    if re_zin < 0.0 {
        return Err(PhysicsError::Passivity { quantity: "Re{Z_in}", value: re_zin });
    }
    let omega = angular(f0);
    let charge = 2.0 * ELEMENTARY_CHARGE * matrix_element;
    let prefactor = 2.0 * omega / (HBAR * MU0 * EPS0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    Ok(prefactor * charge * charge * re_zin)
}

/// `T1 = 1/γ`, infinite for a vanishing rate.
pub fn t1_from_rate(gamma: f64) -> f64 {
    if gamma == 0.0 {
        f64::INFINITY
    } else {
        1.0 / gamma
    }
}

/// Classical decay time `T1 = C_q / Re{Y_eq}` (s); infinite when `Re{Y_eq} = 0`.
pub fn t1_classical(c_q: f64, re_y_eq: f64) -> Result<f64, PhysicsError> {
    let c_q = positive("c_q", c_q)?;
    if re_y_eq < 0.0 {
        return Err(PhysicsError::Passivity { quantity: "Re{Y_eq}", value: re_y_eq });
    }
    Ok(if re_y_eq == 0.0 { f64::INFINITY } else { c_q / re_y_eq })
}

/// Continuum emission rate of a transmon coupled through `C_g` to a matched line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedRate {
    pub gamma: f64,
    /// `(ωC_gZ0)²`; the expression assumes this is small.
    pub coupling: f64,
}

impl LumpedRate {
    pub fn is_valid(&self) -> bool {
        self.coupling <= LUMPED_VALIDITY_LIMIT
    }

    pub fn t1(&self) -> f64 {
        t1_from_rate(self.gamma)
    }
}

/// `γ ≈ ω² Z0 C_g² / C_q`.
pub fn ser_lumped_waveguide(f: f64, z0: f64, c_g: f64, c_q: f64) -> Result<LumpedRate, PhysicsError> {
    let f = positive("f", f)?;
    let z0 = positive("z0", z0)?;
    let c_q = positive("c_q", c_q)?;
    if !(c_g.is_finite() && c_g >= 0.0) {
        return Err(PhysicsError::NonPositive { quantity: "c_g", value: c_g });
    }
    let omega = angular(f);
    let x = omega * c_g * z0;
    Ok(LumpedRate { gamma: omega * omega * z0 * c_g * c_g / c_q, coupling: x * x })
}

/// Total capacitance from a capacitive junction impedance: `C_Σ = −1/(ω Im{Z_in})`.
pub fn estimate_c_sigma(f: f64, im_zin: f64) -> Result<f64, PhysicsError> {
    let f = positive("f", f)?;
    if !im_zin.is_finite() || im_zin >= 0.0 {
        return Err(PhysicsError::NonCapacitive { freq: f, im_zin });
    }
    Ok(-1.0 / (angular(f) * im_zin))
}

/// Self-consistent transmon parameters at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonState {
    pub c_sigma: f64,
    pub e_c: f64,
    pub e_j: f64,
    pub level: u32,
}

impl TransmonState {
    /// Builds the state with `E_J` pinned so the transition sits at `f0`.
    pub fn pinned(c_sigma: f64, f0: f64, level: u32) -> Result<Self, PhysicsError> {
        let e_c = charging_energy(c_sigma)?;
        let e_j = josephson_energy_for_frequency(f0, e_c)?;
        Ok(Self { c_sigma, e_c, e_j, level })
    }

    pub fn with_fixed_ej(c_sigma: f64, e_j: f64, level: u32) -> Result<Self, PhysicsError> {
        let e_c = charging_energy(c_sigma)?;
        positive("e_j", e_j)?;
        Ok(Self { c_sigma, e_c, e_j, level })
    }

    pub fn ej_ec_ratio(&self) -> f64 {
        self.e_j / self.e_c
    }

    /// True when `E_J/E_C` is too small for the transmon asymptotics.
    pub fn low_ratio_warning(&self) -> bool {
        self.ej_ec_ratio() < MIN_EJ_EC_RATIO
    }

    pub fn matrix_element(&self) -> Result<f64, PhysicsError> {
        charge_matrix_element(self.level, self.e_j, self.e_c)
    }

    pub fn frequency(&self) -> f64 {
        transmon_frequency(self.e_j, self.e_c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const FF: f64 = 1e-15;

    #[test]
    fn charging_energy_of_100ff() {
        let ec = charging_energy(100.0 * FF).unwrap();
        // e²/(2·1e-13)/h, evaluated independently
        let want = 1.602_176_634e-19_f64.powi(2) / 2e-13 / 6.626_070_15e-34;
        assert_relative_eq!(ec / PLANCK, want, max_relative = 1e-14);
        assert!((ec / PLANCK / 193.6e6 - 1.0).abs() < 1e-3);
        assert_relative_eq!(charging_energy(200.0 * FF).unwrap(), ec / 2.0, max_relative = 1e-15);
        let c_one_hz = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * PLANCK);
        assert_relative_eq!(charging_energy(c_one_hz).unwrap() / PLANCK, 1.0, max_relative = 1e-14);
        assert!(charging_energy(0.0).is_err());
        assert!(charging_energy(-FF).is_err());
    }

    #[test]
    fn josephson_energy_pinning() {
        let ec = 193.6e6 * PLANCK;
        let ej = josephson_energy_for_frequency(5e9, ec).unwrap();
        assert_relative_eq!(ej / PLANCK, 25e18 / (8.0 * 193.6e6), max_relative = 1e-14);
        assert!((ej / PLANCK / 16.14e9 - 1.0).abs() < 1e-3);
        assert!((ej / ec / 83.4 - 1.0).abs() < 2e-3);
        assert_relative_eq!(transmon_frequency(ej, ec), 5e9, max_relative = 1e-12);
        let ej_half = josephson_energy_for_frequency(5e9, ec / 2.0).unwrap();
        assert_relative_eq!(ej_half, 2.0 * ej, max_relative = 1e-15);
    }

    #[test]
    fn matrix_element_values() {
        let ec = 1.0;
        assert_relative_eq!(charge_matrix_element(0, 128.0, ec).unwrap(), 2.0_f64.sqrt(), max_relative = 1e-15);
        let n0 = charge_matrix_element(0, 83.4, 1.0).unwrap();
        assert!((n0 - 1.271).abs() < 1e-3, "{n0}");
        let n1 = charge_matrix_element(1, 83.4, 1.0).unwrap();
        assert_relative_eq!(n1 / n0, 2.0_f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn emission_rate_example() {
        let g = ser_from_zin(5e9, 1.271, 0.1).unwrap();
        // 2ω·(2e·n)²·Re/ħ with μ0ε0c² = 1
        let omega = 2.0 * std::f64::consts::PI * 5e9;
        let want = 2.0 * omega * (2.0 * 1.602_176_634e-19 * 1.271_f64).powi(2) * 0.1 / HBAR;
        assert_relative_eq!(g, want, max_relative = 1e-12);
        assert!((g / 9.88e6 - 1.0).abs() < 2e-3, "{g}");
        assert!((t1_from_rate(g) / 101e-9 - 1.0).abs() < 1e-2);
        assert_relative_eq!(ser_from_zin(5e9, 1.271, 0.2).unwrap(), 2.0 * g, max_relative = 1e-15);
        assert_eq!(ser_from_zin(5e9, 1.271, 0.0).unwrap(), 0.0);
        assert_eq!(t1_from_rate(0.0), f64::INFINITY);
        assert!(matches!(ser_from_zin(5e9, 1.0, -1e-3), Err(PhysicsError::Passivity { .. })));
    }

    #[test]
    fn classical_t1() {
        assert_relative_eq!(t1_classical(100.0 * FF, 1e-6).unwrap(), 100e-9, max_relative = 1e-14);
        assert_eq!(t1_classical(100.0 * FF, 0.0).unwrap(), f64::INFINITY);
        assert_relative_eq!(t1_classical(200.0 * FF, 1e-6).unwrap(), 2.0 * t1_classical(100.0 * FF, 1e-6).unwrap());
        assert!(t1_classical(100.0 * FF, -1e-9).is_err());
    }

    #[test]
    fn lumped_continuum_rate() {
        let r = ser_lumped_waveguide(5e9, 50.0, 10.0 * FF, 90.0 * FF).unwrap();
        let omega = 2.0 * std::f64::consts::PI * 5e9;
        assert_relative_eq!(r.gamma, omega * omega * 50.0 * 1e-28 / 9e-14, max_relative = 1e-14);
        assert!((r.gamma / 5.48e7 - 1.0).abs() < 1e-3);
        assert!((r.t1() / 18.2e-9 - 1.0).abs() < 5e-3);
        assert!(r.is_valid());
        assert_eq!(ser_lumped_waveguide(5e9, 50.0, 0.0, 90.0 * FF).unwrap().gamma, 0.0);
        let r2 = ser_lumped_waveguide(10e9, 50.0, 10.0 * FF, 90.0 * FF).unwrap();
        assert_relative_eq!(r2.gamma, 4.0 * r.gamma, max_relative = 1e-14);
        let strong = ser_lumped_waveguide(8e9, 50.0, 1e-12, 90.0 * FF).unwrap();
        assert!(!strong.is_valid());
    }

    #[test]
    fn c_sigma_from_reactance() {
        assert_relative_eq!(estimate_c_sigma(5e9, -318.309_886_183_790_7).unwrap(), 100.0 * FF, max_relative = 1e-12);
        assert!(matches!(estimate_c_sigma(5e9, 0.0), Err(PhysicsError::NonCapacitive { .. })));
        assert!(estimate_c_sigma(5e9, 10.0).is_err());
        assert!(estimate_c_sigma(5e9, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn pinned_state_round_trips_frequency() {
        let s = TransmonState::pinned(100.0 * FF, 5e9, 0).unwrap();
        assert_relative_eq!(s.frequency(), 5e9, max_relative = 1e-12);
        assert!(!s.low_ratio_warning());
        let weak = TransmonState::pinned(100.0 * FF, 1e9, 0).unwrap();
        assert!(weak.low_ratio_warning());
    }
}
