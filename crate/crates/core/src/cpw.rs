//! Coplanar waveguide on an infinitely thick substrate, by conformal mapping.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Silicon relative permittivity used when none is given.
pub const SILICON_EPS_R: f64 = 11.68;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CpwError {
    #[error("elliptic modulus must satisfy 0 <= k < 1, got {0}")]
    Modulus(f64),
    #[error("invalid CPW geometry: {field} = {value} ({reason})")]
    Geometry { field: &'static str, value: f64, reason: &'static str },
}

/// Complete elliptic integral of the first kind `K(k)` (modulus convention),
/// via the arithmetic–geometric mean: `K(k) = π / (2 · AGM(1, √(1 − k²)))`.
pub fn complete_elliptic_k(k: f64) -> Result<f64, CpwError> {
    if !(0.0..1.0).contains(&k) {
        return Err(CpwError::Modulus(k));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    // quadratic convergence; 10 rounds is already past double precision
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (2.0 * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpwGeometry {
    /// Centre trace width (m).
    pub width: f64,
    /// Gap between trace and ground (m).
    pub gap: f64,
    #[serde(default = "default_eps_r")]
    pub eps_r: f64,
}

fn default_eps_r() -> f64 {
    SILICON_EPS_R
}

impl CpwGeometry {
    pub fn new(width: f64, gap: f64, eps_r: f64) -> Result<Self, CpwError> {
        let g = Self { width, gap, eps_r };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), CpwError> {
        let positive = |field, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(CpwError::Geometry { field, value, reason: "must be positive and finite" })
            }
        };
        positive("width", self.width)?;
        positive("gap", self.gap)?;
        if !(self.eps_r.is_finite() && self.eps_r >= 1.0) {
            return Err(CpwError::Geometry { field: "eps_r", value: self.eps_r, reason: "must be >= 1" });
        }
        Ok(())
    }

    /// `k = w / (w + 2s)`.
    pub fn modulus(&self) -> f64 {
        self.width / (self.width + 2.0 * self.gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwParams {
    pub z0: f64,
    pub eps_eff: f64,
}

/// Characteristic impedance and effective permittivity of a CPW line.
///
/// `eps_eff = (eps_r + 1)/2` and `Z0 = 30π/√eps_eff · K(k')/K(k)`.
pub fn cpw_params(geom: &CpwGeometry) -> Result<CpwParams, CpwError> {
    geom.validate()?;
    let k = geom.modulus();
    let kp = (1.0 - k * k).sqrt();
    let eps_eff = 0.5 * (geom.eps_r + 1.0);
    let z0 = 30.0 * PI / eps_eff.sqrt() * complete_elliptic_k(kp)? / complete_elliptic_k(k)?;
    Ok(CpwParams { z0, eps_eff })
}
