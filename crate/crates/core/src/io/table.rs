use num_complex::Complex64;

use super::ImportError;
use crate::network::ComplexImmittance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedanceSample {
    pub freq: f64,
    pub z: Complex64,
}

/// Frequency-sorted complex impedance samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceTable {
    rows: Vec<ImpedanceSample>,
    z_ref: Option<f64>,
    source: String,
}

impl ImpedanceTable {
    /// Validates ordering, finiteness and row count.
    pub fn new(rows: Vec<ImpedanceSample>, z_ref: Option<f64>, source: impl Into<String>) -> Result<Self, ImportError> {
        if rows.len() < 2 {
            return Err(ImportError::TooFewRows(rows.len()));
        }
        for (i, r) in rows.iter().enumerate() {
            if !(r.freq.is_finite() && r.z.re.is_finite() && r.z.im.is_finite()) {
                return Err(ImportError::NonFinite(i));
            }
            if i > 0 && r.freq <= rows[i - 1].freq {
                return Err(ImportError::NonMonotonic { row: i, freq: r.freq, previous: rows[i - 1].freq });
            }
        }
        Ok(Self { rows, z_ref, source: source.into() })
    }

    pub fn rows(&self) -> &[ImpedanceSample] {
        &self.rows
    }

    /// Reference impedance of the source file; `None` for CSV input.
    pub fn z_ref(&self) -> Option<f64> {
        self.z_ref
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn set_source(&mut self, source: impl Into<String>) {
        self.source = source.into();
    }

    pub fn min_freq(&self) -> f64 {
        self.rows[0].freq
    }

    pub fn max_freq(&self) -> f64 {
        self.rows[self.rows.len() - 1].freq
    }

    pub fn contains(&self, freq: f64) -> bool {
        freq >= self.min_freq() && freq <= self.max_freq()
    }

    /// Linear interpolation of real and imaginary parts. No extrapolation.
    pub fn interpolate(&self, freq: f64) -> Result<ComplexImmittance, ImportError> {
        if !self.contains(freq) {
            return Err(ImportError::OutOfRange { freq, min: self.min_freq(), max: self.max_freq() });
        }
        let hi = self.rows.partition_point(|r| r.freq < freq);
        let upper = self.rows[hi];
        if upper.freq == freq {
            return Ok(ComplexImmittance::Impedance(upper.z));
        }
        let lower = self.rows[hi - 1];
        let t = (freq - lower.freq) / (upper.freq - lower.freq);
        Ok(ComplexImmittance::Impedance(lower.z + (upper.z - lower.z) * t))
    }
}

/// Linear interpolation of a table at `freq`.
pub fn interpolate_impedance(table: &ImpedanceTable, freq: f64) -> Result<ComplexImmittance, ImportError> {
    table.interpolate(freq)
}
