//! Import of one-port impedance data computed by external solvers.
//!
//! Two formats are read: Touchstone v1 `.s1p` files and a three-column CSV
//! (`freq_hz,re_z_ohm,im_z_ohm`). Both produce an [`ImpedanceTable`], which is
//! interpolated linearly and never extrapolated. Export at least ten points
//! per resonance linewidth for sharp features to survive interpolation.

mod csv_table;
mod table;
mod touchstone;

use std::path::Path;

use thiserror::Error;

pub use csv_table::{parse_csv_impedance, write_csv_impedance};
pub use table::{interpolate_impedance, ImpedanceSample, ImpedanceTable};
pub use touchstone::{parse_touchstone_s1p, s_to_z, write_touchstone_s1p, z_to_s, DataFormat, FrequencyUnit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImportError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("table needs strictly increasing frequencies (row {row}: {freq} Hz after {previous} Hz)")]
    NonMonotonic { row: usize, freq: f64, previous: f64 },
    #[error("table needs at least 2 rows, found {0}")]
    TooFewRows(usize),
    #[error("non-finite value in row {0}")]
    NonFinite(usize),
    #[error("{freq} Hz is outside the table range [{min}, {max}] Hz")]
    OutOfRange { freq: f64, min: f64, max: f64 },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl ImportError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse { line, message: message.into() }
    }
}

/// Reads a table, choosing the parser from the extension (`.s1p` or `.csv`).
pub fn load_impedance_table(path: &Path) -> Result<ImpedanceTable, ImportError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ImportError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let mut table = match ext.as_str() {
        "csv" => parse_csv_impedance(&text)?,
        _ => parse_touchstone_s1p(&text)?,
    };
    table.set_source(path.display().to_string());
    Ok(table)
}
