//! `freq_hz,re_z_ohm,im_z_ohm` impedance tables.

use num_complex::Complex64;

use super::{ImpedanceSample, ImpedanceTable, ImportError};

pub const CSV_HEADER: [&str; 3] = ["freq_hz", "re_z_ohm", "im_z_ohm"];

pub fn parse_csv_impedance(text: &str) -> Result<ImpedanceTable, ImportError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| ImportError::parse(1, e.to_string()))?.clone();
    let mut columns = [0usize; 3];
    for (slot, name) in columns.iter_mut().zip(CSV_HEADER) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ImportError::parse(1, format!("missing column `{name}`")))?;
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            ImportError::parse(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut vals = [0.0; 3];
        for (v, (&col, name)) in vals.iter_mut().zip(columns.iter().zip(CSV_HEADER)) {
            let cell = record.get(col).ok_or_else(|| ImportError::parse(line, format!("missing `{name}` cell")))?;
            *v = cell
                .parse::<f64>()
                .map_err(|_| ImportError::parse(line, format!("`{name}` is not a number: `{cell}`")))?;
        }
        rows.push(ImpedanceSample { freq: vals[0], z: Complex64::new(vals[1], vals[2]) });
    }
    ImpedanceTable::new(rows, None, "csv")
}

/// Shortest round-trip formatting, so parsing the output reproduces the table exactly.
pub fn write_csv_impedance(table: &ImpedanceTable) -> String {
    let mut out = String::from("freq_hz,re_z_ohm,im_z_ohm\n");
    for r in table.rows() {
        out.push_str(&format!("{:e},{:e},{:e}\n", r.freq, r.z.re, r.z.im));
    }
    out
}
