//! Touchstone v1 one-port (`.s1p`) reader and writer.
//!
//! Option line: `# [Hz|kHz|MHz|GHz] [S] [RI|MA|DB] [R <zref>]`, fields in any
//! order, case-insensitive, defaults `GHz S MA R 50`. Angles are in degrees
//! and dB magnitudes are `20 log10 |S|`.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{ImpedanceSample, ImpedanceTable, ImportError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FrequencyUnit {
    pub fn scale(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FrequencyUnit::Hz => "Hz",
            FrequencyUnit::KHz => "kHz",
            FrequencyUnit::MHz => "MHz",
            FrequencyUnit::GHz => "GHz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Real / imaginary.
    Ri,
    /// Linear magnitude / angle in degrees.
    Ma,
    /// dB magnitude / angle in degrees.
    Db,
}

impl DataFormat {
    fn decode(self, v1: f64, v2: f64) -> Complex64 {
        match self {
            DataFormat::Ri => Complex64::new(v1, v2),
            DataFormat::Ma => Complex64::from_polar(v1, v2.to_radians()),
            DataFormat::Db => Complex64::from_polar(10f64.powf(v1 / 20.0), v2.to_radians()),
        }
    }

    fn encode(self, s: Complex64) -> (f64, f64) {
        match self {
            DataFormat::Ri => (s.re, s.im),
            DataFormat::Ma => (s.norm(), s.arg().to_degrees()),
            DataFormat::Db => (20.0 * s.norm().log10(), s.arg().to_degrees()),
        }
    }

    fn token(self) -> &'static str {
        match self {
            DataFormat::Ri => "RI",
            DataFormat::Ma => "MA",
            DataFormat::Db => "DB",
        }
    }
}

/// `Z = zref (1 + S) / (1 − S)`; `None` when `|1 − S| < 1e-15`.
pub fn s_to_z(s: Complex64, z_ref: f64) -> Option<Complex64> {
    let den = Complex64::new(1.0, 0.0) - s;
    if den.norm() < 1e-15 {
        return None;
    }
    Some(z_ref * (Complex64::new(1.0, 0.0) + s) / den)
}

/// `S = (Z − zref) / (Z + zref)`.
pub fn z_to_s(z: Complex64, z_ref: f64) -> Complex64 {
    (z - z_ref) / (z + z_ref)
}

struct Options {
    unit: FrequencyUnit,
    format: DataFormat,
    z_ref: f64,
}

fn parse_option_line(body: &str, line: usize) -> Result<Options, ImportError> {
    let mut opts = Options { unit: FrequencyUnit::GHz, format: DataFormat::Ma, z_ref: 50.0 };
    let mut tokens = body.split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => opts.unit = FrequencyUnit::Hz,
            "KHZ" => opts.unit = FrequencyUnit::KHz,
            "MHZ" => opts.unit = FrequencyUnit::MHz,
            "GHZ" => opts.unit = FrequencyUnit::GHz,
            "S" => {}
            p @ ("Y" | "Z" | "H" | "G") => {
                return Err(ImportError::parse(line, format!("unsupported parameter type `{p}` (only S is read)")))
            }
            "RI" => opts.format = DataFormat::Ri,
            "MA" => opts.format = DataFormat::Ma,
            "DB" => opts.format = DataFormat::Db,
            "R" => {
                let v = tokens.next().ok_or_else(|| ImportError::parse(line, "`R` without a reference impedance"))?;
                opts.z_ref = v
                    .parse::<f64>()
                    .ok()
                    .filter(|r| r.is_finite() && *r > 0.0)
                    .ok_or_else(|| ImportError::parse(line, format!("bad reference impedance `{v}`")))?;
            }
            other => return Err(ImportError::parse(line, format!("malformed option line: unexpected `{other}`"))),
        }
    }
    Ok(opts)
}

/// Parses a one-port Touchstone v1 file into impedances.
pub fn parse_touchstone_s1p(text: &str) -> Result<ImpedanceTable, ImportError> {
    let mut options: Option<Options> = None;
    let mut rows: Vec<ImpedanceSample> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('#') {
            // later option lines are ignored
            if options.is_none() {
                if !rows.is_empty() {
                    return Err(ImportError::parse(line, "option line after data"));
                }
                options = Some(parse_option_line(body, line)?);
            }
            continue;
        }
        let opts = options.get_or_insert(Options { unit: FrequencyUnit::GHz, format: DataFormat::Ma, z_ref: 50.0 });
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ImportError::parse(line, format!("expected 3 values (freq v1 v2), found {}", fields.len())));
        }
        let mut nums = [0.0; 3];
        for (slot, f) in nums.iter_mut().zip(&fields) {
            *slot = f.parse::<f64>().map_err(|_| ImportError::parse(line, format!("not a number: `{f}`")))?;
        }
        let freq = nums[0] * opts.unit.scale();
        if let Some(prev) = rows.last() {
            if freq <= prev.freq {
                return Err(ImportError::parse(line, format!("frequency {freq} Hz does not increase")));
            }
        }
        let s = opts.format.decode(nums[1], nums[2]);
        let z = s_to_z(s, opts.z_ref)
            .ok_or_else(|| ImportError::parse(line, "S = 1 has no finite impedance (|1 - S| < 1e-15)"))?;
        rows.push(ImpedanceSample { freq, z });
    }
    let z_ref = options.map(|o| o.z_ref).unwrap_or(50.0);
    ImpedanceTable::new(rows, Some(z_ref), "touchstone")
}

/// Writes impedances as a one-port Touchstone file in Hz.
pub fn write_touchstone_s1p(table: &ImpedanceTable, format: DataFormat, z_ref: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "! one-port impedance export");
    let _ = writeln!(out, "# {} S {} R {}", FrequencyUnit::Hz.token(), format.token(), z_ref);
    for r in table.rows() {
        let (v1, v2) = format.encode(z_to_s(r.z, z_ref));
        let _ = writeln!(out, "{:e} {:e} {:e}", r.freq, v1, v2);
    }
    out
}
