//! Frequency sweeps of the self-consistent emission-rate pipeline.
//!
//! At every frequency `f`: `Z_in` from the source, `C_Σ` from `Im{Z_in}`
//! (or fixed), `E_C = e²/2C_Σ`, `E_J` pinned so the transmon sits at `f`
//! (or fixed), the asymptotic charge matrix element, then `γ` and `T1 = 1/γ`.
//! Rows are independent and evaluated in parallel.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{DeviceError, DeviceModel};
use crate::io::{ImpedanceTable, ImportError};
use crate::network::ComplexImmittance;
use crate::transmon::{estimate_c_sigma, ser_from_zin, t1_from_rate, PhysicsError, TransmonState};

/// Relative tolerance on `Re{Z_in} < 0` that is treated as rounding noise.
pub const PASSIVITY_TOLERANCE: f64 = 1e-12;

pub const SWEEP_CSV_HEADER: &str =
    "freq_hz,re_zin_ohm,im_zin_ohm,c_sigma_f,e_c_j,e_j_j,matrix_element,gamma_per_s,t1_s,flags";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("invalid sweep options: {0}")]
    Options(String),
    #[error("requested range [{start}, {stop}] Hz exceeds the available range [{min}, {max}] Hz")]
    OutOfRange { start: f64, stop: f64, min: f64, max: f64 },
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Import(#[from] ImportError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error("no row of the sweep produced an emission rate")]
    NoUsableRows,
    #[error("reference curve: {0}")]
    Reference(String),
}

/// Anything that can report a junction impedance at a frequency.
pub trait ZinSource: Sync {
    fn zin(&self, freq: f64) -> Result<ComplexImmittance, SweepError>;

    /// Closed interval outside which `zin` is undefined, if any.
    fn frequency_range(&self) -> Option<(f64, f64)> {
        None
    }
}

impl ZinSource for DeviceModel {
    fn zin(&self, freq: f64) -> Result<ComplexImmittance, SweepError> {
        Ok(DeviceModel::zin(self, freq)?)
    }
}

impl ZinSource for ImpedanceTable {
    fn zin(&self, freq: f64) -> Result<ComplexImmittance, SweepError> {
        Ok(self.interpolate(freq)?)
    }

    fn frequency_range(&self) -> Option<(f64, f64)> {
        Some((self.min_freq(), self.max_freq()))
    }
}

impl<T: ZinSource + Send> ZinSource for Box<T> {
    fn zin(&self, freq: f64) -> Result<ComplexImmittance, SweepError> {
        (**self).zin(freq)
    }

    fn frequency_range(&self) -> Option<(f64, f64)> {
        (**self).frequency_range()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EjMode {
    /// `E_J = (hf)²/8E_C` at every row.
    #[default]
    Pinned,
    /// Fixed Josephson energy (J).
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CSigmaMode {
    /// `C_Σ = −1/(ω Im{Z_in})` at every row.
    #[default]
    Estimated,
    /// Fixed total capacitance (F).
    Fixed(f64),
}

/// Per-row transmon settings shared by sweeps and fits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransmonSettings {
    pub level: u32,
    pub e_j: EjMode,
    pub c_sigma: CSigmaMode,
}

impl TransmonSettings {
    pub fn validate(&self) -> Result<(), SweepError> {
        if let EjMode::Fixed(v) = self.e_j {
            if !(v.is_finite() && v > 0.0) {
                return Err(SweepError::Options(format!("fixed e_j must be positive, got {v}")));
            }
        }
        if let CSigmaMode::Fixed(v) = self.c_sigma {
            if !(v.is_finite() && v > 0.0) {
                return Err(SweepError::Options(format!("fixed c_sigma must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    pub f_start: f64,
    pub f_stop: f64,
    pub points: usize,
    #[serde(default)]
    pub level: u32,
    #[serde(default)]
    pub e_j: EjMode,
    #[serde(default)]
    pub c_sigma: CSigmaMode,
}

impl SweepOptions {
    pub fn new(f_start: f64, f_stop: f64, points: usize) -> Self {
        Self { f_start, f_stop, points, level: 0, e_j: EjMode::Pinned, c_sigma: CSigmaMode::Estimated }
    }

    pub fn settings(&self) -> TransmonSettings {
        TransmonSettings { level: self.level, e_j: self.e_j, c_sigma: self.c_sigma }
    }

    pub fn with_settings(mut self, s: TransmonSettings) -> Self {
        self.level = s.level;
        self.e_j = s.e_j;
        self.c_sigma = s.c_sigma;
        self
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if !(self.f_start.is_finite() && self.f_start > 0.0) {
            return Err(SweepError::Options(format!("f_start must be positive, got {}", self.f_start)));
        }
        if !(self.f_stop.is_finite() && self.f_stop > self.f_start) {
            return Err(SweepError::Options(format!(
                "f_stop ({}) must exceed f_start ({})",
                self.f_stop, self.f_start
            )));
        }
        if self.points < 2 {
            return Err(SweepError::Options(format!("points must be >= 2, got {}", self.points)));
        }
        self.settings().validate()
    }

    /// Evenly spaced grid including both ends.
    pub fn frequencies(&self) -> Vec<f64> {
        let span = self.f_stop - self.f_start;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.f_stop } else { self.f_start + span * i as f64 / last })
            .collect()
    }

    /// Restricts the sweep to `[min, max]`. Returns `None` when nothing overlaps.
    pub fn clipped_to(&self, min: f64, max: f64) -> Option<SweepOptions> {
        let start = self.f_start.max(min);
        let stop = self.f_stop.min(max);
        (stop > start).then_some(SweepOptions { f_start: start, f_stop: stop, ..*self })
    }
}

/// Diagnostic attached to a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowFlag {
    /// `Im{Z_in} ≥ 0`, so `C_Σ` could not be estimated.
    NonCapacitive,
    /// `Z_in` is at a pole.
    ResonantOpen,
    /// `Re{Z_in}` is negative beyond rounding.
    PassivityViolation,
    /// `E_J/E_C` below the transmon regime.
    LowEjEc,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RowFlag::NonCapacitive => "non_capacitive",
            RowFlag::ResonantOpen => "resonant_open",
            RowFlag::PassivityViolation => "passivity_violation",
            RowFlag::LowEjEc => "low_ej_ec",
        }
    }
}

impl fmt::Display for RowFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transmon quantities of one usable row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowPhysics {
    pub c_sigma: f64,
    pub e_c: f64,
    pub e_j: f64,
    pub matrix_element: f64,
    pub gamma: f64,
    /// Infinite when `gamma` is zero.
    pub t1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub freq: f64,
    pub z_in: ComplexImmittance,
    pub physics: Option<RowPhysics>,
    pub flags: Vec<RowFlag>,
}

impl SweepRow {
    pub fn gamma(&self) -> Option<f64> {
        self.physics.map(|p| p.gamma)
    }

    pub fn t1(&self) -> Option<f64> {
        self.physics.map(|p| p.t1)
    }

    pub fn has_flag(&self, flag: RowFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// Evaluates the pipeline at a single frequency.
pub fn evaluate_row<S: ZinSource + ?Sized>(
    source: &S,
    freq: f64,
    settings: &TransmonSettings,
) -> Result<SweepRow, SweepError> {
    let z_in = source.zin(freq)?.to_impedance();
    let mut row = SweepRow { freq, z_in, physics: None, flags: Vec::new() };
    let Some(z) = z_in.as_impedance() else {
        row.flags.push(RowFlag::ResonantOpen);
        return Ok(row);
    };

    let c_sigma = match settings.c_sigma {
        CSigmaMode::Fixed(c) => c,
        CSigmaMode::Estimated => match estimate_c_sigma(freq, z.im) {
            Ok(c) => c,
            Err(PhysicsError::NonCapacitive { .. }) => {
                row.flags.push(RowFlag::NonCapacitive);
                return Ok(row);
            }
            Err(e) => return Err(e.into()),
        },
    };
    let state = match settings.e_j {
        EjMode::Pinned => TransmonState::pinned(c_sigma, freq, settings.level)?,
        EjMode::Fixed(e_j) => TransmonState::with_fixed_ej(c_sigma, e_j, settings.level)?,
    };
    if state.low_ratio_warning() {
        row.flags.push(RowFlag::LowEjEc);
    }
    let matrix_element = state.matrix_element()?;

    let mut re = z.re;
    if re < 0.0 && re >= -PASSIVITY_TOLERANCE * z.norm() {
        re = 0.0;
    }
    let gamma = match ser_from_zin(freq, matrix_element, re) {
        Ok(g) => g,
        Err(PhysicsError::Passivity { .. }) => {
            row.flags.push(RowFlag::PassivityViolation);
            return Ok(row);
        }
        Err(e) => return Err(e.into()),
    };
    row.physics =
        Some(RowPhysics { c_sigma, e_c: state.e_c, e_j: state.e_j, matrix_element, gamma, t1: t1_from_rate(gamma) });
    Ok(row)
}

/// Evaluates the pipeline at arbitrary frequencies, in order.
pub fn evaluate_at<S: ZinSource + ?Sized>(
    source: &S,
    freqs: &[f64],
    settings: &TransmonSettings,
) -> Result<Vec<SweepRow>, SweepError> {
    settings.validate()?;
    let rows: Vec<SweepRow> = freqs.par_iter().map(|&f| evaluate_row(source, f, settings)).collect::<Result<_, _>>()?;
    if rows.iter().all(|r| r.physics.is_none()) {
        return Err(SweepError::NoUsableRows);
    }
    Ok(rows)
}

/// Runs a sweep over the evenly spaced grid of `opts`.
pub fn run_sweep<S: ZinSource + ?Sized>(source: &S, opts: &SweepOptions) -> Result<Vec<SweepRow>, SweepError> {
    opts.validate()?;
    if let Some((min, max)) = source.frequency_range() {
        if opts.f_start < min || opts.f_stop > max {
            return Err(SweepError::OutOfRange { start: opts.f_start, stop: opts.f_stop, min, max });
        }
    }
    evaluate_at(source, &opts.frequencies(), &opts.settings())
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Renders rows with the sweep CSV schema. Floats use shortest round-trip
/// scientific notation; infinite `T1` is written `inf`; quantities a row
/// does not have are left empty.
pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let (re, im) = match r.z_in.as_impedance() {
            Some(z) => (num(z.re), num(z.im)),
            None => ("inf".to_string(), "inf".to_string()),
        };
        let physics = match &r.physics {
            Some(p) => [p.c_sigma, p.e_c, p.e_j, p.matrix_element, p.gamma, p.t1].map(num).join(","),
            None => ",,,,,".to_string(),
        };
        let flags: Vec<&str> = r.flags.iter().map(|f| f.as_str()).collect();
        out.push_str(&format!("{},{re},{im},{physics},{}\n", num(r.freq), flags.join("|")));
    }
    out
}

/// Reads `(freq_hz, t1_s)` pairs from any CSV carrying those two columns.
/// Rows with an empty `t1_s` cell are skipped.
pub fn parse_t1_curve(text: &str) -> Result<Vec<(f64, f64)>, SweepError> {
    let err = |line: u64, m: String| SweepError::Reference(format!("line {line}: {m}"));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(false).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| err(1, e.to_string()))?.clone();
    let col =
        |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| err(1, format!("missing column `{name}`")));
    let (fc, tc) = (col("freq_hz")?, col("t1_s")?);
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let (f, t) = (rec.get(fc).unwrap_or(""), rec.get(tc).unwrap_or(""));
        if t.is_empty() {
            continue;
        }
        let f: f64 = f.parse().map_err(|_| err(line, format!("bad freq_hz `{f}`")))?;
        let t: f64 = t.parse().map_err(|_| err(line, format!("bad t1_s `{t}`")))?;
        out.push((f, t));
    }
    if out.is_empty() {
        return Err(SweepError::Reference("no usable rows".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{build_waveguide_sps, ChainElement, Lumped, OnePort, WaveguideSpsParams};
    use crate::io::ImpedanceSample;
    use crate::transmon::transmon_frequency;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    const FF: f64 = 1e-15;

    fn waveguide() -> DeviceModel {
        build_waveguide_sps(&WaveguideSpsParams {
            c_q: 90.0 * FF,
            c_g_emit: 10.0 * FF,
            c_g_ctrl: 0.5 * FF,
            z0: 50.0,
            r_emit: 50.0,
            r_ctrl: 50.0,
        })
        .unwrap()
    }

    #[test]
    fn grid_ends_exactly() {
        let o = SweepOptions::new(4e9, 8e9, 401);
        let g = o.frequencies();
        assert_eq!((g.len(), g[0], g[400]), (401, 4e9, 8e9));
        assert_eq!(g[200], 6e9);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn option_validation() {
        assert!(SweepOptions::new(8e9, 4e9, 10).validate().is_err());
        assert!(SweepOptions::new(4e9, 8e9, 1).validate().is_err());
        assert!(SweepOptions::new(0.0, 8e9, 10).validate().is_err());
        let mut o = SweepOptions::new(4e9, 8e9, 10);
        o.e_j = EjMode::Fixed(-1.0);
        assert!(o.validate().is_err());
    }

    #[test]
    fn pinned_rows_sit_at_their_frequency() {
        let rows = run_sweep(&waveguide(), &SweepOptions::new(4e9, 8e9, 41)).unwrap();
        for r in &rows {
            let p = r.physics.unwrap();
            assert_relative_eq!(transmon_frequency(p.e_j, p.e_c), r.freq, max_relative = 1e-12);
            assert_relative_eq!(p.gamma * p.t1, 1.0, max_relative = 1e-15);
            assert!(r.flags.is_empty());
        }
    }

    #[test]
    fn inductive_rows_are_flagged_not_fatal() {
        // shunt inductor dominates at low frequency
        let d = DeviceModel::ladder(
            "lc",
            100.0 * FF,
            vec![
                OnePort::Lumped(Lumped::Inductor(10e-9)),
                OnePort::chain(
                    vec![ChainElement::Series(Lumped::Capacitor(5.0 * FF))],
                    OnePort::Lumped(Lumped::Resistor(50.0)),
                ),
            ],
        );
        let rows = run_sweep(&d, &SweepOptions::new(1e8, 2e10, 20)).unwrap();
        assert!(rows[0].has_flag(RowFlag::NonCapacitive) && rows[0].physics.is_none());
        assert!(rows.last().unwrap().physics.is_some());

        let mut o = SweepOptions::new(1e8, 2e10, 20);
        o.c_sigma = CSigmaMode::Fixed(100.0 * FF);
        let rows = run_sweep(&d, &o).unwrap();
        assert!(rows.iter().all(|r| r.physics.is_some()));
    }

    #[test]
    fn lossless_source_gives_infinite_t1() {
        let d = DeviceModel::ladder("bare", 100.0 * FF, vec![]);
        let rows = run_sweep(&d, &SweepOptions::new(4e9, 5e9, 3)).unwrap();
        assert!(rows.iter().all(|r| r.t1() == Some(f64::INFINITY) && r.gamma() == Some(0.0)));
        assert!(write_sweep_csv(&rows).lines().nth(1).unwrap().contains(",inf,"));
    }

    #[test]
    fn nothing_usable_is_an_error() {
        let d = DeviceModel::ladder("l", 1.0 * FF, vec![OnePort::Lumped(Lumped::Inductor(1e-9))]);
        assert_eq!(run_sweep(&d, &SweepOptions::new(1e6, 2e6, 3)), Err(SweepError::NoUsableRows));
    }

    #[test]
    fn table_range_is_enforced_and_clipping_reports() {
        let rows = vec![
            ImpedanceSample { freq: 4e9, z: Complex64::new(0.1, -300.0) },
            ImpedanceSample { freq: 6e9, z: Complex64::new(0.1, -200.0) },
        ];
        let t = ImpedanceTable::new(rows, None, "t").unwrap();
        let o = SweepOptions::new(3e9, 6e9, 5);
        assert!(matches!(run_sweep(&t, &o), Err(SweepError::OutOfRange { .. })));
        let c = o.clipped_to(t.min_freq(), t.max_freq()).unwrap();
        assert_eq!((c.f_start, c.f_stop), (4e9, 6e9));
        assert_eq!(run_sweep(&t, &c).unwrap().len(), 5);
        assert!(o.clipped_to(7e9, 8e9).is_none());
    }

    #[test]
    fn negative_conductance_is_flagged() {
        let rows = vec![
            ImpedanceSample { freq: 4e9, z: Complex64::new(-1.0, -300.0) },
            ImpedanceSample { freq: 5e9, z: Complex64::new(1.0, -300.0) },
        ];
        let t = ImpedanceTable::new(rows, None, "t").unwrap();
        let rows = run_sweep(&t, &SweepOptions::new(4e9, 5e9, 2)).unwrap();
        assert!(rows[0].has_flag(RowFlag::PassivityViolation));
        assert!(rows[1].physics.is_some());
    }

    #[test]
    fn reference_curve_reader() {
        let csv = write_sweep_csv(&run_sweep(&waveguide(), &SweepOptions::new(4e9, 8e9, 5)).unwrap());
        let curve = parse_t1_curve(&csv).unwrap();
        assert_eq!(curve.len(), 5);
        assert_eq!(curve[0].0, 4e9);
        assert!(parse_t1_curve("freq_hz,t1_s\n1e9,abc\n").is_err());
        assert!(parse_t1_curve("freq_hz\n1e9\n").is_err());
        assert_eq!(parse_t1_curve("freq_hz,t1_s\n1e9,2e-6\n").unwrap(), vec![(1e9, 2e-6)]);
    }
}
