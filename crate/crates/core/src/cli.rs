//! Command-line front end.
//!
//! Exit codes: 0 success, 1 schema/validation/parse error, 2 physics or
//! domain error, 3 non-finite initial loss in `fit`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{read_table, ConfigError, DeviceConfig, FitModelSection, Source};
use crate::cpw::{cpw_params, CpwGeometry};
use crate::fit::{fit_parameters, FitError, FitModel, FitProblem};
use crate::io::ImportError;
use crate::sweep::{parse_t1_curve, run_sweep, write_sweep_csv, SweepError, ZinSource};

pub const THREADS_ENV: &str = "PURCELL_T1_THREADS";

#[derive(Debug, Parser)]
#[command(name = "purcell-t1", version, about = "Transmon T1 from the impedance seen by the junction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep a device config and write the per-frequency CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write a matplotlib script plotting T1 against frequency.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Fit the config's free parameters to a reference `freq_hz,t1_s` CSV.
    Fit {
        config: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Characteristic impedance and effective permittivity of a CPW.
    Cpw {
        /// Centre conductor width (m).
        #[arg(long)]
        width: f64,
        /// Gap to ground (m).
        #[arg(long)]
        gap: f64,
        #[arg(long, default_value_t = crate::cpw::SILICON_EPS_R)]
        eps_r: f64,
    },
    /// Run the emission-rate pipeline over an imported `.s1p` or `.csv` table.
    Import {
        table: PathBuf,
        /// Supplies the transmon settings and, optionally, the frequency range.
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self { code: 1, message: message.to_string() }
    }

    fn domain(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::input(e)
    }
}

impl From<ImportError> for Failure {
    fn from(e: ImportError) -> Self {
        match e {
            ImportError::OutOfRange { .. } => Self::domain(e),
            _ => Self::input(e),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Options(_) | SweepError::Reference(_) => Self::input(e),
            SweepError::Import(i) => i.into(),
            _ => Self::domain(e),
        }
    }
}

impl From<FitError> for Failure {
    fn from(e: FitError) -> Self {
        match e {
            FitError::Config(c) => c.into(),
            FitError::Sweep(s) => s.into(),
            FitError::NonFiniteInitialLoss(_) => Self { code: 3, message: e.to_string() },
        }
    }
}

/// Sizes the global rayon pool from `PURCELL_T1_THREADS` (unset or 0 = auto).
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().map_err(|_| Failure::input(format!("{THREADS_ENV}: expected a count, got `{raw}`")))?;
    if n > 0 {
        // a pool built earlier in the process wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn base_dir(config: &Path) -> &Path {
    config.parent().unwrap_or(Path::new("."))
}

/// Matplotlib script that reads `csv` and plots `T1` on a log axis.
pub fn plot_script(csv: &Path) -> String {
    let csv = csv.display().to_string().replace('\\', "\\\\").replace('"', "\\\"");
    format!(
        r#"import csv
import matplotlib.pyplot as plt

f, t1 = [], []
with open("{csv}") as fh:
    for row in csv.DictReader(fh):
        if row["t1_s"] not in ("", "inf"):
            f.append(float(row["freq_hz"]) / 1e9)
            t1.append(float(row["t1_s"]))

plt.semilogy(f, t1)
plt.xlabel("Frequency (GHz)")
plt.ylabel("T1 (s)")
plt.grid(True, which="both", alpha=0.3)
plt.tight_layout()
plt.show()
"#
    )
}

fn cmd_sweep(config: &Path, out: &Path, plot: Option<&Path>, log: &mut dyn Write) -> Result<(), Failure> {
    let cfg = DeviceConfig::load(config)?;
    let source = cfg.device.build(base_dir(config))?;
    let range = source.frequency_range();
    let mut opts = cfg.sweep.options(range)?;
    if let Some((min, max)) = range {
        let clipped = opts.clipped_to(min, max).ok_or_else(|| {
            Failure::domain(SweepError::OutOfRange { start: opts.f_start, stop: opts.f_stop, min, max })
        })?;
        if clipped != opts {
            let _ = writeln!(log, "clipped_range_hz={:e},{:e}", clipped.f_start, clipped.f_stop);
        }
        opts = clipped;
    }
    let rows = run_sweep(&source, &opts)?;
    write_file(out, &write_sweep_csv(&rows))?;
    if let Some(p) = plot {
        write_file(p, &plot_script(out))?;
    }
    Ok(())
}

fn cmd_fit(config: &Path, reference: &Path, out: &Path, log: &mut dyn Write) -> Result<(), Failure> {
    let mut cfg = DeviceConfig::load(config)?;
    let fit = cfg.fit.clone().ok_or_else(|| Failure::input("config has no `fit` block"))?;
    let text = std::fs::read_to_string(reference)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", reference.display())))?;
    let reference = parse_t1_curve(&text)?;
    let problem = FitProblem::from_section(&fit, &cfg.device, reference, cfg.sweep.settings())?;
    let outcome = fit_parameters(&problem, fit.seed)?;
    match outcome.model.clone() {
        FitModel::Network(d) => cfg.device = d,
        FitModel::LumpedWaveguide(p) => {
            if let Some(f) = cfg.fit.as_mut() {
                f.model = FitModelSection::LumpedWaveguide(p);
            }
        }
    }
    write_file(out, &(cfg.to_json() + "\n"))?;
    for (name, v) in &outcome.params {
        let _ = writeln!(log, "{name}={v:e}");
    }
    let _ = writeln!(log, "loss={:e}", outcome.loss);
    let _ = writeln!(log, "iterations={}", outcome.iterations);
    let _ = writeln!(log, "converged={}", outcome.converged);
    Ok(())
}

fn cmd_cpw(width: f64, gap: f64, eps_r: f64, log: &mut dyn Write) -> Result<(), Failure> {
    let geom = CpwGeometry::new(width, gap, eps_r).map_err(Failure::input)?;
    let p = cpw_params(&geom).map_err(Failure::input)?;
    let _ = writeln!(log, "z0_ohm={}", p.z0);
    let _ = writeln!(log, "eps_eff={}", p.eps_eff);
    Ok(())
}

fn cmd_import(table: &Path, config: &Path, out: &Path, log: &mut dyn Write) -> Result<(), Failure> {
    let cfg = DeviceConfig::load(config)?;
    let table = read_table(table, None)?;
    let (min, max) = (table.min_freq(), table.max_freq());
    let opts = cfg.sweep.options(Some((min, max)))?;
    let source = Source::Table(table);
    let rows = run_sweep(&source, &opts)?;
    write_file(out, &write_sweep_csv(&rows))?;
    let _ = writeln!(log, "range_hz={:e},{:e}", opts.f_start, opts.f_stop);
    Ok(())
}

/// Executes a parsed command, writing reports to `log`.
pub fn execute(cli: &Cli, log: &mut dyn Write) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Sweep { config, out, plot } => cmd_sweep(config, out, plot.as_deref(), log),
        Command::Fit { config, reference, out } => cmd_fit(config, reference, out, log),
        Command::Cpw { width, gap, eps_r } => cmd_cpw(*width, *gap, *eps_r, log),
        Command::Import { table, config, out } => cmd_import(table, config, out, log),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
