// Fit the continuum-limit couplings C_g, C_q (with C_g + C_q fixed) to the
// T1 curve of the full waveguide network.
//
// $ cargo run --release --example fit_lumped_ratio

use std::path::Path;

use purcell_t1::config::DeviceConfig;
use purcell_t1::fit::{fit_parameters, FitProblem};
use purcell_t1::sweep::run_sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/waveguide_sps.json");
    let cfg = DeviceConfig::load(&path)?;
    let model = cfg.device.build_model()?;
    let rows = run_sweep(&model, &cfg.sweep.options(None)?)?;
    let reference: Vec<(f64, f64)> = rows.iter().filter_map(|r| Some((r.freq, r.t1()?))).collect();

    let fit = cfg.fit.as_ref().expect("config has a fit block");
    let problem = FitProblem::from_section(fit, &cfg.device, reference, cfg.sweep.settings())?;
    let out = fit_parameters(&problem, fit.seed)?;
    for (name, v) in &out.params {
        println!("{name} = {:.4} fF", v * 1e15);
    }
    println!("loss = {:.3e}, iterations = {}, converged = {}", out.loss, out.iterations, out.converged);
    Ok(())
}
