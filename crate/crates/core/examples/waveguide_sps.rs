// Transmon on a matched emission line: T1 from the full network against the
// continuum-limit expression, and the CSV a sweep writes.
//
// $ cargo run --release --example waveguide_sps

use std::path::Path;

use purcell_t1::config::{DeviceConfig, DeviceSection};
use purcell_t1::device::build_waveguide_sps;
use purcell_t1::sweep::{run_sweep, write_sweep_csv};
use purcell_t1::transmon::ser_lumped_waveguide;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/waveguide_sps.json");
    let cfg = DeviceConfig::load(&path)?;
    let DeviceSection::WaveguideSps(p) = cfg.device else { unreachable!() };
    let model = build_waveguide_sps(&p)?;
    let rows = run_sweep(&model, &cfg.sweep.options(None)?)?;

    println!("{:>8} {:>12} {:>12} {:>8}", "f (GHz)", "T1 net (us)", "T1 lump (us)", "valid");
    for r in rows.iter().step_by(50) {
        let lumped = ser_lumped_waveguide(r.freq, p.z0, p.c_g_emit, p.c_q)?;
        println!(
            "{:>8.2} {:>12.4} {:>12.4} {:>8}",
            r.freq / 1e9,
            r.t1().unwrap() * 1e6,
            lumped.t1() * 1e6,
            lumped.is_valid()
        );
    }
    let csv = write_sweep_csv(&rows);
    println!("\nfirst CSV lines:");
    for line in csv.lines().take(3) {
        println!("{line}");
    }
    Ok(())
}
