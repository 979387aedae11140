// Quarter-wave stubs on the output feedline suppress emission near their
// zero: T1 with and without the stubs.
//
// $ cargo run --release --example purcell_filter

use std::path::Path;

use purcell_t1::config::{DeviceConfig, DeviceSection};
use purcell_t1::device::{build_cavity_sps, build_purcell_filtered};
use purcell_t1::sweep::{evaluate_at, run_sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/purcell.json");
    let cfg = DeviceConfig::load(&path)?;
    let DeviceSection::PurcellFiltered(p) = &cfg.device else { unreachable!() };
    let filtered = build_purcell_filtered(p)?;
    let bare = build_cavity_sps(&p.cavity)?;

    let opts = cfg.sweep.options(None)?;
    let rows = run_sweep(&filtered, &opts)?;
    let peak = rows.iter().filter(|r| r.t1().is_some()).max_by(|a, b| a.t1().partial_cmp(&b.t1()).unwrap()).unwrap();
    println!("filtered T1 peak: {:.3e} s at {:.4} GHz", peak.t1().unwrap(), peak.freq / 1e9);

    let settings = opts.settings();
    let probe = [6.0e9, 6.4e9, 6.58e9, 6.8e9, 7.2e9];
    let with = evaluate_at(&filtered, &probe, &settings)?;
    let without = evaluate_at(&bare, &probe, &settings)?;
    println!("{:>8} {:>14} {:>14} {:>10}", "f (GHz)", "T1 stubs (s)", "T1 bare (s)", "ratio");
    for (a, b) in with.iter().zip(&without) {
        let (ta, tb) = (a.t1().unwrap(), b.t1().unwrap());
        println!("{:>8.2} {:>14.4e} {:>14.4e} {:>10.1}", a.freq / 1e9, ta, tb, ta / tb);
    }
    Ok(())
}
