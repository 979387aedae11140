// Export a model's junction impedance as a Touchstone file, read it back and
// compare the emission pipeline on the table against the model.
//
// $ cargo run --release --example export_import_touchstone
// $ cargo run --release --example export_import_touchstone -- configs/waveguide_sps.s1p

use std::path::Path;

use purcell_t1::config::DeviceConfig;
use purcell_t1::io::{parse_touchstone_s1p, write_touchstone_s1p, DataFormat, ImpedanceSample, ImpedanceTable};
use purcell_t1::sweep::{evaluate_at, SweepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let cfg = DeviceConfig::load(&root.join("configs/waveguide_sps.json"))?;
    let model = cfg.device.build_model()?;

    let grid = SweepOptions::new(3e9, 9e9, 601).frequencies();
    let rows = grid
        .iter()
        .map(|&f| Ok(ImpedanceSample { freq: f, z: model.zin(f)?.as_impedance().expect("finite") }))
        .collect::<Result<Vec<_>, purcell_t1::device::DeviceError>>()?;
    let table = ImpedanceTable::new(rows, Some(50.0), "waveguide_sps")?;
    let text = write_touchstone_s1p(&table, DataFormat::Ma, 50.0);
    if let Some(out) = std::env::args().nth(1) {
        std::fs::write(root.join(&out), &text)?;
        println!("wrote {out}");
    }

    let back = parse_touchstone_s1p(&text)?;
    let settings = cfg.sweep.settings();
    let probe: Vec<f64> = grid.iter().step_by(100).copied().collect();
    let native = evaluate_at(&model, &probe, &settings)?;
    let imported = evaluate_at(&back, &probe, &settings)?;
    for (a, b) in native.iter().zip(&imported) {
        let (ta, tb) = (a.t1().unwrap(), b.t1().unwrap());
        println!(
            "{:.1} GHz  T1 model {:.6e} s  table {:.6e} s  rel diff {:.1e}",
            a.freq / 1e9,
            ta,
            tb,
            (tb / ta - 1.0).abs()
        );
    }
    Ok(())
}
