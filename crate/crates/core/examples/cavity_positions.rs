// Half-wave resonator with the transmon at the input end, the centre and the
// output end, plus the centre tap spread over the transmon's extent.
//
// $ cargo run --release --example cavity_positions

use std::path::Path;

use purcell_t1::config::DeviceConfig;
use purcell_t1::sweep::run_sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for name in ["cavity_sps_input", "cavity_sps_middle", "cavity_sps_middle_split", "cavity_sps_output"] {
        let cfg = DeviceConfig::load(&dir.join(format!("{name}.json")))?;
        let model = cfg.device.build_model()?;
        let rows = run_sweep(&model, &cfg.sweep.options(None)?)?;
        let usable = rows.iter().filter_map(|r| Some((r.freq, r.t1()?, r.z_in.re())));
        let (f_min, t_min, _) = usable.clone().fold((0.0, f64::INFINITY, 0.0), |a, b| if b.1 < a.1 { b } else { a });
        let (f_max, t_max, _) = usable.clone().fold((0.0, 0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        let (f_re, _, re) = usable.fold((0.0, 0.0, 0.0), |a, b| if b.2 > a.2 { b } else { a });
        println!("{name}");
        println!("  max Re(Zin) {re:.3e} ohm at {:.4} GHz", f_re / 1e9);
        println!(
            "  min T1 {:.3e} s at {:.4} GHz, max T1 {:.3e} s at {:.4} GHz",
            t_min,
            f_min / 1e9,
            t_max,
            f_max / 1e9
        );
    }
    Ok(())
}
