// Behaviour of the shipped device configs and the builders' limiting cases.

mod common;

use std::time::Instant;

use common::{load, rel, waveguide, FF};
use purcell_t1::config::DeviceSection;
use purcell_t1::device::{build_cavity_sps, build_purcell_filtered, build_waveguide_sps};
use purcell_t1::sweep::{evaluate_at, run_sweep, SweepOptions, TransmonSettings};

const SHIPPED: [&str; 7] = [
    "waveguide_sps.json",
    "cavity_sps_input.json",
    "cavity_sps_middle.json",
    "cavity_sps_middle_split.json",
    "cavity_sps_output.json",
    "purcell.json",
    "netlist_example.json",
];

#[test]
fn shipped_configs_validate_and_sweep_quickly() {
    for name in SHIPPED {
        let cfg = load(name);
        let model = cfg.device.build_model().unwrap();
        let opts = cfg.sweep.options(None).unwrap();
        let start = Instant::now();
        let rows = run_sweep(&model, &opts).unwrap();
        assert!(start.elapsed().as_secs_f64() < 1.0, "{name}");
        assert_eq!(rows.len(), opts.points);
        assert!(rows.windows(2).all(|w| w[0].freq < w[1].freq));
    }
}

#[test]
fn waveguide_rows_are_all_usable() {
    let cfg = load("waveguide_sps.json");
    let rows = run_sweep(&cfg.device.build_model().unwrap(), &cfg.sweep.options(None).unwrap()).unwrap();
    assert_eq!(rows.len(), 401);
    assert!(rows.iter().all(|r| r.t1().is_some_and(|t| t.is_finite() && t > 0.0) && r.flags.is_empty()));
}

#[test]
fn vanishing_coupling_removes_loss() {
    let mut last = f64::INFINITY;
    for c_g in [1e-15, 1e-17, 1e-19, 1e-21] {
        let m = build_waveguide_sps(&waveguide(90.0 * FF, c_g)).unwrap();
        let re = m.zin(5e9).unwrap().re();
        assert!(re > 0.0 && re < last);
        last = re;
    }
    assert!(last < 1e-10);
}

fn feature_frequencies() -> (f64, f64) {
    let freqs: Vec<f64> = (0..=4000).map(|i| 4.5e9 + 2.5e5 * i as f64).collect();
    let re = |name: &str| -> Vec<f64> {
        let m = load(name).device.build_model().unwrap();
        freqs.iter().map(|&f| m.zin(f).unwrap().re()).collect()
    };
    let input = re("cavity_sps_input.json");
    let middle = re("cavity_sps_middle.json");
    let peak = (0..input.len()).max_by(|&a, &b| input[a].total_cmp(&input[b])).unwrap();
    // deepest interior local minimum of the middle tap
    let dip = (1..middle.len() - 1)
        .filter(|&i| middle[i] < middle[i - 1] && middle[i] < middle[i + 1])
        .min_by(|&a, &b| middle[a].total_cmp(&middle[b]))
        .unwrap();
    (freqs[peak], freqs[dip])
}

#[test]
fn middle_tap_sits_on_a_voltage_null() {
    let (peak, dip) = feature_frequencies();
    assert!(rel(peak, 5e9) < 0.01, "{peak}");
    assert!(rel(dip, peak) < 0.02, "{dip} vs {peak}");
}

#[test]
fn vanishing_stubs_recover_the_bare_cavity() {
    let DeviceSection::PurcellFiltered(mut p) = load("purcell.json").device else { panic!() };
    for s in &mut p.stubs {
        s.line.length = 1e-9;
    }
    let freqs: Vec<f64> = (0..81).map(|i| 5.5e9 + 2.5e7 * i as f64).collect();
    let s = TransmonSettings::default();
    let a = evaluate_at(&build_purcell_filtered(&p).unwrap(), &freqs, &s).unwrap();
    let b = evaluate_at(&build_cavity_sps(&p.cavity).unwrap(), &freqs, &s).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(rel(x.t1().unwrap(), y.t1().unwrap()) < 1e-3);
    }
}

#[test]
fn stub_end_capacitance_barely_matters() {
    let DeviceSection::PurcellFiltered(p) = load("purcell.json").device else { panic!() };
    let t1 = |c_open: f64| {
        let mut q = p.clone();
        q.c_open = c_open;
        let m = build_purcell_filtered(&q).unwrap();
        evaluate_at(&m, &[6.58e9], &TransmonSettings::default()).unwrap()[0].t1().unwrap()
    };
    let reference = t1(0.01 * FF);
    // up to 0.1 fF; at 1 fF the stub zero moves by about 9 MHz
    for c in [0.001, 0.003, 0.03, 0.1] {
        assert!(rel(t1(c * FF), reference) < 0.01, "{c} fF");
    }
}

#[test]
fn split_tap_converges_to_point_tap() {
    let DeviceSection::CavitySps(mut p) = load("cavity_sps_middle_split.json").device else { panic!() };
    let freqs = [4.5e9, 4.9e9, 5.2e9, 5.8e9];
    let point = {
        let mut q = p;
        q.tap = purcell_t1::device::TapMode::Point;
        evaluate_at(&build_cavity_sps(&q).unwrap(), &freqs, &TransmonSettings::default()).unwrap()
    };
    p.tap = purcell_t1::device::TapMode::Split { extent: 1e-9 };
    let split = evaluate_at(&build_cavity_sps(&p).unwrap(), &freqs, &TransmonSettings::default()).unwrap();
    for (a, b) in point.iter().zip(&split) {
        assert!(rel(b.t1().unwrap(), a.t1().unwrap()) < 1e-6);
    }
}

#[test]
fn sweeps_accept_higher_levels() {
    let m = build_waveguide_sps(&waveguide(90.0 * FF, 10.0 * FF)).unwrap();
    let mut o = SweepOptions::new(4e9, 8e9, 5);
    let t0 = run_sweep(&m, &o).unwrap();
    o.level = 1;
    let t1 = run_sweep(&m, &o).unwrap();
    // |<1|n|2>|² = 2 |<0|n|1>|²
    for (a, b) in t0.iter().zip(&t1) {
        assert!(rel(a.gamma().unwrap() * 2.0, b.gamma().unwrap()) < 1e-12);
    }
}
