#![allow(dead_code)]

use std::path::PathBuf;

use purcell_t1::config::DeviceConfig;
use purcell_t1::device::WaveguideSpsParams;

pub const FF: f64 = 1e-15;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

pub fn load(name: &str) -> DeviceConfig {
    DeviceConfig::load(&config_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn waveguide(c_q: f64, c_g: f64) -> WaveguideSpsParams {
    WaveguideSpsParams { c_q, c_g_emit: c_g, c_g_ctrl: 0.0, z0: 50.0, r_emit: 50.0, r_ctrl: 50.0 }
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Dense complex Gaussian elimination with partial pivoting, written
/// independently of the library's solver.
pub fn solve(
    mut a: Vec<Vec<num_complex::Complex64>>,
    mut b: Vec<num_complex::Complex64>,
) -> Vec<num_complex::Complex64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            let pivot = a[k].clone();
            for (x, p) in a[i][k..].iter_mut().zip(&pivot[k..]) {
                *x -= m * p;
            }
            let t = b[k];
            b[i] -= m * t;
        }
    }
    let mut x = vec![num_complex::Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: num_complex::Complex64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}
