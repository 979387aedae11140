// Charging energy, pinned Josephson energy and charge matrix elements of a
// transmon, and the classical T1 = C/Re{Y} cross-check.
//
// $ cargo run --example transmon_levels

use purcell_t1::constants::PLANCK;
use purcell_t1::transmon::{ser_from_zin, t1_classical, t1_from_rate, TransmonState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c_sigma = 100e-15;
    let f = 5e9;
    for level in 0..3 {
        let s = TransmonState::pinned(c_sigma, f, level)?;
        println!(
            "j={level}: E_C/h = {:.2} MHz, E_J/h = {:.3} GHz, E_J/E_C = {:.1}, n = {:.4}",
            s.e_c / PLANCK / 1e6,
            s.e_j / PLANCK / 1e9,
            s.ej_ec_ratio(),
            s.matrix_element()?
        );
    }

    // weakly damped node: Z ~ 1/(jωC) with a small real part
    let s = TransmonState::pinned(c_sigma, f, 0)?;
    let omega = 2.0 * std::f64::consts::PI * f;
    let re_y = 1e-7;
    let y = purcell_t1::Complex64::new(re_y, omega * c_sigma);
    let z = 1.0 / y;
    let quantum = t1_from_rate(ser_from_zin(f, s.matrix_element()?, z.re)?);
    let classical = t1_classical(c_sigma, re_y)?;
    println!("T1 from Re(Z): {quantum:.6e} s, C/Re(Y): {classical:.6e} s");
    Ok(())
}
