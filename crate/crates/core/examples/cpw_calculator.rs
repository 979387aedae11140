// Characteristic impedance and effective permittivity of coplanar waveguides
// on silicon, from the conformal-mapping formula.
//
// $ cargo run --example cpw_calculator
// $ cargo run --example cpw_calculator -- 10e-6 3.75e-6 11.65

use purcell_t1::cpw::{cpw_params, CpwGeometry, SILICON_EPS_R};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let cases = match args.as_slice() {
        [w, s] => vec![(*w, *s, SILICON_EPS_R)],
        [w, s, er] => vec![(*w, *s, *er)],
        _ => vec![(10e-6, 5.8e-6, 11.68), (10e-6, 3.75e-6, 11.65), (15e-6, 10e-6, 11.68)],
    };
    println!("{:>10} {:>10} {:>8} {:>10} {:>9}", "w (um)", "s (um)", "eps_r", "Z0 (ohm)", "eps_eff");
    for (w, s, er) in cases {
        let geom = CpwGeometry::new(w, s, er)?;
        let p = cpw_params(&geom)?;
        println!("{:>10.3} {:>10.3} {:>8.3} {:>10.3} {:>9.4}", w * 1e6, s * 1e6, er, p.z0, p.eps_eff);
    }
    Ok(())
}
