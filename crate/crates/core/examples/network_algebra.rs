// ABCD chain matrices: cascading, input impedance, and the open stub that
// turns into a short at its quarter-wave frequency.
//
// $ cargo run --example network_algebra

use purcell_t1::network::{open_stub_impedance, parallel_combine, AbcdMatrix, ComplexImmittance, TransmissionLine};
use purcell_t1::Complex64;

fn main() {
    let f = 5e9;
    let line = TransmissionLine::new(50.0, 6.34, 3e-3);
    let cg = 10e-15;
    let series = AbcdMatrix::series(Complex64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI * f * cg)));

    let chain = series * AbcdMatrix::tline(&line, f);
    println!("det(series * line) = {:.3e}", chain.det());
    let zin = chain.input_impedance(ComplexImmittance::impedance(50.0, 0.0));
    println!("Zin into Cg + line + 50 ohm = {:?}", zin.as_impedance().unwrap());

    // a half-wave section is invisible
    let half = line.with_length(line.wavelength(f) / 2.0);
    let z = AbcdMatrix::tline(&half, f).input_impedance(ComplexImmittance::impedance(20.0, 7.0));
    println!("half-wave line loaded with 20+7j ohm: {:?}", z.as_impedance().unwrap());

    // open stub: capacitive below, short at, inductive above the quarter wave
    let stub = TransmissionLine::new(50.0, 6.325, 4.532e-3);
    let f_quarter = stub.frequency_for_fraction(0.25);
    println!("stub quarter-wave frequency = {:.4} GHz", f_quarter / 1e9);
    for scale in [0.9, 1.0, 1.1] {
        let z = open_stub_impedance(&stub, scale * f_quarter);
        println!("  {:.4} GHz: Z = {:?}", scale * f_quarter / 1e9, z.as_impedance().unwrap());
    }

    // a short anywhere in a parallel group shorts the node
    let node = parallel_combine([ComplexImmittance::impedance(50.0, 0.0), ComplexImmittance::short()]);
    println!("50 ohm || short -> short: {}", node.is_short());
}
