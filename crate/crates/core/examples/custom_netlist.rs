// A circuit the ladder builders cannot express, solved by nodal analysis:
// a capacitively coupled line with a mid-span parasitic and a side stub.
//
// $ cargo run --example custom_netlist

use purcell_t1::device::{DeviceModel, Lumped, Netlist, OnePort};
use purcell_t1::network::TransmissionLine;
use purcell_t1::sweep::{run_sweep, SweepOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut net = Netlist::new();
    let q = net.junction();
    let (a, b, c) = (net.add_node("a"), net.add_node("b"), net.add_node("c"));
    let gnd = purcell_t1::device::Node::Ground;
    net.connect(q, a, Lumped::Capacitor(8e-15))?;
    net.connect_line(a, b, TransmissionLine::new(50.0, 6.34, 1e-3))?;
    net.connect(b, gnd, Lumped::Capacitor(1e-15))?;
    net.connect_line(b, c, TransmissionLine::new(50.0, 6.34, 1e-3))?;
    net.connect(c, gnd, Lumped::Resistor(50.0))?;
    // shorted side stub hanging off node b
    net.attach(
        b,
        OnePort::chain(
            vec![purcell_t1::device::ChainElement::Line(TransmissionLine::new(50.0, 6.34, 2e-3))],
            OnePort::Short,
        ),
    )?;
    let model = DeviceModel::nodal("side_stub", 90e-15, net);

    let rows = run_sweep(&model, &SweepOptions::new(4e9, 8e9, 9))?;
    for r in rows {
        let z = r.z_in.as_impedance().unwrap();
        println!("{:.1} GHz  Zin = {:.4e} {:+.4e}j ohm  T1 = {:?} s", r.freq / 1e9, z.re, z.im, r.t1());
    }
    Ok(())
}
