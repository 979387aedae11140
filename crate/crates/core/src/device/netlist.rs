//! Nodal-admittance solver for topologies that are not ladders (loops,
//! multiple taps onto one line).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{require_positive, validate_line, DeviceError, Lumped, OnePort};
use crate::network::{ComplexImmittance, TransmissionLine};

/// Circuit node; `Ground` is the common reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Ground,
    Index(usize),
}

impl Node {
    fn index(self) -> Option<usize> {
        match self {
            Node::Ground => None,
            Node::Index(i) => Some(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetElement {
    Lumped {
        a: Node,
        b: Node,
        element: Lumped,
    },
    /// Two-conductor line between `(a, ground)` and `(b, ground)`.
    Line {
        a: Node,
        b: Node,
        line: TransmissionLine,
    },
    /// A ladder one-port hung from `node` to ground.
    OnePort {
        node: Node,
        port: OnePort,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    names: Vec<String>,
    junction: Node,
    elements: Vec<NetElement>,
}

impl Default for Netlist {
    fn default() -> Self {
        Self::new()
    }
}

impl Netlist {
    /// Empty netlist containing only the junction node.
    pub fn new() -> Self {
        Self { names: vec!["junction".into()], junction: Node::Index(0), elements: Vec::new() }
    }

    pub fn junction(&self) -> Node {
        self.junction
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> Node {
        self.names.push(name.into());
        Node::Index(self.names.len() - 1)
    }

    pub fn node_name(&self, node: Node) -> &str {
        match node {
            Node::Ground => "gnd",
            Node::Index(i) => &self.names[i],
        }
    }

    pub fn elements(&self) -> &[NetElement] {
        &self.elements
    }

    fn check_node(&self, node: Node) -> Result<(), DeviceError> {
        match node {
            Node::Index(i) if i >= self.names.len() => Err(DeviceError::Netlist(format!("unknown node index {i}"))),
            _ => Ok(()),
        }
    }

    pub fn connect(&mut self, a: Node, b: Node, element: Lumped) -> Result<(), DeviceError> {
        self.check_node(a)?;
        self.check_node(b)?;
        let (key, value) = match element {
            Lumped::Resistor(v) => ("resistor", v),
            Lumped::Capacitor(v) => ("capacitor", v),
            Lumped::Inductor(v) => ("inductor", v),
        };
        require_positive(key, value)?;
        if a == b {
            return Err(DeviceError::Netlist(format!("{key} connects node `{}` to itself", self.node_name(a))));
        }
        self.elements.push(NetElement::Lumped { a, b, element });
        Ok(())
    }

    pub fn connect_line(&mut self, a: Node, b: Node, line: TransmissionLine) -> Result<(), DeviceError> {
        self.check_node(a)?;
        self.check_node(b)?;
        validate_line("line", &line)?;
        require_positive("line.length", line.length)?;
        if a == b {
            return Err(DeviceError::Netlist(format!("line connects node `{}` to itself", self.node_name(a))));
        }
        self.elements.push(NetElement::Line { a, b, line });
        Ok(())
    }

    pub fn attach(&mut self, node: Node, port: OnePort) -> Result<(), DeviceError> {
        self.check_node(node)?;
        self.elements.push(NetElement::OnePort { node, port });
        Ok(())
    }

    pub fn has_resistor(&self) -> bool {
        self.elements.iter().any(|e| match e {
            NetElement::Lumped { element, .. } => element.is_resistive(),
            NetElement::Line { .. } => false,
            NetElement::OnePort { port, .. } => port.has_resistor(),
        })
    }

    /// Driving-point impedance at the junction node with an extra admittance
    /// `junction_shunt` to ground there.
    pub fn input_impedance(&self, freq: f64, junction_shunt: Complex64) -> Result<ComplexImmittance, DeviceError> {
        let n = self.names.len();
        let mut grounded = vec![false; n];
        let mut stamps: Vec<(usize, usize, Complex64)> = Vec::new();

        let two_terminal = |a: Node, b: Node, y: Complex64, stamps: &mut Vec<_>| {
            if let Some(i) = a.index() {
                stamps.push((i, i, y));
            }
            if let Some(j) = b.index() {
                stamps.push((j, j, y));
            }
            if let (Some(i), Some(j)) = (a.index(), b.index()) {
                stamps.push((i, j, -y));
                stamps.push((j, i, -y));
            }
        };

        if let Some(j) = self.junction.index() {
            stamps.push((j, j, junction_shunt));
        }
        for el in &self.elements {
            match el {
                NetElement::Lumped { a, b, element } => {
                    // positive values are enforced on insertion, so this is finite
                    let y = element.impedance(freq).as_admittance().unwrap_or_default();
                    two_terminal(*a, *b, y, &mut stamps);
                }
                NetElement::Line { a, b, line } => {
                    let theta = line.electrical_length(freq);
                    let (s, c) = theta.sin_cos();
                    if s == 0.0 {
                        return Err(DeviceError::SingularLine {
                            a: self.node_name(*a).to_string(),
                            b: self.node_name(*b).to_string(),
                            freq,
                        });
                    }
                    let self_y = Complex64::new(0.0, -c / (s * line.z0));
                    let mutual_y = Complex64::new(0.0, 1.0 / (s * line.z0));
                    for (p, q, y) in [(*a, *a, self_y), (*b, *b, self_y), (*a, *b, mutual_y), (*b, *a, mutual_y)] {
                        if let (Some(i), Some(j)) = (p.index(), q.index()) {
                            stamps.push((i, j, y));
                        }
                    }
                }
                NetElement::OnePort { node, port } => {
                    let Some(i) = node.index() else { continue };
                    match port.impedance(freq).as_admittance() {
                        Some(y) => stamps.push((i, i, y)),
                        None => grounded[i] = true,
                    }
                }
            }
        }

        let j = match self.junction.index() {
            Some(j) if !grounded[j] => j,
            _ => return Ok(ComplexImmittance::short()),
        };

        let mut y = DMatrix::<Complex64>::zeros(n, n);
        for (r, c, v) in stamps {
            if !grounded[r] && !grounded[c] {
                y[(r, c)] += v;
            }
        }
        for (i, g) in grounded.iter().enumerate() {
            if *g {
                y[(i, i)] = Complex64::new(1.0, 0.0);
            }
        }
        let mut rhs = DVector::<Complex64>::zeros(n);
        rhs[j] = Complex64::new(1.0, 0.0);
        match y.lu().solve(&rhs) {
            Some(v) if v[j].re.is_finite() && v[j].im.is_finite() => Ok(ComplexImmittance::Impedance(v[j])),
            _ => Ok(ComplexImmittance::ResonantOpen),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::ChainElement;
    use approx::assert_relative_eq;

    #[test]
    fn matches_ladder_reduction() {
        // Cq || (Cg → node a) ; a: line to R, plus shunt L
        let f = 5.3e9;
        let line = TransmissionLine::new(44.0, 6.325, 3e-3);
        let ladder = OnePort::chain(
            vec![
                ChainElement::Series(Lumped::Capacitor(5e-15)),
                ChainElement::Shunt(OnePort::Lumped(Lumped::Inductor(2e-9))),
                ChainElement::Line(line),
            ],
            OnePort::Lumped(Lumped::Resistor(50.0)),
        );
        let want = crate::network::parallel_combine([Lumped::Capacitor(80e-15).impedance(f), ladder.impedance(f)]);

        let mut net = Netlist::new();
        let a = net.add_node("a");
        let b = net.add_node("b");
        let jn = net.junction();
        net.connect(jn, a, Lumped::Capacitor(5e-15)).unwrap();
        net.connect(a, Node::Ground, Lumped::Inductor(2e-9)).unwrap();
        net.connect_line(a, b, line).unwrap();
        net.connect(b, Node::Ground, Lumped::Resistor(50.0)).unwrap();
        let yq = Lumped::Capacitor(80e-15).impedance(f).as_admittance().unwrap();
        let got = net.input_impedance(f, yq).unwrap().as_impedance().unwrap();
        let want = want.as_impedance().unwrap();
        assert_relative_eq!(got.re, want.re, max_relative = 1e-10);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-10);
    }

    #[test]
    fn grounded_junction_is_short() {
        let mut net = Netlist::new();
        let jn = net.junction();
        net.attach(jn, OnePort::Short).unwrap();
        assert!(net.input_impedance(1e9, Complex64::new(0.0, 1e-3)).unwrap().is_short());
    }

    #[test]
    fn rejects_bad_elements() {
        let mut net = Netlist::new();
        let jn = net.junction();
        assert!(net.connect(jn, Node::Ground, Lumped::Capacitor(-1e-15)).is_err());
        assert!(net.connect(jn, jn, Lumped::Resistor(1.0)).is_err());
        assert!(net.connect(jn, Node::Index(7), Lumped::Resistor(1.0)).is_err());
        assert!(net.connect_line(jn, Node::Ground, TransmissionLine::new(50.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn shorted_stub_via_grounded_line_end() {
        // a line from the junction to ground is a shorted stub: Z = jZ0 tan βℓ
        let f = 3e9;
        let line = TransmissionLine::new(50.0, 4.0, 2e-3);
        let mut net = Netlist::new();
        let jn = net.junction();
        net.connect_line(jn, Node::Ground, line).unwrap();
        let z = net.input_impedance(f, Complex64::new(0.0, 0.0)).unwrap().as_impedance().unwrap();
        assert_relative_eq!(z.im, 50.0 * line.electrical_length(f).tan(), max_relative = 1e-12);
    }
}
