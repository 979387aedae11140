//! Chain-matrix (ABCD) algebra for reciprocal two-ports and the reduction of
//! a terminated cascade to a one-port input impedance.
//!
//! Port 1 of every matrix faces the Josephson junction; cascades run from the
//! junction toward the termination. All lines are lossless.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{angular, SPEED_OF_LIGHT};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const J: Complex64 = Complex64::new(0.0, 1.0);

/// A complex impedance (Ω) or admittance (S) at one frequency.
///
/// `ResonantOpen` stands for an infinite impedance (zero admittance) reached at
/// a pole of a lossless network. It is a value, not an error, so sweeps can
/// cross poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexImmittance {
    Impedance(Complex64),
    Admittance(Complex64),
    ResonantOpen,
}

impl ComplexImmittance {
    pub fn impedance(re: f64, im: f64) -> Self {
        Self::Impedance(Complex64::new(re, im))
    }

    pub fn admittance(re: f64, im: f64) -> Self {
        Self::Admittance(Complex64::new(re, im))
    }

    pub fn short() -> Self {
        Self::Impedance(ZERO)
    }

    pub fn is_resonant_open(&self) -> bool {
        match self {
            Self::ResonantOpen => true,
            Self::Admittance(y) => *y == ZERO,
            Self::Impedance(_) => false,
        }
    }

    pub fn is_short(&self) -> bool {
        matches!(self, Self::Impedance(z) if *z == ZERO)
    }

    /// Impedance in Ω; `None` for an open.
    pub fn as_impedance(&self) -> Option<Complex64> {
        match *self {
            Self::Impedance(z) => Some(z),
            Self::Admittance(y) if y == ZERO => None,
            Self::Admittance(y) => Some(y.inv()),
            Self::ResonantOpen => None,
        }
    }

    /// Admittance in S; `None` for a short.
    pub fn as_admittance(&self) -> Option<Complex64> {
        match *self {
            Self::Impedance(z) if z == ZERO => None,
            Self::Impedance(z) => Some(z.inv()),
            Self::Admittance(y) => Some(y),
            Self::ResonantOpen => Some(ZERO),
        }
    }

    /// Same value viewed as an impedance; opens stay `ResonantOpen`.
    pub fn to_impedance(self) -> Self {
        match self.as_impedance() {
            Some(z) => Self::Impedance(z),
            None => Self::ResonantOpen,
        }
    }

    /// Same value viewed as an admittance. A short has no finite admittance
    /// and is returned unchanged.
    pub fn to_admittance(self) -> Self {
        match self.as_admittance() {
            Some(y) => Self::Admittance(y),
            None => self,
        }
    }

    /// Real part of the stored representation (Ω or S); infinite for an open.
    pub fn re(&self) -> f64 {
        match self {
            Self::Impedance(z) | Self::Admittance(z) => z.re,
            Self::ResonantOpen => f64::INFINITY,
        }
    }

    /// Imaginary part of the stored representation (Ω or S); infinite for an open.
    pub fn im(&self) -> f64 {
        match self {
            Self::Impedance(z) | Self::Admittance(z) => z.im,
            Self::ResonantOpen => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Self::Impedance(z) | Self::Admittance(z) => z.re.is_finite() && z.im.is_finite(),
            Self::ResonantOpen => false,
        }
    }
}

/// Lossless transmission line section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmissionLine {
    /// Characteristic impedance (Ω).
    pub z0: f64,
    /// Effective relative permittivity.
    pub eps_eff: f64,
    /// Physical length (m).
    pub length: f64,
}

impl TransmissionLine {
    pub fn new(z0: f64, eps_eff: f64, length: f64) -> Self {
        Self { z0, eps_eff, length }
    }

    /// Phase constant β (rad/m) at `freq`.
    pub fn beta(&self, freq: f64) -> f64 {
        angular(freq) * self.eps_eff.sqrt() / SPEED_OF_LIGHT
    }

    /// Electrical length βℓ (rad).
    pub fn electrical_length(&self, freq: f64) -> f64 {
        self.beta(freq) * self.length
    }

    /// Guided wavelength (m) at `freq`.
    pub fn wavelength(&self, freq: f64) -> f64 {
        SPEED_OF_LIGHT / (freq * self.eps_eff.sqrt())
    }

    /// Same cross-section, different length.
    pub fn with_length(&self, length: f64) -> Self {
        Self { length, ..*self }
    }

    /// Frequency (Hz) at which this line is `fraction` of a guided wavelength long.
    pub fn frequency_for_fraction(&self, fraction: f64) -> f64 {
        fraction * SPEED_OF_LIGHT / (self.length * self.eps_eff.sqrt())
    }
}

/// 2×2 complex chain matrix. `b` is in Ω, `c` in S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcdMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl AbcdMatrix {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    /// Series impedance `z` (Ω).
    pub fn series(z: Complex64) -> Self {
        Self::new(ONE, z, ZERO, ONE)
    }

    /// Shunt admittance `y` (S).
    pub fn shunt(y: Complex64) -> Self {
        Self::new(ONE, ZERO, y, ONE)
    }

    /// Lossless line: `[[cos βℓ, jZ0 sin βℓ], [j sin βℓ / Z0, cos βℓ]]`.
    pub fn tline(line: &TransmissionLine, freq: f64) -> Self {
        let theta = line.electrical_length(freq);
        let (s, c) = theta.sin_cos();
        Self::new(Complex64::new(c, 0.0), J * (line.z0 * s), J * (s / line.z0), Complex64::new(c, 0.0))
    }

    /// Matrix product `self · next`: `self` sits nearer the junction.
    pub fn cascade(&self, next: &AbcdMatrix) -> Self {
        Self::new(
            self.a * next.a + self.b * next.c,
            self.a * next.b + self.b * next.d,
            self.c * next.a + self.d * next.c,
            self.c * next.b + self.d * next.d,
        )
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Input impedance at port 1 with port 2 terminated by `load`.
    ///
    /// `(a·ZL + b) / (c·ZL + d)`, or `a / c` for an open load. A vanishing
    /// denominator yields `ResonantOpen`.
    pub fn input_impedance(&self, load: ComplexImmittance) -> ComplexImmittance {
        let (num, den) = match load.as_impedance() {
            Some(zl) => (self.a * zl + self.b, self.c * zl + self.d),
            None => (self.a, self.c),
        };
        if den == ZERO {
            return ComplexImmittance::ResonantOpen;
        }
        let z = num / den;
        if z.re.is_finite() && z.im.is_finite() {
            ComplexImmittance::Impedance(z)
        } else {
            ComplexImmittance::ResonantOpen
        }
    }
}

impl Default for AbcdMatrix {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for AbcdMatrix {
    type Output = AbcdMatrix;

    fn mul(self, rhs: AbcdMatrix) -> AbcdMatrix {
        self.cascade(&rhs)
    }
}

impl std::iter::Product for AbcdMatrix {
    fn product<I: Iterator<Item = AbcdMatrix>>(iter: I) -> Self {
        iter.fold(AbcdMatrix::identity(), |acc, m| acc.cascade(&m))
    }
}

/// Input impedance of an open-circuited lossless stub, `-jZ0 cot βℓ`.
///
/// The result is purely reactive. `βℓ = nπ` gives `ResonantOpen`.
pub fn open_stub_impedance(line: &TransmissionLine, freq: f64) -> ComplexImmittance {
    let theta = line.electrical_length(freq);
    let (s, c) = theta.sin_cos();
    if s == 0.0 {
        return ComplexImmittance::ResonantOpen;
    }
    // cos(π/2) is ~6e-17 in floating point; snap the quarter-wave short.
    let cot = if c.abs() < 1e-15 { 0.0 } else { c / s };
    ComplexImmittance::Impedance(Complex64::new(0.0, -line.z0 * cot))
}

/// Parallel combination: admittances add, opens contribute nothing, a short
/// member shorts the node. All-open (or empty) gives `ResonantOpen`.
pub fn parallel_combine<I>(members: I) -> ComplexImmittance
where
    I: IntoIterator<Item = ComplexImmittance>,
{
    let mut total = ZERO;
    for m in members {
        match m.as_admittance() {
            Some(y) => total += y,
            None => return ComplexImmittance::short(),
        }
    }
    if total == ZERO {
        ComplexImmittance::ResonantOpen
    } else {
        ComplexImmittance::Impedance(total.inv())
    }
}
