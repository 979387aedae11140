// Junction impedance from hand-assembled admittance matrices, compared with
// the library's ladder reduction.

mod common;

use std::f64::consts::PI;

use common::{rel, solve, waveguide, FF};
use purcell_t1::constants::SPEED_OF_LIGHT;
use purcell_t1::device::{build_cavity_sps, build_waveguide_sps, CavitySpsParams, TapMode};
use purcell_t1::network::TransmissionLine;
use purcell_t1::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;

struct Stamp {
    y: Vec<Vec<C>>,
}

impl Stamp {
    fn new(n: usize) -> Self {
        Self { y: vec![vec![C::new(0.0, 0.0); n]; n] }
    }

    // `None` is ground
    fn branch(&mut self, a: Option<usize>, b: Option<usize>, y: C) {
        if let Some(a) = a {
            self.y[a][a] += y;
        }
        if let Some(b) = b {
            self.y[b][b] += y;
        }
        if let (Some(a), Some(b)) = (a, b) {
            self.y[a][b] -= y;
            self.y[b][a] -= y;
        }
    }

    fn line(&mut self, a: usize, b: usize, z0: f64, eps_eff: f64, len: f64, f: f64) {
        let bl = 2.0 * PI * f * eps_eff.sqrt() * len / SPEED_OF_LIGHT;
        let y11 = C::new(0.0, -1.0 / (z0 * bl.tan()));
        let y12 = C::new(0.0, 1.0 / (z0 * bl.sin()));
        self.y[a][a] += y11;
        self.y[b][b] += y11;
        self.y[a][b] += y12;
        self.y[b][a] += y12;
    }

    fn zin(self) -> C {
        let n = self.y.len();
        let mut i = vec![C::new(0.0, 0.0); n];
        i[0] = C::new(1.0, 0.0);
        solve(self.y, i)[0]
    }
}

fn cap(f: f64, c: f64) -> C {
    C::new(0.0, 2.0 * PI * f * c)
}

#[test]
fn waveguide_three_node_oracle() {
    let mut p = waveguide(90.0 * FF, 10.0 * FF);
    p.c_g_ctrl = 0.5 * FF;
    p.r_ctrl = 75.0;
    let model = build_waveguide_sps(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let f = rng.gen_range(4e9..8e9);
        // nodes: junction, emission pad, control pad
        let mut s = Stamp::new(3);
        s.branch(Some(0), None, cap(f, p.c_q));
        s.branch(Some(0), Some(1), cap(f, p.c_g_emit));
        s.branch(Some(1), None, C::new(1.0 / p.r_emit, 0.0));
        s.branch(Some(0), Some(2), cap(f, p.c_g_ctrl));
        s.branch(Some(2), None, C::new(1.0 / p.r_ctrl, 0.0));
        let z_oracle = s.zin();
        let z = model.zin(f).unwrap().as_impedance().unwrap();
        assert!((z - z_oracle).norm() / z_oracle.norm() < 1e-10, "{f}: {z} vs {z_oracle}");
    }
}

#[test]
fn cavity_six_node_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let len = 11.93e-3;
        let p = CavitySpsParams {
            c_q: rng.gen_range(50.0..100.0) * FF,
            c_g: rng.gen_range(1.0..5.0) * FF,
            c1: rng.gen_range(0.5..3.0) * FF,
            c2: rng.gen_range(3.0..6.0) * FF,
            resonator: TransmissionLine::new(44.0, 6.325, len),
            tap_position: rng.gen_range(0.05..0.95) * len,
            r1: 50.0,
            r2: rng.gen_range(25.0..100.0),
            tap: TapMode::Point,
        };
        let f = rng.gen_range(4e9..8e9);
        // nodes: junction, tap, input end, output end, input pad, output pad
        let mut s = Stamp::new(6);
        s.branch(Some(0), None, cap(f, p.c_q));
        s.branch(Some(0), Some(1), cap(f, p.c_g));
        s.line(1, 2, 44.0, 6.325, p.tap_position, f);
        s.line(1, 3, 44.0, 6.325, len - p.tap_position, f);
        s.branch(Some(2), Some(4), cap(f, p.c1));
        s.branch(Some(4), None, C::new(1.0 / p.r1, 0.0));
        s.branch(Some(3), Some(5), cap(f, p.c2));
        s.branch(Some(5), None, C::new(1.0 / p.r2, 0.0));
        let z_oracle = s.zin();
        let z = build_cavity_sps(&p).unwrap().zin(f).unwrap().as_impedance().unwrap();
        assert!((z - z_oracle).norm() / z_oracle.norm() < 1e-9, "{f}: {z} vs {z_oracle}");
        assert!(rel(z.re, z_oracle.re) < 1e-6);
    }
}

#[test]
fn split_tap_matches_its_own_oracle() {
    let len = 11.93e-3;
    let extent = 0.288e-3;
    let p = CavitySpsParams {
        c_q: 80.0 * FF,
        c_g: 3.0 * FF,
        c1: 1.0 * FF,
        c2: 4.0 * FF,
        resonator: TransmissionLine::new(44.0, 6.325, len),
        tap_position: len / 2.0,
        r1: 50.0,
        r2: 50.0,
        tap: TapMode::Split { extent },
    };
    let model = build_cavity_sps(&p).unwrap();
    for f in [4.2e9, 4.97e9, 5.3e9, 7.1e9] {
        let (a, b) = (len / 2.0 - extent / 2.0, len / 2.0 + extent / 2.0);
        // nodes: junction, tap_in, tap_out, input end, output end, input pad, output pad
        let mut s = Stamp::new(7);
        s.branch(Some(0), None, cap(f, p.c_q));
        s.branch(Some(0), Some(1), cap(f, p.c_g / 2.0));
        s.branch(Some(0), Some(2), cap(f, p.c_g / 2.0));
        s.line(1, 3, 44.0, 6.325, a, f);
        s.line(1, 2, 44.0, 6.325, extent, f);
        s.line(2, 4, 44.0, 6.325, len - b, f);
        s.branch(Some(3), Some(5), cap(f, p.c1));
        s.branch(Some(5), None, C::new(1.0 / 50.0, 0.0));
        s.branch(Some(4), Some(6), cap(f, p.c2));
        s.branch(Some(6), None, C::new(1.0 / 50.0, 0.0));
        let z_oracle = s.zin();
        let z = model.zin(f).unwrap().as_impedance().unwrap();
        assert!((z - z_oracle).norm() / z_oracle.norm() < 1e-9, "{f}: {z} vs {z_oracle}");
    }
}
