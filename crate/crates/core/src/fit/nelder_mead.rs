//! Nelder–Mead simplex on the unit box `[0, 1]^n`.
//!
//! Trial points that leave the box are folded back by reflection at the
//! violated face, so every evaluated point is feasible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop when `max f − min f` over the simplex falls below this.
    pub loss_tolerance: f64,
    /// Stop when every vertex is within this (box units) of the best.
    pub parameter_tolerance: f64,
    /// Edge lengths of the initial simplex are drawn from `[step, 2·step)`.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_iterations: 2000, loss_tolerance: 1e-12, parameter_tolerance: 1e-9, initial_step: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub loss: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Folds `v` into `[0, 1]` by mirror reflection at the faces.
pub fn reflect_into_unit(v: f64) -> f64 {
    if !v.is_finite() {
        return v.clamp(0.0, 1.0);
    }
    let m = v.rem_euclid(2.0);
    if m > 1.0 {
        2.0 - m
    } else {
        m
    }
}

/// Minimizes `loss` starting from `x0` (in box units). Non-finite losses
/// count as `+∞`. Returns the offending value when the loss at `x0` is not
/// finite.
pub fn minimize<F>(mut loss: F, x0: &[f64], opts: &NelderMeadOptions, seed: u64) -> Result<Minimum, f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = loss(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let start: Vec<f64> = x0.iter().map(|&v| reflect_into_unit(v)).collect();
    let f0 = eval(&start);
    if !f0.is_finite() {
        return Err(f0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.clone(), f0)];
    for i in 0..n {
        let mut v = start.clone();
        let step = opts.initial_step * (1.0 + rng.gen::<f64>());
        // step toward the interior
        v[i] = if start[i] > 0.5 { start[i] - step } else { start[i] + step };
        let f = eval(&v);
        simplex.push((v, f));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let loss_spread = if worst.is_finite() { worst - best } else { f64::INFINITY };
        let param_spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if loss_spread < opts.loss_tolerance || param_spread < opts.parameter_tolerance {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64).collect();
        let toward = |coef: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| reflect_into_unit(c + coef * (c - w))).collect()
        };

        let xr = toward(REFLECT);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = toward(REFLECT * EXPAND);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let x = toward(REFLECT * CONTRACT);
            let f = eval(&x);
            (x, f)
        } else {
            let x = toward(-CONTRACT);
            let f = eval(&x);
            (x, f)
        };
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let shrunk: Vec<f64> = anchor.iter().zip(&vertex.0).map(|(b, v)| b + SHRINK * (v - b)).collect();
            let f = eval(&shrunk);
            *vertex = (shrunk, f);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, loss) = simplex.swap_remove(0);
    Ok(Minimum { x, loss, iterations, evaluations, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn folding() {
        assert_eq!(reflect_into_unit(0.3), 0.3);
        assert_relative_eq!(reflect_into_unit(-0.2), 0.2);
        assert_relative_eq!(reflect_into_unit(1.25), 0.75);
        assert_relative_eq!(reflect_into_unit(2.25), 0.25);
        assert_eq!(reflect_into_unit(f64::INFINITY), 1.0);
    }

    #[test]
    fn finds_quadratic_minimum() {
        let target = [0.2, 0.7, 0.45];
        let f = |x: &[f64]| x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let m = minimize(f, &[0.9, 0.1, 0.5], &NelderMeadOptions::default(), 1).unwrap();
        assert!(m.converged);
        for (a, b) in m.x.iter().zip(target) {
            assert!((a - b).abs() < 1e-5, "{:?}", m.x);
        }
    }

    #[test]
    fn rosenbrock_in_box() {
        // minimum at (0.5, 0.5) after mapping u = 4x − 1
        let f = |x: &[f64]| {
            let (a, b) = (4.0 * x[0] - 1.0, 4.0 * x[1] - 1.0);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let opts = NelderMeadOptions { max_iterations: 5000, ..Default::default() };
        let m = minimize(f, &[0.1, 0.9], &opts, 3).unwrap();
        assert!((m.x[0] - 0.5).abs() < 1e-4 && (m.x[1] - 0.5).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn boundary_minimum_stays_feasible() {
        let m = minimize(|x: &[f64]| x[0], &[0.6], &NelderMeadOptions::default(), 0).unwrap();
        assert!(m.x[0] >= 0.0 && m.x[0] < 1e-6);
    }

    #[test]
    fn non_finite_start_is_rejected() {
        assert!(minimize(|_: &[f64]| f64::NAN, &[0.5], &NelderMeadOptions::default(), 0).is_err());
    }

    #[test]
    fn iteration_cap_reports_unconverged() {
        let opts = NelderMeadOptions { max_iterations: 3, ..Default::default() };
        let m = minimize(|x: &[f64]| (x[0] - 0.3).powi(2) + (x[1] - 0.6).powi(2), &[0.9, 0.9], &opts, 0).unwrap();
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }

    #[test]
    fn deterministic_per_seed() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + (x[1] - 0.6).powi(4);
        let a = minimize(f, &[0.9, 0.9], &NelderMeadOptions::default(), 42).unwrap();
        let b = minimize(f, &[0.9, 0.9], &NelderMeadOptions::default(), 42).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn never_leaves_the_box(t0 in 0.0..1.0f64, t1 in 0.0..1.0f64, s in 0u64..100) {
            let f = |x: &[f64]| (x[0] - 1.7).powi(2) + (x[1] + 0.4).powi(2);
            let opts = NelderMeadOptions { max_iterations: 200, ..Default::default() };
            let m = minimize(f, &[t0, t1], &opts, s).unwrap();
            prop_assert!(m.x.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
