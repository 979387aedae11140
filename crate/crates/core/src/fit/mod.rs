//! Least-squares fitting of model `T1(f)` to a reference curve.
//!
//! The loss is the mean squared difference of `log10 T1` over the reference
//! frequencies. Free parameters are addressed by dotted paths into the
//! model's parameter object (`c_g`, `resonator.length`, `stubs.0.line.length`)
//! and mapped linearly onto the unit box searched by Nelder–Mead. An optional
//! sum constraint fixes one extra parameter as `total − Σ free terms`.

pub mod nelder_mead;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::config::{ConfigError, DeviceSection, FitModelSection, FitSection};
use crate::sweep::{evaluate_at, SweepError, TransmonSettings};
use crate::transmon::ser_lumped_waveguide;

pub use nelder_mead::{minimize, reflect_into_unit, Minimum, NelderMeadOptions};

pub const DEFAULT_MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeParameter {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    /// Defaults to the current value in the model, or the midpoint if that
    /// lies outside the bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<f64>,
}

/// `Σ terms = total`. Exactly one term must not be free; it is solved for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumConstraint {
    pub terms: Vec<String>,
    pub total: f64,
}

/// Parameters of the continuum rate `γ = ω²Z0C_g²/C_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LumpedWaveguideParams {
    pub z0: f64,
    pub c_g: f64,
    pub c_q: f64,
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("loss at the initial point is not finite ({0})")]
    NonFiniteInitialLoss(f64),
}

/// What is being fitted.
#[derive(Debug, Clone, PartialEq)]
pub enum FitModel {
    Network(DeviceSection),
    LumpedWaveguide(LumpedWaveguideParams),
}

impl FitModel {
    fn to_value(&self) -> Value {
        match self {
            FitModel::Network(d) => serde_json::to_value(d).expect("device sections serialize"),
            FitModel::LumpedWaveguide(p) => serde_json::to_value(p).expect("params serialize"),
        }
    }

    fn rebuild(&self, v: Value) -> Result<Self, ConfigError> {
        let schema = |e: serde_json::Error| ConfigError::Schema(e.to_string());
        Ok(match self {
            FitModel::Network(_) => FitModel::Network(serde_json::from_value(v).map_err(schema)?),
            FitModel::LumpedWaveguide(_) => FitModel::LumpedWaveguide(serde_json::from_value(v).map_err(schema)?),
        })
    }

    /// The object that parameter paths are relative to.
    fn params_mut<'v>(&self, v: &'v mut Value) -> Option<&'v mut Value> {
        match self {
            FitModel::Network(_) => v.get_mut("params"),
            FitModel::LumpedWaveguide(_) => Some(v),
        }
    }

    pub fn get(&self, path: &str) -> Option<f64> {
        let mut v = self.to_value();
        lookup(self.params_mut(&mut v)?, path).and_then(|x| x.as_f64())
    }

    /// Returns a copy with the named parameters replaced.
    pub fn with_values(&self, values: &[(&str, f64)]) -> Result<Self, ConfigError> {
        let mut v = self.to_value();
        let params = self.params_mut(&mut v).ok_or_else(|| ConfigError::Schema("model has no params".into()))?;
        for &(path, x) in values {
            let slot = lookup(params, path).filter(|s| s.is_number()).ok_or_else(|| ConfigError::Invalid {
                key: path.into(),
                reason: "not a numeric model parameter".into(),
            })?;
            *slot = serde_json::Number::from_f64(x)
                .map(Value::Number)
                .ok_or_else(|| ConfigError::Invalid { key: path.into(), reason: format!("non-finite value {x}") })?;
        }
        self.rebuild(v)
    }

    /// Model `T1` at each frequency; `None` where the model yields no rate.
    pub fn t1_at(&self, freqs: &[f64], settings: &TransmonSettings) -> Result<Vec<Option<f64>>, FitError> {
        match self {
            FitModel::Network(d) => {
                let model = d.build_model()?;
                Ok(evaluate_at(&model, freqs, settings)?.iter().map(|r| r.t1()).collect())
            }
            FitModel::LumpedWaveguide(p) => freqs
                .iter()
                .map(|&f| {
                    let rate = ser_lumped_waveguide(f, p.z0, p.c_g, p.c_q).map_err(SweepError::from)?;
                    Ok(Some(rate.t1()))
                })
                .collect(),
        }
    }
}

fn lookup<'a>(root: &'a mut Value, path: &str) -> Option<&'a mut Value> {
    path.split('.').try_fold(root, |v, seg| match v {
        Value::Object(m) => m.get_mut(seg),
        Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
        _ => None,
    })
}

/// `mean (log10 model − log10 reference)²`; any missing or non-positive
/// model value makes the loss infinite.
pub fn log_t1_loss(model: &[Option<f64>], reference: &[(f64, f64)]) -> f64 {
    let mut sum = 0.0;
    for (m, &(_, r)) in model.iter().zip(reference) {
        match m {
            Some(t) if *t > 0.0 && t.is_finite() => sum += (t.log10() - r.log10()).powi(2),
            _ => return f64::INFINITY,
        }
    }
    sum / reference.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    pub model: FitModel,
    pub free: Vec<FreeParameter>,
    pub constraint: Option<SumConstraint>,
    /// `(freq_hz, t1_s)` pairs.
    pub reference: Vec<(f64, f64)>,
    pub settings: TransmonSettings,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    /// Free parameters followed by the constrained one, if any.
    pub params: Vec<(String, f64)>,
    pub loss: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub model: FitModel,
}

impl FitProblem {
    pub fn from_section(
        fit: &FitSection,
        device: &DeviceSection,
        reference: Vec<(f64, f64)>,
        settings: TransmonSettings,
    ) -> Result<Self, FitError> {
        validate_section(fit, device)?;
        let model = match &fit.model {
            FitModelSection::Network => FitModel::Network(device.clone()),
            FitModelSection::LumpedWaveguide(p) => FitModel::LumpedWaveguide(*p),
        };
        let p = Self {
            model,
            free: fit.free.clone(),
            constraint: fit.constraint.clone(),
            reference,
            settings,
            max_iterations: fit.max_iterations,
        };
        p.check_reference()?;
        Ok(p)
    }

    fn check_reference(&self) -> Result<(), FitError> {
        if self.reference.is_empty() {
            return Err(SweepError::Reference("no rows".into()).into());
        }
        for &(f, t) in &self.reference {
            if !(f.is_finite() && f > 0.0 && t.is_finite() && t > 0.0) {
                return Err(SweepError::Reference(format!("needs positive finite values, got ({f}, {t})")).into());
            }
        }
        Ok(())
    }

    fn values(&self, x: &[f64]) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> =
            self.free.iter().zip(x).map(|(p, &u)| (p.name.clone(), p.lower + u * (p.upper - p.lower))).collect();
        if let Some(c) = &self.constraint {
            let used: f64 = c.terms.iter().filter_map(|t| out.iter().find(|(n, _)| n == t)).map(|(_, v)| v).sum();
            if let Some(dep) = c.terms.iter().find(|t| !out.iter().any(|(n, _)| n == *t)) {
                out.push((dep.clone(), c.total - used));
            }
        }
        out
    }

    fn model_for(&self, values: &[(String, f64)]) -> Result<FitModel, ConfigError> {
        let pairs: Vec<(&str, f64)> = values.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        self.model.with_values(&pairs)
    }

    /// Loss at unit-box coordinates `x`; infeasible points give `+∞`.
    pub fn loss_at(&self, x: &[f64]) -> f64 {
        let values = self.values(x);
        if values.iter().any(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return f64::INFINITY;
        }
        let freqs: Vec<f64> = self.reference.iter().map(|r| r.0).collect();
        match self.model_for(&values).map_err(FitError::from).and_then(|m| m.t1_at(&freqs, &self.settings)) {
            Ok(t1) => log_t1_loss(&t1, &self.reference),
            Err(_) => f64::INFINITY,
        }
    }

    /// Starting point in unit-box coordinates.
    pub fn initial_point(&self) -> Vec<f64> {
        self.free
            .iter()
            .map(|p| {
                let v = p.initial.or_else(|| self.model.get(&p.name)).filter(|v| (p.lower..=p.upper).contains(v));
                v.map_or(0.5, |v| (v - p.lower) / (p.upper - p.lower))
            })
            .collect()
    }
}

/// Minimizes the loss. The same seed gives the same result.
pub fn fit_parameters(problem: &FitProblem, seed: u64) -> Result<FitOutcome, FitError> {
    problem.check_reference()?;
    let opts = NelderMeadOptions { max_iterations: problem.max_iterations, ..Default::default() };
    let min = minimize(|x| problem.loss_at(x), &problem.initial_point(), &opts, seed)
        .map_err(FitError::NonFiniteInitialLoss)?;
    let params = problem.values(&min.x);
    let model = problem.model_for(&params)?;
    Ok(FitOutcome {
        params,
        loss: min.loss,
        iterations: min.iterations,
        evaluations: min.evaluations,
        converged: min.converged,
        model,
    })
}

/// Checks a `fit` block against the device it refers to.
pub fn validate_section(fit: &FitSection, device: &DeviceSection) -> Result<(), ConfigError> {
    let invalid = |key: String, reason: &str| ConfigError::Invalid { key, reason: reason.into() };
    let model = match &fit.model {
        FitModelSection::Network => {
            if matches!(device, DeviceSection::Imported(_)) {
                return Err(invalid("fit.model".into(), "an imported table has no parameters to fit"));
            }
            FitModel::Network(device.clone())
        }
        FitModelSection::LumpedWaveguide(p) => FitModel::LumpedWaveguide(*p),
    };
    if fit.free.is_empty() {
        return Err(invalid("fit.free".into(), "needs at least one parameter"));
    }
    if fit.max_iterations == 0 {
        return Err(invalid("fit.max_iterations".into(), "must be positive"));
    }
    let mut seen = HashSet::new();
    for (i, p) in fit.free.iter().enumerate() {
        let key = |f: &str| format!("fit.free[{i}].{f}");
        if !seen.insert(p.name.as_str()) {
            return Err(invalid(key("name"), "duplicate parameter"));
        }
        if model.get(&p.name).is_none() {
            return Err(invalid(key("name"), &format!("`{}` is not a numeric model parameter", p.name)));
        }
        if !(p.lower.is_finite() && p.upper.is_finite() && p.lower < p.upper) {
            return Err(invalid(key("upper"), "bounds need finite lower < upper"));
        }
        if let Some(v) = p.initial {
            if !(p.lower..=p.upper).contains(&v) {
                return Err(invalid(key("initial"), "must lie within the bounds"));
            }
        }
    }
    if let Some(c) = &fit.constraint {
        let dependent: Vec<&String> = c.terms.iter().filter(|t| !seen.contains(t.as_str())).collect();
        if dependent.len() != 1 {
            return Err(invalid("fit.constraint.terms".into(), "exactly one term must not be free"));
        }
        if model.get(dependent[0]).is_none() {
            return Err(invalid(
                "fit.constraint.terms".into(),
                &format!("`{}` is not a numeric model parameter", dependent[0]),
            ));
        }
        if c.terms.iter().collect::<HashSet<_>>().len() != c.terms.len() {
            return Err(invalid("fit.constraint.terms".into(), "duplicate term"));
        }
        if !(c.total.is_finite() && c.total > 0.0) {
            return Err(invalid("fit.constraint.total".into(), "must be positive"));
        }
    }
    Ok(())
}
