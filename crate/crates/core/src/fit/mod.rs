//! Maximum-likelihood estimation from right-censored records.
//!
//! A record contributes the probability element of what was seen: for the
//! set `O` of coordinates with an observed event and the rest censored at
//! their recorded times, the likelihood is `(-1)^|O| d^|O| S / dx_O`.

mod marginal;
pub mod optim;

use serde::{Deserialize, Serialize};

pub use marginal::weibull_mle;
pub use optim::{
    hessian, inverse_diagonal_sqrt, nelder_mead, InformationDiagnostics, Minimum, NelderMeadOptions,
};

use crate::combinatorics::MAX_DIMENSION;
use crate::error::{domain, numeric, Error, Result};
use crate::model::ModelParams;
use crate::special::pairwise_sum;

/// One record: a time per coordinate and whether it is right-censored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    times: Vec<f64>,
    censored: Vec<bool>,
}

impl Observation {
    pub fn new(times: Vec<f64>, censored: Vec<bool>) -> Result<Self> {
        if times.len() != censored.len() || times.is_empty() {
            return Err(domain(format!(
                "observation has {} times and {} censoring flags",
                times.len(),
                censored.len()
            )));
        }
        if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(domain(format!("observation times must be positive, got {t}")));
        }
        Ok(Self { times, censored })
    }

    /// Fully observed record.
    pub fn exact(times: Vec<f64>) -> Result<Self> {
        let n = times.len();
        Self::new(times, vec![false; n])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn censored(&self) -> &[bool] {
        &self.censored
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    /// Indices of coordinates with an observed event.
    pub fn observed(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.censored[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    dim: usize,
    records: Vec<Observation>,
    labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(records: Vec<Observation>) -> Result<Self> {
        let dim = records
            .first()
            .ok_or_else(|| Error::Schema("dataset has no records".into()))?
            .dim();
        if dim > MAX_DIMENSION {
            return Err(domain(format!(
                "dimension {dim} exceeds the supported maximum {MAX_DIMENSION}"
            )));
        }
        if let Some((r, o)) = records.iter().enumerate().find(|(_, o)| o.dim() != dim) {
            return Err(Error::Schema(format!(
                "record {} has dimension {}, expected {dim}",
                r + 1,
                o.dim()
            )));
        }
        Ok(Self {
            dim,
            records,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::Schema("label count does not match dimension".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn records(&self) -> &[Observation] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of observed events per coordinate.
    pub fn event_counts(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|i| self.records.iter().filter(|r| !r.censored[i]).count())
            .collect()
    }

    /// Histogram of censoring patterns (`true` = censored).
    pub fn censoring_patterns(&self) -> std::collections::BTreeMap<Vec<bool>, usize> {
        let mut out = std::collections::BTreeMap::new();
        for r in &self.records {
            *out.entry(r.censored.clone()).or_insert(0) += 1;
        }
        out
    }
}

/// Log-likelihood contribution of one record.
pub fn record_log_likelihood(p: &ModelParams, record: &Observation) -> Result<f64> {
    p.log_mixed_partial_survival(record.times(), &record.observed())
}

/// `-sum_r log L_r`, combined by pairwise summation.
pub fn neg_log_likelihood(p: &ModelParams, d: &Dataset) -> Result<f64> {
    if p.dim() != d.dim() {
        return Err(domain(format!(
            "model dimension {} does not match dataset dimension {}",
            p.dim(),
            d.dim()
        )));
    }
    let contributions = d
        .records()
        .iter()
        .enumerate()
        .map(|(r, rec)| {
            let l = record_log_likelihood(p, rec)?;
            if !l.is_finite() {
                return Err(numeric(format!(
                    "record {} has non-finite log-likelihood contribution {l}",
                    r + 1
                )));
            }
            Ok(-l)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&contributions))
}

/// Natural parameter vector `(alpha, scale_1, shape_1, ..., scale_n, shape_n)`.
pub fn params_to_vec(p: &ModelParams) -> Vec<f64> {
    let mut v = Vec::with_capacity(1 + 2 * p.dim());
    v.push(p.alpha());
    for (s, g) in p.scales().iter().zip(p.shapes()) {
        v.push(*s);
        v.push(*g);
    }
    v
}

pub fn params_from_vec(v: &[f64]) -> Result<ModelParams> {
    if v.len() < 3 || v.len().is_multiple_of(2) {
        return Err(domain(format!(
            "parameter vector of length {} is malformed",
            v.len()
        )));
    }
    let scales = v[1..].iter().step_by(2).copied().collect();
    let shapes = v[2..].iter().step_by(2).copied().collect();
    ModelParams::new(v[0], scales, shapes)
}

/// Options for [`fit_mle`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub optimizer: NelderMeadOptions,
    /// Number of restarts from the best vertex after the first run.
    pub restarts: usize,
    /// Initial simplex step for `ln scale` and `ln shape`.
    pub log_step: f64,
    /// Initial simplex step for the logit of alpha.
    pub alpha_step: f64,
    /// Relative Hessian step.
    pub hessian_relative_step: f64,
    /// Absolute floor of the Hessian step.
    pub hessian_min_step: f64,
    /// Starting alpha when no initial parameters are given.
    pub initial_alpha: f64,
    /// Distance from 1 within which alpha is reported as on the boundary.
    pub boundary_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            optimizer: NelderMeadOptions::default(),
            restarts: 1,
            log_step: 0.1,
            alpha_step: 0.5,
            hessian_relative_step: 1e-4,
            hessian_min_step: 1e-6,
            initial_alpha: 0.9,
            boundary_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub estimates: ModelParams,
    /// Names of the free parameters, in the order of `standard_errors`.
    pub parameter_names: Vec<String>,
    /// Present only when the fit converged in the interior and the observed
    /// information is positive definite.
    pub standard_errors: Option<Vec<f64>>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    pub alpha_at_boundary: bool,
    pub information: Option<InformationDiagnostics>,
    pub diagnostics: Vec<String>,
}

impl FitResult {
    /// Converged with standard errors available.
    pub fn is_usable(&self) -> bool {
        self.converged && self.standard_errors.is_some()
    }
}

/// Parameter names in natural-vector order, using dataset labels if present.
pub fn parameter_names(d: &Dataset) -> Vec<String> {
    let mut names = Vec::with_capacity(1 + 2 * d.dim());
    if d.dim() > 1 {
        names.push("alpha".to_string());
    }
    for i in 0..d.dim() {
        let tag = match d.labels() {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        };
        names.push(format!("scale({tag})"));
        names.push(format!("shape({tag})"));
    }
    names
}

fn logistic(a: f64) -> f64 {
    1.0 / (1.0 + (-a).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Maps the unconstrained optimizer vector to parameters. For `n = 1`,
/// alpha does not enter the likelihood and is held at 1.
fn transformed_to_params(theta: &[f64], n: usize) -> Result<ModelParams> {
    let (alpha, rest) = if n == 1 {
        (1.0, theta)
    } else {
        (logistic(theta[0]), &theta[1..])
    };
    let scales = rest.iter().step_by(2).map(|v| v.exp()).collect();
    let shapes = rest[1..].iter().step_by(2).map(|v| v.exp()).collect();
    ModelParams::new(alpha, scales, shapes)
}

fn params_to_transformed(p: &ModelParams) -> Vec<f64> {
    let mut theta = Vec::new();
    if p.dim() > 1 {
        theta.push(logit(p.alpha().min(1.0 - 1e-9)));
    }
    for (s, g) in p.scales().iter().zip(p.shapes()) {
        theta.push(s.ln());
        theta.push(g.ln());
    }
    theta
}

/// Default starting point: each coordinate's own censored Weibull MLE and
/// the configured alpha. Returns diagnostics for coordinates without events.
pub fn initial_params(d: &Dataset, alpha: f64) -> Result<(ModelParams, Vec<String>)> {
    let mut scales = Vec::with_capacity(d.dim());
    let mut shapes = Vec::with_capacity(d.dim());
    let mut notes = Vec::new();
    for i in 0..d.dim() {
        let times: Vec<f64> = d.records().iter().map(|r| r.times()[i]).collect();
        let events: Vec<bool> = d.records().iter().map(|r| !r.censored()[i]).collect();
        match weibull_mle(&times, &events) {
            Some((s, g)) => {
                scales.push(s);
                shapes.push(g);
            }
            None => {
                notes.push(format!(
                    "coordinate {} has no observed events; parameters are not identifiable",
                    i + 1
                ));
                let mean = times.iter().sum::<f64>() / times.len() as f64;
                scales.push(2.0 * mean);
                shapes.push(1.0);
            }
        }
    }
    Ok((ModelParams::new(alpha, scales, shapes)?, notes))
}

/// Standard errors and information diagnostics at a point estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardErrors {
    pub values: Vec<f64>,
    pub information: InformationDiagnostics,
}

/// Square roots of the diagonal of the inverse observed information, with
/// the Hessian of the negative log-likelihood taken by central differences in
/// natural parameters `(alpha, scale_1, shape_1, ...)`. For one-dimensional
/// data alpha is omitted.
pub fn standard_errors(p: &ModelParams, d: &Dataset, opts: &FitOptions) -> Result<StandardErrors> {
    let n = d.dim();
    let full = params_to_vec(p);
    let free: Vec<f64> = if n == 1 { full[1..].to_vec() } else { full.clone() };
    let mut steps: Vec<f64> = free
        .iter()
        .map(|v| (opts.hessian_relative_step * v.abs()).max(opts.hessian_min_step))
        .collect();
    if n > 1 {
        // Keep alpha +- h inside (0, 1].
        let a = full[0];
        steps[0] = steps[0]
            .min(0.5 * a)
            .min((1.0 - a).max(0.0))
            .max(f64::MIN_POSITIVE);
    }
    let objective = |x: &[f64]| -> Result<f64> {
        let params = if n == 1 {
            params_from_vec(&[1.0, x[0], x[1]])?
        } else {
            params_from_vec(x)?
        };
        neg_log_likelihood(&params, d)
    };
    let h = hessian(objective, &free, &steps)?;
    let (values, information) = inverse_diagonal_sqrt(&h)?;
    Ok(StandardErrors { values, information })
}

/// Fits the model by Nelder–Mead on `(logit alpha, ln scale_i, ln shape_i)`,
/// restarting from the best vertex, then computes standard errors.
pub fn fit_mle(d: &Dataset, init: Option<&ModelParams>, opts: &FitOptions) -> Result<FitResult> {
    let n = d.dim();
    let mut diagnostics = Vec::new();
    let start = match init {
        Some(p) => {
            if p.dim() != n {
                return Err(domain("initial parameters do not match dataset dimension"));
            }
            p.clone()
        }
        None => {
            let (p, notes) = initial_params(d, opts.initial_alpha)?;
            diagnostics.extend(notes);
            p
        }
    };
    for (i, c) in d.event_counts().iter().enumerate() {
        let note = format!(
            "coordinate {} has no observed events; parameters are not identifiable",
            i + 1
        );
        if *c == 0 && !diagnostics.contains(&note) {
            diagnostics.push(note);
        }
    }
    if n == 1 {
        diagnostics.push("alpha does not enter a one-dimensional likelihood; held at 1".into());
    }

    let objective = |theta: &[f64]| match transformed_to_params(theta, n) {
        Ok(p) => neg_log_likelihood(&p, d).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    };
    let steps_for = |len: usize| -> Vec<f64> {
        (0..len)
            .map(|i| {
                if n > 1 && i == 0 {
                    opts.alpha_step
                } else {
                    opts.log_step
                }
            })
            .collect()
    };

    let theta0 = params_to_transformed(&start);
    let steps = steps_for(theta0.len());
    let mut best = nelder_mead(objective, &theta0, &steps, &opts.optimizer);
    let mut iterations = best.iterations;
    let mut evaluations = best.evaluations;
    for _ in 0..opts.restarts {
        let again = nelder_mead(objective, &best.x, &steps, &opts.optimizer);
        iterations += again.iterations;
        evaluations += again.evaluations;
        let converged = best.converged && again.converged;
        if again.value <= best.value {
            best = again;
        }
        best.converged = converged;
    }

    if !best.value.is_finite() {
        return Err(numeric("no finite likelihood value found during optimization"));
    }
    let estimates = transformed_to_params(&best.x, n)?;
    let alpha_at_boundary = n > 1 && estimates.alpha() > 1.0 - opts.boundary_tolerance;
    if !best.converged {
        diagnostics.push(format!(
            "optimizer did not converge within {} evaluations",
            opts.optimizer.max_evaluations
        ));
    }

    let mut result = FitResult {
        estimates: estimates.clone(),
        parameter_names: parameter_names(d),
        standard_errors: None,
        log_likelihood: -best.value,
        converged: best.converged,
        iterations,
        evaluations,
        alpha_at_boundary,
        information: None,
        diagnostics,
    };
    if alpha_at_boundary {
        result.diagnostics.push(
            "alpha estimate is on the boundary alpha = 1; Wald standard errors are not reported".into(),
        );
        return Ok(result);
    }
    if !best.converged {
        return Ok(result);
    }
    match standard_errors(&estimates, d, opts) {
        Ok(se) => {
            result.standard_errors = Some(se.values);
            result.information = Some(se.information);
        }
        Err(e) => result
            .diagnostics
            .push(format!("standard errors unavailable: {e}")),
    }
    Ok(result)
}
