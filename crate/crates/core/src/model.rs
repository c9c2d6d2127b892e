//! The multivariate Weibull law: joint survival function, joint density and
//! mixed partial derivatives of the survival function.
//!
//! With `z_i = (x_i / scale_i)^(shape_i / alpha)` and `T = z_1 + ... + z_n`
//! the joint survival function is `S(x) = exp(-T^alpha)`. Each marginal is a
//! univariate Weibull with the corresponding shape and scale, and `alpha`
//! controls the dependence (`alpha = 1` is independence).
//!
//! Because `S` depends on the coordinates only through `T`, and `T` is a sum
//! of one-variable terms, any mixed partial of `S` over a set `O` of `m`
//! coordinates expands by Faà di Bruno's formula into a sum over the integer
//! partitions of `m`. The joint density is the special case `O = {all}`.
//!
//! Coordinate indices are zero-based throughout the crate.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{c_numbers, MAX_DIMENSION};
use crate::error::{domain, numeric, Error, Result};
use crate::special::{log_sum_exp, CompensatedSum};

/// Relative tolerance under which a negative partition sum is treated as
/// round-off and clamped to zero.
pub const NEGATIVE_CLAMP_TOLERANCE: f64 = 1e-12;

/// Parameters of an `n`-dimensional Weibull law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    alpha: f64,
    scales: Vec<f64>,
    shapes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    scales: Vec<f64>,
    shapes: Vec<f64>,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.alpha, raw.scales, raw.shapes)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            alpha: p.alpha,
            scales: p.scales,
            shapes: p.shapes,
        }
    }
}

impl ModelParams {
    /// Validates `0 < alpha <= 1`, positive finite scales and shapes of
    /// matching length, and `1 <= n <= 20`.
    pub fn new(alpha: f64, scales: Vec<f64>, shapes: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("alpha must satisfy 0 < alpha <= 1, got {alpha}")));
        }
        if scales.len() != shapes.len() {
            return Err(domain(format!(
                "{} scales but {} shapes",
                scales.len(),
                shapes.len()
            )));
        }
        if scales.is_empty() || scales.len() > MAX_DIMENSION {
            return Err(domain(format!(
                "dimension {} out of range: must satisfy 1 <= n <= {MAX_DIMENSION}",
                scales.len()
            )));
        }
        if let Some(s) = scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(domain(format!("scales must be positive and finite, got {s}")));
        }
        if let Some(s) = shapes.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(domain(format!("shapes must be positive and finite, got {s}")));
        }
        Ok(Self {
            alpha,
            scales,
            shapes,
        })
    }

    /// Independent coordinates with a common shape and scale.
    pub fn iid(n: usize, alpha: f64, scale: f64, shape: f64) -> Result<Self> {
        Self::new(alpha, vec![scale; n], vec![shape; n])
    }

    pub fn dim(&self) -> usize {
        self.scales.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn shapes(&self) -> &[f64] {
        &self.shapes
    }

    /// Same parameters with every scale multiplied by the matching factor.
    pub fn rescaled(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.dim() {
            return Err(domain("rescale factor count does not match dimension"));
        }
        let scales = self.scales.iter().zip(factors).map(|(s, f)| s * f).collect();
        Self::new(self.alpha, scales, self.shapes.clone())
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(domain(format!(
                "point has {} coordinates, model has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(domain(format!(
                "coordinates must be finite and nonnegative, got {v}"
            )));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim() {
            return Err(domain(format!(
                "coordinate index {i} out of range for dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// `ln z_i = (shape_i / alpha) ln(x_i / scale_i)`, `-inf` at `x_i = 0`.
    pub(crate) fn log_z(&self, i: usize, xi: f64) -> f64 {
        if xi == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shapes[i] / self.alpha * (xi / self.scales[i]).ln()
    }

    /// The reduced coordinates `z_i = (x_i / scale_i)^(shape_i / alpha)`.
    pub fn z_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        Ok(x.iter()
            .enumerate()
            .map(|(i, &xi)| self.log_z(i, xi).exp())
            .collect())
    }

    fn log_t(&self, x: &[f64]) -> f64 {
        let logs: Vec<f64> = x.iter().enumerate().map(|(i, &xi)| self.log_z(i, xi)).collect();
        log_sum_exp(&logs)
    }

    /// Joint survival `P(X_1 > x_1, ..., X_n > x_n)`.
    pub fn survival(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let log_t = self.log_t(x);
        Ok((-(self.alpha * log_t).exp()).exp())
    }

    /// Log of [`Self::mixed_partial_survival`].
    ///
    /// Returns `-inf` when the value underflows or the partition sum is
    /// clamped to zero.
    pub fn log_mixed_partial_survival(&self, x: &[f64], observed: &[usize]) -> Result<f64> {
        self.check_point(x)?;
        let mut seen = [false; MAX_DIMENSION];
        for &i in observed {
            self.check_index(i)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(domain(format!("coordinate {i} listed twice in observed set")));
            }
            if x[i] <= 0.0 {
                return Err(domain(format!(
                    "coordinate {i} is differentiated and must be positive, got {}",
                    x[i]
                )));
            }
        }

        let alpha = self.alpha;
        let log_t = self.log_t(x);
        let hazard = (alpha * log_t).exp();
        let m = observed.len();
        if m == 0 {
            return Ok(-hazard);
        }

        // Jacobian of x -> z on the observed coordinates, with the alpha from
        // dz/dx pulled out as alpha^-m.
        let mut log_value = -(m as f64) * alpha.ln() - hazard;
        for &i in observed {
            let (scale, shape) = (self.scales[i], self.shapes[i]);
            log_value += (shape / scale).ln() + (shape / alpha - 1.0) * (x[i] / scale).ln();
        }

        let (log_scale, sum) = partition_sum(m, alpha, log_t)?;
        if sum == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(log_value + log_scale + sum.ln())
    }

    /// `(-1)^|O| d^|O| S / dx_O` at `x`, where `O = observed`.
    ///
    /// The empty set gives the survival function and the full set gives the
    /// joint density. Unobserved coordinates may be zero; observed ones must
    /// be positive.
    pub fn mixed_partial_survival(&self, x: &[f64], observed: &[usize]) -> Result<f64> {
        Ok(self.log_mixed_partial_survival(x, observed)?.exp())
    }

    /// Joint density. Coordinates must be strictly positive.
    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        Ok(self.log_pdf(x)?.exp())
    }

    /// Log joint density; `-inf` when the density underflows.
    pub fn log_pdf(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if let Some(v) = x.iter().find(|v| **v <= 0.0) {
            return Err(domain(format!("density requires positive coordinates, got {v}")));
        }
        let all: Vec<usize> = (0..self.dim()).collect();
        self.log_mixed_partial_survival(x, &all)
    }

    /// Univariate Weibull survival of coordinate `i`.
    pub fn marginal_survival(&self, i: usize, t: f64) -> Result<f64> {
        self.check_index(i)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(domain(format!("time must be finite and nonnegative, got {t}")));
        }
        Ok((-(t / self.scales[i]).powf(self.shapes[i])).exp())
    }

    pub fn marginal_cdf(&self, i: usize, t: f64) -> Result<f64> {
        self.check_index(i)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(domain(format!("time must be finite and nonnegative, got {t}")));
        }
        Ok(-(-(t / self.scales[i]).powf(self.shapes[i])).exp_m1())
    }

    /// Univariate Weibull density of coordinate `i`.
    pub fn marginal_pdf(&self, i: usize, t: f64) -> Result<f64> {
        self.check_index(i)?;
        if !(t.is_finite() && t > 0.0) {
            return Err(domain(format!("time must be finite and positive, got {t}")));
        }
        let (scale, shape) = (self.scales[i], self.shapes[i]);
        let u = t / scale;
        Ok(shape / scale * u.powf(shape - 1.0) * (-u.powf(shape)).exp())
    }

    /// Inverse of [`Self::marginal_cdf`] for `0 <= p < 1`.
    pub fn marginal_quantile(&self, i: usize, p: f64) -> Result<f64> {
        self.check_index(i)?;
        if !(0.0..1.0).contains(&p) {
            return Err(domain(format!("probability must lie in [0, 1), got {p}")));
        }
        Ok(self.scales[i] * (-(-p).ln_1p()).powf(1.0 / self.shapes[i]))
    }
}

/// Evaluates `sum_k (-1)^(m+k) C(m, k, alpha) T^(k alpha - m)` for `k = 1..m`.
///
/// Returns `(log_scale, s)` with the sum equal to `exp(log_scale) * s`; the
/// terms are rescaled by their largest magnitude before compensated
/// summation. For `0 < alpha <= 1` every term is nonnegative, so a negative
/// result can only come from round-off.
fn partition_sum(m: usize, alpha: f64, log_t: f64) -> Result<(f64, f64)> {
    let coeffs = c_numbers(m, alpha)?;
    let logs: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(idx, &c)| {
            let k = (idx + 1) as f64;
            let sign = if (m + idx + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            (sign * c.signum(), c.abs().ln() + (k * alpha - m as f64) * log_t)
        })
        .collect();
    let log_scale = logs.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    if !log_scale.is_finite() {
        return Err(numeric(format!(
            "partition sum of order {m} is not finite (ln T = {log_t})"
        )));
    }
    let mut acc = CompensatedSum::new();
    let mut magnitude = 0.0;
    for (sign, l) in &logs {
        let v = (l - log_scale).exp();
        magnitude += v;
        acc.add(sign * v);
    }
    let s = acc.value();
    if s < 0.0 {
        if s >= -NEGATIVE_CLAMP_TOLERANCE * magnitude {
            log::debug!("clamped partition sum {s} (order {m}, alpha {alpha}) to zero");
            return Ok((log_scale, 0.0));
        }
        return Err(numeric(format!(
            "partition sum of order {m} is negative ({s} relative to {magnitude}): cancellation failure"
        )));
    }
    Ok((log_scale, s))
}
