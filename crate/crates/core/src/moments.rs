//! Closed-form moments.
//!
//! A product moment `E[x_1^i_1 ... x_n^i_n]` factors into a Dirichlet
//! integral over the simplex part of the latent coordinates and a moment of
//! the radial part, with reduced order `c = sum_j i_j / shape_j`. After
//! cancellation it is
//!
//! ```text
//! prod scale_j^i_j * prod Gamma(i_j alpha / shape_j + 1) * Gamma(c + 1) / Gamma(alpha c + 1)
//! ```
//!
//! Every gamma product is accumulated in log space and exponentiated once.

use crate::combinatorics::{partition_table, rising_factorial};
use crate::error::{domain, Result};
use crate::latent::MixtureWeights;
use crate::model::ModelParams;
use crate::special::ln_gamma;

/// Exponents `i_1..i_n` of a product moment. Non-integer exponents are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentOrder(Vec<f64>);

impl MomentOrder {
    pub fn new(exponents: Vec<f64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(domain("moment order needs at least one exponent"));
        }
        if let Some(e) = exponents.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(domain(format!(
                "moment exponents must be finite and nonnegative, got {e}"
            )));
        }
        Ok(Self(exponents))
    }

    /// Exponent 1 at `i` and 0 elsewhere (or 2 when `j == i`).
    pub fn pair(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut e = vec![0.0; n];
        *e.get_mut(i).ok_or_else(|| domain("index out of range"))? += 1.0;
        *e.get_mut(j).ok_or_else(|| domain("index out of range"))? += 1.0;
        Self::new(e)
    }

    pub fn single(n: usize, i: usize, power: f64) -> Result<Self> {
        let mut e = vec![0.0; n];
        *e.get_mut(i).ok_or_else(|| domain("index out of range"))? = power;
        Self::new(e)
    }

    pub fn exponents(&self) -> &[f64] {
        &self.0
    }

    /// `c = sum_j i_j / shape_j`.
    pub fn reduced_sum(&self, p: &ModelParams) -> f64 {
        self.0.iter().zip(p.shapes()).map(|(i, g)| i / g).sum()
    }

    fn check(&self, p: &ModelParams) -> Result<()> {
        if self.0.len() != p.dim() {
            return Err(domain(format!(
                "moment order has {} exponents, model has dimension {}",
                self.0.len(),
                p.dim()
            )));
        }
        Ok(())
    }
}

fn ln_gamma_products(p: &ModelParams, order: &MomentOrder) -> f64 {
    order
        .0
        .iter()
        .zip(p.shapes())
        .map(|(i, g)| ln_gamma(i * p.alpha() / g + 1.0))
        .sum()
}

/// `E[prod_j w_j^(i_j alpha / shape_j)]` for `w` uniform on the simplex:
/// `Gamma(n) prod_j Gamma(i_j alpha / shape_j + 1) / Gamma(alpha c + n)`.
pub fn dirichlet_moment(p: &ModelParams, order: &MomentOrder) -> Result<f64> {
    order.check(p)?;
    let n = p.dim() as f64;
    let c = order.reduced_sum(p);
    let log = ln_gamma(n) + ln_gamma_products(p, order) - ln_gamma(p.alpha() * c + n);
    Ok(log.exp())
}

/// `E[y_n^c] = (alpha c + 1)(alpha c + 2)...(alpha c + n - 1) Gamma(c + 1) / Gamma(n)`.
pub fn yn_moment(w: &MixtureWeights, c: f64) -> Result<f64> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(domain(format!(
            "radial moment order must be nonnegative, got {c}"
        )));
    }
    let n = w.n() as f64;
    let ac = w.alpha() * c;
    // The rising factorial (ac + 1)^(n-1) is Gamma(ac + n) / Gamma(ac + 1).
    let log = ln_gamma(ac + n) - ln_gamma(ac + 1.0) + ln_gamma(c + 1.0) - ln_gamma(n);
    Ok(log.exp())
}

/// `E[y_n^c]` by the unsimplified partition sum
/// `(-1)^n / Gamma(n) sum_i alpha^-1 (-1)^k_i Ps(n,i) prod_j falling(alpha, n_j) Gamma(c) c^(rising k_i)`.
///
/// For `c = 0` the factor `Gamma(c) c^(rising k)` is evaluated as its limit
/// `Gamma(k)`.
pub fn yn_moment_partition_sum(w: &MixtureWeights, c: f64) -> Result<f64> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(domain(format!(
            "radial moment order must be nonnegative, got {c}"
        )));
    }
    let n = w.n();
    let alpha = w.alpha();
    let table = partition_table(n)?;
    let gamma_c = if c > 0.0 { ln_gamma(c).exp() } else { f64::NAN };
    let total: f64 = table
        .iter()
        .map(|e| {
            let k = e.partition.len();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let product: f64 = e
                .partition
                .parts()
                .iter()
                .map(|&nj| crate::combinatorics::falling_factorial(alpha, nj))
                .product();
            let gamma_term = if c > 0.0 {
                gamma_c * rising_factorial(c, k as u32)
            } else {
                ln_gamma(k as f64).exp()
            };
            sign * e.ps_count as f64 * product * gamma_term / alpha
        })
        .sum();
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign_n * total / ln_gamma(n as f64).exp())
}

/// `E[x_1^i_1 ... x_n^i_n]`.
pub fn general_moment(p: &ModelParams, order: &MomentOrder) -> Result<f64> {
    order.check(p)?;
    let c = order.reduced_sum(p);
    let log_scales: f64 = order.0.iter().zip(p.scales()).map(|(i, s)| i * s.ln()).sum();
    let log = log_scales + ln_gamma_products(p, order) + ln_gamma(c + 1.0) - ln_gamma(p.alpha() * c + 1.0);
    Ok(log.exp())
}

pub fn mean(p: &ModelParams, i: usize) -> Result<f64> {
    general_moment(p, &MomentOrder::single(p.dim(), i, 1.0)?)
}

pub fn variance(p: &ModelParams, i: usize) -> Result<f64> {
    covariance(p, i, i)
}

pub fn covariance(p: &ModelParams, i: usize, j: usize) -> Result<f64> {
    let n = p.dim();
    let joint = general_moment(p, &MomentOrder::pair(n, i, j)?)?;
    Ok(joint - mean(p, i)? * mean(p, j)?)
}

/// Pearson correlation. Scale parameters cancel: the value is computed from
/// moments of the unit-scale law.
pub fn correlation(p: &ModelParams, i: usize, j: usize) -> Result<f64> {
    let unit = p.rescaled(&p.scales().iter().map(|s| 1.0 / s).collect::<Vec<_>>())?;
    let vi = variance(&unit, i)?;
    let vj = variance(&unit, j)?;
    assert!(vi > 0.0 && vj > 0.0, "variance of a Weibull marginal is positive");
    Ok((covariance(&unit, i, j)? / (vi * vj).sqrt()).clamp(-1.0, 1.0))
}

/// Full correlation matrix, row-major `n x n` with unit diagonal.
#[allow(clippy::needless_range_loop)]
pub fn correlation_matrix(p: &ModelParams) -> Result<Vec<Vec<f64>>> {
    let n = p.dim();
    let mut m = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let r = correlation(p, i, j)?;
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    Ok(m)
}
