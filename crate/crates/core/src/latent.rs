//! Latent coordinates and the exact sampler.
//!
//! The map `x -> y` sends a point to `y_i = z_i / T` (`i < n`) and
//! `y_n = T^alpha`. Under the model the simplex part `(y_1..y_{n-1})` is
//! uniform on the open simplex and independent of the radial part `y_n`,
//! which is a finite mixture of `Gamma(k, 1)` laws, `k = 1..n`. Sampling
//! draws both factors and maps back.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use statrs::function::gamma::gamma_lr;

use crate::combinatorics::{falling_factorial, partition_table, MAX_DIMENSION};
use crate::error::{domain, numeric, Result};
use crate::model::ModelParams;
use crate::special::{ln_gamma, log_sum_exp, CompensatedSum};

/// Tolerance below zero for a mixture weight to count as round-off.
pub const WEIGHT_CLAMP_TOLERANCE: f64 = 1e-12;

/// Largest integer gamma shape drawn as a sum of unit exponentials.
const EXPONENTIAL_SUM_MAX_SHAPE: usize = 8;

/// A point in latent coordinates.
///
/// The full composition `(y_1, .., y_{n-1}, 1 - sum)` is stored so that a
/// small last component keeps its relative precision.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentPoint {
    composition: Vec<f64>,
    radial: f64,
}

impl LatentPoint {
    /// `simplex` holds `y_1..y_{n-1}` (positive, summing to less than one);
    /// `radial` is `y_n > 0`.
    pub fn new(simplex: Vec<f64>, radial: f64) -> Result<Self> {
        let residual = simplex_residual(&simplex);
        if residual <= 0.0 {
            return Err(domain("simplex coordinates must sum to less than one"));
        }
        let mut composition = simplex;
        composition.push(residual);
        Self::from_composition(composition, radial)
    }

    /// From all `n` simplex weights, which must be positive and are assumed
    /// to sum to one.
    fn from_composition(composition: Vec<f64>, radial: f64) -> Result<Self> {
        if let Some(v) = composition.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(domain(format!("simplex coordinates must be positive, got {v}")));
        }
        if !(radial.is_finite() && radial > 0.0) {
            return Err(domain(format!(
                "radial coordinate must be positive, got {radial}"
            )));
        }
        Ok(Self { composition, radial })
    }

    pub fn simplex(&self) -> &[f64] {
        &self.composition[..self.composition.len() - 1]
    }

    pub fn radial(&self) -> f64 {
        self.radial
    }

    /// `1 - y_1 - ... - y_{n-1}`.
    pub fn residual(&self) -> f64 {
        self.composition[self.composition.len() - 1]
    }

    pub fn dim(&self) -> usize {
        self.composition.len()
    }
}

fn simplex_residual(simplex: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.add(1.0);
    for v in simplex {
        acc.add(-v);
    }
    acc.value()
}

/// Forward map to latent coordinates. All coordinates must be positive.
pub fn to_latent(p: &ModelParams, x: &[f64]) -> Result<LatentPoint> {
    if x.len() != p.dim() {
        return Err(domain("point dimension does not match model"));
    }
    if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(domain(format!(
            "latent map requires positive coordinates, got {v}"
        )));
    }
    let log_z: Vec<f64> = x.iter().enumerate().map(|(i, &xi)| p.log_z(i, xi)).collect();
    let log_t = log_sum_exp(&log_z);
    let composition = log_z.iter().map(|lz| (lz - log_t).exp()).collect();
    LatentPoint::from_composition(composition, (p.alpha() * log_t).exp())
}

/// Inverse map `x_i = w_i^(alpha/shape_i) y_n^(1/shape_i) scale_i` with
/// `w = (y_1, .., y_{n-1}, 1 - sum)`.
pub fn from_latent(p: &ModelParams, y: &LatentPoint) -> Result<Vec<f64>> {
    if y.dim() != p.dim() {
        return Err(domain("latent point dimension does not match model"));
    }
    Ok(composition_to_point(p, &y.composition, y.radial))
}

fn composition_to_point(p: &ModelParams, composition: &[f64], radial: f64) -> Vec<f64> {
    let alpha = p.alpha();
    let log_r = radial.ln();
    composition
        .iter()
        .zip(p.scales().iter().zip(p.shapes()))
        .map(|(&w, (&scale, &shape))| scale * ((alpha * w.ln() + log_r) / shape).exp())
        .collect()
}

/// Log of [`jacobian_det`].
pub fn log_jacobian_det(p: &ModelParams, y: &LatentPoint) -> Result<f64> {
    if y.dim() != p.dim() {
        return Err(domain("latent point dimension does not match model"));
    }
    let n = p.dim();
    let alpha = p.alpha();
    let shapes = p.shapes();
    let mut acc = (n as f64 - 1.0) * alpha.ln();
    acc += p.scales().iter().map(|s| s.ln()).sum::<f64>();
    acc -= shapes.iter().map(|g| g.ln()).sum::<f64>();
    for (yi, g) in y.composition.iter().zip(shapes) {
        acc += (alpha / g - 1.0) * yi.ln();
    }
    let inv_shape_sum: f64 = shapes.iter().map(|g| 1.0 / g).sum();
    acc += (inv_shape_sum - 1.0) * y.radial.ln();
    Ok(acc)
}

/// Determinant of `dx/dy` for the inverse latent map.
pub fn jacobian_det(p: &ModelParams, y: &LatentPoint) -> Result<f64> {
    Ok(log_jacobian_det(p, y)?.exp())
}

/// Mixture weights of the radial variable over `Gamma(k, 1)`, `k = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureWeights {
    n: usize,
    alpha: f64,
    weights: Vec<f64>,
    clamped: usize,
}

impl MixtureWeights {
    /// `p_k = (-1)^(n+k) Gamma(k) C(n, k, alpha) / (alpha Gamma(n))`.
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("alpha must satisfy 0 < alpha <= 1, got {alpha}")));
        }
        let table = partition_table(n)?;
        let mut weights = Vec::with_capacity(n);
        let mut clamped = 0;
        for k in 1..=n {
            // C(n, k, alpha) / alpha without forming alpha/alpha: each part
            // contributes falling(alpha, n_j) = alpha * falling(alpha - 1, n_j - 1).
            let c_over_alpha: f64 = table
                .with_parts(k)
                .map(|e| {
                    e.ps_count as f64
                        * alpha.powi(k as i32 - 1)
                        * e.partition
                            .parts()
                            .iter()
                            .map(|&nj| falling_factorial(alpha - 1.0, nj - 1))
                            .product::<f64>()
                })
                .sum();
            // Gamma(k) / Gamma(n) = 1 / (k (k+1) ... (n-1)).
            let gamma_ratio = 1.0 / (k..n).map(|j| j as f64).product::<f64>();
            let sign = if (n + k).is_multiple_of(2) { 1.0 } else { -1.0 };
            let mut w = sign * gamma_ratio * c_over_alpha;
            if w < 0.0 {
                if w < -WEIGHT_CLAMP_TOLERANCE {
                    return Err(numeric(format!(
                        "mixture weight p_{k} = {w} for n={n}, alpha={alpha} is negative"
                    )));
                }
                log::debug!("clamped mixture weight p_{k} = {w} (n={n}, alpha={alpha})");
                w = 0.0;
                clamped += 1;
            }
            weights.push(w);
        }
        Ok(Self {
            n,
            alpha,
            weights,
            clamped,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `p_1..p_n`; index `k - 1` holds the weight of `Gamma(k, 1)`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of weights that were slightly negative and set to zero.
    pub fn clamp_events(&self) -> usize {
        self.clamped
    }

    fn components(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, &w)| (i + 1, w))
    }
}

/// Density of the radial variable, a mixture of `Gamma(k, 1)` densities.
pub fn yn_pdf(w: &MixtureWeights, y: f64) -> Result<f64> {
    if !(y.is_finite() && y > 0.0) {
        return Err(domain(format!("radial density requires y > 0, got {y}")));
    }
    let ly = y.ln();
    Ok(w.components()
        .map(|(k, p)| p * ((k as f64 - 1.0) * ly - y - ln_gamma(k as f64)).exp())
        .sum())
}

/// Distribution function of the radial variable: `sum_k p_k P(k, y)` with `P`
/// the regularized lower incomplete gamma function.
pub fn yn_cdf(w: &MixtureWeights, y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(domain(format!("radial distribution requires y >= 0, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(w.components().map(|(k, p)| p * gamma_lr(k as f64, y)).sum())
}

/// The random stream used by the command-line front end: ChaCha8 seeded
/// from `seed`, on independent stream `stream_id`. Distinct stream ids give
/// non-overlapping sequences for parallel shards.
pub fn seeded_stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Exact sampler for a fixed parameter set.
#[derive(Debug, Clone)]
pub struct Sampler {
    params: ModelParams,
    weights: MixtureWeights,
    cumulative: Vec<f64>,
    large_gammas: Vec<Option<Gamma<f64>>>,
}

impl Sampler {
    pub fn new(params: ModelParams) -> Result<Self> {
        let weights = MixtureWeights::new(params.dim(), params.alpha())?;
        let mut running = 0.0;
        let cumulative = weights
            .weights()
            .iter()
            .map(|w| {
                running += w;
                running
            })
            .collect();
        let large_gammas = (1..=params.dim())
            .map(|k| {
                (k > EXPONENTIAL_SUM_MAX_SHAPE)
                    .then(|| Gamma::new(k as f64, 1.0).expect("positive integer shape"))
            })
            .collect();
        Ok(Self {
            params,
            weights,
            cumulative,
            large_gammas,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn weights(&self) -> &MixtureWeights {
        &self.weights
    }

    /// One draw of the radial variable.
    pub fn sample_radial<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
            let idx = self
                .cumulative
                .iter()
                .position(|&c| u < c)
                .unwrap_or(self.cumulative.len() - 1);
            let k = idx + 1;
            let y = match &self.large_gammas[idx] {
                Some(g) => g.sample(rng),
                None => (0..k).map(|_| rng.sample::<f64, _>(Exp1)).sum::<f64>(),
            };
            if y > 0.0 && y.is_finite() {
                return y;
            }
        }
    }

    /// Uniform point on the open simplex as a full composition `w_1..w_n`.
    fn sample_composition<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.params.dim();
        if n == 1 {
            return vec![1.0];
        }
        loop {
            let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = e.iter().sum();
            let w: Vec<f64> = e.iter().map(|v| v / total).collect();
            if w.iter().all(|v| *v > 0.0 && *v < 1.0) {
                return w;
            }
        }
    }

    /// One draw in latent coordinates.
    pub fn sample_latent<R: Rng + ?Sized>(&self, rng: &mut R) -> LatentPoint {
        loop {
            let w = self.sample_composition(rng);
            let radial = self.sample_radial(rng);
            if let Ok(y) = LatentPoint::from_composition(w, radial) {
                return y;
            }
        }
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        loop {
            let w = self.sample_composition(rng);
            let radial = self.sample_radial(rng);
            let x = composition_to_point(&self.params, &w, radial);
            if x.iter().all(|v| v.is_finite() && *v > 0.0) {
                return x;
            }
        }
    }
}

impl Distribution<Vec<f64>> for Sampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.sample_point(rng)
    }
}

/// Draws `count` points. Deterministic given the state of `rng`.
pub fn sample<R: Rng + ?Sized>(p: &ModelParams, rng: &mut R, count: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(domain("sample count must be at least 1"));
    }
    debug_assert!(p.dim() <= MAX_DIMENSION);
    let sampler = Sampler::new(p.clone())?;
    Ok((0..count).map(|_| sampler.sample_point(rng)).collect())
}
