//! Derivative-free minimization and finite-difference curvature.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop when `f_max - f_min` over the simplex falls below this.
    pub f_tolerance: f64,
    /// ... and the largest vertex distance from the best vertex falls below this.
    pub x_tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            f_tolerance: 1e-9,
            x_tolerance: 1e-7,
            max_evaluations: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Nelder–Mead with standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2), starting from `x0` and the axis-aligned
/// simplex `x0 + step_i e_i`.
///
/// Non-finite objective values are treated as `+inf`.
pub fn nelder_mead<F>(f: F, x0: &[f64], steps: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let evaluations = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(x0);
    simplex.push((x0.to_vec(), v0));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let spread = worst - best;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.is_finite() && spread <= opts.f_tolerance && size <= opts.x_tolerance {
            converged = true;
            break;
        }
        if evaluations.get() >= opts.max_evaluations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let towards = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, w)| c + t * (w - c)).collect()
        };

        let worst_x = simplex[dim].0.clone();
        let reflected = towards(-1.0, &worst_x);
        let fr = eval(&reflected);
        let second_worst = simplex[dim - 1].1;

        if fr < best {
            let expanded = towards(-2.0, &worst_x);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < second_worst {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst {
            let c = towards(-0.5, &worst_x);
            let v = eval(&c);
            (c, v)
        } else {
            let c = towards(0.5, &worst_x);
            let v = eval(&c);
            (c, v)
        };
        if fc < worst.min(fr) {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let best_x = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best_x
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        converged,
        iterations,
        evaluations: evaluations.get(),
    }
}

/// Central-difference Hessian with per-coordinate steps, symmetrized.
pub fn hessian<F>(f: F, x: &[f64], steps: &[f64]) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let n = x.len();
    let f0 = f(x)?;
    let at = |di: (usize, f64), dj: Option<(usize, f64)>| -> Result<f64> {
        let mut y = x.to_vec();
        y[di.0] += di.1;
        if let Some((j, h)) = dj {
            y[j] += h;
        }
        f(&y)
    };
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        let hi = steps[i];
        let plus = at((i, hi), None)?;
        let minus = at((i, -hi), None)?;
        h[(i, i)] = (plus - 2.0 * f0 + minus) / (hi * hi);
        for j in 0..i {
            let hj = steps[j];
            let pp = at((i, hi), Some((j, hj)))?;
            let pm = at((i, hi), Some((j, -hj)))?;
            let mp = at((i, -hi), Some((j, hj)))?;
            let mm = at((i, -hi), Some((j, -hj)))?;
            let v = (pp - pm - mp + mm) / (4.0 * hi * hj);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok((&h + h.transpose()) * 0.5)
}

/// Spectral summary of an information matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationDiagnostics {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub condition_number: f64,
}

/// Square roots of the diagonal of `h^-1` for a symmetric positive definite `h`.
pub fn inverse_diagonal_sqrt(h: &DMatrix<f64>) -> Result<(Vec<f64>, InformationDiagnostics)> {
    let eigen = SymmetricEigen::new(h.clone());
    let min = eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eigen
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let diagnostics = InformationDiagnostics {
        min_eigenvalue: min,
        max_eigenvalue: max,
        condition_number: max / min,
    };
    let not_pd = || Error::NotPositiveDefinite {
        eigenvalues: eigen.eigenvalues.iter().copied().collect(),
    };
    if min.is_nan() || min <= 0.0 || !max.is_finite() {
        return Err(not_pd());
    }
    let inverse = h.clone().cholesky().ok_or_else(not_pd)?.inverse();
    let values = (0..h.nrows()).map(|i| inverse[(i, i)].sqrt()).collect();
    Ok((values, diagnostics))
}
