//! Multivariate Weibull distribution with a single association parameter.
//!
//! The joint survival function is
//!
//! ```text
//! S(x) = exp(-(sum_i (x_i / scale_i)^(shape_i / alpha))^alpha),   0 < alpha <= 1,
//! ```
//!
//! so each margin is Weibull(`scale_i`, `shape_i`) and `alpha = 1` gives
//! independence. The crate provides densities and censored-data likelihood
//! contributions ([`model`]), the combinatorial coefficients they need
//! ([`combinatorics`]), an exact sampler built on a latent simplex/radial
//! representation ([`latent`]), closed-form moments ([`moments`]) and maximum
//! likelihood estimation with Wald standard errors ([`fit`]).
//!
//! ```
//! use mvweibull::ModelParams;
//!
//! let p = ModelParams::new(0.5, vec![1.0, 1.0], vec![1.0, 1.0])?;
//! let s = p.survival(&[1.0, 1.0])?;
//! assert!((s - (-(2f64).sqrt()).exp()).abs() < 1e-15);
//! # Ok::<(), mvweibull::Error>(())
//! ```

pub mod cli;
pub mod combinatorics;
pub mod data;
pub mod error;
pub mod fit;
pub mod latent;
pub mod model;
pub mod moments;
pub mod special;

pub use error::{Error, Result};
pub use fit::{fit_mle, Dataset, FitOptions, FitResult, Observation};
pub use latent::{sample, seeded_stream, MixtureWeights, Sampler};
pub use model::ModelParams;
pub use moments::MomentOrder;
