//! The exponentiated generalized Pareto distribution (exGPD) and the tools
//! built on it.
//!
//! If `X ~ GPD(σ, ξ)` then `Y = ln X ~ exGPD(σ, ξ)`. Under the log transform
//! the GPD scale becomes a location (`ln σ`) and the variance of `Y` depends
//! on the shape `ξ` alone. That fact drives the Log Variance (LV) tail-index
//! plot in [`tailindex`].
//!
//! Module map:
//!
//! - [`specfun`]: gamma-family kernels (log-gamma, digamma, trigamma and its
//!   inverse, `B(x; a, 0)`, `Γ(0, x)`).
//! - [`gpd`]: GPD/GEV distribution functions and seeded samplers.
//! - [`exgpd`]: the exGPD distribution, moments, mgf and integral identities.
//! - [`estimate`]: method of moments and maximum likelihood fits.
//! - [`risk`]: VaR, mean excess function and CTE.
//! - [`tailindex`]: Hill and LV estimator paths, read regions.
//! - [`ingest`]: numeric file loading and the bundled Danish/BMW datasets.
//! - [`plot`]: SVG and TSV emission.

// Coefficient tables and reference values are kept as published; `!(x > 0.0)`
// is the NaN-rejecting form of argument checks.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod exgpd;
pub mod gpd;
pub mod ingest;
pub mod params;
pub mod plot;
pub mod risk;
pub mod rng;
pub mod sample;
pub mod specfun;
pub mod tailindex;

pub use error::{Error, Result};
pub use estimate::{gpd_mle_fit, mle_fit, mme_fit, FitMethod, FitResult};
pub use exgpd::ExgpdDist;
pub use gpd::{Family, SimSpec};
pub use ingest::{Dataset, Tail, Transform};
pub use params::Params;
pub use risk::RiskReport;
pub use sample::SortedSample;
pub use tailindex::{EstimatePath, PathKind, PathPoint};
