//! Test-only numerical oracles.
//!
//! Nothing here depends on `exgpd-core`; the routines are deliberately
//! generic so that they can check the closed forms without sharing code
//! paths with them.

// Quadrature nodes and weights are kept as published.
#![allow(clippy::excessive_precision)]

pub mod ks;
pub mod quad;
pub mod stats;
