use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shapes with `|ξ|` below this are treated as exactly zero everywhere.
pub const XI_ZERO_TOL: f64 = 1e-8;

/// Scale/shape pair shared by the GPD and the exGPD.
///
/// For the GPD `sigma` is a scale; for the exGPD `ln sigma` is a location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub sigma: f64,
    pub xi: f64,
}

impl Params {
    pub fn new(sigma: f64, xi: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        if !xi.is_finite() {
            return Err(Error::InvalidParams(format!("xi must be finite, got {xi}")));
        }
        Ok(Params { sigma, xi })
    }

    /// True when the exponential (`ξ = 0`) formulas apply.
    #[inline]
    pub fn xi_is_zero(&self) -> bool {
        self.xi.abs() < XI_ZERO_TOL
    }

    /// Upper end of the GPD support, `-σ/ξ` for `ξ < 0`.
    pub fn gpd_upper_endpoint(&self) -> Option<f64> {
        if self.xi < 0.0 && !self.xi_is_zero() {
            Some(-self.sigma / self.xi)
        } else {
            None
        }
    }
}
