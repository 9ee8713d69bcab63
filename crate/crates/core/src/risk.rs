//! Tail risk measures on the log scale: VaR, the excess distribution, the
//! mean excess function and the conditional tail expectation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exgpd::ExgpdDist;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub level: f64,
    pub var: f64,
    pub mef_at_var: f64,
    /// `var + mef_at_var`
    pub cte: f64,
}

/// Value-at-risk `y_p`; equal to `ln x_p` for the underlying GPD.
pub fn var_level(d: &ExgpdDist, p: f64) -> Result<f64> {
    d.quantile(p)
}

fn check_threshold(d: &ExgpdDist, func: &'static str, u: f64) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::domain(func, format!("threshold must be finite, got {u}")));
    }
    if let Some(top) = d.upper_endpoint() {
        if u >= top {
            return Err(Error::domain(
                func,
                format!("threshold {u} at or above the upper endpoint {top}"),
            ));
        }
    }
    Ok(())
}

/// `P(Y − u ≤ y' | Y > u)`. Not an exGPD distribution function.
pub fn excess_cdf(d: &ExgpdDist, u: f64, y_excess: f64) -> Result<f64> {
    check_threshold(d, "excess_cdf", u)?;
    if !(y_excess >= 0.0) {
        return Err(Error::domain(
            "excess_cdf",
            format!("excess must be non-negative, got {y_excess}"),
        ));
    }
    let diff = d.log_survival(u + y_excess) - d.log_survival(u);
    Ok(-diff.exp_m1())
}

/// Mean excess `e(u) = E[Y − u | Y > u]`.
pub fn mef(d: &ExgpdDist, u: f64) -> Result<f64> {
    check_threshold(d, "mef", u)?;
    Ok(d.mean_excess_unchecked(u))
}

/// Conditional tail expectation `E[Y | Y > y_p] = y_p + e(y_p)`.
pub fn cte(d: &ExgpdDist, p: f64) -> Result<RiskReport> {
    let var = var_level(d, p)?;
    let mef_at_var = mef(d, var)?;
    Ok(RiskReport {
        level: p,
        var,
        mef_at_var,
        cte: var + mef_at_var,
    })
}
