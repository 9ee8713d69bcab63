//! The exGPD: the law of `Y = ln X` for `X ~ GPD(σ, ξ)`.
//!
//! Survival function `F̄(y) = (1 + ξ e^{y}/σ)^{−1/ξ}` (`exp(−e^{y−ln σ})` at
//! `ξ = 0`). Support is the whole line for `ξ ≥ 0` and
//! `(−∞, ln(−σ/ξ)]` for `ξ < 0`.
//!
//! All powers of `1 + ξe^y/σ` are evaluated as
//! `exp(c · ln1p(ξ · exp(y − ln σ)))`, so `σ` only ever enters through
//! `ln σ` and large `y` does not overflow.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::{open_unit, seeded};
use crate::sample::SortedSample;
use crate::specfun::{
    digamma_unchecked, exp_gamma_upper_0, gamma_upper_0, inc_beta_b0_split, log_gamma_unchecked, trigamma_unchecked,
    EULER_GAMMA, PI_SQ_OVER_6,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Regime {
    Negative,
    Zero,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExgpdDist {
    params: Params,
    ln_sigma: f64,
}

impl ExgpdDist {
    pub fn new(params: Params) -> Self {
        ExgpdDist {
            params,
            ln_sigma: params.sigma.ln(),
        }
    }

    pub fn from_sigma_xi(sigma: f64, xi: f64) -> Result<Self> {
        Params::new(sigma, xi).map(Self::new)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma
    }

    pub fn xi(&self) -> f64 {
        self.params.xi
    }

    pub fn ln_sigma(&self) -> f64 {
        self.ln_sigma
    }

    pub(crate) fn regime(&self) -> Regime {
        if self.params.xi_is_zero() {
            Regime::Zero
        } else if self.params.xi > 0.0 {
            Regime::Positive
        } else {
            Regime::Negative
        }
    }

    /// `ln(−σ/ξ)` when `ξ < 0`.
    pub fn upper_endpoint(&self) -> Option<f64> {
        match self.regime() {
            Regime::Negative => Some(self.ln_sigma - (-self.params.xi).ln()),
            _ => None,
        }
    }

    /// `ln(1 + ξ e^{v})` for `v = y − ln σ`, assuming `1 + ξe^v > 0`.
    pub(crate) fn ln_base(&self, v: f64) -> f64 {
        let xi = self.params.xi;
        if xi > 0.0 {
            let lt = v + xi.ln();
            if lt > 30.0 {
                // ln(t) + ln1p(1/t), with t too large for exp
                return lt + (-lt).exp().ln_1p();
            }
        }
        (xi * v.exp()).ln_1p()
    }

    /// `ln F̄(y)`.
    pub fn log_survival(&self, y: f64) -> f64 {
        let v = y - self.ln_sigma;
        match self.regime() {
            Regime::Zero => -v.exp(),
            Regime::Positive => -self.ln_base(v) / self.params.xi,
            Regime::Negative => {
                if y >= self.upper_endpoint().unwrap() {
                    f64::NEG_INFINITY
                } else {
                    -self.ln_base(v) / self.params.xi
                }
            }
        }
    }

    pub fn survival(&self, y: f64) -> f64 {
        self.log_survival(y).exp()
    }

    /// Distribution function; 1 at and above the upper endpoint.
    pub fn cdf(&self, y: f64) -> f64 {
        -self.log_survival(y).exp_m1()
    }

    /// Density; zero outside the support.
    pub fn pdf(&self, y: f64) -> f64 {
        let v = y - self.ln_sigma;
        let xi = self.params.xi;
        match self.regime() {
            Regime::Zero => (v - v.exp()).exp(),
            Regime::Positive => (v - (1.0 / xi + 1.0) * self.ln_base(v)).exp(),
            Regime::Negative => {
                let top = self.upper_endpoint().unwrap();
                if y > top {
                    return 0.0;
                }
                let power = -1.0 / xi - 1.0;
                if y == top {
                    // e^v = −1/ξ and the base vanishes
                    return if power == 0.0 {
                        -1.0 / xi
                    } else if power > 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                }
                (v + power * self.ln_base(v)).exp()
            }
        }
    }

    /// The unique mode `ln σ`; fails for `ξ < −1`, where the density is unbounded.
    pub fn mode(&self) -> Result<f64> {
        if self.params.xi < -1.0 {
            Err(Error::UnboundedDensity { xi: self.params.xi })
        } else {
            Ok(self.ln_sigma)
        }
    }

    /// Hazard `f/(1 − F) = 1/(σe^{−y} + ξ)`, increasing in `y`.
    /// Infinite at or beyond the upper endpoint.
    pub fn hazard(&self, y: f64) -> f64 {
        let xi = if self.params.xi_is_zero() { 0.0 } else { self.params.xi };
        let denom = (self.ln_sigma - y).exp() + xi;
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / denom
        }
    }

    /// `y_p = ln((σ/ξ)((1 − p)^{−ξ} − 1))`, the log of the GPD quantile.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(
                "quantile",
                format!("probability must lie in (0, 1), got {p}"),
            ));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        let log_sf = (-p).ln_1p();
        match self.regime() {
            Regime::Zero => self.ln_sigma + (-log_sf).ln(),
            _ => {
                let xi = self.params.xi;
                self.ln_sigma + ((-xi * log_sf).exp_m1() / xi).ln()
            }
        }
    }

    /// One inverse-transform draw.
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile_unchecked(open_unit(rng))
    }

    /// `n` draws from the seeded generator, sorted descending.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SortedSample> {
        if n == 0 {
            return Err(Error::InvalidParams("sample size n must be at least 1".into()));
        }
        let mut rng = seeded(seed);
        let draws = (0..n).map(|_| self.draw(&mut rng)).collect();
        SortedSample::from_unsorted(
            draws,
            format!(
                "exgpd(sigma={}, xi={}) n={n} seed={seed}",
                self.params.sigma, self.params.xi
            ),
        )
    }

    /// Admissible `s` for the mgf: `(−1, ∞)`, capped at `1/ξ` when `ξ > 0`.
    pub fn mgf_domain(&self) -> (f64, f64) {
        match self.regime() {
            Regime::Positive => (-1.0, 1.0 / self.params.xi),
            _ => (-1.0, f64::INFINITY),
        }
    }

    /// `ln M_Y(s) = ln E[X^s]`.
    pub fn log_mgf(&self, s: f64) -> Result<f64> {
        let (lo, hi) = self.mgf_domain();
        if !(s > lo && s < hi) {
            return Err(Error::domain("mgf", format!("s = {s} outside ({lo}, {hi})")));
        }
        let xi = self.params.xi;
        let lgb = |a: f64, b: f64| log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b);
        Ok(match self.regime() {
            Regime::Zero => s * self.ln_sigma + log_gamma_unchecked(1.0 + s),
            Regime::Positive => -xi.ln() + s * (self.ln_sigma - xi.ln()) + lgb(s + 1.0, 1.0 / xi - s),
            Regime::Negative => {
                let m = -xi;
                -m.ln() + s * (self.ln_sigma - m.ln()) + lgb(s + 1.0, 1.0 / m)
            }
        })
    }

    /// Moment generating function `E[e^{sY}]`.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        self.log_mgf(s).map(f64::exp)
    }

    pub fn mean(&self) -> f64 {
        let xi = self.params.xi;
        match self.regime() {
            Regime::Zero => self.ln_sigma - EULER_GAMMA,
            Regime::Positive => self.ln_sigma - xi.ln() - EULER_GAMMA - digamma_unchecked(1.0 / xi),
            Regime::Negative => self.ln_sigma - (-xi).ln() - EULER_GAMMA - digamma_unchecked(1.0 - 1.0 / xi),
        }
    }

    /// Variance; a function of `ξ` alone.
    pub fn variance(&self) -> f64 {
        variance_for_xi(self.params.xi)
    }

    /// `E[(1 + ξe^Y/σ)^{−r}] = 1/(1 + rξ)`, valid for `rξ > −1`.
    pub fn identity_a(&self, r: f64) -> Result<f64> {
        let rx = r * self.params.xi;
        if rx <= -1.0 {
            return Err(Error::domain("identity_a", format!("needs r*xi > -1, got {rx}")));
        }
        Ok(1.0 / (1.0 + rx))
    }

    /// `E[(ln(1 + ξe^Y/σ))^k] = ξ^k k!`.
    pub fn identity_b(&self, k: u32) -> f64 {
        let factorial: f64 = (1..=k).map(f64::from).product();
        self.params.xi.powi(k as i32) * factorial
    }

    /// `E[e^Y F̄(Y)^r] = σ/((r + 1 − ξ)(r + 1))`.
    ///
    /// Needs `1 + r > ξ` when `ξ > 0` and `r > −1` when `ξ ≤ 0`.
    pub fn identity_c(&self, r: f64) -> Result<f64> {
        let xi = self.params.xi;
        let ok = match self.regime() {
            Regime::Positive => 1.0 + r > xi,
            Regime::Negative | Regime::Zero => r > -1.0,
        };
        if !ok {
            return Err(Error::domain(
                "identity_c",
                format!("r = {r} not admissible for xi = {xi}"),
            ));
        }
        Ok(self.params.sigma / ((r + 1.0 - xi) * (r + 1.0)))
    }

    /// `P(max(Y_1..Y_N) ≤ y)` for `N ~ Poisson(λ)`: `exp(−λ F̄(y))`.
    pub fn poisson_max_cdf(&self, lambda: f64, y: f64) -> Result<f64> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(
                "poisson_max_cdf",
                format!("lambda must be positive, got {lambda}"),
            ));
        }
        Ok((-lambda * self.survival(y)).exp())
    }

    /// `∫_c^∞ F̄(y) dy` in closed form: `B((1 + ξe^c/σ)^{−1}; 1/ξ, 0)` for
    /// `ξ > 0`, `B(1 + ξe^c/σ; 1 − 1/ξ, 0)` for `ξ < 0`, `Γ(0, e^{c − ln σ})`
    /// for `ξ = 0`.
    pub fn tail_integral(&self, c: f64) -> Result<f64> {
        let v = c - self.ln_sigma;
        let xi = self.params.xi;
        match self.regime() {
            Regime::Zero => gamma_upper_0(v.exp()),
            Regime::Positive => {
                let t = xi * v.exp();
                if t == f64::INFINITY {
                    return Ok(0.0);
                }
                let x = 1.0 / (1.0 + t);
                let w = t / (1.0 + t);
                Ok(inc_beta_b0_split(x, w, 1.0 / xi))
            }
            Regime::Negative => {
                let top = self.upper_endpoint().unwrap();
                if c >= top {
                    return Err(Error::domain(
                        "tail_integral",
                        format!("c = {c} at or above the upper endpoint {top}"),
                    ));
                }
                let w = -xi * v.exp();
                Ok(inc_beta_b0_split(1.0 - w, w, 1.0 - 1.0 / xi))
            }
        }
    }

    /// Mean excess `E[Y − u | Y > u] = ∫_u^∞ F̄ / F̄(u)`, evaluated in a form
    /// that never divides two underflowed quantities.
    pub(crate) fn mean_excess_unchecked(&self, u: f64) -> f64 {
        let v = u - self.ln_sigma;
        let xi = self.params.xi;
        match self.regime() {
            // e^{z} Γ(0, z), z = e^{u}/σ
            Regime::Zero => exp_gamma_upper_0(v.exp()),
            Regime::Positive => {
                let t = xi * v.exp();
                let a = 1.0 / xi;
                if t == f64::INFINITY {
                    return xi;
                }
                let x = 1.0 / (1.0 + t);
                let w = t / (1.0 + t);
                scaled_inc_beta(x, w, a, a)
            }
            Regime::Negative => {
                let w = -xi * v.exp();
                let x = 1.0 - w;
                scaled_inc_beta(x, w, 1.0 - 1.0 / xi, -1.0 / xi)
            }
        }
    }
}

/// `B(x; a, 0) / x^p` without forming `x^a` when `x` is small.
fn scaled_inc_beta(x: f64, w: f64, a: f64, p: f64) -> f64 {
    use crate::specfun::{inc_beta_b0_near_one, inc_beta_b0_scaled_series};
    if x <= 0.95 {
        x.powf(a - p) * inc_beta_b0_scaled_series(x, a)
    } else {
        inc_beta_b0_near_one(w, a) / x.powf(p)
    }
}

/// Variance of the exGPD as a function of the shape: `ψ'(1) + ψ'(1/ξ)` for
/// `ξ > 0`, `ψ'(1) − ψ'(1 − 1/ξ)` for `ξ < 0`, `π²/6` at zero.
pub fn variance_for_xi(xi: f64) -> f64 {
    if xi.abs() < crate::params::XI_ZERO_TOL {
        PI_SQ_OVER_6
    } else if xi > 0.0 {
        PI_SQ_OVER_6 + trigamma_unchecked(1.0 / xi)
    } else {
        PI_SQ_OVER_6 - trigamma_unchecked(1.0 - 1.0 / xi)
    }
}
