//! Method-of-moments and maximum-likelihood fits.
//!
//! The exGPD variance is a function of `ξ` alone, so the MME inverts the
//! variance map with [`inv_trigamma`] and then solves the mean equation for
//! `σ`. The MLE maximises the log-likelihood in the coordinates `(ln σ, ξ)`
//! with a damped Newton iteration; feasibility (`ξ > −1` and
//! `1 + ξ·max(e^y)/σ > 0`) is enforced by the line search, which never
//! proposes an infeasible point.
//!
//! Since `ln f_Y(y) = ln f_X(e^y) + y`, the exGPD and GPD log-likelihoods on
//! the same data differ by the constant `Σ ln x_i` and share a maximiser.
//! [`gpd_mle_fit`] is kept as an independent twin for cross-checking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::sample::{sample_variance, SortedSample};
use crate::specfun::{digamma_unchecked, inv_trigamma, EULER_GAMMA, PI_SQ_OVER_6};

/// `|s² − π²/6|` below this selects the `ξ = 0` branch.
pub const VARIANCE_TIE_TOL: f64 = 1e-10;
/// Gradient norm (in `(ln σ, ξ)` coordinates) at which the MLE stops.
pub const GRAD_TOL: f64 = 1e-8;
/// Fits with `ξ̂ + 1` below this are flagged as sitting on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-3;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    Mme,
    Mle,
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitMethod::Mme => "mme",
            FitMethod::Mle => "mle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: Params,
    pub method: FitMethod,
    pub n: usize,
    /// Log-likelihood at `params` (MLE only).
    pub loglik: Option<f64>,
    /// Asymptotic covariance of `(σ̂, ξ̂)` divided by `n`; MLE with `ξ̂ > −0.5` only.
    pub cov: Option<[[f64; 2]; 2]>,
    pub iterations: usize,
    /// The likelihood supremum lies at `ξ → −1`; `params` is the last
    /// feasible iterate rather than a stationary point.
    pub at_boundary: bool,
}

/// Shape whose exGPD variance equals `s2`: the inverse of
/// [`variance_for_xi`](crate::exgpd::variance_for_xi).
pub fn xi_from_variance(s2: f64) -> Result<f64> {
    if !(s2 > 0.0 && s2.is_finite()) {
        return Err(Error::DegenerateSample(format!(
            "variance must be positive and finite, got {s2}"
        )));
    }
    let gap = s2 - PI_SQ_OVER_6;
    if gap.abs() <= VARIANCE_TIE_TOL {
        Ok(0.0)
    } else if gap > 0.0 {
        Ok(1.0 / inv_trigamma(gap)?)
    } else {
        Ok(1.0 / (1.0 - inv_trigamma(-gap)?))
    }
}

/// Method-of-moments parameters from a mean and variance of log data.
pub fn mme_from_moments(mean: f64, var: f64) -> Result<Params> {
    let xi = xi_from_variance(var)?;
    let ln_sigma = if xi == 0.0 {
        mean + EULER_GAMMA
    } else if xi > 0.0 {
        xi.ln() + mean + EULER_GAMMA + digamma_unchecked(1.0 / xi)
    } else {
        (-xi).ln() + mean + EULER_GAMMA + digamma_unchecked(1.0 - 1.0 / xi)
    };
    Params::new(ln_sigma.exp(), xi)
}

/// Method-of-moments fit to a sample of log-exceedances.
pub fn mme_fit(sample: &SortedSample) -> Result<FitResult> {
    let ys = sample.values();
    if ys.len() < 2 {
        return Err(Error::TooFewObservations { need: 2, got: ys.len() });
    }
    let var = sample_variance(ys);
    if var == 0.0 {
        return Err(Error::DegenerateSample("all observations are equal".into()));
    }
    let params = mme_from_moments(sample.mean(), var)?;
    Ok(FitResult {
        params,
        method: FitMethod::Mme,
        n: ys.len(),
        loglik: None,
        cov: None,
        iterations: 0,
        at_boundary: false,
    })
}

/// Inverse Fisher information over `n`:
/// `[[2σ²(1+ξ), −σ(1+ξ)], [−σ(1+ξ), (1+ξ)²]] / n`, defined for `ξ > −0.5`.
pub fn asymptotic_cov(params: Params, n: usize) -> Option<[[f64; 2]; 2]> {
    if params.xi <= -0.5 || n == 0 {
        return None;
    }
    let (s, k) = (params.sigma, 1.0 + params.xi);
    let nf = n as f64;
    let off = -s * k / nf;
    Some([[2.0 * s * s * k / nf, off], [off, k * k / nf]])
}

/// exGPD log-likelihood of log data `ys`; `−∞` outside the support.
pub fn exgpd_loglik(ys: &[f64], params: Params) -> f64 {
    let a = params.sigma.ln();
    let obj = ExgpdObjective::new(ys);
    obj.loglik(a, params.xi)
}

/// GPD log-likelihood of raw data `xs`; `−∞` outside the support.
pub fn gpd_loglik(xs: &[f64], params: Params) -> f64 {
    let a = params.sigma.ln();
    let obj = GpdObjective::new(xs);
    obj.loglik(a, params.xi)
}

/// Maximum-likelihood fit to a sample of log-exceedances.
pub fn mle_fit(sample: &SortedSample, init: Option<Params>) -> Result<FitResult> {
    let ys = sample.values();
    check_fit_input(ys)?;
    let obj = ExgpdObjective::new(ys);
    let start = match init {
        Some(p) => user_start(&obj, p)?,
        None => mme_start(&obj, sample.mean(), sample_variance(ys)),
    };
    finish(maximize(&obj, start)?, ys.len())
}

/// Maximum-likelihood fit of the GPD to raw exceedances `x ≥ 0`.
pub fn gpd_mle_fit(sample: &SortedSample, init: Option<Params>) -> Result<FitResult> {
    let xs = sample.values();
    check_fit_input(xs)?;
    if let Some(&x) = xs.last().filter(|&&x| x < 0.0) {
        return Err(Error::domain(
            "gpd_mle_fit",
            format!("exceedances must be non-negative, found {x}"),
        ));
    }
    let obj = GpdObjective::new(xs);
    let start = match init {
        Some(p) => user_start(&obj, p)?,
        None => {
            if xs.iter().all(|&x| x > 0.0) {
                let ys: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
                let mean = ys.iter().sum::<f64>() / ys.len() as f64;
                mme_start(&obj, mean, sample_variance(&ys))
            } else {
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                clip_start(&obj, mean.ln(), 0.1)
            }
        }
    };
    finish(maximize(&obj, start)?, xs.len())
}

fn check_fit_input(v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::TooFewObservations { need: 2, got: v.len() });
    }
    if v.first() == v.last() {
        return Err(Error::DegenerateSample(
            "all observations are equal; no interior maximum".into(),
        ));
    }
    Ok(())
}

fn finish(opt: Optimum, n: usize) -> Result<FitResult> {
    let params = Params::new(opt.a.exp(), opt.xi)?;
    Ok(FitResult {
        params,
        method: FitMethod::Mle,
        n,
        loglik: Some(opt.loglik),
        cov: asymptotic_cov(params, n),
        iterations: opt.iterations,
        at_boundary: opt.at_boundary,
    })
}

fn user_start<O: Objective>(obj: &O, p: Params) -> Result<(f64, f64)> {
    let a = p.sigma.ln();
    if !obj.feasible(a, p.xi) {
        return Err(Error::InvalidParams(format!(
            "initial point sigma={}, xi={} is outside the feasible region",
            p.sigma, p.xi
        )));
    }
    Ok((a, p.xi))
}

fn mme_start<O: Objective>(obj: &O, mean: f64, var: f64) -> (f64, f64) {
    match mme_from_moments(mean, var) {
        Ok(p) => clip_start(obj, p.sigma.ln(), p.xi),
        Err(_) => clip_start(obj, mean, 0.1),
    }
}

/// Pull a starting point into the interior: `ξ ∈ [−0.9, 10]` and
/// `1 + ξ z_max ≥ 0.05`.
fn clip_start<O: Objective>(obj: &O, a: f64, xi: f64) -> (f64, f64) {
    let xi = xi.clamp(-0.9, 10.0);
    let mut a = a;
    if xi < 0.0 {
        // 1 + ξ e^{ln_max − a} ≥ 0.05  ⇔  a ≥ ln_max + ln(−ξ) − ln 0.95
        a = a.max(obj.ln_max() + (-xi).ln() - 0.95f64.ln());
    }
    (a, xi)
}

// ---------------------------------------------------------------------------
// Likelihood pieces shared by both objectives, as functions of z_i = x_i/σ.

/// `ln(1 + t)/t`.
fn log1p_over(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        1.0 - t * (0.5 - t * (1.0 / 3.0 - t * (0.25 - t / 5.0)))
    } else {
        t.ln_1p() / t
    }
}

/// `(ln(1+t) − t/(1+t)) / t²`.
fn phi_over_t2(t: f64) -> f64 {
    if t.abs() < 0.05 {
        // Σ_{k≥2} (−1)^k (k−1)/k t^{k−2}
        let mut sum = 0.0;
        for k in (2..=16).rev() {
            let kf = k as f64;
            let c = if k % 2 == 0 { (kf - 1.0) / kf } else { -(kf - 1.0) / kf };
            sum = sum * t + c;
        }
        sum
    } else {
        (t.ln_1p() - t / (1.0 + t)) / (t * t)
    }
}

/// `(2t/(1+t) + t²/(1+t)² − 2 ln(1+t)) / t³`.
fn chi_over_t3(t: f64) -> f64 {
    if t.abs() < 0.05 {
        // Σ_{k≥3} (−1)^k (k−1)(k−2)/k t^{k−3}
        let mut sum = 0.0;
        for k in (3..=18).rev() {
            let kf = k as f64;
            let m = (kf - 1.0) * (kf - 2.0) / kf;
            sum = sum * t + if k % 2 == 0 { m } else { -m };
        }
        sum
    } else {
        let w = 1.0 + t;
        (2.0 * t / w + t * t / (w * w) - 2.0 * t.ln_1p()) / (t * t * t)
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Sums {
    /// Σ (1 + 1/ξ) ln(1 + ξ z)
    penalty: f64,
    z_w: f64,
    z_w2: f64,
    z2_w2: f64,
    g_xi: f64,
    h_xi: f64,
}

fn accumulate<I: Iterator<Item = f64>>(zs: I, xi: f64) -> Option<Sums> {
    let mut s = Sums::default();
    for z in zs {
        let t = xi * z;
        let w = 1.0 + t;
        if !(w > 0.0) {
            return None;
        }
        let zw = z / w;
        s.penalty += w.ln() + z * log1p_over(t);
        s.z_w += zw;
        s.z_w2 += zw / w;
        s.z2_w2 += zw * zw;
        s.g_xi += z * z * phi_over_t2(t) - zw;
        s.h_xi += z * z * z * chi_over_t3(t) + zw * zw;
    }
    Some(s)
}

#[derive(Debug, Clone, Copy)]
struct Eval {
    loglik: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
}

fn derivs_from(s: &Sums, n: f64, xi: f64, loglik: f64) -> Eval {
    let k = 1.0 + xi;
    let h_aa = -k * s.z_w2;
    let h_ax = s.z_w - k * s.z2_w2;
    Eval {
        loglik,
        grad: [-n + k * s.z_w, s.g_xi],
        hess: [[h_aa, h_ax], [h_ax, s.h_xi]],
    }
}

trait Objective {
    fn ln_max(&self) -> f64;
    fn loglik(&self, a: f64, xi: f64) -> f64;
    fn eval(&self, a: f64, xi: f64) -> Option<Eval>;

    fn feasible(&self, a: f64, xi: f64) -> bool {
        a.is_finite() && xi > -1.0 && 1.0 + xi * (self.ln_max() - a).exp() > 0.0
    }
}

/// exGPD log-likelihood in `(a = ln σ, ξ)` on log data `y`:
/// `Σ y − n a − Σ (1 + 1/ξ) ln(1 + ξ e^{y − a})`.
struct ExgpdObjective<'a> {
    ys: &'a [f64],
    sum_y: f64,
    y_max: f64,
}

impl<'a> ExgpdObjective<'a> {
    fn new(ys: &'a [f64]) -> Self {
        ExgpdObjective {
            ys,
            sum_y: ys.iter().sum(),
            y_max: ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn zs(&self, a: f64) -> impl Iterator<Item = f64> + '_ {
        self.ys.iter().map(move |&y| (y - a).exp())
    }
}

impl Objective for ExgpdObjective<'_> {
    fn ln_max(&self) -> f64 {
        self.y_max
    }

    fn loglik(&self, a: f64, xi: f64) -> f64 {
        match accumulate(self.zs(a), xi) {
            Some(s) => self.sum_y - self.ys.len() as f64 * a - s.penalty,
            None => f64::NEG_INFINITY,
        }
    }

    fn eval(&self, a: f64, xi: f64) -> Option<Eval> {
        let s = accumulate(self.zs(a), xi)?;
        let n = self.ys.len() as f64;
        Some(derivs_from(&s, n, xi, self.sum_y - n * a - s.penalty))
    }
}

/// GPD log-likelihood in `(a = ln σ, ξ)` on raw data `x`:
/// `−n a − Σ (1 + 1/ξ) ln(1 + ξ x/σ)`.
struct GpdObjective<'a> {
    xs: &'a [f64],
    ln_x_max: f64,
}

impl<'a> GpdObjective<'a> {
    fn new(xs: &'a [f64]) -> Self {
        let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        GpdObjective {
            xs,
            ln_x_max: x_max.ln(),
        }
    }

    fn zs(&self, a: f64) -> impl Iterator<Item = f64> + '_ {
        let sigma = a.exp();
        self.xs.iter().map(move |&x| x / sigma)
    }
}

impl Objective for GpdObjective<'_> {
    fn ln_max(&self) -> f64 {
        self.ln_x_max
    }

    fn loglik(&self, a: f64, xi: f64) -> f64 {
        match accumulate(self.zs(a), xi) {
            Some(s) => -(self.xs.len() as f64) * a - s.penalty,
            None => f64::NEG_INFINITY,
        }
    }

    fn eval(&self, a: f64, xi: f64) -> Option<Eval> {
        let s = accumulate(self.zs(a), xi)?;
        let n = self.xs.len() as f64;
        Some(derivs_from(&s, n, xi, -n * a - s.penalty))
    }
}

// ---------------------------------------------------------------------------

struct Optimum {
    a: f64,
    xi: f64,
    loglik: f64,
    iterations: usize,
    at_boundary: bool,
}

/// Damped Newton ascent. The Hessian is shifted (Levenberg) until the
/// negated matrix is positive definite, and the step is halved until it
/// lands in the feasible region and satisfies the Armijo condition.
fn maximize<O: Objective>(obj: &O, start: (f64, f64)) -> Result<Optimum> {
    let (mut a, mut xi) = start;
    let mut grad_norm = f64::NAN;
    for iter in 0..MAX_ITER {
        let ev = obj
            .eval(a, xi)
            .ok_or_else(|| Error::domain("mle", "iterate left the feasible region"))?;
        let g = ev.grad;
        grad_norm = g[0].hypot(g[1]);
        let optimum = |at_boundary| Optimum {
            a,
            xi,
            loglik: ev.loglik,
            iterations: iter,
            at_boundary,
        };
        if grad_norm <= GRAD_TOL {
            return Ok(optimum(false));
        }

        let d = newton_direction(ev.hess, g);
        let slope = g[0] * d[0] + g[1] * d[1];
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let (na, nx) = (a + step * d[0], xi + step * d[1]);
            if obj.feasible(na, nx) {
                let l = obj.loglik(na, nx);
                if l >= ev.loglik + 1e-4 * step * slope {
                    accepted = Some((na, nx));
                    break;
                }
            }
            step *= 0.5;
        }
        let stalled = match accepted {
            Some((na, nx)) => (na - a).abs() <= 1e-15 * (1.0 + a.abs()) && (nx - xi).abs() <= 1e-15,
            None => true,
        };
        if stalled {
            return stalled_outcome(xi, slope, ev.loglik, iter, grad_norm).map(optimum);
        }
        (a, xi) = accepted.unwrap();
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITER,
        grad_norm,
    })
}

/// No further ascent is possible. Accept when the predicted gain is at
/// rounding level for the objective, or when pinned against `ξ = −1`.
/// Returns the boundary flag.
fn stalled_outcome(xi: f64, slope: f64, loglik: f64, iter: usize, grad_norm: f64) -> Result<bool> {
    if xi + 1.0 < BOUNDARY_TOL {
        Ok(true)
    } else if slope <= 1e-12 * (1.0 + loglik.abs()) {
        Ok(false)
    } else {
        Err(Error::NonConvergence {
            iterations: iter,
            grad_norm,
        })
    }
}

/// Solve `(−H + λI) d = g` with the smallest `λ ≥ 0` that makes the matrix
/// comfortably positive definite.
fn newton_direction(h: [[f64; 2]; 2], g: [f64; 2]) -> [f64; 2] {
    let (p, q, r) = (-h[0][0], -h[0][1], -h[1][1]);
    let mean = 0.5 * (p + r);
    let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    let ev_min = mean - rad;
    let floor = 1e-10 * (mean.abs() + rad).max(1.0);
    let lambda = if ev_min < floor { floor - ev_min } else { 0.0 };
    let (p, r) = (p + lambda, r + lambda);
    let det = p * r - q * q;
    [(r * g[0] - q * g[1]) / det, (p * g[1] - q * g[0]) / det]
}
