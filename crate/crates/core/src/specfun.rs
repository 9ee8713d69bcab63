//! Gamma-family special functions used by the exGPD closed forms.
//!
//! Everything here is real-argument and double precision. Digamma, trigamma
//! and tetragamma share one scheme: raise the argument with the recurrence
//! until it is at least [`ASYMPTOTIC_MIN`], then sum the Bernoulli asymptotic
//! series.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ, so that ψ(1) = −γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ψ'(1) = π²/6.
pub const PI_SQ_OVER_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

const ASYMPTOTIC_MIN: f64 = 10.0;

// B_{2k} for k = 1..8.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn require_positive(func: &'static str, z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            func,
            format!("argument must be positive and finite, got {z}"),
        ))
    }
}

/// ln Γ(z) for z > 0.
pub fn log_gamma(z: f64) -> Result<f64> {
    require_positive("log_gamma", z)?;
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: f64) -> f64 {
    if z == 1.0 || z == 2.0 {
        return 0.0;
    }
    if z < 0.5 {
        return log_gamma_unchecked(z + 1.0) - z.ln();
    }
    let z = z - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    require_positive("log_beta", a)?;
    require_positive("log_beta", b)?;
    Ok(log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b))
}

/// Digamma ψ(z) = d/dz ln Γ(z).
pub fn digamma(z: f64) -> Result<f64> {
    require_positive("digamma", z)?;
    Ok(digamma_unchecked(z))
}

pub(crate) fn digamma_unchecked(mut z: f64) -> f64 {
    let mut acc = 0.0;
    while z < ASYMPTOTIC_MIN {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // ψ(z) ~ ln z − 1/(2z) − Σ B_{2k} / (2k z^{2k})
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pow;
        pow *= inv2;
    }
    acc + z.ln() - 0.5 / z - series
}

/// Trigamma ψ'(z) = Σ_{r≥0} 1/(z + r)².
pub fn trigamma(z: f64) -> Result<f64> {
    require_positive("trigamma", z)?;
    Ok(trigamma_unchecked(z))
}

pub(crate) fn trigamma_unchecked(mut z: f64) -> f64 {
    let mut acc = 0.0;
    while z < ASYMPTOTIC_MIN {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // ψ'(z) ~ 1/z + 1/(2z²) + Σ B_{2k} / z^{2k+1}
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut pow = inv * inv2;
    let mut series = 0.0;
    for &b in BERNOULLI.iter() {
        series += b * pow;
        pow *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

/// Tetragamma ψ''(z), the derivative of trigamma.
pub fn tetragamma(z: f64) -> Result<f64> {
    require_positive("tetragamma", z)?;
    Ok(tetragamma_unchecked(z))
}

pub(crate) fn tetragamma_unchecked(mut z: f64) -> f64 {
    let mut acc = 0.0;
    while z < ASYMPTOTIC_MIN {
        acc -= 2.0 / (z * z * z);
        z += 1.0;
    }
    // ψ''(z) ~ −1/z² − 1/z³ − Σ (2k+1) B_{2k} / z^{2k+2}
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv2;
    let mut series = 0.0;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        series += (2 * k + 3) as f64 * b * pow;
        pow *= inv2;
    }
    acc - inv2 - inv2 * inv - series
}

/// The unique z > 0 with ψ'(z) = t.
///
/// Newton's method on a bisection bracket. ψ' is convex and strictly
/// decreasing, so Newton iterates started left of the root stay left of it;
/// any step that leaves the bracket is replaced by a bisection.
pub fn inv_trigamma(t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(
            "inv_trigamma",
            format!("target must be positive and finite, got {t}"),
        ));
    }
    let mut z = if t > 1e7 {
        1.0 / t.sqrt()
    } else if t < 1e-6 {
        1.0 / t
    } else {
        1.0 / t + 0.5
    };

    // Bracket [lo, hi] with ψ'(lo) ≥ t ≥ ψ'(hi).
    let mut lo = z;
    while trigamma_unchecked(lo) < t {
        lo *= 0.5;
    }
    let mut hi = z.max(lo);
    while trigamma_unchecked(hi) > t {
        hi *= 2.0;
    }
    z = z.clamp(lo, hi);

    for _ in 0..200 {
        let f = trigamma_unchecked(z) - t;
        if f == 0.0 {
            return Ok(z);
        }
        if f > 0.0 {
            lo = z;
        } else {
            hi = z;
        }
        let step = f / tetragamma_unchecked(z);
        let mut next = z - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() <= 4.0 * f64::EPSILON * z || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        z = next;
    }
    Ok(z)
}

/// B(x; a, 0) = ∫₀ˣ t^{a−1} (1 − t)^{−1} dt for 0 < x < 1, a > 0.
pub fn inc_beta_b0(x: f64, a: f64) -> Result<f64> {
    check_inc_beta_args(x, a)?;
    Ok(inc_beta_b0_split(x, 1.0 - x, a))
}

fn check_inc_beta_args(x: f64, a: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain("inc_beta_b0", format!("x must lie in (0, 1), got {x}")));
    }
    require_positive("inc_beta_b0", a)
}

const SERIES_SWITCH: f64 = 0.95;

/// B(x; a, 0) where the caller also supplies `w = 1 − x` computed without
/// cancellation.
pub(crate) fn inc_beta_b0_split(x: f64, w: f64, a: f64) -> f64 {
    if x <= SERIES_SWITCH {
        x.powf(a) * inc_beta_b0_scaled_series(x, a)
    } else {
        inc_beta_b0_near_one(w, a)
    }
}

/// B(x; a, 0) / x^a = Σ_{k≥0} x^k / (a + k), for 0 < x ≤ 0.95.
///
/// Kahan-compensated so that long sums near the switch point stay accurate.
pub(crate) fn inc_beta_b0_scaled_series(x: f64, a: f64) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut pow = 1.0_f64;
    let mut k = 0.0_f64;
    loop {
        let term = pow / (a + k);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term <= sum * 1e-17 || pow == 0.0 {
            return sum;
        }
        pow *= x;
        k += 1.0;
    }
}

/// B(1 − w; a, 0) for small w, from
/// `∫₀ˣ (t^{a−1} − 1)/(1 − t) dt = −ψ(a) − γ − ∫ₓ¹ (t^{a−1} − 1)/(1 − t) dt`
/// with the last integral expanded binomially in `w = 1 − x`.
pub(crate) fn inc_beta_b0_near_one(w: f64, a: f64) -> f64 {
    // Σ_{j≥1} c_j w^j / j with c_j = (−1)^j C(a−1, j).
    let mut coef = 1.0 - a;
    let mut pow = w;
    let mut tail = 0.0;
    for j in 1..=400 {
        let term = coef * pow / j as f64;
        tail += term;
        if term.abs() <= 1e-17 * tail.abs().max(1e-300) || coef == 0.0 {
            break;
        }
        coef *= (j as f64 + 1.0 - a) / (j as f64 + 1.0);
        pow *= w;
    }
    -w.ln() - digamma_unchecked(a) - EULER_GAMMA - tail
}

/// Γ(0, x) = E₁(x) = ∫ₓ^∞ e^{−t}/t dt for x > 0.
pub fn gamma_upper_0(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::domain("gamma_upper_0", format!("x must be positive, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok((-x).exp() * e1_continued_fraction(x))
    }
}

/// e^x Γ(0, x), finite for every x > 0 (→ 1/x as x → ∞).
pub(crate) fn exp_gamma_upper_0(x: f64) -> f64 {
    if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        e1_continued_fraction(x)
    }
}

// −γ − ln x + Σ_{k≥1} (−1)^{k+1} x^k / (k·k!)
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x / kf;
        let add = -term / kf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

// Modified Lentz evaluation of e^x E₁(x) = 1/(x+1− 1²/(x+3− 2²/(x+5− …))).
fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
