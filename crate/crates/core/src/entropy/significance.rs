//! Gamma-distributed null of the empirical market information.
//!
//! Under efficiency, `Î^{L+1}_m` is asymptotically `Gamma(k, scale)` with
//! `k = 2^{L-1}` and `scale = 1 / ((n - mL) ln 2)`. The shape is always an
//! integer, so the CDF is the Erlang form `P(Poisson(x / scale) >= k)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// One-sided bound of a zero market information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceBound {
    pub shape: u64,
    pub scale: f64,
    pub quantile_level: f64,
    pub value: f64,
}

/// Bound for `Î^{L+1}_m` with `lags = L`, where `n` is the number of prices minus one.
pub fn significance_bound(
    n: usize,
    lags: usize,
    m: usize,
    confidence: f64,
) -> Result<SignificanceBound> {
    if lags == 0 || lags > 63 {
        return Err(domain("L", lags as f64, "1..=63"));
    }
    if m == 0 {
        return Err(domain("m", 0.0, "positive integer"));
    }
    let dof = n as i64 - (m * lags) as i64;
    if dof <= 0 {
        return Err(Error::DegreesOfFreedom(dof));
    }
    let shape = 1u64 << (lags - 1);
    let scale = 1.0 / (dof as f64 * std::f64::consts::LN_2);
    let value = gamma_quantile(shape, scale, confidence)?;
    Ok(SignificanceBound {
        shape,
        scale,
        quantile_level: confidence,
        value,
    })
}

/// CDF of `Gamma(shape, scale)` for integer `shape`.
///
/// Both Poisson tails are summed in log space around the mode, so the result
/// keeps relative precision for small probabilities and large shapes.
pub fn erlang_cdf(shape: u64, scale: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let y = x / scale;
    if !y.is_finite() {
        return 1.0;
    }
    let k = shape;
    let ln_y = y.ln();
    let log_pmf = |j: u64, ln_fact: f64| -y + j as f64 * ln_y - ln_fact;

    // Anchor at the mode so every term is <= 1 relative to it.
    let mode = y.floor() as u64;
    let span = (40.0 * y.sqrt().max(1.0) + 60.0) as u64;
    let lo = mode.saturating_sub(span);
    let hi = mode.max(k) + span;
    let mut ln_fact = ln_factorial(lo);
    let mut terms = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        if j > lo {
            ln_fact += (j as f64).ln();
        }
        terms.push(log_pmf(j, ln_fact));
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut below, mut above) = (0.0, 0.0);
    for (offset, t) in terms.iter().enumerate() {
        let w = (t - top).exp();
        if lo + (offset as u64) < k {
            below += w;
        } else {
            above += w;
        }
    }
    above / (below + above)
}

fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n < 256 {
        return (2..=n).map(|i| (i as f64).ln()).sum();
    }
    // Stirling series, ample at n >= 256.
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// Quantile of `Gamma(shape, scale)` by bracketed bisection on the Erlang CDF.
pub fn gamma_quantile(shape: u64, scale: f64, p: f64) -> Result<f64> {
    if shape == 0 {
        return Err(domain("shape", 0.0, "integer >= 1"));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(domain("scale", scale, "positive"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("p", p, "strictly between 0 and 1"));
    }
    if shape == 1 {
        return Ok(-scale * (-p).ln_1p());
    }
    let mut lo = 0.0;
    let mut hi = scale * shape as f64;
    while erlang_cdf(shape, scale, hi) < p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if erlang_cdf(shape, scale, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
