//! Lag-one market information of fractional Gaussian models in closed form.
//!
//! For any Gaussian log-price with stationary increments, the sign of the next
//! `m`-step increment given the sign of the previous one is governed by the
//! correlation `ρ` of two consecutive increments. The information is then
//! `1 + f(½ - asin(ρ)/π) + f(½ + asin(ρ)/π)` with `f(x) = x log2 x`.
//!
//! * fBm: `ρ = 2^{2H-1} - 1`, independent of `m`.
//! * Delampertized fBm `e^{-Hθt} B^H(e^{θt})`: stationary with
//!   autocovariance `σ²/2 h(θτ)`, `h(x) = 2cosh(Hx) - (2sinh(x/2))^{2H}`,
//!   giving `ρ = (2 - h(2mθ)) / (4 - 2h(mθ)) - 1`; it depends on `m` and `θ`
//!   only through `mθ`.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

fn check_hurst(hurst: f64) -> Result<()> {
    if hurst > 0.0 && hurst < 1.0 {
        Ok(())
    } else {
        Err(domain("hurst", hurst, "0 < H < 1"))
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(name, v, "positive and finite"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FbmParams {
    pub hurst: f64,
    pub sigma: f64,
}

impl FbmParams {
    pub fn new(hurst: f64, sigma: f64) -> Result<Self> {
        check_hurst(hurst)?;
        check_positive("sigma", sigma)?;
        Ok(Self { hurst, sigma })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelampertizedParams {
    pub hurst: f64,
    pub sigma: f64,
    /// Mean-reversion strength.
    pub theta: f64,
}

impl DelampertizedParams {
    pub fn new(hurst: f64, sigma: f64, theta: f64) -> Result<Self> {
        check_hurst(hurst)?;
        check_positive("sigma", sigma)?;
        check_positive("theta", theta)?;
        Ok(Self {
            hurst,
            sigma,
            theta,
        })
    }
}

/// `x log2 x`, extended by continuity with `f(0) = 0`.
pub fn f_xlog2x(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(domain("x", x, "x >= 0"));
    }
    Ok(if x == 0.0 { 0.0 } else { x * x.log2() })
}

/// Correlation of two consecutive fBm increments, `2^{2H-1} - 1`.
pub fn rho_fbm(hurst: f64) -> Result<f64> {
    check_hurst(hurst)?;
    Ok((2.0 * hurst - 1.0).exp2() - 1.0)
}

/// `h(x) = 2cosh(Hx) - (2sinh(x/2))^{2H}`, with `h(0) = 2`.
pub fn h_lamperti(hurst: f64, x: f64) -> Result<f64> {
    let gap = lamperti_gap(hurst, x)?;
    Ok(if x > 1.0 {
        h_sum_form(hurst, x)
    } else {
        2.0 - gap
    })
}

/// `e^{-Hx} - e^{Hx} expm1(2H ln(1 - e^{-x}))`: both terms are nonnegative,
/// so this keeps relative precision where `h` decays for large `x`.
fn h_sum_form(hurst: f64, x: f64) -> f64 {
    let tail = if x > 40.0 {
        // 1 - (1 - u)^{2H} = 2H u (1 + O(u)) with u = e^{-x} below 1e-17
        2.0 * hurst * ((hurst - 1.0) * x).exp()
    } else {
        -(hurst * x).exp() * (2.0 * hurst * (-(-x).exp()).ln_1p()).exp_m1()
    };
    (-hurst * x).exp() + tail
}

/// `2 - h(x)`, evaluated as `(2sinh(x/2))^{2H} - 4sinh²(Hx/2)`.
///
/// Both terms carry full relative precision, so the small-`x` regime where
/// `h(x)` is within rounding of 2 stays accurate. Beyond `x = 1` the value is
/// taken from a decaying form of `h` instead.
pub fn lamperti_gap(hurst: f64, x: f64) -> Result<f64> {
    check_hurst(hurst)?;
    if x < 0.0 || x.is_nan() {
        return Err(domain("x", x, "x >= 0"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > 1.0 {
        return Ok(2.0 - h_sum_form(hurst, x));
    }
    let s = (0.5 * x).sinh();
    let power = (2.0 * hurst * (2.0 * s).ln()).exp();
    let t = (0.5 * hurst * x).sinh();
    Ok(power - 4.0 * t * t)
}

/// Correlation of consecutive `m`-step increments of the delampertized fBm.
pub fn rho_delampertized(hurst: f64, m_theta: f64) -> Result<f64> {
    check_hurst(hurst)?;
    check_positive("m_theta", m_theta)?;
    let rho = lamperti_gap(hurst, 2.0 * m_theta)? / (2.0 * lamperti_gap(hurst, m_theta)?) - 1.0;
    if rho.abs() >= 1.0 {
        log::warn!("rho = {rho} clamped into (-1, 1) at H = {hurst}, m_theta = {m_theta}");
    }
    Ok(rho.clamp(-1.0 + f64::EPSILON, 1.0 - f64::EPSILON))
}

/// `P(Y > 0, Z <= 0)` for standard Gaussians with correlation `rho`.
pub fn orthant_probability(rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(domain("rho", rho, "|rho| < 1"));
    }
    Ok(0.25 - rho.asin() / (2.0 * PI))
}

/// Lag-one market information for increment correlation `rho`, in bits.
///
/// `asin(ρ)` stands in for `atan(ρ / sqrt(1 - ρ²))`; the two agree and the
/// former stays finite at `|ρ| = 1`, where the value is 1 bit.
pub fn info_from_rho(rho: f64) -> Result<f64> {
    if !(rho.abs() <= 1.0) {
        return Err(domain("rho", rho, "|rho| <= 1"));
    }
    let a = rho.asin() / PI;
    Ok(1.0 + f_xlog2x(0.5 - a)? + f_xlog2x(0.5 + a)?)
}

pub fn info_fbm(hurst: f64) -> Result<f64> {
    info_from_rho(rho_fbm(hurst)?)
}

pub fn info_delampertized(hurst: f64, m: f64, theta: f64) -> Result<f64> {
    check_positive("m", m)?;
    check_positive("theta", theta)?;
    info_from_rho(rho_delampertized(hurst, m * theta)?)
}

/// `E[B_s B_t] = σ²/2 (|t|^{2H} + |s|^{2H} - |t - s|^{2H})`.
pub fn fbm_covariance(s: f64, t: f64, params: &FbmParams) -> f64 {
    let e = 2.0 * params.hurst;
    0.5 * params.sigma * params.sigma * (t.abs().powf(e) + s.abs().powf(e) - (t - s).abs().powf(e))
}

/// Stationary autocovariance `σ²/2 h(θτ)` of the delampertized fBm.
pub fn delampertized_autocovariance(tau: f64, params: &DelampertizedParams) -> Result<f64> {
    if tau < 0.0 || tau.is_nan() {
        return Err(domain("tau", tau, "tau >= 0"));
    }
    let s2 = params.sigma * params.sigma;
    Ok(0.5 * s2 * h_lamperti(params.hurst, params.theta * tau)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryModel {
    Fbm,
    Delampertized,
}

/// What a theory curve is swept over, and what is held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case")]
pub enum CurveSpec {
    /// `I²` of the fBm against `H`.
    FbmHurst,
    /// `I²_m` of the delampertized fBm against `H` at fixed `m` and `θ`.
    DelampertizedHurst { m: f64, theta: f64 },
    /// `I²` of the delampertized fBm against `mθ` at fixed `H`.
    DelampertizedMTheta { hurst: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryCurve {
    pub model: TheoryModel,
    pub fixed: CurveSpec,
    pub abscissa: Vec<f64>,
    /// `I²` in bits.
    pub ordinate: Vec<f64>,
}

impl TheoryCurve {
    /// Index of the smallest ordinate.
    pub fn argmin(&self) -> usize {
        self.ordinate
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let x = match self.fixed {
            CurveSpec::DelampertizedMTheta { .. } => "m_theta",
            _ => "hurst",
        };
        w.write_record([x, "I2"])?;
        for (a, b) in self.abscissa.iter().zip(&self.ordinate) {
            w.write_record([format!("{a:?}"), format!("{b:?}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `H = 0.05, 0.10, ..., 0.95`.
pub fn default_hurst_grid() -> Vec<f64> {
    (1..=19).map(|i| f64::from(i) / 20.0).collect()
}

pub fn theory_curve(spec: CurveSpec, grid: &[f64]) -> Result<TheoryCurve> {
    if grid.is_empty() {
        return Err(crate::Error::InsufficientRange("empty grid".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(domain("grid", w[1], "strictly increasing"));
    }
    let ordinate = grid
        .iter()
        .map(|&x| match spec {
            CurveSpec::FbmHurst => info_fbm(x),
            CurveSpec::DelampertizedHurst { m, theta } => info_delampertized(x, m, theta),
            CurveSpec::DelampertizedMTheta { hurst } => info_delampertized(hurst, x, 1.0),
        })
        .collect::<Result<Vec<_>>>()?;
    let model = match spec {
        CurveSpec::FbmHurst => TheoryModel::Fbm,
        _ => TheoryModel::Delampertized,
    };
    Ok(TheoryCurve {
        model,
        fixed: spec,
        abscissa: grid.to_vec(),
        ordinate,
    })
}
