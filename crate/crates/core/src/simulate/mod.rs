//! Seeded sample paths of fBm, delampertized fBm and the pseudo-periodic toy
//! model, and their conversion to price series.
//!
//! Every generator is driven by ChaCha8 seeded from a 64-bit integer, so the
//! same inputs give bit-identical paths on every platform. Each simulator
//! returns `n + 1` points: log-path models include the starting value and the
//! returns model produces `n` returns, so the derived price series always has
//! `n + 1` prices and `n` one-step returns.

mod gaussian;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::series::PriceSeries;
use crate::theory::{lamperti_gap, DelampertizedParams, FbmParams};

/// `R_i = β R_{i-τ} + sqrt(1 - β²) ε_i`, multiplied by `scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoPeriodicParams {
    pub beta: f64,
    pub tau: usize,
    /// Standard deviation of the returns.
    pub scale: f64,
}

impl PseudoPeriodicParams {
    pub fn new(beta: f64, tau: usize, scale: f64) -> Result<Self> {
        if !(beta.abs() < 1.0) {
            return Err(domain("beta", beta, "|beta| < 1"));
        }
        if tau == 0 {
            return Err(domain("tau", 0.0, "tau >= 1"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(domain("scale", scale, "positive and finite"));
        }
        Ok(Self { beta, tau, scale })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Fbm,
    Delampertized,
    PseudoPeriodic,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Fbm => "fbm",
            Model::Delampertized => "delampertized",
            Model::PseudoPeriodic => "pseudo_periodic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    Fbm(FbmParams),
    Delampertized(DelampertizedParams),
    PseudoPeriodic(PseudoPeriodicParams),
}

impl ModelParams {
    pub fn model(&self) -> Model {
        match self {
            ModelParams::Fbm(_) => Model::Fbm,
            ModelParams::Delampertized(_) => Model::Delampertized,
            ModelParams::PseudoPeriodic(_) => Model::PseudoPeriodic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulatedPath {
    pub params: ModelParams,
    pub dt: f64,
    /// Log-path for the Gaussian models, returns for the pseudo-periodic one.
    pub values: Vec<f64>,
    pub seed: u64,
}

impl SimulatedPath {
    pub fn model(&self) -> Model {
        self.params.model()
    }

    /// Whether `values` are returns rather than a log-path.
    pub fn is_returns(&self) -> bool {
        self.model() == Model::PseudoPeriodic
    }
}

/// The generator used by every simulator.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_grid(n: usize, dt: f64) -> Result<()> {
    if n < 2 {
        return Err(domain("n", n as f64, "n >= 2"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(domain("dt", dt, "positive and finite"));
    }
    Ok(())
}

/// `B_0 = 0, B_dt, ..., B_{n dt}`, from fractional Gaussian noise summed.
pub fn simulate_fbm(params: FbmParams, n: usize, dt: f64, seed: u64) -> Result<SimulatedPath> {
    check_grid(n, dt)?;
    let params = FbmParams::new(params.hurst, params.sigma)?;
    let e = 2.0 * params.hurst;
    let var = params.sigma * params.sigma * dt.powf(e);
    let acv = |k: usize| {
        let k = k as f64;
        0.5 * var * ((k + 1.0).powf(e) + (k - 1.0).abs().powf(e) - 2.0 * k.powf(e))
    };
    let mut rng = rng_from_seed(seed);
    let noise = gaussian::sample_stationary(acv, n, &mut rng)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for x in noise {
        acc += x;
        values.push(acc);
    }
    Ok(SimulatedPath {
        params: ModelParams::Fbm(params),
        dt,
        values,
        seed,
    })
}

/// Stationary path at `t = 0, dt, ..., n dt` with autocovariance
/// `σ²/2 h(θτ)`.
pub fn simulate_delampertized(
    params: DelampertizedParams,
    n: usize,
    dt: f64,
    seed: u64,
) -> Result<SimulatedPath> {
    check_grid(n, dt)?;
    let params = DelampertizedParams::new(params.hurst, params.sigma, params.theta)?;
    let s2 = params.sigma * params.sigma;
    let gap = |k: usize| lamperti_gap(params.hurst, params.theta * dt * k as f64);
    let cached: Vec<f64> = (0..=n).map(gap).collect::<Result<_>>()?;
    let acv = |k: usize| {
        let g = cached
            .get(k)
            .copied()
            .unwrap_or_else(|| gap(k).unwrap_or(2.0));
        0.5 * s2 * (2.0 - g)
    };
    let mut rng = rng_from_seed(seed);
    let values = gaussian::sample_stationary(acv, n + 1, &mut rng)?;
    Ok(SimulatedPath {
        params: ModelParams::Delampertized(params),
        dt,
        values,
        seed,
    })
}

/// `n` returns of the pseudo-periodic model; the first `τ` are standard
/// Gaussian draws, the stationary law of the recursion.
pub fn simulate_pseudo_periodic(
    params: PseudoPeriodicParams,
    n: usize,
    seed: u64,
) -> Result<SimulatedPath> {
    check_grid(n, 1.0)?;
    let params = PseudoPeriodicParams::new(params.beta, params.tau, params.scale)?;
    let mut rng = rng_from_seed(seed);
    let innovation = (1.0 - params.beta * params.beta).sqrt();
    let mut r: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        let eps: f64 = rng.sample(StandardNormal);
        let next = if i < params.tau {
            eps
        } else {
            params.beta * r[i - params.tau] + innovation * eps
        };
        r.push(next);
    }
    for v in &mut r {
        *v *= params.scale;
    }
    Ok(SimulatedPath {
        params: ModelParams::PseudoPeriodic(params),
        dt: 1.0,
        values: r,
        seed,
    })
}

/// Prices with integer timestamps: `p0 exp(v_i - v_0)` for log-paths and
/// compounded returns `P_i = P_{i-1} (1 + R_i)` for the returns model.
pub fn to_price_series(path: &SimulatedPath, p0: f64) -> Result<PriceSeries> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(domain("p0", p0, "positive and finite"));
    }
    let prices = if path.is_returns() {
        let mut prices = Vec::with_capacity(path.values.len() + 1);
        prices.push(p0);
        let mut p = p0;
        for (i, r) in path.values.iter().enumerate() {
            if *r <= -1.0 {
                return Err(Error::NonPositiveStep { step: i + 1 });
            }
            p *= 1.0 + r;
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::PriceOverflow { step: i + 1 });
            }
            prices.push(p);
        }
        prices
    } else {
        let v0 = path.values.first().copied().unwrap_or(0.0);
        path.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let p = p0 * (v - v0).exp();
                if p > 0.0 && p.is_finite() {
                    Ok(p)
                } else {
                    Err(Error::PriceOverflow { step: i })
                }
            })
            .collect::<Result<_>>()?
    };
    PriceSeries::from_prices(prices)
}
