//! Entropy-based market information of price series.
//!
//! The crate turns prices into sign indicators of `m`-step returns, estimates
//! the Shannon entropy of length-`L` indicator words over a grid of `(L, m)`,
//! and derives the market information `I = 1 + H^{L-1} - H^L` together with
//! its partial (first-difference) version and gamma significance bounds.
//!
//! Alongside the estimators it provides closed forms of the lag-one market
//! information for fractional Brownian motion and for its stationary inverse
//! Lamperti transform, exact simulators for those processes and for a
//! pseudo-periodic toy model, and a moment-based Hurst exponent estimator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod scaling;
pub mod series;
pub mod simulate;
mod stats;
pub mod theory;

pub use entropy::{
    empirical_entropy, entropy_rate_slope, gamma_quantile, information_profile, market_information,
    profile_prices, shannon_entropy, significance_bound, EntropyProfile, InformationProfile,
    ProfileReport, SignificanceBound,
};
pub use error::{Error, Result};
pub use scaling::{estimate_hurst, structure_function, LogLogCurve, StructureFunction};
pub use series::{
    compute_returns, extract_words, load_prices, to_indicators, IndicatorSeries, PriceMode,
    PriceSeries, ReturnSeries, WordDistribution,
};
pub use simulate::{
    simulate_delampertized, simulate_fbm, simulate_pseudo_periodic, to_price_series, ModelParams,
    PseudoPeriodicParams, SimulatedPath,
};
pub use theory::{DelampertizedParams, FbmParams, TheoryCurve};
