//! Plug-in Shannon entropy of indicator words and the market information
//! derived from it.
//!
//! Information values compare `Ĥ^L` and `Ĥ^{L+1}` on a common set of start
//! indices: the length-`L` words are the prefixes of the length-`L+1` words.
//! The empirical chain rule then holds exactly, so
//! `I^{L+1} = 1 + Ĥ^L - Ĥ^{L+1}` is one minus an empirical conditional
//! entropy and lies in `[0, 1]`.

mod profile;
mod significance;

pub use profile::{
    information_profile, profile_prices, EntropyProfile, InformationProfile, ProfileReport,
};
pub use significance::{erlang_cdf, gamma_quantile, significance_bound, SignificanceBound};

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::series::{extract_words, IndicatorSeries, WordDistribution};
use crate::stats::ols;

/// `-Σ p log2 p` with `0 log2 0 = 0`.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(probabilities: I) -> f64 {
    probabilities
        .into_iter()
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

pub fn shannon_entropy(dist: &WordDistribution) -> Result<f64> {
    if dist.total() == 0 {
        return Err(Error::NoObservations);
    }
    Ok(entropy_bits(dist.probabilities()))
}

/// `Ĥ^L_m` over every valid window of the series.
pub fn empirical_entropy(j: &IndicatorSeries, word_length: usize) -> Result<f64> {
    shannon_entropy(&extract_words(j, word_length)?)
}

/// `Î^{L+1}_m = 1 + Ĥ^L_m - Ĥ^{L+1}_m` for `L = lags` lagged indicators.
pub fn market_information(j: &IndicatorSeries, lags: usize) -> Result<f64> {
    if lags == 0 {
        return Err(crate::error::domain("L", 0.0, "L >= 1"));
    }
    let long = extract_words(j, lags + 1)?;
    Ok(information_from_words(&long))
}

/// Information of the last symbol given the others, on the windows of `long`.
pub(crate) fn information_from_words(long: &WordDistribution) -> f64 {
    let h_long = entropy_bits(long.probabilities());
    let h_short = if long.word_length > 1 {
        entropy_bits(long.prefix_marginal().probabilities())
    } else {
        0.0
    };
    (1.0 + h_short - h_long).clamp(0.0, 1.0)
}

/// Least-squares slope of `Ĥ^L_m` against `L` over the given word lengths.
///
/// Absent cells inside the range are skipped; at least two must remain.
pub fn entropy_rate_slope(
    profile: &EntropyProfile,
    m: usize,
    word_lengths: RangeInclusive<usize>,
) -> Result<f64> {
    let col = profile
        .m_values
        .iter()
        .position(|v| *v == m)
        .ok_or_else(|| Error::InsufficientRange(format!("m = {m} not in profile")))?;
    let (x, y): (Vec<f64>, Vec<f64>) = word_lengths
        .filter_map(|l| profile.entropy(l, col).map(|h| (l as f64, h)))
        .unzip();
    if x.len() < 2 {
        return Err(Error::InsufficientRange(format!(
            "{} entropy value(s) present, need 2",
            x.len()
        )));
    }
    Ok(ols(&x, &y).0)
}
