//! Entropy and information over an `(L, m)` grid.
//!
//! Rows are indexed by word length `L = 1..=max_lags + 1`, columns by the
//! horizons `m`. Within one column every cell is estimated on the same start
//! indices, those valid for the longest word that fits the data, so that
//! `I[L] = 1 + H[L-1] - H[L]` holds cell by cell (with `H[0] = 0`). Cells the
//! data cannot support are `None`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::entropy_bits;
use super::significance::significance_bound;
use crate::error::{domain, Error, Result};
use crate::series::{
    compute_returns, extract_words_on, to_indicators, IndicatorSeries, PriceSeries,
};

type Grid<T> = Vec<Vec<Option<T>>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub m_values: Vec<usize>,
    pub max_lags: usize,
    /// Number of prices minus one.
    pub n: usize,
    /// `values[L - 1][c]` is `Ĥ^L` for horizon `m_values[c]`, in bits.
    pub values: Grid<f64>,
    /// Windows behind each cell.
    pub n_obs: Grid<usize>,
}

impl EntropyProfile {
    pub fn column(&self, m: usize) -> Option<usize> {
        self.m_values.iter().position(|v| *v == m)
    }

    /// `Ĥ^L` for word length `L >= 1` in column `col`.
    pub fn entropy(&self, word_length: usize, col: usize) -> Option<f64> {
        word_length
            .checked_sub(1)
            .and_then(|r| self.values.get(r))
            .and_then(|row| row.get(col).copied().flatten())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InformationProfile {
    /// `information[L - 1][c]` is `Î^L`; row 0 is the unconditional `1 - Ĥ^1`.
    pub information: Grid<f64>,
    /// First differences in `L`, with the first row equal to `Î^1`.
    pub partial: Grid<f64>,
    /// Significance bound of `Î^L`; absent for `L = 1`.
    pub bounds: Grid<f64>,
    /// First differences of `bounds`, the threshold for partial information.
    pub partial_bounds: Grid<f64>,
    pub confidence: f64,
}

impl InformationProfile {
    pub fn information(&self, word_length: usize, col: usize) -> Option<f64> {
        cell(&self.information, word_length, col)
    }

    pub fn partial(&self, word_length: usize, col: usize) -> Option<f64> {
        cell(&self.partial, word_length, col)
    }

    pub fn bound(&self, word_length: usize, col: usize) -> Option<f64> {
        cell(&self.bounds, word_length, col)
    }
}

fn cell<T: Copy>(grid: &Grid<T>, word_length: usize, col: usize) -> Option<T> {
    word_length
        .checked_sub(1)
        .and_then(|r| grid.get(r))
        .and_then(|row| row.get(col).copied().flatten())
}

/// Fills the entropy and information grids from one indicator series per `m`.
///
/// Every series must come from the same price series, i.e. share
/// `n = len + m - 1`.
pub fn information_profile(
    family: &[IndicatorSeries],
    max_lags: usize,
    confidence: f64,
) -> Result<(EntropyProfile, InformationProfile)> {
    if family.is_empty() {
        return Err(Error::InconsistentFamily("no horizons".into()));
    }
    if max_lags == 0 || max_lags + 1 > crate::series::MAX_WORD_LENGTH {
        return Err(domain("L_max", max_lags as f64, "1..=62"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(domain("confidence", confidence, "strictly between 0 and 1"));
    }
    // Empty columns (horizon longer than the data) carry no length information.
    let implied = |j: &IndicatorSeries| j.len() + j.m - 1;
    let n = family
        .iter()
        .find(|j| !j.is_empty())
        .map(implied)
        .unwrap_or(0);
    if let Some(j) = family.iter().find(|j| !j.is_empty() && implied(j) != n) {
        return Err(Error::InconsistentFamily(format!(
            "m = {} implies n = {}, expected {n}",
            j.m,
            j.len() + j.m - 1
        )));
    }

    let rows = max_lags + 1;
    let cols = family.len();
    let empty = || vec![vec![None; cols]; rows];
    let mut h = empty();
    let mut n_obs = vec![vec![None; cols]; rows];
    let (mut info, mut partial, mut bounds, mut partial_bounds) =
        (empty(), empty(), empty(), empty());

    for (c, j) in family.iter().enumerate() {
        let Some(longest) = (1..=rows).rev().find(|w| j.window_count(*w) > 0) else {
            continue;
        };
        let windows = j.window_count(longest);
        let mut dist = extract_words_on(j, longest, windows)?;
        let mut column = vec![0.0; longest];
        loop {
            column[dist.word_length - 1] = entropy_bits(dist.probabilities());
            if dist.word_length == 1 {
                break;
            }
            dist = dist.prefix_marginal();
        }
        let mut prev_h = 0.0;
        let mut prev_i = 0.0;
        for (r, &hl) in column.iter().enumerate() {
            let word_length = r + 1;
            let il = (1.0 + prev_h - hl).clamp(0.0, 1.0);
            h[r][c] = Some(hl);
            n_obs[r][c] = Some(windows);
            info[r][c] = Some(il);
            partial[r][c] = Some(if r == 0 { il } else { il - prev_i });
            if word_length >= 2 {
                bounds[r][c] = match significance_bound(n, word_length - 1, j.m, confidence) {
                    Ok(b) => Some(b.value),
                    Err(Error::DegreesOfFreedom(_)) => None,
                    Err(e) => return Err(e),
                };
                partial_bounds[r][c] = match (r, bounds[r][c]) {
                    (1, b) => b,
                    (_, Some(b)) => bounds[r - 1][c].map(|prev| b - prev),
                    _ => None,
                };
            }
            prev_h = hl;
            prev_i = il;
        }
    }

    Ok((
        EntropyProfile {
            m_values: family.iter().map(|j| j.m).collect(),
            max_lags,
            n,
            values: h,
            n_obs,
        },
        InformationProfile {
            information: info,
            partial,
            bounds,
            partial_bounds,
            confidence,
        },
    ))
}

/// Builds the indicator family of `prices` for every horizon and profiles it.
///
/// Horizons at least as long as the series give empty columns.
pub fn profile_prices(
    prices: &PriceSeries,
    m_values: &[usize],
    max_lags: usize,
    confidence: f64,
) -> Result<(EntropyProfile, InformationProfile)> {
    let family = m_values
        .iter()
        .map(|&m| match compute_returns(prices, m) {
            Ok(r) => Ok(to_indicators(&r)),
            Err(Error::HorizonTooLong { .. }) => IndicatorSeries::new(m, Vec::new()),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = information_profile(&family, max_lags, confidence)?;
    out.0.n = prices.last_index();
    Ok(out)
}

/// Serialized form shared by the JSON and CSV outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub m_values: Vec<usize>,
    #[serde(rename = "L_max")]
    pub l_max: usize,
    #[serde(rename = "H")]
    pub entropy: Grid<f64>,
    #[serde(rename = "I")]
    pub information: Grid<f64>,
    pub partial: Grid<f64>,
    pub bounds: Grid<f64>,
    pub partial_bounds: Grid<f64>,
    pub n_obs: Grid<usize>,
    pub confidence: f64,
    pub n: usize,
}

impl ProfileReport {
    pub fn new(entropy: &EntropyProfile, info: &InformationProfile) -> Self {
        Self {
            m_values: entropy.m_values.clone(),
            l_max: entropy.max_lags,
            entropy: entropy.values.clone(),
            information: info.information.clone(),
            partial: info.partial.clone(),
            bounds: info.bounds.clone(),
            partial_bounds: info.partial_bounds.clone(),
            n_obs: entropy.n_obs.clone(),
            confidence: info.confidence,
            n: entropy.n,
        }
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    /// Long format, one row per `(L, m)` cell; absent values are empty fields.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "L",
            "m",
            "H",
            "I",
            "partial",
            "bound",
            "partial_bound",
            "n_obs",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for r in 0..self.entropy.len() {
            for (c, m) in self.m_values.iter().enumerate() {
                w.write_record([
                    (r + 1).to_string(),
                    m.to_string(),
                    opt(self.entropy[r][c]),
                    opt(self.information[r][c]),
                    opt(self.partial[r][c]),
                    opt(self.bounds[r][c]),
                    opt(self.partial_bounds[r][c]),
                    self.n_obs[r][c].map(|v| v.to_string()).unwrap_or_default(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{entropy_rate_slope, market_information};

    fn alternating(m: usize, n: usize) -> IndicatorSeries {
        IndicatorSeries::new(m, (0..n).map(|i| (i % 2) as u8).collect()).unwrap()
    }

    #[test]
    fn alternating_bits_are_fully_informative() {
        let (h, info) = information_profile(&[alternating(1, 201)], 5, 0.95).unwrap();
        for l in 2..=6 {
            assert_eq!(info.information(l, 0), Some(1.0));
            assert!((h.entropy(l, 0).unwrap() - 1.0).abs() < 1e-12);
        }
        // H^1 = 1 for a balanced sign marginal, so I^1 = 0
        assert!(info.information(1, 0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn chain_identity_and_partial_definition() {
        let bits: Vec<u8> = (0..500u32)
            .map(|i| ((i.wrapping_mul(2_654_435_761) >> 7) & 1) as u8)
            .collect();
        let fam = [
            IndicatorSeries::new(1, bits.clone()).unwrap(),
            IndicatorSeries::new(2, bits[1..].to_vec()).unwrap(),
        ];
        let (h, info) = information_profile(&fam, 6, 0.95).unwrap();
        for c in 0..2 {
            let mut prev_h = 0.0;
            let mut prev_i = 0.0;
            for l in 1..=7 {
                let hl = h.entropy(l, c).unwrap();
                let il = info.information(l, c).unwrap();
                assert!((il - (1.0 + prev_h - hl)).abs() < 1e-12);
                let expected_partial = if l == 1 { il } else { il - prev_i };
                assert!((info.partial(l, c).unwrap() - expected_partial).abs() < 1e-15);
                assert!(hl <= l as f64 && hl >= prev_h - 1e-12);
                prev_h = hl;
                prev_i = il;
            }
        }
        // the top cell uses the same windows as the standalone estimator
        let top = market_information(&fam[0], 6).unwrap();
        assert!((info.information(7, 0).unwrap() - top).abs() < 1e-12);
    }

    #[test]
    fn bounds_follow_gamma_quantiles() {
        let (_, info) = information_profile(&[alternating(1, 3000)], 3, 0.95).unwrap();
        assert_eq!(info.bound(1, 0), None);
        let b2 = significance_bound(3000, 1, 1, 0.95).unwrap().value;
        let b3 = significance_bound(3000, 2, 1, 0.95).unwrap().value;
        assert_eq!(info.bound(2, 0), Some(b2));
        assert_eq!(info.bound(3, 0), Some(b3));
        assert_eq!(info.partial_bounds[1][0], Some(b2));
        assert_eq!(info.partial_bounds[2][0], Some(b3 - b2));
    }

    #[test]
    fn short_data_leaves_trailing_cells_absent() {
        let j = alternating(3, 10); // windows exist for L <= 4
        let (h, info) = information_profile(&[j], 7, 0.95).unwrap();
        assert!(h.entropy(4, 0).is_some());
        assert!(h.entropy(5, 0).is_none());
        assert!(info.information(5, 0).is_none());
        assert_eq!(h.n_obs[0][0], Some(1));
    }

    #[test]
    fn profile_of_constant_prices() {
        let p = PriceSeries::from_prices(vec![5.0; 50]).unwrap();
        let (h, info) = profile_prices(&p, &[1, 2, 3], 7, 0.95).unwrap();
        for c in 0..3 {
            for l in 1..=8 {
                assert_eq!(h.entropy(l, c), Some(0.0));
                assert_eq!(info.information(l, c), Some(1.0));
            }
        }
        assert_eq!(h.n, 49);
    }

    #[test]
    fn rate_slope_needs_two_points() {
        let (h, _) = information_profile(&[alternating(1, 100)], 3, 0.95).unwrap();
        assert!(entropy_rate_slope(&h, 1, 2..=2).is_err());
        assert!(entropy_rate_slope(&h, 2, 1..=3).is_err());
        // H = (1, 1, 1, 1) for alternating bits
        assert!(entropy_rate_slope(&h, 1, 1..=4).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rate_slope_of_linear_entropy() {
        let profile = EntropyProfile {
            m_values: vec![1],
            max_lags: 4,
            n: 100,
            values: (1..=5).map(|l| vec![Some(l as f64)]).collect(),
            n_obs: vec![vec![Some(90)]; 5],
        };
        assert!((entropy_rate_slope(&profile, 1, 1..=5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let j = alternating(1, 30);
        assert!(information_profile(std::slice::from_ref(&j), 3, 1.0).is_err());
        assert!(information_profile(std::slice::from_ref(&j), 0, 0.9).is_err());
        assert!(information_profile(&[], 3, 0.9).is_err());
        let other = alternating(2, 30);
        assert!(matches!(
            information_profile(&[j, other], 3, 0.9),
            Err(Error::InconsistentFamily(_))
        ));
    }

    #[test]
    fn report_serializes_nulls() {
        let (h, info) = information_profile(&[alternating(2, 8)], 4, 0.95).unwrap();
        let report = ProfileReport::new(&h, &info);
        let mut buf = Vec::new();
        report.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["L_max"], 4);
        assert_eq!(v["H"].as_array().unwrap().len(), 5);
        assert!(v["H"][4][0].is_null());
        assert!(v["bounds"][0][0].is_null());

        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("L,m,H,I,partial,bound,partial_bound,n_obs")
        );
        assert_eq!(text.lines().count(), 1 + 5);
        assert!(text.lines().last().unwrap().starts_with("5,2,,,"));
    }
}
