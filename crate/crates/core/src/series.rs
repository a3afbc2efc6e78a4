//! Price ingestion, `m`-step returns, sign indicators and word counts.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Longest word that fits the `u64` word encoding.
pub const MAX_WORD_LENGTH: usize = 63;

/// Which column(s) of a market-data export define the price.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriceMode {
    #[default]
    Close,
    /// Average of the high and the low of each row.
    Midrange,
}

impl fmt::Display for PriceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriceMode::Close => f.write_str("close"),
            PriceMode::Midrange => f.write_str("midrange"),
        }
    }
}

impl FromStr for PriceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "close" => Ok(PriceMode::Close),
            "midrange" | "mid" | "highlow" => Ok(PriceMode::Midrange),
            other => Err(format!("unknown price mode `{other}`")),
        }
    }
}

/// Strictly positive prices `P_0, ..., P_n` with strictly increasing timestamps.
///
/// Timestamps are opaque labels. They are compared numerically when every
/// label parses as a number and lexicographically otherwise, which orders
/// ISO-8601 dates correctly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    timestamps: Vec<String>,
    prices: Vec<f64>,
    mode: PriceMode,
}

impl PriceSeries {
    pub fn new(timestamps: Vec<String>, prices: Vec<f64>, mode: PriceMode) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::LengthMismatch {
                timestamps: timestamps.len(),
                prices: prices.len(),
            });
        }
        if prices.len() < 2 {
            return Err(Error::TooFewPrices(prices.len()));
        }
        if let Some(i) = prices.iter().position(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::NonPositivePrice { row: i + 1 });
        }
        if let Some(i) = first_non_increasing(&timestamps) {
            return Err(Error::NonMonotoneTimestamp { row: i + 1 });
        }
        Ok(Self {
            timestamps,
            prices,
            mode,
        })
    }

    /// Builds a series labelled by the integer indices `0..len`.
    pub fn from_prices(prices: Vec<f64>) -> Result<Self> {
        let timestamps = (0..prices.len()).map(|i| i.to_string()).collect();
        Self::new(timestamps, prices, PriceMode::Close)
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }

    pub fn mode(&self) -> PriceMode {
        self.mode
    }

    /// Number of prices, `n + 1`.
    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Index of the last price, `n`.
    pub fn last_index(&self) -> usize {
        self.prices.len() - 1
    }

    /// Natural logarithm of every price.
    pub fn log_prices(&self) -> Vec<f64> {
        self.prices.iter().map(|p| p.ln()).collect()
    }

    /// Writes the `timestamp,close` CSV that [`load_prices`] reads back.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["timestamp", "close"])?;
        for (t, p) in self.timestamps.iter().zip(&self.prices) {
            w.write_record([t.as_str(), &format_price(*p)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn format_price(p: f64) -> String {
    // Round-trip exact representation.
    format!("{p:?}")
}

fn first_non_increasing(ts: &[String]) -> Option<usize> {
    let numeric: Option<Vec<f64>> = ts.iter().map(|t| t.trim().parse::<f64>().ok()).collect();
    match numeric {
        Some(v) => v.windows(2).position(|w| !(w[1] > w[0])).map(|i| i + 1),
        None => ts.windows(2).position(|w| w[1] <= w[0]).map(|i| i + 1),
    }
}

fn find_column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers
        .iter()
        .position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
}

/// Reads a comma-separated price table with a header row.
///
/// Column names are matched case-insensitively: `timestamp`/`date`/`time`/
/// `datetime` for the label, then `close` (or `price`) and `high`/`low`.
/// Lines starting with `#` are comments. Rows are kept in input order and
/// numbered from 1 in error messages.
pub fn load_prices<R: Read>(source: R, mode: PriceMode) -> Result<PriceSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    let missing = |column| Error::MissingColumn {
        column,
        mode: mode.to_string(),
    };
    let ts_col = find_column(&headers, &["timestamp", "date", "time", "datetime"])
        .ok_or_else(|| missing("timestamp"))?;
    let value_cols = match mode {
        PriceMode::Close => {
            vec![find_column(&headers, &["close", "price"]).ok_or_else(|| missing("close"))?]
        }
        PriceMode::Midrange => vec![
            find_column(&headers, &["high"]).ok_or_else(|| missing("high"))?,
            find_column(&headers, &["low"]).ok_or_else(|| missing("low"))?,
        ],
    };

    let mut timestamps = Vec::new();
    let mut prices = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let field = |col: usize| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            let value: f64 = raw.parse().map_err(|_| Error::Parse {
                row,
                value: raw.to_string(),
            })?;
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositivePrice { row });
            }
            Ok(value)
        };
        let price = match mode {
            PriceMode::Close => field(value_cols[0])?,
            PriceMode::Midrange => 0.5 * (field(value_cols[0])? + field(value_cols[1])?),
        };
        timestamps.push(record.get(ts_col).unwrap_or("").to_string());
        prices.push(price);
    }
    PriceSeries::new(timestamps, prices, mode)
}

/// Relative `m`-step returns `R_{m,i} = (P_i - P_{i-m}) / P_{i-m}`, `i = m..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub m: usize,
    pub values: Vec<f64>,
}

pub fn compute_returns(p: &PriceSeries, m: usize) -> Result<ReturnSeries> {
    if m == 0 {
        return Err(domain("m", 0.0, "positive integer"));
    }
    if m >= p.len() {
        return Err(Error::HorizonTooLong { m, len: p.len() });
    }
    let values = p
        .prices
        .iter()
        .zip(&p.prices[m..])
        .map(|(prev, cur)| (cur - prev) / prev)
        .collect();
    Ok(ReturnSeries { m, values })
}

/// Positive-return indicators `J_{m,i}`, index-aligned with the returns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorSeries {
    pub m: usize,
    bits: Vec<u8>,
}

impl IndicatorSeries {
    /// Fails when a bit is not 0 or 1, or when `m` is zero.
    pub fn new(m: usize, bits: Vec<u8>) -> Result<Self> {
        if m == 0 {
            return Err(domain("m", 0.0, "positive integer"));
        }
        if let Some(b) = bits.iter().find(|b| **b > 1) {
            return Err(domain("indicator", f64::from(*b), "0 or 1"));
        }
        Ok(Self { m, bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of length-`word_length` windows at stride `m`.
    pub fn window_count(&self, word_length: usize) -> usize {
        let span = (word_length.saturating_sub(1)) * self.m;
        self.bits.len().saturating_sub(span)
    }
}

/// Ties (zero returns) map to 0.
pub fn to_indicators(r: &ReturnSeries) -> IndicatorSeries {
    IndicatorSeries {
        m: r.m,
        bits: r.values.iter().map(|v| u8::from(*v > 0.0)).collect(),
    }
}

/// Counts of length-`L` binary words read at stride `m`.
///
/// A word is packed into a `u64`, first indicator in the most significant
/// position, so `0b10` with `L = 2` is the word "10".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDistribution {
    pub word_length: usize,
    pub stride: usize,
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl WordDistribution {
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Count of the word spelled as a bit string, e.g. `"101"`.
    pub fn count(&self, word: &str) -> u64 {
        if word.len() != self.word_length {
            return 0;
        }
        match u64::from_str_radix(word, 2) {
            Ok(w) => self.counts.get(&w).copied().unwrap_or(0),
            Err(_) => 0,
        }
    }

    pub fn distinct_words(&self) -> usize {
        self.counts.len()
    }

    /// Empirical probabilities in word order.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        let total = self.total as f64;
        self.counts.values().map(move |c| *c as f64 / total)
    }

    /// Distribution of the length-`L-1` prefixes over the same windows.
    pub fn prefix_marginal(&self) -> WordDistribution {
        let mut counts = BTreeMap::new();
        for (w, c) in &self.counts {
            *counts.entry(w >> 1).or_insert(0) += c;
        }
        WordDistribution {
            word_length: self.word_length - 1,
            stride: self.stride,
            counts,
            total: self.total,
        }
    }

    /// Renders a packed word as its bit string.
    pub fn word_string(&self, word: u64) -> String {
        format!("{word:0width$b}", width = self.word_length)
    }
}

/// Every start index `i` with `i + (L-1)m` in range contributes the word
/// `(J_i, J_{i+m}, ..., J_{i+(L-1)m})`.
pub fn extract_words(j: &IndicatorSeries, word_length: usize) -> Result<WordDistribution> {
    let windows = j.window_count(word_length);
    extract_words_on(j, word_length, windows)
}

/// Same as [`extract_words`] restricted to the first `windows` start indices.
pub(crate) fn extract_words_on(
    j: &IndicatorSeries,
    word_length: usize,
    windows: usize,
) -> Result<WordDistribution> {
    if word_length == 0 || word_length > MAX_WORD_LENGTH {
        return Err(domain("L", word_length as f64, "1..=63"));
    }
    if windows == 0 || windows > j.window_count(word_length) {
        return Err(Error::SeriesTooShort {
            word_length,
            stride: j.m,
        });
    }
    let mut counts = BTreeMap::new();
    for start in 0..windows {
        let word = (0..word_length).fold(0u64, |acc, k| {
            (acc << 1) | u64::from(j.bits[start + k * j.m])
        });
        *counts.entry(word).or_insert(0u64) += 1;
    }
    Ok(WordDistribution {
        word_length,
        stride: j.m,
        counts,
        total: windows as u64,
    })
}
