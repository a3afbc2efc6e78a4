//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) and exits nonzero when any
//! criterion fails. Set `MARKET_INFO_CSV` to a price file to run the
//! end-to-end check on real data instead of the built-in OHLC sample.

mod common;

use std::fmt::Write as _;
use std::process::ExitCode;

use common::{all_chains, block_entropies, decile_grid};
use market_info::scaling::{default_scales, hurst_from_log_prices, DEFAULT_FIT_RANGE};
use market_info::simulate::rng_from_seed;
use market_info::theory::{
    default_hurst_grid, info_delampertized, info_fbm, info_from_rho, orthant_probability,
    rho_delampertized, rho_fbm,
};
use market_info::{
    compute_returns, entropy_rate_slope, load_prices, market_information, profile_prices,
    significance_bound, simulate_fbm, simulate_pseudo_periodic, to_indicators, to_price_series,
    FbmParams, PriceMode, PriceSeries, ProfileReport, PseudoPeriodicParams,
};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const N: usize = 3000;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fbm_prices(hurst: f64, seed: u64) -> PriceSeries {
    let path = simulate_fbm(FbmParams::new(hurst, 0.01).unwrap(), N, 1.0, seed).unwrap();
    to_price_series(&path, 100.0).unwrap()
}

fn lag_one_information(prices: &PriceSeries) -> f64 {
    let j = to_indicators(&compute_returns(prices, 1).unwrap());
    market_information(&j, 1).unwrap()
}

fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn zero_point() -> Outcome {
    let at_half = info_fbm(0.5).unwrap();
    let plus = info_from_rho(1.0).unwrap();
    let minus = info_from_rho(-1.0).unwrap();
    outcome(
        at_half.abs() < 1e-12 && plus == 1.0 && minus == 1.0,
        format!(
            "info_fbm(0.5) = {at_half:e}, info_from_rho(1) = {plus}, info_from_rho(-1) = {minus}"
        ),
    )
}

fn fbm_monte_carlo() -> Outcome {
    let paths = 500u64;
    let sample = |hurst: f64, offset: u64| -> Vec<f64> {
        (0..paths)
            .into_par_iter()
            .map(|s| lag_one_information(&fbm_prices(hurst, offset + s)))
            .collect()
    };
    let (base, base_se) = mean_and_se(&sample(0.5, 0));
    let mut pass = true;
    let mut detail = format!("bias {base:.5}");
    for (k, hurst) in [0.3, 0.4, 0.6, 0.7].into_iter().enumerate() {
        let (mean, se) = mean_and_se(&sample(hurst, 10_000 * (k as u64 + 1)));
        let theory = info_fbm(hurst).unwrap();
        let se = (se * se + base_se * base_se).sqrt();
        let z = (mean - base - theory) / se;
        pass &= z.abs() <= 3.0;
        let _ = write!(
            detail,
            "; H={hurst}: {:.5} vs {theory:.5} (z = {z:+.2})",
            mean - base
        );
    }
    outcome(pass, detail)
}

fn lamperti_limits() -> Outcome {
    let (mut worst, mut at) = (0.0f64, 0.0);
    for i in 5..=95 {
        let hurst = f64::from(i) / 100.0;
        let d = (rho_delampertized(hurst, 1e-6).unwrap() - rho_fbm(hurst).unwrap()).abs();
        if d > worst {
            (worst, at) = (d, hurst);
        }
    }
    let mut ou_err = 0.0f64;
    for mt in [0.5, 1.0, 2.0, 5.0] {
        let exact = ((-mt / 2.0f64).exp() - 1.0) / 2.0;
        ou_err = ou_err.max((rho_delampertized(0.5, mt).unwrap() - exact).abs());
    }
    outcome(
        worst < 1e-3 && ou_err < 1e-10,
        format!("sup |rho_d - rho_fbm| = {worst:.3e} at H = {at:.2}; OU max error {ou_err:.1e}"),
    )
}

fn figure_shape() -> Outcome {
    let i = |hurst: f64, theta: f64| info_delampertized(hurst, 1.0, theta).unwrap();
    let (mid, high, low) = (i(0.5, 15.0), i(0.9, 15.0), i(0.05, 15.0));
    let grid = default_hurst_grid();
    let values: Vec<f64> = grid.iter().map(|h| i(*h, 0.1)).collect();
    let argmin = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| grid[k])
        .unwrap();
    outcome(
        mid > high && low > high && (argmin - 0.5).abs() <= 0.05 + 1e-12,
        format!(
            "theta=15: I(0.5) = {mid:.4}, I(0.05) = {low:.4}, I(0.9) = {high:.4}; theta=0.1 argmin H = {argmin}"
        ),
    )
}

fn entropy_rate() -> Outcome {
    let seeds = 100u64;
    let slope = |hurst: f64| {
        let s: Vec<f64> = (0..seeds)
            .into_par_iter()
            .map(|seed| {
                let (h, _) =
                    profile_prices(&fbm_prices(hurst, 50_000 + seed), &[1], 7, 0.95).unwrap();
                entropy_rate_slope(&h, 1, 2..=8).unwrap()
            })
            .collect();
        mean_and_se(&s).0
    };
    let (a, b) = (slope(0.4), slope(0.5));
    outcome(
        (a - 0.98).abs() <= 0.01 && (b - 0.99).abs() <= 0.01,
        format!("H=0.4: {a:.4} (target 0.98); H=0.5: {b:.4} (target 0.99); {seeds} seeds"),
    )
}

fn toy_partial_information() -> Outcome {
    let params = PseudoPeriodicParams::new(-0.9, 5, 0.01).unwrap();
    let seeds = 100u64;
    let peaks: Vec<[usize; 3]> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let prices =
                to_price_series(&simulate_pseudo_periodic(params, N, s).unwrap(), 100.0).unwrap();
            let (_, info) = profile_prices(&prices, &[1, 2, 3], 7, 0.95).unwrap();
            let mut out = [0; 3];
            for (c, slot) in out.iter_mut().enumerate() {
                // lags L = 1..=7 read the partial information of word length L + 1
                *slot = (1..=7)
                    .max_by(|a, b| {
                        let pa = info.partial(a + 1, c).unwrap();
                        let pb = info.partial(b + 1, c).unwrap();
                        pa.total_cmp(&pb)
                    })
                    .unwrap();
            }
            out
        })
        .collect();
    let mode = |c: usize| {
        let mut hist = [0usize; 8];
        for p in &peaks {
            hist[p[c]] += 1;
        }
        let best = (1..=7)
            .max_by_key(|l| (hist[*l], std::cmp::Reverse(*l)))
            .unwrap();
        (best, hist)
    };
    let at_five = peaks.iter().filter(|p| p[0] == 5).count();
    let (m2, h2) = mode(1);
    let (m3, h3) = mode(2);
    outcome(
        at_five * 10 >= 9 * seeds as usize && m2 < 5,
        format!(
            "m=1 peaks at L=5 in {at_five}/{seeds}; m=2 modal peak L={m2} {:?}; m=3 modal peak L={m3} {:?}",
            &h2[1..],
            &h3[1..]
        ),
    )
}

fn calibration() -> Outcome {
    let seeds = 400u64;
    let bound = significance_bound(N, 1, 1, 0.95).unwrap().value;
    let hits = (0..seeds)
        .into_par_iter()
        .filter(|s| lag_one_information(&fbm_prices(0.5, 90_000 + s)) > bound)
        .count();
    let rate = hits as f64 / seeds as f64;
    outcome(
        (0.025..=0.075).contains(&rate) && (bound - 1.441e-3).abs() < 5e-7,
        format!(
            "bound {bound:.4e}; exceedance {hits}/{seeds} = {:.2}%",
            100.0 * rate
        ),
    )
}

fn markov_oracle() -> Outcome {
    let grid = decile_grid();
    let mut chains = 0;
    let mut worst_drop = f64::NEG_INFINITY;
    let mut worst_curvature = f64::NEG_INFINITY;
    for order in [1, 2] {
        for p in all_chains(order, &grid) {
            let h = block_entropies(&p, order, 6);
            for w in h.windows(2) {
                worst_drop = worst_drop.max(w[0] - w[1]);
            }
            for w in h.windows(3) {
                worst_curvature = worst_curvature.max(w[2] - 2.0 * w[1] + w[0]);
            }
            chains += 1;
        }
    }
    outcome(
        worst_drop <= 0.0 && worst_curvature <= 1e-12,
        format!("{chains} chains; max decrease {worst_drop:.2e}; max second difference {worst_curvature:.2e}"),
    )
}

fn orthant() -> Outcome {
    let draws = 10_000_000u64;
    let chunks = 100u64;
    let mut pass = true;
    let mut detail = String::new();
    for (k, rho) in [-0.9, -0.5, 0.0, 0.5, 0.9].into_iter().enumerate() {
        let p = orthant_probability(rho).unwrap();
        let c = (1.0f64 - rho * rho).sqrt();
        let hits: u64 = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = rng_from_seed(1_000_000 * (k as u64 + 1) + chunk);
                let mut hits = 0u64;
                for _ in 0..draws / chunks {
                    let y: f64 = rng.sample(StandardNormal);
                    let e: f64 = rng.sample(StandardNormal);
                    let z = rho * y + c * e;
                    hits += u64::from(y > 0.0 && z <= 0.0);
                }
                hits
            })
            .sum();
        let freq = hits as f64 / draws as f64;
        let tol = 3.0 * (p * (1.0 - p) / draws as f64).sqrt();
        pass &= (freq - p).abs() < tol;
        let _ = write!(
            detail,
            "{}rho={rho}: {:+.1e} (tol {tol:.1e})",
            if k > 0 { "; " } else { "" },
            freq - p
        );
    }
    outcome(pass, detail)
}

fn hurst_estimator() -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for hurst in [0.3, 0.5, 0.7] {
        let est: Vec<f64> = (0..100u64)
            .into_par_iter()
            .map(|s| {
                let x = fbm_prices(hurst, 70_000 + s).log_prices();
                hurst_from_log_prices(&x, &default_scales(), DEFAULT_FIT_RANGE)
                    .unwrap()
                    .hurst_estimate
            })
            .collect();
        let mean = mean_and_se(&est).0;
        pass &= (mean - hurst).abs() <= 0.05;
        let _ = write!(detail, "H={hurst}: {mean:.4}  ");
    }
    outcome(pass, detail.trim_end().to_string())
}

/// OHLC sample built from a simulated path, in the layout of exchange exports.
fn sample_ohlc() -> String {
    let path = simulate_fbm(FbmParams::new(0.45, 0.01).unwrap(), 2000, 1.0, 2024).unwrap();
    let mut csv = String::from("Date,Open,High,Low,Close,Volume\n");
    let mut prev = 100.0;
    for (i, v) in path.values.iter().enumerate() {
        let close = 100.0 * (v - path.values[0]).exp();
        let high = close.max(prev) * 1.001;
        let low = close.min(prev) * 0.999;
        let _ = writeln!(csv, "{i},{prev},{high},{low},{close},1000");
        prev = close;
    }
    csv
}

fn end_to_end() -> Outcome {
    let (source, text) = match std::env::var("MARKET_INFO_CSV") {
        Ok(path) => match std::fs::read_to_string(&path) {
            Ok(t) => (path, t),
            Err(e) => return outcome(false, format!("{path}: {e}")),
        },
        Err(_) => ("built-in OHLC sample".to_string(), sample_ohlc()),
    };
    let run = || -> market_info::Result<String> {
        let prices = load_prices(text.as_bytes(), PriceMode::Midrange)?;
        let (h, info) = profile_prices(&prices, &[1, 2, 3], 7, 0.95)?;
        let report = ProfileReport::new(&h, &info);
        let curve =
            hurst_from_log_prices(&prices.log_prices(), &default_scales(), DEFAULT_FIT_RANGE)?;
        let filled = |g: &Vec<Vec<Option<f64>>>| g.iter().flatten().filter(|v| v.is_some()).count();
        let panels = [
            filled(&report.entropy),
            filled(&report.information),
            filled(&report.partial),
            curve.log2_points().len(),
        ];
        if panels.contains(&0) {
            return Err(market_info::Error::InsufficientRange(format!(
                "empty panel: {panels:?}"
            )));
        }
        let mut json = Vec::new();
        report.write_json(&mut json)?;
        Ok(format!(
            "{} prices; cells entropy/information/partial = {}/{}/{}; log-log points {}; H = {:.3}; {} JSON bytes",
            prices.len(),
            panels[0],
            panels[1],
            panels[2],
            panels[3],
            curve.hurst_estimate,
            json.len()
        ))
    };
    match run() {
        Ok(d) => outcome(true, format!("{source}: {d}")),
        Err(e) => outcome(false, format!("{source}: {e}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("fBm information zero point and continuity", zero_point),
        ("fBm information vs Monte Carlo", fbm_monte_carlo),
        ("delampertized correlation limits", lamperti_limits),
        ("delampertized information shape", figure_shape),
        ("entropy-rate slope of simulated fBm", entropy_rate),
        (
            "pseudo-periodic partial information peak",
            toy_partial_information,
        ),
        ("significance bound calibration", calibration),
        ("Markov chain block entropy oracle", markov_oracle),
        ("orthant probability vs Monte Carlo", orthant),
        ("Hurst estimator on simulated fBm", hurst_estimator),
        ("end-to-end four-panel run", end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let r = check();
        failed += usize::from(!r.pass);
        println!(
            "{} [{:>2}] {name}: {} ({:.1}s)",
            if r.pass { "PASS" } else { "FAIL" },
            k + 1,
            r.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
