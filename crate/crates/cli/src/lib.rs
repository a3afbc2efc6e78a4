//! Command-line front end: `analyze`, `simulate`, `theory` and `hurst`.
//!
//! Results go to standard output unless `--output` names a file. Exit codes
//! are 0 on success, 2 for usage or domain errors, 3 for data errors and 4
//! for numeric failures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use market_info::scaling::{default_scales, hurst_from_log_prices, DEFAULT_FIT_RANGE};
use market_info::simulate::Model;
use market_info::theory::{default_hurst_grid, theory_curve, CurveSpec, TheoryCurve};
use market_info::{
    load_prices, profile_prices, simulate_delampertized, simulate_fbm, simulate_pseudo_periodic,
    to_price_series, DelampertizedParams, FbmParams, PriceMode, ProfileReport,
    PseudoPeriodicParams, SimulatedPath,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] market_info::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use market_info::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Library(e) => match e {
                E::Domain { .. } | E::InconsistentFamily(_) => 2,
                E::NotFactorizable
                | E::DegreesOfFreedom(_)
                | E::NonPositiveStep { .. }
                | E::PriceOverflow { .. } => 4,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "market-info",
    version,
    about = "Entropy-based market information of price series"
)]
pub struct Cli {
    /// Log verbosity, repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy, market information and significance bounds of a price CSV.
    Analyze(AnalyzeArgs),
    /// Simulate a model and write its prices as CSV.
    Simulate(SimulateArgs),
    /// Closed-form lag-one information curves.
    Theory(TheoryArgs),
    /// Log-log structure function and Hurst exponent of a price CSV.
    Hurst(HurstArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Close,
    Midrange,
}

impl From<ModeArg> for PriceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Close => PriceMode::Close,
            ModeArg::Midrange => PriceMode::Midrange,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Price CSV; standard input when absent or `-`.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Close)]
    pub price_mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Largest number of lags `L`.
    #[arg(long = "l-max", default_value_t = 7)]
    pub l_max: usize,
    /// Return horizons, e.g. `1,2,3` or `1..5`.
    #[arg(short, long = "m", default_value = "1,2,3", value_parser = parse_index_list)]
    pub m_values: IndexList,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub model: ModelArg,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 0.5)]
    pub hurst: f64,
    /// Volatility of the Gaussian models, per unit time.
    #[arg(long, default_value_t = 0.01)]
    pub sigma: f64,
    /// Mean reversion of the delampertized model.
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = -0.9, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 5)]
    pub tau: usize,
    /// Standard deviation of pseudo-periodic returns.
    #[arg(long, default_value_t = 0.01)]
    pub scale: f64,
    /// Number of steps; the output has `n + 1` prices.
    #[arg(short, long, default_value_t = 3000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Initial price.
    #[arg(long, default_value_t = 100.0)]
    pub p0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Fbm,
    Delampertized,
    PseudoPeriodic,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(value_enum)]
    pub model: TheoryModelArg,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Mean reversion values, e.g. `15`, `0.1,1,10` or `0.1..1:0.1`.
    #[arg(long, default_value = "1", value_parser = parse_real_list)]
    pub theta: RealList,
    /// Step for a `--theta a..b` range given without `:step`.
    #[arg(long)]
    pub step: Option<f64>,
    /// Return horizon of the delampertized curves.
    #[arg(short, long = "m", default_value_t = 1.0)]
    pub m: f64,
    /// Hurst exponents held fixed by `delampertized-mtheta`.
    #[arg(long, default_value = "0.5", value_parser = parse_real_list)]
    pub hurst: RealList,
    /// Abscissa grid; defaults to H = 0.05..0.95:0.05, or mθ = 0.05..10:0.05.
    #[arg(long, value_parser = parse_real_list)]
    pub grid: Option<RealList>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryModelArg {
    /// I² of the fBm against H.
    Fbm,
    /// I²_m of the delampertized fBm against H, one curve per θ.
    Delampertized,
    /// I² of the delampertized fBm against mθ, one curve per H.
    DelampertizedMtheta,
}

#[derive(Debug, Args)]
pub struct HurstArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Scales Δ, e.g. `1..20` or `1,2,4,8`.
    #[arg(long, value_parser = parse_index_list)]
    pub scales: Option<IndexList>,
    /// Scales used by the fit, `a..b`.
    #[arg(long, value_parser = parse_index_range)]
    pub fit: Option<RangeInclusive<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Parsed list of positive integers.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexList(pub Vec<usize>);

/// Parsed list of reals, possibly an unfinished `a..b` range waiting for a step.
#[derive(Debug, Clone, PartialEq)]
pub enum RealList {
    Values(Vec<f64>),
    Range { start: f64, end: f64 },
}

impl RealList {
    pub fn resolve(&self, step: Option<f64>) -> CliResult<Vec<f64>> {
        match (self, step) {
            (RealList::Values(v), None) => Ok(v.clone()),
            (RealList::Values(_), Some(_)) => Err(CliError::Usage(
                "--step only applies to an a..b range".into(),
            )),
            (RealList::Range { start, end }, Some(step)) => real_range(*start, *end, step),
            (RealList::Range { .. }, None) => Err(CliError::Usage(
                "range a..b needs a step: a..b:step or --step".into(),
            )),
        }
    }
}

fn real_range(start: f64, end: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) {
        return Err(CliError::Usage(format!(
            "invalid range {start}..{end} with step {step}"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| {
            let v = start + k as f64 * step;
            // trim representation noise such as 0.30000000000000004
            (v * 1e12).round() / 1e12
        })
        .collect())
}

pub fn parse_real_list(s: &str) -> Result<RealList, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (b, Some(num(step)?)),
            None => (rest, None),
        };
        let (start, end) = (num(a)?, num(b)?);
        return match step {
            Some(step) => real_range(start, end, step)
                .map(RealList::Values)
                .map_err(|e| e.to_string()),
            None => Ok(RealList::Range { start, end }),
        };
    }
    s.split(',')
        .map(num)
        .collect::<Result<_, _>>()
        .map(RealList::Values)
}

pub fn parse_index_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("`{s}` is not a range a..b"))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("`{a}` is not an integer"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("`{b}` is not an integer"))?;
    if a == 0 || b < a {
        return Err(format!("range {a}..{b} must satisfy 1 <= a <= b"));
    }
    Ok(a..=b)
}

pub fn parse_index_list(s: &str) -> Result<IndexList, String> {
    let values: Vec<usize> = if s.contains("..") {
        parse_index_range(s)?.collect()
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| format!("`{t}` is not an integer"))
            })
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.contains(&0) {
        return Err("values must be positive integers".into());
    }
    Ok(IndexList(values))
}

fn read_input(path: Option<&PathBuf>) -> CliResult<Box<dyn Read>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(io::BufReader::new(
            File::open(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?,
        ))),
        _ => Ok(Box::new(io::stdin().lock())),
    }
}

fn open_output(args: &OutputArgs) -> CliResult<Box<dyn Write>> {
    match &args.output {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p).map_err(|e| {
            io::Error::new(e.kind(), format!("{}: {e}", p.display()))
        })?))),
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Theory(a) => cmd_theory(&a),
        Command::Hurst(a) => cmd_hurst(&a),
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<()> {
    if args.l_max == 0 {
        return Err(CliError::Usage("--l-max must be at least 1".into()));
    }
    if !(args.confidence > 0.0 && args.confidence < 1.0) {
        return Err(CliError::Usage("--confidence must lie in (0, 1)".into()));
    }
    let prices = load_prices(
        read_input(args.input.input.as_ref())?,
        args.input.price_mode.into(),
    )?;
    let (h, info) = profile_prices(&prices, &args.m_values.0, args.l_max, args.confidence)?;
    let report = ProfileReport::new(&h, &info);
    let mut out = open_output(&args.output)?;
    match args.format {
        Format::Json => {
            report.write_json(&mut out)?;
            writeln!(out)?;
        }
        Format::Csv => report.write_csv(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

pub fn simulate_path(args: &SimulateArgs) -> CliResult<SimulatedPath> {
    Ok(match args.model {
        ModelArg::Fbm => simulate_fbm(
            FbmParams::new(args.hurst, args.sigma)?,
            args.n,
            args.dt,
            args.seed,
        )?,
        ModelArg::Delampertized => simulate_delampertized(
            DelampertizedParams::new(args.hurst, args.sigma, args.theta)?,
            args.n,
            args.dt,
            args.seed,
        )?,
        ModelArg::PseudoPeriodic => simulate_pseudo_periodic(
            PseudoPeriodicParams::new(args.beta, args.tau, args.scale)?,
            args.n,
            args.seed,
        )?,
    })
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    let path = simulate_path(args)?;
    let prices = to_price_series(&path, args.p0)?;
    let mut out = open_output(&args.output)?;
    writeln!(out, "# model: {}", path.model())?;
    writeln!(out, "# seed: {}", path.seed)?;
    writeln!(
        out,
        "# params: {}",
        serde_json::to_string(&path.params).map_err(market_info::Error::from)?
    )?;
    writeln!(out, "# n: {}, dt: {:?}, p0: {:?}", args.n, path.dt, args.p0)?;
    if path.model() == Model::PseudoPeriodic {
        writeln!(out, "# prices compound the simulated returns")?;
    } else {
        writeln!(out, "# prices are p0 * exp(path - path[0])")?;
    }
    prices.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

pub fn theory_curves(args: &TheoryArgs) -> CliResult<Vec<TheoryCurve>> {
    let grid = match &args.grid {
        Some(g) => g.resolve(None)?,
        None => match args.model {
            TheoryModelArg::DelampertizedMtheta => real_range(0.05, 10.0, 0.05)?,
            _ => default_hurst_grid(),
        },
    };
    let specs: Vec<CurveSpec> = match args.model {
        TheoryModelArg::Fbm => vec![CurveSpec::FbmHurst],
        TheoryModelArg::Delampertized => args
            .theta
            .resolve(args.step)?
            .into_iter()
            .map(|theta| CurveSpec::DelampertizedHurst { m: args.m, theta })
            .collect(),
        TheoryModelArg::DelampertizedMtheta => args
            .hurst
            .resolve(None)?
            .into_iter()
            .map(|hurst| CurveSpec::DelampertizedMTheta { hurst })
            .collect(),
    };
    Ok(specs
        .into_iter()
        .map(|s| theory_curve(s, &grid))
        .collect::<market_info::Result<_>>()?)
}

pub fn cmd_theory(args: &TheoryArgs) -> CliResult<()> {
    let curves = theory_curves(args)?;
    let mut out = open_output(&args.output)?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &curves).map_err(market_info::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => match args.model {
            TheoryModelArg::Fbm => curves[0].write_csv(&mut out)?,
            TheoryModelArg::Delampertized => {
                writeln!(out, "theta,m,hurst,I2")?;
                for c in &curves {
                    if let CurveSpec::DelampertizedHurst { m, theta } = c.fixed {
                        for (x, y) in c.abscissa.iter().zip(&c.ordinate) {
                            writeln!(out, "{theta:?},{m:?},{x:?},{y:?}")?;
                        }
                    }
                }
            }
            TheoryModelArg::DelampertizedMtheta => {
                writeln!(out, "hurst,m_theta,I2")?;
                for c in &curves {
                    if let CurveSpec::DelampertizedMTheta { hurst } = c.fixed {
                        for (x, y) in c.abscissa.iter().zip(&c.ordinate) {
                            writeln!(out, "{hurst:?},{x:?},{y:?}")?;
                        }
                    }
                }
            }
        },
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_hurst(args: &HurstArgs) -> CliResult<()> {
    let prices = load_prices(
        read_input(args.input.input.as_ref())?,
        args.input.price_mode.into(),
    )?;
    let scales = args
        .scales
        .as_ref()
        .map(|s| s.0.clone())
        .unwrap_or_else(default_scales);
    let fit = args.fit.clone().unwrap_or(DEFAULT_FIT_RANGE);
    let curve = hurst_from_log_prices(&prices.log_prices(), &scales, fit)?;
    let mut out = open_output(&args.output)?;
    match args.format {
        Format::Json => {
            curve.write_json(&mut out)?;
            writeln!(out)?;
        }
        Format::Csv => curve.write_csv(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_lists() {
        assert_eq!(parse_real_list("15").unwrap(), RealList::Values(vec![15.0]));
        assert_eq!(
            parse_real_list("0.1, 2").unwrap(),
            RealList::Values(vec![0.1, 2.0])
        );
        let RealList::Values(v) = parse_real_list("0.1..1:0.1").unwrap() else {
            panic!()
        };
        assert_eq!(v.len(), 10);
        assert_eq!(v[2], 0.3);
        assert_eq!(v[9], 1.0);
        let open = parse_real_list("0.1..1").unwrap();
        assert!(open.resolve(None).is_err());
        assert_eq!(open.resolve(Some(0.3)).unwrap(), vec![0.1, 0.4, 0.7, 1.0]);
        assert!(parse_real_list("a,b").is_err());
        assert!(parse_real_list("1..0:0.1").is_err());
    }

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_list("1,2,3").unwrap().0, vec![1, 2, 3]);
        assert_eq!(parse_index_list("2..4").unwrap().0, vec![2, 3, 4]);
        assert!(parse_index_list("0,1").is_err());
        assert!(parse_index_range("5..2").is_err());
        assert_eq!(parse_index_range("1..5").unwrap(), 1..=5);
    }

    #[test]
    fn exit_codes() {
        use market_info::Error as E;
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(E::NotFactorizable).exit_code(), 4);
        assert_eq!(
            CliError::from(E::NonPositivePrice { row: 1 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(E::Domain {
                name: "hurst",
                value: 2.0,
                expected: "0 < H < 1"
            })
            .exit_code(),
            2
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
