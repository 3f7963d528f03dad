use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use nsgf_core::approx::{error_sweep, SweepResult};
use nsgf_core::corpus::{generate_corpus, CorpusKind};
use nsgf_core::io::{read_signal_file, write_signal_file};
use nsgf_core::nsgf::{decay_check, validate_painless, NsgfSystem};
use nsgf_core::spaces::{
    coeff_norm, ds_norm, equivalence_report, lp_normalized_coeffs, NormParams,
};
use nsgf_core::{
    analyze, build_bapu, synthesize, Bapu, CoefficientSet, Complex64, Covering, Error, FrameConfig,
    FrequencyGrid, PlateauBump, WindowKind,
};

use crate::plot;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_FRAME: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "nsgf", version, about = "Painless nonstationary Gabor frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Covering, painless, BAPU and frame-bound report
    Verify,
    /// Signal CSV to coefficient JSON
    Analyze,
    /// Coefficient JSON to signal CSV
    Synthesize,
    /// Decomposition and coefficient norms of a signal
    Dsnorm,
    /// Norm-equivalence constants over a seeded corpus
    Equiv,
    /// N-term approximation error sweep
    Sweep,
    /// Log-log SVG of a sweep CSV
    Plot,
}

/// Flags shared by every subcommand; each one reads what it needs.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Frame configuration JSON
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Signal CSV (one sample per line, `re` or `re,im`)
    #[arg(long, global = true)]
    pub signal: Option<PathBuf>,
    /// Coefficient JSON for `synthesize`
    #[arg(long, global = true)]
    pub coeffs: Option<PathBuf>,
    /// Sweep CSV for `plot`
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output path; `equiv` and `sweep` write `<out>.json` and `<out>.csv`
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, global = true, default_value_t = 2.0)]
    pub q: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub s: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tau: f64,
    /// Comma-separated increasing N values
    #[arg(
        long = "N",
        global = true,
        value_delimiter = ',',
        default_value = "2,4,8,16,32,64,128,256,512"
    )]
    pub n: Vec<usize>,
    #[arg(long, global = true, default_value_t = 50)]
    pub corpus_size: usize,
    /// Corpus kind for `equiv` and generated `sweep` signals
    #[arg(long, global = true)]
    pub kind: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value = "dual")]
    pub windows: String,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            kind: "config",
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let (code, kind) = match &err {
            Error::Io(_) => (EXIT_IO, "io"),
            Error::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => (EXIT_IO, "io"),
            Error::NotAFrame { .. } | Error::CoveringGap { .. } => (EXIT_FRAME, "frame"),
            _ => (EXIT_CONFIG, "config"),
        };
        Self {
            code,
            kind,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err).into()
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err).into()
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

pub fn run(command: Command, cfg: &RunConfig) -> CliResult {
    match command {
        Command::Verify => verify(cfg),
        Command::Analyze => analyze_cmd(cfg),
        Command::Synthesize => synthesize_cmd(cfg),
        Command::Dsnorm => dsnorm(cfg),
        Command::Equiv => equiv(cfg),
        Command::Sweep => sweep(cfg),
        Command::Plot => plot_cmd(cfg),
    }
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    path.as_deref()
        .ok_or_else(|| CliError::config(format!("--{flag} is required")))
}

fn load_config(cfg: &RunConfig) -> CliResult<FrameConfig> {
    let text = fs::read_to_string(require(&cfg.config, "config")?)?;
    FrameConfig::from_json(&text).map_err(|e| CliError::config(e.to_string()))
}

fn load_system(cfg: &RunConfig) -> CliResult<NsgfSystem> {
    Ok(load_config(cfg)?.build()?)
}

fn load_signal(cfg: &RunConfig, sys: &NsgfSystem) -> CliResult<Vec<Complex64>> {
    let signal = read_signal_file(require(&cfg.signal, "signal")?)?;
    if signal.len() != sys.len() {
        return Err(Error::LengthMismatch {
            expected: sys.len(),
            found: signal.len(),
        }
        .into());
    }
    Ok(signal)
}

fn torus_bapu(sys: &NsgfSystem) -> CliResult<(Covering, Bapu)> {
    let cov = sys.covering()?;
    let bump = PlateauBump::fitted(&cov)?;
    let bapu = build_bapu(&cov, &bump, FrequencyGrid::Torus { len: sys.len() })?;
    Ok((cov, bapu))
}

fn params(cfg: &RunConfig) -> CliResult<NormParams> {
    Ok(NormParams::new(cfg.p, cfg.q, cfg.s)?)
}

/// Writes `text` to `--out` or standard output.
fn emit(cfg: &RunConfig, text: &str) -> CliResult {
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn pretty<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn verify(cfg: &RunConfig) -> CliResult {
    let sys = load_system(cfg)?;
    let (cov, bapu) = torus_bapu(&sys)?;
    let painless = validate_painless(&sys)?;
    let decay = decay_check(&sys, 2)?;
    let (a, b) = sys.frame_bounds();
    let sq = bapu.sum_of_squares();
    let (d1, d2) = bapu.derivative_bounds();
    let l1 = bapu.multiplier_l1_norms()?;
    let report = json!({
        "signal_length": sys.len(),
        "channels": sys.channels().len(),
        "total_coefficients": sys.total_coefficients(),
        "frame_bounds": { "A": a, "B": b },
        "painless": painless,
        "clean": painless.is_clean(),
        "bapu": {
            "members": cov.len(),
            "partition_error": bapu.partition_error(),
            "sum_of_squares_min": sq.iter().copied().fold(f64::INFINITY, f64::min),
            "overlap_max": bapu.overlap_counts().into_iter().max().unwrap_or(0),
            "first_difference_bound": d1,
            "second_difference_bound": d2,
            "multiplier_l1_max": l1.iter().copied().fold(0.0, f64::max),
        },
        "decay": decay,
    });
    emit(cfg, &pretty(&report)?)
}

fn analyze_cmd(cfg: &RunConfig) -> CliResult {
    let sys = load_system(cfg)?;
    let signal = load_signal(cfg, &sys)?;
    emit(cfg, &analyze(&sys, &signal)?.to_json()?)
}

fn synthesize_cmd(cfg: &RunConfig) -> CliResult {
    let sys = load_system(cfg)?;
    let windows: WindowKind = cfg.windows.parse()?;
    let text = fs::read_to_string(require(&cfg.coeffs, "coeffs")?)?;
    let coeffs = CoefficientSet::from_json(&text)?;
    let out = synthesize(&sys, &coeffs, windows)?;
    let path = require(&cfg.out, "out")?;
    write_signal_file(path, &out)?;
    let mut summary = json!({ "samples": out.len(), "windows": cfg.windows });
    if cfg.signal.is_some() {
        let reference = load_signal(cfg, &sys)?;
        let (mut num, mut den, mut max_rel) = (0.0_f64, 0.0_f64, 0.0_f64);
        let peak = reference.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in out.iter().zip(&reference) {
            num += (a - b).norm_sqr();
            den += b.norm_sqr();
            max_rel = max_rel.max((a - b).norm() / peak);
        }
        summary["relative_error"] = json!((num / den).sqrt());
        summary["max_relative_error"] = json!(max_rel);
    }
    println!("{summary}");
    Ok(())
}

fn dsnorm(cfg: &RunConfig) -> CliResult {
    let sys = load_system(cfg)?;
    let signal = load_signal(cfg, &sys)?;
    let (cov, bapu) = torus_bapu(&sys)?;
    let params = params(cfg)?;
    let d = ds_norm(&signal, &bapu, params)?;
    let c = lp_normalized_coeffs(&analyze(&sys, &signal)?, &cov, params.p)?;
    let cn = coeff_norm(&c, &cov, params)?;
    let report = json!({
        "params": params,
        "ds_norm": d,
        "coeff_norm": cn,
        "ratio": if d > 0.0 { json!(cn / d) } else { json!(null) },
    });
    emit(cfg, &pretty(&report)?)
}

fn corpus_kind(cfg: &RunConfig, default: CorpusKind) -> CliResult<CorpusKind> {
    match &cfg.kind {
        Some(k) => Ok(k.parse()?),
        None => Ok(default),
    }
}

fn equiv(cfg: &RunConfig) -> CliResult {
    let sys = load_system(cfg)?;
    let (cov, bapu) = torus_bapu(&sys)?;
    let kind = corpus_kind(cfg, CorpusKind::Mixed)?;
    let corpus = generate_corpus(kind, cfg.corpus_size, sys.len(), cfg.seed, Some(&sys))?;
    let report = equivalence_report(
        &corpus.signals,
        &sys,
        &cov,
        &bapu,
        params(cfg)?,
        &corpus.descriptor(),
    )?;
    let base = require(&cfg.out, "out")?;
    fs::write(with_suffix(base, "json"), pretty(&report)?)?;
    let mut csv_out = Vec::new();
    report.write_csv(&mut csv_out)?;
    fs::write(with_suffix(base, "csv"), csv_out)?;
    println!(
        "{}",
        json!({ "C1_hat": report.c1_hat, "C2_hat": report.c2_hat, "signals": report.ratios.len() })
    );
    Ok(())
}

fn sweep(cfg: &RunConfig) -> CliResult {
    let sys = load_system(cfg)?;
    let (cov, bapu) = torus_bapu(&sys)?;
    let signal = if cfg.signal.is_some() {
        load_signal(cfg, &sys)?
    } else {
        let kind = corpus_kind(cfg, CorpusKind::PrescribedDecay { beta: 1.05 })?;
        let mut corpus = generate_corpus(kind, 1, sys.len(), cfg.seed, Some(&sys))?;
        corpus.signals.remove(0)
    };
    let result: SweepResult =
        error_sweep(&sys, &cov, &bapu, &signal, &cfg.n, cfg.tau, cfg.p, cfg.s)?;
    let base = require(&cfg.out, "out")?;
    fs::write(with_suffix(base, "json"), pretty(&result)?)?;
    let mut csv_out = Vec::new();
    result.write_csv(&mut csv_out)?;
    fs::write(with_suffix(base, "csv"), csv_out)?;
    println!(
        "{}",
        json!({ "alpha": result.alpha, "fitted_slope": result.fitted_slope, "points": result.ns.len() })
    );
    Ok(())
}

fn plot_cmd(cfg: &RunConfig) -> CliResult {
    let alpha = 1.0 / cfg.tau - 1.0 / cfg.p;
    if !(alpha > 0.0) {
        return Err(Error::AlphaNotPositive {
            tau: cfg.tau,
            p: cfg.p,
        }
        .into());
    }
    let input = require(&cfg.input, "input")?;
    let points = plot::read_sweep_csv(fs::File::open(input)?)?;
    let svg = plot::render(&points, alpha)?;
    emit(cfg, &svg)
}
