//! Command dispatch: flag parsing types, validation, and execution.
//!
//! Exit-code contract (see `main.rs`): 0 success, 1 audit rejected,
//! 2 usage error, 3 I/O or file-format error, 4 computation error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use latent_interp_core::interp::{InterpError, InterpolationScheme, SchemeKind};
use latent_interp_core::priors::{Family, Modifier, PriorError, PriorSpec};
use latent_interp_core::stats::{self, StatsError};
use thiserror::Error;

use crate::formats;

/// Fixed default seed: omitting `--seed` must still be reproducible.
pub const DEFAULT_SEED: u64 = 7;

/// Latent prior sampling, distribution-preserving interpolation, and
/// distribution audits.
#[derive(Debug, Parser)]
#[command(name = "latent-interp", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: RunConfig,
}

const DEFAULT_AUDIT_LAMBDAS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("file format: {0}")]
    Format(String),
    #[error("prior: {0}")]
    Prior(#[from] PriorError),
    #[error("interpolation: {0}")]
    Interp(#[from] InterpError),
    #[error("stats: {0}")]
    Stats(#[from] StatsError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Format(_) => 3,
            CliError::Prior(_) | CliError::Interp(_) | CliError::Stats(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Lsb1,
    Json,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
        .map_err(|_| format!("unknown family {s:?} (normal, uniform, cauchy, sphere_uniform, discrete_corners)"))
}

fn parse_scheme_kind(s: &str) -> Result<SchemeKind, String> {
    s.parse().map_err(|_| {
        format!("unknown scheme {s:?} (linear, spherical_linear, normalized, cauchy_linear, spherical_cauchy_linear)")
    })
}

fn parse_modifier(s: &str) -> Result<Modifier, String> {
    let (kind, k) = s
        .split_once(':')
        .ok_or_else(|| format!("modifier must be sparse:K or subspace:K, got {s:?}"))?;
    let k: u32 = k.parse().map_err(|_| format!("bad modifier width {k:?}"))?;
    match kind {
        "sparse" => Ok(Modifier::Sparse { k }),
        "subspace" => Ok(Modifier::Subspace { k }),
        _ => Err(format!("modifier must be sparse:K or subspace:K, got {s:?}")),
    }
}

/// Comma-separated λ list, parsed as one argument value.
#[derive(Debug, Clone)]
pub struct LambdaList(pub Vec<f64>);

fn parse_lambdas(s: &str) -> Result<LambdaList, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad lambda {part:?}"))
        })
        .collect::<Result<_, _>>()
        .map(LambdaList)
}

/// Comma-separated dimension list, parsed as one argument value.
#[derive(Debug, Clone)]
pub struct DimList(pub Vec<u32>);

fn parse_dims(s: &str) -> Result<DimList, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad dimension {part:?}"))
        })
        .collect::<Result<_, _>>()
        .map(DimList)
}

/// Prior selection flags shared by the subcommands.
#[derive(Debug, Clone, Args)]
pub struct PriorArgs {
    /// Prior family.
    #[arg(long, value_parser = parse_family)]
    pub prior: Family,
    /// Latent dimension D.
    #[arg(long)]
    pub dim: u32,
    /// Pathological modifier: sparse:K or subspace:K.
    #[arg(long, value_parser = parse_modifier)]
    pub modifier: Option<Modifier>,
    /// Sample the dense test distribution scaled by sqrt(K/D) instead of
    /// applying the modifier's zeroing.
    #[arg(long, default_value_t = false)]
    pub scale_correction: bool,
}

impl PriorArgs {
    pub fn build(&self) -> Result<PriorSpec, CliError> {
        let mut prior =
            PriorSpec::new(self.prior, self.dim).map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(modifier) = self.modifier {
            prior = prior
                .with_modifier(modifier)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if self.scale_correction {
            prior = prior
                .with_scale_correction()
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(prior)
    }
}

/// The subcommand set; one variant per command.
#[derive(Debug, Clone, Subcommand)]
pub enum RunConfig {
    /// Draw a sample batch and write it as CSV or LSB1.
    Sample {
        #[command(flatten)]
        prior: PriorArgs,
        /// Number of samples.
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output_path: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Interpolate between two endpoints and write the path (λ column first).
    Interp {
        /// Interpolation scheme.
        #[arg(long, value_parser = parse_scheme_kind)]
        scheme: SchemeKind,
        #[command(flatten)]
        prior: PriorArgs,
        /// Comma-separated λ grid in [0, 1]; default is 101 evenly spaced.
        #[arg(long, value_parser = parse_lambdas)]
        lambdas: Option<LambdaList>,
        /// Read endpoints (first two rows) from a batch file instead of
        /// drawing fresh ones.
        #[arg(long)]
        endpoints: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output_path: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Norm summary: `<output-path>.json` plus `<output-path>.csv` histogram.
    Norms {
        #[command(flatten)]
        prior: PriorArgs,
        #[arg(short, long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 60)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Base path; `.json` and `.csv` are appended.
        #[arg(long)]
        output_path: PathBuf,
    },
    /// Property-4 audit. Exit status is nonzero iff the audit rejects.
    Audit {
        #[arg(long, value_parser = parse_scheme_kind)]
        scheme: SchemeKind,
        #[command(flatten)]
        prior: PriorArgs,
        #[arg(short, long, default_value_t = 10_000)]
        n: usize,
        /// Comma-separated λ grid; default 0.1,0.25,0.5,0.75,0.9.
        #[arg(long, value_parser = parse_lambdas)]
        lambdas: Option<LambdaList>,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        output_path: Option<PathBuf>,
    },
    /// Norm histograms for {normal, uniform, cauchy} × each dimension:
    /// one `norms_<family>_d<D>.csv` per pair.
    Figure1 {
        /// Comma-separated dimensions.
        #[arg(long, value_parser = parse_dims, default_value = "2,10,100,1000")]
        dims: DimList,
        #[arg(short, long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 60)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output_dir: PathBuf,
    },
}

/// What a successful run produced, for exit-status purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    /// `Some(false)` when an audit ran and rejected.
    pub audit_pass: Option<bool>,
}

impl RunOutcome {
    fn plain() -> Self {
        RunOutcome { audit_pass: None }
    }
}

pub fn run(config: RunConfig) -> Result<RunOutcome, CliError> {
    match config {
        RunConfig::Sample {
            prior,
            n,
            seed,
            output_path,
            format,
        } => {
            let prior = prior.build()?;
            let batch = prior.sample(n, seed);
            match format {
                OutputFormat::Csv => formats::write_batch_csv(&output_path, &batch)?,
                OutputFormat::Lsb1 => {
                    formats::write_lsb1(&output_path, &formats::Lsb1File::from_batch(&batch))?
                }
                OutputFormat::Json => {
                    return Err(CliError::Usage(
                        "sample output supports csv or lsb1".into(),
                    ))
                }
            }
            Ok(RunOutcome::plain())
        }
        RunConfig::Interp {
            scheme,
            prior,
            lambdas,
            endpoints,
            seed,
            output_path,
            format,
        } => {
            let prior = prior.build()?;
            let scheme = build_scheme(scheme, &prior)?;
            let (x1, x2) = match endpoints {
                Some(path) => {
                    let (columns, x1, x2) = formats::read_endpoints(&path)?;
                    if columns != prior.dim() as usize {
                        return Err(CliError::Format(format!(
                            "endpoints have {columns} columns but --dim is {}",
                            prior.dim()
                        )));
                    }
                    (x1, x2)
                }
                None => {
                    let batch = prior.sample(2, seed);
                    (batch.row(0).to_vec(), batch.row(1).to_vec())
                }
            };
            let lambdas = lambdas.map_or_else(
                || (0..=100).map(|i| i as f64 / 100.0).collect(),
                |l| l.0,
            );
            let path = scheme.path(&x1, &x2, &lambdas)?;
            match format {
                OutputFormat::Csv => {
                    formats::write_path_csv(&output_path, path.lambdas(), path.points())?
                }
                OutputFormat::Lsb1 => {
                    let dim = prior.dim() as usize;
                    let mut data = Vec::with_capacity(path.lambdas().len() * (dim + 1));
                    for (l, point) in path.lambdas().iter().zip(path.points()) {
                        data.push(*l);
                        data.extend_from_slice(point);
                    }
                    let file = formats::Lsb1File {
                        columns: (dim + 1) as u32,
                        rows: path.lambdas().len() as u64,
                        data,
                        metadata: formats::Lsb1Metadata {
                            prior,
                            seed,
                            scale: 1.0,
                        },
                    };
                    formats::write_lsb1(&output_path, &file)?
                }
                OutputFormat::Json => {
                    return Err(CliError::Usage(
                        "interp output supports csv or lsb1".into(),
                    ))
                }
            }
            Ok(RunOutcome::plain())
        }
        RunConfig::Norms {
            prior,
            n,
            bins,
            seed,
            output_path,
        } => {
            let prior = prior.build()?;
            let batch = prior.sample(n, seed);
            let summary = stats::norm_summary(&batch, bins)?;
            formats::write_json(&with_extension(&output_path, "json"), &summary)?;
            formats::write_histogram_csv(&with_extension(&output_path, "csv"), &summary)?;
            Ok(RunOutcome::plain())
        }
        RunConfig::Audit {
            scheme,
            prior,
            n,
            lambdas,
            alpha,
            seed,
            output_path,
        } => {
            let prior = prior.build()?;
            let scheme = build_scheme(scheme, &prior)?;
            let lambdas = lambdas.map_or_else(|| DEFAULT_AUDIT_LAMBDAS.to_vec(), |l| l.0);
            let report = stats::property4_audit(&scheme, &prior, &lambdas, n, seed, alpha)?;
            match output_path {
                Some(path) => formats::write_json(&path, &report)?,
                None => {
                    let text = serde_json::to_string_pretty(&report)
                        .map_err(|e| CliError::Format(format!("serialize: {e}")))?;
                    println!("{text}");
                }
            }
            Ok(RunOutcome {
                audit_pass: Some(report.overall_pass),
            })
        }
        RunConfig::Figure1 {
            dims,
            n,
            bins,
            seed,
            output_dir,
        } => {
            std::fs::create_dir_all(&output_dir)?;
            for family in [Family::Normal, Family::Uniform, Family::Cauchy] {
                for &dim in &dims.0 {
                    let prior = PriorSpec::new(family, dim)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    let batch = prior.sample(n, seed);
                    let summary = stats::norm_summary(&batch, bins)?;
                    let name = format!("norms_{}_d{}.csv", family.as_str(), dim);
                    formats::write_histogram_csv(&output_dir.join(name), &summary)?;
                }
            }
            Ok(RunOutcome::plain())
        }
    }
}

fn build_scheme(kind: SchemeKind, prior: &PriorSpec) -> Result<InterpolationScheme, CliError> {
    let prior_arg = kind.needs_prior().then_some(*prior);
    InterpolationScheme::new(kind, prior_arg).map_err(CliError::Interp)
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut name = base.as_os_str().to_os_string();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}
