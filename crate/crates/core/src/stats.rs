//! Statistical verification harness: Kolmogorov–Smirnov tests, norm
//! summaries, and the Property-4 audits that check "every point along the
//! interpolation is distributed like the prior" by Monte Carlo.
//!
//! Critical values use the asymptotic KS distribution,
//! `c(α) = √(−ln(α/2)/2)`; every audit here runs at n ≥ 10³ where the
//! asymptotics are accurate.

use alloc::vec::Vec;

use crate::fmath;
use crate::interp::{InterpError, InterpolationScheme};
use crate::priors::{
    coordinate_cdf, euclidean_norm, norm_approx_params, norm_cdf, Family, HistogramBin,
    NormSummary, PriorError, PriorSpec, SampleBatch,
};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsError {
    /// KS tests need at least one observation.
    EmptySample,
    /// Significance level must lie strictly between 0 and 1.
    InvalidAlpha,
    /// Data contains NaN or infinite values.
    NonFinite,
    /// λ grid must be nonempty with every λ in [0, 1].
    InvalidLambdas,
    /// Histograms need at least one bin.
    ZeroBins,
    /// Audits require an unmodified prior with a coordinate CDF.
    UnsupportedPrior,
    Interp(InterpError),
    Prior(PriorError),
}

impl From<InterpError> for StatsError {
    fn from(e: InterpError) -> Self {
        StatsError::Interp(e)
    }
}

impl From<PriorError> for StatsError {
    fn from(e: PriorError) -> Self {
        StatsError::Prior(e)
    }
}

impl core::fmt::Display for StatsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StatsError::EmptySample => write!(f, "empty sample"),
            StatsError::InvalidAlpha => write!(f, "alpha must lie in (0, 1)"),
            StatsError::NonFinite => write!(f, "data contains non-finite values"),
            StatsError::InvalidLambdas => write!(f, "lambdas must be nonempty and inside [0, 1]"),
            StatsError::ZeroBins => write!(f, "histogram needs at least one bin"),
            StatsError::UnsupportedPrior => {
                write!(f, "audit requires an unmodified prior with a coordinate CDF")
            }
            StatsError::Interp(e) => write!(f, "interpolation: {e}"),
            StatsError::Prior(e) => write!(f, "prior: {e}"),
        }
    }
}

impl core::error::Error for StatsError {}

/// Outcome of a KS test. `reject` ⇔ `statistic > critical_value`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KsResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub n: usize,
    #[cfg_attr(
        feature = "serde",
        serde(skip_serializing_if = "Option::is_none", default)
    )]
    pub m: Option<usize>,
    pub reject: bool,
}

fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if !(alpha > 0.0) || !(alpha < 1.0) {
        return Err(StatsError::InvalidAlpha);
    }
    Ok(())
}

fn sorted_finite(data: &[f64]) -> Result<Vec<f64>, StatsError> {
    if data.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if !data.iter().all(|v| v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = data.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted)
}

/// Asymptotic KS threshold `√(−ln(α/2)/2)`.
fn ks_coefficient(alpha: f64) -> f64 {
    fmath::sqrt(-fmath::ln(alpha / 2.0) / 2.0)
}

/// One-sample KS test of `data` against the reference CDF.
pub fn ks_one_sample<F>(data: &[f64], cdf: F, alpha: f64) -> Result<KsResult, StatsError>
where
    F: Fn(f64) -> f64,
{
    check_alpha(alpha)?;
    let sorted = sorted_finite(data)?;
    let n = sorted.len();
    let nf = n as f64;
    let mut statistic: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let upper = (i + 1) as f64 / nf - f;
        let lower = f - i as f64 / nf;
        statistic = statistic.max(upper).max(lower);
    }
    let critical_value = ks_coefficient(alpha) / fmath::sqrt(nf);
    Ok(KsResult {
        statistic,
        critical_value,
        alpha,
        n,
        m: None,
        reject: statistic > critical_value,
    })
}

/// Two-sample KS test: supremum distance between the empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> Result<KsResult, StatsError> {
    check_alpha(alpha)?;
    let a = sorted_finite(a)?;
    let b = sorted_finite(b)?;
    let (n, m) = (a.len(), b.len());
    let (nf, mf) = (n as f64, m as f64);
    let mut statistic: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < m {
        let x = match (a.get(i), b.get(j)) {
            (Some(&xa), Some(&xb)) => xa.min(xb),
            (Some(&xa), None) => xa,
            (None, Some(&xb)) => xb,
            (None, None) => break,
        };
        while i < n && a[i] == x {
            i += 1;
        }
        while j < m && b[j] == x {
            j += 1;
        }
        statistic = statistic.max(fmath::abs(i as f64 / nf - j as f64 / mf));
    }
    let critical_value = ks_coefficient(alpha) * fmath::sqrt((nf + mf) / (nf * mf));
    Ok(KsResult {
        statistic,
        critical_value,
        alpha,
        n,
        m: Some(m),
        reject: statistic > critical_value,
    })
}

/// Empirical norm statistics of a batch plus a unit-area histogram; analytic
/// fields are filled from [`norm_approx_params`] when the prior supports them
/// and the batch is unscaled.
pub fn norm_summary(batch: &SampleBatch, bins: usize) -> Result<NormSummary, StatsError> {
    if bins == 0 {
        return Err(StatsError::ZeroBins);
    }
    if batch.n() == 0 {
        return Err(StatsError::EmptySample);
    }
    let norms = batch.norms();
    let n = norms.len() as f64;
    let mean = norms.iter().sum::<f64>() / n;
    let std = if norms.len() < 2 {
        0.0
    } else {
        let ss: f64 = norms.iter().map(|v| (v - mean) * (v - mean)).sum();
        fmath::sqrt(ss / (n - 1.0))
    };

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in &norms {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi - lo < 1e-12 {
        // Degenerate spread (e.g. the sphere prior): center a unit window.
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0usize; bins];
    for &v in &norms {
        let idx = (fmath::floor((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| HistogramBin {
            bin_center: lo + (i as f64 + 0.5) * width,
            density: c as f64 / (n * width),
        })
        .collect();

    let analytic = if batch.scale() == 1.0 {
        norm_approx_params(batch.prior()).ok()
    } else {
        None
    };
    Ok(NormSummary {
        empirical_mean: mean,
        empirical_std: std,
        analytic_mean: analytic.map(|(m, _)| m),
        analytic_std: analytic.map(|(_, v)| fmath::sqrt(v)),
        histogram,
    })
}

/// Per-λ outcome of a Property-4 audit.
///
/// `coordinate_ks` is the worst of the per-coordinate tests, each run at the
/// Bonferroni-corrected level; `norm_ks` is present when the prior has an
/// exact norm CDF (normal family). `mean_norm` is the empirical mean norm of
/// the interpolants — the soap-bubble diagnostic.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaAudit {
    pub lambda: f64,
    pub coordinate_ks: KsResult,
    #[cfg_attr(
        feature = "serde",
        serde(skip_serializing_if = "Option::is_none", default)
    )]
    pub norm_ks: Option<KsResult>,
    pub mean_norm: f64,
    pub pass: bool,
}

/// Audit verdict: for each λ, fresh endpoint pairs are drawn, interpolated,
/// and the interpolants tested against the prior's marginals.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Property4Report {
    pub scheme: InterpolationScheme,
    pub prior: PriorSpec,
    pub lambdas: Vec<f64>,
    pub per_lambda: Vec<LambdaAudit>,
    pub overall_pass: bool,
}

/// Number of coordinates tested per λ (Bonferroni-corrected).
const MAX_AUDIT_COORDINATES: usize = 10;

/// Audit `scheme` against `prior`: deterministic given `seed`.
pub fn property4_audit(
    scheme: &InterpolationScheme,
    prior: &PriorSpec,
    lambdas: &[f64],
    n: usize,
    seed: u64,
    alpha: f64,
) -> Result<Property4Report, StatsError> {
    property4_audit_with(scheme, prior, lambdas, n, seed, alpha, |x1, x2, l| {
        scheme.interpolate(x1, x2, l)
    })
}

/// Audit engine over an arbitrary evaluator; `scheme` is report metadata.
/// Useful for auditing custom interpolations against the same machinery.
pub fn property4_audit_with<F>(
    scheme: &InterpolationScheme,
    prior: &PriorSpec,
    lambdas: &[f64],
    n: usize,
    seed: u64,
    alpha: f64,
    eval: F,
) -> Result<Property4Report, StatsError>
where
    F: Fn(&[f64], &[f64], f64) -> Result<Vec<f64>, InterpError>,
{
    check_alpha(alpha)?;
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    if lambdas.is_empty() || lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(StatsError::InvalidLambdas);
    }
    if prior.modifier().is_some() || !prior.family().has_coordinate_cdf() {
        return Err(StatsError::UnsupportedPrior);
    }
    if let Some(scheme_prior) = scheme.prior() {
        if scheme_prior != prior {
            return Err(StatsError::UnsupportedPrior);
        }
    }
    let d = prior.dim() as usize;
    let family = prior.family();
    let coords = audit_coordinates(d);
    let alpha_coord = alpha / coords.len() as f64;
    let marginal = |x: f64| coordinate_cdf(family, x).expect("validated family, finite data");
    // A norm KS needs an exact reference CDF; only the normal family has one.
    let norm_reference = family == Family::Normal;

    let mut per_lambda = Vec::with_capacity(lambdas.len());
    for (li, &lambda) in lambdas.iter().enumerate() {
        let left = prior.sample(n, rng::derive_seed(seed, 2 * li as u64));
        let right = prior.sample(n, rng::derive_seed(seed, 2 * li as u64 + 1));

        let mut flat = Vec::with_capacity(n * d);
        for r in 0..n {
            let point = eval(left.row(r), right.row(r), lambda)?;
            debug_assert_eq!(point.len(), d);
            flat.extend_from_slice(&point);
        }

        let mut coordinate_ks: Option<KsResult> = None;
        let mut column = Vec::with_capacity(n);
        for &c in &coords {
            column.clear();
            column.extend((0..n).map(|r| flat[r * d + c]));
            let result = ks_one_sample(&column, marginal, alpha_coord)?;
            let worse = match &coordinate_ks {
                Some(prev) => result.statistic > prev.statistic,
                None => true,
            };
            if worse {
                coordinate_ks = Some(result);
            }
        }
        let coordinate_ks = coordinate_ks.expect("at least one coordinate");

        let norms: Vec<f64> = flat.chunks_exact(d).map(euclidean_norm).collect();
        let mean_norm = norms.iter().sum::<f64>() / n as f64;
        let norm_ks = if norm_reference {
            let cdf = |r: f64| norm_cdf(prior, r).expect("normal family").value;
            Some(ks_one_sample(&norms, cdf, alpha)?)
        } else {
            None
        };

        let pass = !coordinate_ks.reject && !norm_ks.as_ref().is_some_and(|k| k.reject);
        per_lambda.push(LambdaAudit {
            lambda,
            coordinate_ks,
            norm_ks,
            mean_norm,
            pass,
        });
    }

    let overall_pass = per_lambda.iter().all(|a| a.pass);
    Ok(Property4Report {
        scheme: scheme.clone(),
        prior: *prior,
        lambdas: lambdas.to_vec(),
        per_lambda,
        overall_pass,
    })
}

/// Fixed, evenly spaced coordinate subset (at most [`MAX_AUDIT_COORDINATES`]).
fn audit_coordinates(d: usize) -> Vec<usize> {
    let k = d.min(MAX_AUDIT_COORDINATES);
    (0..k).map(|j| j * d / k).collect()
}
