//! Interpolation schemes between latent points.
//!
//! Linear, spherical linear (slerp), normalized, and the two
//! Cauchy-composition schemes. The composition schemes map endpoints into
//! Cauchy space with `t = CDF_C⁻¹(CDF_Z(x))`, interpolate linearly there —
//! where convex combinations preserve the distribution — and map back, so
//! every point along the path is distributed like the prior.

use alloc::vec::Vec;

use crate::fmath;
use crate::priors::{
    self, coordinate_cdf, coordinate_quantile, euclidean_norm, Family, PriorError, PriorSpec,
};
use crate::specfun::{self, Precision, SpecFunError};

/// Below this `sin Ω` the slerp coefficients degenerate: parallel endpoints
/// fall back to linear interpolation, antiparallel ones are rejected.
const SIN_OMEGA_FLOOR: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpError {
    /// Endpoint dimensions disagree (with each other or with the prior).
    DimensionMismatch,
    /// λ outside [0, 1]; the schemes do not extrapolate.
    LambdaRange,
    /// Spherical schemes need nonzero endpoints.
    ZeroVector,
    /// Antiparallel endpoints: the spherical path is undefined.
    Antiparallel,
    /// The scheme does not support this prior family/modifier.
    UnsupportedPrior,
    /// A coordinate sits on or outside the support boundary.
    SupportBoundary,
    /// Scalar argument outside the operation's domain.
    Domain,
    /// Combination weights must be nonnegative.
    NegativeWeight,
    /// Combination weights must sum to 1 (within 1e-12).
    WeightSum,
    /// No points supplied.
    Empty,
    Prior(PriorError),
    SpecFun(SpecFunError),
}

impl From<PriorError> for InterpError {
    fn from(e: PriorError) -> Self {
        InterpError::Prior(e)
    }
}

impl From<SpecFunError> for InterpError {
    fn from(e: SpecFunError) -> Self {
        InterpError::SpecFun(e)
    }
}

impl core::fmt::Display for InterpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InterpError::DimensionMismatch => write!(f, "endpoint dimensions disagree"),
            InterpError::LambdaRange => write!(f, "lambda outside [0, 1]"),
            InterpError::ZeroVector => write!(f, "zero endpoint vector"),
            InterpError::Antiparallel => write!(f, "antiparallel endpoints"),
            InterpError::UnsupportedPrior => write!(f, "prior not supported by this scheme"),
            InterpError::SupportBoundary => write!(f, "coordinate on or outside the support"),
            InterpError::Domain => write!(f, "argument outside the operation domain"),
            InterpError::NegativeWeight => write!(f, "combination weights must be nonnegative"),
            InterpError::WeightSum => write!(f, "combination weights must sum to 1"),
            InterpError::Empty => write!(f, "no points supplied"),
            InterpError::Prior(e) => write!(f, "prior: {e}"),
            InterpError::SpecFun(e) => write!(f, "special function: {e}"),
        }
    }
}

impl core::error::Error for InterpError {}

fn check_pair(x1: &[f64], x2: &[f64], lambda: f64) -> Result<(), InterpError> {
    if x1.is_empty() {
        return Err(InterpError::Empty);
    }
    if x1.len() != x2.len() {
        return Err(InterpError::DimensionMismatch);
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(InterpError::LambdaRange);
    }
    Ok(())
}

/// `(1−λ)x₁ + λx₂`.
pub fn linear(x1: &[f64], x2: &[f64], lambda: f64) -> Result<Vec<f64>, InterpError> {
    check_pair(x1, x2, lambda)?;
    Ok(x1
        .iter()
        .zip(x2)
        .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
        .collect())
}

/// `sin[(1−λ)Ω]/sin Ω · x₁ + sin[λΩ]/sin Ω · x₂` with `Ω` the angle between
/// the endpoints. A geodesic at constant angular velocity when the norms are
/// equal.
pub fn spherical_linear(x1: &[f64], x2: &[f64], lambda: f64) -> Result<Vec<f64>, InterpError> {
    check_pair(x1, x2, lambda)?;
    let (a, b) = slerp_coefficients(x1, x2, lambda)?;
    Ok(x1.iter().zip(x2).map(|(p, q)| a * p + b * q).collect())
}

fn slerp_coefficients(x1: &[f64], x2: &[f64], lambda: f64) -> Result<(f64, f64), InterpError> {
    let n1 = euclidean_norm(x1);
    let n2 = euclidean_norm(x2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(InterpError::ZeroVector);
    }
    let dot: f64 = x1.iter().zip(x2).map(|(a, b)| a * b).sum();
    let cos_omega = (dot / (n1 * n2)).clamp(-1.0, 1.0);
    let omega = fmath::acos(cos_omega);
    let sin_omega = fmath::sin(omega);
    if sin_omega < SIN_OMEGA_FLOOR {
        if cos_omega > 0.0 {
            // Parallel endpoints: the slerp limit is the linear path.
            return Ok((1.0 - lambda, lambda));
        }
        return Err(InterpError::Antiparallel);
    }
    Ok((
        fmath::sin((1.0 - lambda) * omega) / sin_omega,
        fmath::sin(lambda * omega) / sin_omega,
    ))
}

/// `((1−λ)x₁ + λx₂) / √((1−λ)² + λ²)`; distribution-preserving for the
/// standard normal prior.
pub fn normalized(x1: &[f64], x2: &[f64], lambda: f64) -> Result<Vec<f64>, InterpError> {
    check_pair(x1, x2, lambda)?;
    let denom = fmath::sqrt((1.0 - lambda) * (1.0 - lambda) + lambda * lambda);
    Ok(x1
        .iter()
        .zip(x2)
        .map(|(a, b)| ((1.0 - lambda) * a + lambda * b) / denom)
        .collect())
}

fn require_cauchy_linear_prior(prior: &PriorSpec) -> Result<(), InterpError> {
    if !prior.family().has_coordinate_cdf() || prior.modifier().is_some() {
        return Err(InterpError::UnsupportedPrior);
    }
    Ok(())
}

/// Coordinate-wise `g((1−λ)g⁻¹(x₁) + λg⁻¹(x₂))` with `g⁻¹ = CDF_C⁻¹ ∘ CDF_Z`.
pub fn cauchy_linear(
    prior: &PriorSpec,
    x1: &[f64],
    x2: &[f64],
    lambda: f64,
) -> Result<Vec<f64>, InterpError> {
    require_cauchy_linear_prior(prior)?;
    check_pair(x1, x2, lambda)?;
    if x1.len() != prior.dim() as usize {
        return Err(InterpError::DimensionMismatch);
    }
    let family = prior.family();
    x1.iter()
        .zip(x2)
        .map(|(&a, &b)| {
            let t1 = to_cauchy_space(family, a)?;
            let t2 = to_cauchy_space(family, b)?;
            let w = (1.0 - lambda) * t1 + lambda * t2;
            from_cauchy_space(family, w)
        })
        .collect()
}

fn to_cauchy_space(family: Family, x: f64) -> Result<f64, InterpError> {
    if family == Family::Uniform && fmath::abs(x) >= 1.0 {
        // CDF hits 0/1 on the boundary; the transform is undefined there.
        return Err(InterpError::SupportBoundary);
    }
    let p = priors::guard_unit(coordinate_cdf(family, x)?);
    Ok(coordinate_quantile(Family::Cauchy, p)?)
}

fn from_cauchy_space(family: Family, w: f64) -> Result<f64, InterpError> {
    let p = priors::guard_unit(coordinate_cdf(Family::Cauchy, w)?);
    Ok(coordinate_quantile(family, p)?)
}

/// The norm transform behind spherical Cauchy-linear interpolation for the
/// normal prior: `‖Z‖ ~ √(χ²_D)`, so
/// `transform(r) = CDF_C⁻¹(CDF_{χ²_D}(r²))` carries norms to Cauchy space and
/// [`ChiNormTransform::inverse`] carries them back. Caches `ln Γ(D/2)` and
/// the χ_D median, which repeated inversions along a path would otherwise
/// recompute.
#[derive(Debug, Clone)]
pub struct ChiNormTransform {
    dim: u32,
    half_d: f64,
    ln_gamma_half: f64,
    median: f64,
    precision: Precision,
}

impl ChiNormTransform {
    pub fn new(dim: u32) -> Result<Self, InterpError> {
        if dim == 0 {
            return Err(InterpError::Prior(PriorError::Dimension));
        }
        let half_d = dim as f64 / 2.0;
        let precision = Precision::DEFAULT;
        let ln_gamma_half = specfun::log_gamma(half_d)?;
        let median = fmath::sqrt(
            2.0 * specfun::reg_lower_gamma_inv_raw(half_d, 0.5, ln_gamma_half, &precision)?,
        );
        Ok(ChiNormTransform {
            dim,
            half_d,
            ln_gamma_half,
            median,
            precision,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Median of `χ_D`; the fixed point mapped to Cauchy value 0.
    pub fn median(&self) -> f64 {
        self.median
    }

    /// Norm → Cauchy value; requires `r > 0`.
    pub fn forward(&self, r: f64) -> Result<f64, InterpError> {
        if !(r > 0.0) {
            return Err(InterpError::Domain);
        }
        let p = specfun::reg_lower_gamma_raw(
            self.half_d,
            r * r / 2.0,
            self.ln_gamma_half,
            &self.precision,
        )?;
        Ok(coordinate_quantile(Family::Cauchy, priors::guard_unit(p))?)
    }

    /// Cauchy value → norm.
    pub fn inverse(&self, c: f64) -> Result<f64, InterpError> {
        if !c.is_finite() {
            return Err(InterpError::Domain);
        }
        let p = coordinate_cdf(Family::Cauchy, c)?;
        let x =
            specfun::reg_lower_gamma_inv_raw(self.half_d, p, self.ln_gamma_half, &self.precision)?;
        Ok(fmath::sqrt(2.0 * x))
    }
}

/// One-shot [`ChiNormTransform::forward`].
pub fn chi_norm_transform(dim: u32, r: f64) -> Result<f64, InterpError> {
    ChiNormTransform::new(dim)?.forward(r)
}

/// One-shot [`ChiNormTransform::inverse`].
pub fn chi_norm_transform_inv(dim: u32, c: f64) -> Result<f64, InterpError> {
    ChiNormTransform::new(dim)?.inverse(c)
}

/// Slerp the directions, Cauchy-linearly interpolate the norms.
pub fn spherical_cauchy_linear(
    prior: &PriorSpec,
    x1: &[f64],
    x2: &[f64],
    lambda: f64,
) -> Result<Vec<f64>, InterpError> {
    let chi = ChiNormTransform::new(prior.dim())?;
    spherical_cauchy_linear_with(prior, &chi, x1, x2, lambda)
}

fn spherical_cauchy_linear_with(
    prior: &PriorSpec,
    chi: &ChiNormTransform,
    x1: &[f64],
    x2: &[f64],
    lambda: f64,
) -> Result<Vec<f64>, InterpError> {
    if prior.family() != Family::Normal || prior.modifier().is_some() {
        return Err(InterpError::UnsupportedPrior);
    }
    check_pair(x1, x2, lambda)?;
    if x1.len() != prior.dim() as usize {
        return Err(InterpError::DimensionMismatch);
    }
    let n1 = euclidean_norm(x1);
    let n2 = euclidean_norm(x2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(InterpError::ZeroVector);
    }
    let u1: Vec<f64> = x1.iter().map(|v| v / n1).collect();
    let u2: Vec<f64> = x2.iter().map(|v| v / n2).collect();
    let (a, b) = slerp_coefficients(&u1, &u2, lambda)?;
    let mut direction: Vec<f64> = u1.iter().zip(&u2).map(|(p, q)| a * p + b * q).collect();
    let dir_norm = euclidean_norm(&direction);
    for v in &mut direction {
        *v /= dir_norm;
    }
    let t1 = chi.forward(n1)?;
    let t2 = chi.forward(n2)?;
    let norm = chi.inverse((1.0 - lambda) * t1 + lambda * t2)?;
    for v in &mut direction {
        *v *= norm;
    }
    Ok(direction)
}

/// `Σ λᵢ xᵢ` for nonnegative weights summing to 1: the multi-point linear
/// combination that leaves a Cauchy prior invariant.
pub fn multi_point_combination(
    points: &[&[f64]],
    weights: &[f64],
) -> Result<Vec<f64>, InterpError> {
    if points.is_empty() {
        return Err(InterpError::Empty);
    }
    if points.len() != weights.len() {
        return Err(InterpError::DimensionMismatch);
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(InterpError::DimensionMismatch);
    }
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(InterpError::NegativeWeight);
    }
    let total: f64 = weights.iter().sum();
    if fmath::abs(total - 1.0) > 1e-12 {
        return Err(InterpError::WeightSum);
    }
    let mut out = alloc::vec![0.0f64; d];
    for (point, &w) in points.iter().zip(weights) {
        for (acc, &v) in out.iter_mut().zip(*point) {
            *acc += w * v;
        }
    }
    Ok(out)
}

/// Scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SchemeKind {
    Linear,
    SphericalLinear,
    Normalized,
    CauchyLinear,
    SphericalCauchyLinear,
}

impl SchemeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Linear => "linear",
            SchemeKind::SphericalLinear => "spherical_linear",
            SchemeKind::Normalized => "normalized",
            SchemeKind::CauchyLinear => "cauchy_linear",
            SchemeKind::SphericalCauchyLinear => "spherical_cauchy_linear",
        }
    }

    /// The two composition schemes need a prior to define the transform.
    pub fn needs_prior(&self) -> bool {
        matches!(
            self,
            SchemeKind::CauchyLinear | SchemeKind::SphericalCauchyLinear
        )
    }
}

impl core::str::FromStr for SchemeKind {
    type Err = InterpError;

    fn from_str(s: &str) -> Result<Self, InterpError> {
        match s {
            "linear" => Ok(SchemeKind::Linear),
            "spherical_linear" => Ok(SchemeKind::SphericalLinear),
            "normalized" => Ok(SchemeKind::Normalized),
            "cauchy_linear" => Ok(SchemeKind::CauchyLinear),
            "spherical_cauchy_linear" => Ok(SchemeKind::SphericalCauchyLinear),
            _ => Err(InterpError::UnsupportedPrior),
        }
    }
}

impl core::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A validated scheme: kind plus the prior the composition transforms are
/// built against (`None` for the prior-free kinds).
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterpolationScheme {
    kind: SchemeKind,
    prior: Option<PriorSpec>,
    #[cfg_attr(feature = "serde", serde(skip))]
    chi: Option<ChiNormTransform>,
}

impl InterpolationScheme {
    pub fn new(kind: SchemeKind, prior: Option<PriorSpec>) -> Result<Self, InterpError> {
        match kind {
            SchemeKind::CauchyLinear => {
                let prior = prior.ok_or(InterpError::UnsupportedPrior)?;
                require_cauchy_linear_prior(&prior)?;
                Ok(InterpolationScheme {
                    kind,
                    prior: Some(prior),
                    chi: None,
                })
            }
            SchemeKind::SphericalCauchyLinear => {
                let prior = prior.ok_or(InterpError::UnsupportedPrior)?;
                if prior.family() != Family::Normal || prior.modifier().is_some() {
                    return Err(InterpError::UnsupportedPrior);
                }
                let chi = ChiNormTransform::new(prior.dim())?;
                Ok(InterpolationScheme {
                    kind,
                    prior: Some(prior),
                    chi: Some(chi),
                })
            }
            _ => Ok(InterpolationScheme {
                kind,
                prior: None,
                chi: None,
            }),
        }
    }

    pub fn linear() -> Self {
        Self::new(SchemeKind::Linear, None).expect("prior-free")
    }

    pub fn spherical_linear() -> Self {
        Self::new(SchemeKind::SphericalLinear, None).expect("prior-free")
    }

    pub fn normalized() -> Self {
        Self::new(SchemeKind::Normalized, None).expect("prior-free")
    }

    pub fn cauchy_linear(prior: PriorSpec) -> Result<Self, InterpError> {
        Self::new(SchemeKind::CauchyLinear, Some(prior))
    }

    pub fn spherical_cauchy_linear(prior: PriorSpec) -> Result<Self, InterpError> {
        Self::new(SchemeKind::SphericalCauchyLinear, Some(prior))
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn prior(&self) -> Option<&PriorSpec> {
        self.prior.as_ref()
    }

    pub fn interpolate(&self, x1: &[f64], x2: &[f64], lambda: f64) -> Result<Vec<f64>, InterpError> {
        match self.kind {
            SchemeKind::Linear => linear(x1, x2, lambda),
            SchemeKind::SphericalLinear => spherical_linear(x1, x2, lambda),
            SchemeKind::Normalized => normalized(x1, x2, lambda),
            SchemeKind::CauchyLinear => {
                cauchy_linear(self.prior.as_ref().expect("validated"), x1, x2, lambda)
            }
            SchemeKind::SphericalCauchyLinear => {
                let prior = self.prior.as_ref().expect("validated");
                match &self.chi {
                    Some(chi) => spherical_cauchy_linear_with(prior, chi, x1, x2, lambda),
                    None => spherical_cauchy_linear(prior, x1, x2, lambda),
                }
            }
        }
    }

    /// Evaluate the scheme on a λ grid (sorted internally).
    pub fn path(
        &self,
        x1: &[f64],
        x2: &[f64],
        lambdas: &[f64],
    ) -> Result<InterpolationPath, InterpError> {
        if lambdas.is_empty() {
            return Err(InterpError::Empty);
        }
        let mut sorted: Vec<f64> = lambdas.to_vec();
        if sorted.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(InterpError::LambdaRange);
        }
        sorted.sort_unstable_by(f64::total_cmp);
        let points = sorted
            .iter()
            .map(|&l| self.interpolate(x1, x2, l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InterpolationPath {
            endpoints: (x1.to_vec(), x2.to_vec()),
            lambdas: sorted,
            points,
        })
    }
}

/// A scheme evaluated on a λ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationPath {
    endpoints: (Vec<f64>, Vec<f64>),
    lambdas: Vec<f64>,
    points: Vec<Vec<f64>>,
}

impl InterpolationPath {
    pub fn endpoints(&self) -> (&[f64], &[f64]) {
        (&self.endpoints.0, &self.endpoints.1)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}
