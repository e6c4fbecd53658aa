//! Core library for latent-space priors and distribution-preserving
//! interpolation.
//!
//! High-dimensional product priors (normal, uniform, Cauchy, plus the
//! sphere/corner and sparse/subspace pathologies) concentrate their mass
//! near a sphere of radius `√(Dμ)` — the *soap bubble* effect. Straight
//! lines between two draws cut through the hollow center, so points along
//! a linear interpolation are no longer distributed like the prior. This
//! crate provides:
//!
//! * deterministic, seed-addressable sampling of the priors ([`priors`]),
//! * five interpolation schemes, including the Cauchy-composition
//!   transforms that restore distribution matching ([`interp`]),
//! * the scalar special functions the transforms need ([`specfun`]),
//! * a Kolmogorov–Smirnov harness that audits the distribution-matching
//!   claims by Monte Carlo ([`stats`]).
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! front end live in the companion `latent-interp` crate.
//!
//! ```
//! use latent_interp_core::priors::{Family, PriorSpec};
//! use latent_interp_core::interp::InterpolationScheme;
//! use latent_interp_core::stats::property4_audit;
//!
//! let prior = PriorSpec::new(Family::Normal, 50)?;
//! let scheme = InterpolationScheme::cauchy_linear(prior)?;
//! let report = property4_audit(&scheme, &prior, &[0.5], 2_000, 7, 0.01)?;
//! assert!(report.overall_pass);
//! # Ok::<(), std::boxed::Box<dyn core::error::Error>>(())
//! ```

#![no_std]
// `!(x > 0.0)`-style guards are used on purpose: they reject NaN along with
// out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod fmath;
mod rng;

pub mod interp;
pub mod priors;
pub mod specfun;
pub mod stats;

pub use interp::{InterpolationPath, InterpolationScheme, SchemeKind};
pub use priors::{Family, Modifier, NormSummary, PriorSpec, SampleBatch};
pub use specfun::Precision;
pub use stats::{KsResult, LambdaAudit, Property4Report};
