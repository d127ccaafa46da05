//! Sliced Wasserstein barycenters.
//!
//! - Free support ([`barycenter_free_sphere`], [`barycenter_free_so3`]):
//!   N weighted points move by Riemannian stochastic gradient descent on
//!   Σ λ_i SW₂²(·, μ_i), with fresh slicing directions every step.
//! - Fixed support ([`barycenter_fixed`]): the points stay put and their
//!   weights descend on the probability simplex.
//! - Radon ([`barycenter_radon`]): per-direction 1D barycenters of the slice
//!   transforms of grid densities, inverted through the singular value
//!   decomposition of the slice transform.

mod fixed;
mod free;
mod radon;

pub use fixed::{
    barycenter_fixed, fixed_support_1d_value_and_grad, project_simplex, FixedSupportProblem, FixedSupportResult,
};
pub use free::{
    barycenter_free_so3, barycenter_free_sphere, barycenter_free_sphere_with, sw_gradient_free, FreeGradient,
    FreeSupportResult,
};
pub use radon::{barycenter_radon, RadonBarycenter, RadonBarycenterConfig};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Substream offset of the per-step gradient batches.
const STEP_STREAM: u64 = 16;
/// Substream offset of the separate evaluation batches.
const EVAL_STREAM: u64 = 1 << 40;

/// Step size τ_l as a function of the iteration index l.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepSchedule {
    Constant { tau: f64 },
    /// τ₀ (1 + l/scale)^{−1/2}.
    InverseSqrt { tau0: f64, scale: f64 },
    /// Explicit values; the last one repeats.
    Custom { taus: Vec<f64> },
}

impl StepSchedule {
    pub fn tau(&self, l: usize) -> f64 {
        match self {
            StepSchedule::Constant { tau } => *tau,
            StepSchedule::InverseSqrt { tau0, scale } => tau0 / (1.0 + l as f64 / scale).sqrt(),
            StepSchedule::Custom { taus } => taus[l.min(taus.len() - 1)],
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            StepSchedule::Constant { tau } => *tau > 0.0 && tau.is_finite(),
            StepSchedule::InverseSqrt { tau0, scale } => {
                *tau0 > 0.0 && tau0.is_finite() && *scale > 0.0 && scale.is_finite()
            }
            StepSchedule::Custom { taus } => !taus.is_empty() && taus.iter().all(|t| *t > 0.0 && t.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("step sizes must be positive and finite: {self:?}")))
        }
    }
}

/// Settings shared by the stochastic barycenter solvers. The initial iterate
/// is passed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgdConfig {
    pub iterations: usize,
    /// Slicing directions per step.
    pub slices: usize,
    pub schedule: StepSchedule,
    pub seed: u64,
    /// Report the loss on an independent batch instead of the step's own.
    #[serde(default)]
    pub eval_separate: bool,
}

impl SgdConfig {
    pub fn new(iterations: usize, slices: usize, schedule: StepSchedule, seed: u64) -> Result<Self> {
        let cfg = Self { iterations, slices, schedule, seed, eval_separate: false };
        cfg.validate()?;
        Ok(cfg)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.slices == 0 {
            return Err(Error::invalid("slice count must be positive"));
        }
        self.schedule.validate()
    }

    pub(crate) fn step_stream(&self, l: usize) -> crate::rng::Rng {
        crate::rng::stream(self.seed, STEP_STREAM + l as u64)
    }

    pub(crate) fn eval_stream(&self, l: usize) -> crate::rng::Rng {
        crate::rng::stream(self.seed, EVAL_STREAM + l as u64)
    }
}

fn check_lambda(lambda: &[f64], inputs: usize) -> Result<()> {
    if inputs == 0 {
        return Err(Error::invalid("at least one input measure is required"));
    }
    if lambda.len() != inputs {
        return Err(Error::DimensionMismatch { expected: inputs, got: lambda.len() });
    }
    crate::error::check_simplex(lambda, 1e-9)
}
