//! Model parameters, the derived constants that drive every limit law, and
//! the two validation tiers.
//!
//! The mechanism itself is well defined on the closed box `0 < p <= 1`,
//! `q, r in [0, 1]` ([`ValidationTier::Simulable`]); the almost-sure limit
//! theorems need the strict interior conditions checked by
//! [`ValidationTier::TheoremGrade`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four inputs of the N-interactions model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of vertices taking part in every interaction.
    #[serde(rename = "N")]
    pub clique_size: usize,
    /// Probability that a step adds a new vertex.
    pub p: f64,
    /// Probability of a weight-proportional N-clique choice on an old-vertex step.
    pub q: f64,
    /// Probability of a weight-proportional (N-1)-clique choice on a new-vertex step.
    pub r: f64,
}

/// Constants of the limit laws. `alpha` is the scale-free rate: both the
/// weight and the degree tails decay with exponent `1 + 1/alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `1 + 1/alpha`, absent when `alpha == 0`.
    pub gamma_exponent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValidationTier {
    /// Enough for the evolution mechanism to be well defined.
    Simulable,
    /// Hypotheses of the limit theorems: `0<p<1`, `q>0`, `r>0`, `(1-r)(1-q)>0`.
    TheoremGrade,
}

/// One failed parameter condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    CliqueSizeBelowThree,
    PNotInUnitInterval,
    QNotInUnitInterval,
    RNotInUnitInterval,
    PNotBelowOne,
    QNotPositive,
    RNotPositive,
    NoUniformMixing,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::CliqueSizeBelowThree => "N>=3",
            Violation::PNotInUnitInterval => "0<p<=1",
            Violation::QNotInUnitInterval => "0<=q<=1",
            Violation::RNotInUnitInterval => "0<=r<=1",
            Violation::PNotBelowOne => "p<1",
            Violation::QNotPositive => "q>0",
            Violation::RNotPositive => "r>0",
            Violation::NoUniformMixing => "(1-r)(1-q)>0",
        };
        f.write_str(s)
    }
}

impl ModelParams {
    /// Builds parameters that pass [`ValidationTier::Simulable`].
    pub fn new(clique_size: usize, p: f64, q: f64, r: f64) -> Result<Self> {
        let params = ModelParams {
            clique_size,
            p,
            q,
            r,
        };
        params.ensure(ValidationTier::Simulable)?;
        Ok(params)
    }

    /// Lists every condition of `tier` that fails. Empty means valid.
    pub fn validate(&self, tier: ValidationTier) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.clique_size < 3 {
            out.push(Violation::CliqueSizeBelowThree);
        }
        // NaN fails every comparison, so it is caught here too.
        if !(self.p > 0.0 && self.p <= 1.0) {
            out.push(Violation::PNotInUnitInterval);
        }
        if !(0.0..=1.0).contains(&self.q) {
            out.push(Violation::QNotInUnitInterval);
        }
        if !(0.0..=1.0).contains(&self.r) {
            out.push(Violation::RNotInUnitInterval);
        }
        if tier == ValidationTier::TheoremGrade {
            if !(self.p < 1.0) {
                out.push(Violation::PNotBelowOne);
            }
            if !(self.q > 0.0) {
                out.push(Violation::QNotPositive);
            }
            if !(self.r > 0.0) {
                out.push(Violation::RNotPositive);
            }
            if !((1.0 - self.r) * (1.0 - self.q) > 0.0) {
                out.push(Violation::NoUniformMixing);
            }
        }
        out
    }

    pub fn ensure(&self, tier: ValidationTier) -> Result<()> {
        let v = self.validate(tier);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    pub fn derive_constants(&self) -> Result<DerivedConstants> {
        derive_constants(self)
    }
}

/// Free-function validation, mirroring [`ModelParams::validate`].
pub fn validate(params: &ModelParams, tier: ValidationTier) -> Vec<Violation> {
    params.validate(tier)
}

pub fn derive_constants(params: &ModelParams) -> Result<DerivedConstants> {
    params.ensure(ValidationTier::Simulable)?;
    let n = params.clique_size as f64;
    let ModelParams { p, q, r, .. } = *params;

    let alpha1 = (1.0 - p) * q;
    let alpha2 = (n - 1.0) / n * p * r;
    let alpha = alpha1 + alpha2;
    let beta = (n - 1.0) * (1.0 - r) + n * (1.0 - p) * (1.0 - q) / p;
    let gamma_exponent = (alpha > 0.0).then(|| 1.0 + 1.0 / alpha);

    Ok(DerivedConstants {
        alpha1,
        alpha2,
        alpha,
        beta,
        gamma_exponent,
    })
}

impl DerivedConstants {
    /// Theoretical log-log slope `-(1 + 1/alpha)` of both tails.
    pub fn tail_slope(&self) -> Option<f64> {
        self.gamma_exponent.map(|g| -g)
    }
}
