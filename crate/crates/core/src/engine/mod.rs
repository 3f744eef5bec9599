//! Opportunity-sensitive welfare `V_{θ,u}` and its equivalent forms.
//!
//! `V_{θ,u}(f,q) = −(1/θ)·ln Σ_s q(s)·exp(−θ·U(π_s))` for finite `θ > 0`,
//! the utilitarian sum at `θ = 0` and the maximin over types at `θ = ∞`.
//! The same number is available through four routes:
//!
//! * [`welfare_primal`]: stabilized log-sum-exp of type expected utilities;
//! * [`welfare_second_order`]: `φ⁻¹(Σ q·φ(U))` for a pluggable transform;
//! * [`welfare_variational`]: minimization of `Σ p·U + (1/θ)·KL(p‖q)` over
//!   the simplex by exponentiated-gradient descent;
//! * [`welfare_mean_divergence`]: efficiency minus the Bregman divergence of
//!   the cumulant generating function between `−θ` and `0`.

mod divergence;
mod primal;
mod variational;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{expected_utility, Society, Utility};

pub use divergence::{bregman_divergence, kl_divergence};
pub use primal::{
    cgf, cgf_derivative, optimal_weights, phi_theta, phi_theta_inverse, variational_objective, welfare_mean_divergence,
    welfare_mean_variance, welfare_primal, welfare_second_order, MeanDivergence, SecondOrderTransform,
};
pub use variational::{welfare_variational, VariationalOptions, VariationalSolution};

/// Inequality-of-opportunity aversion `θ ∈ [0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Aversion {
    Finite(f64),
    /// The maximin endpoint (`ρ = 0`).
    Infinite,
}

impl Aversion {
    pub const ZERO: Aversion = Aversion::Finite(0.0);

    pub fn finite(theta: f64) -> Result<Self> {
        if theta.is_nan() || theta < 0.0 {
            return Err(Error::argument(format!("theta must be >= 0, got {theta}")));
        }
        if theta.is_infinite() {
            return Ok(Aversion::Infinite);
        }
        Ok(Aversion::Finite(theta))
    }

    /// `θ = −ln ρ`, `ρ ∈ [0, 1]`; `ρ = 0` is the maximin endpoint.
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::argument(format!("rho must lie in [0, 1], got {rho}")));
        }
        if rho == 0.0 {
            Ok(Aversion::Infinite)
        } else if rho == 1.0 {
            Ok(Aversion::ZERO)
        } else {
            Ok(Aversion::Finite(-rho.ln()))
        }
    }

    pub fn rho(self) -> f64 {
        match self {
            Aversion::Finite(t) => (-t).exp(),
            Aversion::Infinite => 0.0,
        }
    }

    /// The numeric value, `f64::INFINITY` for the maximin endpoint.
    pub fn value(self) -> f64 {
        match self {
            Aversion::Finite(t) => t,
            Aversion::Infinite => f64::INFINITY,
        }
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            Aversion::Finite(t) => Some(t),
            Aversion::Infinite => None,
        }
    }
}

impl fmt::Display for Aversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aversion::Finite(t) => write!(f, "{t}"),
            Aversion::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Aversion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Aversion::Infinite);
        }
        let t: f64 = s.parse().map_err(|_| Error::argument(format!("cannot parse theta {s:?}")))?;
        Aversion::finite(t)
    }
}

impl From<f64> for Aversion {
    /// Panics on negative or NaN input; use [`Aversion::finite`] for
    /// fallible conversion.
    fn from(theta: f64) -> Self {
        Aversion::finite(theta).expect("theta must be >= 0")
    }
}

impl Serialize for Aversion {
    /// Finite values as numbers, the maximin endpoint as the string `"inf"`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Aversion::Finite(t) => s.serialize_f64(*t),
            Aversion::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Aversion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(t) => Aversion::finite(t).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Evaluation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareParams {
    pub theta: Aversion,
    /// Below this `θ` the primal switches to the second-order expansion
    /// `E[U] − (θ/2)·Var[U]`.
    pub theta_small_switch: f64,
    /// Agreement tolerance for the variational route.
    pub dual_tol: f64,
}

impl WelfareParams {
    pub fn new(theta: impl Into<Aversion>) -> Self {
        Self { theta: theta.into(), ..Self::default() }
    }

    pub fn with_theta(self, theta: impl Into<Aversion>) -> Self {
        Self { theta: theta.into(), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if let Aversion::Finite(t) = self.theta {
            if t.is_nan() || t < 0.0 {
                return Err(Error::argument(format!("theta must be >= 0, got {t}")));
            }
        }
        if !(self.theta_small_switch > 0.0) {
            return Err(Error::argument("theta_small_switch must be > 0"));
        }
        if !(self.dual_tol > 0.0) {
            return Err(Error::argument("dual_tol must be > 0"));
        }
        Ok(())
    }
}

impl Default for WelfareParams {
    fn default() -> Self {
        Self { theta: Aversion::ZERO, theta_small_switch: 1e-6, dual_tol: 1e-8 }
    }
}

/// Expected utility of every type alongside its share. Entries with zero
/// share carry `NaN` and are skipped by every evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeUtilities {
    labels: Vec<String>,
    shares: Vec<f64>,
    utilities: Vec<f64>,
}

impl TypeUtilities {
    pub fn of(society: &Society, u: &Utility) -> Result<Self> {
        let mut labels = Vec::with_capacity(society.len());
        let mut shares = Vec::with_capacity(society.len());
        let mut utilities = Vec::with_capacity(society.len());
        for t in society.types() {
            labels.push(t.label().to_string());
            shares.push(t.share());
            utilities.push(if t.is_supported() { expected_utility(t.dist(), u)? } else { f64::NAN });
        }
        Ok(Self { labels, shares, utilities })
    }

    /// Builds directly from `(share, utility)` pairs; labels are `t0, t1, …`.
    pub fn from_values(shares: &[f64], utilities: &[f64]) -> Result<Self> {
        if shares.len() != utilities.len() || shares.is_empty() {
            return Err(Error::argument("shares and utilities must be non-empty and equally long"));
        }
        if shares.iter().any(|q| !(q.is_finite() && *q >= 0.0)) {
            return Err(Error::argument("shares must be finite and non-negative"));
        }
        let total: f64 = shares.iter().sum();
        if (total - 1.0).abs() > crate::model::SUM_REJECT_TOL {
            return Err(Error::argument(format!("shares sum to {total}, expected 1")));
        }
        let utilities: Vec<f64> =
            shares.iter().zip(utilities).map(|(&q, &v)| if q > 0.0 { v } else { f64::NAN }).collect();
        if shares.iter().zip(&utilities).any(|(&q, v)| q > 0.0 && !v.is_finite()) {
            return Err(Error::argument("utilities of supported types must be finite"));
        }
        if !shares.iter().any(|&q| q > 0.0) {
            return Err(Error::argument("no type carries a positive share"));
        }
        Ok(Self { labels: (0..shares.len()).map(|i| format!("t{i}")).collect(), shares: shares.to_vec(), utilities })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    pub fn utilities(&self) -> &[f64] {
        &self.utilities
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    /// `(share, utility)` of supported types.
    pub fn supported(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.shares.iter().zip(&self.utilities).filter(|(q, _)| **q > 0.0).map(|(&q, &v)| (q, v))
    }

    pub fn min_utility(&self) -> f64 {
        self.supported().map(|(_, v)| v).fold(f64::INFINITY, f64::min)
    }

    pub fn max_utility(&self) -> f64 {
        self.supported().map(|(_, v)| v).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `E_q[U]`, accumulated as offsets from the minimum so that a constant
    /// profile yields that constant exactly.
    pub fn mean(&self) -> f64 {
        let lo = self.min_utility();
        lo + sorted_pairs(self).iter().map(|(q, v)| q * (v - lo)).sum::<f64>()
    }

    /// `Var_q[U]` with demographic weights.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        sorted_pairs(self).iter().map(|(q, v)| q * (v - m) * (v - m)).sum()
    }

    /// Third central moment (= third cumulant) of `U` under `q`.
    pub fn third_cumulant(&self) -> f64 {
        let m = self.mean();
        sorted_pairs(self).iter().map(|(q, v)| q * (v - m).powi(3)).sum()
    }

    /// Copy with the utility of type `index` replaced.
    pub fn with_utility(&self, index: usize, value: f64) -> Result<Self> {
        if index >= self.len() || !(self.shares[index] > 0.0) {
            return Err(Error::argument(format!("type {index} is not a supported type")));
        }
        let mut out = self.clone();
        out.utilities[index] = value;
        Ok(out)
    }
}

/// Supported `(share, utility)` pairs in a canonical order (by utility, then
/// share) so that sums do not depend on row order.
pub(crate) fn sorted_pairs(tu: &TypeUtilities) -> Vec<(f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = tu.supported().collect();
    pairs.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    // Types with equal utility are pooled so a split type sums like the whole.
    pairs.dedup_by(|later, kept| {
        let same = later.1 == kept.1;
        if same {
            kept.0 += later.0;
        }
        same
    });
    pairs
}

/// Per-type weights on the simplex (normative weights or shares).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::argument("labels and weights differ in length"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::argument("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::argument(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { labels, weights })
    }

    /// The demographic shares `q` of a society.
    pub fn shares_of(society: &Society) -> Self {
        Self { labels: society.types().iter().map(|t| t.label().to_string()).collect(), weights: society.shares() }
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<String>, weights: Vec<f64>) -> Self {
        Self { labels, weights }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.weights[i])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.labels.iter().map(String::as_str).zip(self.weights.iter().copied())
    }
}
