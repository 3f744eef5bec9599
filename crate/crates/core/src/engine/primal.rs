use std::fmt;

use crate::engine::{sorted_pairs, Aversion, TypeUtilities, WeightVector, WelfareParams};
use crate::error::{Error, Result};
use crate::model::{Society, Utility};

/// `φ_θ(t)`: identity at `θ = 0`, `−exp(−θt)` for `θ > 0`.
pub fn phi_theta(t: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        t
    } else {
        -(-theta * t).exp()
    }
}

/// `φ_θ⁻¹(t)`: identity at `θ = 0`, `−ln(−t)/θ` for `θ > 0` (needs `t < 0`).
pub fn phi_theta_inverse(t: f64, theta: f64) -> Result<f64> {
    if theta == 0.0 {
        return Ok(t);
    }
    if !(t < 0.0) {
        return Err(Error::domain(format!("phi_theta inverse needs t < 0 when theta > 0, got t = {t}")));
    }
    Ok(-(-t).ln() / theta)
}

/// `ln Σ q·exp(v)`, shifted by the largest exponent. When every shifted
/// exponent is small the sum is accumulated through `expm1` so that the
/// logarithm of a quantity near one keeps full relative precision.
pub(crate) fn log_mean_exp(pairs: &[(f64, f64)]) -> f64 {
    let top = pairs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let near_one: f64 = pairs.iter().map(|(q, v)| q * (v - top).exp_m1()).sum();
    if near_one > -0.5 {
        top + near_one.ln_1p()
    } else {
        top + pairs.iter().map(|(q, v)| q * (v - top).exp()).sum::<f64>().ln()
    }
}

impl TypeUtilities {
    /// `V_{θ,u}` from type expected utilities.
    pub fn welfare(&self, params: &WelfareParams) -> Result<f64> {
        params.validate()?;
        let pairs = sorted_pairs(self);
        if pairs.is_empty() {
            return Err(Error::validation("society has no supported types"));
        }
        let theta = match params.theta {
            Aversion::Infinite => return Ok(self.min_utility()),
            Aversion::Finite(t) => t,
        };
        if theta == 0.0 {
            return Ok(self.mean());
        }
        if theta < params.theta_small_switch {
            return Ok(self.mean() - 0.5 * theta * self.variance());
        }
        let lo = self.min_utility();
        let tilted: Vec<(f64, f64)> = pairs.iter().map(|&(q, v)| (q, -theta * (v - lo))).collect();
        let v = lo - log_mean_exp(&tilted) / theta;
        finite(v, "welfare")
    }

    /// `φ⁻¹(Σ q·φ(U))`.
    pub fn welfare_second_order(&self, transform: &SecondOrderTransform) -> Result<f64> {
        let inner: f64 = sorted_pairs(self).iter().map(|&(q, v)| q * (transform.phi)(v)).sum();
        let out = (transform.inverse)(inner);
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::numeric(format!("{}: inverse undefined at Σ q·φ(U) = {inner}", transform.descriptor)))
        }
    }

    /// Exponentially tilted weights `q·e^{−θU} / Σ q·e^{−θU}`. At `θ = ∞`
    /// the limit puts all mass on the worst-off types, pro rata to `q`.
    pub fn optimal_weights(&self, theta: Aversion) -> WeightVector {
        let lo = self.min_utility();
        let raw: Vec<f64> = self
            .shares()
            .iter()
            .zip(self.utilities())
            .map(|(&q, &v)| {
                if q <= 0.0 {
                    return 0.0;
                }
                match theta {
                    Aversion::Finite(t) => q * (-t * (v - lo)).exp(),
                    Aversion::Infinite if v == lo => q,
                    Aversion::Infinite => 0.0,
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        WeightVector::from_parts_unchecked(self.labels().to_vec(), raw.into_iter().map(|w| w / total).collect())
    }

    /// `K_U(τ) = ln E_q[e^{τU}]`.
    pub fn cgf(&self, tau: f64) -> f64 {
        if tau == 0.0 {
            return 0.0;
        }
        let pairs: Vec<(f64, f64)> = sorted_pairs(self).iter().map(|&(q, v)| (q, tau * v)).collect();
        log_mean_exp(&pairs)
    }

    /// `K_U'(τ)`: mean of `U` under the `τ`-tilted weights.
    pub fn cgf_derivative(&self, tau: f64) -> f64 {
        if tau == 0.0 {
            return self.mean();
        }
        let pairs = sorted_pairs(self);
        let top = pairs.iter().map(|p| tau * p.1).fold(f64::NEG_INFINITY, f64::max);
        let (mut num, mut den) = (0.0, 0.0);
        for &(q, v) in &pairs {
            let w = q * (tau * v - top).exp();
            num += w * v;
            den += w;
        }
        num / den
    }

    pub fn welfare_mean_variance(&self, theta: f64) -> Result<f64> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::argument(format!("theta must be finite and >= 0, got {theta}")));
        }
        if theta == 0.0 {
            return Ok(self.mean());
        }
        Ok(self.mean() - 0.5 * theta * self.variance())
    }

    pub fn welfare_mean_divergence(&self, theta: f64) -> Result<MeanDivergence> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::argument(format!("theta must be finite and > 0, got {theta}")));
        }
        let efficiency = self.mean();
        // Bregman divergence of K_U between −θ and 0, divided by θ.
        let iop_term = (self.cgf(-theta) + theta * efficiency) / theta;
        Ok(MeanDivergence { welfare: efficiency - iop_term, efficiency, iop_term })
    }
}

/// Efficiency / inequality-of-opportunity split of welfare.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanDivergence {
    pub welfare: f64,
    /// `E_q[U]`
    pub efficiency: f64,
    /// `(1/θ)·D_{K_U}(−θ‖0)`
    pub iop_term: f64,
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A strictly increasing, weakly concave second-order transform `φ` with its
/// inverse. The inverse returns a non-finite value outside its domain.
pub struct SecondOrderTransform {
    phi: RealFn,
    inverse: RealFn,
    descriptor: String,
}

impl SecondOrderTransform {
    pub fn new(
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
        descriptor: impl Into<String>,
    ) -> Self {
        Self { phi: Box::new(phi), inverse: Box::new(inverse), descriptor: descriptor.into() }
    }

    pub fn identity() -> Self {
        Self::new(|t| t, |t| t, "identity")
    }

    /// `φ_θ` exactly as `−exp(−θt)`.
    pub fn phi_theta(theta: f64) -> Self {
        Self::new(
            move |t| phi_theta(t, theta),
            move |t| phi_theta_inverse(t, theta).unwrap_or(f64::NAN),
            format!("phi_theta({theta})"),
        )
    }

    /// The positive affine transform `(1 − e^{−θ(t−c)})/θ` of `φ_θ`, which
    /// represents the same preferences. Centering `c` near the utilities in
    /// play avoids cancellation for small `θ` and underflow for large `θ`.
    pub fn exponential_centered(theta: f64, center: f64) -> Self {
        if theta == 0.0 {
            return Self::identity();
        }
        Self::new(
            move |t| -(-theta * (t - center)).exp_m1() / theta,
            move |z| center - (-theta * z).ln_1p() / theta,
            format!("exponential({theta}, center {center})"),
        )
    }

    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    pub fn inverse(&self, t: f64) -> f64 {
        (self.inverse)(t)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
}

impl fmt::Debug for SecondOrderTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecondOrderTransform").field("descriptor", &self.descriptor).finish()
    }
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::numeric(format!("{what} evaluated to {v}")))
    }
}

pub fn welfare_primal(society: &Society, u: &Utility, params: &WelfareParams) -> Result<f64> {
    TypeUtilities::of(society, u)?.welfare(params)
}

pub fn welfare_second_order(society: &Society, u: &Utility, transform: &SecondOrderTransform) -> Result<f64> {
    TypeUtilities::of(society, u)?.welfare_second_order(transform)
}

pub fn optimal_weights(society: &Society, u: &Utility, theta: Aversion) -> Result<WeightVector> {
    Ok(TypeUtilities::of(society, u)?.optimal_weights(theta))
}

pub fn cgf(society: &Society, u: &Utility, tau: f64) -> Result<f64> {
    Ok(TypeUtilities::of(society, u)?.cgf(tau))
}

pub fn cgf_derivative(society: &Society, u: &Utility, tau: f64) -> Result<f64> {
    Ok(TypeUtilities::of(society, u)?.cgf_derivative(tau))
}

pub fn welfare_mean_variance(society: &Society, u: &Utility, theta: f64) -> Result<f64> {
    TypeUtilities::of(society, u)?.welfare_mean_variance(theta)
}

pub fn welfare_mean_divergence(society: &Society, u: &Utility, theta: f64) -> Result<MeanDivergence> {
    TypeUtilities::of(society, u)?.welfare_mean_divergence(theta)
}

/// `Σ p·U + (1/θ)·KL(p‖q)`.
pub fn variational_objective(tu: &TypeUtilities, p: &WeightVector, theta: f64) -> Result<f64> {
    if p.len() != tu.len() {
        return Err(Error::argument("weight vector does not match the society"));
    }
    let q = WeightVector::from_parts_unchecked(tu.labels().to_vec(), tu.shares().to_vec());
    let kl = super::kl_divergence(p, &q)?;
    let linear: f64 = p.weights().iter().zip(tu.utilities()).filter(|(w, _)| **w > 0.0).map(|(w, v)| w * v).sum();
    Ok(linear + kl / theta)
}
