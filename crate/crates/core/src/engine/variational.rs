//! Welfare as the value of a KL-penalized minimization over type weights,
//! solved iteratively by exponentiated-gradient (entropic mirror) descent.
//!
//! The objective `H(p) = Σ p·U + (1/θ)·KL(p‖q)` is minimized over the
//! simplex restricted to `supp(q)`. Iterates are kept in log-ratio form
//! `x_s = ln(p_s/q_s)`, which keeps them strictly inside the face spanned by
//! `supp(q)` and makes the KL term exact to evaluate.

use crate::engine::{TypeUtilities, WeightVector};
use crate::error::{Error, Result};
use crate::model::{Society, Utility};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalOptions {
    pub max_iter: usize,
    /// Stop once the estimated distance of every weight from the fixed
    /// point, `p_s·|Δx_s − E_p[Δx]| / η`, falls below this.
    pub tol: f64,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self { max_iter: 50_000, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalSolution {
    pub value: f64,
    pub weights: WeightVector,
    pub iterations: usize,
}

impl TypeUtilities {
    pub fn welfare_variational(&self, theta: f64, opts: &VariationalOptions) -> Result<VariationalSolution> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::argument(format!("variational form needs finite theta > 0, got {theta}")));
        }
        let idx: Vec<usize> = (0..self.len()).filter(|&i| self.shares()[i] > 0.0).collect();
        if idx.is_empty() {
            return Err(Error::validation("society has no supported types"));
        }
        let q: Vec<f64> = idx.iter().map(|&i| self.shares()[i]).collect();
        let u: Vec<f64> = idx.iter().map(|&i| self.utilities()[i]).collect();
        let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // Step on the θ-scaled objective θ·H, whose KL part has unit curvature.
        let eta = 1.0 / (1.0 + theta * (hi - lo));

        let mut x = vec![0.0; q.len()];
        let mut p = q.clone();
        let mut iterations = 0;
        let mut converged = false;
        let mut residual = f64::INFINITY;
        while iterations < opts.max_iter {
            iterations += 1;
            // ∇(θH)_s = θ·U_s + x_s + 1; the constant drops out on normalization.
            let mut next: Vec<f64> = x.iter().zip(&u).map(|(xs, us)| xs - eta * (theta * (us - lo) + xs)).collect();
            normalize_log_ratios(&mut next, &q);
            let p_next: Vec<f64> = q.iter().zip(&next).map(|(qs, xs)| qs * xs.exp()).collect();
            // x_{k+1} − x_k = −η·(x_k − x*) up to a constant, so the step
            // divided by η estimates the remaining log-ratio error.
            let mean_step: f64 = p_next.iter().zip(next.iter().zip(&x)).map(|(pn, (xn, xo))| pn * (xn - xo)).sum();
            residual = p_next
                .iter()
                .zip(next.iter().zip(&x))
                .map(|(pn, (xn, xo))| pn * (xn - xo - mean_step).abs())
                .fold(0.0, f64::max)
                / eta;
            x = next;
            p = p_next;
            if residual < opts.tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::numeric(format!(
                "mirror descent did not converge in {} iterations (theta = {theta}); estimated weight error = {residual:e}",
                opts.max_iter
            )));
        }

        let kl: f64 = p.iter().zip(&x).filter(|(ps, _)| **ps > 0.0).map(|(ps, xs)| ps * xs).sum();
        let linear: f64 = p.iter().zip(&u).map(|(ps, us)| ps * (us - lo)).sum();
        let value = lo + linear + kl.max(0.0) / theta;

        let mut weights = vec![0.0; self.len()];
        for (k, &i) in idx.iter().enumerate() {
            weights[i] = p[k];
        }
        Ok(VariationalSolution {
            value,
            weights: WeightVector::from_parts_unchecked(self.labels().to_vec(), weights),
            iterations,
        })
    }
}

/// Shifts `x` so that `Σ q·e^x = 1`.
fn normalize_log_ratios(x: &mut [f64], q: &[f64]) {
    let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = q.iter().zip(x.iter()).map(|(qs, xs)| qs * (xs - top).exp()).sum();
    let shift = top + z.ln();
    for xs in x.iter_mut() {
        *xs -= shift;
    }
}

pub fn welfare_variational(
    society: &Society,
    u: &Utility,
    theta: f64,
    opts: &VariationalOptions,
) -> Result<VariationalSolution> {
    TypeUtilities::of(society, u)?.welfare_variational(theta, opts)
}
