use crate::engine::WeightVector;
use crate::error::{Error, Result};

/// `D_KL(p‖q) = Σ p·ln(p/q)` with `0·ln 0 = 0`. Requires `p ≪ q`.
pub fn kl_divergence(p: &WeightVector, q: &WeightVector) -> Result<f64> {
    if p.labels() != q.labels() {
        return Err(Error::argument("KL divergence between vectors over different types"));
    }
    let mut total = 0.0;
    for ((label, pi), qi) in p.iter().zip(q.weights()) {
        if pi == 0.0 {
            continue;
        }
        if *qi == 0.0 {
            return Err(Error::domain(format!(
                "p({label}) = {pi} > 0 where q({label}) = 0: p is not absolutely continuous w.r.t. q"
            )));
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total.max(0.0))
}

/// `φ(x) − φ(y) − (x − y)·φ'(y)` for a differentiable convex generator.
pub fn bregman_divergence<F, D>(value: F, derivative: D, x: f64, y: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if x == y {
        return 0.0;
    }
    value(x) - value(y) - (x - y) * derivative(y)
}
