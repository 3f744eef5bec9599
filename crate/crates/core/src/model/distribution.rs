use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability sums further than this from one are rejected.
pub const SUM_REJECT_TOL: f64 = 1e-9;
/// Probability sums further than this from one (but accepted) are renormalized.
pub const SUM_RENORMALIZE_TOL: f64 = 1e-12;

/// A single point mass of an income distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub income: f64,
    pub prob: f64,
}

/// A discrete probability measure on strictly positive incomes.
///
/// Construction canonicalizes: atoms are sorted by income, duplicate incomes
/// are merged by summing their probabilities, and a total within
/// [`SUM_REJECT_TOL`] of one is renormalized. Zero-probability atoms are kept
/// so that supports stay stable across mixtures; every expectation skips
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct IncomeDistribution {
    atoms: Vec<Atom>,
}

impl IncomeDistribution {
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<Atom> = Vec::new();
        for (i, (income, prob)) in atoms.into_iter().enumerate() {
            if !(income.is_finite() && income > 0.0) {
                return Err(Error::validation(format!(
                    "atom {i}: income {income} must be finite and strictly positive (incomes live in (0, inf))"
                )));
            }
            if !(prob.is_finite() && prob >= 0.0) {
                return Err(Error::validation(format!("atom {i}: probability {prob} must be finite and non-negative")));
            }
            raw.push(Atom { income, prob });
        }
        if raw.is_empty() {
            return Err(Error::validation("distribution has no atoms"));
        }
        raw.sort_by(|a, b| a.income.total_cmp(&b.income));

        let mut atoms: Vec<Atom> = Vec::with_capacity(raw.len());
        for a in raw {
            match atoms.last_mut() {
                Some(last) if last.income == a.income => last.prob += a.prob,
                _ => atoms.push(a),
            }
        }

        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > SUM_REJECT_TOL {
            return Err(Error::validation(format!("probabilities sum to {total}, expected 1")));
        }
        if (total - 1.0).abs() > SUM_RENORMALIZE_TOL {
            for a in &mut atoms {
                a.prob /= total;
            }
        }
        Ok(Self { atoms })
    }

    /// The point mass at `income`.
    pub fn degenerate(income: f64) -> Result<Self> {
        Self::new([(income, 1.0)])
    }

    /// Mixture `Σ w_i · dist_i` on the union support. Weights must be
    /// non-negative and sum to one.
    pub fn mixture<'a, I>(components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, &'a IncomeDistribution)>,
    {
        let mut pooled = Vec::new();
        for (w, d) in components {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::argument(format!("mixture weight {w} must be non-negative")));
            }
            pooled.extend(d.atoms.iter().map(|a| (a.income, w * a.prob)));
        }
        Self::new(pooled)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Incomes in increasing order, including zero-probability atoms.
    pub fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.income)
    }

    /// Probability of exactly `income` (zero when off the support).
    pub fn prob_of(&self, income: f64) -> f64 {
        self.atoms.binary_search_by(|a| a.income.total_cmp(&income)).map(|i| self.atoms[i].prob).unwrap_or(0.0)
    }

    /// Atoms carrying positive mass.
    pub fn charged(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.atoms.iter().filter(|a| a.prob > 0.0)
    }

    pub fn mean(&self) -> f64 {
        self.charged().map(|a| a.prob * a.income).sum()
    }

    pub fn geometric_mean(&self) -> f64 {
        self.charged().map(|a| a.prob * a.income.ln()).sum::<f64>().exp()
    }

    pub fn min_income(&self) -> f64 {
        self.charged().map(|a| a.income).fold(f64::INFINITY, f64::min)
    }

    /// Every income multiplied by `lambda`; probabilities untouched.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::argument(format!("scale factor {lambda} must be > 0")));
        }
        Self::new(self.atoms.iter().map(|a| (a.income * lambda, a.prob)))
    }

    /// Largest absolute probability difference over the union support.
    pub fn max_prob_gap(&self, other: &IncomeDistribution) -> f64 {
        let mut gap: f64 = 0.0;
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.atoms, &other.atoms);
        while i < a.len() || j < b.len() {
            let d = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.income == y.income => {
                    i += 1;
                    j += 1;
                    x.prob - y.prob
                }
                (Some(x), Some(y)) if x.income < y.income => {
                    i += 1;
                    x.prob
                }
                (Some(_), Some(y)) => {
                    j += 1;
                    y.prob
                }
                (Some(x), None) => {
                    i += 1;
                    x.prob
                }
                (None, Some(y)) => {
                    j += 1;
                    y.prob
                }
                (None, None) => unreachable!(),
            };
            gap = gap.max(d.abs());
        }
        gap
    }
}
