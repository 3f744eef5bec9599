use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::distribution::{IncomeDistribution, SUM_REJECT_TOL, SUM_RENORMALIZE_TOL};

/// A type: a group sharing the same circumstances, with its demographic
/// share and income prospect.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeEntry {
    label: String,
    share: f64,
    dist: IncomeDistribution,
}

impl TypeEntry {
    pub fn new(label: impl Into<String>, share: f64, dist: IncomeDistribution) -> Result<Self> {
        let label = label.into();
        if !(share.is_finite() && share >= 0.0) {
            return Err(Error::validation(format!("type {label:?}: share {share} must be finite and non-negative")));
        }
        Ok(Self { label, share, dist })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn share(&self) -> f64 {
        self.share
    }

    pub fn dist(&self) -> &IncomeDistribution {
        &self.dist
    }

    /// Types with zero share are stored but never evaluated.
    pub fn is_supported(&self) -> bool {
        self.share > 0.0
    }
}

/// An opportunity profile together with its demographic distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Society {
    types: Vec<TypeEntry>,
    name: Option<String>,
}

impl Society {
    pub fn new(types: Vec<TypeEntry>, name: Option<String>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::validation("society has no types"));
        }
        let mut seen = HashSet::new();
        let dupes: Vec<&str> =
            types.iter().filter(|t| !seen.insert(t.label.as_str())).map(|t| t.label.as_str()).collect();
        if !dupes.is_empty() {
            return Err(Error::validation(format!("duplicate type labels: {}", dupes.join(", "))));
        }
        if !types.iter().any(TypeEntry::is_supported) {
            return Err(Error::validation("no type carries a positive share"));
        }
        let total: f64 = types.iter().map(|t| t.share).sum();
        if (total - 1.0).abs() > SUM_REJECT_TOL {
            let labels: Vec<&str> = types.iter().map(|t| t.label.as_str()).collect();
            return Err(Error::validation(format!(
                "shares of types [{}] sum to {total}, expected 1",
                labels.join(", ")
            )));
        }
        let mut types = types;
        if (total - 1.0).abs() > SUM_RENORMALIZE_TOL {
            for t in &mut types {
                t.share /= total;
            }
        }
        Ok(Self { types, name })
    }

    /// Convenience constructor from `(label, share, dist)` triples.
    pub fn from_parts<I, S>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64, IncomeDistribution)>,
        S: Into<String>,
    {
        let types = parts.into_iter().map(|(l, q, d)| TypeEntry::new(l, q, d)).collect::<Result<Vec<_>>>()?;
        Self::new(types, None)
    }

    /// Every type faces the same distribution `dist`.
    pub fn equal_opportunity(dist: &IncomeDistribution, shares: &[f64]) -> Result<Self> {
        Self::from_parts(shares.iter().enumerate().map(|(i, &q)| (format!("t{i}"), q, dist.clone())))
    }

    pub fn with_name(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn types(&self) -> &[TypeEntry] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Types with positive share, in storage order.
    pub fn supported(&self) -> impl Iterator<Item = &TypeEntry> + '_ {
        self.types.iter().filter(|t| t.is_supported())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.types.iter().position(|t| t.label == label)
    }

    pub fn get(&self, label: &str) -> Option<&TypeEntry> {
        self.types.iter().find(|t| t.label == label)
    }

    pub fn shares(&self) -> Vec<f64> {
        self.types.iter().map(|t| t.share).collect()
    }

    /// The population-wide income distribution `Σ_s q(s)·π_s`.
    pub fn aggregate(&self) -> IncomeDistribution {
        IncomeDistribution::mixture(self.supported().map(|t| (t.share, &t.dist)))
            .expect("mixture of a valid society is a valid distribution")
    }

    /// True when every supported type faces the same distribution.
    pub fn is_equal_opportunity(&self, tol: f64) -> bool {
        let mut it = self.supported();
        let first = it.next().expect("validated: at least one supported type");
        it.all(|t| t.dist.max_prob_gap(&first.dist) <= tol)
    }

    /// Union of all type supports (including zero-probability atoms).
    pub fn union_support(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self.types.iter().flat_map(|t| t.dist.support()).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        ys
    }

    pub(crate) fn from_types_unchecked(types: Vec<TypeEntry>, name: Option<String>) -> Self {
        Self { types, name }
    }
}
