use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::distribution::IncomeDistribution;

/// Von Neumann-Morgenstern utility of income.
#[derive(Debug, Clone, PartialEq)]
pub struct Utility {
    kind: UtilityKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityKind {
    /// `ln y`
    Log,
    /// `y^σ`, σ > 0
    Power(f64),
    /// `a·base(y) + b`, a > 0
    Affine { base: Box<Utility>, scale: f64, shift: f64 },
    /// Explicit `(income, utility)` pairs, strictly increasing in both.
    Tabulated(Vec<(f64, f64)>),
}

impl Utility {
    pub fn log() -> Self {
        Self { kind: UtilityKind::Log }
    }

    pub fn power(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::argument(format!("power utility needs sigma > 0, got {sigma}")));
        }
        Ok(Self { kind: UtilityKind::Power(sigma) })
    }

    pub fn affine(base: Utility, scale: f64, shift: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::argument(format!("affine utility needs a > 0, got {scale}")));
        }
        if !shift.is_finite() {
            return Err(Error::argument(format!("affine shift {shift} is not finite")));
        }
        Ok(Self { kind: UtilityKind::Affine { base: Box::new(base), scale, shift } })
    }

    pub fn tabulated<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut table: Vec<(f64, f64)> = pairs.into_iter().collect();
        if table.is_empty() {
            return Err(Error::argument("utility table is empty"));
        }
        if table.iter().any(|(y, v)| !(y.is_finite() && *y > 0.0 && v.is_finite())) {
            return Err(Error::argument("utility table needs finite positive incomes and finite values"));
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in table.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::argument(format!(
                    "utility table must be strictly increasing: ({}, {}) then ({}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { kind: UtilityKind::Tabulated(table) })
    }

    /// Tabulates `self` on `incomes`.
    pub fn tabulate(&self, incomes: &[f64]) -> Result<Self> {
        let pairs = incomes.iter().map(|&y| self.value(y).map(|v| (y, v))).collect::<Result<Vec<_>>>()?;
        Self::tabulated(pairs)
    }

    pub fn kind(&self) -> &UtilityKind {
        &self.kind
    }

    pub fn is_log(&self) -> bool {
        matches!(self.kind, UtilityKind::Log)
    }

    /// True when `u` is increasing and weakly concave by construction
    /// (log, power with σ ≤ 1, and positive affine maps of those).
    pub fn is_concave(&self) -> bool {
        match &self.kind {
            UtilityKind::Log => true,
            UtilityKind::Power(s) => *s <= 1.0,
            UtilityKind::Affine { base, .. } => base.is_concave(),
            UtilityKind::Tabulated(t) => t.windows(3).all(|w| {
                let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                s2 <= s1
            }),
        }
    }

    pub fn value(&self, y: f64) -> Result<f64> {
        match &self.kind {
            UtilityKind::Log => Ok(y.ln()),
            UtilityKind::Power(s) => Ok(y.powf(*s)),
            UtilityKind::Affine { base, scale, shift } => Ok(scale * base.value(y)? + shift),
            UtilityKind::Tabulated(t) => t
                .binary_search_by(|p| p.0.total_cmp(&y))
                .map(|i| t[i].1)
                .map_err(|_| Error::domain(format!("utility table has no entry for income {y}"))),
        }
    }

    /// `u⁻¹(v)`. Tables are inverted by piecewise-linear interpolation and
    /// fail outside their range.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::domain(format!("cannot invert utility at non-finite value {v}")));
        }
        match &self.kind {
            UtilityKind::Log => Ok(v.exp()),
            UtilityKind::Power(s) => {
                if v <= 0.0 {
                    Err(Error::domain(format!("power utility takes only positive values, got {v}")))
                } else {
                    Ok(v.powf(1.0 / s))
                }
            }
            UtilityKind::Affine { base, scale, shift } => base.inverse((v - shift) / scale),
            UtilityKind::Tabulated(t) => {
                let (lo, hi) = (t[0], t[t.len() - 1]);
                if v < lo.1 || v > hi.1 {
                    return Err(Error::domain(format!("utility {v} outside tabulated range [{}, {}]", lo.1, hi.1)));
                }
                let k = t.partition_point(|p| p.1 < v);
                if t[k].1 == v {
                    return Ok(t[k].0);
                }
                let (a, b) = (t[k - 1], t[k]);
                Ok(a.0 + (v - a.1) * (b.0 - a.0) / (b.1 - a.1))
            }
        }
    }
}

impl Default for Utility {
    fn default() -> Self {
        Self::log()
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            UtilityKind::Log => write!(f, "log"),
            UtilityKind::Power(s) => write!(f, "power:{s}"),
            UtilityKind::Affine { base, scale, shift } => write!(f, "{scale}*({base})+{shift}"),
            UtilityKind::Tabulated(t) => write!(f, "table[{}]", t.len()),
        }
    }
}

impl FromStr for Utility {
    type Err = Error;

    /// Parses `log` or `power:<sigma>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("log") {
            return Ok(Self::log());
        }
        if let Some(rest) = s.strip_prefix("power:") {
            let sigma: f64 = rest.parse().map_err(|_| Error::argument(format!("cannot parse sigma in {s:?}")))?;
            return Self::power(sigma);
        }
        Err(Error::argument(format!("unknown utility {s:?}; expected `log` or `power:<sigma>`")))
    }
}

/// `U(π) = Σ π(y)·u(y)` over atoms with positive mass.
pub fn expected_utility(dist: &IncomeDistribution, u: &Utility) -> Result<f64> {
    dist.charged().map(|a| u.value(a.income).map(|v| a.prob * v)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_utility_examples() {
        let rich = IncomeDistribution::new([(1.0, 0.1), (2.0, 0.9)]).unwrap();
        let poor = IncomeDistribution::new([(1.0, 0.6), (2.0, 0.4)]).unwrap();
        let v = expected_utility(&rich, &Utility::log()).unwrap();
        assert!((v - 0.9 * 2f64.ln()).abs() < 1e-15);
        assert!((v - 0.6238325).abs() < 1e-7);
        let lin = Utility::power(1.0).unwrap();
        assert!((expected_utility(&poor, &lin).unwrap() - 1.4).abs() < 1e-12);
        let d = IncomeDistribution::degenerate(7.0).unwrap();
        assert_eq!(expected_utility(&d, &Utility::power(0.5).unwrap()).unwrap(), 7f64.sqrt());
    }

    #[test]
    fn constructors_validate() {
        assert!(Utility::power(0.0).is_err());
        assert!(Utility::power(-1.0).is_err());
        assert!(Utility::affine(Utility::log(), 0.0, 1.0).is_err());
        assert!(Utility::tabulated([(1.0, 2.0), (2.0, 1.0)]).is_err());
        assert!(Utility::tabulated([(1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn table_lookup_and_inverse() {
        let t = Utility::tabulated([(1.0, 0.0), (3.0, 1.0), (4.0, 3.0)]).unwrap();
        assert_eq!(t.value(3.0).unwrap(), 1.0);
        assert!(matches!(t.value(2.0), Err(Error::Domain(_))));
        assert_eq!(t.inverse(0.5).unwrap(), 2.0);
        assert_eq!(t.inverse(3.0).unwrap(), 4.0);
        assert_eq!(t.inverse(0.0).unwrap(), 1.0);
        assert!(t.inverse(3.5).is_err());
        let d = IncomeDistribution::new([(1.0, 0.5), (2.0, 0.5)]).unwrap();
        assert!(expected_utility(&d, &t).is_err());
    }

    #[test]
    fn inverses_round_trip() {
        let us = [Utility::log(), Utility::power(0.5).unwrap(), Utility::affine(Utility::log(), 2.0, -1.0).unwrap()];
        for u in &us {
            for y in [0.1, 1.0, 2.5, 90.0] {
                let back = u.inverse(u.value(y).unwrap()).unwrap();
                assert!((back - y).abs() < 1e-12 * y, "{u}: {y} -> {back}");
            }
        }
        assert!(Utility::power(2.0).unwrap().inverse(-1.0).is_err());
    }

    #[test]
    fn parse() {
        assert!("log".parse::<Utility>().unwrap().is_log());
        assert_eq!("power:0.5".parse::<Utility>().unwrap(), Utility::power(0.5).unwrap());
        assert!("power:-2".parse::<Utility>().is_err());
        assert!("cara".parse::<Utility>().is_err());
    }

    #[test]
    fn concavity_flags() {
        assert!(Utility::log().is_concave());
        assert!(!Utility::power(2.0).unwrap().is_concave());
        assert!(Utility::tabulated([(1.0, 0.0), (2.0, 1.0), (3.0, 1.5)]).unwrap().is_concave());
    }
}
