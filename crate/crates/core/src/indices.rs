//! Equally-distributed equivalent incomes and the multiplicative split of
//! overall inequality into social risks and inequality of opportunity:
//!
//! ```text
//! (1 − I) = (1 − I^R) · (1 − I^O)
//! I   = 1 − ξ_θ / μ(π)      overall
//! I^R = 1 − ξ_u(π) / μ(π)   social risks (Atkinson index of the aggregate)
//! I^O = 1 − ξ_θ / ξ_u(π)    inequality of opportunity
//! ```

use serde::{Deserialize, Serialize};

use crate::engine::{Aversion, TypeUtilities, WelfareParams};
use crate::error::{Error, Result};
use crate::model::{expected_utility, IncomeDistribution, Society, Utility};

/// Tolerance on the re-verified multiplicative decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theta: Aversion,
    /// `exp(−θ)`
    pub rho: f64,
    pub welfare: f64,
    /// `ξ_{θ,u}`
    pub edei: f64,
    /// `ξ_u(π)` of the aggregate distribution
    pub atkinson_edei: f64,
    /// `μ(π)`
    pub mean_income: f64,
    /// `I`
    pub overall: f64,
    /// `I^R`
    pub social_risks: f64,
    /// `I^O`
    pub opportunity: f64,
}

/// `u⁻¹(V_{θ,u})`: the income which, given to everybody, yields the same
/// welfare.
pub fn edei(society: &Society, u: &Utility, theta: Aversion) -> Result<f64> {
    let v = TypeUtilities::of(society, u)?.welfare(&WelfareParams::new(theta))?;
    edei_of(society, u, theta, v)
}

// Without aversion the society and its equal-opportunity counterfactual are
// evaluated identically, so both EDEIs come from the aggregate.
pub(crate) fn edei_of(society: &Society, u: &Utility, theta: Aversion, welfare: f64) -> Result<f64> {
    if theta == Aversion::ZERO {
        atkinson_edei(&society.aggregate(), u)
    } else {
        u.inverse(welfare)
    }
}

/// Atkinson's EDEI `u⁻¹(Σ π(y)·u(y))` of a single distribution.
pub fn atkinson_edei(dist: &IncomeDistribution, u: &Utility) -> Result<f64> {
    u.inverse(expected_utility(dist, u)?)
}

pub fn inequality_report(society: &Society, u: &Utility, theta: Aversion) -> Result<InequalityReport> {
    inequality_report_with(society, u, &WelfareParams::new(theta))
}

pub fn inequality_report_with(society: &Society, u: &Utility, params: &WelfareParams) -> Result<InequalityReport> {
    let aggregate = society.aggregate();
    let mean_income = aggregate.mean();
    let atkinson = atkinson_edei(&aggregate, u)?;
    let welfare = TypeUtilities::of(society, u)?.welfare(params)?;
    let edei = edei_of(society, u, params.theta, welfare)?;

    let overall = 1.0 - edei / mean_income;
    let social_risks = 1.0 - atkinson / mean_income;
    let opportunity = 1.0 - edei / atkinson;

    let gap = ((1.0 - overall) - (1.0 - social_risks) * (1.0 - opportunity)).abs();
    if !(gap <= DECOMPOSITION_TOL) {
        return Err(Error::numeric(format!(
            "decomposition identity off by {gap:e} (I = {overall}, I_R = {social_risks}, I_O = {opportunity})"
        )));
    }
    Ok(InequalityReport {
        theta: params.theta,
        rho: params.theta.rho(),
        welfare,
        edei,
        atkinson_edei: atkinson,
        mean_income,
        overall,
        social_risks,
        opportunity,
    })
}
