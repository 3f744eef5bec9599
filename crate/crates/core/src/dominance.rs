//! Opportunity stochastic dominance: does society A weakly beat society B
//! for every inequality-of-opportunity aversion `θ ∈ [0, ∞]`?
//!
//! The aversion range is swept in `ρ = exp(−θ) ∈ [0, 1]`, so both ends are
//! evaluated exactly (`ρ = 1` utilitarian, `ρ = 0` maximin). As a second,
//! independent check the comparison can be run against the family of
//! completely alternating transforms `φ_r(z) = (1 − e^{−rz})/r` plus the
//! linear transform.

use serde::{Deserialize, Serialize};

use crate::engine::{Aversion, TypeUtilities, WelfareParams};
use crate::error::{Error, Result};
use crate::model::{Society, Utility};

/// Margins within this band are treated as ties.
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 101;
/// Crossings are bracketed to this width in `ρ`.
pub const CROSSING_WIDTH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Dominates,
    Dominated,
    Equivalent,
    Crossing,
}

impl Relation {
    /// Classifies a sequence of differences `A − B`.
    pub fn classify<I: IntoIterator<Item = f64>>(diffs: I, tol: f64) -> Self {
        let (mut pos, mut neg) = (false, false);
        for d in diffs {
            if d > tol {
                pos = true;
            } else if d < -tol {
                neg = true;
            }
        }
        match (pos, neg) {
            (false, false) => Relation::Equivalent,
            (true, false) => Relation::Dominates,
            (false, true) => Relation::Dominated,
            (true, true) => Relation::Crossing,
        }
    }

    /// The relation seen from the other side.
    pub fn reversed(self) -> Self {
        match self {
            Relation::Dominates => Relation::Dominated,
            Relation::Dominated => Relation::Dominates,
            r => r,
        }
    }

    /// A is weakly better than B everywhere.
    pub fn weakly_dominates(self) -> bool {
        matches!(self, Relation::Dominates | Relation::Equivalent)
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Relation::Dominates => "dominates",
            Relation::Dominated => "dominated",
            Relation::Equivalent => "equivalent",
            Relation::Crossing => "crossing",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginPoint {
    pub rho: f64,
    pub theta: Aversion,
    /// `V(A) − V(B)`
    pub margin: f64,
}

/// `ρ` interval bracketing a sign change of the margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub rho_low: f64,
    pub rho_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaCheck {
    /// Curvature of `φ_r`; `None` for the linear transform.
    pub r: Option<f64>,
    /// `Σ q·φ(U_A) − Σ q'·φ(U_B)`
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaFamilyResult {
    pub relation: Relation,
    pub checks: Vec<CaCheck>,
    /// Curvatures at which A falls short of B; the linear case is `0`.
    pub violations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub relation: Relation,
    pub tol: f64,
    /// Constant added to `u` so that it is non-negative on both supports.
    pub utility_shift: f64,
    pub points: Vec<MarginPoint>,
    pub crossings: Vec<Crossing>,
    pub ca_family: Option<CaFamilyResult>,
}

impl DominanceVerdict {
    pub fn margins(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.margin)
    }
}

/// Shifts `u` by `b = max(0, −min u)` over the union of both supports. The
/// shift is common to both societies so it leaves every margin unchanged.
pub fn normalize_utility_for_dominance(u: &Utility, a: &Society, b: &Society) -> Result<Utility> {
    let lowest = a
        .union_support()
        .into_iter()
        .chain(b.union_support())
        .map(|y| u.value(y))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let shift = (-lowest).max(0.0);
    if shift == 0.0 {
        Ok(u.clone())
    } else {
        Utility::affine(u.clone(), 1.0, shift)
    }
}

fn shift_of(u: &Utility, normalized: &Utility) -> f64 {
    match normalized.kind() {
        crate::model::UtilityKind::Affine { shift, .. } if normalized != u => *shift,
        _ => 0.0,
    }
}

/// `ρ_i = i/(n − 1)` for `i = 0 … n − 1`.
pub fn rho_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::argument(format!("grid needs at least 2 points, got {n}")));
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

struct Pair {
    a: TypeUtilities,
    b: TypeUtilities,
}

impl Pair {
    fn margin(&self, rho: f64) -> Result<f64> {
        let params = WelfareParams::new(Aversion::from_rho(rho)?);
        Ok(self.a.welfare(&params)? - self.b.welfare(&params)?)
    }
}

pub fn dominance_check(a: &Society, b: &Society, u: &Utility, grid_size: usize, tol: f64) -> Result<DominanceVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::argument(format!("tolerance must be >= 0, got {tol}")));
    }
    let grid = rho_grid(grid_size)?;
    let un = normalize_utility_for_dominance(u, a, b)?;
    let pair = Pair { a: TypeUtilities::of(a, &un)?, b: TypeUtilities::of(b, &un)? };

    let points = grid
        .iter()
        .map(|&rho| Ok(MarginPoint { rho, theta: Aversion::from_rho(rho)?, margin: pair.margin(rho)? }))
        .collect::<Result<Vec<_>>>()?;
    let relation = Relation::classify(points.iter().map(|p| p.margin), tol);

    let mut crossings = Vec::new();
    if relation == Relation::Crossing {
        let signed: Vec<(f64, f64)> =
            points.iter().filter(|p| p.margin.abs() > tol).map(|p| (p.rho, p.margin)).collect();
        for w in signed.windows(2) {
            if w[0].1.signum() != w[1].1.signum() {
                crossings.push(bracket(&pair, w[0], w[1])?);
            }
        }
    }

    Ok(DominanceVerdict { relation, tol, utility_shift: shift_of(u, &un), points, crossings, ca_family: None })
}

/// Bisects between two grid points of opposite sign.
fn bracket(pair: &Pair, lo: (f64, f64), hi: (f64, f64)) -> Result<Crossing> {
    let (mut a, mut b) = (lo.0, hi.0);
    let sign_a = lo.1 > 0.0;
    while b - a > CROSSING_WIDTH {
        let mid = 0.5 * (a + b);
        if (pair.margin(mid)? > 0.0) == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Crossing { rho_low: a, rho_high: b })
}

/// 25 log-spaced curvatures from 10⁻³ to 10³.
pub fn default_r_values() -> Vec<f64> {
    (0..25).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 24.0)).collect()
}

/// Checks `Σ q·φ(U_A) ≥ Σ q'·φ(U_B)` for the linear transform and every
/// `φ_r(z) = (1 − e^{−rz})/r`. Utilities are translated so that the lowest
/// type utility across both societies is zero; the class of transforms is
/// closed under translation, so this changes no comparison.
pub fn dominance_ca_family(
    a: &Society,
    b: &Society,
    u: &Utility,
    r_values: &[f64],
    tol: f64,
) -> Result<CaFamilyResult> {
    if let Some(r) = r_values.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::argument(format!("curvature r must be positive, got {r}")));
    }
    let ta = TypeUtilities::of(a, u)?;
    let tb = TypeUtilities::of(b, u)?;
    let floor = ta.min_utility().min(tb.min_utility());

    let sum =
        |tu: &TypeUtilities, phi: &dyn Fn(f64) -> f64| -> f64 { tu.supported().map(|(q, v)| q * phi(v - floor)).sum() };

    let mut checks = Vec::with_capacity(r_values.len() + 1);
    let linear = |z: f64| z;
    checks.push(CaCheck { r: None, difference: sum(&ta, &linear) - sum(&tb, &linear) });
    for &r in r_values {
        let phi = move |z: f64| -(-r * z).exp_m1() / r;
        checks.push(CaCheck { r: Some(r), difference: sum(&ta, &phi) - sum(&tb, &phi) });
    }
    let relation = Relation::classify(checks.iter().map(|c| c.difference), tol);
    let violations = checks.iter().filter(|c| c.difference < -tol).map(|c| c.r.unwrap_or(0.0)).collect();
    Ok(CaFamilyResult { relation, checks, violations })
}

/// Grid verdict with the completely-alternating family attached.
pub fn compare(
    a: &Society,
    b: &Society,
    u: &Utility,
    grid_size: usize,
    tol: f64,
    r_values: &[f64],
) -> Result<DominanceVerdict> {
    let mut verdict = dominance_check(a, b, u, grid_size, tol)?;
    let un = normalize_utility_for_dominance(u, a, b)?;
    verdict.ca_family = Some(dominance_ca_family(a, b, &un, r_values, tol)?);
    Ok(verdict)
}
