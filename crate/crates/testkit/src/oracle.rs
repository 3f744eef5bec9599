//! Brute-force reference computations. Nothing here calls the engine's
//! welfare, weight or cumulant routines; only the data model is shared.

use std::fmt;

use oppwelfare::model::expected_utility;
use oppwelfare::{Society, Utility};

/// Supported `(label, share, expected utility)` triples.
pub fn type_utilities(society: &Society, u: &Utility) -> Vec<(String, f64, f64)> {
    society
        .supported()
        .map(|t| {
            let eu = expected_utility(t.dist(), u).expect("utility defined on support");
            (t.label().to_string(), t.share(), eu)
        })
        .collect()
}

/// `−(1/θ)·ln Σ q·exp(−θU)` with a max shift; `E_q[U]` at `θ = 0` and
/// `min U` at `θ = ∞`.
pub fn naive_welfare(shares: &[f64], utils: &[f64], theta: f64) -> f64 {
    if theta == 0.0 {
        return shares.iter().zip(utils).map(|(q, u)| q * u).sum();
    }
    let lo = utils.iter().copied().fold(f64::INFINITY, f64::min);
    if theta.is_infinite() {
        return lo;
    }
    let s: f64 = shares.iter().zip(utils).map(|(q, u)| q * (-theta * (u - lo)).exp()).sum();
    lo - s.ln() / theta
}

/// Exponentially tilted weights `q·exp(−θU) / Σ q·exp(−θU)`.
pub fn naive_tilt(shares: &[f64], utils: &[f64], theta: f64) -> Vec<f64> {
    let lo = utils.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = shares.iter().zip(utils).map(|(q, u)| q * (-theta * (u - lo)).exp()).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / z).collect()
}

/// `ln Σ q·exp(τU)`.
pub fn naive_cgf(shares: &[f64], utils: &[f64], tau: f64) -> f64 {
    let pivot = if tau >= 0.0 {
        utils.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        utils.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let s: f64 = shares.iter().zip(utils).map(|(q, u)| q * (tau * (u - pivot)).exp()).sum();
    tau * pivot + s.ln()
}

/// `Σ p·U + (1/θ)·KL(p‖q)` with `0·ln 0 = 0`.
pub fn objective(p: &[f64], shares: &[f64], utils: &[f64], theta: f64) -> f64 {
    let mut linear = 0.0;
    let mut kl = 0.0;
    for ((&pi, &qi), &ui) in p.iter().zip(shares).zip(utils) {
        linear += pi * ui;
        if pi > 0.0 {
            kl += pi * (pi / qi).ln();
        }
    }
    linear + kl / theta
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooManyTypes(usize),
    GridTooCoarse(usize),
    BadTheta(f64),
    BadStep(f64),
    UnknownType(String),
    UnknownIncome(f64),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyTypes(n) => {
                write!(f, "{n} supported types; the grid oracle handles at most 3, use mirror descent")
            }
            OracleError::GridTooCoarse(n) => write!(f, "grid of {n} points per dimension is below 1000"),
            OracleError::BadTheta(t) => write!(f, "aversion {t} must be finite and positive"),
            OracleError::BadStep(h) => write!(f, "step {h} outside [1e-7, 1e-3]"),
            OracleError::UnknownType(s) => write!(f, "no supported type {s:?}"),
            OracleError::UnknownIncome(y) => write!(f, "income {y} is not in the support"),
        }
    }
}

impl std::error::Error for OracleError {}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMinimum {
    pub value: f64,
    /// Indexed like `Society::supported`.
    pub weights: Vec<f64>,
    /// Largest objective change between adjacent grid points near the
    /// minimizer. The continuous minimum lies within this of `value`.
    pub modulus: f64,
}

/// Exhaustive minimization of the variational objective over the rational
/// grid `{k/n}` on the simplex of supported types.
pub fn oracle_variational_grid(
    society: &Society,
    u: &Utility,
    theta: f64,
    grid_per_dim: usize,
) -> Result<GridMinimum, OracleError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(OracleError::BadTheta(theta));
    }
    if grid_per_dim < 1000 {
        return Err(OracleError::GridTooCoarse(grid_per_dim));
    }
    let tu = type_utilities(society, u);
    if tu.len() > 3 {
        return Err(OracleError::TooManyTypes(tu.len()));
    }
    let q: Vec<f64> = tu.iter().map(|t| t.1).collect();
    let us: Vec<f64> = tu.iter().map(|t| t.2).collect();
    let n = grid_per_dim;
    let step = 1.0 / n as f64;
    let f = |p: &[f64]| objective(p, &q, &us, theta);

    match tu.len() {
        1 => Ok(GridMinimum { value: us[0], weights: vec![1.0], modulus: 0.0 }),
        2 => {
            let point = |i: usize| [i as f64 * step, (n - i) as f64 * step];
            let (best, value) = (0..=n).map(|i| (i, f(&point(i)))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            let lo = best.saturating_sub(2);
            let hi = (best + 2).min(n);
            let modulus = (lo..hi).map(|i| (f(&point(i + 1)) - f(&point(i))).abs()).fold(0.0, f64::max);
            Ok(GridMinimum { value, weights: point(best).to_vec(), modulus })
        }
        _ => {
            let point = |i: usize, j: usize| [i as f64 * step, j as f64 * step, (n - i - j) as f64 * step];
            let mut best = (0, 0);
            let mut value = f64::INFINITY;
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let v = f(&point(i, j));
                    if v < value {
                        value = v;
                        best = (i, j);
                    }
                }
            }
            let mut modulus: f64 = 0.0;
            let (bi, bj) = (best.0 as isize, best.1 as isize);
            let inside = |i: isize, j: isize| i >= 0 && j >= 0 && (i + j) as usize <= n;
            for di in -2..=2 {
                for dj in -2..=2 {
                    let (i, j) = (bi + di, bj + dj);
                    if !inside(i, j) {
                        continue;
                    }
                    let here = f(&point(i as usize, j as usize));
                    for (ei, ej) in [(1, 0), (0, 1), (1, -1)] {
                        if inside(i + ei, j + ej) {
                            let there = f(&point((i + ei) as usize, (j + ej) as usize));
                            modulus = modulus.max((there - here).abs());
                        }
                    }
                }
            }
            Ok(GridMinimum { value, weights: point(best.0, best.1).to_vec(), modulus })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FdTarget {
    /// `∂V/∂U_s` for the named type; compare with the optimal weight.
    TypeUtility(String),
    /// `∂V/∂u(y)`; compare with `Σ_s p⋆(s)·π_s(y)`.
    UtilityAt(f64),
    /// `dK/dτ` at the given `τ`; compare with the tilted mean.
    Cgf(f64),
}

/// Central finite difference of welfare or the cumulant generating function,
/// evaluated with the brute-force formulas above.
pub fn oracle_finite_difference(
    target: &FdTarget,
    society: &Society,
    u: &Utility,
    theta: f64,
    h: f64,
) -> Result<f64, OracleError> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(OracleError::BadStep(h));
    }
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(OracleError::BadTheta(theta));
    }
    let tu = type_utilities(society, u);
    let q: Vec<f64> = tu.iter().map(|t| t.1).collect();
    let us: Vec<f64> = tu.iter().map(|t| t.2).collect();
    match target {
        FdTarget::TypeUtility(label) => {
            let k = tu.iter().position(|t| &t.0 == label).ok_or_else(|| OracleError::UnknownType(label.clone()))?;
            let bumped = |d: f64| {
                let mut v = us.clone();
                v[k] += d;
                naive_welfare(&q, &v, theta)
            };
            Ok((bumped(h) - bumped(-h)) / (2.0 * h))
        }
        FdTarget::UtilityAt(y) => {
            let support = society.union_support();
            if !support.contains(y) {
                return Err(OracleError::UnknownIncome(*y));
            }
            let welfare_with = |d: f64| {
                let table = support
                    .iter()
                    .map(|&z| (z, u.value(z).expect("utility defined on support") + if z == *y { d } else { 0.0 }));
                let bumped = Utility::tabulated(table).expect("bump keeps the table increasing");
                let v: Vec<f64> = type_utilities(society, &bumped).iter().map(|t| t.2).collect();
                naive_welfare(&q, &v, theta)
            };
            Ok((welfare_with(h) - welfare_with(-h)) / (2.0 * h))
        }
        FdTarget::Cgf(tau) => Ok((naive_cgf(&q, &us, tau + h) - naive_cgf(&q, &us, tau - h)) / (2.0 * h)),
    }
}

/// `Σ_s p(s)·π_s(y)` for weights indexed like `Society::supported`.
pub fn weighted_mass_at(society: &Society, weights: &[f64], y: f64) -> f64 {
    society.supported().zip(weights).map(|(t, w)| w * t.dist().prob_of(y)).sum()
}
