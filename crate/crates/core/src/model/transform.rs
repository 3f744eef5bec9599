//! Society transformations used to state and test the welfare axioms:
//! rescaling incomes, permuting rows, pulling two rows towards their
//! midpoint, and splitting/merging types with identical prospects.

use crate::error::{Error, Result};
use crate::model::distribution::IncomeDistribution;
use crate::model::society::{Society, TypeEntry};

/// Multiplies every income in every type by `lambda`.
pub fn transform_scale(society: &Society, lambda: f64) -> Result<Society> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::argument(format!("scale factor {lambda} must be > 0")));
    }
    let types = society
        .types()
        .iter()
        .map(|t| TypeEntry::new(t.label(), t.share(), t.dist().scaled(lambda)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Society::from_types_unchecked(types, society.name().map(String::from)))
}

/// Row `i` of the result carries the distribution of row `permutation[i]`.
/// Labels and shares stay with their positions.
pub fn transform_permute(society: &Society, permutation: &[usize]) -> Result<Society> {
    let n = society.len();
    if permutation.len() != n {
        return Err(Error::argument(format!("permutation has {} entries for {n} types", permutation.len())));
    }
    let mut hit = vec![false; n];
    for &j in permutation {
        if j >= n || std::mem::replace(&mut hit[j], true) {
            return Err(Error::argument(format!("{permutation:?} is not a bijection on 0..{n}")));
        }
    }
    let types = society
        .types()
        .iter()
        .zip(permutation)
        .map(|(t, &j)| TypeEntry::new(t.label(), t.share(), society.types()[j].dist().clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Society::from_types_unchecked(types, society.name().map(String::from)))
}

/// Replaces rows `a` and `b` by `α·π + (1−α)·m`, where `m` is the midpoint of
/// the two rows. `α = 0` replaces both by their average.
pub fn transform_converge(society: &Society, a: &str, b: &str, alpha: f64) -> Result<Society> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::argument(format!("alpha {alpha} must lie in [0, 1)")));
    }
    if a == b {
        return Err(Error::argument("converging a type with itself"));
    }
    let ia = society.index_of(a).ok_or_else(|| Error::argument(format!("unknown type {a:?}")))?;
    let ib = society.index_of(b).ok_or_else(|| Error::argument(format!("unknown type {b:?}")))?;
    let (da, db) = (society.types()[ia].dist(), society.types()[ib].dist());
    let mid = IncomeDistribution::mixture([(0.5, da), (0.5, db)])?;
    let new_a = IncomeDistribution::mixture([(alpha, da), (1.0 - alpha, &mid)])?;
    let new_b = IncomeDistribution::mixture([(alpha, db), (1.0 - alpha, &mid)])?;

    let mut types = society.types().to_vec();
    types[ia] = TypeEntry::new(a, types[ia].share(), new_a)?;
    types[ib] = TypeEntry::new(b, types[ib].share(), new_b)?;
    Ok(Society::from_types_unchecked(types, society.name().map(String::from)))
}

/// Splits type `label` into `label.a` and `label.b` with shares `w_a`, `w_b`
/// and the original distribution. The new rows take the original position.
pub fn split_type(society: &Society, label: &str, w_a: f64, w_b: f64) -> Result<Society> {
    let i = society.index_of(label).ok_or_else(|| Error::argument(format!("unknown type {label:?}")))?;
    let t = &society.types()[i];
    if !(w_a >= 0.0 && w_b >= 0.0) || (w_a + w_b - t.share()).abs() > 1e-12 {
        return Err(Error::argument(format!(
            "split fractions ({w_a}, {w_b}) must be non-negative and sum to the share {}",
            t.share()
        )));
    }
    let (la, lb) = (format!("{label}.a"), format!("{label}.b"));
    if society.get(&la).is_some() || society.get(&lb).is_some() {
        return Err(Error::argument(format!("labels {la:?}/{lb:?} already in use")));
    }
    let mut types = society.types().to_vec();
    types.splice(i..=i, [TypeEntry::new(la, w_a, t.dist().clone())?, TypeEntry::new(lb, w_b, t.dist().clone())?]);
    Society::new(types, society.name().map(String::from))
}

/// Merges types `a` and `b` into a single type `merged` at `a`'s position.
/// Fails unless the two distributions agree within `tol` on the union
/// support. The merged distribution is the share-weighted mixture.
pub fn merge_pair(society: &Society, a: &str, b: &str, merged: &str, tol: f64) -> Result<Society> {
    if a == b {
        return Err(Error::argument("merging a type with itself"));
    }
    let ia = society.index_of(a).ok_or_else(|| Error::argument(format!("unknown type {a:?}")))?;
    let ib = society.index_of(b).ok_or_else(|| Error::argument(format!("unknown type {b:?}")))?;
    let (ta, tb) = (&society.types()[ia], &society.types()[ib]);
    let gap = ta.dist().max_prob_gap(tb.dist());
    if gap > tol {
        return Err(Error::argument(format!(
            "types {a:?} and {b:?} differ by {gap} > {tol}; only identical prospects merge"
        )));
    }
    let merged_entry = merge_entries(merged, ta, tb)?;
    let mut types = Vec::with_capacity(society.len() - 1);
    for (k, t) in society.types().iter().enumerate() {
        if k == ia {
            types.push(merged_entry.clone());
        } else if k != ib {
            types.push(t.clone());
        }
    }
    Society::new(types, society.name().map(String::from))
}

/// Repeatedly merges every group of types whose distributions agree within
/// `tol`. The first label of each group survives.
pub fn merge_identical(society: &Society, tol: f64) -> Result<Society> {
    let mut out: Vec<TypeEntry> = Vec::new();
    for t in society.types() {
        match out.iter_mut().find(|o| o.dist().max_prob_gap(t.dist()) <= tol) {
            Some(o) => *o = merge_entries(o.label().to_string().as_str(), o, t)?,
            None => out.push(t.clone()),
        }
    }
    Society::new(out, society.name().map(String::from))
}

fn merge_entries(label: &str, a: &TypeEntry, b: &TypeEntry) -> Result<TypeEntry> {
    let share = a.share() + b.share();
    let dist = if a.dist() == b.dist() || share == 0.0 {
        a.dist().clone()
    } else {
        IncomeDistribution::mixture([(a.share() / share, a.dist()), (b.share() / share, b.dist())])?
    };
    TypeEntry::new(label, share, dist)
}
