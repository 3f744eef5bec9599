//! Immutable domain types: income distributions, types, societies and
//! utilities, plus the axiom transformations on societies.

mod distribution;
mod society;
pub mod transform;
mod utility;

pub use distribution::{Atom, IncomeDistribution, SUM_REJECT_TOL, SUM_RENORMALIZE_TOL};
pub use society::{Society, TypeEntry};
pub use utility::{expected_utility, Utility, UtilityKind};
