//! Opportunity-sensitive social welfare for discrete societies.
//!
//! A society is a finite set of types, each with a demographic share and an
//! income distribution. Welfare aggregates type expected utilities through
//! an exponential transform indexed by the inequality-of-opportunity
//! aversion `θ ∈ [0, ∞]`, running from the utilitarian sum (`θ = 0`) to the
//! maximin over types (`θ = ∞`).
//!
//! * [`model`]: distributions, societies, utilities, axiom transformations
//! * [`engine`]: welfare by four equivalent routes, normative weights, KL and
//!   Bregman divergences, the cumulant generating function
//! * [`indices`]: EDEIs and the decomposition `(1 − I) = (1 − I^R)(1 − I^O)`
//! * [`dominance`]: comparisons over the full aversion range
//! * [`io`], [`report`]: micro-data ingestion, society files, report output
//!
//! ```
//! use oppwelfare::{inequality_report, Aversion, IncomeDistribution, Society, Utility};
//!
//! let society = Society::from_parts([
//!     ("rich parents", 0.2, IncomeDistribution::new([(1.0, 0.1), (2.0, 0.9)])?),
//!     ("poor parents", 0.8, IncomeDistribution::new([(1.0, 0.6), (2.0, 0.4)])?),
//! ])?;
//! let report = inequality_report(&society, &Utility::log(), Aversion::finite(1.0)?)?;
//! assert!(report.opportunity > 0.0);
//! assert!(((1.0 - report.overall) - (1.0 - report.social_risks) * (1.0 - report.opportunity)).abs() < 1e-12);
//! # Ok::<(), oppwelfare::Error>(())
//! ```

pub mod dominance;
pub mod engine;
pub mod error;
pub mod indices;
pub mod io;
pub mod model;
pub mod report;

pub use dominance::{compare, dominance_ca_family, dominance_check, DominanceVerdict, Relation};
pub use engine::{
    optimal_weights, welfare_mean_divergence, welfare_mean_variance, welfare_primal, welfare_second_order,
    welfare_variational, Aversion, TypeUtilities, WeightVector, WelfareParams,
};
pub use error::{Error, Result};
pub use indices::{atkinson_edei, edei, inequality_report, InequalityReport};
pub use model::{IncomeDistribution, Society, TypeEntry, Utility};
