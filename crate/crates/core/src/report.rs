//! Serializable outputs and their deterministic JSON / CSV encodings.
//!
//! JSON keys follow struct field order; floats are written as the shortest
//! decimal that parses back to the same `f64`. CSV uses the same float
//! formatting and `inf` for the maximin endpoint.

use serde::{Deserialize, Serialize};

use crate::dominance::DominanceVerdict;
use crate::engine::{Aversion, TypeUtilities, WelfareParams};
use crate::error::{Error, Result};
use crate::indices::{inequality_report, InequalityReport};
use crate::model::{Society, Utility};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeWeight {
    pub label: String,
    pub share: f64,
    pub weight: f64,
}

/// Welfare, EDEI, normative weights and the efficiency / inequality of
/// opportunity split at a single `θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub utility: String,
    pub theta: Aversion,
    pub rho: f64,
    pub welfare: f64,
    pub edei: f64,
    /// `E_q[U]`
    pub efficiency: f64,
    /// Welfare loss from inequality of opportunity.
    pub iop_term: f64,
    pub weights: Vec<TypeWeight>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsReport {
    pub theta: Aversion,
    pub rho: f64,
    pub weights: Vec<TypeWeight>,
}

fn type_weights(tu: &TypeUtilities, theta: Aversion) -> Vec<TypeWeight> {
    let w = tu.optimal_weights(theta);
    tu.labels()
        .iter()
        .zip(tu.shares())
        .zip(w.weights())
        .map(|((label, &share), &weight)| TypeWeight { label: label.clone(), share, weight })
        .collect()
}

pub fn evaluate(society: &Society, u: &Utility, theta: Aversion) -> Result<EvaluationReport> {
    let tu = TypeUtilities::of(society, u)?;
    let welfare = tu.welfare(&WelfareParams::new(theta))?;
    let efficiency = tu.mean();
    let iop_term = match theta {
        Aversion::Finite(t) if t > 0.0 => tu.welfare_mean_divergence(t)?.iop_term,
        Aversion::Finite(_) => 0.0,
        Aversion::Infinite => efficiency - welfare,
    };
    Ok(EvaluationReport {
        utility: u.to_string(),
        theta,
        rho: theta.rho(),
        welfare,
        edei: crate::indices::edei_of(society, u, theta, welfare)?,
        efficiency,
        iop_term,
        weights: type_weights(&tu, theta),
    })
}

pub fn weights_report(society: &Society, u: &Utility, theta: Aversion) -> Result<WeightsReport> {
    let tu = TypeUtilities::of(society, u)?;
    Ok(WeightsReport { theta, rho: theta.rho(), weights: type_weights(&tu, theta) })
}

/// Inequality reports over `n` equally spaced `ρ ∈ [0, 1]` (maximin first).
pub fn sweep(society: &Society, u: &Utility, n: usize) -> Result<Vec<InequalityReport>> {
    crate::dominance::rho_grid(n)?
        .into_iter()
        .map(|rho| inequality_report(society, u, Aversion::from_rho(rho)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::argument(format!("unknown format {s:?}; expected json or csv"))),
        }
    }
}

/// A report with a tabular rendering.
pub trait Tabular {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

const SWEEP_HEADER: [&str; 7] = ["theta", "rho", "welfare", "edei", "I", "I_R", "I_O"];

fn sweep_row(r: &InequalityReport) -> Vec<String> {
    vec![
        num(r.theta.value()),
        num(r.rho),
        num(r.welfare),
        num(r.edei),
        num(r.overall),
        num(r.social_risks),
        num(r.opportunity),
    ]
}

impl Tabular for InequalityReport {
    fn csv_header(&self) -> Vec<&'static str> {
        SWEEP_HEADER.to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![sweep_row(self)]
    }
}

impl Tabular for Vec<InequalityReport> {
    fn csv_header(&self) -> Vec<&'static str> {
        SWEEP_HEADER.to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.iter().map(sweep_row).collect()
    }
}

impl Tabular for DominanceVerdict {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["theta", "rho", "margin"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.points.iter().map(|p| vec![num(p.theta.value()), num(p.rho), num(p.margin)]).collect()
    }
}

impl Tabular for EvaluationReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["theta", "rho", "welfare", "edei", "efficiency", "iop_term"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            num(self.theta.value()),
            num(self.rho),
            num(self.welfare),
            num(self.edei),
            num(self.efficiency),
            num(self.iop_term),
        ]]
    }
}

impl Tabular for WeightsReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["label", "share", "weight"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.weights.iter().map(|w| vec![w.label.clone(), num(w.share), num(w.weight)]).collect()
    }
}

pub fn emit_report<R: Serialize + Tabular>(report: &R, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_vec_pretty(report).map_err(|e| Error::numeric(format!("cannot encode report: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(report.csv_header()).map_err(io)?;
            for row in report.csv_rows() {
                w.write_record(&row).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
    }
}
