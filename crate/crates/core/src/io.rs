//! Building societies from micro-data and reading/writing society files.
//!
//! Micro-data is CSV with header `type,income[,weight]`. Society files are
//! JSON documents:
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "name": "example",
//!   "types": [
//!     { "label": "R", "share": 0.2,
//!       "distribution": [ { "income": 1.0, "prob": 0.1 }, { "income": 2.0, "prob": 0.9 } ] }
//!   ]
//! }
//! ```

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{IncomeDistribution, Society, TypeEntry};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub struct MicroRecord {
    pub type_label: String,
    pub income: f64,
    pub weight: f64,
}

impl MicroRecord {
    pub fn new(type_label: impl Into<String>, income: f64, weight: f64) -> Self {
        Self { type_label: type_label.into(), income, weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binning {
    /// One atom per distinct observed income.
    Exact,
    /// Pooled population-weighted quantile bins.
    Quantile(usize),
}

impl std::str::FromStr for Binning {
    type Err = Error;

    /// `exact` or `quantile:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Binning::Exact);
        }
        if let Some(k) = s.strip_prefix("quantile:") {
            let k: usize = k.parse().map_err(|_| Error::argument(format!("cannot parse bin count in {s:?}")))?;
            if k == 0 {
                return Err(Error::argument("quantile binning needs k >= 1"));
            }
            return Ok(Binning::Quantile(k));
        }
        Err(Error::argument(format!("unknown binning {s:?}; expected `exact` or `quantile:<k>`")))
    }
}

/// Reads `type,income[,weight]` rows. Errors name the 1-based data row.
pub fn read_microdata_csv<R: Read>(reader: R) -> Result<Vec<MicroRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse { path: "header".into(), message: e.to_string() })?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_weight = match names.as_slice() {
        ["type", "income"] => false,
        ["type", "income", "weight"] => true,
        _ => {
            return Err(Error::Parse {
                path: "header".into(),
                message: format!("expected `type,income[,weight]`, got `{}`", names.join(",")),
            })
        }
    };

    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let parse_err = |message: String| Error::Parse { path: format!("row {row}"), message };
        let rec = rec.map_err(|e| parse_err(e.to_string()))?;
        let label = rec.get(0).unwrap_or_default().to_string();
        if label.is_empty() {
            return Err(parse_err("empty type label".into()));
        }
        let income: f64 = rec
            .get(1)
            .unwrap_or_default()
            .parse()
            .map_err(|_| parse_err(format!("income {:?} is not a number", rec.get(1).unwrap_or_default())))?;
        let weight: f64 = if has_weight {
            rec.get(2)
                .unwrap_or_default()
                .parse()
                .map_err(|_| parse_err(format!("weight {:?} is not a number", rec.get(2).unwrap_or_default())))?
        } else {
            1.0
        };
        out.push(MicroRecord::new(label, income, weight));
    }
    Ok(out)
}

/// Builds a society: `q(s)` is the weight share of type `s`, `π_s` its
/// within-type weighted income distribution (after binning). Types appear
/// in order of first occurrence.
pub fn ingest_microdata<I>(records: I, binning: Binning) -> Result<Society>
where
    I: IntoIterator<Item = MicroRecord>,
{
    let mut order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<(f64, f64)>> = HashMap::new();
    for (i, r) in records.into_iter().enumerate() {
        let row = i + 1;
        if !(r.income.is_finite() && r.income > 0.0) {
            return Err(Error::validation(format!("row {row}: income {} must be > 0", r.income)));
        }
        if !(r.weight.is_finite() && r.weight > 0.0) {
            return Err(Error::validation(format!("row {row}: weight {} must be > 0", r.weight)));
        }
        rows.entry(r.type_label.clone())
            .or_insert_with(|| {
                order.push(r.type_label.clone());
                Vec::new()
            })
            .push((r.income, r.weight));
    }
    if order.is_empty() {
        return Err(Error::validation("no micro-data records"));
    }

    let binned: Vec<LabelledAtoms> = match binning {
        Binning::Exact => order
            .into_iter()
            .map(|l| {
                let v = rows.remove(&l).unwrap_or_default();
                (l, v)
            })
            .collect(),
        Binning::Quantile(k) => quantile_bins(order, rows, k)?,
    };

    let grand: f64 = binned.iter().flat_map(|(_, v)| v.iter().map(|p| p.1)).sum();
    let types = binned
        .into_iter()
        .map(|(label, atoms)| {
            let total: f64 = atoms.iter().map(|p| p.1).sum();
            let dist = IncomeDistribution::new(atoms.into_iter().map(|(y, w)| (y, w / total)))?;
            TypeEntry::new(label, total / grand, dist)
        })
        .collect::<Result<Vec<_>>>()?;
    Society::new(types, None)
}

type LabelledAtoms = (String, Vec<(f64, f64)>);

/// Replaces each type's observations by one atom per pooled quantile bin,
/// located at the type's weighted mean income within that bin.
fn quantile_bins(
    order: Vec<String>,
    mut rows: HashMap<String, Vec<(f64, f64)>>,
    k: usize,
) -> Result<Vec<LabelledAtoms>> {
    if k == 0 {
        return Err(Error::argument("quantile binning needs k >= 1"));
    }
    let mut pooled: Vec<(f64, f64)> = rows.values().flatten().copied().collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pooled.iter().map(|p| p.1).sum();

    // Upper cut of bin j is the smallest income whose cumulative weight
    // share reaches (j + 1)/k.
    let mut cuts = Vec::with_capacity(k.saturating_sub(1));
    let mut cum = 0.0;
    let mut it = pooled.iter().peekable();
    for j in 1..k {
        let level = total * j as f64 / k as f64;
        while let Some(&&(y, w)) = it.peek() {
            if cum + w >= level {
                cuts.push(y);
                break;
            }
            cum += w;
            it.next();
        }
    }
    let bin_of = |y: f64| cuts.partition_point(|&c| c < y);

    Ok(order
        .into_iter()
        .map(|label| {
            let obs = rows.remove(&label).unwrap_or_default();
            let mut mass = vec![0.0; k];
            let mut moment = vec![0.0; k];
            for (y, w) in obs {
                let b = bin_of(y);
                mass[b] += w;
                moment[b] += w * y;
            }
            let atoms = mass.iter().zip(&moment).filter(|(m, _)| **m > 0.0).map(|(m, s)| (s / m, *m)).collect();
            (label, atoms)
        })
        .collect())
}

#[derive(Serialize)]
struct DocAtom {
    income: f64,
    prob: f64,
}

#[derive(Serialize)]
struct DocType<'a> {
    label: &'a str,
    share: f64,
    distribution: Vec<DocAtom>,
}

#[derive(Serialize)]
struct Doc<'a> {
    schema_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    types: Vec<DocType<'a>>,
}

/// Serializes a society as a schema-1 JSON document.
pub fn society_to_json(society: &Society) -> String {
    let doc = Doc {
        schema_version: SCHEMA_VERSION,
        name: society.name(),
        types: society
            .types()
            .iter()
            .map(|t| DocType {
                label: t.label(),
                share: t.share(),
                distribution: t.dist().atoms().iter().map(|a| DocAtom { income: a.income, prob: a.prob }).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("society documents always serialize");
    s.push('\n');
    s
}

fn perr(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(path, format!("missing field `{key}`")))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| perr(path, "expected a number"))
}

fn detail(e: &Error) -> String {
    match e {
        Error::Validation(m) | Error::Argument(m) | Error::Domain(m) | Error::Numeric(m) | Error::Io(m) => m.clone(),
        Error::Parse { path, message } => format!("{path}: {message}"),
    }
}

/// Parses and validates a schema-1 society document.
pub fn society_from_json(text: &str) -> Result<Society> {
    let root: Value = serde_json::from_str(text).map_err(|e| perr("", e.to_string()))?;
    let obj = root.as_object().ok_or_else(|| perr("", "expected an object"))?;
    match field(obj, "schema_version", "/schema_version")? {
        Value::String(v) if v == SCHEMA_VERSION => {}
        other => return Err(perr("/schema_version", format!("expected \"{SCHEMA_VERSION}\", got {other}"))),
    }
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(perr("/name", "expected a string")),
    };
    let types = field(obj, "types", "/types")?.as_array().ok_or_else(|| perr("/types", "expected an array"))?;

    let mut entries = Vec::with_capacity(types.len());
    let mut bad: Vec<String> = Vec::new();
    for (i, t) in types.iter().enumerate() {
        let base = format!("/types/{i}");
        let t = t.as_object().ok_or_else(|| perr(&base, "expected an object"))?;
        let label = field(t, "label", &format!("{base}/label"))?
            .as_str()
            .ok_or_else(|| perr(&format!("{base}/label"), "expected a string"))?
            .to_string();
        let share = number(field(t, "share", &format!("{base}/share"))?, &format!("{base}/share"))?;
        let dist = field(t, "distribution", &format!("{base}/distribution"))?
            .as_array()
            .ok_or_else(|| perr(&format!("{base}/distribution"), "expected an array"))?;
        let mut atoms = Vec::with_capacity(dist.len());
        for (j, a) in dist.iter().enumerate() {
            let ap = format!("{base}/distribution/{j}");
            let a = a.as_object().ok_or_else(|| perr(&ap, "expected an object"))?;
            let y = number(field(a, "income", &format!("{ap}/income"))?, &format!("{ap}/income"))?;
            let p = number(field(a, "prob", &format!("{ap}/prob"))?, &format!("{ap}/prob"))?;
            atoms.push((y, p));
        }
        let entry = IncomeDistribution::new(atoms).map_err(|e| (format!("{base}/distribution"), e)).and_then(|d| {
            let at = if share.is_finite() && share >= 0.0 { "label" } else { "share" };
            TypeEntry::new(label.clone(), share, d).map_err(|e| (format!("{base}/{at}"), e))
        });
        match entry {
            Ok(e) => entries.push(e),
            Err((at, e)) => bad.push(format!("{at} ({label}): {}", detail(&e))),
        }
    }
    if !bad.is_empty() {
        return Err(Error::validation(format!("invalid types: {}", bad.join("; "))));
    }
    Society::new(entries, name)
}

pub fn load_society(path: impl AsRef<Path>) -> Result<Society> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    society_from_json(&text)
}

pub fn save_society(society: &Society, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, society_to_json(society)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
