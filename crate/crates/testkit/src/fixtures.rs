//! Frozen oracle outputs. Regenerate with
//! `cargo run -p oppwelfare-testkit --example freeze_fixtures`.

use serde::{Deserialize, Serialize};

use oppwelfare::Utility;

use crate::generate::{generate, SocietyProfile};
use crate::oracle::{naive_cgf, naive_tilt, naive_welfare, type_utilities};

pub const GOLDEN_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/golden.json");
pub const GENERATING_COMMAND: &str = "cargo run -p oppwelfare-testkit --example freeze_fixtures";
pub const SEEDS: std::ops::Range<u64> = 0..24;
pub const THETAS: [f64; 4] = [0.01, 0.5, 2.0, 20.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCase {
    pub seed: u64,
    pub theta: f64,
    pub welfare: f64,
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
    /// `E_q[U]`, the slope of the cumulant generating function at zero.
    pub first_cumulant: f64,
    pub cgf_at_minus_theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub command: String,
    pub utility: String,
    pub cases: Vec<GoldenCase>,
}

/// Oracle outputs for every seed and aversion level, using log utility.
pub fn freeze() -> GoldenFile {
    let u = Utility::log();
    let mut cases = Vec::new();
    for seed in SEEDS {
        let s = generate(seed, &SocietyProfile::default());
        let tu = type_utilities(&s, &u);
        let q: Vec<f64> = tu.iter().map(|t| t.1).collect();
        let us: Vec<f64> = tu.iter().map(|t| t.2).collect();
        for theta in THETAS {
            cases.push(GoldenCase {
                seed,
                theta,
                welfare: naive_welfare(&q, &us, theta),
                labels: tu.iter().map(|t| t.0.clone()).collect(),
                weights: naive_tilt(&q, &us, theta),
                first_cumulant: naive_welfare(&q, &us, 0.0),
                cgf_at_minus_theta: naive_cgf(&q, &us, -theta),
            });
        }
    }
    GoldenFile { command: GENERATING_COMMAND.to_string(), utility: u.to_string(), cases }
}

pub fn load_golden() -> GoldenFile {
    let text = std::fs::read_to_string(GOLDEN_PATH).expect("golden fixture present");
    serde_json::from_str(&text).expect("golden fixture parses")
}
