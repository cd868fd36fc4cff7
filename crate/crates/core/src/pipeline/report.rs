use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EffectiveParams, PipelineConfig};
use crate::constants::PaperConstants;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = "revsq.run-report/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Precondition,
    Family,
    AbsorbingPath,
    Reservoir,
    Cover,
    Stitch,
    Close,
    Capacity,
    Absorb,
    Validate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Precondition => "precondition",
            Stage::Family => "family",
            Stage::AbsorbingPath => "absorbing-path",
            Stage::Reservoir => "reservoir",
            Stage::Cover => "cover",
            Stage::Stitch => "stitch",
            Stage::Close => "close",
            Stage::Capacity => "capacity",
            Stage::Absorb => "absorb",
            Stage::Validate => "validate",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Outcome {
    Pending,
    Success { cycle_order: usize, verified: bool },
    Failure { stage: Stage },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub absorbing_ms: f64,
    pub reservoir_ms: f64,
    pub cover_ms: f64,
    pub stitch_ms: f64,
    pub close_ms: f64,
    pub absorb_ms: f64,
}

/// What one attempt got through. Fields stay `None` for stages not reached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptReport {
    pub attempt: usize,
    pub seed: u64,
    pub family_size: Option<usize>,
    pub family_sampled: Option<usize>,
    pub family_attempts: Option<usize>,
    pub family_min_coverage: Option<usize>,
    pub overlapping_pairs: Option<usize>,
    pub absorbing_order: Option<usize>,
    pub absorbing_connector_orders: Vec<usize>,
    pub reservoir_size: Option<usize>,
    pub reservoir_attempts: Option<usize>,
    pub reservoir_certified: Option<bool>,
    pub reservoir_worst_margin: Option<f64>,
    pub cover_paths: Option<usize>,
    pub cover_merges: Option<usize>,
    pub cover_leftover: Option<usize>,
    /// Stitching connectors, then the closing one.
    pub connector_orders: Vec<usize>,
    pub reservoir_used: Option<usize>,
    pub leftover_u: Option<usize>,
    pub failed_stage: Option<Stage>,
    pub error: Option<String>,
    pub timings: StageTimings,
}

impl AttemptReport {
    pub(crate) fn new(attempt: usize, seed: u64) -> Self {
        AttemptReport {
            attempt,
            seed,
            family_size: None,
            family_sampled: None,
            family_attempts: None,
            family_min_coverage: None,
            overlapping_pairs: None,
            absorbing_order: None,
            absorbing_connector_orders: Vec::new(),
            reservoir_size: None,
            reservoir_attempts: None,
            reservoir_certified: None,
            reservoir_worst_margin: None,
            cover_paths: None,
            cover_merges: None,
            cover_leftover: None,
            connector_orders: Vec::new(),
            reservoir_used: None,
            leftover_u: None,
            failed_stage: None,
            error: None,
            timings: StageTimings::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub n: usize,
    pub arcs: usize,
    pub min_semi_degree: usize,
    /// Whether `δ⁰ ≥ (2/3 + γ)n`.
    pub meets_degree_hypothesis: bool,
    pub config: PipelineConfig,
    pub paper: PaperConstants,
    pub effective: Option<EffectiveParams>,
    pub attempts: Vec<AttemptReport>,
    pub outcome: Outcome,
}

impl RunReport {
    pub(crate) fn new(d: &Digraph, cfg: &PipelineConfig) -> Self {
        let n = d.n();
        let delta = d.min_semi_degree().unwrap_or(0);
        RunReport {
            schema: REPORT_SCHEMA.to_string(),
            n,
            arcs: d.arc_count(),
            min_semi_degree: delta,
            meets_degree_hypothesis: delta as f64 >= (2.0 / 3.0 + cfg.gamma) * n as f64 - 1e-9,
            config: cfg.clone(),
            paper: PaperConstants::new(n, cfg.gamma),
            effective: None,
            attempts: Vec::new(),
            outcome: Outcome::Pending,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: RunReport =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("report: {e}")))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::InvalidInput(format!(
                "unknown report schema {}",
                r.schema
            )));
        }
        Ok(r)
    }

    /// The report with wall-clock fields zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> RunReport {
        let mut r = self.clone();
        for a in &mut r.attempts {
            a.timings = StageTimings::default();
        }
        r
    }
}
