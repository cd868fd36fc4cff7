use serde::{Deserialize, Serialize};

use crate::absorbing::{FamilyParams, OverlapRule};
use crate::connecting::ConnectParams;
use crate::constants::{floor_tol, PaperConstants};
use crate::error::{Error, Result};

/// Run configuration. With `paper_scale` the verbatim constants are used
/// (and are vacuous below astronomically large `n`); otherwise the desk
/// overrides below apply.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub gamma: f64,
    pub paper_scale: bool,
    pub seed: u64,
    /// Smallest order the pipeline accepts.
    pub min_n: usize,
    /// Whole-run retries with derived seeds.
    pub retries: usize,

    /// Expected sampled 4-tuples per vertex.
    pub family_tuples_per_vertex: f64,
    /// Coverage floor as a fraction of `n` (at least 1).
    pub coverage_fraction: f64,
    pub family_overlap: OverlapRule,
    pub family_retries: usize,

    /// Reservoir size `max(reservoir_min, ⌈ρn⌉)`.
    pub reservoir_fraction: f64,
    pub reservoir_min: usize,
    pub reservoir_retries: usize,
    /// Fail the stage when no draw passes the degree certificate.
    pub require_certified_reservoir: bool,

    /// Path budget `max(1, ⌈path_fraction · n⌉)`.
    pub path_fraction: f64,
    /// Leftover budget `⌈leftover_fraction · n⌉`.
    pub leftover_fraction: f64,

    /// Connector caps; `None` means `⌊8/γ⌋` and `⌊16/γ⌋`.
    pub absorbing_connector_cap: Option<usize>,
    pub reservoir_connector_cap: Option<usize>,

    pub connect: ConnectParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            gamma: 0.1,
            paper_scale: false,
            seed: 0,
            min_n: 30,
            retries: 4,
            family_tuples_per_vertex: 0.6,
            coverage_fraction: 0.0,
            family_overlap: OverlapRule::KeepFirst,
            family_retries: 20,
            reservoir_fraction: 0.05,
            reservoir_min: 3,
            reservoir_retries: 3,
            require_certified_reservoir: false,
            path_fraction: 0.05,
            leftover_fraction: 0.05,
            absorbing_connector_cap: None,
            reservoir_connector_cap: None,
            connect: ConnectParams::default(),
        }
    }
}

/// Parameters actually in force for one digraph order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub family: FamilyParams,
    pub reservoir_size: usize,
    pub reservoir_retries: usize,
    pub require_certified_reservoir: bool,
    pub reservoir_forbidden_budget: usize,
    pub path_budget: usize,
    pub leftover_budget: usize,
    pub absorbing_connector_cap: usize,
    pub reservoir_connector_cap: usize,
}

impl PipelineConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.connect_params().validate()?;
        let positive = [
            self.family_tuples_per_vertex,
            self.reservoir_fraction,
            self.path_fraction,
        ];
        if positive.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidInput(
                "desk fractions must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.coverage_fraction)
            || !(0.0..=1.0).contains(&self.leftover_fraction)
        {
            return Err(Error::InvalidInput("fractions must lie in [0, 1]".into()));
        }
        if self.absorbing_connector_cap.is_some_and(|c| c < 4)
            || self.reservoir_connector_cap.is_some_and(|c| c < 4)
        {
            return Err(Error::InvalidInput(
                "connector caps must be at least 4".into(),
            ));
        }
        Ok(())
    }

    /// The connection parameters with `gamma` taken from this config.
    pub fn connect_params(&self) -> ConnectParams {
        let mut p = self.connect.clone();
        p.gamma = self.gamma;
        p
    }

    pub fn effective(&self, n: usize) -> EffectiveParams {
        let g = self.gamma;
        let c = PaperConstants::new(n, g);
        let absorbing_connector_cap = self
            .absorbing_connector_cap
            .unwrap_or(floor_tol(c.absorbing_connector_order))
            .min(n);
        let reservoir_connector_cap = self
            .reservoir_connector_cap
            .unwrap_or(floor_tol(c.reservoir_connector_order));
        if self.paper_scale {
            return EffectiveParams {
                family: FamilyParams::paper(n, g, self.family_retries),
                reservoir_size: c.reservoir_size,
                reservoir_retries: self.reservoir_retries,
                require_certified_reservoir: true,
                reservoir_forbidden_budget: floor_tol(c.reservoir_forbidden),
                path_budget: floor_tol(c.cover_paths),
                leftover_budget: floor_tol(c.cover_leftover),
                absorbing_connector_cap,
                reservoir_connector_cap,
            };
        }
        let mut family = FamilyParams::desk(
            n,
            self.family_tuples_per_vertex,
            self.coverage_fraction,
            self.family_retries,
        );
        family.overlap = self.family_overlap;
        let reservoir_size = self
            .reservoir_min
            .max(ceil_tol(self.reservoir_fraction * n as f64));
        EffectiveParams {
            family,
            reservoir_size,
            reservoir_retries: self.reservoir_retries,
            require_certified_reservoir: self.require_certified_reservoir,
            reservoir_forbidden_budget: reservoir_size,
            path_budget: ceil_tol(self.path_fraction * n as f64).max(1),
            leftover_budget: ceil_tol(self.leftover_fraction * n as f64),
            absorbing_connector_cap,
            reservoir_connector_cap,
        }
    }
}

fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}
