//! Monte Carlo runs of the individual construction steps and of the whole pipeline.
//!
//! Each trial builds its own instance from a per-trial seed, so results do
//! not depend on scheduling. Reports are tab-separated with `#` header and
//! aggregate lines.

use std::fmt::Write as _;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::absorbing::{sample_family, FamilyParams};
use crate::connecting::{connect_traced, ConnectParams, Route};
use crate::constants::PaperConstants;
use crate::digraph::{gen_complete, gen_extremal, gen_random_semidegree, is_rs_path, Arc, Digraph};
use crate::error::{Error, Result};
use crate::oracle::bf_count_absorbers;
use crate::pathcover::greedy_path_cover;
use crate::pipeline::{find_rs_hamiltonian, validate_run, PipelineConfig};
use crate::reservoir::sample_reservoir;
use crate::rng::{derive_seed, seeded};

pub const EXPERIMENT_SCHEMA: &str = "revsq.experiment/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Connect,
    AbsorberCount,
    Family,
    Reservoir,
    Cover,
    Pipeline,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Connect => "connect",
            Target::AbsorberCount => "absorber-count",
            Target::Family => "family",
            Target::Reservoir => "reservoir",
            Target::Cover => "cover",
            Target::Pipeline => "pipeline",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [
            Target::Connect,
            Target::AbsorberCount,
            Target::Family,
            Target::Reservoir,
            Target::Cover,
            Target::Pipeline,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| Error::InvalidInput(format!("unknown experiment target {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Random { n: usize, delta: f64 },
    Extremal { k: usize },
    Complete { n: usize },
}

impl Instance {
    pub fn build(&self, seed: u64) -> Result<Digraph> {
        match *self {
            Instance::Random { n, delta } => gen_random_semidegree(n, delta, seed),
            Instance::Extremal { k } => gen_extremal(k),
            Instance::Complete { n } => Ok(gen_complete(n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub target: Target,
    pub instance: Instance,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Worker threads; `None` uses all cores.
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub paper_scale: bool,
    /// Reservoir size as a fraction of `n`.
    #[serde(default = "default_rho")]
    pub reservoir_fraction: f64,
    #[serde(default = "default_reservoir_retries")]
    pub reservoir_retries: usize,
    #[serde(default = "default_cover_paths")]
    pub path_budget: usize,
    #[serde(default = "default_cover_leftover")]
    pub leftover_fraction: f64,
    #[serde(default)]
    pub connect: Option<ConnectParams>,
    #[serde(default)]
    pub pipeline: Option<PipelineConfig>,
}

fn default_gamma() -> f64 {
    0.1
}
fn default_rho() -> f64 {
    0.05
}
fn default_reservoir_retries() -> usize {
    3
}
fn default_cover_paths() -> usize {
    10
}
fn default_cover_leftover() -> f64 {
    0.02
}

impl ExperimentSpec {
    pub fn new(target: Target, instance: Instance, trials: usize) -> Self {
        ExperimentSpec {
            target,
            instance,
            trials,
            seed: 0,
            gamma: default_gamma(),
            jobs: None,
            paper_scale: false,
            reservoir_fraction: default_rho(),
            reservoir_retries: default_reservoir_retries(),
            path_budget: default_cover_paths(),
            leftover_fraction: default_cover_leftover(),
            connect: None,
            pipeline: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let s: ExperimentSpec =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("spec: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trial count must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidInput("jobs must be positive".into()));
        }
        self.connect_params()?;
        Ok(())
    }

    fn connect_params(&self) -> Result<ConnectParams> {
        let mut p = match &self.connect {
            Some(p) => p.clone(),
            None => {
                let mut p = ConnectParams::new(self.gamma)?;
                // measure the cascade route, not the order-4 shortcut
                p.direct_first = false;
                p
            }
        };
        p.gamma = self.gamma;
        p.validate()?;
        Ok(p)
    }
}

/// Result table of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub target: Target,
    pub spec: ExperimentSpec,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub aggregates: Vec<(String, String)>,
}

struct Trial {
    ok: bool,
    cells: Vec<String>,
}

fn columns(target: Target) -> &'static [&'static str] {
    match target {
        Target::Connect => &[
            "trial",
            "seed",
            "ok",
            "verified",
            "order",
            "route",
            "out_heavy",
            "in_heavy",
        ],
        Target::AbsorberCount => &["trial", "seed", "ok", "min_count", "min_vertex", "floor"],
        Target::Family => &[
            "trial",
            "seed",
            "ok",
            "sampled",
            "members",
            "overlapping_pairs",
            "min_coverage",
        ],
        Target::Reservoir => &[
            "trial",
            "seed",
            "ok",
            "draws",
            "worst_vertex",
            "worst_margin",
        ],
        Target::Cover => &[
            "trial", "seed", "ok", "paths", "merges", "leftover", "verified",
        ],
        Target::Pipeline => &[
            "trial",
            "seed",
            "ok",
            "verified",
            "attempts",
            "failed_stage",
            "cycle_order",
        ],
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let run = || -> Vec<Result<Trial>> {
        (0..spec.trials)
            .into_par_iter()
            .map(|i| run_trial(spec, i))
            .collect()
    };
    let results = match spec.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(run),
        None => run(),
    };
    let trials = results.into_iter().collect::<Result<Vec<_>>>()?;
    let aggregates = aggregate(spec, &trials);
    Ok(ExperimentReport {
        target: spec.target,
        spec: spec.clone(),
        columns: columns(spec.target).iter().map(|s| s.to_string()).collect(),
        rows: trials.into_iter().map(|t| t.cells).collect(),
        aggregates,
    })
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn run_trial(spec: &ExperimentSpec, i: usize) -> Result<Trial> {
    let seed = derive_seed(spec.seed, i as u64);
    let d = spec.instance.build(seed)?;
    let n = d.n();
    let head = |ok: bool| vec![i.to_string(), seed.to_string(), (ok as u8).to_string()];
    let trial = match spec.target {
        Target::Connect => {
            let p = spec.connect_params()?;
            let (ab, cd) = random_disjoint_arcs(&d, derive_seed(seed, 1))?;
            match connect_traced(&d, ab, cd, &d.empty_set(), &p) {
                Ok((path, tr)) => {
                    let verified = is_rs_path(&d, path.verts())?
                        && path.first_end_arc() == ab
                        && path.last_end_arc() == cd;
                    let route = match tr.route {
                        Route::Direct => "direct",
                        Route::SameHeavy => "same-heavy",
                        Route::DistinctHeavy => "distinct-heavy",
                        Route::ExactSearch => "exact",
                    };
                    let mut c = head(verified);
                    c.extend([
                        (verified as u8).to_string(),
                        path.len().to_string(),
                        route.to_string(),
                        opt(tr.out_heavy_level),
                        opt(tr.in_heavy_level),
                    ]);
                    Trial {
                        ok: verified,
                        cells: c,
                    }
                }
                Err(_) => {
                    let mut c = head(false);
                    c.extend(["0", "-", "failed", "-", "-"].map(String::from));
                    Trial {
                        ok: false,
                        cells: c,
                    }
                }
            }
        }
        Target::AbsorberCount => {
            let floor = PaperConstants::new(n, spec.gamma).absorber_count_floor;
            let floor = (floor - 1e-9).ceil() as u64;
            let mut best = (u64::MAX, 0);
            for v in 0..n {
                let c = bf_count_absorbers(&d, v)?;
                if c < best.0 {
                    best = (c, v);
                }
            }
            let ok = best.0 >= floor;
            let mut c = head(ok);
            c.extend([best.0.to_string(), best.1.to_string(), floor.to_string()]);
            Trial { ok, cells: c }
        }
        Target::Family => {
            let mut fp = if spec.paper_scale {
                FamilyParams::paper(n, spec.gamma, 0)
            } else {
                let cfg = spec.pipeline.clone().unwrap_or_default();
                cfg.effective(n).family
            };
            // a statistic of the raw draw: accept whatever comes out
            fp.coverage_floor = 0;
            fp.size_cap = usize::MAX;
            fp.retries = 0;
            match sample_family(&d, &fp, derive_seed(seed, 1)) {
                Ok(f) => {
                    let mut c = head(true);
                    c.extend([
                        f.sampled.to_string(),
                        f.len().to_string(),
                        f.overlapping_pairs.to_string(),
                        opt(f.min_coverage().map(|m| m.1)),
                    ]);
                    Trial { ok: true, cells: c }
                }
                // only an empty family ends here
                Err(_) => {
                    let mut c = head(false);
                    c.extend(["-", "0", "-", "0"].map(String::from));
                    Trial {
                        ok: false,
                        cells: c,
                    }
                }
            }
        }
        Target::Reservoir => {
            let size = ((spec.reservoir_fraction * n as f64 - 1e-9).ceil() as usize).max(1);
            match sample_reservoir(
                &d,
                &d.empty_set(),
                size,
                spec.gamma,
                derive_seed(seed, 1),
                spec.reservoir_retries,
            ) {
                Ok(r) => {
                    let mut c = head(true);
                    c.extend([
                        r.attempts().to_string(),
                        r.worst_vertex().to_string(),
                        r.worst_margin().to_string(),
                    ]);
                    Trial { ok: true, cells: c }
                }
                Err(Error::ReservoirFailure {
                    attempts,
                    worst_vertex,
                    worst_margin,
                }) => {
                    let mut c = head(false);
                    c.extend([
                        attempts.to_string(),
                        worst_vertex.to_string(),
                        worst_margin.to_string(),
                    ]);
                    Trial {
                        ok: false,
                        cells: c,
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Target::Cover => {
            let p = spec.connect_params()?;
            let leftover = (spec.leftover_fraction * n as f64 + 1e-9).floor() as usize;
            match greedy_path_cover(&d, spec.path_budget, leftover, derive_seed(seed, 1), &p) {
                Ok(cov) => {
                    let verified = cov
                        .paths
                        .iter()
                        .all(|q| is_rs_path(&d, q.verts()).unwrap_or(false));
                    let mut c = head(verified);
                    c.extend([
                        cov.paths.len().to_string(),
                        cov.merges.to_string(),
                        cov.leftover.count_ones(..).to_string(),
                        (verified as u8).to_string(),
                    ]);
                    Trial {
                        ok: verified,
                        cells: c,
                    }
                }
                Err(Error::CoverFailure {
                    paths, leftover, ..
                }) => {
                    let mut c = head(false);
                    c.extend([
                        paths.to_string(),
                        "-".into(),
                        leftover.to_string(),
                        "-".into(),
                    ]);
                    Trial {
                        ok: false,
                        cells: c,
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Target::Pipeline => {
            let mut cfg = spec.pipeline.clone().unwrap_or_default();
            cfg.gamma = spec.gamma;
            cfg.paper_scale |= spec.paper_scale;
            cfg.seed = derive_seed(seed, 1);
            match find_rs_hamiltonian(&d, &cfg) {
                Ok((cyc, r)) => {
                    let verified = validate_run(&d, &cyc);
                    let mut c = head(verified);
                    c.extend([
                        (verified as u8).to_string(),
                        r.attempts.len().to_string(),
                        "-".into(),
                        cyc.len().to_string(),
                    ]);
                    Trial {
                        ok: verified,
                        cells: c,
                    }
                }
                Err(f) => {
                    let mut c = head(false);
                    c.extend([
                        "0".into(),
                        f.report.attempts.len().to_string(),
                        f.stage.to_string(),
                        "-".into(),
                    ]);
                    Trial {
                        ok: false,
                        cells: c,
                    }
                }
            }
        }
    };
    Ok(trial)
}

/// Two vertex-disjoint arcs drawn uniformly by rejection.
pub fn random_disjoint_arcs(d: &Digraph, seed: u64) -> Result<(Arc, Arc)> {
    let arcs: Vec<(usize, usize)> = d.arcs().collect();
    if arcs.is_empty() {
        return Err(Error::Precondition("digraph has no arcs".into()));
    }
    let mut rng = seeded(seed);
    for _ in 0..10_000 {
        let (a, b) = arcs[rng.random_range(0..arcs.len())];
        let (c, dd) = arcs[rng.random_range(0..arcs.len())];
        if a != c && a != dd && b != c && b != dd {
            return Ok((Arc { tail: a, head: b }, Arc { tail: c, head: dd }));
        }
    }
    Err(Error::Precondition("no two disjoint arcs found".into()))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

fn aggregate(spec: &ExperimentSpec, trials: &[Trial]) -> Vec<(String, String)> {
    let cols = columns(spec.target);
    let numeric = |name: &str| -> Vec<f64> {
        let i = cols.iter().position(|c| *c == name).expect("known column");
        let mut v: Vec<f64> = trials
            .iter()
            .filter_map(|t| t.cells[i].parse::<f64>().ok())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let ok = trials.iter().filter(|t| t.ok).count();
    let mut out = vec![
        ("trials".to_string(), trials.len().to_string()),
        ("successes".to_string(), ok.to_string()),
        (
            "success_rate".to_string(),
            (ok as f64 / trials.len() as f64).to_string(),
        ),
    ];
    let mut quantiles = |name: &str, label: &str| {
        let v = numeric(name);
        if !v.is_empty() {
            for (q, tag) in [(0.0, "min"), (0.5, "q50"), (0.9, "q90"), (1.0, "max")] {
                out.push((format!("{label}_{tag}"), quantile(&v, q).to_string()));
            }
        }
    };
    match spec.target {
        Target::Connect => {
            quantiles("order", "order");
            quantiles("out_heavy", "out_heavy_level");
            quantiles("in_heavy", "in_heavy_level");
        }
        Target::AbsorberCount => quantiles("min_count", "min_count"),
        Target::Family => {
            quantiles("members", "members");
            quantiles("overlapping_pairs", "overlapping_pairs");
        }
        Target::Reservoir => {
            quantiles("draws", "draws");
            quantiles("worst_margin", "worst_margin");
        }
        Target::Cover => {
            quantiles("paths", "paths");
            quantiles("leftover", "leftover");
        }
        Target::Pipeline => quantiles("attempts", "attempts"),
    }
    if spec.target == Target::Family {
        let v = numeric("overlapping_pairs");
        if !v.is_empty() {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            out.push(("overlapping_pairs_mean".into(), mean.to_string()));
        }
        if let Instance::Random { n, .. } | Instance::Complete { n } = spec.instance {
            let bound = PaperConstants::new(n, spec.gamma).expected_overlapping_pairs;
            out.push(("overlapping_pairs_paper_bound".into(), bound.to_string()));
        }
    }
    if spec.target == Target::Pipeline {
        let i = cols
            .iter()
            .position(|c| *c == "failed_stage")
            .expect("known column");
        let mut stages: Vec<&str> = trials
            .iter()
            .map(|t| t.cells[i].as_str())
            .filter(|s| *s != "-")
            .collect();
        stages.sort_unstable();
        stages.dedup();
        for s in stages {
            let k = trials.iter().filter(|t| t.cells[i] == s).count();
            out.push((format!("failures_{s}"), k.to_string()));
        }
    }
    out
}

impl ExperimentReport {
    pub fn success_rate(&self) -> f64 {
        let ok = self.rows.iter().filter(|r| r[2] == "1").count();
        ok as f64 / self.rows.len().max(1) as f64
    }

    /// Cells of column `name`, in trial order.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn aggregate(&self, key: &str) -> Option<&str> {
        self.aggregates
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "#schema\t{EXPERIMENT_SCHEMA}").unwrap();
        writeln!(s, "#target\t{}", self.target.name()).unwrap();
        writeln!(
            s,
            "#spec\t{}",
            serde_json::to_string(&self.spec).expect("spec serializes")
        )
        .unwrap();
        writeln!(s, "{}", self.columns.join("\t")).unwrap();
        for r in &self.rows {
            writeln!(s, "{}", r.join("\t")).unwrap();
        }
        for (k, v) in &self.aggregates {
            writeln!(s, "#aggregate\t{k}\t{v}").unwrap();
        }
        s
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header = |tag: &str| -> Result<String> {
            let (no, l) = lines.next().ok_or_else(|| bad(0, "truncated report"))?;
            l.strip_prefix(tag)
                .and_then(|r| r.strip_prefix('\t'))
                .map(str::to_string)
                .ok_or_else(|| bad(no, &format!("expected {tag} line")))
        };
        let schema = header("#schema")?;
        if schema != EXPERIMENT_SCHEMA {
            return Err(bad(1, &format!("unknown schema {schema}")));
        }
        let target = Target::parse(&header("#target")?)?;
        let spec: ExperimentSpec =
            serde_json::from_str(&header("#spec")?).map_err(|e| bad(3, &format!("spec: {e}")))?;
        let (_, cols) = lines
            .next()
            .ok_or_else(|| bad(4, "missing column header"))?;
        let columns: Vec<String> = cols.split('\t').map(String::from).collect();
        let mut rows = Vec::new();
        let mut aggregates = Vec::new();
        for (no, l) in lines {
            if let Some(rest) = l.strip_prefix("#aggregate\t") {
                let (k, v) = rest
                    .split_once('\t')
                    .ok_or_else(|| bad(no, "bad aggregate line"))?;
                aggregates.push((k.to_string(), v.to_string()));
            } else {
                let cells: Vec<String> = l.split('\t').map(String::from).collect();
                if cells.len() != columns.len() {
                    return Err(bad(no, "row width differs from header"));
                }
                rows.push(cells);
            }
        }
        Ok(ExperimentReport {
            target,
            spec,
            columns,
            rows,
            aggregates,
        })
    }
}
