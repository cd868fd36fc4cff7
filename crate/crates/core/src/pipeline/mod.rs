//! End-to-end assembly of a reverse-square Hamiltonian cycle.
//!
//! One attempt runs these stages in order:
//!
//! 1. sample an absorber family and chain it into `P_A`;
//! 2. draw a reservoir `R` outside `V(P_A)`;
//! 3. cover `D − (V(P_A) ∪ R)` by paths `P_1 … P_p`, leftover `T`;
//! 4. stitch `L_{i+1} = L_i ∘ Q_i ∘ P_{i+1}` with `P_{p+1} = P_A`, every
//!    connector `Q_i` running through `R`;
//! 5. close `L_{p+1}` into a cycle with one more reservoir connector;
//! 6. absorb `U = T ∪ (R ∖ V(C))` into the copy of `P_A` on the cycle.
//!
//! A failed attempt is retried with a derived seed. The returned cycle is
//! always re-verified against the whole vertex set.

mod config;
mod report;

use std::time::Instant;

pub use config::{EffectiveParams, PipelineConfig};
pub use report::{AttemptReport, Outcome, RunReport, Stage, REPORT_SCHEMA};

use crate::absorbing::{absorb, build_absorbing_path, plan_absorption, sample_family};
use crate::digraph::{check_rs_cycle, concat, Digraph, RsCycle, RsPath};
use crate::error::Error;
use crate::pathcover::greedy_path_cover_within;
use crate::reservoir::{reservoir_connect, sample_reservoir, sample_reservoir_best_effort};
use crate::rng::derive_seed;

/// A run that produced no cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineFailure {
    pub stage: Stage,
    pub error: Error,
    pub report: RunReport,
}

impl std::fmt::Display for PipelineFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "pipeline failed at stage {}: {}", self.stage, self.error)
    }
}

impl std::error::Error for PipelineFailure {}

/// True iff `c` is a reverse-square cycle of `d` through every vertex once.
pub fn validate_run(d: &Digraph, c: &RsCycle) -> bool {
    let n = d.n();
    if c.len() != n || n < 3 {
        return false;
    }
    let mut seen = d.empty_set();
    for &v in c.verts() {
        if v >= n || seen.put(v) {
            return false;
        }
    }
    matches!(check_rs_cycle(d, c.verts()), Ok(None))
}

pub fn find_rs_hamiltonian(
    d: &Digraph,
    cfg: &PipelineConfig,
) -> Result<(RsCycle, RunReport), Box<PipelineFailure>> {
    let n = d.n();
    let mut report = RunReport::new(d, cfg);
    let fail = |stage: Stage, error: Error, mut report: RunReport| {
        report.outcome = Outcome::Failure { stage };
        Box::new(PipelineFailure {
            stage,
            error,
            report,
        })
    };
    if let Err(e) = cfg.validate() {
        return Err(fail(Stage::Precondition, e, report));
    }
    if n < cfg.min_n.max(5) {
        let e = Error::Precondition(format!("n = {n} is below the working size {}", cfg.min_n));
        return Err(fail(Stage::Precondition, e, report));
    }
    let eff = cfg.effective(n);
    report.effective = Some(eff.clone());

    let mut last = None;
    for attempt in 0..=cfg.retries {
        let seed = derive_seed(cfg.seed, attempt as u64);
        let mut rec = AttemptReport::new(attempt, seed);
        let result = run_attempt(d, cfg, &eff, seed, &mut rec);
        report.attempts.push(rec);
        match result {
            Ok(cycle) => {
                report.outcome = Outcome::Success {
                    cycle_order: cycle.len(),
                    verified: true,
                };
                return Ok((cycle, report));
            }
            Err((stage, e)) => last = Some((stage, e)),
        }
    }
    let (stage, e) = last.expect("at least one attempt");
    Err(fail(stage, e, report))
}

type StageResult<T> = Result<T, (Stage, Error)>;

fn at<T>(stage: Stage, r: crate::Result<T>) -> StageResult<T> {
    r.map_err(|e| (stage, e))
}

fn run_attempt(
    d: &Digraph,
    cfg: &PipelineConfig,
    eff: &EffectiveParams,
    seed: u64,
    rec: &mut AttemptReport,
) -> StageResult<RsCycle> {
    let result = attempt_stages(d, cfg, eff, seed, rec);
    if let Err((stage, e)) = &result {
        rec.failed_stage = Some(*stage);
        rec.error = Some(e.to_string());
    }
    result
}

fn attempt_stages(
    d: &Digraph,
    cfg: &PipelineConfig,
    eff: &EffectiveParams,
    seed: u64,
    rec: &mut AttemptReport,
) -> StageResult<RsCycle> {
    let n = d.n();
    let cp = cfg.connect_params();

    // (1) absorber family and P_A
    let t = Instant::now();
    let family = at(
        Stage::Family,
        sample_family(d, &eff.family, derive_seed(seed, 1)),
    )?;
    rec.family_size = Some(family.len());
    rec.family_sampled = Some(family.sampled);
    rec.family_attempts = Some(family.attempts);
    rec.family_min_coverage = family.min_coverage().map(|(_, c)| c);
    rec.overlapping_pairs = Some(family.overlapping_pairs);
    let mut acp = cp.clone();
    acp.order_cap = Some(eff.absorbing_connector_cap);
    let pa = at(Stage::AbsorbingPath, build_absorbing_path(d, &family, &acp))?;
    rec.absorbing_order = Some(pa.path().len());
    rec.absorbing_connector_orders = pa.connector_orders().to_vec();
    rec.timings.absorbing_ms = ms(t);

    // (2) reservoir outside V(P_A)
    let t = Instant::now();
    let mut w = d.empty_set();
    for &x in pa.path().verts() {
        w.insert(x);
    }
    if eff.reservoir_size + pa.path().len() > n {
        return Err((
            Stage::Reservoir,
            Error::Precondition(format!(
                "P_A has {} vertices, no room for a reservoir of {}",
                pa.path().len(),
                eff.reservoir_size
            )),
        ));
    }
    let rseed = derive_seed(seed, 2);
    let drawn = if eff.require_certified_reservoir {
        sample_reservoir(
            d,
            &w,
            eff.reservoir_size,
            cfg.gamma,
            rseed,
            eff.reservoir_retries,
        )
    } else {
        sample_reservoir_best_effort(
            d,
            &w,
            eff.reservoir_size,
            cfg.gamma,
            rseed,
            eff.reservoir_retries,
        )
    };
    let mut res =
        at(Stage::Reservoir, drawn)?.with_forbidden_budget(eff.reservoir_forbidden_budget);
    rec.reservoir_size = Some(res.len());
    rec.reservoir_attempts = Some(res.attempts());
    rec.reservoir_certified = Some(res.is_certified());
    rec.reservoir_worst_margin = Some(res.worst_margin());
    rec.timings.reservoir_ms = ms(t);

    // (3) cover the rest
    let t = Instant::now();
    let mut rest = d.all_vertices();
    rest.difference_with(&w);
    rest.difference_with(res.verts());
    let cover = at(
        Stage::Cover,
        greedy_path_cover_within(
            d,
            &rest,
            eff.path_budget,
            eff.leftover_budget,
            derive_seed(seed, 3),
            &cp,
        ),
    )?;
    rec.cover_paths = Some(cover.paths.len());
    rec.cover_merges = Some(cover.merges);
    rec.cover_leftover = Some(cover.leftover.count_ones(..));
    rec.timings.cover_ms = ms(t);

    // (4) stitch P_1 … P_p, P_A through the reservoir
    let t = Instant::now();
    let mut rcp = cp.clone();
    rcp.order_cap = Some(eff.reservoir_connector_cap);
    let mut pieces: Vec<&RsPath> = cover.paths.iter().collect();
    pieces.push(pa.path());
    let mut l = pieces[0].clone();
    for next in &pieces[1..] {
        let q = at(
            Stage::Stitch,
            reservoir_connect(d, &mut res, l.last_end_arc(), next.first_end_arc(), &rcp),
        )?;
        rec.connector_orders.push(q.len());
        l = at(
            Stage::Stitch,
            concat(&l, &q).and_then(|lq| concat(&lq, next)),
        )?;
        // every intermediate L_i is re-verified from scratch
        l = at(Stage::Stitch, RsPath::certify(d, l.into_vec()))?;
    }
    let pa_start = l.len() - pa.path().len();
    rec.timings.stitch_ms = ms(t);

    // (5) close the cycle
    let t = Instant::now();
    let q = at(
        Stage::Close,
        reservoir_connect(d, &mut res, l.last_end_arc(), l.first_end_arc(), &rcp),
    )?;
    rec.connector_orders.push(q.len());
    rec.reservoir_used = Some(res.used_count());
    let mut cyc = l.into_vec();
    cyc.extend_from_slice(&q.verts()[2..q.len() - 2]);
    let cycle = at(Stage::Close, RsCycle::certify(d, cyc))?;
    rec.timings.close_ms = ms(t);

    // (6) absorb U = T ∪ (R ∖ V(C))
    let t = Instant::now();
    let mut u = cover.leftover.clone();
    u.union_with(&res.free());
    let u: Vec<usize> = u.ones().collect();
    rec.leftover_u = Some(u.len());
    at(Stage::Capacity, plan_absorption(&pa, &u))?;
    let pau = at(Stage::Absorb, absorb(d, &pa, &u))?;
    let mut seq = cycle.into_vec();
    let tail = seq.split_off(pa_start + pa.path().len());
    seq.truncate(pa_start);
    seq.extend_from_slice(pau.path().verts());
    seq.extend_from_slice(&tail);
    let fin = at(Stage::Validate, RsCycle::certify(d, seq))?;
    rec.timings.absorb_ms = ms(t);
    if !validate_run(d, &fin) {
        return Err((
            Stage::Validate,
            Error::Precondition(format!(
                "cycle of order {} does not span {n} vertices",
                fin.len()
            )),
        ));
    }
    Ok(fin)
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

#[cfg(test)]
mod tests;
