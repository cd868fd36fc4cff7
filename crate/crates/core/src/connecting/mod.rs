//! Linking two disjoint arcs by a short reverse-square path.
//!
//! The route follows the cascade construction: grow an out-cascade from `ab`
//! and an in-cascade into `cd` until each has a heavy vertex `b1`, `b2`, then
//! join them.
//!
//! * `b1 = b2 = y`: pick `a1 ∈ N⁻_{G}(y)` in the out-cascade and `a2` among
//!   the in-cascade link neighbours of `y` with `a2 a1 ∈ A(D)`; the path is
//!   `a b … a1 y a2 … c d`.
//! * `b1 ≠ b2`: pick `w ∈ N⁻(b1) ∩ N⁺(b2)`, `u1 ∈ N⁺(b1) ∩ N⁻(w)`,
//!   `u2 ∈ N⁺(w) ∩ N⁻(b2)` with `u2 u1 ∈ A(D)`, plus link neighbours `a1`, `a2`
//!   of `b1`, `b2` with `u1 a1`, `a2 u2` arcs; the path is
//!   `a b … a1 b1 u1 w u2 b2 a2 … c d`.
//!
//! Both tails are traced through the cascade witnesses with a shared
//! used-set, so the result is vertex-distinct. Small instances, and
//! cascades that dead-end, go to the exact search in [`crate::oracle`].
//! Every returned path is re-verified before it leaves this module.

mod cascade;

use std::time::Duration;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

pub use cascade::{
    build_in_cascade, build_out_cascade, find_heavy, heavy_threshold, Cascade, CascadeEnd,
    Direction,
};

use crate::digraph::{Arc, Digraph, RsPath, VertexSet};
use crate::error::{Error, Result};
use crate::oracle::{bf_connect_within, check_connect_endpoints, Search, SearchBudget};
use cascade::TraceMeter;

/// Tunables for the cascade construction and the connection search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConnectParams {
    pub gamma: f64,
    /// Deepest cascade level built.
    pub level_cap: usize,
    /// Minimum link in-degree for a vertex to stay in a level; `None` is `⌈√n⌉`.
    pub prune_threshold: Option<usize>,
    /// Minimum witness count from level 3 on; `None` is `⌈n^{1/4}⌉`.
    pub witness_threshold: Option<usize>,
    /// Witness candidates tried per link while tracing.
    pub witness_cap: usize,
    /// Maximum path order; `None` is `⌊4/γ⌋`. Always clipped to the host order.
    pub order_cap: Option<usize>,
    /// Host orders below this go straight to the exact search.
    pub fallback_below: usize,
    /// Try the order-4 path `abcd` before anything else.
    pub direct_first: bool,
    /// Node budget for witness tracing and for the exact search.
    pub search_nodes: u64,
}

impl Default for ConnectParams {
    fn default() -> Self {
        ConnectParams::with_gamma(0.1)
    }
}

impl ConnectParams {
    fn with_gamma(gamma: f64) -> Self {
        ConnectParams {
            gamma,
            level_cap: (1.0 / gamma).ceil().min(1e6) as usize + 1,
            prune_threshold: None,
            witness_threshold: None,
            witness_cap: 8,
            order_cap: None,
            fallback_below: 40,
            direct_first: true,
            search_nodes: 2_000_000,
        }
    }

    /// Defaults for `γ ∈ (0, 1/6]`.
    pub fn new(gamma: f64) -> Result<Self> {
        let p = ConnectParams::with_gamma(gamma);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0 / 6.0 + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "gamma must lie in (0, 1/6], got {}",
                self.gamma
            )));
        }
        if self.level_cap < 2 {
            return Err(Error::InvalidInput("level_cap must be at least 2".into()));
        }
        let zero = |o: Option<usize>| o == Some(0);
        if zero(self.prune_threshold)
            || zero(self.witness_threshold)
            || zero(self.order_cap)
            || self.witness_cap == 0
            || self.search_nodes == 0
        {
            return Err(Error::InvalidInput(
                "connect thresholds must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_order_cap(mut self, cap: usize) -> Self {
        self.order_cap = Some(cap);
        self
    }

    pub(crate) fn prune_threshold_for(&self, n: usize) -> usize {
        self.prune_threshold
            .unwrap_or_else(|| (n as f64).sqrt().ceil() as usize)
    }

    pub(crate) fn witness_threshold_for(&self, n: usize) -> usize {
        self.witness_threshold
            .unwrap_or_else(|| (n as f64).powf(0.25).ceil() as usize)
    }

    pub(crate) fn order_cap_for(&self, n: usize) -> usize {
        self.order_cap
            .unwrap_or((4.0 / self.gamma + 1e-9).floor() as usize)
            .min(n)
    }
}

/// Which mechanism produced a connection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Direct,
    SameHeavy,
    DistinctHeavy,
    ExactSearch,
}

/// Diagnostics for one connection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectTrace {
    pub route: Route,
    pub order: usize,
    pub n_eff: usize,
    /// Level of the first heavy vertex, when the cascade was built and had one.
    pub out_heavy_level: Option<usize>,
    pub in_heavy_level: Option<usize>,
}

pub fn connect(d: &Digraph, ab: Arc, cd: Arc, p: &ConnectParams) -> Result<RsPath> {
    connect_traced(d, ab, cd, &d.empty_set(), p).map(|(path, _)| path)
}

/// [`connect`] inside `D − forbidden`. The endpoints of `ab` and `cd` are
/// exempt from `forbidden`.
pub fn connect_avoiding(
    d: &Digraph,
    ab: Arc,
    cd: Arc,
    forbidden: &VertexSet,
    p: &ConnectParams,
) -> Result<RsPath> {
    connect_traced(d, ab, cd, forbidden, p).map(|(path, _)| path)
}

/// [`connect_avoiding`] that also reports how the path was found.
pub fn connect_traced(
    d: &Digraph,
    ab: Arc,
    cd: Arc,
    forbidden: &VertexSet,
    p: &ConnectParams,
) -> Result<(RsPath, ConnectTrace)> {
    p.validate()?;
    check_connect_endpoints(d, ab, cd)?;
    let mut interior = d.all_vertices();
    for v in forbidden.ones().filter(|&v| v < d.n()) {
        interior.set(v, false);
    }
    let ends = [ab.tail, ab.head, cd.tail, cd.head];
    for v in ends {
        interior.set(v, false);
    }
    let n_eff = interior.count_ones(..) + 4;
    let cap = p.order_cap_for(n_eff);
    let failure = |reason: String| Error::ConnectionFailure {
        from: ab.as_tuple(),
        to: cd.as_tuple(),
        reason,
    };
    let (a, b, c, dd) = (ab.tail, ab.head, cd.tail, cd.head);
    let finish = |verts: Vec<usize>, trace: ConnectTrace| -> Result<(RsPath, ConnectTrace)> {
        let path = RsPath::certify(d, verts).map_err(|e| failure(format!("internal: {e}")))?;
        if path.first_end_arc() != ab || path.last_end_arc() != cd {
            return Err(failure("internal: wrong end-arcs".into()));
        }
        if let Some(&v) = path.verts()[2..path.len() - 2]
            .iter()
            .find(|&&v| !interior.contains(v))
        {
            return Err(failure(format!(
                "internal: interior vertex {v} not allowed"
            )));
        }
        Ok((path, trace))
    };

    if p.direct_first && cap >= 4 && d.has_arc(b, c) && d.has_arc(c, a) && d.has_arc(dd, b) {
        let trace = ConnectTrace {
            route: Route::Direct,
            order: 4,
            n_eff,
            out_heavy_level: None,
            in_heavy_level: None,
        };
        return finish(vec![a, b, c, dd], trace);
    }

    let exact = |out_lvl, in_lvl, why: &str| -> Result<(RsPath, ConnectTrace)> {
        let budget = SearchBudget {
            max_nodes: p.search_nodes,
            time_cap: Duration::from_secs(600),
        };
        match bf_connect_within(d, ab, cd, &interior, cap, budget)? {
            Search::Found(path) => {
                let trace = ConnectTrace {
                    route: Route::ExactSearch,
                    order: path.len(),
                    n_eff,
                    out_heavy_level: out_lvl,
                    in_heavy_level: in_lvl,
                };
                finish(path.into_vec(), trace)
            }
            Search::Absent => Err(failure(format!(
                "{why}; exact search: no path of order <= {cap}"
            ))),
            Search::Exhausted => Err(failure(format!("{why}; exact search budget exhausted"))),
        }
    };

    if n_eff < p.fallback_below {
        return exact(
            None,
            None,
            &format!("host order {n_eff} below cascade threshold"),
        );
    }

    let out_c = Cascade::build(d, Direction::Out, ab, &interior, n_eff, p);
    let in_c = Cascade::build(d, Direction::In, cd, &interior, n_eff, p);
    let (j1, j2) = match (out_c.end(), in_c.end()) {
        (CascadeEnd::Heavy { level: j1, .. }, CascadeEnd::Heavy { level: j2, .. }) => (j1, j2),
        (o, i) => {
            let lvl = |e| match e {
                CascadeEnd::Heavy { level, .. } => Some(level),
                _ => None,
            };
            return exact(lvl(o), lvl(i), &format!("cascades ended {o:?} / {i:?}"));
        }
    };

    let mut meter = TraceMeter::new(p.search_nodes);
    let h1 = out_c.heavy_at(j1);
    let h2 = in_c.heavy_at(j2);
    for &b1 in &h1 {
        for &b2 in &h2 {
            let (found, route) = if b1 == b2 {
                if j1 + j2 + 3 > cap {
                    continue;
                }
                (
                    join_same(d, &out_c, &in_c, j1, j2, b1, &mut meter),
                    Route::SameHeavy,
                )
            } else {
                if j1 + j2 + 7 > cap {
                    continue;
                }
                (
                    join_distinct(d, &out_c, &in_c, j1, j2, b1, b2, &interior, &mut meter),
                    Route::DistinctHeavy,
                )
            };
            if let Some(verts) = found {
                let trace = ConnectTrace {
                    route,
                    order: verts.len(),
                    n_eff,
                    out_heavy_level: Some(j1),
                    in_heavy_level: Some(j2),
                };
                return finish(verts, trace);
            }
            if meter.nodes > meter.max_nodes {
                break;
            }
        }
    }
    exact(
        Some(j1),
        Some(j2),
        &format!("no junction between heavy levels {j1} and {j2}"),
    )
}

/// Traces the out-tail ending `a1 y1` and the in-tail starting `y2 a2`,
/// with `used` already holding every vertex fixed so far.
fn trace_both(
    d: &Digraph,
    out_c: &Cascade,
    in_c: &Cascade,
    (j1, a1, y1): (usize, usize, usize),
    (j2, a2, y2): (usize, usize, usize),
    used: &mut VertexSet,
    meter: &mut TraceMeter,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let head = out_c.trace_arc(d, j1, a1, y1, used, meter)?;
    let tail = in_c.trace_arc(d, j2, a2, y2, used, meter)?;
    Some((head, in_c.orient(tail)))
}

fn join_same(
    d: &Digraph,
    out_c: &Cascade,
    in_c: &Cascade,
    j1: usize,
    j2: usize,
    y: usize,
    meter: &mut TraceMeter,
) -> Option<Vec<usize>> {
    let n = d.n();
    for a1 in out_c.link_preds(j1, y).ones() {
        // a2 -> a1 in D, a2 a link neighbour of y in the in-cascade
        let mut cands = in_c.link_preds(j2, y).clone();
        cands.intersect_with(d.in_neighbours(a1));
        for a2 in cands.ones() {
            if a2 == a1 {
                continue;
            }
            let mut used = FixedBitSet::with_capacity(n);
            for v in [y, a1, a2] {
                used.insert(v);
            }
            if let Some((head, tail)) =
                trace_both(d, out_c, in_c, (j1, a1, y), (j2, a2, y), &mut used, meter)
            {
                let mut p = head;
                p.extend_from_slice(&tail[1..]);
                return Some(p);
            }
            if meter.nodes > meter.max_nodes {
                return None;
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn join_distinct(
    d: &Digraph,
    out_c: &Cascade,
    in_c: &Cascade,
    j1: usize,
    j2: usize,
    b1: usize,
    b2: usize,
    interior: &VertexSet,
    meter: &mut TraceMeter,
) -> Option<Vec<usize>> {
    let n = d.n();
    let mut ws = d.in_neighbours(b1).clone();
    ws.intersect_with(d.out_neighbours(b2));
    ws.intersect_with(interior);
    for w in ws.ones() {
        let mut u1s = d.out_neighbours(b1).clone();
        u1s.intersect_with(d.in_neighbours(w));
        u1s.intersect_with(interior);
        let mut u2_base = d.out_neighbours(w).clone();
        u2_base.intersect_with(d.in_neighbours(b2));
        u2_base.intersect_with(interior);
        for u1 in u1s.ones() {
            if u1 == b2 {
                continue;
            }
            let mut u2s = u2_base.clone();
            u2s.intersect_with(d.in_neighbours(u1));
            for u2 in u2s.ones() {
                if u2 == u1 || u2 == b1 {
                    continue;
                }
                let fixed = [b1, b2, w, u1, u2];
                let mut a1s = out_c.link_preds(j1, b1).clone();
                a1s.intersect_with(d.out_neighbours(u1));
                let mut a2s = in_c.link_preds(j2, b2).clone();
                a2s.intersect_with(d.in_neighbours(u2));
                for a1 in a1s.ones().filter(|v| !fixed.contains(v)) {
                    for a2 in a2s.ones().filter(|v| !fixed.contains(v) && *v != a1) {
                        if !meter.tick() {
                            return None;
                        }
                        let mut used = FixedBitSet::with_capacity(n);
                        for v in fixed.iter().chain([a1, a2].iter()) {
                            used.insert(*v);
                        }
                        if let Some((head, tail)) =
                            trace_both(d, out_c, in_c, (j1, a1, b1), (j2, a2, b2), &mut used, meter)
                        {
                            let mut p = head;
                            p.extend_from_slice(&[u1, w, u2]);
                            p.extend_from_slice(&tail);
                            return Some(p);
                        }
                    }
                }
            }
        }
    }
    None
}
