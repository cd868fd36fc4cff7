//! A small vertex pool with certified two-sided degrees into itself, used to
//! route connector paths.

use rand::seq::index::sample;

use crate::connecting::{connect_avoiding, ConnectParams};
use crate::constants::floor_tol;
use crate::digraph::{Arc, Digraph, RsPath, VertexSet};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};

#[derive(Clone, Debug, PartialEq)]
pub struct Reservoir {
    verts: VertexSet,
    used: VertexSet,
    gamma: f64,
    certified: bool,
    worst_vertex: usize,
    worst_margin: f64,
    attempts: usize,
    forbidden_budget: usize,
}

/// `(2/3 + γ/2)(|R| + 4)`.
pub fn reservoir_bound(size: usize, gamma: f64) -> f64 {
    (2.0 / 3.0 + gamma / 2.0) * (size as f64 + 4.0)
}

/// Checks `d⁺_R(x)` and `d⁻_R(x)` against [`reservoir_bound`] for every
/// vertex `x`. Returns the vertex with the smallest slack and that slack
/// (negative when the certificate fails).
pub fn certificate_margin(d: &Digraph, r: &VertexSet, gamma: f64) -> (usize, f64) {
    let bound = reservoir_bound(r.count_ones(..), gamma);
    let mut worst = (0, f64::INFINITY);
    for x in 0..d.n() {
        let deg = d
            .out_neighbours(x)
            .intersection_count(r)
            .min(d.in_neighbours(x).intersection_count(r));
        let m = deg as f64 - bound;
        if m < worst.1 {
            worst = (x, m);
        }
    }
    worst
}

impl Reservoir {
    /// Wraps a given set, certifying it.
    pub fn from_set(d: &Digraph, verts: VertexSet, gamma: f64) -> Result<Self> {
        for v in verts.ones() {
            d.check_vertex(v)?;
        }
        let mut verts = verts;
        verts.grow(d.n());
        let (worst_vertex, worst_margin) = certificate_margin(d, &verts, gamma);
        let size = verts.count_ones(..);
        Ok(Reservoir {
            used: d.empty_set(),
            certified: worst_margin >= -1e-9,
            verts,
            gamma,
            worst_vertex,
            worst_margin,
            attempts: 1,
            forbidden_budget: size,
        })
    }

    pub fn verts(&self) -> &VertexSet {
        &self.verts
    }

    pub fn used(&self) -> &VertexSet {
        &self.used
    }

    /// Reservoir vertices not yet on a connector.
    pub fn free(&self) -> VertexSet {
        let mut f = self.verts.clone();
        f.difference_with(&self.used);
        f
    }

    pub fn len(&self) -> usize {
        self.verts.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_clear()
    }

    pub fn used_count(&self) -> usize {
        self.used.count_ones(..)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn worst_vertex(&self) -> usize {
        self.worst_vertex
    }

    pub fn worst_margin(&self) -> f64 {
        self.worst_margin
    }

    /// Draws made, counting the accepted one.
    pub fn attempts(&self) -> usize {
        self.attempts
    }

    pub fn forbidden_budget(&self) -> usize {
        self.forbidden_budget
    }

    /// Caps how many reservoir vertices connectors may consume.
    pub fn with_forbidden_budget(mut self, budget: usize) -> Self {
        self.forbidden_budget = budget;
        self
    }
}

/// Uniform `size`-subset of `V ∖ W`, redrawn until the certificate holds.
pub fn sample_reservoir(
    d: &Digraph,
    w: &VertexSet,
    size: usize,
    gamma: f64,
    seed: u64,
    retries: usize,
) -> Result<Reservoir> {
    let best = draw_best(d, w, size, gamma, seed, retries)?;
    if best.certified {
        Ok(best)
    } else {
        Err(Error::ReservoirFailure {
            attempts: retries + 1,
            worst_vertex: best.worst_vertex,
            worst_margin: best.worst_margin,
        })
    }
}

/// Like [`sample_reservoir`], but when no draw is certified the draw with
/// the largest worst-case margin is returned, flagged uncertified.
pub fn sample_reservoir_best_effort(
    d: &Digraph,
    w: &VertexSet,
    size: usize,
    gamma: f64,
    seed: u64,
    retries: usize,
) -> Result<Reservoir> {
    draw_best(d, w, size, gamma, seed, retries)
}

fn draw_best(
    d: &Digraph,
    w: &VertexSet,
    size: usize,
    gamma: f64,
    seed: u64,
    retries: usize,
) -> Result<Reservoir> {
    let n = d.n();
    let candidates: Vec<usize> = (0..n).filter(|&v| !w.contains(v)).collect();
    if size == 0 || size > candidates.len() {
        return Err(Error::Precondition(format!(
            "reservoir size {size} must lie in 1..={}",
            candidates.len()
        )));
    }
    let mut best: Option<Reservoir> = None;
    for attempt in 0..=retries {
        let mut rng = seeded(derive_seed(seed, attempt as u64));
        let mut r = d.empty_set();
        for i in sample(&mut rng, candidates.len(), size) {
            r.insert(candidates[i]);
        }
        let mut res = Reservoir::from_set(d, r, gamma)?;
        res.attempts = attempt + 1;
        if res.certified {
            return Ok(res);
        }
        if best
            .as_ref()
            .is_none_or(|b| res.worst_margin > b.worst_margin)
        {
            best = Some(res);
        }
    }
    let mut best = best.expect("at least one draw");
    best.attempts = retries + 1;
    Ok(best)
}

/// Connects `ab` to `cd` inside `D[(R ∖ used) ∪ {a, b, c, d}]` and marks the
/// interior as used. The order is at most `min(⌊16/γ⌋, |R| + 4)` unless
/// `p.order_cap` is tighter.
pub fn reservoir_connect(
    d: &Digraph,
    r: &mut Reservoir,
    ab: Arc,
    cd: Arc,
    p: &ConnectParams,
) -> Result<RsPath> {
    if r.used_count() > r.forbidden_budget {
        return Err(Error::Precondition(format!(
            "{} reservoir vertices used, budget {}",
            r.used_count(),
            r.forbidden_budget
        )));
    }
    let mut forbidden = d.all_vertices();
    forbidden.difference_with(&r.free());
    let mut cp = p.clone();
    let cap = floor_tol(16.0 / p.gamma).min(r.len() + 4);
    cp.order_cap = Some(cp.order_cap.map_or(cap, |c| c.min(cap)));
    let path = connect_avoiding(d, ab, cd, &forbidden, &cp)?;
    for &x in &path.verts()[2..path.len() - 2] {
        r.used.insert(x);
    }
    Ok(path)
}
