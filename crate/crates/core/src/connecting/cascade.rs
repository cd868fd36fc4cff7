//! Out- and in-cascades.
//!
//! An out-cascade rooted at the arc `ab` is a sequence of levels `X0 = {b}`,
//! `X1`, `X2`, … together with link digraphs `G_j` from `X(j-1)` to `X_j`.
//! A link `x → y` at level `j` is only recorded when `y` has enough witnesses:
//! vertices `w ∈ N⁻_{G(j-1)}(x)` with `y w ∈ A(D)`. Any of those can precede `x`
//! in a reverse-square path ending `… w x y`, so every kept vertex can be traced
//! back to `ab`. The threshold is one witness for levels 1 and 2 and
//! `witness_threshold` beyond; from level 2 on, vertices with fewer than
//! `prune_threshold` link in-neighbours are dropped.
//!
//! The in-cascade rooted at `cd` is the out-cascade of `(d, c)` in the reversed
//! digraph. It is computed through a reversed [`View`] and traced paths are
//! flipped back before they are returned.

use fixedbitset::FixedBitSet;

use super::ConnectParams;
use crate::digraph::{Arc, Digraph, VertexSet, View};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Why construction stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CascadeEnd {
    /// A level contains a heavy vertex.
    Heavy { level: usize, vertex: usize },
    /// A level came out empty.
    DeadEnd { level: usize },
    /// `level_cap` levels were built without a heavy vertex.
    LevelCap,
}

#[derive(Clone, Debug)]
struct Level {
    members: VertexSet,
    /// `preds[y]` = link in-neighbours of `y` (empty for non-members).
    preds: Vec<VertexSet>,
    pruned: usize,
}

/// A built cascade.
#[derive(Clone, Debug)]
pub struct Cascade {
    direction: Direction,
    /// The arc the cascade hangs off, as given (`ab` or `cd`).
    root: Arc,
    levels: Vec<Level>,
    end: CascadeEnd,
    n_eff: usize,
    heavy_threshold: usize,
    witness_cap: usize,
}

pub(crate) struct TraceMeter {
    pub nodes: u64,
    pub max_nodes: u64,
}

impl TraceMeter {
    pub fn new(max_nodes: u64) -> Self {
        TraceMeter {
            nodes: 0,
            max_nodes,
        }
    }

    pub fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.max_nodes
    }
}

/// Heavy-vertex threshold `⌈(1/3 + γ)·n⌉`.
pub fn heavy_threshold(n: usize, gamma: f64) -> usize {
    ((1.0 / 3.0 + gamma) * n as f64 - 1e-9).ceil().max(1.0) as usize
}

pub fn build_out_cascade(d: &Digraph, ab: Arc, p: &ConnectParams) -> Result<Cascade> {
    check_root(d, ab)?;
    let mut allowed = d.all_vertices();
    allowed.set(ab.tail, false);
    allowed.set(ab.head, false);
    Ok(Cascade::build(d, Direction::Out, ab, &allowed, d.n(), p))
}

pub fn build_in_cascade(d: &Digraph, cd: Arc, p: &ConnectParams) -> Result<Cascade> {
    check_root(d, cd)?;
    let mut allowed = d.all_vertices();
    allowed.set(cd.tail, false);
    allowed.set(cd.head, false);
    Ok(Cascade::build(d, Direction::In, cd, &allowed, d.n(), p))
}

fn check_root(d: &Digraph, arc: Arc) -> Result<()> {
    d.check_vertex(arc.tail)?;
    d.check_vertex(arc.head)?;
    if !d.has_arc(arc.tail, arc.head) {
        return Err(Error::Precondition(format!(
            "root arc {arc} is not in the digraph"
        )));
    }
    Ok(())
}

/// First heavy vertex (lowest level, then smallest identifier) with respect
/// to the threshold `(1/3 + γ)·n`.
pub fn find_heavy(c: &Cascade, n: usize, gamma: f64) -> Option<(usize, usize)> {
    let t = heavy_threshold(n, gamma);
    c.levels.iter().enumerate().skip(1).find_map(|(j, lvl)| {
        lvl.members
            .ones()
            .find(|&y| lvl.preds[y].count_ones(..) >= t)
            .map(|y| (j, y))
    })
}

impl Cascade {
    /// Builds levels inside `allowed` (which must exclude the root arc's
    /// endpoints). `n_eff` is the order of the host digraph the thresholds
    /// refer to.
    pub(crate) fn build(
        d: &Digraph,
        direction: Direction,
        root: Arc,
        allowed: &VertexSet,
        n_eff: usize,
        p: &ConnectParams,
    ) -> Cascade {
        let view = d.view(direction == Direction::In);
        let (ra, rb) = oriented_root(direction, root);
        let n = d.n();
        let heavy_t = heavy_threshold(n_eff, p.gamma);
        let prune_t = p.prune_threshold_for(n_eff);
        let witness_t = p.witness_threshold_for(n_eff);

        let mut level0 = Level {
            members: FixedBitSet::with_capacity(n),
            preds: vec![FixedBitSet::with_capacity(n); n],
            pruned: 0,
        };
        level0.members.insert(rb);
        level0.preds[rb].insert(ra);
        let mut levels = vec![level0];

        let mut end = CascadeEnd::LevelCap;
        for j in 1..=p.level_cap {
            let needed = if j <= 2 { 1 } else { witness_t };
            let next = grow_level(
                view,
                &levels[j - 1],
                allowed,
                needed,
                if j >= 2 { prune_t } else { 0 },
            );
            if next.members.is_clear() {
                levels.push(next);
                end = CascadeEnd::DeadEnd { level: j };
                break;
            }
            let heavy = next
                .members
                .ones()
                .find(|&y| next.preds[y].count_ones(..) >= heavy_t);
            levels.push(next);
            if let Some(y) = heavy {
                end = CascadeEnd::Heavy {
                    level: j,
                    vertex: y,
                };
                break;
            }
        }
        Cascade {
            direction,
            root,
            levels,
            end,
            n_eff,
            heavy_threshold: heavy_t,
            witness_cap: p.witness_cap,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn root(&self) -> Arc {
        self.root
    }

    pub fn end(&self) -> CascadeEnd {
        self.end
    }

    /// Number of levels built, including `X0`.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> &VertexSet {
        &self.levels[j].members
    }

    /// `N⁻_{G_j}(y)`: in the orientation of the cascade, so for in-cascades
    /// these are out-neighbours of `y` in `D`.
    pub fn link_preds(&self, j: usize, y: usize) -> &VertexSet {
        &self.levels[j].preds[y]
    }

    pub fn link_degree(&self, j: usize, y: usize) -> usize {
        self.levels[j].preds[y].count_ones(..)
    }

    /// Vertices dropped by the low-degree pruning at level `j`.
    pub fn pruned(&self, j: usize) -> usize {
        self.levels[j].pruned
    }

    pub fn heavy_threshold(&self) -> usize {
        self.heavy_threshold
    }

    pub fn n_eff(&self) -> usize {
        self.n_eff
    }

    /// Heavy vertices at level `j`, in identifier order.
    pub fn heavy_at(&self, j: usize) -> Vec<usize> {
        let lvl = &self.levels[j];
        lvl.members
            .ones()
            .filter(|&y| lvl.preds[y].count_ones(..) >= self.heavy_threshold)
            .collect()
    }

    /// Explicit reverse-square path between the root arc and the kept vertex
    /// `y` at level `j`: `a b … y` for out-cascades, `y … c d` for in-cascades.
    pub fn trace_vertex(&self, d: &Digraph, j: usize, y: usize) -> Option<Vec<usize>> {
        if j == 0 || j >= self.levels.len() || !self.levels[j].members.contains(y) {
            return None;
        }
        let mut used = FixedBitSet::with_capacity(d.n());
        used.insert(y);
        let mut meter = TraceMeter::new(1_000_000);
        for x in self.levels[j].preds[y].ones() {
            if j > 1 {
                used.insert(x);
            }
            if let Some(p) = self.trace_arc(d, j, x, y, &mut used, &mut meter) {
                return Some(self.orient(p));
            }
            used.set(x, false);
        }
        None
    }

    /// Traces the link `x → y` (in cascade orientation) of level `j` back to
    /// the root. `x` and `y` must already be marked in `used`; on success every
    /// vertex of the returned sequence except the root pair is marked. The
    /// sequence is in cascade orientation, root pair first.
    pub(crate) fn trace_arc(
        &self,
        d: &Digraph,
        j: usize,
        x: usize,
        y: usize,
        used: &mut VertexSet,
        meter: &mut TraceMeter,
    ) -> Option<Vec<usize>> {
        if !meter.tick() {
            return None;
        }
        let (ra, rb) = oriented_root(self.direction, self.root);
        if j == 1 {
            debug_assert_eq!(x, rb);
            return Some(vec![ra, rb, y]);
        }
        let view = d.view(self.direction == Direction::In);
        let mut tried = 0;
        for w in self.levels[j - 1].preds[x].ones() {
            if !view.has_arc(y, w) {
                continue;
            }
            let is_root = j - 1 == 1;
            if !is_root && used.contains(w) {
                continue;
            }
            if tried == self.witness_cap {
                break;
            }
            tried += 1;
            if !is_root {
                used.insert(w);
            }
            if let Some(mut p) = self.trace_arc(d, j - 1, w, x, used, meter) {
                p.push(y);
                return Some(p);
            }
            if !is_root {
                used.set(w, false);
            }
        }
        None
    }

    /// Turns a cascade-orientation sequence into a path of `D`.
    pub(crate) fn orient(&self, mut p: Vec<usize>) -> Vec<usize> {
        if self.direction == Direction::In {
            p.reverse();
        }
        p
    }
}

/// The root pair in cascade orientation: `(a, b)` for out, `(d, c)` for in.
fn oriented_root(direction: Direction, root: Arc) -> (usize, usize) {
    match direction {
        Direction::Out => (root.tail, root.head),
        Direction::In => (root.head, root.tail),
    }
}

fn grow_level(
    view: View<'_>,
    prev: &Level,
    allowed: &VertexSet,
    needed: usize,
    prune_t: usize,
) -> Level {
    let n = view.n();
    let mut preds = vec![FixedBitSet::with_capacity(n); n];
    let mut members = FixedBitSet::with_capacity(n);
    for y in prev.members.ones() {
        let py = &prev.preds[y];
        let mut cand = view.out(y).clone();
        cand.intersect_with(allowed);
        for z in cand.ones() {
            // witnesses of y -> z: predecessors of y that z points back to
            if py.intersection_count(view.out(z)) >= needed {
                preds[z].insert(y);
                members.insert(z);
            }
        }
    }
    let mut pruned = 0;
    if prune_t > 0 {
        let drop: Vec<usize> = members
            .ones()
            .filter(|&z| preds[z].count_ones(..) < prune_t)
            .collect();
        pruned = drop.len();
        for z in drop {
            members.set(z, false);
            preds[z].clear();
        }
    }
    Level {
        members,
        preds,
        pruned,
    }
}
