//! Covering almost all vertices by few disjoint reverse-square paths.
//!
//! Paths are grown greedily from random arcs: `w` extends `… x y` forward when
//! `y → w` and `w → x`, and extends `y x …` backward when `w → y` and `x → w`.
//! Candidates are drawn in seeded random order. Fragments of order below 4
//! are dissolved into the leftover. When there are more paths than the
//! budget allows, pairs are merged through connectors that run over
//! leftover vertices.

use std::collections::VecDeque;

use rand::seq::IndexedRandom;
use rand::seq::SliceRandom;

use crate::connecting::{connect_avoiding, ConnectParams};
use crate::digraph::{concat, Digraph, RsPath, VertexSet};
use crate::error::{Error, Result};
use crate::rng::{seeded, Rng};

#[derive(Clone, Debug, PartialEq)]
pub struct CoverResult {
    pub paths: Vec<RsPath>,
    /// Vertices of the host set on no path.
    pub leftover: VertexSet,
    /// Connector merges performed to meet the path budget.
    pub merges: usize,
}

impl CoverResult {
    pub fn covered(&self) -> usize {
        self.paths.iter().map(RsPath::len).sum()
    }
}

pub fn greedy_path_cover(
    d: &Digraph,
    path_budget: usize,
    leftover_budget: usize,
    seed: u64,
    p: &ConnectParams,
) -> Result<CoverResult> {
    greedy_path_cover_within(d, &d.all_vertices(), path_budget, leftover_budget, seed, p)
}

/// [`greedy_path_cover`] of `D[allowed]`.
pub fn greedy_path_cover_within(
    d: &Digraph,
    allowed: &VertexSet,
    path_budget: usize,
    leftover_budget: usize,
    seed: u64,
    p: &ConnectParams,
) -> Result<CoverResult> {
    if d.n() < 4 {
        return Err(Error::InvalidInput(format!(
            "path cover needs n >= 4, got {}",
            d.n()
        )));
    }
    let mut rng = seeded(seed);
    let mut unused = allowed.clone();
    unused.grow(d.n());
    let mut leftover = d.empty_set();
    let mut paths = Vec::new();

    while let Some((u, v)) = random_arc(d, &unused, &mut rng) {
        unused.set(u, false);
        unused.set(v, false);
        let mut path = VecDeque::from([u, v]);
        grow(d, &mut path, &mut unused, &mut rng);
        if path.len() < 4 {
            for x in path {
                leftover.insert(x);
            }
        } else {
            paths.push(RsPath::certify(d, path.into_iter().collect())?);
        }
    }
    leftover.union_with(&unused);

    let mut merges = 0;
    while paths.len() > path_budget {
        if !merge_one(d, &mut paths, &mut leftover, p)? {
            break;
        }
        merges += 1;
    }
    let left = leftover.count_ones(..);
    if paths.len() > path_budget || left > leftover_budget {
        return Err(Error::CoverFailure {
            paths: paths.len(),
            path_budget,
            leftover: left,
            leftover_budget,
        });
    }
    Ok(CoverResult {
        paths,
        leftover,
        merges,
    })
}

fn random_arc(d: &Digraph, unused: &VertexSet, rng: &mut Rng) -> Option<(usize, usize)> {
    let mut tails: Vec<usize> = unused.ones().collect();
    tails.shuffle(rng);
    for u in tails {
        let heads: Vec<usize> = d
            .out_neighbours(u)
            .ones()
            .filter(|&w| unused.contains(w))
            .collect();
        if let Some(&v) = heads.choose(rng) {
            return Some((u, v));
        }
    }
    None
}

fn grow(d: &Digraph, path: &mut VecDeque<usize>, unused: &mut VertexSet, rng: &mut Rng) {
    let (mut fwd, mut bwd) = (true, true);
    while fwd || bwd {
        if fwd {
            let k = path.len();
            let (x, y) = (path[k - 2], path[k - 1]);
            let cands: Vec<usize> = unused
                .ones()
                .filter(|&w| d.has_arc(y, w) && d.has_arc(w, x))
                .collect();
            match cands.choose(rng) {
                Some(&w) => {
                    unused.set(w, false);
                    path.push_back(w);
                }
                None => fwd = false,
            }
        }
        if bwd {
            let (y, x) = (path[0], path[1]);
            let cands: Vec<usize> = unused
                .ones()
                .filter(|&w| d.has_arc(w, y) && d.has_arc(x, w))
                .collect();
            match cands.choose(rng) {
                Some(&w) => {
                    unused.set(w, false);
                    path.push_front(w);
                }
                None => bwd = false,
            }
        }
    }
}

/// Merges the first pair `(i, j)` for which a connector through leftover
/// vertices exists, replacing both by `P_i ∘ Q ∘ P_j`.
fn merge_one(
    d: &Digraph,
    paths: &mut Vec<RsPath>,
    leftover: &mut VertexSet,
    p: &ConnectParams,
) -> Result<bool> {
    let mut forbidden = d.all_vertices();
    forbidden.difference_with(leftover);
    for i in 0..paths.len() {
        for j in 0..paths.len() {
            if i == j {
                continue;
            }
            let (ab, cd) = (paths[i].last_end_arc(), paths[j].first_end_arc());
            let Ok(q) = connect_avoiding(d, ab, cd, &forbidden, p) else {
                continue;
            };
            let merged = concat(&concat(&paths[i], &q)?, &paths[j])?;
            for &x in &q.verts()[2..q.len() - 2] {
                leftover.set(x, false);
            }
            let (hi, lo) = (i.max(j), i.min(j));
            paths.remove(hi);
            paths.remove(lo);
            paths.insert(lo, merged);
            return Ok(true);
        }
    }
    Ok(false)
}
