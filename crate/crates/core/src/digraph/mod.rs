//! Dense digraph storage plus the reverse-square verifiers, generators and
//! path algebra built on top of it.
//!
//! Adjacency is kept twice, as out- and in-neighbour bitsets, so that every
//! neighbourhood intersection used by the cascade and absorber code is a word
//! level `AND`.

mod generate;
pub mod io;
mod path;
mod verify;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use generate::{gen_complete, gen_extremal, gen_random_semidegree, semidegree_target};
pub use path::{concat, triangles_from_cycle, Arc, RsCycle, RsPath};
pub use verify::{
    check_absorber, check_rs_cycle, check_rs_path, is_absorber, is_rs_cycle, is_rs_path,
    is_square_cycle,
};

/// A set of vertex identifiers in `0..n`.
pub type VertexSet = FixedBitSet;

/// Simple digraph on vertices `0..n`: no loops, at most one arc per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<FixedBitSet>,
    inc: Vec<FixedBitSet>,
    arcs: usize,
}

impl Digraph {
    /// Arcless digraph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![FixedBitSet::with_capacity(n); n],
            inc: vec![FixedBitSet::with_capacity(n); n],
            arcs: 0,
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            if !d.add_arc(u, v)? {
                return Err(Error::InvalidInput(format!("duplicate arc {u}->{v}")));
            }
        }
        Ok(d)
    }

    /// Inserts `u -> v`. Returns `false` when the arc was already present.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInput(format!(
                "arc {u}->{v} out of range for n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at {u}")));
        }
        if self.out[u].contains(v) {
            return Ok(false);
        }
        self.out[u].insert(v);
        self.inc[v].insert(u);
        self.arcs += 1;
        Ok(true)
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || !self.out[u].contains(v) {
            return false;
        }
        self.out[u].set(v, false);
        self.inc[v].set(u, false);
        self.arcs -= 1;
        true
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].contains(v)
    }

    #[inline]
    pub fn out_neighbours(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_neighbours(&self, v: usize) -> &VertexSet {
        &self.inc[v]
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones(..)
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].count_ones(..)
    }

    /// δ⁰(D): the smallest in- or out-degree over all vertices.
    pub fn min_semi_degree(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::EmptyDigraph);
        }
        Ok((0..self.n)
            .map(|v| self.out_degree(v).min(self.in_degree(v)))
            .min()
            .unwrap_or(0))
    }

    /// All arcs in lexicographic `(tail, head)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].ones().map(move |v| (u, v)))
    }

    /// The digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inc.clone(),
            inc: self.out.clone(),
            arcs: self.arcs,
        }
    }

    /// Renames vertex `v` to `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Digraph> {
        check_permutation(perm, self.n)?;
        let mut d = Digraph::new(self.n);
        for (u, v) in self.arcs() {
            d.add_arc(perm[u], perm[v])?;
        }
        Ok(d)
    }

    /// Set containing every vertex.
    pub fn all_vertices(&self) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> VertexSet {
        FixedBitSet::with_capacity(self.n)
    }

    /// Induced subdigraph on `keep`, with vertices renumbered in increasing order.
    /// Returns the subdigraph and the map from new to old identifiers.
    pub fn induced(&self, keep: &VertexSet) -> (Digraph, Vec<usize>) {
        let old: Vec<usize> = keep.ones().filter(|&v| v < self.n).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut d = Digraph::new(old.len());
        for (i, &u) in old.iter().enumerate() {
            for v in self.out[u].ones() {
                if new_id[v] != usize::MAX {
                    d.out[i].insert(new_id[v]);
                    d.inc[new_id[v]].insert(i);
                    d.arcs += 1;
                }
            }
        }
        (d, old)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidInput(format!(
                "vertex {v} out of range for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    pub(crate) fn view(&self, reversed: bool) -> View<'_> {
        View { g: self, reversed }
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidInput(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = FixedBitSet::with_capacity(n);
    for &p in perm {
        if p >= n || seen.put(p) {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
    }
    Ok(())
}

/// Read-only view of a digraph, optionally with all arcs reversed. Lets the
/// in-cascade reuse the out-cascade code without materialising `reverse(D)`.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    g: &'a Digraph,
    reversed: bool,
}

impl<'a> View<'a> {
    #[inline]
    pub fn n(&self) -> usize {
        self.g.n
    }

    #[inline]
    pub fn out(&self, v: usize) -> &'a VertexSet {
        if self.reversed {
            &self.g.inc[v]
        } else {
            &self.g.out[v]
        }
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        if self.reversed {
            self.g.has_arc(v, u)
        } else {
            self.g.has_arc(u, v)
        }
    }
}
