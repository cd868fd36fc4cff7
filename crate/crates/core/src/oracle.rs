//! Brute-force reference implementations for small instances.
//!
//! Everything here is deliberately naive and independent of the constructive
//! modules; it is the ground truth the rest of the crate is tested against.
//! Searches report budget exhaustion as a separate outcome from absence.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::digraph::{Arc, Digraph, RsCycle, RsPath, VertexSet};
use crate::error::{Error, Result};

/// Caps on a brute-force search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_cap: Duration,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, time_cap: Duration) -> Result<Self> {
        if max_nodes == 0 || time_cap.is_zero() {
            return Err(Error::InvalidInput("search budget must be positive".into()));
        }
        Ok(SearchBudget {
            max_nodes,
            time_cap,
        })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            time_cap: Duration::from_secs(60),
        }
    }
}

/// Outcome of a budgeted exact search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The search space was exhausted: no solution exists.
    Absent,
    /// The budget ran out first; nothing is known.
    Exhausted,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }
}

struct Meter {
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    out: bool,
}

impl Meter {
    fn new(b: SearchBudget) -> Self {
        Meter {
            nodes: 0,
            max_nodes: b.max_nodes,
            deadline: Instant::now() + b.time_cap,
            out: false,
        }
    }

    /// Counts one node; returns false once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.out {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes
            || (self.nodes & 0x3ff == 0 && Instant::now() >= self.deadline)
        {
            self.out = true;
        }
        !self.out
    }
}

/// Exact search for a reverse-square Hamiltonian cycle.
///
/// Vertex 0 is fixed first to quotient out rotations. A partial ordering
/// `v1 … vj` may be extended by `w` only if `vj w` and `w v(j-1)` are arcs;
/// the three wrap-around arcs are checked when the ordering is complete.
pub fn bf_rs_hamiltonian_cycle(d: &Digraph, budget: SearchBudget) -> Result<Search<RsCycle>> {
    let n = d.n();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 vertices, got {n}"
        )));
    }
    let mut meter = Meter::new(budget);
    let mut seq = Vec::with_capacity(n);
    seq.push(0);
    let mut used = FixedBitSet::with_capacity(n);
    used.insert(0);
    if extend_cycle(d, &mut seq, &mut used, &mut meter) {
        return Ok(Search::Found(RsCycle::certify(d, seq)?));
    }
    Ok(if meter.out {
        Search::Exhausted
    } else {
        Search::Absent
    })
}

fn extend_cycle(
    d: &Digraph,
    seq: &mut Vec<usize>,
    used: &mut FixedBitSet,
    meter: &mut Meter,
) -> bool {
    if !meter.tick() {
        return false;
    }
    let n = d.n();
    let j = seq.len();
    if j == n {
        let (first, second) = (seq[0], seq[1]);
        let (penult, last) = (seq[n - 2], seq[n - 1]);
        return d.has_arc(last, first) && d.has_arc(first, penult) && d.has_arc(second, last);
    }
    let cur = seq[j - 1];
    let mut cand = d.out_neighbours(cur).clone();
    if j >= 2 {
        cand.intersect_with(d.in_neighbours(seq[j - 2]));
    }
    cand.difference_with(used);
    for w in cand.ones() {
        seq.push(w);
        used.insert(w);
        if extend_cycle(d, seq, used, meter) {
            return true;
        }
        used.set(w, false);
        seq.pop();
        if meter.out {
            return false;
        }
    }
    false
}

/// Number of ordered 4-tuples `(a, b, c, d)` that absorb `v`, by scanning
/// every tuple. Arcs are tested as soon as all their endpoints are fixed.
pub fn bf_count_absorbers(g: &Digraph, v: usize) -> Result<u64> {
    g.check_vertex(v)?;
    let n = g.n();
    let mut count = 0u64;
    for a in 0..n {
        if a == v || !g.has_arc(v, a) {
            continue;
        }
        for b in 0..n {
            if b == v || b == a || !g.has_arc(a, b) || !g.has_arc(b, v) {
                continue;
            }
            for c in 0..n {
                if c == v || c == a || c == b {
                    continue;
                }
                if !(g.has_arc(b, c) && g.has_arc(c, b) && g.has_arc(c, a) && g.has_arc(v, c)) {
                    continue;
                }
                for dd in 0..n {
                    if dd == v || dd == a || dd == b || dd == c {
                        continue;
                    }
                    if g.has_arc(c, dd) && g.has_arc(dd, b) && g.has_arc(dd, v) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

pub(crate) fn check_connect_endpoints(d: &Digraph, ab: Arc, cd: Arc) -> Result<()> {
    for arc in [ab, cd] {
        d.check_vertex(arc.tail)?;
        d.check_vertex(arc.head)?;
        if !d.has_arc(arc.tail, arc.head) {
            return Err(Error::Precondition(format!(
                "arc {arc} is not in the digraph"
            )));
        }
    }
    if !ab.is_disjoint(&cd) {
        return Err(Error::Precondition(format!(
            "arcs {ab} and {cd} share a vertex"
        )));
    }
    Ok(())
}

/// Shortest reverse-square path with first end-arc `ab` and last end-arc `cd`,
/// of order at most `max_order`.
pub fn bf_connect(d: &Digraph, ab: Arc, cd: Arc, max_order: usize) -> Result<Option<RsPath>> {
    let all = d.all_vertices();
    let budget = SearchBudget {
        max_nodes: u64::MAX,
        time_cap: Duration::from_secs(u64::MAX / 4),
    };
    Ok(bf_connect_within(d, ab, cd, &all, max_order, budget)?.found())
}

/// [`bf_connect`] restricted to interior vertices in `allowed`, under a budget.
///
/// Iterative deepening on the order: the legality of appending `w` depends
/// only on the last two vertices (`cur w` and `w prev` must be arcs), so
/// the first hit at the smallest order is a shortest path, and identifier
/// order makes it deterministic.
pub fn bf_connect_within(
    d: &Digraph,
    ab: Arc,
    cd: Arc,
    allowed: &VertexSet,
    max_order: usize,
    budget: SearchBudget,
) -> Result<Search<RsPath>> {
    check_connect_endpoints(d, ab, cd)?;
    let mut interior = allowed.clone();
    interior.grow(d.n());
    for v in [ab.tail, ab.head, cd.tail, cd.head] {
        interior.set(v, false);
    }
    let mut meter = Meter::new(budget);
    let max_order = max_order.min(interior.count_ones(..) + 4);
    for order in 4..=max_order {
        let mut seq = vec![ab.tail, ab.head];
        let mut free = interior.clone();
        if connect_dfs(d, cd, order, &mut seq, &mut free, &mut meter) {
            return Ok(Search::Found(RsPath::certify(d, seq)?));
        }
        if meter.out {
            return Ok(Search::Exhausted);
        }
    }
    Ok(Search::Absent)
}

fn connect_dfs(
    d: &Digraph,
    cd: Arc,
    order: usize,
    seq: &mut Vec<usize>,
    free: &mut FixedBitSet,
    meter: &mut Meter,
) -> bool {
    if !meter.tick() {
        return false;
    }
    let j = seq.len();
    let (prev, cur) = (seq[j - 2], seq[j - 1]);
    if j + 2 == order {
        let (c, dd) = cd.as_tuple();
        if d.has_arc(cur, c) && d.has_arc(c, prev) && d.has_arc(dd, cur) {
            seq.push(c);
            seq.push(dd);
            return true;
        }
        return false;
    }
    let mut cand = d.out_neighbours(cur).clone();
    cand.intersect_with(d.in_neighbours(prev));
    cand.intersect_with(free);
    for w in cand.ones() {
        seq.push(w);
        free.set(w, false);
        if connect_dfs(d, cd, order, seq, free, meter) {
            return true;
        }
        free.insert(w);
        seq.pop();
        if meter.out {
            return false;
        }
    }
    false
}

/// All directed triangles, each listed once with its smallest vertex first.
pub fn directed_triangles(d: &Digraph) -> Vec<[usize; 3]> {
    let n = d.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in d.out_neighbours(u).ones().filter(|&v| v > u) {
            for w in d.out_neighbours(v).ones().filter(|&w| w > u) {
                if d.has_arc(w, u) {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

/// Exact search for `k` vertex-disjoint directed triangles. Vertices are
/// decided in increasing order: each is either the smallest vertex of a chosen
/// triangle or left out of every triangle chosen later.
pub fn bf_disjoint_triangles(
    d: &Digraph,
    k: usize,
    budget: SearchBudget,
) -> Result<Search<Vec<[usize; 3]>>> {
    let n = d.n();
    if 3 * k > n {
        return Ok(Search::Absent);
    }
    let mut by_min: Vec<Vec<[usize; 3]>> = vec![Vec::new(); n];
    for t in directed_triangles(d) {
        by_min[t[0]].push(t);
    }
    let mut meter = Meter::new(budget);
    let mut chosen = Vec::with_capacity(k);
    let mut used = FixedBitSet::with_capacity(n);
    if triangle_dfs(&by_min, 0, k, &mut chosen, &mut used, &mut meter) {
        return Ok(Search::Found(chosen));
    }
    Ok(if meter.out {
        Search::Exhausted
    } else {
        Search::Absent
    })
}

fn triangle_dfs(
    by_min: &[Vec<[usize; 3]>],
    u: usize,
    need: usize,
    chosen: &mut Vec<[usize; 3]>,
    used: &mut FixedBitSet,
    meter: &mut Meter,
) -> bool {
    if need == 0 {
        return true;
    }
    let n = by_min.len();
    if u >= n || !meter.tick() {
        return false;
    }
    let free_left = (u..n).filter(|&v| !used.contains(v)).count();
    if free_left < 3 * need {
        return false;
    }
    if !used.contains(u) {
        for t in &by_min[u] {
            if used.contains(t[1]) || used.contains(t[2]) {
                continue;
            }
            for &v in t {
                used.insert(v);
            }
            chosen.push(*t);
            if triangle_dfs(by_min, u + 1, need - 1, chosen, used, meter) {
                return true;
            }
            chosen.pop();
            for &v in t {
                used.set(v, false);
            }
            if meter.out {
                return false;
            }
        }
    }
    triangle_dfs(by_min, u + 1, need, chosen, used, meter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{gen_complete, gen_extremal, is_rs_cycle, is_rs_path};

    fn small() -> SearchBudget {
        SearchBudget::new(10_000_000, Duration::from_secs(30)).unwrap()
    }

    #[test]
    fn cyclic_triangle_is_its_own_cycle() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = bf_rs_hamiltonian_cycle(&d, small())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(c.verts(), &[0, 1, 2]);
    }

    #[test]
    fn extremal_two_has_no_cycle() {
        let d = gen_extremal(2).unwrap();
        assert_eq!(
            bf_rs_hamiltonian_cycle(&d, small()).unwrap(),
            Search::Absent
        );
    }

    #[test]
    fn complete_eight_has_cycle() {
        let d = gen_complete(8);
        let c = bf_rs_hamiltonian_cycle(&d, small())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(is_rs_cycle(&d, c.verts()), Ok(true));
        assert_eq!(c.len(), 8);
    }

    #[test]
    fn tiny_budget_exhausts() {
        let d = gen_extremal(3).unwrap();
        let b = SearchBudget::new(3, Duration::from_secs(5)).unwrap();
        assert_eq!(bf_rs_hamiltonian_cycle(&d, b).unwrap(), Search::Exhausted);
        assert!(bf_rs_hamiltonian_cycle(&Digraph::new(2), small()).is_err());
        assert!(SearchBudget::new(0, Duration::from_secs(1)).is_err());
    }

    #[test]
    fn absorber_count_on_complete() {
        // v plus m = 6 others
        let d = gen_complete(7);
        assert_eq!(bf_count_absorbers(&d, 0), Ok(6 * 5 * 4 * 3));
    }

    #[test]
    fn absorber_gadget_count_is_one() {
        let d = Digraph::from_arcs(
            5,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 0),
                (3, 1),
                (1, 4),
                (4, 2),
                (4, 0),
                (2, 1),
                (3, 4),
            ],
        )
        .unwrap();
        // frozen by the exhaustive scan: abcd is the only absorber of v
        assert_eq!(bf_count_absorbers(&d, 4), Ok(1));
        assert_eq!(bf_count_absorbers(&d, 0), Ok(0));
    }

    #[test]
    fn connect_on_complete_is_direct() {
        let d = gen_complete(8);
        let p = bf_connect(&d, Arc { tail: 0, head: 1 }, Arc { tail: 2, head: 3 }, 8)
            .unwrap()
            .unwrap();
        assert_eq!(p.verts(), &[0, 1, 2, 3]);
    }

    #[test]
    fn connect_absent_when_trapped() {
        // only arcs leaving {0,1} are 0->1 and 1->0
        let mut d = gen_complete(6);
        for v in 2..6 {
            d.remove_arc(0, v);
            d.remove_arc(1, v);
        }
        let r = bf_connect(&d, Arc { tail: 0, head: 1 }, Arc { tail: 2, head: 3 }, 6).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn connect_preconditions() {
        let d = gen_complete(6);
        let ab = Arc { tail: 0, head: 1 };
        assert!(bf_connect(&d, ab, Arc { tail: 1, head: 2 }, 6).is_err());
        let sparse = Digraph::from_arcs(4, [(0, 1)]).unwrap();
        assert!(bf_connect(&sparse, ab, Arc { tail: 2, head: 3 }, 6).is_err());
    }

    #[test]
    fn connect_random_dense_is_certified() {
        let d = crate::digraph::gen_random_semidegree(20, 0.75, 5).unwrap();
        let (ab, cd) = ((0..20).flat_map(|u| (0..20).map(move |v| (u, v))))
            .filter(|&(u, v)| d.has_arc(u, v))
            .map(|(u, v)| Arc { tail: u, head: v })
            .fold((None, None), |(x, y), a| match (x, y) {
                (None, _) => (Some(a), None),
                (Some(f), None) if f.is_disjoint(&a) => (Some(f), Some(a)),
                s => s,
            });
        let (ab, cd) = (ab.unwrap(), cd.unwrap());
        let p = bf_connect(&d, ab, cd, 20).unwrap().unwrap();
        assert_eq!(is_rs_path(&d, p.verts()), Ok(true));
        assert_eq!(p.first_end_arc(), ab);
        assert_eq!(p.last_end_arc(), cd);
    }

    #[test]
    fn triangles_extremal() {
        let d = gen_extremal(2).unwrap();
        assert_eq!(
            bf_disjoint_triangles(&d, 2, small()).unwrap(),
            Search::Absent
        );
        let one = bf_disjoint_triangles(&d, 1, small())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(one.len(), 1);
        let c9 = gen_complete(9);
        let three = bf_disjoint_triangles(&c9, 3, small())
            .unwrap()
            .found()
            .unwrap();
        let mut seen: Vec<usize> = three.iter().flatten().copied().collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 9);
    }
}
