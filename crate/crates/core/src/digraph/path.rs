use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::verify::{check_rs_cycle, check_rs_path};
use super::Digraph;
use crate::error::{Error, Result};

/// An ordered pair of distinct vertices, used for end-arcs.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Result<Self> {
        if tail == head {
            return Err(Error::InvalidInput(format!("arc {tail}->{head} is a loop")));
        }
        Ok(Arc { tail, head })
    }

    pub fn is_disjoint(&self, other: &Arc) -> bool {
        self.tail != other.tail
            && self.tail != other.head
            && self.head != other.tail
            && self.head != other.head
    }

    pub fn as_tuple(&self) -> (usize, usize) {
        (self.tail, self.head)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.tail, self.head)
    }
}

/// A vertex sequence that has been verified as a reverse-square path in some digraph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RsPath(Vec<usize>);

impl RsPath {
    /// Verifies `verts` against `d`.
    pub fn certify(d: &Digraph, verts: Vec<usize>) -> Result<Self> {
        match check_rs_path(d, &verts)? {
            None => Ok(RsPath(verts)),
            Some(arc) => Err(Error::Precondition(format!(
                "not a reverse-square path: arc {arc} missing"
            ))),
        }
    }

    pub fn verts(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `v1 v2`. For orders 2 and 3 this overlaps the last end-arc.
    pub fn first_end_arc(&self) -> Arc {
        Arc {
            tail: self.0[0],
            head: self.0[1],
        }
    }

    pub fn last_end_arc(&self) -> Arc {
        let k = self.0.len();
        Arc {
            tail: self.0[k - 2],
            head: self.0[k - 1],
        }
    }
}

/// `P ∘ Q`: `P` followed by `Q` without its first two vertices.
///
/// The last end-arc of `P` must equal the first end-arc of `Q`, and these two
/// vertices must be the only ones the paths share. Every window of three
/// consecutive vertices in the result lies inside `P` or inside `Q`, so the
/// result is again a reverse-square path.
pub fn concat(p: &RsPath, q: &RsPath) -> Result<RsPath> {
    let junction = p.last_end_arc();
    if junction != q.first_end_arc() {
        return Err(Error::Precondition(format!(
            "last end-arc {junction} of P differs from first end-arc {} of Q",
            q.first_end_arc()
        )));
    }
    let max = p.0.iter().chain(&q.0).copied().max().unwrap_or(0);
    let mut in_p = FixedBitSet::with_capacity(max + 1);
    for &v in &p.0 {
        in_p.insert(v);
    }
    if let Some(&v) = q.0[2..].iter().find(|&&v| in_p.contains(v)) {
        return Err(Error::Precondition(format!(
            "vertex {v} lies on both paths outside the junction"
        )));
    }
    let mut out = Vec::with_capacity(p.len() + q.len() - 2);
    out.extend_from_slice(&p.0);
    out.extend_from_slice(&q.0[2..]);
    Ok(RsPath(out))
}

/// A vertex sequence verified as a reverse-square cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RsCycle(Vec<usize>);

impl RsCycle {
    pub fn certify(d: &Digraph, verts: Vec<usize>) -> Result<Self> {
        match check_rs_cycle(d, &verts)? {
            None => Ok(RsCycle(verts)),
            Some(arc) => Err(Error::Precondition(format!(
                "not a reverse-square cycle: arc {arc} missing"
            ))),
        }
    }

    pub fn verts(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Slices a reverse-square cycle into `⌊k/3⌋` consecutive triples. Each triple
/// `(v_i, v_{i+1}, v_{i+2})` is a directed triangle because the cycle carries
/// the back arc `v_{i+2} v_i`.
pub fn triangles_from_cycle(d: &Digraph, c: &RsCycle) -> Result<Vec<[usize; 3]>> {
    if let Some(arc) = check_rs_cycle(d, &c.0)? {
        return Err(Error::Precondition(format!(
            "cycle is not reverse-square in this digraph: arc {arc} missing"
        )));
    }
    Ok(c.0.chunks_exact(3).map(|t| [t[0], t[1], t[2]]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{gen_complete, is_rs_path};

    #[test]
    fn concat_on_complete() {
        let d = gen_complete(6);
        let p = RsPath::certify(&d, vec![0, 1, 2, 3]).unwrap();
        let q = RsPath::certify(&d, vec![2, 3, 4, 5]).unwrap();
        let pq = concat(&p, &q).unwrap();
        assert_eq!(pq.verts(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(is_rs_path(&d, pq.verts()), Ok(true));
    }

    #[test]
    fn concat_rejects_reuse() {
        let d = gen_complete(6);
        let p = RsPath::certify(&d, vec![0, 1, 2, 3]).unwrap();
        let q = RsPath::certify(&d, vec![2, 3, 1, 5]).unwrap();
        assert!(matches!(concat(&p, &q), Err(Error::Precondition(_))));
        let r = RsPath::certify(&d, vec![3, 2, 4, 5]).unwrap();
        assert!(matches!(concat(&p, &r), Err(Error::Precondition(_))));
    }

    #[test]
    fn short_paths_have_overlapping_end_arcs() {
        let d = gen_complete(3);
        let p = RsPath::certify(&d, vec![0, 1, 2]).unwrap();
        assert_eq!(p.first_end_arc(), Arc { tail: 0, head: 1 });
        assert_eq!(p.last_end_arc(), Arc { tail: 1, head: 2 });
    }

    #[test]
    fn certify_rejects_non_paths() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            RsPath::certify(&d, vec![0, 1, 2]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn triangles_floor() {
        let d = gen_complete(10);
        let c = RsCycle::certify(&d, (0..10).collect()).unwrap();
        let t = triangles_from_cycle(&d, &c).unwrap();
        assert_eq!(t, vec![[0, 1, 2], [3, 4, 5], [6, 7, 8]]);
        let d9 = gen_complete(9);
        let c9 = RsCycle::certify(&d9, (0..9).collect()).unwrap();
        assert_eq!(triangles_from_cycle(&d9, &c9).unwrap().len(), 3);
    }

    #[test]
    fn triangles_need_a_valid_cycle() {
        let full = gen_complete(4);
        let c = RsCycle::certify(&full, vec![0, 1, 2, 3]).unwrap();
        let sparse = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(
            triangles_from_cycle(&sparse, &c),
            Err(Error::Precondition(_))
        ));
    }
}
