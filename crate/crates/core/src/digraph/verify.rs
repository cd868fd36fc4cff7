//! Reverse-square verifiers.
//!
//! A sequence `v1 … vk` is a reverse-square path when every consecutive arc
//! `v_i v_{i+1}` and every reversed distance-two arc `v_{i+2} v_i` is present.
//! The cycle version takes indices modulo `k`. The `check_*` functions report
//! the first missing arc; the `is_*` wrappers collapse that to a boolean.

use fixedbitset::FixedBitSet;

use super::{Arc, Digraph};
use crate::error::{Error, Result};

fn validate_seq(d: &Digraph, s: &[usize]) -> Result<()> {
    let mut seen = FixedBitSet::with_capacity(d.n());
    for &v in s {
        d.check_vertex(v)?;
        if seen.put(v) {
            return Err(Error::InvalidInput(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

fn first_missing<I>(d: &Digraph, required: I) -> Option<Arc>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    required
        .into_iter()
        .find(|&(u, v)| !d.has_arc(u, v))
        .map(|(tail, head)| Arc { tail, head })
}

/// First arc missing for `s` to be a reverse-square path, or `None` when it is one.
/// Consecutive arcs are checked before back arcs.
pub fn check_rs_path(d: &Digraph, s: &[usize]) -> Result<Option<Arc>> {
    if s.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "a path needs at least 2 vertices, got {}",
            s.len()
        )));
    }
    validate_seq(d, s)?;
    let forward = s.windows(2).map(|w| (w[0], w[1]));
    let back = s.windows(3).map(|w| (w[2], w[0]));
    Ok(first_missing(d, forward.chain(back)))
}

pub fn is_rs_path(d: &Digraph, s: &[usize]) -> Result<bool> {
    Ok(check_rs_path(d, s)?.is_none())
}

/// First arc missing for `s` to be a reverse-square cycle. For `k = 3` the
/// back arcs coincide with the cycle arcs, so this reduces to a directed triangle.
pub fn check_rs_cycle(d: &Digraph, s: &[usize]) -> Result<Option<Arc>> {
    let k = s.len();
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "a cycle needs at least 3 vertices, got {k}"
        )));
    }
    validate_seq(d, s)?;
    let forward = (0..k).map(|i| (s[i], s[(i + 1) % k]));
    let back = (0..k).map(|i| (s[(i + 2) % k], s[i]));
    Ok(first_missing(d, forward.chain(back)))
}

pub fn is_rs_cycle(d: &Digraph, s: &[usize]) -> Result<bool> {
    Ok(check_rs_cycle(d, s)?.is_none())
}

/// First arc missing for `abcd` to absorb `v`, i.e. for `abcd` and `abvcd`
/// both to be reverse-square paths.
pub fn check_absorber(d: &Digraph, t: [usize; 4], v: usize) -> Result<Option<Arc>> {
    let [a, b, c, dd] = t;
    validate_seq(d, &[a, b, c, dd, v])?;
    let required = [
        (a, b),
        (b, c),
        (c, dd),
        (c, a),
        (dd, b),
        (b, v),
        (v, c),
        (v, a),
        (c, b),
        (dd, v),
    ];
    Ok(first_missing(d, required))
}

pub fn is_absorber(d: &Digraph, t: [usize; 4], v: usize) -> Result<bool> {
    Ok(check_absorber(d, t, v)?.is_none())
}

/// Plain square of a cycle: arcs `v_i v_{i+1}` and `v_i v_{i+2}` (indices mod k).
pub fn is_square_cycle(d: &Digraph, s: &[usize]) -> Result<bool> {
    let k = s.len();
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "a cycle needs at least 3 vertices, got {k}"
        )));
    }
    validate_seq(d, s)?;
    let forward = (0..k).map(|i| (s[i], s[(i + 1) % k]));
    let skip = (0..k).map(|i| (s[i], s[(i + 2) % k]));
    Ok(first_missing(d, forward.chain(skip)).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::gen_complete;

    // Recomputes the path definition straight from index arithmetic.
    fn definition_path(d: &Digraph, s: &[usize]) -> bool {
        let k = s.len();
        (0..k - 1).all(|i| d.has_arc(s[i], s[i + 1]))
            && (0..k.saturating_sub(2)).all(|i| d.has_arc(s[i + 2], s[i]))
    }

    #[test]
    fn complete_digraph_paths_and_cycles() {
        let d = gen_complete(4);
        assert_eq!(is_rs_path(&d, &[0, 1, 2, 3]), Ok(true));
        assert_eq!(is_rs_cycle(&d, &[0, 1, 2, 3]), Ok(true));
    }

    #[test]
    fn missing_db_is_reported() {
        // a=0 b=1 c=2 d=3 with arcs ab bc cd ca only
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (2, 0)]).unwrap();
        assert_eq!(
            check_rs_path(&d, &[0, 1, 2, 3]),
            Ok(Some(Arc { tail: 3, head: 1 }))
        );
    }

    #[test]
    fn three_path_from_cyclic_arcs() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(is_rs_path(&d, &[0, 1, 2]), Ok(true));
        assert!(definition_path(&d, &[0, 1, 2]));
        assert_eq!(is_rs_path(&d, &[0, 2, 1]), Ok(false));
        assert!(!definition_path(&d, &[0, 2, 1]));
    }

    #[test]
    fn two_path_is_a_single_arc() {
        let d = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(is_rs_path(&d, &[0, 1]), Ok(true));
        assert_eq!(is_rs_path(&d, &[1, 0]), Ok(false));
        assert!(is_rs_path(&d, &[0]).is_err());
    }

    #[test]
    fn triangle_cycles() {
        let cyc = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(is_rs_cycle(&cyc, &[0, 1, 2]), Ok(true));
        let trans = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        // the two cyclic orderings of {0,1,2}
        assert_eq!(is_rs_cycle(&trans, &[0, 1, 2]), Ok(false));
        assert_eq!(is_rs_cycle(&trans, &[0, 2, 1]), Ok(false));
        assert!(is_rs_cycle(&cyc, &[0, 1]).is_err());
    }

    #[test]
    fn repeated_vertices_rejected() {
        let d = gen_complete(4);
        assert!(is_rs_path(&d, &[0, 1, 0]).is_err());
        assert!(is_rs_cycle(&d, &[0, 1, 2, 1]).is_err());
        assert!(is_absorber(&d, [0, 1, 2, 3], 2).is_err());
        assert!(is_rs_path(&d, &[0, 9]).is_err());
    }

    fn absorber_gadget() -> Digraph {
        // a=0 b=1 c=2 d=3 v=4, exactly the ten required arcs
        Digraph::from_arcs(
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
        .unwrap()
    }

    #[test]
    fn absorber_gadget_is_absorber() {
        let d = absorber_gadget();
        assert_eq!(is_absorber(&d, [0, 1, 2, 3], 4), Ok(true));
        assert_eq!(is_rs_path(&d, &[0, 1, 4, 2, 3]), Ok(true));
    }

    #[test]
    fn absorber_needs_cb() {
        let mut d = absorber_gadget();
        d.remove_arc(2, 1);
        assert_eq!(
            check_absorber(&d, [0, 1, 2, 3], 4),
            Ok(Some(Arc { tail: 2, head: 1 }))
        );
    }

    #[test]
    fn complete_digraph_absorbs_everything() {
        let d = gen_complete(6);
        assert_eq!(is_absorber(&d, [5, 3, 1, 0], 2), Ok(true));
    }

    #[test]
    fn square_cycle_on_complete() {
        let d = gen_complete(5);
        assert_eq!(is_square_cycle(&d, &[0, 1, 2, 3, 4]), Ok(true));
        let c = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        // square of a triangle needs both orientations
        assert_eq!(is_square_cycle(&c, &[0, 1, 2]), Ok(false));
    }
}
