use rand::seq::index::sample;
use rand::Rng as _;

use super::Digraph;
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Extra inclusion probability on top of `delta_frac`, so that the repair pass
/// only touches the lower tail of the degree distribution.
const INCLUSION_MARGIN: f64 = 0.03;

pub fn gen_complete(n: usize) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                d.add_arc(u, v).expect("in range, no loop");
            }
        }
    }
    d
}

/// The extremal digraph on `X ∪ Y` with `|X| = 2k−1`, `|Y| = k+1`: every arc
/// leaving `X`, plus every arc from `Y` into `X`. `Y` is independent, so at
/// most `k−1` disjoint directed triangles exist, while δ⁰ = 2k−1.
///
/// `X` is `0..2k−1`, `Y` is `2k−1..3k`.
pub fn gen_extremal(k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "extremal construction needs k >= 1".into(),
        ));
    }
    let x_size = 2 * k - 1;
    let n = 3 * k;
    let mut d = Digraph::new(n);
    for x in 0..x_size {
        for v in 0..n {
            if v != x {
                d.add_arc(x, v)?;
            }
        }
        for y in x_size..n {
            d.add_arc(y, x)?;
        }
    }
    Ok(d)
}

/// Random digraph with δ⁰ ≥ ⌈delta_frac·n⌉ (δ⁰ = n−1 when `delta_frac` is 1).
///
/// Each ordered pair is included independently with probability
/// `delta_frac + margin`; afterwards every vertex short of the target out-degree
/// receives arcs to uniformly chosen non-out-neighbours, and likewise for
/// in-degrees. Adding in-arcs never lowers an out-degree, so one pass of each
/// suffices.
pub fn gen_random_semidegree(n: usize, delta_frac: f64, seed: u64) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("need n >= 3, got {n}")));
    }
    if !(delta_frac > 0.0 && delta_frac <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "delta_frac must lie in (0, 1], got {delta_frac}"
        )));
    }
    // delta_frac = 1 asks for the complete digraph, whose semi-degree is n - 1.
    let target = if delta_frac >= 1.0 {
        n - 1
    } else {
        semidegree_target(n, delta_frac)
    };
    if target > n - 1 {
        return Err(Error::Infeasible(format!(
            "semi-degree {target} exceeds n - 1 = {}",
            n - 1
        )));
    }
    let mut rng = seeded(seed);
    let p = (delta_frac + INCLUSION_MARGIN).min(1.0);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                d.add_arc(u, v)?;
            }
        }
    }
    for v in 0..n {
        let deficit = target.saturating_sub(d.out_degree(v));
        if deficit > 0 {
            let candidates: Vec<usize> = (0..n).filter(|&w| w != v && !d.has_arc(v, w)).collect();
            for i in sample(&mut rng, candidates.len(), deficit) {
                d.add_arc(v, candidates[i])?;
            }
        }
    }
    for v in 0..n {
        let deficit = target.saturating_sub(d.in_degree(v));
        if deficit > 0 {
            let candidates: Vec<usize> = (0..n).filter(|&w| w != v && !d.has_arc(w, v)).collect();
            for i in sample(&mut rng, candidates.len(), deficit) {
                d.add_arc(candidates[i], v)?;
            }
        }
    }
    Ok(d)
}

/// `⌈frac·n⌉`, tolerant of products like `0.8·30 = 24.000000000000004`.
pub fn semidegree_target(n: usize, frac: f64) -> usize {
    (frac * n as f64 - 1e-9).ceil().max(0.0) as usize
}
