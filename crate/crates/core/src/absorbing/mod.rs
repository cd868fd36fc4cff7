//! Absorbers, absorber families and the absorbing path.
//!
//! A 4-path `abcd` absorbs `v` when `abvcd` is again a reverse-square path.
//! A family of disjoint absorbers is chained into one path `P_A`; later any
//! small set of outside vertices can be spliced into `P_A`, each into its own
//! absorber, without touching the end-arcs.

mod chain;

use std::collections::HashSet;

use rand::Rng as _;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

pub use chain::{absorb, build_absorbing_path, plan_absorption, AbsorbingPath};

use crate::constants::{floor_tol, PaperConstants};
use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};

/// Absorbers of `v`, at most `limit` of them (`None` for all), in the order
/// `b ∈ N⁻(v)`, `c ∈ N⁻(b) ∩ N⁺(b) ∩ N⁺(v)`, `a ∈ N⁻(b) ∩ N⁺(c) ∩ N⁺(v)`,
/// `d ∈ N⁺(c) ∩ N⁻(b) ∩ N⁻(v)` with `d ≠ a`.
pub fn enumerate_absorbers(d: &Digraph, v: usize, limit: Option<usize>) -> Result<Vec<[usize; 4]>> {
    d.check_vertex(v)?;
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    if d.n() < 5 || limit == 0 {
        return Ok(out);
    }
    for b in d.in_neighbours(v).ones() {
        let mut cs = d.in_neighbours(b).clone();
        cs.intersect_with(d.out_neighbours(b));
        cs.intersect_with(d.out_neighbours(v));
        let mut db = d.in_neighbours(b).clone();
        db.intersect_with(d.in_neighbours(v));
        for c in cs.ones() {
            let mut as_ = d.in_neighbours(b).clone();
            as_.intersect_with(d.out_neighbours(c));
            as_.intersect_with(d.out_neighbours(v));
            let mut ds = db.clone();
            ds.intersect_with(d.out_neighbours(c));
            for a in as_.ones() {
                for dd in ds.ones().filter(|&x| x != a) {
                    out.push([a, b, c, dd]);
                    if out.len() == limit {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Vertices absorbed by the 4-tuple `t` (empty unless `t` spans a
/// reverse-square path with the extra arc `cb`).
pub fn absorbed_by(d: &Digraph, t: [usize; 4]) -> VertexSet {
    let [a, b, c, dd] = t;
    let distinct = a != b && a != c && a != dd && b != c && b != dd && c != dd;
    let internal = [(a, b), (b, c), (c, dd), (c, a), (dd, b), (c, b)];
    if !distinct || !internal.iter().all(|&(u, w)| d.has_arc(u, w)) {
        return d.empty_set();
    }
    let mut s = d.out_neighbours(b).clone();
    s.intersect_with(d.in_neighbours(c));
    s.intersect_with(d.in_neighbours(a));
    s.intersect_with(d.out_neighbours(dd));
    for x in t {
        s.set(x, false);
    }
    s
}

/// How overlapping sampled tuples are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapRule {
    /// Drop every tuple that meets another sampled tuple.
    DeleteAll,
    /// Drop non-absorbers, then keep tuples in sampling order while they are
    /// disjoint from the ones already kept.
    KeepFirst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    /// Probability with which each ordered 4-tuple is sampled.
    pub inclusion_prob: f64,
    pub coverage_floor: usize,
    pub size_cap: usize,
    pub overlap: OverlapRule,
    /// Additional attempts after the first.
    pub retries: usize,
}

impl FamilyParams {
    /// Verbatim constants: probability `γ⁴n⁻³`, at most `2γ⁴n` members, each
    /// vertex covered more than `γ⁷n` times.
    pub fn paper(n: usize, gamma: f64, retries: usize) -> Self {
        let c = PaperConstants::new(n, gamma);
        FamilyParams {
            inclusion_prob: c.family_inclusion_prob,
            coverage_floor: floor_tol(c.coverage_floor) + 1,
            size_cap: floor_tol(c.family_size_cap),
            overlap: OverlapRule::DeleteAll,
            retries,
        }
    }

    /// Desk scale: about `tuples_per_vertex · n` sampled tuples, coverage
    /// floor `max(1, ⌈coverage_frac · n⌉)`.
    pub fn desk(n: usize, tuples_per_vertex: f64, coverage_frac: f64, retries: usize) -> Self {
        let total = ordered_tuples(n).max(1) as f64;
        FamilyParams {
            inclusion_prob: (tuples_per_vertex * n as f64 / total).min(1.0),
            coverage_floor: ((coverage_frac * n as f64 - 1e-9).ceil() as usize).max(1),
            size_cap: n / 4,
            overlap: OverlapRule::KeepFirst,
            retries,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inclusion_prob > 0.0 && self.inclusion_prob <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "inclusion probability must lie in (0, 1], got {}",
                self.inclusion_prob
            )));
        }
        Ok(())
    }
}

/// Disjoint absorbers in sampling order, with per-vertex coverage counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberFamily {
    members: Vec<[usize; 4]>,
    coverage: Vec<usize>,
    /// Tuples drawn before deletion.
    pub sampled: usize,
    /// Intersecting pairs among the drawn tuples.
    pub overlapping_pairs: usize,
    /// Attempts used, counting the successful one.
    pub attempts: usize,
}

impl AbsorberFamily {
    /// Checks disjointness and that every member absorbs some vertex.
    pub fn from_members(d: &Digraph, members: Vec<[usize; 4]>) -> Result<Self> {
        let mut seen = d.empty_set();
        for t in &members {
            for &x in t {
                d.check_vertex(x)?;
                if seen.put(x) {
                    return Err(Error::InvalidInput(format!("vertex {x} in two members")));
                }
            }
            if absorbed_by(d, *t).is_clear() {
                return Err(Error::InvalidInput(format!("{t:?} absorbs no vertex")));
            }
        }
        let coverage = coverage_of(d, &members);
        Ok(AbsorberFamily {
            members,
            coverage,
            sampled: 0,
            overlapping_pairs: 0,
            attempts: 1,
        })
    }

    pub fn members(&self) -> &[[usize; 4]] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `|A_v ∩ F|` for every vertex.
    pub fn coverage(&self) -> &[usize] {
        &self.coverage
    }

    /// Worst-covered vertex and its coverage.
    pub fn min_coverage(&self) -> Option<(usize, usize)> {
        self.coverage
            .iter()
            .copied()
            .enumerate()
            .min_by_key(|&(v, c)| (c, v))
    }
}

fn coverage_of(d: &Digraph, members: &[[usize; 4]]) -> Vec<usize> {
    let mut cov = vec![0; d.n()];
    for t in members {
        for v in absorbed_by(d, *t).ones() {
            cov[v] += 1;
        }
    }
    cov
}

fn ordered_tuples(n: usize) -> u64 {
    if n < 4 {
        return 0;
    }
    let n = n as u64;
    n * (n - 1) * (n - 2) * (n - 3)
}

/// Samples a family of disjoint absorbers: every ordered 4-tuple is drawn
/// independently with `inclusion_prob`, then overlapping tuples and tuples
/// absorbing nothing are deleted. The result must respect `size_cap` and
/// cover every vertex at least `coverage_floor` times; otherwise the draw is
/// repeated with a derived seed.
pub fn sample_family(d: &Digraph, params: &FamilyParams, seed: u64) -> Result<AbsorberFamily> {
    params.validate()?;
    let n = d.n();
    if n < 5 {
        return Err(Error::Precondition(format!(
            "absorbers need n >= 5, got {n}"
        )));
    }
    let total = ordered_tuples(n);
    let mut worst: Option<(usize, usize)> = None;
    for attempt in 0..=params.retries {
        let mut rng = seeded(derive_seed(seed, attempt as u64));
        let k = Binomial::new(total, params.inclusion_prob)
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .sample(&mut rng);
        if k > 4 * total / 5 || k > 50_000_000 {
            return Err(Error::InvalidInput(format!(
                "inclusion probability draws {k} of {total} tuples"
            )));
        }
        let mut drawn = HashSet::with_capacity(k as usize);
        let mut tuples = Vec::with_capacity(k as usize);
        while (tuples.len() as u64) < k {
            let t = random_tuple(&mut rng, n);
            if drawn.insert(t) {
                tuples.push(t);
            }
        }
        let mut hits = vec![0usize; n];
        for t in &tuples {
            for &x in t {
                hits[x] += 1;
            }
        }
        let overlapping_pairs = count_overlapping_pairs(&tuples, n);
        let members: Vec<[usize; 4]> = match params.overlap {
            OverlapRule::DeleteAll => tuples
                .iter()
                .filter(|t| t.iter().all(|&x| hits[x] == 1))
                .filter(|t| !absorbed_by(d, **t).is_clear())
                .copied()
                .collect(),
            OverlapRule::KeepFirst => {
                let mut taken = d.empty_set();
                let mut kept = Vec::new();
                for t in &tuples {
                    if t.iter().any(|&x| taken.contains(x)) || absorbed_by(d, *t).is_clear() {
                        continue;
                    }
                    for &x in t {
                        taken.insert(x);
                    }
                    kept.push(*t);
                }
                kept
            }
        };
        let coverage = coverage_of(d, &members);
        let (wv, wc) = coverage
            .iter()
            .copied()
            .enumerate()
            .min_by_key(|&(v, c)| (c, v))
            .expect("n >= 5");
        if members.len() <= params.size_cap && !members.is_empty() && wc >= params.coverage_floor {
            return Ok(AbsorberFamily {
                members,
                coverage,
                sampled: tuples.len(),
                overlapping_pairs,
                attempts: attempt + 1,
            });
        }
        if worst.is_none_or(|(_, c)| wc > c) {
            worst = Some((wv, wc));
        }
    }
    let (worst_vertex, worst_coverage) = worst.expect("at least one attempt");
    Err(Error::FamilyFailure {
        attempts: params.retries + 1,
        worst_vertex,
        worst_coverage,
        floor: params.coverage_floor,
    })
}

fn random_tuple(rng: &mut crate::rng::Rng, n: usize) -> [usize; 4] {
    loop {
        let t = [
            rng.random_range(0..n),
            rng.random_range(0..n),
            rng.random_range(0..n),
            rng.random_range(0..n),
        ];
        let [a, b, c, d] = t;
        if a != b && a != c && a != d && b != c && b != d && c != d {
            return t;
        }
    }
}

/// Unordered pairs of drawn tuples sharing a vertex.
fn count_overlapping_pairs(tuples: &[[usize; 4]], n: usize) -> usize {
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, t) in tuples.iter().enumerate() {
        for &x in t {
            by_vertex[x].push(i);
        }
    }
    let mut pairs = HashSet::new();
    for list in &by_vertex {
        for (k, &i) in list.iter().enumerate() {
            for &j in &list[k + 1..] {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    pairs.len()
}

#[cfg(test)]
mod tests;
