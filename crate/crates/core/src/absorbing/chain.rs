use super::{absorbed_by, AbsorberFamily};
use crate::connecting::{connect_avoiding, ConnectParams};
use crate::constants::floor_tol;
use crate::digraph::{concat, Digraph, RsPath};
use crate::error::{Error, Result};

/// A reverse-square path containing a family of absorbers as consecutive
/// 4-segments, together with which of them are still unused.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorbingPath {
    path: RsPath,
    members: Vec<[usize; 4]>,
    /// `free[v]`: unused members absorbing `v`, for `v` off the path.
    free: Vec<Vec<usize>>,
    used: Vec<bool>,
    connector_orders: Vec<usize>,
}

impl AbsorbingPath {
    pub fn path(&self) -> &RsPath {
        &self.path
    }

    pub fn into_path(self) -> RsPath {
        self.path
    }

    pub fn members(&self) -> &[[usize; 4]] {
        &self.members
    }

    /// Indices into [`members`](Self::members) still usable for `v`.
    pub fn free_absorbers(&self, v: usize) -> &[usize] {
        self.free.get(v).map_or(&[], |l| l.as_slice())
    }

    pub fn is_used(&self, member: usize) -> bool {
        self.used[member]
    }

    pub fn used_count(&self) -> usize {
        self.used.iter().filter(|&&u| u).count()
    }

    /// Orders of the connectors inserted between consecutive members.
    pub fn connector_orders(&self) -> &[usize] {
        &self.connector_orders
    }
}

/// Chains the members of `family` in order into
/// `F1 ∘ P1 ∘ F2 ∘ … ∘ Ff`. Each connector avoids every vertex already on the
/// path and every member not yet chained, and has order at most
/// `min(⌊8/γ⌋, n)` unless `p.order_cap` says otherwise.
pub fn build_absorbing_path(
    d: &Digraph,
    family: &AbsorberFamily,
    p: &ConnectParams,
) -> Result<AbsorbingPath> {
    let members = family.members().to_vec();
    let Some(first) = members.first() else {
        return Err(Error::Precondition("absorber family is empty".into()));
    };
    let mut cp = p.clone();
    if cp.order_cap.is_none() {
        cp.order_cap = Some(floor_tol(8.0 / p.gamma).min(d.n()));
    }
    let mut forbidden = d.empty_set();
    for t in &members {
        for &x in t {
            forbidden.insert(x);
        }
    }
    let mut running = RsPath::certify(d, first.to_vec())?;
    let mut connector_orders = Vec::with_capacity(members.len().saturating_sub(1));
    for (i, t) in members.iter().enumerate().skip(1) {
        let next = RsPath::certify(d, t.to_vec())?;
        let q = connect_avoiding(
            d,
            running.last_end_arc(),
            next.first_end_arc(),
            &forbidden,
            &cp,
        )
        .map_err(|e| Error::ConstructionFailure {
            junction: i,
            reason: e.to_string(),
        })?;
        for &x in q.verts() {
            forbidden.insert(x);
        }
        connector_orders.push(q.len());
        running = concat(&concat(&running, &q)?, &next)?;
    }

    let n = d.n();
    let mut on_path = d.empty_set();
    for &x in running.verts() {
        on_path.insert(x);
    }
    let mut free = vec![Vec::new(); n];
    for (m, t) in members.iter().enumerate() {
        for v in absorbed_by(d, *t).ones().filter(|&v| !on_path.contains(v)) {
            free[v].push(m);
        }
    }
    let used = vec![false; members.len()];
    Ok(AbsorbingPath {
        path: running,
        members,
        free,
        used,
        connector_orders,
    })
}

/// Assigns every vertex of `u` a distinct free absorber (a maximum bipartite
/// matching, so the assignment exists whenever any does). Fails naming the
/// first vertex that cannot be matched.
pub fn plan_absorption(a: &AbsorbingPath, u: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mut owner: Vec<Option<usize>> = vec![None; a.members.len()];
    for (i, &x) in u.iter().enumerate() {
        let mut seen = vec![false; a.members.len()];
        if !augment(a, u, i, &mut owner, &mut seen) {
            return Err(Error::AbsorptionFailure { vertex: x });
        }
    }
    let mut plan: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter_map(|(m, o)| o.map(|i| (u[i], m)))
        .collect();
    plan.sort_by_key(|&(x, _)| u.iter().position(|&y| y == x));
    Ok(plan)
}

fn augment(
    a: &AbsorbingPath,
    u: &[usize],
    i: usize,
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &m in a.free_absorbers(u[i]) {
        if seen[m] {
            continue;
        }
        seen[m] = true;
        let free = match owner[m] {
            None => true,
            Some(j) => augment(a, u, j, owner, seen),
        };
        if free {
            owner[m] = Some(i);
            return true;
        }
    }
    false
}

/// Splices every vertex of `u` into its own free absorber, `abcd → abucd`.
/// The end-arcs stay the same and the vertex set grows by exactly `u`.
pub fn absorb(d: &Digraph, a: &AbsorbingPath, u: &[usize]) -> Result<AbsorbingPath> {
    let mut on_path = d.empty_set();
    for &x in a.path.verts() {
        on_path.insert(x);
    }
    let mut seen = d.empty_set();
    for &x in u {
        d.check_vertex(x)?;
        if on_path.contains(x) {
            return Err(Error::Precondition(format!(
                "vertex {x} already on the absorbing path"
            )));
        }
        if seen.put(x) {
            return Err(Error::InvalidInput(format!("vertex {x} listed twice")));
        }
    }
    let plan = plan_absorption(a, u)?;

    let mut seq = a.path.verts().to_vec();
    let mut used = a.used.clone();
    for &(x, m) in &plan {
        let t = a.members[m];
        let pos = seq
            .iter()
            .position(|&y| y == t[0])
            .filter(|&p| seq.get(p..p + 4) == Some(&t[..]))
            .ok_or_else(|| {
                Error::Precondition(format!("absorber {t:?} is not a segment of the path"))
            })?;
        seq.insert(pos + 2, x);
        used[m] = true;
    }
    let path = RsPath::certify(d, seq)?;
    if path.first_end_arc() != a.path.first_end_arc()
        || path.last_end_arc() != a.path.last_end_arc()
    {
        return Err(Error::Precondition("absorption changed an end-arc".into()));
    }
    let mut free = a.free.clone();
    for list in &mut free {
        list.retain(|&m| !used[m]);
    }
    for &x in u {
        free[x].clear();
    }
    Ok(AbsorbingPath {
        path,
        members: a.members.clone(),
        free,
        used,
        connector_orders: a.connector_orders.clone(),
    })
}
