//! Property suites shared by the `properties` and `acceptance` targets.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::Rng;

use revsq::absorbing::{
    absorb, build_absorbing_path, plan_absorption, sample_family, FamilyParams,
};
use revsq::connecting::ConnectParams;
use revsq::digraph::{
    concat, gen_complete, gen_random_semidegree, is_absorber, is_rs_cycle, is_rs_path,
};
use revsq::rng::seeded;
use revsq::{Digraph, RsPath};

pub fn run<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: 10 * cases,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Arcs a sequence needs to be a reverse-square path.
fn require_path(d: &mut Digraph, s: &[usize]) {
    for w in s.windows(2) {
        d.add_arc(w[0], w[1]).unwrap();
    }
    for w in s.windows(3) {
        d.add_arc(w[2], w[0]).unwrap();
    }
}

/// `P` and `Q` glued at a shared end-arc are built separately inside a noisy
/// digraph; their concatenation must be a reverse-square path on exactly the
/// union of their vertices.
pub fn concatenation(cases: u32) -> Result<(), String> {
    let strat = (6usize..40, 0.0f64..0.5, any::<u64>())
        .prop_flat_map(|(n, noise, seed)| (Just(n), 3usize..=n, Just(noise), Just(seed)));
    run(cases, strat, |(n, len, noise, seed)| {
        let mut rng = seeded(seed);
        let mut s: Vec<usize> = (0..n).collect();
        s.shuffle(&mut rng);
        s.truncate(len);
        let i = rng.random_range(0..=len - 2);
        let (p, q) = (&s[..i + 2], &s[i..]);
        let mut d = Digraph::new(n);
        require_path(&mut d, p);
        require_path(&mut d, q);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(noise) {
                    d.add_arc(u, v).unwrap();
                }
            }
        }
        let pp = RsPath::certify(&d, p.to_vec()).map_err(fail)?;
        let qq = RsPath::certify(&d, q.to_vec()).map_err(fail)?;
        let c = concat(&pp, &qq).map_err(fail)?;
        prop_assert_eq!(c.verts(), &s[..]);
        prop_assert!(is_rs_path(&d, c.verts()).unwrap());
        prop_assert_eq!(c.first_end_arc(), pp.first_end_arc());
        prop_assert_eq!(c.last_end_arc(), qq.last_end_arc());

        // a second shared vertex must be refused
        if p.len() >= 3 && q.len() >= 3 {
            let k = gen_complete(n);
            let mut q2 = q.to_vec();
            *q2.last_mut().unwrap() = p[0];
            let pk = RsPath::certify(&k, p.to_vec()).unwrap();
            let qk = RsPath::certify(&k, q2).unwrap();
            prop_assert!(concat(&pk, &qk).is_err());
        }
        Ok(())
    })
}

fn fail(e: revsq::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

/// Absorbing a set `U` keeps both end-arcs and adds exactly `U`.
pub fn absorption(cases: u32) -> Result<(), String> {
    let strat = (30usize..56, any::<u64>(), 1usize..10);
    run(cases, strat, |(n, seed, want)| {
        let d = gen_random_semidegree(n, 0.85, seed).unwrap();
        let fp = FamilyParams::desk(n, 0.6, 0.0, 20);
        let Ok(fam) = sample_family(&d, &fp, seed) else {
            return Err(TestCaseError::reject("no family"));
        };
        let Ok(a) = build_absorbing_path(&d, &fam, &ConnectParams::new(0.1).unwrap()) else {
            return Err(TestCaseError::reject("no absorbing path"));
        };
        let on_path: Vec<bool> = {
            let mut m = vec![false; n];
            for &v in a.path().verts() {
                m[v] = true;
            }
            m
        };
        let mut off: Vec<usize> = (0..n).filter(|&v| !on_path[v]).collect();
        off.shuffle(&mut seeded(seed ^ 0x5a5a));
        let mut u = Vec::new();
        for v in off {
            if u.len() == want {
                break;
            }
            u.push(v);
            if plan_absorption(&a, &u).is_err() {
                u.pop();
            }
        }
        if u.is_empty() {
            return Err(TestCaseError::reject("nothing absorbable"));
        }
        let b = absorb(&d, &a, &u).map_err(fail)?;
        let (pv, bv) = (a.path().verts(), b.path().verts());
        prop_assert!(is_rs_path(&d, bv).unwrap());
        prop_assert_eq!(b.path().first_end_arc(), a.path().first_end_arc());
        prop_assert_eq!(b.path().last_end_arc(), a.path().last_end_arc());
        let mut want_set: Vec<usize> = pv.iter().chain(&u).copied().collect();
        want_set.sort_unstable();
        let mut got: Vec<usize> = bv.to_vec();
        got.sort_unstable();
        prop_assert_eq!(got, want_set);
        Ok(())
    })
}

/// Renaming vertices commutes with all three verifiers.
pub fn relabeling(cases: u32) -> Result<(), String> {
    let strat = (3usize..12, 0.3f64..1.0).prop_flat_map(|(n, p)| {
        let ids: Vec<usize> = (0..n).collect();
        (
            proptest::collection::vec(proptest::bool::weighted(p), n * n),
            Just(ids.clone()).prop_shuffle(),
            Just(ids).prop_shuffle(),
            2usize..=n,
        )
    });
    run(cases, strat, |(adj, perm, order, len)| {
        let n = perm.len();
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && adj[u * n + v] {
                    d.add_arc(u, v).unwrap();
                }
            }
        }
        let e = d.relabel(&perm).unwrap();
        let s = &order[..len];
        let t: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
        prop_assert_eq!(is_rs_path(&d, s).unwrap(), is_rs_path(&e, &t).unwrap());
        if len >= 3 {
            prop_assert_eq!(is_rs_cycle(&d, s).unwrap(), is_rs_cycle(&e, &t).unwrap());
        }
        if len >= 5 {
            let ab = [s[0], s[1], s[2], s[3]];
            let tb = [t[0], t[1], t[2], t[3]];
            prop_assert_eq!(
                is_absorber(&d, ab, s[4]).unwrap(),
                is_absorber(&e, tb, t[4]).unwrap()
            );
        }
        Ok(())
    })
}
