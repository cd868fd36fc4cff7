use super::*;
use crate::connecting::ConnectParams;
use crate::digraph::{gen_complete, gen_random_semidegree, is_absorber, is_rs_path};
use crate::oracle::bf_count_absorbers;

#[test]
fn complete_enumeration_respects_limit() {
    let d = gen_complete(9);
    let abs = enumerate_absorbers(&d, 4, Some(10)).unwrap();
    assert_eq!(abs.len(), 10);
    for t in abs {
        assert_eq!(is_absorber(&d, t, 4), Ok(true));
    }
}

#[test]
fn no_in_neighbours_no_absorbers() {
    let mut d = gen_complete(8);
    for u in 1..8 {
        d.remove_arc(u, 0);
    }
    assert!(enumerate_absorbers(&d, 0, None).unwrap().is_empty());
    assert!(enumerate_absorbers(&gen_complete(4), 0, None)
        .unwrap()
        .is_empty());
    assert!(enumerate_absorbers(&d, 8, None).is_err());
}

#[test]
fn enumeration_matches_brute_force_count() {
    for seed in 0..6 {
        let n = 12 + 2 * seed as usize;
        let d = gen_random_semidegree(n, 0.7, seed).unwrap();
        for v in [0, n / 2, n - 1] {
            let all = enumerate_absorbers(&d, v, None).unwrap();
            assert_eq!(all.len() as u64, bf_count_absorbers(&d, v).unwrap());
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }
}

#[test]
fn absorbed_by_agrees_with_verifier() {
    let d = gen_random_semidegree(14, 0.65, 5).unwrap();
    let mut rng = seeded(1);
    for _ in 0..400 {
        let t = random_tuple(&mut rng, 14);
        let s = absorbed_by(&d, t);
        for v in (0..14).filter(|v| !t.contains(v)) {
            assert_eq!(s.contains(v), is_absorber(&d, t, v).unwrap());
        }
    }
}

fn check_family(d: &Digraph, f: &AbsorberFamily) {
    let mut seen = d.empty_set();
    for t in f.members() {
        for &x in t {
            assert!(!seen.put(x));
        }
    }
    for v in 0..d.n() {
        let direct = f
            .members()
            .iter()
            .filter(|t| !t.contains(&v) && is_absorber(d, **t, v).unwrap())
            .count();
        assert_eq!(f.coverage()[v], direct);
    }
}

#[test]
fn complete_family_covers_everything() {
    let d = gen_complete(60);
    let p = FamilyParams::desk(60, 0.25, 0.02, 5);
    let f = sample_family(&d, &p, 17).unwrap();
    check_family(&d, &f);
    // in a complete digraph each member absorbs every vertex outside it
    for v in 0..60 {
        let inside = f.members().iter().any(|t| t.contains(&v)) as usize;
        assert_eq!(f.coverage()[v], f.len() - inside);
    }
    assert_eq!(f, sample_family(&d, &p, 17).unwrap());
}

#[test]
fn random_family_is_disjoint_and_consistent() {
    let d = gen_random_semidegree(80, 0.8, 2).unwrap();
    for (rule, per_vertex) in [
        (OverlapRule::KeepFirst, 0.3),
        (OverlapRule::DeleteAll, 0.06),
    ] {
        let mut p = FamilyParams::desk(80, per_vertex, 0.0, 30);
        p.overlap = rule;
        p.coverage_floor = 0;
        let f = sample_family(&d, &p, 4).unwrap();
        check_family(&d, &f);
        assert!(f.sampled >= f.len());
    }
}

#[test]
fn unreachable_floor_reports_worst_vertex() {
    let d = gen_random_semidegree(30, 0.8, 3).unwrap();
    let mut p = FamilyParams::desk(30, 0.2, 0.0, 2);
    p.coverage_floor = 100;
    match sample_family(&d, &p, 0) {
        Err(Error::FamilyFailure {
            attempts,
            floor,
            worst_vertex,
            ..
        }) => {
            assert_eq!(attempts, 3);
            assert_eq!(floor, 100);
            assert!(worst_vertex < 30);
        }
        other => panic!("expected family failure, got {other:?}"),
    }
}

#[test]
fn paper_params_are_vacuous_at_desk_scale() {
    let p = FamilyParams::paper(200, 0.1, 0);
    assert_eq!(p.size_cap, 0);
    assert_eq!(p.coverage_floor, 1);
    assert!((p.inclusion_prob - 1e-4 / 8e6).abs() < 1e-18);
}

#[test]
fn from_members_validates() {
    let d = gen_complete(10);
    assert!(AbsorberFamily::from_members(&d, vec![[0, 1, 2, 3], [3, 4, 5, 6]]).is_err());
    let mut sparse = gen_complete(10);
    sparse.remove_arc(2, 1);
    assert!(AbsorberFamily::from_members(&sparse, vec![[0, 1, 2, 3]]).is_err());
    let f = AbsorberFamily::from_members(&d, vec![[0, 1, 2, 3], [4, 5, 6, 7]]).unwrap();
    assert_eq!(f.coverage()[9], 2);
    assert_eq!(f.coverage()[0], 1);
    assert_eq!(f.min_coverage(), Some((0, 1)));
}

#[test]
fn single_member_path() {
    let d = gen_complete(10);
    let f = AbsorberFamily::from_members(&d, vec![[5, 2, 7, 1]]).unwrap();
    let a = build_absorbing_path(&d, &f, &ConnectParams::default()).unwrap();
    assert_eq!(a.path().verts(), &[5, 2, 7, 1]);
    assert!(a.connector_orders().is_empty());
    let empty = AbsorberFamily::from_members(&d, vec![]).unwrap();
    assert!(build_absorbing_path(&d, &empty, &ConnectParams::default()).is_err());
}

#[test]
fn complete_three_members() {
    let d = gen_complete(20);
    let members = vec![[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]];
    let f = AbsorberFamily::from_members(&d, members.clone()).unwrap();
    let a = build_absorbing_path(&d, &f, &ConnectParams::default()).unwrap();
    assert_eq!(is_rs_path(&d, a.path().verts()), Ok(true));
    for t in &members {
        let pos = a.path().verts().iter().position(|&x| x == t[0]).unwrap();
        assert_eq!(&a.path().verts()[pos..pos + 4], &t[..]);
    }
    assert_eq!(a.path().len(), 12);
}

#[test]
fn absorb_nothing_and_one() {
    let d = gen_complete(5);
    let f = AbsorberFamily::from_members(&d, vec![[0, 1, 2, 3]]).unwrap();
    let a = build_absorbing_path(&d, &f, &ConnectParams::default()).unwrap();
    let same = absorb(&d, &a, &[]).unwrap();
    assert_eq!(same.path(), a.path());
    let b = absorb(&d, &a, &[4]).unwrap();
    assert_eq!(b.path().verts(), &[0, 1, 4, 2, 3]);
    assert!(b.is_used(0));
    assert!(matches!(absorb(&d, &a, &[2]), Err(Error::Precondition(_))));
    // the only absorber is gone now
    let d6 = gen_complete(6);
    let f6 = AbsorberFamily::from_members(&d6, vec![[0, 1, 2, 3]]).unwrap();
    let a6 = build_absorbing_path(&d6, &f6, &ConnectParams::default()).unwrap();
    assert_eq!(
        absorb(&d6, &a6, &[4, 5]),
        Err(Error::AbsorptionFailure { vertex: 5 })
    );
}

#[test]
fn matching_reassigns_absorbers() {
    // member 0 absorbs 8 and 9, member 1 absorbs only 8
    let mut d = gen_complete(10);
    for (u, v) in [(5, 9), (9, 6), (9, 4), (7, 9)] {
        d.remove_arc(u, v);
    }
    let f = AbsorberFamily::from_members(&d, vec![[0, 1, 2, 3], [4, 5, 6, 7]]).unwrap();
    let a = build_absorbing_path(&d, &f, &ConnectParams::default()).unwrap();
    assert_eq!(a.free_absorbers(9), &[0]);
    let plan = plan_absorption(&a, &[8, 9]).unwrap();
    assert_eq!(plan, vec![(8, 1), (9, 0)]);
    let b = absorb(&d, &a, &[8, 9]).unwrap();
    assert_eq!(b.path().len(), a.path().len() + 2);
    assert_eq!(b.path().first_end_arc(), a.path().first_end_arc());
    assert_eq!(b.path().last_end_arc(), a.path().last_end_arc());
}

#[test]
fn random_instance_absorbs_leftover() {
    let n = 120;
    let d = gen_random_semidegree(n, 0.8, 21).unwrap();
    let mut fp = FamilyParams::desk(n, 0.4, 0.0, 20);
    fp.coverage_floor = 0;
    let f = sample_family(&d, &fp, 3).unwrap();
    let a = build_absorbing_path(&d, &f, &ConnectParams::new(0.1).unwrap()).unwrap();
    let mut on = d.empty_set();
    for &x in a.path().verts() {
        on.insert(x);
    }
    let outside: Vec<usize> = (0..n).filter(|&v| !on.contains(v)).collect();
    let u: Vec<usize> = outside.iter().copied().take(3).collect();
    let b = absorb(&d, &a, &u).unwrap();
    assert_eq!(is_rs_path(&d, b.path().verts()), Ok(true));
    let mut expect: Vec<usize> = a.path().verts().iter().chain(&u).copied().collect();
    let mut got = b.path().verts().to_vec();
    expect.sort_unstable();
    got.sort_unstable();
    assert_eq!(expect, got);
    assert_eq!(b.used_count(), 3);
}
