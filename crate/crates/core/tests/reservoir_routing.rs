use rand::seq::SliceRandom;

use revsq::connecting::ConnectParams;
use revsq::digraph::{gen_random_semidegree, is_rs_path};
use revsq::reservoir::{reservoir_connect, sample_reservoir_best_effort};
use revsq::rng::seeded;
use revsq::Arc;

/// A long run of connections through one reservoir: every path is valid,
/// keeps its end-arcs, routes only through free reservoir vertices, and no
/// two interiors meet.
#[test]
fn hundred_sequential_connections() {
    let n = 500;
    let d = gen_random_semidegree(n, 0.77, 21).unwrap();
    // connections here average about 1.4 reservoir vertices each, so R is
    // sized for 100 of them rather than at the 5% used inside the pipeline
    let size = 200;
    let r = sample_reservoir_best_effort(&d, &d.empty_set(), size, 0.1, 22, 0).unwrap();
    let mut r = r.with_forbidden_budget(size);
    let p = ConnectParams::new(0.1).unwrap();

    let mut outside: Vec<usize> = (0..n).filter(|&v| !r.verts().contains(v)).collect();
    let mut rng = seeded(23);
    let arc_from = |pool: &[usize]| -> Arc {
        let u = pool[0];
        let v = *pool[1..].iter().find(|&&v| d.has_arc(u, v)).unwrap();
        Arc { tail: u, head: v }
    };
    let mut claimed = vec![false; n];
    let mut interior_total = 0;
    for i in 0..100 {
        outside.shuffle(&mut rng);
        let ab = arc_from(&outside);
        let rest: Vec<usize> = outside
            .iter()
            .copied()
            .filter(|&v| v != ab.tail && v != ab.head)
            .collect();
        let cd = arc_from(&rest);
        let free_before = r.free();
        let q = reservoir_connect(&d, &mut r, ab, cd, &p)
            .unwrap_or_else(|e| panic!("connection {i}: {e}"));
        assert!(is_rs_path(&d, q.verts()).unwrap());
        assert_eq!(q.first_end_arc(), ab);
        assert_eq!(q.last_end_arc(), cd);
        for &x in &q.verts()[2..q.len() - 2] {
            assert!(free_before.contains(x), "connection {i} reused {x}");
            assert!(!std::mem::replace(&mut claimed[x], true));
            interior_total += 1;
        }
    }
    assert_eq!(r.used_count(), interior_total);
}
