use coregame::graphs::{gen_gnp, Graph};
use coregame::peeling::{k_core, peel, two_core_sequential};
use proptest::prelude::*;

/// Ranks by literally building `G_0, G_1, ...`: `rho(v)` is the first `t`
/// with `deg_{G_t}(v) < k`.
fn brute_ranks(g: &Graph, k: usize) -> (Vec<Option<usize>>, usize) {
    let mut alive = vec![true; g.m()];
    let mut rank = vec![None; g.n()];
    let mut t = 0;
    loop {
        let deg: Vec<usize> = (0..g.n()).map(|v| g.incident(v).iter().filter(|&&e| alive[e]).count()).collect();
        let mut changed = false;
        for v in 0..g.n() {
            if rank[v].is_none() && deg[v] < k {
                rank[v] = Some(t);
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if rank[u].is_some() || rank[v].is_some() {
                alive[e] = false;
            }
        }
        t += 1;
    }
    let t_star = rank.iter().flatten().max().map_or(0, |r| r + 1);
    (rank, t_star)
}

/// Deletes one vertex of degree below `k` at a time, lowest id first.
fn sequential_core(g: &Graph, k: usize) -> Vec<usize> {
    let mut alive = vec![true; g.n()];
    let mut deg = g.degrees();
    loop {
        let Some(v) = (0..g.n()).find(|&v| alive[v] && deg[v] < k) else { break };
        alive[v] = false;
        for &e in g.incident(v) {
            let w = g.other(e, v);
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    (0..g.n()).filter(|&v| alive[v]).collect()
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..25, prop::collection::vec((0usize..25, 0usize..25), 0..70)).prop_map(|(n, raw)| {
        let mut edges: Vec<(usize, usize)> =
            raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        Graph::new(n, edges).unwrap()
    })
}

fn dense_graph() -> impl Strategy<Value = Graph> {
    (6usize..16, prop::collection::vec((0usize..16, 0usize..16), 20..90)).prop_map(|(n, raw)| {
        let mut edges: Vec<(usize, usize)> =
            raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        Graph::new(n, edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ranks_match_the_definition(g in small_graph(), k in 1usize..5) {
        let trace = peel(&g, k, None);
        let (ranks, t_star) = brute_ranks(&g, k);
        let got: Vec<Option<usize>> = trace.ranks.iter().map(|r| r.value().map(|x| x as usize)).collect();
        prop_assert_eq!(got, ranks);
        prop_assert_eq!(trace.t_star, t_star);
        prop_assert!(trace.t_star <= g.n());
    }

    #[test]
    fn parallel_and_sequential_cores_agree(g in small_graph(), k in 1usize..5) {
        let core = k_core(&g, k);
        prop_assert_eq!(core.vertex_map.clone(), sequential_core(&g, k));
        prop_assert!((0..core.core.n()).all(|v| core.core.degree(v) >= k));
    }

    #[test]
    fn surviving_edges_shrink(g in small_graph(), k in 1usize..5) {
        let trace = peel(&g, k, None);
        prop_assert_eq!(trace.per_iteration[0].edges, g.m());
        prop_assert!(trace.per_iteration.windows(2).all(|w| w[1].edges <= w[0].edges));
        for t in 0..=trace.t_star {
            prop_assert_eq!(trace.graph_at(&g, t).m(), trace.per_iteration[t].edges);
        }
    }

    // the chain bound needs host degrees of at least b + 2, as in a (b+2)-core
    #[test]
    fn two_core_chain_holds(g in dense_graph(), pick in prop::collection::vec(any::<bool>(), 16), b in 1usize..3) {
        let host = k_core(&g, b + 2).core;
        let subset: Vec<usize> = (0..host.n()).filter(|&v| pick[v]).collect();
        let report = two_core_sequential(&host, &subset);
        prop_assert!(report.check_chain(b).is_ok(), "{:?}", report.check_chain(b));
        prop_assert!((0..report.two_core.n()).all(|v| report.two_core.degree(v) >= 2));
        if report.chain[0].excess() >= 0 {
            prop_assert!(report.excess >= report.chain[0].excess());
        }
    }
}

#[test]
fn supercritical_core_is_nonempty_and_subcritical_empty() {
    let n = 20_000;
    let sub = gen_gnp(n, 3.0 / n as f64, 1).unwrap();
    let sup = gen_gnp(n, 3.8 / n as f64, 1).unwrap();
    assert_eq!(k_core(&sub, 3).nhat, 0);
    assert!(k_core(&sup, 3).nhat > n / 3);
    let trace = peel(&sub, 3, None);
    assert!(trace.stabilized && trace.core_vertices().is_empty());
}
