use colorcount::count::{Counter, CountMethod};
use colorcount::cover::{canonical_cover, cover_from_permutations};
use colorcount::graph::{enumerate_small_graphs, Graph};
use colorcount::partial::{FlawThresholds, PartialColoring};
use num_bigint::BigUint;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let chosen: Vec<_> = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
            Graph::from_edge_list(n, &chosen).unwrap()
        })
    })
}

/// Graph, fold, and one permutation per edge.
fn arb_cover(max_n: usize, max_q: usize) -> impl Strategy<Value = (Graph, usize, Vec<Vec<usize>>)> {
    (arb_graph(max_n), 1..=max_q).prop_flat_map(|(g, q)| {
        let m = g.m();
        let perm = Just((0..q).collect::<Vec<usize>>()).prop_shuffle();
        proptest::collection::vec(perm, m).prop_map(move |perms| (g.clone(), q, perms))
    })
}

/// Every map `V → {0..q-1} ∪ {blank}` (blank encoded as `q`), or total maps only.
fn for_each_assignment(n: usize, q: usize, allow_blank: bool, mut visit: impl FnMut(&[usize])) {
    let top = if allow_blank { q + 1 } else { q };
    let mut a = vec![0usize; n];
    loop {
        visit(&a);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            a[i] += 1;
            if a[i] < top {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

fn conflict_free(g: &Graph, q: usize, perms: &[Vec<usize>], a: &[usize]) -> bool {
    g.edges()
        .iter()
        .zip(perms)
        .all(|(&(u, v), p)| a[u] == q || a[v] == q || p[a[u]] != a[v])
}

/// Partner of color `i` at `v` across the edge to `w`.
fn partner(g: &Graph, perms: &[Vec<usize>], v: usize, w: usize, i: usize) -> usize {
    let e = g.edges().iter().position(|&(a, b)| (a, b) == (v.min(w), v.max(w))).unwrap();
    if v < w {
        perms[e][i]
    } else {
        perms[e].iter().position(|&x| x == i).unwrap()
    }
}

fn available(g: &Graph, q: usize, perms: &[Vec<usize>], a: &[usize], v: usize, i: usize) -> bool {
    g.neighbors(v).iter().all(|&w| a[w] == q || partner(g, perms, v, w, i) != a[w])
}

fn flawed(g: &Graph, q: usize, perms: &[Vec<usize>], a: &[usize], v: usize, ell: f64, d: f64) -> bool {
    if a[v] != q {
        return false;
    }
    let list: Vec<usize> = (0..q).filter(|&i| available(g, q, perms, a, v, i)).collect();
    if (list.len() as f64) < ell {
        return true;
    }
    list.iter().any(|&i| {
        let deg = g
            .neighbors(v)
            .iter()
            .filter(|&&w| a[w] == q && available(g, q, perms, a, w, partner(g, perms, v, w, i)))
            .count();
        deg as f64 > d
    })
}

fn ball(g: &Graph, v: usize) -> Vec<usize> {
    let mut out = vec![v];
    for &u in g.neighbors(v) {
        out.push(u);
        out.extend_from_slice(g.neighbors(u));
    }
    out.sort_unstable();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colorings_match_brute_force(g in arb_graph(6), q in 0usize..5) {
        let mut brute = 0u64;
        if q > 0 {
            for_each_assignment(g.n(), q, false, |a| {
                brute += u64::from(g.edges().iter().all(|&(u, v)| a[u] != a[v]));
            });
        }
        let c = Counter::default();
        let e = c.colorings_by_enumeration(&g, q).unwrap();
        let dc = c.colorings_by_deletion_contraction(&g, q).unwrap();
        prop_assert_eq!(&e.value, &BigUint::from(brute));
        prop_assert_eq!(&dc.value, &BigUint::from(brute));
        prop_assert_eq!(dc.method, CountMethod::DeletionContraction);
        if q > 0 {
            let h = c.h_colorings(&canonical_cover(&g, q).unwrap()).unwrap();
            prop_assert_eq!(h.value, BigUint::from(brute));
        }
    }

    #[test]
    fn deletion_contraction_on_larger_graphs(g in arb_graph(8), q in 2usize..5) {
        let c = Counter::default();
        prop_assert_eq!(
            c.colorings_by_enumeration(&g, q).unwrap().value,
            c.colorings_by_deletion_contraction(&g, q).unwrap().value
        );
    }

    #[test]
    fn colorings_monotone_in_q_and_below_independent_sets(g in arb_graph(6)) {
        let c = Counter::default();
        let i = c.independent_sets(&g).unwrap().value;
        let mut brute_i = 0u64;
        for mask in 0u32..1 << g.n() {
            brute_i += u64::from(g.edges().iter().all(|&(u, v)| mask >> u & mask >> v & 1 == 0));
        }
        prop_assert_eq!(&i, &BigUint::from(brute_i));
        let mut prev = BigUint::from(0u32);
        for q in 1..6u32 {
            let now = c.colorings(&g, q as usize).unwrap().value;
            prop_assert!(now >= prev);
            prop_assert!(now <= i.pow(q));
            prev = now;
        }
    }

    #[test]
    fn cover_counts_match_brute_force((g, q, perms) in arb_cover(5, 3)) {
        let cover = cover_from_permutations(&g, q, &perms).unwrap();
        let c = Counter::default();
        let n = g.n();
        let (mut h, mut p) = (0u64, 0u64);
        for_each_assignment(n, q, true, |a| {
            if conflict_free(&g, q, &perms, a) {
                p += 1;
                h += u64::from(a.iter().all(|&x| x < q));
            }
        });
        prop_assert_eq!(c.h_colorings(&cover).unwrap().value, BigUint::from(h));
        prop_assert_eq!(c.partial_colorings(&cover, &vec![true; n]).unwrap().value, BigUint::from(p));
        prop_assert_eq!(c.partial_colorings(&cover, &vec![false; n]).unwrap().value, BigUint::from(1u32));
    }

    #[test]
    fn restricted_partial_counts((g, q, perms) in arb_cover(5, 3), mask in any::<u8>()) {
        let cover = cover_from_permutations(&g, q, &perms).unwrap();
        let n = g.n();
        let in_u: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let mut brute = 0u64;
        for_each_assignment(n, q, true, |a| {
            let inside = (0..n).all(|v| a[v] == q || in_u[v]);
            brute += u64::from(inside && conflict_free(&g, q, &perms, a));
        });
        prop_assert_eq!(Counter::default().partial_colorings(&cover, &in_u).unwrap().value, BigUint::from(brute));
    }

    #[test]
    fn good_counts_match_brute_force(
        (g, q, perms) in arb_cover(5, 3),
        mask in any::<u8>(),
        ell in 0.0f64..3.0,
        d in 0.0f64..3.0,
    ) {
        let cover = cover_from_permutations(&g, q, &perms).unwrap();
        let n = g.n();
        let in_u: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        let scoped: Vec<usize> = (0..n).filter(|&v| ball(&g, v).iter().all(|&w| in_u[w])).collect();
        let mut brute = 0u64;
        for_each_assignment(n, q, true, |a| {
            if conflict_free(&g, q, &perms, a) && scoped.iter().all(|&v| !flawed(&g, q, &perms, a, v, ell, d)) {
                brute += 1;
            }
        });
        let got = Counter::default().good_colorings(&cover, &in_u, FlawThresholds::new(ell, d)).unwrap().value;
        prop_assert_eq!(got, BigUint::from(brute));
    }

    #[test]
    fn completion_counts_match_brute_force((g, q, perms) in arb_cover(5, 3), pick in proptest::collection::vec(0usize..4, 5)) {
        let cover = cover_from_permutations(&g, q, &perms).unwrap();
        let n = g.n();
        let start: Vec<usize> = (0..n).map(|v| pick[v].min(q)).collect();
        if !conflict_free(&g, q, &perms, &start) {
            return Ok(());
        }
        let mut brute = 0u64;
        for_each_assignment(n, q, false, |a| {
            let agrees = (0..n).all(|v| start[v] == q || start[v] == a[v]);
            brute += u64::from(agrees && conflict_free(&g, q, &perms, a));
        });
        let f = PartialColoring::from_assignment(start.iter().map(|&x| (x < q).then_some(x)).collect());
        prop_assert_eq!(Counter::default().completions(&cover, &f).unwrap().value, BigUint::from(brute));
    }
}

#[test]
fn canonical_cover_over_corpus() {
    let c = Counter::default();
    for cg in enumerate_small_graphs(5, |_| true).unwrap() {
        for q in 1..=3 {
            let cover = canonical_cover(&cg.graph, q).unwrap();
            assert_eq!(c.h_colorings(&cover).unwrap().value, c.colorings(&cg.graph, q).unwrap().value, "{}", cg.id);
        }
    }
}

#[test]
fn bipartite_sidorenko_type_inequality() {
    let c = Counter::default();
    for cg in enumerate_small_graphs(5, Graph::is_bipartite).unwrap() {
        let g = &cg.graph;
        for q in 1..=5u32 {
            // c(G,q) · q^m ≥ (q-1)^m · q^n
            let lhs = c.colorings(g, q as usize).unwrap().value * BigUint::from(q).pow(g.m() as u32);
            let rhs = BigUint::from(q - 1).pow(g.m() as u32) * BigUint::from(q).pow(g.n() as u32);
            assert!(lhs >= rhs, "{} q={q}", cg.id);
        }
    }
}

#[test]
fn work_limit_is_reported() {
    let g = Graph::from_edge_list(8, &[(0, 1)]).unwrap();
    let err = Counter::new(10).colorings_by_enumeration(&g, 3).unwrap_err();
    assert!(err.to_string().contains("work limit"), "{err}");
}
