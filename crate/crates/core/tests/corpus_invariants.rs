use colorcount::count::Counter;
use colorcount::cover::{canonical_cover, random_cover, DpCover};
use colorcount::graph::{enumerate_graphs, enumerate_small_graphs, Graph};
use colorcount::partial::{flaw_set, greedy_partial_sampler, is_good_on, FlawThresholds, PartialColoring};
use proptest::prelude::*;
use rayon::prelude::*;

#[test]
fn bipartite_implies_triangle_free_up_to_seven_vertices() {
    for n in 1..=7 {
        let bad = enumerate_graphs(n, |g| g.is_bipartite() && !g.is_triangle_free()).unwrap().count();
        assert_eq!(bad, 0, "n = {n}");
    }
}

#[test]
fn canonical_cover_matches_deletion_contraction_up_to_seven_vertices() {
    let corpus = enumerate_small_graphs(7, Graph::is_triangle_free).unwrap();
    assert_eq!(corpus.len(), 1 + 2 + 7 + 41 + 388 + 5789 + 133501);
    let counter = Counter::default();
    let mismatches: Vec<String> = corpus
        .par_iter()
        .flat_map_iter(|cg| {
            (1..=4).filter_map(move |q| {
                let h = counter.h_colorings(&canonical_cover(&cg.graph, q).unwrap()).unwrap().value;
                let c = counter.colorings_by_deletion_contraction(&cg.graph, q).unwrap().value;
                (h != c).then(|| format!("{} q={q}", cg.id))
            })
        })
        .collect();
    assert!(mismatches.is_empty(), "{mismatches:?}");
}

#[test]
fn greedy_sampler_is_always_proper() {
    let corpus = enumerate_small_graphs(5, |_| true).unwrap();
    corpus.par_iter().enumerate().for_each(|(gi, cg)| {
        let g = &cg.graph;
        let order: Vec<usize> = (0..g.n()).rev().collect();
        for q in 1..=3 {
            let cover = random_cover(g, q, gi as u64).unwrap();
            for seed in 0..10_000 {
                let f = greedy_partial_sampler(&cover, &order, seed).unwrap();
                assert!(f.is_proper(&cover), "{} q={q} seed={seed}", cg.id);
                assert!(flaw_set(&cover, &f, FlawThresholds::never()).is_empty());
            }
        }
    });
}

fn cover_strategy() -> impl Strategy<Value = (DpCover, u64)> {
    (0usize..5789, 1usize..4, any::<u64>()).prop_map(|(idx, q, seed)| {
        let g = enumerate_graphs(6, Graph::is_triangle_free).unwrap().nth(idx).unwrap().graph;
        (random_cover(&g, q, seed).unwrap(), seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn serialization_round_trips((cover, seed) in cover_strategy()) {
        let text = cover.to_json();
        prop_assert!(DpCover::from_json(&text).unwrap() == cover);
        prop_assert!(cover.to_raw().validate().is_empty());
        let order: Vec<usize> = (0..cover.n()).collect();
        let f = greedy_partial_sampler(&cover, &order, seed).unwrap();
        prop_assert_eq!(PartialColoring::from_json(&f.to_json(), cover.n()).unwrap(), f);
    }

    #[test]
    fn goodness_is_antitone_and_partial_counts_monotone(
        (cover, seed) in cover_strategy(),
        small in any::<u8>(),
        extra in any::<u8>(),
        ell in 0.0f64..3.0,
        d in 0.0f64..2.0,
    ) {
        let n = cover.n();
        let u: Vec<bool> = (0..n).map(|v| small >> v & 1 == 1).collect();
        let big: Vec<bool> = (0..n).map(|v| u[v] || extra >> v & 1 == 1).collect();
        let t = FlawThresholds::new(ell, d);
        let order: Vec<usize> = (0..n).collect();
        for s in 0..20 {
            let f = greedy_partial_sampler(&cover, &order, seed.wrapping_add(s)).unwrap();
            if is_good_on(&cover, &f, &big, t) {
                prop_assert!(is_good_on(&cover, &f, &u, t));
            }
        }
        let c = Counter::default();
        prop_assert!(c.partial_colorings(&cover, &u).unwrap().value <= c.partial_colorings(&cover, &big).unwrap().value);
        prop_assert!(c.good_colorings(&cover, &big, t).unwrap().value <= c.good_colorings(&cover, &u, t).unwrap().value);
    }
}
