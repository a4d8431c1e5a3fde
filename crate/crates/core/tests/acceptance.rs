use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use colorcount::bounds::{self, main_lower_bound, partial_bound_exact};
use colorcount::count::{vertex_set, Counter};
use colorcount::coupon::{
    exact_expected_survivors, jensen_lower_bound, negative_correlation_violations, rational_to_f64, rho_sum,
};
use colorcount::cover::{canonical_cover, cover_from_permutations, random_cover};
use colorcount::graph::{enumerate_small_graphs, CorpusGraph, Graph, NamedGraph};
use colorcount::numeric::agrees_to;
use colorcount::partial::{complete_good, greedy_partial_sampler, lll_condition, FlawThresholds, DEFAULT_MAX_ROUNDS};
use colorcount::regular::{
    all_pairings, estimate_expected_colorings, exact_expected_colorings, generator_algorithm1, sample_pairing, Pairing,
};
use colorcount::stats::{chi_square_two_sample, chi_square_uniform};
use colorcount::CouponInstance;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn triangle_free_corpus() -> Vec<CorpusGraph> {
    enumerate_small_graphs(6, Graph::is_triangle_free).expect("n ≤ 7")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big_rat(x: &BigUint) -> BigRational {
    BigRational::from_integer(x.clone().into())
}

fn partial_coloring_bound() -> Outcome {
    let counter = Counter::default();
    let corpus = triangle_free_corpus();
    let mut checks = 0;
    for (idx, cg) in corpus.iter().enumerate() {
        let g = &cg.graph;
        let all = vec![true; g.n()];
        for q in 1..=4 {
            let bound = partial_bound_exact(g.n(), g.m(), q);
            let covers = [
                canonical_cover(g, q).map_err(|e| e.to_string())?,
                random_cover(g, q, idx as u64 * 4 + q as u64).map_err(|e| e.to_string())?,
            ];
            for cover in &covers {
                let count = counter.partial_colorings(cover, &all).map_err(|e| e.to_string())?.value;
                ensure(big_rat(&count) >= bound, || format!("{} q={q}: |pcol|={count} < {bound}", cg.id))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{} graphs, {checks} exact comparisons", corpus.len()))
}

fn main_bound_petersen() -> Outcome {
    let g = NamedGraph::Petersen.build().map_err(|e| e.to_string())?;
    let counter = Counter::default();
    let expected: [(usize, u64); 3] = [(12, 16774966560), (16, 417515696640), (20, 4743687388320)];
    let mut parts = Vec::new();
    for (q, want) in expected {
        let c = counter.colorings_by_deletion_contraction(&g, q).map_err(|e| e.to_string())?.value;
        ensure(c == BigUint::from(want), || format!("q={q}: c={c}, expected {want}"))?;
        let b = main_lower_bound(g.n(), g.m(), g.max_degree(), q).map_err(|e| e.to_string())?;
        ensure(!b.vacuous, || format!("q={q}: bound unexpectedly vacuous"))?;
        ensure(b.is_met_by(&c, 10), || format!("q={q}: ln c={} < {}", colorcount::numeric::ln_big(&c), b.log_value))?;
        parts.push(format!("q={q} ln c={:.4} ≥ {:.4}", colorcount::numeric::ln_big(&c), b.log_value));
    }
    Ok(parts.join("; "))
}

fn bipartite_baseline() -> Outcome {
    let counter = Counter::default();
    let corpus = enumerate_small_graphs(6, Graph::is_bipartite).map_err(|e| e.to_string())?;
    for cg in &corpus {
        let g = &cg.graph;
        for q in 1..=4 {
            let c = counter.colorings(g, q).map_err(|e| e.to_string())?.value;
            let bound = partial_bound_exact(g.n(), g.m(), q);
            ensure(big_rat(&c) >= bound, || format!("{} q={q}: c={c} < {bound}", cg.id))?;
        }
    }
    Ok(format!("{} bipartite graphs, q ≤ 4", corpus.len()))
}

fn independent_set_chain() -> Outcome {
    let counter = Counter::default();
    let corpus = triangle_free_corpus();
    for cg in &corpus {
        let g = &cg.graph;
        let i = counter.independent_sets(g).map_err(|e| e.to_string())?.value;
        for q in 1..=4u32 {
            let c = counter.colorings(g, q as usize).map_err(|e| e.to_string())?.value;
            ensure(c <= i.pow(q), || format!("{} q={q}: c={c} > i^q", cg.id))?;
        }
    }
    let c5 = counter.independent_sets(&NamedGraph::Cycle(5).build().unwrap()).unwrap().value;
    let p3 = counter.independent_sets(&NamedGraph::Path(3).build().unwrap()).unwrap().value;
    ensure(c5 == BigUint::from(11u32) && p3 == BigUint::from(5u32), || {
        format!("i(C5)={c5}, i(P3)={p3}")
    })?;
    Ok(format!("{} graphs; i(C5)=11, i(P3)=5", corpus.len()))
}

fn permutations(q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..q).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(q, &mut p, &mut out);
    out
}

fn random_cover_expectation() -> Outcome {
    let counter = Counter::default();
    let graphs = [
        ("K2", NamedGraph::Complete(2)),
        ("P3", NamedGraph::Path(3)),
        ("C4", NamedGraph::Cycle(4)),
    ];
    let mut parts = Vec::new();
    for (name, named) in graphs {
        let g = named.build().map_err(|e| e.to_string())?;
        for q in [2usize, 3] {
            let perms = permutations(q);
            let m = g.m();
            let mut total = BigUint::from(0u32);
            let mut covers = 0u64;
            let mut idx = vec![0usize; m];
            loop {
                let chosen: Vec<Vec<usize>> = idx.iter().map(|&i| perms[i].clone()).collect();
                let cover = cover_from_permutations(&g, q, &chosen).map_err(|e| e.to_string())?;
                total += counter.h_colorings(&cover).map_err(|e| e.to_string())?.value;
                covers += 1;
                let mut i = 0;
                while i < m {
                    idx[i] += 1;
                    if idx[i] < perms.len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == m {
                    break;
                }
            }
            let mean = BigRational::new(total.into(), BigUint::from(covers).into());
            let bound = partial_bound_exact(g.n(), m, q);
            ensure(mean == bound, || format!("{name} q={q}: average {mean} ≠ {bound}"))?;
            let mut min: Option<BigUint> = None;
            for seed in 0..200 {
                let cover = random_cover(&g, q, seed).map_err(|e| e.to_string())?;
                let c = counter.h_colorings(&cover).map_err(|e| e.to_string())?.value;
                min = Some(min.map_or(c.clone(), |x: BigUint| x.min(c)));
            }
            let min = min.expect("samples drawn");
            ensure(big_rat(&min) <= bound, || format!("{name} q={q}: sample minimum {min} > {bound}"))?;
            parts.push(format!("{name}/q{q}={mean}"));
        }
    }
    Ok(parts.join(" "))
}

fn random_coupon_instances(count: usize, max_q: usize, max_k: usize, limit: u64, seed: u64) -> Vec<CouponInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let q = rng.random_range(1..=max_q);
        let k = rng.random_range(1..=max_k);
        let inst = CouponInstance::random(q, k, &mut rng);
        if inst.state_space() <= BigUint::from(limit) {
            out.push(inst);
        }
    }
    out
}

fn coupon_oracle() -> Outcome {
    let instances = random_coupon_instances(200, 8, 8, 1_000_000, 61);
    let mut largest = 0u64;
    for (n, inst) in instances.iter().enumerate() {
        let mut survivors = BigUint::from(0u32);
        inst.for_each_draw(|draw| survivors += inst.outcome_of(draw).survivors.len());
        let space = inst.state_space();
        largest = largest.max(space.to_u64().unwrap_or(u64::MAX));
        let brute = BigRational::new(survivors.into(), space.into());
        let exact = exact_expected_survivors(inst);
        ensure(brute == exact, || format!("instance {n}: enumeration {brute} ≠ formula {exact}"))?;
        let k = inst.k();
        ensure(rho_sum(inst) <= BigRational::from_integer(k.into()), || {
            format!("instance {n}: Σρ = {} > k = {k}", rho_sum(inst))
        })?;
        let e = rational_to_f64(&exact);
        let jensen = jensen_lower_bound(inst.q, k);
        ensure(e >= jensen || agrees_to(e, jensen, 12), || {
            format!("instance {n}: E = {e} < q·exp(-k/q) = {jensen}")
        })?;
    }
    Ok(format!("200 instances, largest state space {largest}"))
}

fn negative_correlation() -> Outcome {
    let instances = random_coupon_instances(50, 6, 6, 200_000, 71);
    for (n, inst) in instances.iter().enumerate() {
        let bad = negative_correlation_violations(inst, 3);
        ensure(bad.is_empty(), || format!("instance {n}: violations {:?}", bad))?;
    }
    Ok("50 instances, all subsets |I| ≤ 3".into())
}

fn pairing_uniformity() -> Outcome {
    const TRIALS: u64 = 100_000;
    const ALPHA: f64 = 1e-3;
    let shapes: [(usize, usize); 6] = [(2, 2), (4, 1), (3, 2), (2, 3), (4, 2), (2, 4)];
    let mut parts = Vec::new();
    for (shape, (n, delta)) in shapes.into_iter().enumerate() {
        let base = 10_000_000 * shape as u64;
        let all = all_pairings(n, delta).map_err(|e| e.to_string())?;
        let index: HashMap<Pairing, usize> = all.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let coloring: Vec<Option<usize>> = (0..n).map(|v| Some(usize::from(v % 3 == 1))).collect();
        let mut direct = vec![0u64; all.len()];
        let mut generated = vec![0u64; all.len()];
        for t in 0..TRIALS {
            let p = sample_pairing(n, delta, base + t).map_err(|e| e.to_string())?;
            direct[index[&p]] += 1;
            let (p, _) = generator_algorithm1(n, delta, 2, &coloring, base + 5_000_000 + t).map_err(|e| e.to_string())?;
            generated[index[&p]] += 1;
        }
        let a = chi_square_uniform(&direct);
        let b = chi_square_uniform(&generated);
        let ab = chi_square_two_sample(&direct, &generated);
        for (label, r) in [("sample_pairing", a), ("generator", b), ("two-sample", ab)] {
            ensure(r.p_value > ALPHA, || {
                format!("n={n} Δ={delta} {label}: χ²={:.2} dof={} p={:.2e}", r.statistic, r.dof, r.p_value)
            })?;
        }
        parts.push(format!("n={n} Δ={delta} ({} pairings) p={:.3}/{:.3}", all.len(), a.p_value, b.p_value));
    }
    Ok(parts.join("; "))
}

fn markov_mechanism() -> Outcome {
    let counter = Counter::default();
    let est = estimate_expected_colorings(10, 3, 3, 500, 2024, &counter).map_err(|e| e.to_string())?;
    ensure(est.mean + 3.0 * est.stderr <= est.ceiling, || {
        format!("mean {:.2} ± {:.2} not 3 SE below {:.2}", est.mean, est.stderr, est.ceiling)
    })?;
    let exact = exact_expected_colorings(2, 2, 2, &counter).map_err(|e| e.to_string())?;
    // independent oracle: brute force over the three pairings of four points
    let mut total = 0u32;
    let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    for p in pairings {
        for colors in 0..4u32 {
            let c = [colors & 1, colors >> 1];
            if p.iter().all(|&(a, b)| c[a / 2] != c[b / 2]) {
                total += 1;
            }
        }
    }
    let oracle = BigRational::new(total.into(), 3.into());
    ensure(exact == oracle, || format!("tiny case {exact} ≠ {oracle}"))?;
    Ok(format!(
        "mean {:.2} ± {:.2} vs ceiling {:.2} ({:.1} SE margin); tiny E[X] = {exact}",
        est.mean,
        est.stderr,
        est.ceiling,
        (est.ceiling - est.mean) / est.stderr
    ))
}

fn completion_correctness() -> Outcome {
    let corpus = triangle_free_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut total_rounds = 0u64;
    for run in 0..1000u64 {
        let cg = &corpus[rng.random_range(0..corpus.len())];
        let g = &cg.graph;
        let delta = g.max_degree();
        let q = delta + 1 + rng.random_range(0..3);
        let cover = random_cover(g, q, run).map_err(|e| e.to_string())?;
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.shuffle(&mut rng);
        let start = greedy_partial_sampler(&cover, &order, run).map_err(|e| e.to_string())?;
        let t = FlawThresholds::new(bounds::ell(delta.max(1), q), bounds::d_threshold(delta.max(1), q));
        let done = complete_good(&cover, &start, t, run, DEFAULT_MAX_ROUNDS).map_err(|e| format!("{}: {e}", cg.id))?;
        let f = &done.coloring;
        ensure(f.is_total() && f.is_proper(&cover) && start.is_completed_by(f), || {
            format!("run {run} on {}: output is not a proper total completion", cg.id)
        })?;
        total_rounds += done.rounds;
    }
    let limit = 2.0 * std::f64::consts::E / 25.0;
    let mut products = Vec::new();
    for delta in [50usize, 100, 200] {
        let check = lll_condition(bounds::ell(delta, delta), bounds::d_threshold(delta, delta)).map_err(|e| e.to_string())?;
        ensure(check.satisfied, || format!("Δ={delta}: e·p·(D+1) = {} > 1", check.product))?;
        products.push(check.product);
    }
    ensure(products.windows(2).all(|w| w[1] < w[0]), || format!("not decreasing: {products:?}"))?;
    ensure(products[1..].iter().all(|p| (p - limit).abs() <= 0.05), || {
        format!("products {products:?} not within 0.05 of {limit:.4}")
    })?;
    Ok(format!(
        "1000 completions ({total_rounds} resamples); e·p·(D+1) = {:.4}, {:.4}, {:.4} → {limit:.4}",
        products[0], products[1], products[2]
    ))
}

fn structural_monotonicity() -> Outcome {
    let corpus = triangle_free_corpus();
    let counter = Counter::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut strict = 0;
    for run in 0..100u64 {
        let cg = &corpus[rng.random_range(0..corpus.len())];
        let g = &cg.graph;
        let n = g.n();
        let q = rng.random_range(2..=4);
        let cover = random_cover(g, q, run).map_err(|e| e.to_string())?;
        let delta = g.max_degree().max(1);
        let t = FlawThresholds::new(bounds::ell(delta, q), bounds::d_threshold(delta, q));
        let x = rng.random_range(0..n);
        let u: Vec<usize> = (0..n).filter(|&v| v != x && rng.random_bool(0.6)).collect();
        let in_u = vertex_set(n, &u).map_err(|e| e.to_string())?;
        let mut in_ux = in_u.clone();
        in_ux[x] = true;
        let small = counter.good_colorings(&cover, &in_u, t).map_err(|e| e.to_string())?.value;
        let large = counter.good_colorings(&cover, &in_ux, t).map_err(|e| e.to_string())?.value;
        ensure(large <= small, || format!("run {run} {}: |gcol(U+x)|={large} > |gcol(U)|={small}", cg.id))?;
        strict += usize::from(large < small);
        let empty = counter.good_colorings(&cover, &vec![false; n], t).map_err(|e| e.to_string())?.value;
        let pcol = counter.partial_colorings(&cover, &vec![true; n]).map_err(|e| e.to_string())?.value;
        ensure(empty == pcol, || format!("run {run} {}: gcol(∅)={empty} ≠ pcol={pcol}", cg.id))?;
    }
    Ok(format!("100 instances, {strict} strict decreases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("partial-coloring lower bound over triangle-free corpus", partial_coloring_bound),
        ("main lower bound on the Petersen graph", main_bound_petersen),
        ("bipartite baseline", bipartite_baseline),
        ("independent-set chain", independent_set_chain),
        ("random-cover expectation", random_cover_expectation),
        ("coupon expectation oracle", coupon_oracle),
        ("negative correlation", negative_correlation),
        ("pairing uniformity", pairing_uniformity),
        ("first-moment ceiling for random regular graphs", markov_mechanism),
        ("completion correctness and local lemma condition", completion_correctness),
        ("good-coloring monotonicity", structural_monotonicity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
