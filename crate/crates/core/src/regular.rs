//! The pairing (configuration) model for random Δ-regular graphs.
//!
//! `Δn` points are grouped into `n` cells of `Δ` consecutive points; point `p`
//! lies in cell `p / Δ`. A pairing is a perfect matching of the points, and
//! collapsing cells yields a Δ-regular multigraph.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::count::{CountError, Counter};
use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("Δn = {0} is odd; no perfect matching exists")]
    OddPointCount(usize),
    #[error("coloring must be total on {n} vertices (vertex {vertex} is uncolored or missing)")]
    NotTotal { n: usize, vertex: usize },
    #[error("color {color} at vertex {vertex} is outside 0..{q}")]
    ColorOutOfRange { vertex: usize, color: usize, q: usize },
    #[error("no simple triangle-free projection within {0} attempts")]
    AttemptsExhausted(u64),
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    n: usize,
    delta: usize,
    /// `(a, b)` with `a < b`, sorted.
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Accepts any perfect matching of `0..Δn` and normalizes it.
    pub fn new(n: usize, delta: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Option<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let mut seen = vec![false; n * delta];
        for &(a, b) in &pairs {
            if a == b || b >= n * delta || std::mem::replace(&mut seen[a], true) || std::mem::replace(&mut seen[b], true) {
                return None;
            }
        }
        seen.iter().all(|&s| s).then_some(Pairing { n, delta, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn cell(&self, point: usize) -> usize {
        point / self.delta
    }

    /// Collapses cells to vertices.
    pub fn project(&self) -> MultiGraph {
        MultiGraph {
            n: self.n,
            edges: self
                .pairs
                .iter()
                .map(|&(a, b)| (self.cell(a), self.cell(b)))
                .collect(),
        }
    }
}

fn check_points(n: usize, delta: usize) -> Result<(), PairingError> {
    if (n * delta) % 2 == 1 {
        return Err(PairingError::OddPointCount(n * delta));
    }
    Ok(())
}

/// Multigraph with loops; edges `(u, v)` with `u <= v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn is_simple(&self) -> bool {
        if self.has_loop() {
            return false;
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Underlying simple graph (parallel edges merged); `None` if there is a
    /// loop, since a loop admits no proper coloring.
    pub fn simplify(&self) -> Option<Graph> {
        if self.has_loop() {
            return None;
        }
        Some(Graph::from_edges_dedup(self.n, self.edges.iter().copied()))
    }
}

/// Uniform pairing: repeatedly match the smallest unmatched point with a
/// uniformly chosen other unmatched point.
pub fn sample_pairing(n: usize, delta: usize, seed: u64) -> Result<Pairing, PairingError> {
    sample_pairing_with(n, delta, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_pairing_with<R: Rng>(n: usize, delta: usize, rng: &mut R) -> Result<Pairing, PairingError> {
    check_points(n, delta)?;
    let mut free: Vec<usize> = (0..n * delta).collect();
    let mut pairs = Vec::with_capacity(free.len() / 2);
    while !free.is_empty() {
        let x = free.remove(0);
        let y = free.remove(rng.random_range(0..free.len()));
        pairs.push((x, y));
    }
    Ok(Pairing::new(n, delta, pairs).expect("sequential matching is perfect"))
}

/// One iteration of the color-class generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorStep {
    /// `|C_max|` before the step.
    pub class_size: usize,
    /// `|U|` before the step.
    pub uncovered: usize,
    /// Whether `y` fell in `C_max`.
    pub hit: bool,
}

impl GeneratorStep {
    /// Exact chance that `y ∈ C_max`: `(|C_max| - 1)/(|U| - 1)`.
    pub fn hit_probability(&self) -> f64 {
        (self.class_size as f64 - 1.0) / (self.uncovered as f64 - 1.0)
    }
}

/// The color-class generator: points inherit the color of their cell; each
/// step takes `x` from a largest class and pairs it with a uniform `y` among
/// the other uncovered points. Ties go to the lowest class index, and `x` is
/// the lowest point of that class.
pub fn generator_algorithm1(
    n: usize,
    delta: usize,
    q: usize,
    coloring: &[Option<usize>],
    seed: u64,
) -> Result<(Pairing, Vec<GeneratorStep>), PairingError> {
    check_points(n, delta)?;
    let mut colors = Vec::with_capacity(n);
    for vertex in 0..n {
        match coloring.get(vertex).copied().flatten() {
            None => return Err(PairingError::NotTotal { n, vertex }),
            Some(c) if c >= q => return Err(PairingError::ColorOutOfRange { vertex, color: c, q }),
            Some(c) => colors.push(c),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // classes kept sorted so the lowest point is first
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); q];
    for p in 0..n * delta {
        classes[colors[p / delta]].push(p);
    }
    let mut uncovered: Vec<usize> = (0..n * delta).collect();
    let mut pairs = Vec::new();
    let mut trace = Vec::new();
    while !uncovered.is_empty() {
        let best = classes.iter().map(Vec::len).max().unwrap_or(0);
        let cmax = classes.iter().position(|c| c.len() == best).expect("some class is nonempty");
        let x = classes[cmax][0];
        let others: Vec<usize> = uncovered.iter().copied().filter(|&p| p != x).collect();
        let y = others[rng.random_range(0..others.len())];
        trace.push(GeneratorStep {
            class_size: best,
            uncovered: uncovered.len(),
            hit: colors[y / delta] == cmax,
        });
        pairs.push((x, y));
        uncovered.retain(|&p| p != x && p != y);
        for class in &mut classes {
            class.retain(|&p| p != x && p != y);
        }
    }
    let pairing = Pairing::new(n, delta, pairs).expect("generator output is perfect");
    Ok((pairing, trace))
}

/// Every pairing of `Δn` points, for exhaustive checks on tiny cases.
pub fn all_pairings(n: usize, delta: usize) -> Result<Vec<Pairing>, PairingError> {
    check_points(n, delta)?;
    fn go(free: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(acc.clone());
            return;
        }
        let x = free.remove(0);
        for i in 0..free.len() {
            let y = free.remove(i);
            acc.push((x, y));
            go(free, acc, out);
            acc.pop();
            free.insert(i, y);
        }
        free.insert(0, x);
    }
    let mut out = Vec::new();
    go(&mut (0..n * delta).collect(), &mut Vec::new(), &mut out);
    Ok(out
        .into_iter()
        .map(|p| Pairing::new(n, delta, p).expect("perfect"))
        .collect())
}

/// Rejection sampler for simple triangle-free Δ-regular graphs. Returns the
/// graph and the number of pairings drawn.
pub fn sample_simple_triangle_free(
    n: usize,
    delta: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<(Graph, u64), PairingError> {
    check_points(n, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let multi = sample_pairing_with(n, delta, &mut rng)?.project();
        if multi.is_simple() {
            let g = multi.simplify().expect("simple");
            if g.is_triangle_free() {
                return Ok((g, attempt));
            }
        }
    }
    Err(PairingError::AttemptsExhausted(max_attempts))
}

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// Proper q-colorings of a projected pairing: zero with a loop, otherwise the
/// count for the simple graph underneath.
pub fn colorings_of(multi: &MultiGraph, q: usize, counter: &Counter) -> Result<BigUint, CountError> {
    match multi.simplify() {
        None => Ok(BigUint::zero()),
        Some(g) => Ok(counter.colorings(&g, q)?.value),
    }
}

/// `(1 - 1/q)^{Δn/2} · n · q^n`, the first-moment ceiling on `E[X]`.
pub fn expectation_ceiling(n: usize, delta: usize, q: usize) -> f64 {
    let q = q as f64;
    let log = (delta * n) as f64 / 2.0 * (1.0 - 1.0 / q).ln() + (n as f64).ln() + n as f64 * q.ln();
    log.exp()
}

/// `E[X]` over all pairings, exactly.
pub fn exact_expected_colorings(n: usize, delta: usize, q: usize, counter: &Counter) -> Result<BigRational, PairingError> {
    let all = all_pairings(n, delta)?;
    let mut total = BigUint::zero();
    for p in &all {
        total += colorings_of(&p.project(), q, counter)?;
    }
    Ok(BigRational::new(total.into(), BigUint::from(all.len()).into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationEstimate {
    pub n: usize,
    pub delta: usize,
    pub q: usize,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub ceiling: f64,
    pub ratio: f64,
}

/// Monte Carlo mean of `X = c(G(P), q)`; trial `t` uses pairing seed
/// `seed + t`. Trials run in parallel and are summed in trial order.
pub fn estimate_expected_colorings(
    n: usize,
    delta: usize,
    q: usize,
    trials: u64,
    seed: u64,
    counter: &Counter,
) -> Result<ExpectationEstimate, PairingError> {
    check_points(n, delta)?;
    let trials = trials.max(1);
    let xs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64, PairingError> {
            let p = sample_pairing(n, delta, seed.wrapping_add(t))?;
            let x = colorings_of(&p.project(), q, counter)?;
            Ok(crate::numeric::biguint_to_f64(&x))
        })
        .collect::<Result<_, _>>()?;
    let mean = xs.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let stderr = (var / trials as f64).sqrt();
    let ceiling = expectation_ceiling(n, delta, q);
    Ok(ExpectationEstimate {
        n,
        delta,
        q,
        trials,
        mean,
        stderr,
        ceiling,
        ratio: mean / ceiling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_pairings() {
        let p = sample_pairing(2, 1, 4).unwrap();
        assert_eq!(p.pairs(), &[(0, 1)]);
        let m = p.project();
        assert!(m.is_simple());
        assert_eq!(m.simplify().unwrap().m(), 1);

        let l = sample_pairing(1, 2, 4).unwrap();
        assert_eq!(l.pairs(), &[(0, 1)]);
        assert!(l.project().has_loop() && !l.project().is_simple());
        assert!(matches!(sample_pairing(3, 1, 0), Err(PairingError::OddPointCount(3))));
    }

    #[test]
    fn four_points_never_simple() {
        let all = all_pairings(2, 2).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|p| !p.project().is_simple()));
        assert_eq!(all_pairings(3, 2).unwrap().len(), 15);
        assert_eq!(all_pairings(4, 2).unwrap().len(), 105);
    }

    #[test]
    fn projection_is_regular() {
        for seed in 0..50 {
            let m = sample_pairing(7, 4, seed).unwrap().project();
            assert!(m.degrees().iter().all(|&d| d == 4));
        }
    }

    #[test]
    fn generator_trivial_and_checks() {
        let (p, trace) = generator_algorithm1(2, 1, 2, &[Some(0), Some(1)], 3).unwrap();
        assert_eq!(p.pairs(), &[(0, 1)]);
        assert_eq!(trace.len(), 1);
        assert!(matches!(
            generator_algorithm1(2, 1, 2, &[Some(0), None], 0),
            Err(PairingError::NotTotal { vertex: 1, .. })
        ));
        assert!(matches!(
            generator_algorithm1(2, 1, 2, &[Some(0), Some(2)], 0),
            Err(PairingError::ColorOutOfRange { .. })
        ));
    }

    #[test]
    fn rejection_sampler_postconditions() {
        let (g, attempts) = sample_simple_triangle_free(2, 1, 0, 10).unwrap();
        assert_eq!((g.n(), g.m(), attempts), (2, 1, 1));
        for seed in 0..10 {
            let (g, _) = sample_simple_triangle_free(10, 3, seed, DEFAULT_MAX_ATTEMPTS).unwrap();
            assert!((0..10).all(|v| g.degree(v) == 3));
            assert!(g.is_triangle_free());
        }
        assert!(matches!(
            sample_simple_triangle_free(2, 2, 0, 5),
            Err(PairingError::AttemptsExhausted(5))
        ));
    }

    #[test]
    fn exact_tiny_expectations() {
        let c = Counter::default();
        let e = exact_expected_colorings(2, 1, 2, &c).unwrap();
        assert_eq!(e, BigRational::from_integer(2.into()));
        let e = exact_expected_colorings(1, 2, 3, &c).unwrap();
        assert!(e.is_zero());
        let e = exact_expected_colorings(2, 2, 2, &c).unwrap();
        assert_eq!(e, BigRational::new(4.into(), 3.into()));
    }
}
