//! The coupon-collector experiment: a base list `L_0` of `q` colors, `k`
//! secondary lists `L_1..L_k`, and a matching `M_i` between `L_0` and each
//! `L_i`. Each `i` independently draws `f(i)` uniformly from `L_i ∪ {blank}`;
//! a base color survives if it is matched to no drawn element.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CouponError {
    #[error("secondary list {0} is empty")]
    EmptyList(usize),
    #[error("{0} matchings for {1} secondary lists")]
    MatchingCount(usize, usize),
    #[error("matching {list}: pair [{alpha}, {beta}] out of range")]
    OutOfRange { list: usize, alpha: usize, beta: usize },
    #[error("matching {list} is not injective")]
    NotInjective { list: usize },
    #[error("unknown base color {0}")]
    UnknownColor(usize),
    #[error("instance JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouponInstance {
    pub q: usize,
    pub sizes: Vec<usize>,
    /// `matchings[i]` holds pairs `[α, β]` with `α ∈ 0..q`, `β ∈ 0..sizes[i]`.
    pub matchings: Vec<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouponOutcome {
    /// `L_0'` in increasing order.
    pub survivors: Vec<usize>,
    /// `deg'(α)` for every base color.
    pub degrees: Vec<usize>,
}

impl CouponInstance {
    pub fn new(q: usize, sizes: Vec<usize>, matchings: Vec<Vec<[usize; 2]>>) -> Result<Self, CouponError> {
        let inst = CouponInstance { q, sizes, matchings };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), CouponError> {
        if self.matchings.len() != self.sizes.len() {
            return Err(CouponError::MatchingCount(self.matchings.len(), self.sizes.len()));
        }
        for (list, (&size, m)) in self.sizes.iter().zip(&self.matchings).enumerate() {
            if size == 0 {
                return Err(CouponError::EmptyList(list));
            }
            let mut left = vec![false; self.q];
            let mut right = vec![false; size];
            for &[alpha, beta] in m {
                if alpha >= self.q || beta >= size {
                    return Err(CouponError::OutOfRange { list, alpha, beta });
                }
                if std::mem::replace(&mut left[alpha], true) || std::mem::replace(&mut right[beta], true) {
                    return Err(CouponError::NotInjective { list });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, CouponError> {
        let inst: CouponInstance = serde_json::from_str(text).map_err(|e| CouponError::Json(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// For each base color, the pairs `(i, β)` with `αβ ∈ M_i`; the indices
    /// `i` form `N_α`.
    pub fn partners(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.q];
        for (i, m) in self.matchings.iter().enumerate() {
            for &[alpha, beta] in m {
                out[alpha].push((i, beta));
            }
        }
        out
    }

    /// Number of equally likely outcomes, `Π (|L_i| + 1)`.
    pub fn state_space(&self) -> BigUint {
        self.sizes.iter().map(|&s| BigUint::from(s + 1)).product()
    }

    /// Random instance: sizes uniform in `1..=q`, and for each list a
    /// uniformly sized random partial injection from `L_0`.
    pub fn random<R: Rng>(q: usize, k: usize, rng: &mut R) -> Self {
        let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(1..=q.max(1))).collect();
        let matchings = sizes
            .iter()
            .map(|&size| {
                let t = rng.random_range(0..=q.min(size));
                let alphas = sample_indices(rng, q, t).into_vec();
                let betas = sample_indices(rng, size, t).into_vec();
                let mut m: Vec<[usize; 2]> = alphas.into_iter().zip(betas).map(|(a, b)| [a, b]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        CouponInstance { q, sizes, matchings }
    }

    pub fn random_seeded(q: usize, k: usize, seed: u64) -> Self {
        Self::random(q, k, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Outcome of a fixed draw; `draw[i] == sizes[i]` encodes blank.
    pub fn outcome_of(&self, draw: &[usize]) -> CouponOutcome {
        self.outcome_with(&self.partners(), draw)
    }

    fn outcome_with(&self, partners: &[Vec<(usize, usize)>], draw: &[usize]) -> CouponOutcome {
        let mut survivors = Vec::new();
        let mut degrees = vec![0; self.q];
        for (alpha, ps) in partners.iter().enumerate() {
            let mut hit = false;
            for &(i, beta) in ps {
                if draw[i] == self.sizes[i] {
                    degrees[alpha] += 1;
                } else if draw[i] == beta {
                    hit = true;
                }
            }
            if !hit {
                survivors.push(alpha);
            }
        }
        CouponOutcome { survivors, degrees }
    }

    /// Calls `visit` on every draw vector, each of probability
    /// `1 / state_space()`.
    pub fn for_each_draw(&self, mut visit: impl FnMut(&[usize])) {
        let mut draw = vec![0usize; self.k()];
        loop {
            visit(&draw);
            let mut i = 0;
            loop {
                if i == draw.len() {
                    return;
                }
                draw[i] += 1;
                if draw[i] <= self.sizes[i] {
                    break;
                }
                draw[i] = 0;
                i += 1;
            }
        }
    }
}

pub fn sample(instance: &CouponInstance, seed: u64) -> CouponOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(instance, &mut rng)
}

pub fn sample_with<R: Rng>(instance: &CouponInstance, rng: &mut R) -> CouponOutcome {
    let draw: Vec<usize> = instance.sizes.iter().map(|&s| rng.random_range(0..=s)).collect();
    instance.outcome_of(&draw)
}

/// `E|L_0'| = Σ_α Π_{i ∈ N_α} (1 - 1/(|L_i| + 1))`, exactly.
pub fn exact_expected_survivors(instance: &CouponInstance) -> BigRational {
    instance
        .partners()
        .iter()
        .map(|ps| {
            ps.iter()
                .map(|&(i, _)| {
                    let s = instance.sizes[i];
                    BigRational::new(s.into(), (s + 1).into())
                })
                .fold(BigRational::one(), |acc, x| acc * x)
        })
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// `ρ(α) = Σ_{i ∈ N_α} 1/|L_i|`.
pub fn rho(instance: &CouponInstance, alpha: usize) -> Result<BigRational, CouponError> {
    if alpha >= instance.q {
        return Err(CouponError::UnknownColor(alpha));
    }
    Ok(instance
        .matchings
        .iter()
        .zip(&instance.sizes)
        .filter(|(m, _)| m.iter().any(|p| p[0] == alpha))
        .map(|(_, &s)| BigRational::new(1.into(), s.into()))
        .fold(BigRational::zero(), |acc, x| acc + x))
}

pub fn rho_sum(instance: &CouponInstance) -> BigRational {
    (0..instance.q)
        .map(|a| rho(instance, a).expect("in range"))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// `q · exp(-k/q)`.
pub fn jensen_lower_bound(q: usize, k: usize) -> f64 {
    q as f64 * (-(k as f64) / q as f64).exp()
}

/// Whether `q / exp(Δ/q) ≥ q^{ε/2}`, the regime where the tail bounds are
/// meaningful.
pub fn q_large_holds(q: usize, max_degree: usize, eps: f64) -> bool {
    let q = q as f64;
    q / (max_degree as f64 / q).exp() >= q.powf(eps / 2.0)
}

/// Analytic right-hand sides of the two tail bounds at `ε`.
pub fn analytic_tails(q: usize, eps: f64) -> (f64, f64) {
    let s = (q as f64).powf(eps / 2.0);
    ((-s / 8.0).exp(), (-s / 300.0).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub trials: u64,
    /// Empirical `P[|L_0'| < ℓ]`.
    pub small_list: f64,
    pub small_list_se: f64,
    /// Empirical `P[∃ α ∈ L_0' with deg'(α) > d]`.
    pub high_degree: f64,
    pub high_degree_se: f64,
}

/// Monte Carlo tail estimates; trial `t` uses the stream seeded `seed + t`.
pub fn monte_carlo_tails(instance: &CouponInstance, ell: f64, d: f64, trials: u64, seed: u64) -> TailEstimate {
    let trials = trials.max(1);
    let (mut small, mut high) = (0u64, 0u64);
    for t in 0..trials {
        let out = sample(instance, seed.wrapping_add(t));
        if (out.survivors.len() as f64) < ell {
            small += 1;
        }
        if out.survivors.iter().any(|&a| out.degrees[a] as f64 > d) {
            high += 1;
        }
    }
    let est = |hits: u64| {
        let p = hits as f64 / trials as f64;
        (p, (p * (1.0 - p) / trials as f64).sqrt())
    };
    let (small_list, small_list_se) = est(small);
    let (high_degree, high_degree_se) = est(high);
    TailEstimate {
        trials,
        small_list,
        small_list_se,
        high_degree,
        high_degree_se,
    }
}

/// A subset `I` of base colors where `P[all of I hit] > Π P[α hit]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelationViolation {
    pub colors: Vec<usize>,
}

/// Exhaustively checks that the "hit" indicators (`α ∉ L_0'`) are negatively
/// correlated on every subset of size at most `max_size`. Exact integer
/// arithmetic over the full outcome space.
pub fn negative_correlation_violations(instance: &CouponInstance, max_size: usize) -> Vec<CorrelationViolation> {
    let q = instance.q;
    let subsets: Vec<Vec<usize>> = subsets_up_to(q, max_size).into_iter().filter(|s| s.len() >= 2).collect();
    let mut single = vec![0u64; q];
    let mut joint = vec![0u64; subsets.len()];
    let mut total = 0u64;
    let mut hit = vec![true; q];
    let partners = instance.partners();
    instance.for_each_draw(|draw| {
        total += 1;
        let out = instance.outcome_with(&partners, draw);
        hit.iter_mut().for_each(|h| *h = true);
        for &a in &out.survivors {
            hit[a] = false;
        }
        for a in 0..q {
            single[a] += hit[a] as u64;
        }
        for (s, count) in subsets.iter().zip(joint.iter_mut()) {
            if s.iter().all(|&a| hit[a]) {
                *count += 1;
            }
        }
    });
    // P[∩] ≤ Π P  ⇔  joint · total^{|I|-1} ≤ Π single
    let total = BigUint::from(total);
    subsets
        .into_iter()
        .zip(joint)
        .filter(|(s, j)| {
            let lhs = BigUint::from(*j) * num_traits::pow(total.clone(), s.len() - 1);
            let rhs: BigUint = s.iter().map(|&a| BigUint::from(single[a])).product();
            lhs > rhs
        })
        .map(|(colors, _)| CorrelationViolation { colors })
        .collect()
}

fn subsets_up_to(q: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&x| x + 1);
            for a in start..q {
                let mut t: Vec<usize> = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_outcome() -> CouponInstance {
        CouponInstance::new(2, vec![1], vec![vec![[0, 0]]]).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn sampling_examples() {
        let none = CouponInstance::new(4, vec![], vec![]).unwrap();
        let out = sample(&none, 3);
        assert_eq!(out.survivors, vec![0, 1, 2, 3]);
        assert_eq!(out.degrees, vec![0; 4]);

        let inst = two_outcome();
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..64 {
            seen.insert(sample(&inst, seed).survivors);
        }
        assert_eq!(seen, [vec![0, 1], vec![1]].into_iter().collect());

        let unmatched = CouponInstance::new(3, vec![2, 2], vec![vec![], vec![]]).unwrap();
        assert!((0..20).all(|s| sample(&unmatched, s).survivors.len() == 3));
    }

    #[test]
    fn expectation_examples() {
        let none = CouponInstance::new(5, vec![], vec![]).unwrap();
        assert_eq!(exact_expected_survivors(&none), ratio(5, 1));
        assert_eq!(exact_expected_survivors(&two_outcome()), ratio(3, 2));
        let double = CouponInstance::new(1, vec![1, 1], vec![vec![[0, 0]], vec![[0, 0]]]).unwrap();
        assert_eq!(exact_expected_survivors(&double), ratio(1, 4));
    }

    #[test]
    fn rho_examples() {
        let inst = CouponInstance::new(2, vec![2, 4], vec![vec![[0, 1]], vec![[0, 3]]]).unwrap();
        assert_eq!(rho(&inst, 0).unwrap(), ratio(3, 4));
        assert_eq!(rho(&inst, 1).unwrap(), ratio(0, 1));
        assert_eq!(rho(&inst, 2), Err(CouponError::UnknownColor(2)));
    }

    #[test]
    fn jensen_examples() {
        assert_eq!(jensen_lower_bound(7, 0), 7.0);
        assert!((jensen_lower_bound(9, 9) - 9.0 / std::f64::consts::E).abs() < 1e-12);
        assert!((jensen_lower_bound(100, 50) - 60.653065971263345).abs() < 1e-9);
    }

    #[test]
    fn tail_edge_cases() {
        let inst = CouponInstance::random(6, 4, &mut ChaCha8Rng::seed_from_u64(1));
        let t = monte_carlo_tails(&inst, 0.0, 4.0, 500, 9);
        assert_eq!((t.small_list, t.high_degree), (0.0, 0.0));
        let t = monte_carlo_tails(&two_outcome(), 2.0, 1.0, 20_000, 5);
        assert!((t.small_list - 0.5).abs() < 3.0 * t.small_list_se.max(1e-3));
    }

    #[test]
    fn validation() {
        assert_eq!(CouponInstance::new(2, vec![0], vec![vec![]]), Err(CouponError::EmptyList(0)));
        assert_eq!(
            CouponInstance::new(2, vec![2], vec![vec![[0, 0], [1, 0]]]),
            Err(CouponError::NotInjective { list: 0 })
        );
        assert!(matches!(
            CouponInstance::new(2, vec![2], vec![vec![[2, 0]]]),
            Err(CouponError::OutOfRange { .. })
        ));
        let inst = two_outcome();
        assert_eq!(CouponInstance::from_json(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn q_large_helper() {
        assert!(q_large_holds(1000, 100, 0.5));
        assert!(!q_large_holds(10, 100, 0.5));
    }
}
