//! Closed-form bounds evaluated in natural-log space.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{ln_big, ln_rational};

#[derive(Debug, Error, PartialEq)]
pub enum BoundError {
    #[error("q must be at least {min}, got {q}")]
    SmallQ { q: usize, min: usize },
    #[error("Δ must be at least {min}, got {delta}")]
    SmallDelta { delta: usize, min: usize },
    #[error("ε must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("n must be at least {min}, got {n}")]
    SmallN { n: usize, min: usize },
    #[error("ℓ must be positive, got {0}")]
    Ell(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    MainLower,
    PartialLower,
    GoodLower,
    RandomUpper,
    CompletionLower,
    DoubleCount,
}

impl FormulaId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::MainLower => "main-lower",
            FormulaId::PartialLower => "partial-lower",
            FormulaId::GoodLower => "good-lower",
            FormulaId::RandomUpper => "random-upper",
            FormulaId::CompletionLower => "completion-lower",
            FormulaId::DoubleCount => "double-count",
        }
    }
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogBound {
    /// Natural log of the bound; `-∞` when vacuous or when the bound is zero.
    #[serde(serialize_with = "serialize_log")]
    pub log_value: f64,
    pub vacuous: bool,
    pub formula_id: FormulaId,
}

fn serialize_log<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(if *x < 0.0 { "-inf" } else { "inf" })
    }
}

impl LogBound {
    fn new(formula_id: FormulaId, log_value: f64) -> Self {
        LogBound { log_value, vacuous: false, formula_id }
    }

    fn vacuous(formula_id: FormulaId) -> Self {
        LogBound { log_value: f64::NEG_INFINITY, vacuous: true, formula_id }
    }

    /// `exp(log_value)` when it fits comfortably in a double.
    pub fn value_if_small(&self) -> Option<f64> {
        (!self.vacuous && self.log_value < 700.0).then(|| self.log_value.exp())
    }

    /// Whether an exact count meets this lower bound. Logs are compared with
    /// a relative slack of `10^{-digits}`.
    pub fn is_met_by(&self, count: &BigUint, digits: i32) -> bool {
        if self.vacuous || self.log_value == f64::NEG_INFINITY {
            return true;
        }
        let lhs = ln_big(count);
        lhs >= self.log_value || crate::numeric::agrees_to(lhs, self.log_value, digits)
    }

    /// Whether an exact count respects this upper bound.
    pub fn is_respected_by(&self, count: &BigUint, digits: i32) -> bool {
        let lhs = ln_big(count);
        lhs <= self.log_value || crate::numeric::agrees_to(lhs, self.log_value, digits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub delta: usize,
    pub q: usize,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    pub ell: f64,
    pub d: f64,
    pub small_delta: f64,
    pub eta: f64,
    pub p_flaw: f64,
    pub gamma: f64,
}

impl BoundParams {
    /// Replaces the default `m = ⌊Δn/2⌋` with an actual edge count.
    pub fn with_edge_count(mut self, m: usize) -> Self {
        self.m = m;
        self
    }
}

pub fn ell(delta: usize, q: usize) -> f64 {
    q as f64 / (2.0 * (delta as f64 / q as f64).exp())
}

pub fn d_threshold(delta: usize, q: usize) -> f64 {
    q as f64 / (50.0 * (delta as f64 / q as f64).exp())
}

pub fn small_delta(delta: usize, q: usize) -> f64 {
    4.0 * (delta as f64 / q as f64).exp() / q as f64
}

pub fn eta(q: usize, eps: f64) -> f64 {
    (-(q as f64).powf(eps / 2.0) / 600.0).exp()
}

pub fn p_flaw(q: usize, eps: f64) -> f64 {
    (-(q as f64).powf(eps / 2.0) / 400.0).exp()
}

/// `2 ln n / n`.
pub fn gamma(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n.ln() / n
}

pub fn derive_params(delta: usize, q: usize, eps: f64, n: usize) -> Result<BoundParams, BoundError> {
    if q < 1 {
        return Err(BoundError::SmallQ { q, min: 1 });
    }
    if delta < 1 {
        return Err(BoundError::SmallDelta { delta, min: 1 });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BoundError::Epsilon(eps));
    }
    if n < 1 {
        return Err(BoundError::SmallN { n, min: 1 });
    }
    Ok(BoundParams {
        delta,
        q,
        n,
        m: delta * n / 2,
        eps,
        ell: ell(delta, q),
        d: d_threshold(delta, q),
        small_delta: small_delta(delta, q),
        eta: eta(q, eps),
        p_flaw: p_flaw(q, eps),
        gamma: gamma(n),
    })
}

fn require_q(q: usize, min: usize) -> Result<(), BoundError> {
    if q < min {
        return Err(BoundError::SmallQ { q, min });
    }
    Ok(())
}

fn require_eps(eps: f64) -> Result<(), BoundError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BoundError::Epsilon(eps));
    }
    Ok(())
}

fn edge_term(m: f64, q: usize) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m * (1.0 - 1.0 / q as f64).ln()
    }
}

/// `(1 - 1/q)^m ((1 - δ) q)^n` with `δ = 4 e^{Δ/q} / q`; vacuous iff `δ ≥ 1`.
pub fn main_lower_bound(n: usize, m: usize, delta: usize, q: usize) -> Result<LogBound, BoundError> {
    require_q(q, 2)?;
    let dl = small_delta(delta, q);
    if dl >= 1.0 {
        return Ok(LogBound::vacuous(FormulaId::MainLower));
    }
    let log = edge_term(m as f64, q) + n as f64 * ((1.0 - dl) * q as f64).ln();
    Ok(LogBound::new(FormulaId::MainLower, log))
}

/// `(1 - 1/q)^m q^n`. At `q = 1` with an edge the bound is zero (`-∞`).
pub fn partial_lower_bound(n: usize, m: usize, q: usize) -> Result<LogBound, BoundError> {
    require_q(q, 1)?;
    if q == 1 && m >= 1 {
        return Ok(LogBound::new(FormulaId::PartialLower, f64::NEG_INFINITY));
    }
    let log = edge_term(m as f64, q) + n as f64 * (q as f64).ln();
    Ok(LogBound::new(FormulaId::PartialLower, log))
}

/// `(1 - 1/q)^m q^n` as an exact rational.
pub fn partial_bound_exact(n: usize, m: usize, q: usize) -> BigRational {
    let q_big = BigInt::from(q);
    let num = (&q_big - BigInt::one()).pow(m as u32) * q_big.pow(n as u32);
    BigRational::new(num, BigInt::from(q).pow(m as u32))
}

/// Exact test of `count ≥ (1 - 1/q)^m q^n`.
pub fn partial_bound_met(count: &BigUint, n: usize, m: usize, q: usize) -> bool {
    BigRational::from_integer(count.clone().into()) >= partial_bound_exact(n, m, q)
}

/// `(1 - η)^n (1 - 1/q)^m q^n` with `η = exp(-q^{ε/2}/600)`.
pub fn good_lower_bound(n: usize, m: usize, q: usize, eps: f64) -> Result<LogBound, BoundError> {
    require_q(q, 2)?;
    require_eps(eps)?;
    let e = eta(q, eps);
    if e >= 1.0 {
        return Ok(LogBound::vacuous(FormulaId::GoodLower));
    }
    let partial = partial_lower_bound(n, m, q)?;
    let log = if n == 0 { partial.log_value } else { n as f64 * (-e).ln_1p() + partial.log_value };
    Ok(LogBound::new(FormulaId::GoodLower, log))
}

/// `(1 - 1/q)^{Δn/2} ((1 + γ) q)^n` with `γ = 2 ln n / n`.
pub fn random_upper_bound(n: usize, delta: usize, q: usize) -> Result<LogBound, BoundError> {
    require_q(q, 2)?;
    if n < 2 {
        return Err(BoundError::SmallN { n, min: 2 });
    }
    let log = edge_term(delta as f64 * n as f64 / 2.0, q) + n as f64 * ((1.0 + gamma(n)) * q as f64).ln();
    Ok(LogBound::new(FormulaId::RandomUpper, log))
}

/// `(ℓ/2)^k`.
pub fn completion_lower_bound(ell: f64, k: usize) -> Result<LogBound, BoundError> {
    if ell.is_nan() || ell <= 0.0 {
        return Err(BoundError::Ell(ell));
    }
    let log = if k == 0 { 0.0 } else { k as f64 * (ell / 2.0).ln() };
    Ok(LogBound::new(FormulaId::CompletionLower, log))
}

/// Natural log of `(1 + 2/ℓ)^n`.
pub fn double_count_factor(ell: f64, n: usize) -> Result<f64, BoundError> {
    if ell.is_nan() || ell <= 0.0 {
        return Err(BoundError::Ell(ell));
    }
    Ok(n as f64 * (2.0 / ell).ln_1p())
}

/// Natural log of `Σ_k C(n,k) (2/ℓ)^k`, summed term by term.
pub fn double_count_binomial_sum(ell: f64, n: usize) -> Result<f64, BoundError> {
    if ell.is_nan() || ell <= 0.0 {
        return Err(BoundError::Ell(ell));
    }
    let r = (2.0 / ell).ln();
    let mut binom = BigUint::one();
    let mut logs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        logs.push(ln_big(&binom) + k as f64 * r);
        binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln())
}

/// Leading-order exponents with lower-order terms dropped. Reference values
/// only; nothing is asserted against them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryValues {
    pub n: usize,
    pub delta: f64,
    pub eps: f64,
    /// `(1 + ε/(1+ε)) · ln Δ / 2` per vertex.
    pub small_q_per_vertex: f64,
    /// `ln²Δ / (2Δ)` per vertex.
    pub independent_sets_per_vertex: f64,
    /// `ln(Δ/√e)` per vertex.
    pub large_q_per_vertex: f64,
    pub small_q_log: f64,
    pub independent_sets_log: f64,
    pub large_q_log: f64,
    pub label: &'static str,
}

pub fn corollary_values(n: usize, delta: f64, eps: f64) -> Result<CorollaryValues, BoundError> {
    if delta.is_nan() || delta < 2.0 {
        return Err(BoundError::SmallDelta { delta: delta as usize, min: 2 });
    }
    let ln_d = delta.ln();
    let small_q = (1.0 + eps / (1.0 + eps)) * ln_d / 2.0;
    let indep = ln_d * ln_d / (2.0 * delta);
    let large_q = ln_d - 0.5;
    let nf = n as f64;
    Ok(CorollaryValues {
        n,
        delta,
        eps,
        small_q_per_vertex: small_q,
        independent_sets_per_vertex: indep,
        large_q_per_vertex: large_q,
        small_q_log: nf * small_q,
        independent_sets_log: nf * indep,
        large_q_log: nf * large_q,
        label: "reference, not asserted",
    })
}

/// The `δ` at which `(1 - 1/q)^m ((1 - δ) q)^n` equals a given count.
pub fn implied_delta(count: &BigUint, n: usize, m: usize, q: usize) -> f64 {
    if n == 0 || count.is_zero() {
        return f64::NAN;
    }
    let per_vertex = (ln_big(count) - edge_term(m as f64, q)) / n as f64;
    1.0 - per_vertex.exp() / q as f64
}

/// `ln` of the exact partial bound, for cross-checking the log-space formula.
pub fn partial_bound_exact_log(n: usize, m: usize, q: usize) -> f64 {
    ln_rational(&partial_bound_exact(n, m, q))
}
