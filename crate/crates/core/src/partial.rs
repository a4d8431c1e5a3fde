//! Partial H-colorings: available lists, color degrees, flaws, goodness on a
//! vertex set, the greedy partial sampler, the local-lemma condition and the
//! resampling completer.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{ColorId, DpCover};

/// A partial map from vertices to color indices; `None` is blank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialColoring {
    assignment: Vec<Option<usize>>,
}

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("coloring has {found} entries, graph has {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("color index {index} at vertex {vertex} is outside its list of size {q}")]
    IndexOutOfRange { vertex: usize, index: usize, q: usize },
    #[error("coloring is not proper: {0} and {1} correspond")]
    Improper(ColorId, ColorId),
    #[error("vertex order is not a permutation of 0..{0}")]
    InvalidOrder(usize),
    #[error("blank vertex {0} has no available color")]
    EmptyList(usize),
    #[error("resampling did not converge within {0} rounds")]
    RoundsExhausted(u64),
    #[error("coloring JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl PartialColoring {
    pub fn blank(n: usize) -> Self {
        PartialColoring {
            assignment: vec![None; n],
        }
    }

    pub fn from_assignment(assignment: Vec<Option<usize>>) -> Self {
        PartialColoring { assignment }
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.assignment[v]
    }

    pub fn set(&mut self, v: usize, index: Option<usize>) {
        self.assignment[v] = index;
    }

    pub fn color(&self, v: usize) -> Option<ColorId> {
        self.assignment[v].map(|i| ColorId::new(v, i))
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn blank_count(&self) -> usize {
        self.assignment.iter().filter(|c| c.is_none()).count()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|_| v))
    }

    /// True iff `other` agrees with `self` wherever `self` is colored.
    pub fn is_completed_by(&self, other: &PartialColoring) -> bool {
        self.assignment
            .iter()
            .zip(&other.assignment)
            .all(|(a, b)| a.is_none() || a == b)
    }

    /// Checks shape, index ranges, and independence of the image.
    pub fn check_proper(&self, cover: &DpCover) -> Result<(), ColoringError> {
        if self.len() != cover.n() {
            return Err(ColoringError::WrongLength {
                expected: cover.n(),
                found: self.len(),
            });
        }
        for (v, c) in self.assignment.iter().enumerate() {
            if let Some(i) = *c {
                if i >= cover.q() {
                    return Err(ColoringError::IndexOutOfRange { vertex: v, index: i, q: cover.q() });
                }
            }
        }
        for &(u, v) in cover.base().edges() {
            if let (Some(a), Some(b)) = (self.color(u), self.color(v)) {
                if cover.corresponds(a, b) {
                    return Err(ColoringError::Improper(a, b));
                }
            }
        }
        Ok(())
    }

    pub fn is_proper(&self, cover: &DpCover) -> bool {
        self.check_proper(cover).is_ok()
    }

    /// JSON object mapping each vertex to a color index or `null`.
    pub fn to_json(&self) -> String {
        let map: BTreeMap<usize, Option<usize>> = self.assignment.iter().copied().enumerate().collect();
        serde_json::to_string(&map).expect("coloring serializes")
    }

    /// Inverse of [`PartialColoring::to_json`]; vertices missing from the map
    /// are blank.
    pub fn from_json(text: &str, n: usize) -> Result<Self, ColoringError> {
        let map: BTreeMap<usize, Option<usize>> = serde_json::from_str(text)?;
        let mut out = PartialColoring::blank(n);
        for (v, c) in map {
            if v >= n {
                return Err(ColoringError::WrongLength { expected: n, found: v + 1 });
            }
            out.assignment[v] = c;
        }
        Ok(out)
    }
}

impl Serialize for PartialColoring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<usize, Option<usize>> = self.assignment.iter().copied().enumerate().collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialColoring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<usize, Option<usize>>::deserialize(d)?;
        let n = map.keys().next_back().map_or(0, |&v| v + 1);
        let mut out = PartialColoring::blank(n);
        for (v, c) in map {
            out.assignment[v] = c;
        }
        Ok(out)
    }
}

/// Is color index `i` of `v` still available under `f`, i.e. no colored
/// neighbor uses a correspondent of `(v, i)`?
#[inline]
pub(crate) fn is_available(cover: &DpCover, f: &[Option<usize>], v: usize, i: usize) -> bool {
    cover
        .base()
        .neighbors(v)
        .iter()
        .enumerate()
        .all(|(k, &w)| match f[w] {
            Some(c) => cover.partner(v, k, i) != Some(c),
            None => true,
        })
}

/// `L_f(v)`: colors of `L(v)` with no H-neighbor in the image of `f`.
pub fn available_list(cover: &DpCover, f: &PartialColoring, v: usize) -> Vec<ColorId> {
    (0..cover.q())
        .filter(|&i| is_available(cover, &f.assignment, v, i))
        .map(|i| ColorId::new(v, i))
        .collect()
}

/// `deg_f(α)`: correspondents of `α` sitting at blank vertices where they
/// are still available.
pub fn color_degree(cover: &DpCover, f: &PartialColoring, alpha: ColorId) -> usize {
    color_degree_raw(cover, &f.assignment, alpha)
}

pub(crate) fn color_degree_raw(cover: &DpCover, f: &[Option<usize>], alpha: ColorId) -> usize {
    let v = alpha.vertex;
    cover
        .base()
        .neighbors(v)
        .iter()
        .enumerate()
        .filter(|&(k, &w)| {
            f[w].is_none()
                && cover
                    .partner(v, k, alpha.index)
                    .is_some_and(|beta| is_available(cover, f, w, beta))
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FlawKind {
    /// `|L_f(v)| < ℓ`; witness is the list size.
    SmallList { size: usize },
    /// `deg_f(α) > d` for the lowest-index such `α ∈ L_f(v)`.
    HighDegree { color: ColorId, degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FlawReport {
    pub vertex: usize,
    pub kind: FlawKind,
}

/// Thresholds of the flaw predicate; both comparisons are strict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlawThresholds {
    pub ell: f64,
    pub d: f64,
}

impl FlawThresholds {
    pub fn new(ell: f64, d: f64) -> Self {
        FlawThresholds { ell, d }
    }

    /// `ℓ = 0, d = ∞`: nothing is ever flawed.
    pub fn never() -> Self {
        FlawThresholds { ell: 0.0, d: f64::INFINITY }
    }
}

/// Flaw reports at `v` (at most one of each kind); empty if `v` is colored.
pub(crate) fn flaws_at(cover: &DpCover, f: &[Option<usize>], v: usize, t: FlawThresholds) -> Vec<FlawReport> {
    if f[v].is_some() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let avail: Vec<usize> = (0..cover.q()).filter(|&i| is_available(cover, f, v, i)).collect();
    if (avail.len() as f64) < t.ell {
        out.push(FlawReport { vertex: v, kind: FlawKind::SmallList { size: avail.len() } });
    }
    if t.d.is_finite() {
        for &i in &avail {
            let color = ColorId::new(v, i);
            let degree = color_degree_raw(cover, f, color);
            if degree as f64 > t.d {
                out.push(FlawReport { vertex: v, kind: FlawKind::HighDegree { color, degree } });
                break;
            }
        }
    }
    out
}

pub(crate) fn has_flaw_at(cover: &DpCover, f: &[Option<usize>], v: usize, t: FlawThresholds) -> bool {
    !flaws_at(cover, f, v, t).is_empty()
}

/// All flaws of `f`, sorted by vertex.
pub fn flaw_set(cover: &DpCover, f: &PartialColoring, t: FlawThresholds) -> Vec<FlawReport> {
    (0..cover.n())
        .flat_map(|v| flaws_at(cover, &f.assignment, v, t))
        .collect()
}

/// Vertices whose flaw status is checked when asking "good on `U`": those
/// with `N²[v] ⊆ U`.
pub fn scoped_vertices(cover: &DpCover, in_u: &[bool]) -> Vec<usize> {
    let g = cover.base();
    (0..g.n())
        .filter(|&v| g.second_neighborhood(v).iter().all(|&w| in_u[w]))
        .collect()
}

/// True iff no flawed vertex `v` has `N²[v] ⊆ U`.
pub fn is_good_on(cover: &DpCover, f: &PartialColoring, in_u: &[bool], t: FlawThresholds) -> bool {
    scoped_vertices(cover, in_u)
        .into_iter()
        .all(|v| !has_flaw_at(cover, &f.assignment, v, t))
}

pub fn is_good(cover: &DpCover, f: &PartialColoring, t: FlawThresholds) -> bool {
    (0..cover.n()).all(|v| !has_flaw_at(cover, &f.assignment, v, t))
}

/// Colors vertices in `order`, each drawn uniformly from `L_f(x) ∪ {blank}`
/// given the choices made so far.
pub fn greedy_partial_sampler(cover: &DpCover, order: &[usize], seed: u64) -> Result<PartialColoring, ColoringError> {
    let n = cover.n();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(ColoringError::InvalidOrder(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = vec![None; n];
    for &x in order {
        let avail: Vec<usize> = (0..cover.q()).filter(|&i| is_available(cover, &f, x, i)).collect();
        let pick = rng.random_range(0..=avail.len());
        f[x] = avail.get(pick).copied();
    }
    Ok(PartialColoring { assignment: f })
}

/// Symmetric local-lemma check for completing a good coloring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LllCheck {
    pub ell: f64,
    pub d: f64,
    /// Bound on each event probability, `1/ℓ²`.
    pub p: f64,
    /// `⌈ℓ⌉`.
    pub ell_ceil: u64,
    /// Dependency bound `⌈2·d·⌈ℓ⌉⌉`.
    pub dependency: u64,
    /// `e·p·(D+1)`.
    pub product: f64,
    pub satisfied: bool,
}

#[derive(Debug, Error, PartialEq)]
#[error("ℓ must be positive, got {0}")]
pub struct NonPositiveEll(pub f64);

pub fn lll_condition(ell: f64, d: f64) -> Result<LllCheck, NonPositiveEll> {
    if ell.is_nan() || ell <= 0.0 {
        return Err(NonPositiveEll(ell));
    }
    let p = 1.0 / (ell * ell);
    let ell_ceil = ell.ceil() as u64;
    let dependency = (2.0 * d * ell_ceil as f64).ceil().max(0.0) as u64;
    let product = std::f64::consts::E * p * (dependency as f64 + 1.0);
    Ok(LllCheck {
        ell,
        d,
        p,
        ell_ceil,
        dependency,
        product,
        satisfied: product <= 1.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Completion {
    pub coloring: PartialColoring,
    /// Resampling steps performed.
    pub rounds: u64,
    /// Whether the input was good at the given thresholds.
    pub input_good: bool,
    pub lll: Option<LllCheck>,
}

pub const DEFAULT_MAX_ROUNDS: u64 = 1_000_000;

/// Completes `g` by resampling: every blank vertex draws uniformly from
/// `L_g(v)`; while some edge carries a corresponding pair of new colors, the
/// lowest such edge has both endpoints redrawn.
pub fn complete_good(
    cover: &DpCover,
    g: &PartialColoring,
    t: FlawThresholds,
    seed: u64,
    max_rounds: u64,
) -> Result<Completion, ColoringError> {
    g.check_proper(cover)?;
    let n = cover.n();
    let lists: Vec<Vec<usize>> = (0..n)
        .map(|v| match g.get(v) {
            Some(_) => Vec::new(),
            None => (0..cover.q()).filter(|&i| is_available(cover, &g.assignment, v, i)).collect(),
        })
        .collect();
    if let Some(v) = (0..n).find(|&v| g.get(v).is_none() && lists[v].is_empty()) {
        return Err(ColoringError::EmptyList(v));
    }
    let input_good = is_good(cover, g, t);
    let lll = lll_condition(t.ell, t.d).ok();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = g.assignment.clone();
    let blank: Vec<usize> = (0..n).filter(|&v| g.get(v).is_none()).collect();
    for &v in &blank {
        f[v] = Some(lists[v][rng.random_range(0..lists[v].len())]);
    }
    // only edges between two blank vertices can become dangerous
    let risky: Vec<(usize, usize, usize)> = cover
        .base()
        .edges()
        .iter()
        .filter(|&&(u, v)| g.get(u).is_none() && g.get(v).is_none())
        .map(|&(u, v)| (u, v, cover.base().neighbors(u).binary_search(&v).unwrap()))
        .collect();
    let violated = |f: &[Option<usize>]| {
        risky
            .iter()
            .find(|&&(u, v, k)| cover.partner(u, k, f[u].unwrap()) == f[v])
            .map(|&(u, v, _)| (u, v))
    };
    let mut rounds = 0;
    while let Some((u, v)) = violated(&f) {
        if rounds == max_rounds {
            return Err(ColoringError::RoundsExhausted(rounds));
        }
        f[u] = Some(lists[u][rng.random_range(0..lists[u].len())]);
        f[v] = Some(lists[v][rng.random_range(0..lists[v].len())]);
        rounds += 1;
    }
    Ok(Completion {
        coloring: PartialColoring { assignment: f },
        rounds,
        input_good,
        lll,
    })
}
