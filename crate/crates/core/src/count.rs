//! Exact counters: proper colorings, proper H-colorings, partial colorings
//! with restricted domain, colorings good on a set, completions of a partial
//! coloring, and independent sets.
//!
//! Everything except deletion-contraction runs on one backtracking engine that
//! walks vertices in index order. Each vertex is either fixed, or chooses a
//! color still available against its already-assigned neighbors (optionally
//! also blank). Goodness checks fire as soon as the last vertex of `N²[v]`
//! has been assigned, so flawed branches are cut early.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cover::{canonical_cover, DpCover};
use crate::graph::Graph;
use crate::partial::{has_flaw_at, is_available, ColoringError, FlawThresholds, PartialColoring};

pub const DEFAULT_WORK_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Enumeration,
    DeletionContraction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigUint,
    pub method: CountMethod,
    /// Search nodes (or recursion calls) visited.
    pub work: u64,
}

#[derive(Debug, Error)]
pub enum CountError {
    #[error("work limit of {limit} search nodes exceeded (visited {work})")]
    WorkLimitExceeded { limit: u64, work: u64 },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("vertex {0} is outside the graph")]
    VertexOutOfRange(usize),
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Free { blank: bool },
    Fixed(Option<usize>),
}

struct Search<'a> {
    cover: &'a DpCover,
    slots: Vec<Slot>,
    /// `checks[v]`: vertices whose flaw status is settled once `v` is assigned.
    checks: Vec<Vec<usize>>,
    thresholds: FlawThresholds,
    f: Vec<Option<usize>>,
    work: u64,
    limit: u64,
}

impl Search<'_> {
    fn run(mut self) -> Result<CountResult, CountError> {
        let total = if self.cover.n() == 0 { 1 } else { self.visit(0)? };
        Ok(CountResult {
            value: BigUint::from(total),
            method: CountMethod::Enumeration,
            work: self.work,
        })
    }

    fn options(&self, v: usize) -> Vec<Option<usize>> {
        match self.slots[v] {
            Slot::Fixed(c) => match c {
                Some(i) if !is_available(self.cover, &self.f, v, i) => Vec::new(),
                _ => vec![c],
            },
            Slot::Free { blank } => {
                let mut opts: Vec<Option<usize>> = (0..self.cover.q())
                    .filter(|&i| is_available(self.cover, &self.f, v, i))
                    .map(Some)
                    .collect();
                if blank {
                    opts.push(None);
                }
                opts
            }
        }
    }

    fn visit(&mut self, v: usize) -> Result<u128, CountError> {
        self.work += 1;
        if self.work > self.limit {
            return Err(CountError::WorkLimitExceeded {
                limit: self.limit,
                work: self.work,
            });
        }
        let opts = self.options(v);
        let last = v + 1 == self.cover.n();
        if last && self.checks[v].is_empty() {
            return Ok(opts.len() as u128);
        }
        let mut total = 0u128;
        for c in opts {
            self.f[v] = c;
            let ok = self.checks[v]
                .iter()
                .all(|&w| !has_flaw_at(self.cover, &self.f, w, self.thresholds));
            if ok {
                total += if last { 1 } else { self.visit(v + 1)? };
            }
        }
        self.f[v] = None;
        Ok(total)
    }
}

/// Exact counters sharing a work budget.
#[derive(Debug, Clone, Copy)]
pub struct Counter {
    pub work_limit: u64,
}

impl Default for Counter {
    fn default() -> Self {
        Counter {
            work_limit: DEFAULT_WORK_LIMIT,
        }
    }
}

impl Counter {
    pub fn new(work_limit: u64) -> Self {
        Counter { work_limit }
    }

    fn search<'a>(&self, cover: &'a DpCover, slots: Vec<Slot>) -> Search<'a> {
        Search {
            cover,
            f: vec![None; cover.n()],
            checks: vec![Vec::new(); cover.n()],
            slots,
            thresholds: FlawThresholds::never(),
            work: 0,
            limit: self.work_limit,
        }
    }

    /// `c(G, q)`: enumeration when `q^n` fits under the work limit,
    /// deletion-contraction otherwise.
    pub fn colorings(&self, g: &Graph, q: usize) -> Result<CountResult, CountError> {
        let leaves = (q as f64).powi(g.n() as i32);
        if q == 0 || leaves <= self.work_limit as f64 {
            self.colorings_by_enumeration(g, q)
        } else {
            self.colorings_by_deletion_contraction(g, q)
        }
    }

    pub fn colorings_by_enumeration(&self, g: &Graph, q: usize) -> Result<CountResult, CountError> {
        if q == 0 {
            let value = if g.n() == 0 { BigUint::one() } else { BigUint::zero() };
            return Ok(CountResult { value, method: CountMethod::Enumeration, work: 1 });
        }
        let cover = canonical_cover(g, q).expect("q >= 1");
        self.h_colorings(&cover)
    }

    pub fn colorings_by_deletion_contraction(&self, g: &Graph, q: usize) -> Result<CountResult, CountError> {
        let mut dc = DeletionContraction {
            q: BigInt::from(q),
            work: 0,
            limit: self.work_limit,
        };
        let adj: Vec<BTreeSet<usize>> = (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect();
        let value = dc.count(adj)?;
        debug_assert!(!value.is_negative());
        Ok(CountResult {
            value: value.to_biguint().expect("chromatic value at an integer q >= 0 is nonnegative"),
            method: CountMethod::DeletionContraction,
            work: dc.work,
        })
    }

    /// Proper H-colorings: total maps into the lists with independent image.
    pub fn h_colorings(&self, cover: &DpCover) -> Result<CountResult, CountError> {
        let slots = vec![Slot::Free { blank: false }; cover.n()];
        self.search(cover, slots).run()
    }

    /// `|pcol(U)|`: proper partial H-colorings with domain inside `U`.
    pub fn partial_colorings(&self, cover: &DpCover, in_u: &[bool]) -> Result<CountResult, CountError> {
        check_len(cover, in_u)?;
        let slots = in_u
            .iter()
            .map(|&inside| if inside { Slot::Free { blank: true } } else { Slot::Fixed(None) })
            .collect();
        self.search(cover, slots).run()
    }

    /// `|gcol(U)|`: proper partial H-colorings of the whole graph with no
    /// flaw at any `v` with `N²[v] ⊆ U`.
    pub fn good_colorings(&self, cover: &DpCover, in_u: &[bool], t: FlawThresholds) -> Result<CountResult, CountError> {
        check_len(cover, in_u)?;
        let g = cover.base();
        let slots = vec![Slot::Free { blank: true }; cover.n()];
        let mut search = self.search(cover, slots);
        search.thresholds = t;
        for v in 0..g.n() {
            let ball = g.second_neighborhood(v);
            if ball.iter().all(|&w| in_u[w]) {
                let settle = *ball.last().expect("ball contains v");
                search.checks[settle].push(v);
            }
        }
        search.run()
    }

    /// `|Comp(g)|`: proper total H-colorings agreeing with `g` on its domain.
    pub fn completions(&self, cover: &DpCover, g: &PartialColoring) -> Result<CountResult, CountError> {
        g.check_proper(cover)?;
        let slots = g
            .assignment()
            .iter()
            .map(|&c| match c {
                Some(i) => Slot::Fixed(Some(i)),
                None => Slot::Free { blank: false },
            })
            .collect();
        self.search(cover, slots).run()
    }

    /// `i(G)`, the empty set included. Include/exclude branching in vertex
    /// order.
    pub fn independent_sets(&self, g: &Graph) -> Result<CountResult, CountError> {
        fn go(g: &Graph, v: usize, blocked: &mut Vec<u32>, work: &mut u64, limit: u64) -> Result<u128, CountError> {
            *work += 1;
            if *work > limit {
                return Err(CountError::WorkLimitExceeded { limit, work: *work });
            }
            if v == g.n() {
                return Ok(1);
            }
            let mut total = go(g, v + 1, blocked, work, limit)?;
            if blocked[v] == 0 {
                for &w in g.neighbors(v) {
                    blocked[w] += 1;
                }
                total += go(g, v + 1, blocked, work, limit)?;
                for &w in g.neighbors(v) {
                    blocked[w] -= 1;
                }
            }
            Ok(total)
        }
        let mut work = 0;
        let total = go(g, 0, &mut vec![0; g.n()], &mut work, self.work_limit)?;
        Ok(CountResult {
            value: BigUint::from(total),
            method: CountMethod::Enumeration,
            work,
        })
    }
}

fn check_len(cover: &DpCover, in_u: &[bool]) -> Result<(), CountError> {
    if in_u.len() != cover.n() {
        return Err(CountError::VertexOutOfRange(in_u.len().max(cover.n())));
    }
    Ok(())
}

/// Indicator vector of a vertex set.
pub fn vertex_set(n: usize, vertices: &[usize]) -> Result<Vec<bool>, CountError> {
    let mut out = vec![false; n];
    for &v in vertices {
        *out.get_mut(v).ok_or(CountError::VertexOutOfRange(v))? = true;
    }
    Ok(out)
}

struct DeletionContraction {
    q: BigInt,
    work: u64,
    limit: u64,
}

impl DeletionContraction {
    /// Chromatic polynomial at `q` of the graph given by adjacency sets over
    /// live vertices. Vertices of degree 0 and 1 are peeled off first; then
    /// `P(G) = P(G - e) - P(G / e)` with parallel edges merged on contraction.
    fn count(&mut self, mut adj: Vec<BTreeSet<usize>>) -> Result<BigInt, CountError> {
        self.work += 1;
        if self.work > self.limit {
            return Err(CountError::WorkLimitExceeded {
                limit: self.limit,
                work: self.work,
            });
        }
        let mut factor = BigInt::one();
        let mut alive: Vec<bool> = vec![true; adj.len()];
        while let Some(v) = (0..adj.len()).find(|&v| alive[v] && adj[v].len() <= 1) {
            if let Some(&w) = adj[v].iter().next() {
                adj[w].remove(&v);
                factor *= &self.q - 1;
            } else {
                factor *= &self.q;
            }
            adj[v].clear();
            alive[v] = false;
            if factor.is_zero() {
                return Ok(factor);
            }
        }
        // compact the survivors
        let keep: Vec<usize> = (0..adj.len()).filter(|&v| alive[v]).collect();
        if keep.is_empty() {
            return Ok(factor);
        }
        let mut relabel = vec![usize::MAX; adj.len()];
        for (i, &v) in keep.iter().enumerate() {
            relabel[v] = i;
        }
        let adj: Vec<BTreeSet<usize>> = keep
            .iter()
            .map(|&v| adj[v].iter().map(|&w| relabel[w]).collect())
            .collect();

        // branch on an edge at a minimum-degree vertex
        let u = (0..adj.len()).min_by_key(|&v| adj[v].len()).expect("nonempty");
        let w = *adj[u].iter().next().expect("degree >= 2 after peeling");

        let mut deleted = adj.clone();
        deleted[u].remove(&w);
        deleted[w].remove(&u);

        let mut contracted = adj;
        let moved: Vec<usize> = contracted[w].iter().copied().filter(|&x| x != u).collect();
        contracted[w].clear();
        contracted[u].remove(&w);
        for x in moved {
            contracted[x].remove(&w);
            contracted[x].insert(u);
            contracted[u].insert(x);
        }
        // w is now isolated; drop it rather than counting it as a free vertex
        contracted.remove(w);
        for set in &mut contracted {
            *set = set.iter().map(|&x| if x > w { x - 1 } else { x }).collect();
        }

        let a = self.count(deleted)?;
        let b = self.count(contracted)?;
        Ok(factor * (a - b))
    }
}

pub fn count_colorings(g: &Graph, q: usize) -> Result<CountResult, CountError> {
    Counter::default().colorings(g, q)
}

pub fn count_h_colorings(cover: &DpCover) -> Result<CountResult, CountError> {
    Counter::default().h_colorings(cover)
}

pub fn count_partial_colorings(cover: &DpCover, in_u: &[bool]) -> Result<CountResult, CountError> {
    Counter::default().partial_colorings(cover, in_u)
}

pub fn count_good_colorings(cover: &DpCover, in_u: &[bool], t: FlawThresholds) -> Result<CountResult, CountError> {
    Counter::default().good_colorings(cover, in_u, t)
}

pub fn count_completions(cover: &DpCover, g: &PartialColoring) -> Result<CountResult, CountError> {
    Counter::default().completions(cover, g)
}

pub fn count_independent_sets(g: &Graph) -> Result<CountResult, CountError> {
    Counter::default().independent_sets(g)
}
