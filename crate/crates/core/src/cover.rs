//! q-fold DP-covers (correspondence covers).
//!
//! Every vertex `v` owns the list `L(v) = {(v, 0), .., (v, q-1)}`; colors are
//! addressed by [`ColorId`] so the lists partition the cover by construction.
//! Each base edge `uv` (with `u < v`) carries a matching between index sets of
//! `L(u)` and `L(v)`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorId {
    pub vertex: usize,
    pub index: usize,
}

impl ColorId {
    pub fn new(vertex: usize, index: usize) -> Self {
        ColorId { vertex, index }
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vertex, self.index)
    }
}

/// Matching attached to one vertex pair, oriented lower vertex first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMatching {
    pub u: usize,
    pub v: usize,
    /// Pairs `[i, j]`: color `(u, i)` corresponds to `(v, j)`.
    pub matching: Vec<[usize; 2]>,
}

/// A cover as given, before any invariant is checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCover {
    pub base: Graph,
    pub q: usize,
    pub matchings: Vec<EdgeMatching>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CoverViolation {
    /// `q = 0`: lists would be empty.
    EmptyLists,
    /// An index outside `0..q`.
    IndexOutOfRange { u: usize, v: usize, pair: [usize; 2] },
    /// A color appears twice on one side of an edge relation.
    NotAMatching { u: usize, v: usize, color: ColorId },
    /// A matching between two vertices that are not adjacent in the base.
    SupportOutsideEdges { u: usize, v: usize },
    /// Two relations given for the same vertex pair.
    RepeatedPair { u: usize, v: usize },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::EmptyLists => write!(f, "q-fold cover needs q >= 1"),
            CoverViolation::IndexOutOfRange { u, v, pair } => {
                write!(f, "index pair {pair:?} on {u}-{v} is out of range")
            }
            CoverViolation::NotAMatching { u, v, color } => {
                write!(f, "not a matching: color {color} repeated on {u}-{v}")
            }
            CoverViolation::SupportOutsideEdges { u, v } => {
                write!(f, "support outside E(G): matching on non-edge {u}-{v}")
            }
            CoverViolation::RepeatedPair { u, v } => write!(f, "pair {u}-{v} listed twice"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("q must be at least 1")]
    ZeroFold,
    #[error("lists must all have the same size: vertex {vertex} has {found}, expected {expected}")]
    UnequalLists { vertex: usize, expected: usize, found: usize },
    #[error("invalid cover: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<CoverViolation>),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cover JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl RawCover {
    /// Every way this cover fails to be a q-fold DP-cover of `base`; empty
    /// means valid.
    pub fn validate(&self) -> Vec<CoverViolation> {
        let mut out = Vec::new();
        if self.q == 0 {
            out.push(CoverViolation::EmptyLists);
        }
        let mut pairs_seen = BTreeSet::new();
        for em in &self.matchings {
            let (u, v) = (em.u.min(em.v), em.u.max(em.v));
            if !pairs_seen.insert((u, v)) {
                out.push(CoverViolation::RepeatedPair { u, v });
            }
            if !em.matching.is_empty() && !self.base.has_edge(u, v) {
                out.push(CoverViolation::SupportOutsideEdges { u, v });
            }
            let mut left = BTreeSet::new();
            let mut right = BTreeSet::new();
            for &pair in &em.matching {
                let [i, j] = oriented(em, pair);
                if i >= self.q || j >= self.q {
                    out.push(CoverViolation::IndexOutOfRange { u, v, pair: [i, j] });
                    continue;
                }
                if !left.insert(i) {
                    out.push(CoverViolation::NotAMatching { u, v, color: ColorId::new(u, i) });
                }
                if !right.insert(j) {
                    out.push(CoverViolation::NotAMatching { u, v, color: ColorId::new(v, j) });
                }
            }
        }
        out
    }
}

fn oriented(em: &EdgeMatching, [i, j]: [usize; 2]) -> [usize; 2] {
    if em.u <= em.v {
        [i, j]
    } else {
        [j, i]
    }
}

/// Per-vertex correspondence tables: for neighbor `adj[v][k]` the table maps
/// an index of `L(v)` to its partner in `L(adj[v][k])`, if any.
type Tables = Vec<Vec<Vec<Option<u32>>>>;

/// A validated q-fold DP-cover.
#[derive(Clone, PartialEq, Eq)]
pub struct DpCover {
    base: Graph,
    q: usize,
    tables: Tables,
}

impl fmt::Debug for DpCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DpCover")
            .field("base", &self.base)
            .field("q", &self.q)
            .field("matchings", &self.edge_matchings())
            .finish()
    }
}

impl DpCover {
    pub fn from_raw(raw: RawCover) -> Result<Self, CoverError> {
        if raw.q == 0 {
            return Err(CoverError::ZeroFold);
        }
        let violations = raw.validate();
        if !violations.is_empty() {
            return Err(CoverError::Invalid(violations));
        }
        let base = raw.base;
        let q = raw.q;
        let mut tables: Tables = (0..base.n())
            .map(|v| vec![vec![None; q]; base.degree(v)])
            .collect();
        for em in &raw.matchings {
            let (u, v) = (em.u.min(em.v), em.u.max(em.v));
            if em.matching.is_empty() {
                continue;
            }
            let ku = base.neighbors(u).binary_search(&v).expect("validated edge");
            let kv = base.neighbors(v).binary_search(&u).expect("validated edge");
            for &pair in &em.matching {
                let [i, j] = oriented(em, pair);
                tables[u][ku][i] = Some(j as u32);
                tables[v][kv][j] = Some(i as u32);
            }
        }
        Ok(DpCover { base, q, tables })
    }

    fn from_permutations(base: Graph, q: usize, perms: impl Fn(usize) -> Vec<usize>) -> Self {
        let matchings = base
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| EdgeMatching {
                u,
                v,
                matching: perms(e).into_iter().enumerate().map(|(i, j)| [i, j]).collect(),
            })
            .collect();
        DpCover::from_raw(RawCover { base, q, matchings }).expect("permutation matchings are valid")
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Partner of color `(v, index)` at the `k`-th neighbor of `v`.
    #[inline]
    pub fn partner(&self, v: usize, k: usize, index: usize) -> Option<usize> {
        self.tables[v][k][index].map(|j| j as usize)
    }

    /// H-neighbors of `alpha`.
    pub fn correspondents(&self, alpha: ColorId) -> Vec<ColorId> {
        let v = alpha.vertex;
        self.base
            .neighbors(v)
            .iter()
            .enumerate()
            .filter_map(|(k, &w)| self.partner(v, k, alpha.index).map(|j| ColorId::new(w, j)))
            .collect()
    }

    pub fn corresponds(&self, a: ColorId, b: ColorId) -> bool {
        match self.base.neighbors(a.vertex).binary_search(&b.vertex) {
            Ok(k) => self.partner(a.vertex, k, a.index) == Some(b.index),
            Err(_) => false,
        }
    }

    /// Matchings in the serialized orientation, one entry per base edge.
    pub fn edge_matchings(&self) -> Vec<EdgeMatching> {
        self.base
            .edges()
            .iter()
            .map(|&(u, v)| {
                let k = self.base.neighbors(u).binary_search(&v).unwrap();
                let matching = (0..self.q)
                    .filter_map(|i| self.partner(u, k, i).map(|j| [i, j]))
                    .collect();
                EdgeMatching { u, v, matching }
            })
            .collect()
    }

    pub fn to_raw(&self) -> RawCover {
        RawCover {
            base: self.base.clone(),
            q: self.q,
            matchings: self.edge_matchings(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = CoverDoc {
            n: self.n(),
            q: self.q,
            edges: self.edge_matchings(),
        };
        serde_json::to_string(&doc).expect("cover serializes")
    }

    /// Reads the JSON document; the base graph consists of the listed edges.
    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        DpCover::from_raw(raw_from_json(text, None)?)
    }

    /// Reads the JSON document against a known base graph, so that a
    /// matching on a non-edge is reported.
    pub fn from_json_with_base(text: &str, base: Graph) -> Result<Self, CoverError> {
        DpCover::from_raw(raw_from_json(text, Some(base))?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CoverDoc {
    n: usize,
    q: usize,
    edges: Vec<EdgeMatching>,
}

/// Parses the cover JSON without validating matchings.
pub fn raw_from_json(text: &str, base: Option<Graph>) -> Result<RawCover, CoverError> {
    let doc: CoverDoc = serde_json::from_str(text)?;
    let base = match base {
        Some(g) => g,
        None => {
            let pairs: Vec<_> = doc.edges.iter().map(|e| (e.u, e.v)).collect();
            Graph::from_edge_list(doc.n, &pairs)?
        }
    };
    Ok(RawCover {
        base,
        q: doc.q,
        matchings: doc.edges,
    })
}

/// Identity matching on every edge; proper H-colorings are exactly the proper
/// q-colorings of the base graph.
pub fn canonical_cover(g: &Graph, q: usize) -> Result<DpCover, CoverError> {
    if q == 0 {
        return Err(CoverError::ZeroFold);
    }
    Ok(DpCover::from_permutations(g.clone(), q, |_| (0..q).collect()))
}

/// Cover induced by list assignment: colors with equal names are matched
/// across each edge. Lists are sorted, so `(v, i)` is the `i`-th smallest
/// name in `lists[v]`.
pub fn cover_from_lists<T: Ord + Clone>(g: &Graph, lists: &[BTreeSet<T>]) -> Result<DpCover, CoverError> {
    if lists.len() != g.n() {
        return Err(CoverError::Graph(GraphError::InvalidSize(format!(
            "{} lists for {} vertices",
            lists.len(),
            g.n()
        ))));
    }
    let q = lists.first().map_or(0, BTreeSet::len);
    if let Some((vertex, l)) = lists.iter().enumerate().find(|(_, l)| l.len() != q) {
        return Err(CoverError::UnequalLists { vertex, expected: q, found: l.len() });
    }
    if q == 0 && g.n() > 0 {
        return Err(CoverError::ZeroFold);
    }
    let matchings = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let matching = lists[u]
                .iter()
                .enumerate()
                .filter_map(|(i, name)| {
                    lists[v].iter().position(|other| other == name).map(|j| [i, j])
                })
                .collect();
            EdgeMatching { u, v, matching }
        })
        .collect();
    DpCover::from_raw(RawCover { base: g.clone(), q: q.max(1), matchings })
}

/// Independently for each edge, a uniformly random perfect matching between
/// the two lists.
pub fn random_cover(g: &Graph, q: usize, seed: u64) -> Result<DpCover, CoverError> {
    if q == 0 {
        return Err(CoverError::ZeroFold);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Vec<usize>> = (0..g.m())
        .map(|_| {
            let mut p: Vec<usize> = (0..q).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    Ok(DpCover::from_permutations(g.clone(), q, |e| perms[e].clone()))
}

/// Cover with the given permutation on each edge (in [`Graph::edges`]
/// order).
pub fn cover_from_permutations(g: &Graph, q: usize, perms: &[Vec<usize>]) -> Result<DpCover, CoverError> {
    if q == 0 {
        return Err(CoverError::ZeroFold);
    }
    let matchings = g
        .edges()
        .iter()
        .zip(perms)
        .map(|(&(u, v), p)| EdgeMatching {
            u,
            v,
            matching: p.iter().enumerate().map(|(i, &j)| [i, j]).collect(),
        })
        .collect();
    DpCover::from_raw(RawCover { base: g.clone(), q, matchings })
}
