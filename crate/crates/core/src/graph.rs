//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! A [`Graph`] is immutable once built: the edge list is validated, sorted
//! with the lower endpoint first, and the adjacency lists are derived from it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest vertex count accepted by the labeled corpus enumerator.
pub const CORPUS_MAX_VERTICES: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("endpoint {vertex} out of range for a graph on {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("corpus enumeration is limited to {CORPUS_MAX_VERTICES} vertices, got {0}")]
    CorpusTooLarge(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed graph6 string: {0}")]
    Graph6(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::EndpointOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of the edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of neighbors of `v` inside `set` (`set` indexed by vertex).
    pub fn degree_into(&self, v: usize, set: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&w| set[w]).count()
    }

    /// True iff no three vertices are pairwise adjacent. Checks each edge
    /// for a common neighbor by merging the two sorted lists.
    pub fn is_triangle_free(&self) -> bool {
        self.edges.iter().all(|&(u, v)| {
            let (a, b) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
            true
        })
    }

    /// Two-coloring by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &self.adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Closed second neighborhood N²[v]: every vertex at distance at most 2,
    /// `v` included. Sorted.
    pub fn second_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut set = BTreeSet::new();
        set.insert(v);
        for &u in &self.adj[v] {
            set.insert(u);
            set.extend(self.adj[u].iter().copied());
        }
        set.into_iter().collect()
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Contracted, loop-free view used by deletion-contraction and pairing
    /// projection: keeps the vertex count, drops duplicates.
    pub(crate) fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let pairs: Vec<_> = set.into_iter().collect();
        Graph::from_edge_list(n, &pairs).expect("deduplicated loop-free edges")
    }

    /// Disjoint union, vertices of `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let pairs: Vec<_> = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        Graph::from_edge_list(self.n + other.n, &pairs).expect("disjoint union stays simple")
    }

    /// Serializes in the edge-list text format: `n m` followed by one
    /// `u v` line per edge.
    pub fn to_edge_list_string(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses the edge-list text format. Blank lines and anything after `#`
    /// are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header line \"n m\"".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        let [n, m] = nums[..] else {
            return Err(GraphError::Parse {
                line: hline,
                msg: "header must be \"n m\"".into(),
            });
        };
        let mut pairs = Vec::with_capacity(m);
        for (line, body) in lines {
            let nums = parse_numbers(line, body)?;
            let [u, v] = nums[..] else {
                return Err(GraphError::Parse {
                    line,
                    msg: "edge line must be \"u v\"".into(),
                });
            };
            pairs.push((u, v));
        }
        if pairs.len() != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", pairs.len()),
            });
        }
        Graph::from_edge_list(n, &pairs)
    }

    /// Decodes one graph6 string (an optional `>>graph6<<` header is
    /// accepted).
    pub fn from_graph6(s: &str) -> Result<Self, GraphError> {
        let s = s.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(GraphError::Graph6("byte outside 63..=126".into()));
        }
        let sextet = |b: u8| (b - 63) as usize;
        let (n, body) = match bytes {
            [] => return Err(GraphError::Graph6("empty string".into())),
            [126, 126, rest @ ..] => {
                if rest.len() < 6 {
                    return Err(GraphError::Graph6("truncated 8-byte size".into()));
                }
                let n = rest[..6].iter().fold(0, |acc, &b| (acc << 6) | sextet(b));
                (n, &rest[6..])
            }
            [126, rest @ ..] => {
                if rest.len() < 3 {
                    return Err(GraphError::Graph6("truncated 4-byte size".into()));
                }
                let n = rest[..3].iter().fold(0, |acc, &b| (acc << 6) | sextet(b));
                (n, &rest[3..])
            }
            [b, rest @ ..] => (sextet(*b), rest),
        };
        let nbits = n * n.saturating_sub(1) / 2;
        let need = nbits.div_ceil(6);
        if body.len() != need {
            return Err(GraphError::Graph6(format!(
                "expected {need} data bytes for n={n}, found {}",
                body.len()
            )));
        }
        let bit = |k: usize| (sextet(body[k / 6]) >> (5 - k % 6)) & 1 == 1;
        let mut pairs = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    pairs.push((i, j));
                }
                k += 1;
            }
        }
        if (nbits..need * 6).any(bit) {
            return Err(GraphError::Graph6("nonzero padding bits".into()));
        }
        Graph::from_edge_list(n, &pairs)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out: Vec<u8> = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
        } else {
            out.extend([126, 126]);
            out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 is printable ASCII")
    }
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<usize>, GraphError> {
    body.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|e| GraphError::Parse {
                line,
                msg: format!("{t:?}: {e}"),
            })
        })
        .collect()
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Graph::parse_edge_list(s)
    }
}

/// Named generators for the graphs that appear in statements and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Star(usize),
    Petersen,
    /// `t` disjoint copies of `K_k`.
    CliqueUnion(usize, usize),
}

impl NamedGraph {
    pub fn build(self) -> Result<Graph, GraphError> {
        match self {
            NamedGraph::Cycle(n) => {
                if n < 3 {
                    return Err(GraphError::InvalidSize(format!("cycle needs n >= 3, got {n}")));
                }
                let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                Graph::from_edge_list(n, &pairs)
            }
            NamedGraph::Path(n) => {
                if n == 0 {
                    return Err(GraphError::InvalidSize("path needs n >= 1".into()));
                }
                let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                Graph::from_edge_list(n, &pairs)
            }
            NamedGraph::Complete(k) => {
                let pairs: Vec<_> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
                Graph::from_edge_list(k, &pairs)
            }
            NamedGraph::CompleteBipartite(a, b) => {
                let pairs: Vec<_> = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
                Graph::from_edge_list(a + b, &pairs)
            }
            NamedGraph::Star(leaves) => NamedGraph::CompleteBipartite(1, leaves).build(),
            NamedGraph::Petersen => {
                let mut pairs = Vec::with_capacity(15);
                for i in 0..5 {
                    pairs.push((i, (i + 1) % 5));
                    pairs.push((i, i + 5));
                    pairs.push((5 + i, 5 + (i + 2) % 5));
                }
                Graph::from_edge_list(10, &pairs)
            }
            NamedGraph::CliqueUnion(t, k) => {
                if k == 0 {
                    return Err(GraphError::InvalidSize("clique size must be >= 1".into()));
                }
                let clique = NamedGraph::Complete(k).build()?;
                Ok((0..t).fold(Graph::empty(0), |acc, _| acc.disjoint_union(&clique)))
            }
        }
    }
}

impl FromStr for NamedGraph {
    type Err = GraphError;

    /// Accepts `cycle:5`, `path:4`, `complete:3`, `kbip:2,3`, `star:4`,
    /// `petersen`, `cliques:2,3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|t| t.trim().parse().map_err(|_| GraphError::InvalidSize(format!("bad argument {t:?}"))))
                .collect::<Result<_, _>>()?
        };
        let bad = || GraphError::InvalidSize(format!("unrecognized named graph {s:?}"));
        Ok(match (name, nums.as_slice()) {
            ("cycle", [n]) => NamedGraph::Cycle(*n),
            ("path", [n]) => NamedGraph::Path(*n),
            ("complete", [k]) => NamedGraph::Complete(*k),
            ("kbip", [a, b]) => NamedGraph::CompleteBipartite(*a, *b),
            ("star", [l]) => NamedGraph::Star(*l),
            ("petersen", []) => NamedGraph::Petersen,
            ("cliques", [t, k]) => NamedGraph::CliqueUnion(*t, *k),
            _ => return Err(bad()),
        })
    }
}

/// Labeled graph identified by its vertex count and edge-subset bitmask over
/// the pairs `(i, j)`, `i < j`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub id: String,
    pub graph: Graph,
}

/// All labeled graphs on exactly `n` vertices passing `keep`, in bitmask
/// order.
pub fn enumerate_graphs<F>(n: usize, keep: F) -> Result<impl Iterator<Item = CorpusGraph>, GraphError>
where
    F: Fn(&Graph) -> bool,
{
    if n > CORPUS_MAX_VERTICES {
        return Err(GraphError::CorpusTooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total: u64 = 1 << pairs.len();
    Ok((0..total).filter_map(move |mask| {
        let chosen: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let graph = Graph::from_edge_list(n, &chosen).expect("subset of distinct pairs");
        keep(&graph).then(|| CorpusGraph {
            id: format!("n{n}_m{mask}"),
            graph,
        })
    }))
}

/// All labeled graphs on `1..=n_max` vertices passing `keep`.
pub fn enumerate_small_graphs<F>(n_max: usize, keep: F) -> Result<Vec<CorpusGraph>, GraphError>
where
    F: Fn(&Graph) -> bool,
{
    if n_max > CORPUS_MAX_VERTICES {
        return Err(GraphError::CorpusTooLarge(n_max));
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(enumerate_graphs(n, &keep)?);
    }
    Ok(out)
}
