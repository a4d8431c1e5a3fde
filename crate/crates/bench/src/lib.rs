//! Fixtures shared by the benchmarks.

use colorcount::cover::{random_cover, DpCover};
use colorcount::{Graph, NamedGraph};

pub fn petersen() -> Graph {
    NamedGraph::Petersen.build().expect("petersen builds")
}

/// A random q-fold cover of a 6-cycle with a pendant path of length 2.
pub fn small_cover(q: usize, seed: u64) -> DpCover {
    let g = Graph::from_edge_list(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (5, 6), (6, 7)])
        .expect("valid edges");
    random_cover(&g, q, seed).expect("q > 0")
}
