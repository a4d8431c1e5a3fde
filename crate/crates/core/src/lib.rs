//! Exact and randomized tools for counting proper colorings of graphs and
//! DP-colorings of covers: exact counters, partial and good colorings, the
//! coupon-collector model, the pairing model for random regular graphs, and
//! the associated closed-form bounds.

pub mod bounds;
pub mod count;
pub mod coupon;
pub mod cover;
pub mod graph;
pub mod numeric;
pub mod partial;
pub mod regular;
pub mod stats;

pub use bounds::{derive_params, BoundError, BoundParams, FormulaId, LogBound};
pub use count::{CountError, CountMethod, CountResult, Counter};
pub use coupon::{CouponError, CouponInstance, CouponOutcome};
pub use cover::{ColorId, CoverError, CoverViolation, DpCover, EdgeMatching, RawCover};
pub use graph::{CorpusGraph, Graph, GraphError, NamedGraph};
pub use partial::{ColoringError, FlawKind, FlawReport, FlawThresholds, PartialColoring};
pub use regular::{MultiGraph, Pairing, PairingError};
