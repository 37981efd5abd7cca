//! Incremental hypergraph approximation through n-projected graphs.
//!
//! The crate is `no_std` with `alloc`. Enabling the default `std` feature only
//! switches the data-parallel paths (projection, feature extraction, triple
//! sampling) onto rayon; results are bit-identical either way.
//!
//! Layout:
//! - [`hypergraph`]: canonical weighted hypergraph with unique hyperedges.
//! - [`projection`]: n-projected graphs and n-order expansions.
//! - [`candidates`]: positive extraction, star/clique negatives, splits.
//! - [`features`]: the six order-indexed candidate features.
//! - [`classifier`] and [`metrics`]: L2 logistic regression, AUC-PR, Pearson.
//! - [`diagnostics`]: 3-pg density and plug-in information statistics.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod candidates;
pub mod classifier;
pub mod combinatorics;
pub mod diagnostics;
mod error;
pub mod features;
pub mod hypergraph;
pub mod metrics;
pub mod projection;
pub mod seed;

pub use candidates::{CandidateSet, NegativeKind, SampledNegatives};
pub use classifier::{LogRegConfig, LogRegModel, Matrix, Standardization};
pub use diagnostics::{JointHistogram, TripleSample};
pub use error::{Error, Result};
pub use features::{FeatureKind, FeatureMatrix, FeatureOptions, MeanMode};
pub use hypergraph::{Hyperedge, Hypergraph, RawHyperedges};
pub use metrics::PrResult;
pub use projection::{Expansion, ProjectedGraph, ProjectionOptions};

/// Dense node identifier.
pub type NodeId = u32;

/// Sorted, duplicate-free set of node ids.
pub type NodeSet = alloc::vec::Vec<NodeId>;

/// Hash set of node sets with a fixed (unseeded) hasher.
pub type NodeSetSet = hashbrown::HashSet<NodeSet, rustc_hash::FxBuildHasher>;
