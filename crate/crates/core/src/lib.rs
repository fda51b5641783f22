// SPDX-License-Identifier: Apache-2.0

//! Butterfly-core community search over vertex-labeled graphs.
//!
//! Given two query vertices with different labels, the search finds a
//! connected subgraph made of a k1-core around one query and a k2-core
//! around the other, tied together by a pair of leader vertices that each
//! sit in at least `b` butterflies (2x2 bicliques across the labels), and
//! with small diameter. The multi-label variant generalizes this to any
//! number of labeled groups.

pub mod butterfly;
pub mod cli;
pub mod distance;
pub mod eval;
pub mod graph;
pub mod incremental;
pub mod index;
pub mod io;
pub mod kcore;
pub mod leader;
pub mod local;
pub mod mbcc;
pub mod online;
pub mod query;
pub mod validate;
pub mod working;

pub use graph::{LabelId, LabeledGraph, VertexId};
pub use index::BcIndex;
pub use local::l2p_search;
pub use mbcc::{mbcc_search, MbccQuery, MbccResult};
pub use online::online_search;
pub use query::{Algorithm, BccQuery, BccResult, CoreParam, QueryError, Status};
pub use working::WorkingSubgraph;
