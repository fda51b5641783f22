// SPDX-License-Identifier: Apache-2.0

//! Query parameters and results shared by every search mode.

use std::fmt;

use thiserror::Error;

use crate::butterfly::ButterflyError;
use crate::graph::{LabeledGraph, VertexId};
use crate::kcore::core_decompose;

/// A core parameter, either fixed or taken from the query vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoreParam {
    #[default]
    Auto,
    Fixed(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    Online,
    #[default]
    Lp,
    L2p,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Online => "online",
            Algorithm::Lp => "lp",
            Algorithm::L2p => "l2p",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "online" => Ok(Algorithm::Online),
            "lp" => Ok(Algorithm::Lp),
            "l2p" => Ok(Algorithm::L2p),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// How many farthest vertices one shrinking step removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeletionMode {
    /// Every non-query vertex at the maximum query distance.
    #[default]
    Bulk,
    /// Only the smallest-id such vertex.
    Single,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BccQuery {
    pub q_l: VertexId,
    pub q_r: VertexId,
    pub k1: CoreParam,
    pub k2: CoreParam,
    pub b: u64,
    pub algorithm: Algorithm,
    pub gamma1: f64,
    pub gamma2: f64,
    pub eta: usize,
    pub rho: u32,
    pub deletion: DeletionMode,
}

impl BccQuery {
    pub const DEFAULT_ETA: usize = 1000;
    pub const DEFAULT_RHO: u32 = 3;
    pub const DEFAULT_GAMMA: f64 = 0.5;

    pub fn new(q_l: VertexId, q_r: VertexId) -> Self {
        BccQuery {
            q_l,
            q_r,
            k1: CoreParam::Auto,
            k2: CoreParam::Auto,
            b: 1,
            algorithm: Algorithm::default(),
            gamma1: Self::DEFAULT_GAMMA,
            gamma2: Self::DEFAULT_GAMMA,
            eta: Self::DEFAULT_ETA,
            rho: Self::DEFAULT_RHO,
            deletion: DeletionMode::Bulk,
        }
    }

    pub fn with_k(mut self, k1: u32, k2: u32) -> Self {
        self.k1 = CoreParam::Fixed(k1);
        self.k2 = CoreParam::Fixed(k2);
        self
    }

    pub fn with_b(mut self, b: u64) -> Self {
        self.b = b;
        self
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn validate(&self, g: &LabeledGraph) -> Result<(), QueryError> {
        validate_vertices(g, &[self.q_l, self.q_r])?;
        if self.b == 0 {
            return Err(QueryError::ZeroThreshold);
        }
        check_weights(self.gamma1, self.gamma2)
    }
}

pub fn check_weights(gamma1: f64, gamma2: f64) -> Result<(), QueryError> {
    for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
        if !g.is_finite() || g < 0.0 {
            return Err(QueryError::InvalidParameter(format!(
                "{name} must be a non-negative number, got {g}"
            )));
        }
    }
    Ok(())
}

/// Checks range and pairwise-distinct labels of query vertices.
pub(crate) fn validate_vertices(g: &LabeledGraph, qs: &[VertexId]) -> Result<(), QueryError> {
    for &q in qs {
        if !g.contains(q) {
            return Err(QueryError::UnknownVertex(q as u64));
        }
    }
    for (i, &a) in qs.iter().enumerate() {
        for &b in &qs[i + 1..] {
            if a == b {
                return Err(QueryError::DuplicateVertex(g.external_id(a)));
            }
            if g.label(a) == g.label(b) {
                return Err(QueryError::SameLabel {
                    a: g.external_id(a),
                    b: g.external_id(b),
                    label: g.label_name(g.label(a)).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Coreness of `q` within its label-induced subgraph.
pub fn auto_k(g: &LabeledGraph, q: VertexId) -> u32 {
    core_decompose(g, Some(g.label(q))).get(q).unwrap_or(0)
}

pub(crate) fn resolve_k(g: &LabeledGraph, q: VertexId, k: CoreParam) -> u32 {
    match k {
        CoreParam::Fixed(k) => k,
        CoreParam::Auto => auto_k(g, q),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("query vertex {0} is not in the graph")]
    UnknownVertex(u64),
    #[error("query vertex {0} given twice")]
    DuplicateVertex(u64),
    #[error("query vertices {a} and {b} share label {label}")]
    SameLabel { a: u64, b: u64, label: String },
    #[error("butterfly threshold must be at least 1")]
    ZeroThreshold,
    #[error("{0}")]
    InvalidParameter(String),
    #[error("query vertices are not connected")]
    Disconnected,
    #[error("index does not match the graph: {0}")]
    IndexMismatch(String),
    #[error(transparent)]
    Butterfly(#[from] ButterflyError),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Found,
    /// Machine-readable reason, e.g. `core-infeasible:left`.
    Infeasible(String),
}

impl Status {
    pub fn is_found(&self) -> bool {
        matches!(self, Status::Found)
    }
}

/// A leader pair with butterfly degrees in the community's cross view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leaders {
    pub v_l: VertexId,
    pub v_r: VertexId,
    pub chi_l: u64,
    pub chi_r: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Full butterfly counts over a bipartite view.
    pub butterfly_recounts: usize,
    /// Incremental leader degree updates.
    pub leader_updates: usize,
    /// Leader re-identifications after a leader failed.
    pub reidentifications: usize,
    /// Full BFS passes from a query vertex.
    pub full_bfs: usize,
    /// Vertices whose distance was recomputed incrementally.
    pub distance_recomputed: usize,
}

/// Why the shrinking loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The initial candidate was infeasible.
    Infeasible,
    /// Only query vertices remained at the maximum distance.
    NoCandidates,
    /// Core maintenance removed a query vertex.
    QueryRemoved,
    /// The cross-group condition could not be restored.
    InteractionLost,
    /// The query vertices fell apart.
    Disconnected,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::Infeasible => "infeasible",
            StopReason::NoCandidates => "no-candidates",
            StopReason::QueryRemoved => "query-removed",
            StopReason::InteractionLost => "interaction-lost",
            StopReason::Disconnected => "disconnected",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BccResult {
    pub status: Status,
    pub algorithm: Algorithm,
    /// Sorted community vertices; empty when infeasible.
    pub vertices: Vec<VertexId>,
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
    pub leaders: Option<Leaders>,
    pub query_distance: u32,
    pub diameter: u32,
    /// Feasible graphs examined by the shrinking loop.
    pub iterations: usize,
    pub k1: u32,
    pub k2: u32,
    /// Feasible graphs that tied the returned query distance.
    pub ties: usize,
    pub stop_reason: StopReason,
    pub stats: SearchStats,
    pub hint: Option<String>,
}

impl BccResult {
    pub(crate) fn infeasible(algorithm: Algorithm, reason: String, k1: u32, k2: u32) -> Self {
        BccResult {
            status: Status::Infeasible(reason),
            algorithm,
            vertices: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
            leaders: None,
            query_distance: 0,
            diameter: 0,
            iterations: 0,
            k1,
            k2,
            ties: 0,
            stop_reason: StopReason::Infeasible,
            stats: SearchStats::default(),
            hint: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let q = BccQuery::new(0, 1);
        assert_eq!(q.k1, CoreParam::Auto);
        assert_eq!(q.b, 1);
        assert_eq!(q.eta, 1000);
        assert_eq!(q.rho, 3);
        assert_eq!(q.gamma1, 0.5);
    }

    #[test]
    fn validation() {
        let g = LabeledGraph::from_edges(&[0, 0, 1], vec!["A".into(), "B".into()], &[(0, 2)]).unwrap();
        assert!(BccQuery::new(0, 2).validate(&g).is_ok());
        assert!(matches!(
            BccQuery::new(0, 1).validate(&g),
            Err(QueryError::SameLabel { .. })
        ));
        assert!(matches!(
            BccQuery::new(0, 0).validate(&g),
            Err(QueryError::DuplicateVertex(0))
        ));
        assert!(matches!(
            BccQuery::new(0, 7).validate(&g),
            Err(QueryError::UnknownVertex(7))
        ));
        assert_eq!(
            BccQuery::new(0, 2).with_b(0).validate(&g),
            Err(QueryError::ZeroThreshold)
        );
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Online, Algorithm::Lp, Algorithm::L2p] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
    }
}
