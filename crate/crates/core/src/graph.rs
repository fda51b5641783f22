// SPDX-License-Identifier: Apache-2.0

//! Immutable vertex-labeled graph in compressed adjacency form.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

/// Dense vertex identifier, `0..vertex_count`.
pub type VertexId = u32;

/// Interned label identifier, `0..label_count`.
pub type LabelId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),
    #[error("vertex {0} appears in an edge but has no label")]
    MissingLabel(u64),
    #[error("vertex {vertex} labeled twice ({first} and {second})")]
    ConflictingLabel { vertex: u64, first: String, second: String },
    #[error("vertex index {0} out of range")]
    OutOfRange(u64),
}

/// Simple undirected graph with exactly one label per vertex.
///
/// Vertex ids are dense and assigned in ascending order of the external ids
/// seen while loading. Label ids are assigned in lexicographic order of the
/// label names. Neighbor lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    labels: Vec<LabelId>,
    label_names: Vec<String>,
    external_ids: Vec<u64>,
    lookup: HashMap<u64, VertexId>,
    duplicate_edges: usize,
}

impl LabeledGraph {
    /// Builds a graph over dense ids `0..labels.len()`.
    ///
    /// Duplicate edges (in either orientation) are collapsed and counted;
    /// self-loops are rejected. External ids equal the dense ids.
    pub fn from_edges(
        labels: &[LabelId],
        label_names: Vec<String>,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        for &l in labels {
            if l as usize >= label_names.len() {
                return Err(GraphError::OutOfRange(l as u64));
            }
        }
        let mut pairs = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(GraphError::OutOfRange(u as u64));
            }
            if v as usize >= n {
                return Err(GraphError::OutOfRange(v as u64));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u as u64));
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicate_edges = (before - pairs.len()) / 2;

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = pairs.into_iter().map(|(_, v)| v).collect();
        let external_ids: Vec<u64> = (0..n as u64).collect();
        let lookup = external_ids
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as VertexId))
            .collect();
        Ok(LabeledGraph {
            offsets,
            neighbors,
            labels: labels.to_vec(),
            label_names,
            external_ids,
            lookup,
            duplicate_edges,
        })
    }

    /// Builds a graph from external ids and label names.
    ///
    /// `vertex_labels` must name every vertex that appears in `edges`;
    /// labeled vertices without edges are kept as isolated vertices.
    pub fn from_external(vertex_labels: &BTreeMap<u64, String>, edges: &[(u64, u64)]) -> Result<Self, GraphError> {
        let mut names: Vec<String> = vertex_labels.values().cloned().collect();
        names.sort();
        names.dedup();
        let name_ids: HashMap<&str, LabelId> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as LabelId))
            .collect();

        let external_ids: Vec<u64> = vertex_labels.keys().copied().collect();
        let lookup: HashMap<u64, VertexId> = external_ids
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as VertexId))
            .collect();
        let labels: Vec<LabelId> = vertex_labels.values().map(|name| name_ids[name.as_str()]).collect();

        let mut dense = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let u = *lookup.get(&a).ok_or(GraphError::MissingLabel(a))?;
            let v = *lookup.get(&b).ok_or(GraphError::MissingLabel(b))?;
            dense.push((u, v));
        }
        let mut g = LabeledGraph::from_edges(&labels, names, &dense)?;
        g.external_ids = external_ids;
        g.lookup = lookup;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> LabelId {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    pub fn label_name(&self, label: LabelId) -> &str {
        &self.label_names[label as usize]
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_names.iter().position(|n| n == name).map(|i| i as LabelId)
    }

    pub fn external_id(&self, v: VertexId) -> u64 {
        self.external_ids[v as usize]
    }

    pub fn vertex_of(&self, external: u64) -> Option<VertexId> {
        self.lookup.get(&external).copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.vertex_count()
    }

    /// Number of input edges dropped as duplicates while building.
    pub fn duplicate_edges(&self) -> usize {
        self.duplicate_edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertex_count() as VertexId
    }

    pub fn vertices_with_label(&self, label: LabelId) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.label(v) == label)
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Size of the common neighborhood of `u` and `v`.
    pub fn common_neighbor_count(&self, u: VertexId, v: VertexId) -> usize {
        sorted_intersection_count(self.neighbors(u), self.neighbors(v))
    }
}

/// Counts common elements of two ascending slices.
pub(crate) fn sorted_intersection_count(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
