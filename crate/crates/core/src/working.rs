// SPDX-License-Identifier: Apache-2.0

//! Deletion-only overlay on a [`LabeledGraph`].

use crate::graph::{LabelId, LabeledGraph, VertexId};

/// A shrinking induced subgraph of a base graph.
///
/// Tracks, for every alive vertex, its number of alive neighbors and its
/// number of alive neighbors sharing its label. Deleted vertices never come
/// back.
#[derive(Debug, Clone)]
pub struct WorkingSubgraph<'g> {
    base: &'g LabeledGraph,
    alive: Vec<bool>,
    live_degree: Vec<u32>,
    label_degree: Vec<u32>,
    alive_count: usize,
}

impl<'g> WorkingSubgraph<'g> {
    /// Every vertex of `base` alive.
    pub fn full(base: &'g LabeledGraph) -> Self {
        Self::from_mask(base, vec![true; base.vertex_count()])
    }

    pub fn from_vertices(base: &'g LabeledGraph, vertices: &[VertexId]) -> Self {
        let mut mask = vec![false; base.vertex_count()];
        for &v in vertices {
            mask[v as usize] = true;
        }
        Self::from_mask(base, mask)
    }

    pub fn from_mask(base: &'g LabeledGraph, alive: Vec<bool>) -> Self {
        assert_eq!(alive.len(), base.vertex_count());
        let n = base.vertex_count();
        let mut live_degree = vec![0u32; n];
        let mut label_degree = vec![0u32; n];
        let mut alive_count = 0;
        for v in base.vertices() {
            if !alive[v as usize] {
                continue;
            }
            alive_count += 1;
            let lv = base.label(v);
            for &u in base.neighbors(v) {
                if alive[u as usize] {
                    live_degree[v as usize] += 1;
                    if base.label(u) == lv {
                        label_degree[v as usize] += 1;
                    }
                }
            }
        }
        WorkingSubgraph {
            base,
            alive,
            live_degree,
            label_degree,
            alive_count,
        }
    }

    pub fn base(&self) -> &'g LabeledGraph {
        self.base
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive[v as usize]
    }

    pub fn alive_mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    /// Alive neighbors of `v` in the overlay.
    #[inline]
    pub fn live_degree(&self, v: VertexId) -> u32 {
        self.live_degree[v as usize]
    }

    /// Alive neighbors of `v` that carry the same label as `v`.
    #[inline]
    pub fn label_degree(&self, v: VertexId) -> u32 {
        self.label_degree[v as usize]
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.base.vertices().filter(move |&v| self.alive[v as usize])
    }

    pub fn alive_with_label(&self, label: LabelId) -> impl Iterator<Item = VertexId> + '_ {
        self.alive_vertices().filter(move |&v| self.base.label(v) == label)
    }

    pub fn alive_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.base
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&u| self.alive[u as usize])
    }

    /// Deletes `v`; returns false if it was already gone.
    pub fn delete(&mut self, v: VertexId) -> bool {
        if !self.alive[v as usize] {
            return false;
        }
        self.alive[v as usize] = false;
        self.alive_count -= 1;
        let lv = self.base.label(v);
        for &u in self.base.neighbors(v) {
            if self.alive[u as usize] {
                self.live_degree[u as usize] -= 1;
                if self.base.label(u) == lv {
                    self.label_degree[u as usize] -= 1;
                }
            }
        }
        self.live_degree[v as usize] = 0;
        self.label_degree[v as usize] = 0;
        true
    }

    /// Deletes every vertex of `vertices`, returning the ones that were alive.
    pub fn delete_all(&mut self, vertices: &[VertexId]) -> Vec<VertexId> {
        let removed: Vec<VertexId> = vertices.iter().copied().filter(|&v| self.delete(v)).collect();
        #[cfg(debug_assertions)]
        if self.base.vertex_count() <= 4096 {
            debug_assert!(self.degrees_consistent());
        }
        removed
    }

    /// Recomputes both degree counters from scratch and compares.
    pub fn degrees_consistent(&self) -> bool {
        self.alive_vertices().all(|v| {
            let lv = self.base.label(v);
            let (mut all, mut same) = (0, 0);
            for u in self.alive_neighbors(v) {
                all += 1;
                if self.base.label(u) == lv {
                    same += 1;
                }
            }
            all == self.live_degree(v) && same == self.label_degree(v)
        })
    }

    /// Sorted list of alive vertices.
    pub fn snapshot(&self) -> Vec<VertexId> {
        self.alive_vertices().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(labels: &[LabelId], edges: &[(VertexId, VertexId)]) -> LabeledGraph {
        LabeledGraph::from_edges(labels, vec!["A".into(), "B".into()], edges).unwrap()
    }

    #[test]
    fn delete_is_idempotent() {
        let g = graph(&[0, 0, 1], &[(0, 1), (1, 2), (0, 2)]);
        let mut ws = WorkingSubgraph::full(&g);
        assert!(ws.delete(1));
        assert!(!ws.delete(1));
        assert_eq!(ws.alive_count(), 2);
        assert_eq!(ws.live_degree(0), 1);
        assert_eq!(ws.label_degree(0), 0);
        assert_eq!(ws.live_degree(2), 1);
    }

    proptest! {
        #[test]
        fn degrees_track_deletions(
            n in 2usize..30,
            raw_edges in prop::collection::vec((0u32..30, 0u32..30), 0..120),
            order in prop::collection::vec(0u32..30, 0..30),
        ) {
            let labels: Vec<LabelId> = (0..n as u32).map(|v| v % 2).collect();
            let edges: Vec<_> = raw_edges
                .into_iter()
                .map(|(a, b)| (a % n as u32, b % n as u32))
                .filter(|(a, b)| a != b)
                .collect();
            let g = graph(&labels, &edges);
            let mut ws = WorkingSubgraph::full(&g);
            for chunk in order.chunks(3) {
                let batch: Vec<_> = chunk.iter().map(|&v| v % n as u32).collect();
                ws.delete_all(&batch);
                prop_assert!(ws.degrees_consistent());
                prop_assert_eq!(ws.alive_count(), ws.alive_vertices().count());
            }
        }
    }
}
