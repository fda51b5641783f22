// SPDX-License-Identifier: Apache-2.0

//! Partial query-distance recomputation after vertex deletions.

use std::collections::VecDeque;

use crate::distance::{bfs_distances, DistanceError, DistanceMap, UNREACHABLE};
use crate::graph::VertexId;
use crate::working::WorkingSubgraph;

/// Distances from one query vertex plus a distance-bucket index.
///
/// Buckets may hold deleted vertices below the last update level; readers
/// filter by liveness.
#[derive(Debug, Clone)]
pub struct IncrementalDistance {
    query: VertexId,
    map: DistanceMap,
    buckets: Vec<Vec<VertexId>>,
    reachable: usize,
}

/// What one incremental update touched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DistanceUpdate {
    /// Smallest old distance among deleted vertices; `None` if none was reachable.
    pub d_min: Option<u32>,
    /// Surviving vertices at `d_min`, used as BFS seeds.
    pub seeds: Vec<VertexId>,
    /// Survivors whose old distance exceeded `d_min`.
    pub recomputed: Vec<VertexId>,
    /// Subset of `recomputed` whose distance changed.
    pub changed: Vec<VertexId>,
}

impl IncrementalDistance {
    pub fn new(ws: &WorkingSubgraph<'_>, query: VertexId) -> Result<Self, DistanceError> {
        let map = bfs_distances(ws, query)?;
        let mut inc = IncrementalDistance {
            query,
            reachable: map.as_slice().iter().filter(|&&d| d != UNREACHABLE).count(),
            map,
            buckets: Vec::new(),
        };
        inc.rebuild_buckets();
        Ok(inc)
    }

    pub fn query(&self) -> VertexId {
        self.query
    }

    pub fn map(&self) -> &DistanceMap {
        &self.map
    }

    /// Number of alive vertices at finite distance.
    pub fn reachable(&self) -> usize {
        self.reachable
    }

    #[inline]
    pub fn distance(&self, v: VertexId) -> u32 {
        self.map.raw(v)
    }

    fn rebuild_buckets(&mut self) {
        self.buckets.clear();
        for (v, &d) in self.map.dist.iter().enumerate() {
            if d == UNREACHABLE {
                continue;
            }
            let d = d as usize;
            if d >= self.buckets.len() {
                self.buckets.resize(d + 1, Vec::new());
            }
            self.buckets[d].push(v as VertexId);
        }
        while self.buckets.last().is_some_and(|b| b.is_empty()) {
            self.buckets.pop();
        }
    }

    /// Alive vertices at exactly distance `d`, ascending.
    pub fn layer(&self, ws: &WorkingSubgraph<'_>, d: u32) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .buckets
            .get(d as usize)
            .map(|b| {
                b.iter()
                    .copied()
                    .filter(|&v| ws.is_alive(v) && self.map.raw(v) == d)
                    .collect()
            })
            .unwrap_or_default();
        out.sort_unstable();
        out
    }

    /// Largest finite distance among alive vertices.
    pub fn eccentricity(&self, ws: &WorkingSubgraph<'_>) -> u32 {
        for d in (0..self.buckets.len()).rev() {
            if self.buckets[d]
                .iter()
                .any(|&v| ws.is_alive(v) && self.map.raw(v) == d as u32)
            {
                return d as u32;
            }
        }
        0
    }

    /// Restores exact distances after `removed` were deleted from `ws`.
    ///
    /// Vertices at or below the smallest removed distance keep their value;
    /// everything farther is recomputed by a BFS seeded at that level.
    pub fn fast_update_distances(&mut self, ws: &WorkingSubgraph<'_>, removed: &[VertexId]) -> DistanceUpdate {
        let d_min = removed
            .iter()
            .map(|&v| self.map.raw(v))
            .filter(|&d| d != UNREACHABLE)
            .min();
        for &v in removed {
            if self.map.dist[v as usize] != UNREACHABLE {
                self.reachable -= 1;
                self.map.dist[v as usize] = UNREACHABLE;
            }
        }
        let Some(d_min) = d_min else {
            return DistanceUpdate::default();
        };

        let seeds = self.layer(ws, d_min);
        let mut recomputed = Vec::new();
        let mut old = Vec::new();
        for bucket in self.buckets.iter().skip(d_min as usize + 1) {
            for &v in bucket {
                let d = self.map.dist[v as usize];
                if ws.is_alive(v) && d != UNREACHABLE && d > d_min {
                    recomputed.push(v);
                    old.push(d);
                }
            }
        }
        for &v in &recomputed {
            self.map.dist[v as usize] = UNREACHABLE;
        }
        let mut queue: VecDeque<VertexId> = seeds.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            let next = self.map.dist[u as usize] + 1;
            for w in ws.alive_neighbors(u) {
                if self.map.dist[w as usize] == UNREACHABLE {
                    self.map.dist[w as usize] = next;
                    queue.push_back(w);
                }
            }
        }
        self.reachable -= recomputed.iter().filter(|&&v| self.map.raw(v) == UNREACHABLE).count();
        let mut changed: Vec<VertexId> = recomputed
            .iter()
            .zip(&old)
            .filter(|(&v, &d)| self.map.raw(v) != d)
            .map(|(&v, _)| v)
            .collect();
        changed.sort_unstable();
        recomputed.sort_unstable();

        if let Some(b) = self.buckets.get_mut(d_min as usize) {
            b.retain(|&v| ws.is_alive(v));
        }
        self.buckets.truncate(d_min as usize + 1);
        for &v in &recomputed {
            let d = self.map.dist[v as usize];
            if d == UNREACHABLE {
                continue;
            }
            let d = d as usize;
            if d >= self.buckets.len() {
                self.buckets.resize(d + 1, Vec::new());
            }
            self.buckets[d].push(v);
        }
        DistanceUpdate {
            d_min: Some(d_min),
            seeds,
            recomputed,
            changed,
        }
    }
}
