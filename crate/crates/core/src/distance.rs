// SPDX-License-Identifier: Apache-2.0

//! Hop distances over the alive part of a [`WorkingSubgraph`].

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::VertexId;
use crate::working::WorkingSubgraph;

/// Distance of vertices that cannot be reached. Never used in arithmetic.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("vertex {0} is out of range")]
    OutOfRange(VertexId),
    #[error("vertex {0} has been deleted")]
    Deleted(VertexId),
    #[error("graph is disconnected (vertex {0} unreachable)")]
    Disconnected(VertexId),
    #[error("graph has no alive vertices")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceSource {
    Vertex(VertexId),
    Set(Vec<VertexId>),
}

/// Per-vertex hop count from a source (or source set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    pub(crate) dist: Vec<u32>,
    source: DistanceSource,
}

impl DistanceMap {
    pub fn source(&self) -> &DistanceSource {
        &self.source
    }

    /// `None` when unreachable.
    pub fn get(&self, v: VertexId) -> Option<u32> {
        match self.dist[v as usize] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    /// Raw value, [`UNREACHABLE`] included.
    #[inline]
    pub fn raw(&self, v: VertexId) -> u32 {
        self.dist[v as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.dist
    }

    /// Vertices at exactly distance `d`, ascending.
    pub fn layer(&self, d: u32) -> Vec<VertexId> {
        (0..self.dist.len() as VertexId)
            .filter(|&v| self.dist[v as usize] == d)
            .collect()
    }
}

fn check_source(ws: &WorkingSubgraph<'_>, v: VertexId) -> Result<(), DistanceError> {
    if !ws.base().contains(v) {
        return Err(DistanceError::OutOfRange(v));
    }
    if !ws.is_alive(v) {
        return Err(DistanceError::Deleted(v));
    }
    Ok(())
}

fn bfs_from(ws: &WorkingSubgraph<'_>, sources: &[VertexId]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; ws.base().vertex_count()];
    let mut queue = VecDeque::with_capacity(ws.alive_count());
    for &s in sources {
        if dist[s as usize] == UNREACHABLE {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for w in ws.alive_neighbors(u) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Exact hop distances from `source` over alive vertices.
pub fn bfs_distances(ws: &WorkingSubgraph<'_>, source: VertexId) -> Result<DistanceMap, DistanceError> {
    check_source(ws, source)?;
    Ok(DistanceMap {
        dist: bfs_from(ws, &[source]),
        source: DistanceSource::Vertex(source),
    })
}

/// Distance to the nearest member of `sources`.
pub fn multi_source_distances(ws: &WorkingSubgraph<'_>, sources: &[VertexId]) -> Result<DistanceMap, DistanceError> {
    for &s in sources {
        check_source(ws, s)?;
    }
    Ok(DistanceMap {
        dist: bfs_from(ws, sources),
        source: DistanceSource::Set(sources.to_vec()),
    })
}

/// Maximum query distance of the alive vertex set and the vertices attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryDistance {
    pub max: u32,
    pub argmax: Vec<VertexId>,
}

/// `max_{v alive, q} dist(v, q)` together with every vertex attaining it.
///
/// Any alive vertex unreachable from a query vertex is reported as
/// [`DistanceError::Disconnected`].
pub fn query_distance(ws: &WorkingSubgraph<'_>, maps: &[DistanceMap]) -> Result<QueryDistance, DistanceError> {
    let mut best = 0u32;
    let mut argmax = Vec::new();
    let mut any = false;
    for v in ws.alive_vertices() {
        any = true;
        let mut d = 0u32;
        for m in maps {
            let x = m.raw(v);
            if x == UNREACHABLE {
                return Err(DistanceError::Disconnected(v));
            }
            d = d.max(x);
        }
        if d > best {
            best = d;
            argmax.clear();
        }
        if d == best {
            argmax.push(v);
        }
    }
    if !any {
        return Err(DistanceError::Empty);
    }
    Ok(QueryDistance { max: best, argmax })
}

/// Eccentricity of `v` over alive vertices, with the BFS distances.
fn eccentricity(ws: &WorkingSubgraph<'_>, v: VertexId) -> Result<(u32, Vec<u32>), DistanceError> {
    let dist = bfs_from(ws, &[v]);
    let mut ecc = 0;
    for u in ws.alive_vertices() {
        match dist[u as usize] {
            UNREACHABLE => return Err(DistanceError::Disconnected(u)),
            d => ecc = ecc.max(d),
        }
    }
    Ok((ecc, dist))
}

/// Exact diameter of the alive subgraph.
///
/// Uses the fringe-bounded sweep: BFS from a high-degree vertex `u`, then
/// visits vertices in decreasing distance from `u`; once the best
/// eccentricity found exceeds twice the level below, no farther pair can
/// exist.
pub fn diameter(ws: &WorkingSubgraph<'_>) -> Result<u32, DistanceError> {
    let start = ws
        .alive_vertices()
        .max_by_key(|&v| (ws.live_degree(v), std::cmp::Reverse(v)))
        .ok_or(DistanceError::Empty)?;
    let (ecc_u, dist) = eccentricity(ws, start)?;
    let mut levels: Vec<Vec<VertexId>> = vec![Vec::new(); ecc_u as usize + 1];
    for v in ws.alive_vertices() {
        levels[dist[v as usize] as usize].push(v);
    }
    let mut lower = ecc_u;
    let mut upper = 2 * ecc_u;
    let mut i = ecc_u;
    while upper > lower && i > 0 {
        let mut level_best = 0;
        for &v in &levels[i as usize] {
            let (e, _) = eccentricity(ws, v)?;
            level_best = level_best.max(e);
        }
        lower = lower.max(level_best);
        if lower > 2 * (i - 1) {
            return Ok(lower);
        }
        upper = 2 * (i - 1);
        i -= 1;
    }
    Ok(lower)
}

/// Shortest path between `s` and `t` through vertices accepted by `allowed`,
/// over the base graph. Ties resolve toward smaller vertex ids.
pub fn shortest_path_filtered(
    g: &crate::graph::LabeledGraph,
    s: VertexId,
    t: VertexId,
    allowed: impl Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    if !allowed(s) || !allowed(t) {
        return None;
    }
    let n = g.vertex_count();
    let mut parent = vec![VertexId::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[s as usize] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        if u == t {
            let mut path = vec![t];
            let mut x = t;
            while x != s {
                x = parent[x as usize];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(u) {
            if !seen[w as usize] && allowed(w) {
                seen[w as usize] = true;
                parent[w as usize] = u;
                queue.push_back(w);
            }
        }
    }
    None
}
