// SPDX-License-Identifier: Apache-2.0

//! k-core decomposition, seeded k-core extraction and k-core maintenance
//! under vertex deletion.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{LabelId, LabeledGraph, VertexId};
use crate::working::WorkingSubgraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KCoreError {
    #[error("seed {seed} has label {actual}, expected {expected}")]
    LabelMismatch {
        seed: VertexId,
        expected: LabelId,
        actual: LabelId,
    },
}

/// Coreness of every vertex of a (possibly label-restricted) graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreIndex {
    coreness: Vec<u32>,
    k_max: u32,
}

impl CoreIndex {
    /// Marker for vertices outside the decomposed subgraph.
    pub const UNDEFINED: u32 = u32::MAX;

    /// `None` for vertices outside the decomposed subgraph.
    pub fn get(&self, v: VertexId) -> Option<u32> {
        match self.coreness[v as usize] {
            Self::UNDEFINED => None,
            k => Some(k),
        }
    }

    pub fn raw(&self) -> &[u32] {
        &self.coreness
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub(crate) fn from_raw(coreness: Vec<u32>) -> Self {
        let k_max = coreness
            .iter()
            .copied()
            .filter(|&k| k != Self::UNDEFINED)
            .max()
            .unwrap_or(0);
        CoreIndex { coreness, k_max }
    }
}

/// Linear-time bucket peeling over the vertices accepted by `member`.
fn peel(g: &LabeledGraph, member: impl Fn(VertexId) -> bool) -> Vec<u32> {
    let n = g.vertex_count();
    let mut core = vec![CoreIndex::UNDEFINED; n];
    let mut degree = vec![0usize; n];
    let mut max_degree = 0;
    let mut count = 0;
    for v in g.vertices() {
        if member(v) {
            let d = g.neighbors(v).iter().filter(|&&u| member(u)).count();
            degree[v as usize] = d;
            max_degree = max_degree.max(d);
            count += 1;
        }
    }

    // bin[d] = first position of degree d in `order`
    let mut bin = vec![0usize; max_degree + 2];
    for v in g.vertices().filter(|&v| member(v)) {
        bin[degree[v as usize] + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0 as VertexId; count];
    let mut next = bin.clone();
    for v in g.vertices().filter(|&v| member(v)) {
        let d = degree[v as usize];
        pos[v as usize] = next[d];
        order[next[d]] = v;
        next[d] += 1;
    }

    for i in 0..count {
        let v = order[i];
        let dv = degree[v as usize];
        core[v as usize] = dv as u32;
        for &u in g.neighbors(v) {
            if !member(u) {
                continue;
            }
            let du = degree[u as usize];
            if du > dv {
                // move u to the front of its bin, then shrink the bin
                let pu = pos[u as usize];
                let pw = bin[du];
                let w = order[pw];
                if u != w {
                    order[pu] = w;
                    order[pw] = u;
                    pos[u as usize] = pw;
                    pos[w as usize] = pu;
                }
                bin[du] += 1;
                degree[u as usize] = du - 1;
            }
        }
    }
    core
}

/// Coreness of every vertex, optionally within the subgraph induced by one
/// label. Vertices outside the restriction get [`CoreIndex::UNDEFINED`].
pub fn core_decompose(g: &LabeledGraph, restrict_label: Option<LabelId>) -> CoreIndex {
    let coreness = match restrict_label {
        Some(l) => peel(g, |v| g.label(v) == l),
        None => peel(g, |_| true),
    };
    CoreIndex::from_raw(coreness)
}

/// Coreness within the alive part of `ws` restricted to one label.
pub fn core_decompose_alive(ws: &WorkingSubgraph<'_>, label: LabelId) -> CoreIndex {
    let g = ws.base();
    CoreIndex::from_raw(peel(g, |v| ws.is_alive(v) && g.label(v) == label))
}

/// Connected component containing `seed` of the k-core of the alive
/// subgraph induced by `label`. Empty when the seed is peeled away.
pub fn extract_kcore(
    ws: &WorkingSubgraph<'_>,
    label: LabelId,
    k: u32,
    seed: VertexId,
) -> Result<Vec<VertexId>, KCoreError> {
    let g = ws.base();
    if g.label(seed) != label {
        return Err(KCoreError::LabelMismatch {
            seed,
            expected: label,
            actual: g.label(seed),
        });
    }
    if !ws.is_alive(seed) {
        return Ok(Vec::new());
    }
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    let mut degree = vec![0u32; n];
    let mut queue = VecDeque::new();
    for v in ws.alive_with_label(label) {
        inside[v as usize] = true;
        degree[v as usize] = ws.label_degree(v);
        if degree[v as usize] < k {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if !inside[v as usize] {
            continue;
        }
        inside[v as usize] = false;
        for &u in g.neighbors(v) {
            if inside[u as usize] {
                degree[u as usize] -= 1;
                if degree[u as usize] + 1 == k {
                    queue.push_back(u);
                }
            }
        }
    }
    if !inside[seed as usize] {
        return Ok(Vec::new());
    }
    let mut component = component_within(g, seed, |v| inside[v as usize]);
    component.sort_unstable();
    Ok(component)
}

fn component_within(g: &LabeledGraph, seed: VertexId, member: impl Fn(VertexId) -> bool) -> Vec<VertexId> {
    let mut seen = vec![false; g.vertex_count()];
    let mut out = vec![seed];
    seen[seed as usize] = true;
    let mut head = 0;
    while head < out.len() {
        let v = out[head];
        head += 1;
        for &u in g.neighbors(v) {
            if !seen[u as usize] && member(u) {
                seen[u as usize] = true;
                out.push(u);
            }
        }
    }
    out
}

/// Restores the k-core property of `label`'s alive group after `removed`
/// were deleted from `ws`.
///
/// Repeatedly deletes vertices of `label` whose alive same-label degree is
/// below `k`. Returns the removed vertices of `label` followed by the
/// cascade, in deletion order.
pub fn maintain_kcore(ws: &mut WorkingSubgraph<'_>, label: LabelId, k: u32, removed: &[VertexId]) -> Vec<VertexId> {
    let g = ws.base();
    let mut cascade: Vec<VertexId> = removed.iter().copied().filter(|&v| g.label(v) == label).collect();
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for &v in removed {
        for &u in g.neighbors(v) {
            if g.label(u) == label && ws.is_alive(u) {
                queue.push_back(u);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        if ws.is_alive(u) && ws.label_degree(u) < k {
            ws.delete(u);
            cascade.push(u);
            for &w in g.neighbors(u) {
                if g.label(w) == label && ws.is_alive(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    cascade
}

/// Deletes every alive vertex of `label` outside the same-label component
/// of `seed`. Returns the deleted vertices; deletes the whole group when
/// the seed is gone.
pub fn prune_to_component(ws: &mut WorkingSubgraph<'_>, label: LabelId, seed: VertexId) -> Vec<VertexId> {
    let g = ws.base();
    let mut keep = vec![false; g.vertex_count()];
    if ws.is_alive(seed) {
        for v in component_within(g, seed, |v| ws.is_alive(v) && g.label(v) == label) {
            keep[v as usize] = true;
        }
    }
    let doomed: Vec<VertexId> = ws.alive_with_label(label).filter(|&v| !keep[v as usize]).collect();
    ws.delete_all(&doomed)
}
