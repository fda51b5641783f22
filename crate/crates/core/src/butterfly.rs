// SPDX-License-Identifier: Apache-2.0

//! Cross-label bipartite views and exact per-vertex butterfly degrees.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{sorted_intersection_count, LabelId, LabeledGraph, VertexId};
use crate::working::WorkingSubgraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ButterflyError {
    #[error("butterfly degree of vertex {0} overflows 64 bits")]
    Overflow(VertexId),
    #[error("butterfly degree sum {0} is not a multiple of four")]
    NotDivisible(u128),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Bipartite graph between the alive vertices of two labels, keeping only
/// the edges that cross between them.
#[derive(Debug, Clone)]
pub struct BipartiteView {
    left_label: LabelId,
    right_label: LabelId,
    side: Vec<Option<Side>>,
    adj: Vec<Vec<VertexId>>,
    counts: [usize; 2],
    edges: usize,
}

impl BipartiteView {
    /// View over the alive vertices of `ws` carrying `left` or `right`.
    pub fn build(ws: &WorkingSubgraph<'_>, left: LabelId, right: LabelId) -> Self {
        Self::build_filtered(ws.base(), left, right, |v| ws.is_alive(v))
    }

    /// View over the whole graph.
    pub fn from_graph(g: &LabeledGraph, left: LabelId, right: LabelId) -> Self {
        Self::build_filtered(g, left, right, |_| true)
    }

    fn build_filtered(g: &LabeledGraph, left: LabelId, right: LabelId, member: impl Fn(VertexId) -> bool) -> Self {
        assert_ne!(left, right, "a bipartite view needs two distinct labels");
        let n = g.vertex_count();
        let side_of = |v: VertexId| {
            let l = g.label(v);
            if l == left {
                Some(Side::Left)
            } else if l == right {
                Some(Side::Right)
            } else {
                None
            }
        };
        let mut side = vec![None; n];
        let mut adj = vec![Vec::new(); n];
        let mut counts = [0usize; 2];
        let mut edges = 0;
        for v in g.vertices() {
            if !member(v) {
                continue;
            }
            let Some(s) = side_of(v) else { continue };
            side[v as usize] = Some(s);
            counts[s as usize] += 1;
            let other = Some(s.other());
            let list: Vec<VertexId> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| member(u) && side_of(u) == other)
                .collect();
            if s == Side::Left {
                edges += list.len();
            }
            adj[v as usize] = list;
        }
        BipartiteView {
            left_label: left,
            right_label: right,
            side,
            adj,
            counts,
            edges,
        }
    }

    pub fn left_label(&self) -> LabelId {
        self.left_label
    }

    pub fn right_label(&self) -> LabelId {
        self.right_label
    }

    pub fn label_of(&self, side: Side) -> LabelId {
        match side {
            Side::Left => self.left_label,
            Side::Right => self.right_label,
        }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.side[v as usize].is_some()
    }

    #[inline]
    pub fn side(&self, v: VertexId) -> Option<Side> {
        self.side[v as usize]
    }

    /// Cross neighbors of `v`, ascending.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn vertex_count(&self, side: Side) -> usize {
        self.counts[side as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn universe(&self) -> usize {
        self.side.len()
    }

    pub fn vertices(&self, side: Side) -> impl Iterator<Item = VertexId> + '_ {
        self.side
            .iter()
            .enumerate()
            .filter(move |(_, s)| **s == Some(side))
            .map(|(v, _)| v as VertexId)
    }

    pub fn all_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.side
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(v, _)| v as VertexId)
    }

    /// Number of cross neighbors shared by `a` and `b`.
    pub fn common_neighbor_count(&self, a: VertexId, b: VertexId) -> usize {
        sorted_intersection_count(self.neighbors(a), self.neighbors(b))
    }

    /// Drops `v` and its edges. No-op when `v` is not in the view.
    pub fn remove(&mut self, v: VertexId) {
        let Some(s) = self.side[v as usize].take() else {
            return;
        };
        self.counts[s as usize] -= 1;
        let list = std::mem::take(&mut self.adj[v as usize]);
        self.edges -= list.len();
        for u in list {
            let nu = &mut self.adj[u as usize];
            if let Ok(i) = nu.binary_search(&v) {
                nu.remove(i);
            }
        }
    }
}

/// Per-vertex butterfly degrees of a view with per-side maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ButterflyState {
    chi: Vec<u64>,
    max_left: u64,
    max_right: u64,
}

impl ButterflyState {
    /// χ of `v`; zero for vertices outside the view.
    #[inline]
    pub fn chi(&self, v: VertexId) -> u64 {
        self.chi[v as usize]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.chi
    }

    pub fn max_left(&self) -> u64 {
        self.max_left
    }

    pub fn max_right(&self) -> u64 {
        self.max_right
    }

    pub fn max(&self, side: Side) -> u64 {
        match side {
            Side::Left => self.max_left,
            Side::Right => self.max_right,
        }
    }

    /// Smallest-id vertex of `side` attaining the side maximum, if positive.
    pub fn best(&self, view: &BipartiteView, side: Side) -> Option<VertexId> {
        let m = self.max(side);
        if m == 0 {
            return None;
        }
        view.vertices(side).find(|&v| self.chi(v) == m)
    }
}

/// Views with fewer cross edges than this are counted on the calling thread.
const PARALLEL_EDGE_THRESHOLD: usize = 20_000;

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// χ(v) by wedge counting with a dense scratch counter.
fn vertex_chi(
    view: &BipartiteView,
    v: VertexId,
    counter: &mut [u32],
    touched: &mut Vec<VertexId>,
) -> Result<u64, ButterflyError> {
    for &u in view.neighbors(v) {
        for &w in view.neighbors(u) {
            if w == v {
                continue;
            }
            if counter[w as usize] == 0 {
                touched.push(w);
            }
            counter[w as usize] += 1;
        }
    }
    let mut chi: u64 = 0;
    let mut overflow = false;
    for &w in touched.iter() {
        let p = counter[w as usize] as u64;
        counter[w as usize] = 0;
        match chi.checked_add(choose2(p)) {
            Some(c) => chi = c,
            None => overflow = true,
        }
    }
    touched.clear();
    if overflow {
        Err(ButterflyError::Overflow(v))
    } else {
        Ok(chi)
    }
}

/// Exact butterfly degree of a single vertex.
pub fn butterfly_degree(view: &BipartiteView, v: VertexId) -> Result<u64, ButterflyError> {
    if !view.contains(v) {
        return Ok(0);
    }
    let mut counter = vec![0u32; view.universe()];
    let mut touched = Vec::new();
    vertex_chi(view, v, &mut counter, &mut touched)
}

/// Exact χ for every vertex of the view.
pub fn count_butterflies(view: &BipartiteView) -> Result<ButterflyState, ButterflyError> {
    let n = view.universe();
    let members: Vec<VertexId> = view.all_vertices().filter(|&v| !view.neighbors(v).is_empty()).collect();
    let values: Vec<(VertexId, u64)> = if view.edge_count() >= PARALLEL_EDGE_THRESHOLD {
        members
            .par_iter()
            .map_init(
                || (vec![0u32; n], Vec::new()),
                |(counter, touched), &v| vertex_chi(view, v, counter, touched).map(|c| (v, c)),
            )
            .collect::<Result<_, _>>()?
    } else {
        let mut counter = vec![0u32; n];
        let mut touched = Vec::new();
        members
            .iter()
            .map(|&v| vertex_chi(view, v, &mut counter, &mut touched).map(|c| (v, c)))
            .collect::<Result<_, _>>()?
    };
    let mut chi = vec![0u64; n];
    let (mut max_left, mut max_right) = (0, 0);
    for (v, c) in values {
        chi[v as usize] = c;
        match view.side(v) {
            Some(Side::Left) => max_left = max_left.max(c),
            _ => max_right = max_right.max(c),
        }
    }
    Ok(ButterflyState {
        chi,
        max_left,
        max_right,
    })
}

/// Number of distinct butterflies, Σχ / 4.
pub fn total_butterflies(state: &ButterflyState) -> Result<u64, ButterflyError> {
    let sum: u128 = state.chi.iter().map(|&c| c as u128).sum();
    if !sum.is_multiple_of(4) {
        return Err(ButterflyError::NotDivisible(sum));
    }
    Ok((sum / 4) as u64)
}
