// SPDX-License-Identifier: Apache-2.0

//! Leader-pair identification and incremental leader butterfly degrees.

use thiserror::Error;

use crate::butterfly::{count_butterflies, BipartiteView, ButterflyError, ButterflyState, Side};
use crate::graph::VertexId;
use crate::working::WorkingSubgraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeaderError {
    #[error("butterfly degree of leader {leader} would drop below zero while deleting {deleted}")]
    Underflow { leader: VertexId, deleted: VertexId },
    #[error(transparent)]
    Butterfly(#[from] ButterflyError),
}

/// Cached leaders of one bipartite view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeaderPair {
    pub v_l: VertexId,
    pub v_r: VertexId,
    pub chi_l: u64,
    pub chi_r: u64,
    /// Threshold level at which each leader was accepted.
    pub b_p_l: u64,
    pub b_p_r: u64,
}

impl LeaderPair {
    pub fn leader(&self, side: Side) -> VertexId {
        match side {
            Side::Left => self.v_l,
            Side::Right => self.v_r,
        }
    }

    pub fn chi(&self, side: Side) -> u64 {
        match side {
            Side::Left => self.chi_l,
            Side::Right => self.chi_r,
        }
    }

    fn set(&mut self, side: Side, choice: LeaderChoice) {
        match side {
            Side::Left => {
                self.v_l = choice.vertex;
                self.chi_l = choice.chi;
                self.b_p_l = choice.level;
            }
            Side::Right => {
                self.v_r = choice.vertex;
                self.chi_r = choice.chi;
                self.b_p_r = choice.level;
            }
        }
    }

    fn set_chi(&mut self, side: Side, chi: u64) {
        match side {
            Side::Left => self.chi_l = chi,
            Side::Right => self.chi_r = chi,
        }
    }
}

/// Result of a leader search on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeaderChoice {
    pub vertex: VertexId,
    pub chi: u64,
    /// Threshold level that accepted the vertex (its own χ for the query).
    pub level: u64,
}

/// Threshold levels `⌈b_max/2⌉, ⌈b_max/4⌉, …`, ending exactly at `b`.
pub fn threshold_levels(b_max: u64, b: u64) -> Vec<u64> {
    let mut levels = Vec::new();
    let mut t = b_max.div_ceil(2);
    loop {
        if t <= b {
            levels.push(b);
            return levels;
        }
        levels.push(t);
        t = t.div_ceil(2);
    }
}

/// Same-label vertices at hop distance `1..=rho` from `q`, grouped by hop.
fn hop_layers(ws: &WorkingSubgraph<'_>, q: VertexId, rho: u32) -> Vec<Vec<VertexId>> {
    let g = ws.base();
    let label = g.label(q);
    let mut seen = std::collections::HashSet::new();
    seen.insert(q);
    let mut frontier = vec![q];
    let mut layers = Vec::new();
    for _ in 0..rho {
        let mut next = Vec::new();
        for &u in &frontier {
            for w in ws.alive_neighbors(u) {
                if g.label(w) == label && seen.insert(w) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next.clone());
        frontier = next;
    }
    layers
}

/// Picks the leader of `side` near its query vertex `q`.
///
/// Returns `q` when it holds more than half of the side maximum and meets
/// `b`. Otherwise scans threshold levels from high to low and, per level,
/// hop layers `1..=rho` within `q`'s label group; the smallest qualifying id
/// in the first non-empty match wins. Falls back to `q`.
pub fn identify_leader(
    ws: &WorkingSubgraph<'_>,
    state: &ButterflyState,
    side: Side,
    q: VertexId,
    rho: u32,
    b: u64,
) -> LeaderChoice {
    let b_max = state.max(side);
    let chi_q = state.chi(q);
    if chi_q >= b && 2 * chi_q > b_max {
        return LeaderChoice {
            vertex: q,
            chi: chi_q,
            level: chi_q,
        };
    }
    let layers = hop_layers(ws, q, rho);
    for level in threshold_levels(b_max, b) {
        for layer in &layers {
            if let Some(&s) = layer.iter().find(|&&s| state.chi(s) >= level) {
                return LeaderChoice {
                    vertex: s,
                    chi: state.chi(s),
                    level,
                };
            }
        }
    }
    LeaderChoice {
        vertex: q,
        chi: chi_q,
        level: b,
    }
}

/// [`identify_leader`], falling back to the side's best vertex when the
/// local search settles on a vertex below `b`.
fn choose_leader(
    ws: &WorkingSubgraph<'_>,
    view: &BipartiteView,
    state: &ButterflyState,
    side: Side,
    q: VertexId,
    rho: u32,
    b: u64,
) -> LeaderChoice {
    let choice = identify_leader(ws, state, side, q, rho, b);
    if choice.chi >= b {
        return choice;
    }
    match state.best(view, side) {
        Some(best) if state.chi(best) >= b => LeaderChoice {
            vertex: best,
            chi: state.chi(best),
            level: b,
        },
        _ => choice,
    }
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// χ(p) after deleting `v`, given the current view in which `v` is still present.
pub fn update_leader_chi(view: &BipartiteView, p: VertexId, v: VertexId, chi_p: u64) -> Result<u64, LeaderError> {
    let (Some(sp), Some(sv)) = (view.side(p), view.side(v)) else {
        return Ok(chi_p);
    };
    if p == v {
        return Ok(chi_p);
    }
    let lost = if sp == sv {
        choose2(view.common_neighbor_count(v, p) as u64)
    } else if view.neighbors(p).binary_search(&v).is_ok() {
        view.neighbors(v)
            .iter()
            .filter(|&&u| u != p)
            .map(|&u| view.common_neighbor_count(u, p) as u64 - 1)
            .sum()
    } else {
        0
    };
    chi_p
        .checked_sub(lost)
        .ok_or(LeaderError::Underflow { leader: p, deleted: v })
}

/// Outcome of checking a leader pair after deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    Ok,
    Reidentified,
    Infeasible(Side),
}

/// Counters for leader maintenance work.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LeaderWork {
    pub updates: usize,
    pub recounts: usize,
    pub reidentifications: usize,
}

/// Leader pair bound to a bipartite view, maintained under deletions.
#[derive(Debug, Clone)]
pub struct LeaderTracker {
    pub pair: LeaderPair,
    pub queries: (VertexId, VertexId),
    pub rho: u32,
    pub b: u64,
}

impl LeaderTracker {
    /// Identifies both leaders from a fresh count of `view`.
    pub fn new(
        ws: &WorkingSubgraph<'_>,
        view: &BipartiteView,
        state: &ButterflyState,
        queries: (VertexId, VertexId),
        rho: u32,
        b: u64,
    ) -> Self {
        let l = choose_leader(ws, view, state, Side::Left, queries.0, rho, b);
        let r = choose_leader(ws, view, state, Side::Right, queries.1, rho, b);
        LeaderTracker {
            pair: LeaderPair {
                v_l: l.vertex,
                v_r: r.vertex,
                chi_l: l.chi,
                chi_r: r.chi,
                b_p_l: l.level,
                b_p_r: r.level,
            },
            queries,
            rho,
            b,
        }
    }

    /// Applies the deletion of `removed` (any order) to cached leader degrees
    /// and removes the vertices from `view`, smallest id first.
    pub fn absorb_deletions(
        &mut self,
        view: &mut BipartiteView,
        removed: &[VertexId],
        work: &mut LeaderWork,
    ) -> Result<(), LeaderError> {
        let mut batch: Vec<VertexId> = removed.iter().copied().filter(|&v| view.contains(v)).collect();
        batch.sort_unstable();
        for v in batch {
            for side in [Side::Left, Side::Right] {
                let p = self.pair.leader(side);
                if p != v && view.contains(p) {
                    let chi = update_leader_chi(view, p, v, self.pair.chi(side))?;
                    self.pair.set_chi(side, chi);
                    work.updates += 1;
                }
            }
            view.remove(v);
        }
        self.audit(view)
    }

    #[cfg(debug_assertions)]
    fn audit(&self, view: &BipartiteView) -> Result<(), LeaderError> {
        if view.edge_count() <= 2_000 {
            for side in [Side::Left, Side::Right] {
                let p = self.pair.leader(side);
                if view.contains(p) {
                    debug_assert_eq!(crate::butterfly::butterfly_degree(view, p)?, self.pair.chi(side));
                }
            }
        }
        Ok(())
    }

    #[cfg(not(debug_assertions))]
    fn audit(&self, _view: &BipartiteView) -> Result<(), LeaderError> {
        Ok(())
    }

    /// Confirms both leaders still qualify, re-identifying failed sides
    /// from one fresh count. A side with no vertex reaching `b` is infeasible.
    pub fn revalidate(
        &mut self,
        ws: &WorkingSubgraph<'_>,
        view: &BipartiteView,
        work: &mut LeaderWork,
    ) -> Result<PairStatus, LeaderError> {
        let failed: Vec<Side> = [Side::Left, Side::Right]
            .into_iter()
            .filter(|&s| {
                let p = self.pair.leader(s);
                !view.contains(p) || self.pair.chi(s) < self.b
            })
            .collect();
        if failed.is_empty() {
            return Ok(PairStatus::Ok);
        }
        let state = count_butterflies(view)?;
        work.recounts += 1;
        for side in [Side::Left, Side::Right] {
            let p = self.pair.leader(side);
            if view.contains(p) {
                self.pair.set_chi(side, state.chi(p));
            }
        }
        for side in failed {
            if state.max(side) < self.b {
                return Ok(PairStatus::Infeasible(side));
            }
            let q = match side {
                Side::Left => self.queries.0,
                Side::Right => self.queries.1,
            };
            let choice = choose_leader(ws, view, &state, side, q, self.rho, self.b);
            self.pair.set(side, choice);
            work.reidentifications += 1;
        }
        Ok(PairStatus::Reidentified)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butterfly::butterfly_degree;
    use crate::graph::LabeledGraph;
    use proptest::prelude::*;

    #[test]
    fn levels_end_at_b() {
        assert_eq!(threshold_levels(6, 1), vec![3, 2, 1]);
        assert_eq!(threshold_levels(3, 1), vec![2, 1]);
        assert_eq!(threshold_levels(1, 1), vec![1]);
        assert_eq!(threshold_levels(100, 10), vec![50, 25, 13, 10]);
        assert_eq!(threshold_levels(0, 2), vec![2]);
    }

    /// K_{3,3} between {0,1,2} and {3,4,5}, plus a same-label path 0-1-2.
    fn k33() -> LabeledGraph {
        let mut edges = vec![(0, 1), (1, 2)];
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        LabeledGraph::from_edges(&[0, 0, 0, 1, 1, 1], vec!["L".into(), "R".into()], &edges).unwrap()
    }

    #[test]
    fn query_with_top_degree_leads() {
        let g = k33();
        let ws = WorkingSubgraph::full(&g);
        let view = BipartiteView::build(&ws, 0, 1);
        let st = count_butterflies(&view).unwrap();
        assert_eq!(st.chi(0), 6);
        let c = identify_leader(&ws, &st, Side::Left, 0, 3, 1);
        assert_eq!(c.vertex, 0);
    }

    #[test]
    fn deleting_everything_is_infeasible() {
        let g = k33();
        let ws = WorkingSubgraph::full(&g);
        let mut view = BipartiteView::build(&ws, 0, 1);
        let st = count_butterflies(&view).unwrap();
        let mut t = LeaderTracker::new(&ws, &view, &st, (0, 3), 3, 1);
        let mut work = LeaderWork::default();
        t.absorb_deletions(&mut view, &[4, 5], &mut work).unwrap();
        assert_eq!(t.pair.chi_l, 0);
        assert_eq!(
            t.revalidate(&ws, &view, &mut work).unwrap(),
            PairStatus::Infeasible(Side::Left)
        );
    }

    #[test]
    fn untouched_pair_needs_no_recount() {
        let g = k33();
        let ws = WorkingSubgraph::full(&g);
        let view = BipartiteView::build(&ws, 0, 1);
        let st = count_butterflies(&view).unwrap();
        let mut t = LeaderTracker::new(&ws, &view, &st, (0, 3), 3, 1);
        let mut work = LeaderWork::default();
        assert_eq!(t.revalidate(&ws, &view, &mut work).unwrap(), PairStatus::Ok);
        assert_eq!(work.recounts, 0);
    }

    proptest! {
        #[test]
        fn updates_match_recount(
            raw in prop::collection::vec((0u32..16, 0u32..16), 10..80),
            order in prop::collection::vec(0u32..16, 1..10),
            p in 0u32..16,
        ) {
            let labels: Vec<u32> = (0..16).map(|v| (v >= 8) as u32).collect();
            let edges: Vec<_> = raw.into_iter().filter(|(a, b)| a != b).collect();
            let g = LabeledGraph::from_edges(&labels, vec!["L".into(), "R".into()], &edges).unwrap();
            let mut view = BipartiteView::from_graph(&g, 0, 1);
            let mut chi = butterfly_degree(&view, p).unwrap();
            for v in order {
                if v == p || !view.contains(v) {
                    continue;
                }
                chi = update_leader_chi(&view, p, v, chi).unwrap();
                view.remove(v);
                prop_assert_eq!(chi, butterfly_degree(&view, p).unwrap());
            }
        }
    }
}
