// SPDX-License-Identifier: Apache-2.0

//! Initial candidate construction and the greedy shrinking search.
//!
//! [`BccSearch`] works on any number of labeled groups. Two groups give the
//! two-label community search; more groups give the multi-label variant in
//! [`crate::mbcc`].

use log::{debug, trace};

use crate::butterfly::{count_butterflies, BipartiteView, ButterflyState, Side};
use crate::distance::{bfs_distances, query_distance, DistanceError, DistanceMap, QueryDistance};
use crate::graph::{LabelId, LabeledGraph, VertexId};
use crate::incremental::IncrementalDistance;
use crate::kcore::{extract_kcore, maintain_kcore, prune_to_component};
use crate::leader::{LeaderError, LeaderPair, LeaderTracker, LeaderWork, PairStatus};
use crate::mbcc::{check_group_connectivity, GroupInteractionGraph};
use crate::query::{
    Algorithm, BccQuery, BccResult, DeletionMode, Leaders, QueryError, SearchStats, Status, StopReason,
};
use crate::working::WorkingSubgraph;

/// One labeled group of a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub label: LabelId,
    pub query: VertexId,
    pub k: u32,
    /// Name used in infeasibility reasons.
    pub name: String,
}

/// How the cross-group condition is maintained after deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Maintenance {
    /// Full butterfly recount per iteration.
    Recount,
    /// Cached leader pairs with incremental degree updates.
    Leaders { rho: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub b: u64,
    pub maintenance: Maintenance,
    pub deletion: DeletionMode,
}

impl SearchConfig {
    pub fn for_algorithm(algorithm: Algorithm, b: u64, rho: u32, deletion: DeletionMode) -> Self {
        let maintenance = match algorithm {
            Algorithm::Online => Maintenance::Recount,
            Algorithm::Lp | Algorithm::L2p => Maintenance::Leaders { rho },
        };
        SearchConfig {
            b,
            maintenance,
            deletion,
        }
    }
}

/// Why no initial candidate exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infeasible {
    pub reason: String,
}

/// Bipartite view between two groups and its maintenance state.
#[derive(Debug, Clone)]
pub struct PairSlot {
    pub groups: (usize, usize),
    pub view: BipartiteView,
    /// Latest full count (recount mode, and at start).
    pub state: Option<ButterflyState>,
    pub tracker: Option<LeaderTracker>,
    pub active: bool,
}

impl PairSlot {
    /// Current leader pair: cached leaders, or the best vertex per side.
    pub fn leaders(&self) -> Option<LeaderPair> {
        if !self.active {
            return None;
        }
        if let Some(t) = &self.tracker {
            return Some(t.pair);
        }
        let st = self.state.as_ref()?;
        let l = st.best(&self.view, Side::Left)?;
        let r = st.best(&self.view, Side::Right)?;
        Some(LeaderPair {
            v_l: l,
            v_r: r,
            chi_l: st.chi(l),
            chi_r: st.chi(r),
            b_p_l: st.chi(l),
            b_p_r: st.chi(r),
        })
    }
}

/// Initial candidate: the group cores and their pairwise views.
#[derive(Debug, Clone)]
pub struct G0<'g> {
    pub ws: WorkingSubgraph<'g>,
    pub groups: Vec<GroupSpec>,
    pub pairs: Vec<PairSlot>,
}

impl G0<'_> {
    pub fn group_vertices(&self, i: usize) -> Vec<VertexId> {
        self.ws.alive_with_label(self.groups[i].label).collect()
    }
}

fn group_interaction(m: usize, pairs: &[PairSlot]) -> GroupInteractionGraph {
    let mut gig = GroupInteractionGraph::new(m);
    for p in pairs.iter().filter(|p| p.active) {
        gig.add_edge(p.groups.0, p.groups.1);
    }
    gig
}

/// Builds the initial candidate inside the alive part of `base`.
///
/// Each group becomes the connected `k`-core of its label containing its
/// query vertex. With two groups the pair view is always kept; with more,
/// only pairs with at least one cross edge get a view.
pub fn find_g0_groups<'g>(
    base: &WorkingSubgraph<'g>,
    groups: &[GroupSpec],
    cfg: &SearchConfig,
    stats: &mut SearchStats,
) -> Result<Result<G0<'g>, Infeasible>, QueryError> {
    let g = base.base();
    let mut members = Vec::new();
    for spec in groups {
        let core =
            extract_kcore(base, spec.label, spec.k, spec.query).map_err(|e| QueryError::Internal(e.to_string()))?;
        if core.is_empty() {
            return Ok(Err(Infeasible {
                reason: format!("core-infeasible:{}", spec.name),
            }));
        }
        members.extend(core);
    }
    let ws = WorkingSubgraph::from_vertices(g, &members);
    let m = groups.len();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let view = BipartiteView::build(&ws, groups[i].label, groups[j].label);
            if m > 2 && view.edge_count() == 0 {
                continue;
            }
            let state = count_butterflies(&view)?;
            stats.butterfly_recounts += 1;
            let active = state.max_left() >= cfg.b && state.max_right() >= cfg.b;
            if m == 2 && !active {
                let side = if state.max_left() < cfg.b { 0 } else { 1 };
                return Ok(Err(Infeasible {
                    reason: format!("butterfly-infeasible:{}", groups[side].name),
                }));
            }
            let tracker = match cfg.maintenance {
                Maintenance::Leaders { rho } if active => Some(LeaderTracker::new(
                    &ws,
                    &view,
                    &state,
                    (groups[i].query, groups[j].query),
                    rho,
                    cfg.b,
                )),
                _ => None,
            };
            pairs.push(PairSlot {
                groups: (i, j),
                view,
                state: Some(state),
                tracker,
                active,
            });
        }
    }
    if !check_group_connectivity(&group_interaction(m, &pairs)) {
        return Ok(Err(Infeasible {
            reason: "interaction-infeasible".to_string(),
        }));
    }
    Ok(Ok(G0 {
        ws,
        groups: groups.to_vec(),
        pairs,
    }))
}

/// Two-group initial candidate over the whole graph.
pub fn find_g0<'g>(
    g: &'g LabeledGraph,
    q_l: VertexId,
    q_r: VertexId,
    k1: u32,
    k2: u32,
    b: u64,
) -> Result<Result<G0<'g>, Infeasible>, QueryError> {
    find_g0_in(&WorkingSubgraph::full(g), q_l, q_r, k1, k2, b)
}

/// Two-group initial candidate within the alive part of `base`.
pub fn find_g0_in<'g>(
    base: &WorkingSubgraph<'g>,
    q_l: VertexId,
    q_r: VertexId,
    k1: u32,
    k2: u32,
    b: u64,
) -> Result<Result<G0<'g>, Infeasible>, QueryError> {
    let cfg = SearchConfig {
        b,
        maintenance: Maintenance::Recount,
        deletion: DeletionMode::Bulk,
    };
    find_g0_groups(
        base,
        &two_groups(base.base(), q_l, q_r, k1, k2),
        &cfg,
        &mut SearchStats::default(),
    )
}

pub(crate) fn two_groups(g: &LabeledGraph, q_l: VertexId, q_r: VertexId, k1: u32, k2: u32) -> Vec<GroupSpec> {
    vec![
        GroupSpec {
            label: g.label(q_l),
            query: q_l,
            k: k1,
            name: "left".into(),
        },
        GroupSpec {
            label: g.label(q_r),
            query: q_r,
            k: k2,
            name: "right".into(),
        },
    ]
}

enum Distances {
    Full(Vec<DistanceMap>),
    Incremental(Vec<IncrementalDistance>),
}

/// Outcome of one deletion step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// The graph is still a valid community; `removed` lists every vertex
    /// deleted by the step, cascades included.
    Continued {
        removed: Vec<VertexId>,
    },
    Stopped(StopReason),
}

/// Best feasible graph seen by the loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub vertices: Vec<VertexId>,
    pub query_distance: u32,
    pub leaders: Vec<Option<LeaderPair>>,
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub best: Snapshot,
    pub iterations: usize,
    pub ties: usize,
    pub stop: StopReason,
    pub stats: SearchStats,
}

fn leader_error(e: LeaderError) -> QueryError {
    match e {
        LeaderError::Butterfly(b) => QueryError::Butterfly(b),
        other => QueryError::Internal(other.to_string()),
    }
}

/// Greedy shrinking search over a feasible initial candidate.
pub struct BccSearch<'g> {
    ws: WorkingSubgraph<'g>,
    groups: Vec<GroupSpec>,
    pairs: Vec<PairSlot>,
    cfg: SearchConfig,
    distances: Distances,
    stats: SearchStats,
}

impl<'g> BccSearch<'g> {
    pub fn new(g0: G0<'g>, cfg: SearchConfig, mut stats: SearchStats) -> Result<Self, QueryError> {
        let queries: Vec<VertexId> = g0.groups.iter().map(|s| s.query).collect();
        let err = |e: DistanceError| QueryError::Internal(e.to_string());
        let distances = match cfg.maintenance {
            Maintenance::Recount => Distances::Full(
                queries
                    .iter()
                    .map(|&q| bfs_distances(&g0.ws, q))
                    .collect::<Result<_, _>>()
                    .map_err(err)?,
            ),
            Maintenance::Leaders { .. } => Distances::Incremental(
                queries
                    .iter()
                    .map(|&q| IncrementalDistance::new(&g0.ws, q))
                    .collect::<Result<_, _>>()
                    .map_err(err)?,
            ),
        };
        stats.full_bfs += queries.len();
        Ok(BccSearch {
            ws: g0.ws,
            groups: g0.groups,
            pairs: g0.pairs,
            cfg,
            distances,
            stats,
        })
    }

    pub fn working(&self) -> &WorkingSubgraph<'g> {
        &self.ws
    }

    pub fn pairs(&self) -> &[PairSlot] {
        &self.pairs
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    fn is_query(&self, v: VertexId) -> bool {
        self.groups.iter().any(|s| s.query == v)
    }

    /// Maximum query distance and the vertices attaining it (ascending).
    pub fn query_distance(&self) -> Result<QueryDistance, DistanceError> {
        match &self.distances {
            Distances::Full(maps) => query_distance(&self.ws, maps),
            Distances::Incremental(incs) => {
                if self.ws.alive_count() == 0 {
                    return Err(DistanceError::Empty);
                }
                for inc in incs {
                    if inc.reachable() != self.ws.alive_count() {
                        let lost = self
                            .ws
                            .alive_vertices()
                            .find(|&v| inc.distance(v) == crate::distance::UNREACHABLE)
                            .unwrap_or(inc.query());
                        return Err(DistanceError::Disconnected(lost));
                    }
                }
                let max = incs.iter().map(|i| i.eccentricity(&self.ws)).max().unwrap_or(0);
                let mut argmax: Vec<VertexId> = incs.iter().flat_map(|i| i.layer(&self.ws, max)).collect();
                argmax.sort_unstable();
                argmax.dedup();
                Ok(QueryDistance { max, argmax })
            }
        }
    }

    /// Deletes the farthest non-query vertices (all of them in bulk mode,
    /// the smallest one otherwise) and restores validity.
    pub fn bulk_delete_step(&mut self) -> Result<StepOutcome, QueryError> {
        let qd = match self.query_distance() {
            Ok(qd) => qd,
            Err(_) => return Ok(StepOutcome::Stopped(StopReason::Disconnected)),
        };
        self.delete_farthest(&qd)
    }

    fn delete_farthest(&mut self, qd: &QueryDistance) -> Result<StepOutcome, QueryError> {
        let mut batch: Vec<VertexId> = qd.argmax.iter().copied().filter(|&v| !self.is_query(v)).collect();
        if self.cfg.deletion == DeletionMode::Single {
            batch.truncate(1);
        }
        if batch.is_empty() {
            return Ok(StepOutcome::Stopped(StopReason::NoCandidates));
        }
        self.delete_batch(&batch)
    }

    /// Deletes `batch`, then maintains cores, butterflies and distances.
    pub fn delete_batch(&mut self, batch: &[VertexId]) -> Result<StepOutcome, QueryError> {
        let removed = self.ws.delete_all(batch);
        let outcome = self.maintain_bcc(removed)?;
        if let StepOutcome::Continued { removed } = &outcome {
            if !self.update_distances(removed) {
                return Ok(StepOutcome::Stopped(StopReason::Disconnected));
            }
        }
        Ok(outcome)
    }

    /// Restores the group cores and the cross-group condition after
    /// `removed` were deleted.
    pub fn maintain_bcc(&mut self, mut removed: Vec<VertexId>) -> Result<StepOutcome, QueryError> {
        let g = self.ws.base();
        for spec in &self.groups {
            let own: Vec<VertexId> = removed.iter().copied().filter(|&v| g.label(v) == spec.label).collect();
            let cascade = maintain_kcore(&mut self.ws, spec.label, spec.k, &own);
            removed.extend_from_slice(&cascade[own.len()..]);
        }
        if self.groups.iter().any(|s| !self.ws.is_alive(s.query)) {
            return Ok(StepOutcome::Stopped(StopReason::QueryRemoved));
        }
        for spec in &self.groups {
            removed.extend(prune_to_component(&mut self.ws, spec.label, spec.query));
        }
        trace!("step removed {} vertices", removed.len());

        for pair in &mut self.pairs {
            if !pair.active {
                for &v in &removed {
                    pair.view.remove(v);
                }
                continue;
            }
            match (&mut pair.tracker, self.cfg.maintenance) {
                (Some(tracker), Maintenance::Leaders { .. }) => {
                    let mut work = LeaderWork::default();
                    tracker
                        .absorb_deletions(&mut pair.view, &removed, &mut work)
                        .map_err(leader_error)?;
                    let status = tracker
                        .revalidate(&self.ws, &pair.view, &mut work)
                        .map_err(leader_error)?;
                    self.stats.leader_updates += work.updates;
                    self.stats.butterfly_recounts += work.recounts;
                    self.stats.reidentifications += work.reidentifications;
                    if let PairStatus::Infeasible(side) = status {
                        debug!("pair {:?} lost its {} leader", pair.groups, side.name());
                        pair.active = false;
                    }
                }
                _ => {
                    for &v in &removed {
                        pair.view.remove(v);
                    }
                    let state = count_butterflies(&pair.view)?;
                    self.stats.butterfly_recounts += 1;
                    pair.active = state.max_left() >= self.cfg.b && state.max_right() >= self.cfg.b;
                    pair.state = Some(state);
                }
            }
        }
        if !check_group_connectivity(&group_interaction(self.groups.len(), &self.pairs)) {
            return Ok(StepOutcome::Stopped(StopReason::InteractionLost));
        }
        Ok(StepOutcome::Continued { removed })
    }

    /// Returns false when some query vertex can no longer reach every
    /// alive vertex.
    fn update_distances(&mut self, removed: &[VertexId]) -> bool {
        match &mut self.distances {
            Distances::Full(maps) => {
                for m in maps.iter_mut() {
                    let q = match m.source() {
                        crate::distance::DistanceSource::Vertex(q) => *q,
                        crate::distance::DistanceSource::Set(_) => unreachable!("single-source maps only"),
                    };
                    match bfs_distances(&self.ws, q) {
                        Ok(fresh) => *m = fresh,
                        Err(_) => return false,
                    }
                    self.stats.full_bfs += 1;
                }
                true
            }
            Distances::Incremental(incs) => {
                for inc in incs.iter_mut() {
                    let up = inc.fast_update_distances(&self.ws, removed);
                    self.stats.distance_recomputed += up.recomputed.len();
                }
                true
            }
        }
    }

    fn snapshot(&self, query_distance: u32, iteration: usize) -> Snapshot {
        Snapshot {
            vertices: self.ws.snapshot(),
            query_distance,
            leaders: self.pairs.iter().map(PairSlot::leaders).collect(),
            iteration,
        }
    }

    #[cfg(debug_assertions)]
    fn debug_validate(&self) {
        use crate::validate::{check_community, GroupRequirement};
        if self.ws.alive_count() > 64 {
            return;
        }
        let reqs: Vec<GroupRequirement> = self
            .groups
            .iter()
            .map(|s| GroupRequirement { query: s.query, k: s.k })
            .collect();
        let verdict = check_community(self.ws.base(), &self.ws.snapshot(), &reqs, self.cfg.b);
        debug_assert_eq!(verdict, Ok(()), "intermediate graph is not a valid community");
    }

    #[cfg(not(debug_assertions))]
    fn debug_validate(&self) {}

    /// Shrinks until no further deletion keeps the graph valid, returning
    /// the feasible graph with the smallest query distance (latest on ties).
    pub fn run(mut self) -> Result<SearchOutcome, QueryError> {
        let mut best: Option<Snapshot> = None;
        let mut ties = 0;
        let mut iterations = 0;
        let stop = loop {
            let qd = match self.query_distance() {
                Ok(qd) => qd,
                Err(_) => break StopReason::Disconnected,
            };
            iterations += 1;
            self.debug_validate();
            let prev = best.as_ref().map(|b| b.query_distance);
            if prev.is_none_or(|p| qd.max <= p) {
                if prev == Some(qd.max) {
                    ties += 1;
                } else {
                    ties = 0;
                }
                best = Some(self.snapshot(qd.max, iterations));
            }
            trace!(
                "iteration {iterations}: query distance {}, {} alive",
                qd.max,
                self.ws.alive_count()
            );
            match self.delete_farthest(&qd)? {
                StepOutcome::Continued { .. } => {}
                StepOutcome::Stopped(reason) => break reason,
            }
        };
        let best = best.ok_or_else(|| QueryError::Internal("initial candidate is disconnected".into()))?;
        Ok(SearchOutcome {
            best,
            iterations,
            ties,
            stop,
            stats: self.stats,
        })
    }
}

/// Runs the shrinking search for two groups and assembles a result.
pub(crate) fn run_two_group(
    g0: G0<'_>,
    q: &BccQuery,
    k1: u32,
    k2: u32,
    algorithm: Algorithm,
    stats: SearchStats,
) -> Result<BccResult, QueryError> {
    let g = g0.ws.base();
    let cfg = SearchConfig::for_algorithm(algorithm, q.b, q.rho, q.deletion);
    let outcome = BccSearch::new(g0, cfg, stats)?.run()?;
    let vertices = outcome.best.vertices;
    let diameter = crate::distance::diameter(&WorkingSubgraph::from_vertices(g, &vertices))
        .map_err(|e| QueryError::Internal(e.to_string()))?;
    let (ll, lr) = (g.label(q.q_l), g.label(q.q_r));
    let leaders = outcome.best.leaders.first().copied().flatten().map(|p| Leaders {
        v_l: p.v_l,
        v_r: p.v_r,
        chi_l: p.chi_l,
        chi_r: p.chi_r,
    });
    Ok(BccResult {
        status: Status::Found,
        algorithm,
        left: vertices.iter().copied().filter(|&v| g.label(v) == ll).collect(),
        right: vertices.iter().copied().filter(|&v| g.label(v) == lr).collect(),
        vertices,
        leaders,
        query_distance: outcome.best.query_distance,
        diameter,
        iterations: outcome.iterations,
        k1,
        k2,
        ties: outcome.ties,
        stop_reason: outcome.stop,
        stats: outcome.stats,
        hint: None,
    })
}

/// Two-label community search over the whole graph.
///
/// Online and leader-pair modes run here; the local mode builds its index
/// on the fly (use [`crate::local::l2p_search`] to reuse a prebuilt one).
pub fn online_search(g: &LabeledGraph, q: &BccQuery) -> Result<BccResult, QueryError> {
    q.validate(g)?;
    if q.algorithm == Algorithm::L2p {
        let idx = crate::index::BcIndex::build(g, g.label(q.q_l), g.label(q.q_r))
            .map_err(|e| QueryError::Internal(e.to_string()))?;
        return crate::local::l2p_search(g, &idx, q);
    }
    let k1 = crate::query::resolve_k(g, q.q_l, q.k1);
    let k2 = crate::query::resolve_k(g, q.q_r, q.k2);
    let mut stats = SearchStats::default();
    let cfg = SearchConfig::for_algorithm(q.algorithm, q.b, q.rho, q.deletion);
    let base = WorkingSubgraph::full(g);
    match find_g0_groups(&base, &two_groups(g, q.q_l, q.q_r, k1, k2), &cfg, &mut stats)? {
        Err(inf) => {
            let mut r = BccResult::infeasible(q.algorithm, inf.reason, k1, k2);
            r.stats = stats;
            Ok(r)
        }
        Ok(g0) => run_two_group(g0, q, k1, k2, q.algorithm, stats),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::check_bcc;

    /// Two K4s joined by a K_{2,2} between {0,1} and {4,5}, plus a tail
    /// 3-8 (label A) and 7-9 (label B) hanging off each side.
    fn sample() -> LabeledGraph {
        let mut edges = Vec::new();
        for side in [[0, 1, 2, 3], [4, 5, 6, 7]] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((side[i], side[j]));
                }
            }
        }
        edges.extend([(0, 4), (0, 5), (1, 4), (1, 5), (3, 8), (7, 9)]);
        LabeledGraph::from_edges(&[0, 0, 0, 0, 1, 1, 1, 1, 0, 1], vec!["A".into(), "B".into()], &edges).unwrap()
    }

    #[test]
    fn g0_respects_cores() {
        let g = sample();
        let g0 = find_g0(&g, 0, 4, 3, 3, 1).unwrap().unwrap();
        assert_eq!(g0.group_vertices(0), vec![0, 1, 2, 3]);
        assert_eq!(g0.group_vertices(1), vec![4, 5, 6, 7]);
        let g0 = find_g0(&g, 0, 4, 1, 1, 1).unwrap().unwrap();
        assert_eq!(g0.ws.alive_count(), 10);
    }

    #[test]
    fn g0_infeasibility_reasons() {
        let g = sample();
        assert_eq!(
            find_g0(&g, 0, 4, 4, 3, 1).unwrap().unwrap_err().reason,
            "core-infeasible:left"
        );
        assert_eq!(
            find_g0(&g, 0, 4, 3, 4, 1).unwrap().unwrap_err().reason,
            "core-infeasible:right"
        );
        assert_eq!(
            find_g0(&g, 0, 4, 3, 3, 2).unwrap().unwrap_err().reason,
            "butterfly-infeasible:left"
        );
    }

    #[test]
    fn modes_find_valid_communities() {
        let g = sample();
        for algorithm in [Algorithm::Online, Algorithm::Lp, Algorithm::L2p] {
            let q = BccQuery::new(2, 6).with_k(1, 1).with_algorithm(algorithm);
            let r = online_search(&g, &q).unwrap();
            assert!(r.status.is_found(), "{algorithm}: {:?}", r.status);
            assert_eq!(check_bcc(&g, &r.vertices, (2, 1), (6, 1), 1), Ok(()));
            assert!(!r.vertices.contains(&8) && !r.vertices.contains(&9), "{algorithm}");
        }
    }

    #[test]
    fn minimal_graph_is_kept_after_one_iteration() {
        // a single butterfly with same-label edges: every vertex at distance <= 1
        let g = LabeledGraph::from_edges(
            &[0, 0, 1, 1],
            vec!["A".into(), "B".into()],
            &[(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .unwrap();
        let r = online_search(&g, &BccQuery::new(0, 2).with_k(1, 1).with_algorithm(Algorithm::Online)).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3]);
        assert_eq!(r.query_distance, 1);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.leaders.unwrap().chi_l, 1);
    }

    #[test]
    fn auto_k_uses_query_coreness() {
        let g = sample();
        let r = online_search(&g, &BccQuery::new(0, 4)).unwrap();
        assert_eq!((r.k1, r.k2), (3, 3));
        assert_eq!(r.vertices, (0..8).collect::<Vec<_>>());
    }
}
