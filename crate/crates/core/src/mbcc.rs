// SPDX-License-Identifier: Apache-2.0

//! Multi-label community search: one core group per query label, joined
//! through pairwise cross-group interactions.

use crate::graph::{LabeledGraph, VertexId};
use crate::kcore::core_decompose;
use crate::local::{expand_region, largest_feasible_k};
use crate::online::{find_g0_groups, BccSearch, GroupSpec, SearchConfig};
use crate::query::{
    resolve_k, validate_vertices, Algorithm, CoreParam, DeletionMode, Leaders, QueryError, SearchStats, Status,
    StopReason,
};
use crate::working::WorkingSubgraph;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// Graph over label groups; an edge means the two groups currently have a
/// leader pair in their bipartite view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInteractionGraph {
    m: usize,
    edges: Vec<(usize, usize)>,
}

impl GroupInteractionGraph {
    pub fn new(m: usize) -> Self {
        GroupInteractionGraph { m, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.m && b < self.m, "group index out of range");
        self.edges.push((a, b));
    }

    pub fn group_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// True when every group is reachable from every other one.
pub fn check_group_connectivity(gig: &GroupInteractionGraph) -> bool {
    let mut uf = UnionFind::new(gig.m);
    for &(a, b) in &gig.edges {
        uf.union(a, b);
    }
    uf.set_count() <= 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct MbccQuery {
    pub queries: Vec<VertexId>,
    pub k: Vec<CoreParam>,
    pub b: u64,
    pub algorithm: Algorithm,
    pub eta: usize,
    pub rho: u32,
    pub deletion: DeletionMode,
}

impl MbccQuery {
    pub fn new(queries: Vec<VertexId>) -> Self {
        let m = queries.len();
        MbccQuery {
            queries,
            k: vec![CoreParam::Auto; m],
            b: 1,
            algorithm: Algorithm::default(),
            eta: crate::query::BccQuery::DEFAULT_ETA,
            rho: crate::query::BccQuery::DEFAULT_RHO,
            deletion: DeletionMode::Bulk,
        }
    }

    pub fn validate(&self, g: &LabeledGraph) -> Result<(), QueryError> {
        if self.queries.len() < 2 {
            return Err(QueryError::InvalidParameter("need at least two query vertices".into()));
        }
        if self.k.len() != self.queries.len() {
            return Err(QueryError::InvalidParameter(format!(
                "{} core parameters for {} query vertices",
                self.k.len(),
                self.queries.len()
            )));
        }
        if self.b == 0 {
            return Err(QueryError::ZeroThreshold);
        }
        validate_vertices(g, &self.queries)
    }
}

/// Leaders of one interacting group pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairLeaders {
    pub groups: (usize, usize),
    pub leaders: Leaders,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MbccResult {
    pub status: Status,
    pub algorithm: Algorithm,
    pub vertices: Vec<VertexId>,
    /// Members of each group, in query order.
    pub groups: Vec<Vec<VertexId>>,
    /// Leader pairs of interacting groups.
    pub leaders: Vec<PairLeaders>,
    pub query_distance: u32,
    pub diameter: u32,
    pub iterations: usize,
    pub ks: Vec<u32>,
    pub ties: usize,
    pub stop_reason: StopReason,
    pub stats: SearchStats,
    pub hint: Option<String>,
}

impl MbccResult {
    fn infeasible(algorithm: Algorithm, reason: String, ks: Vec<u32>, stats: SearchStats) -> Self {
        MbccResult {
            status: Status::Infeasible(reason),
            algorithm,
            vertices: Vec::new(),
            groups: vec![Vec::new(); ks.len()],
            leaders: Vec::new(),
            query_distance: 0,
            diameter: 0,
            iterations: 0,
            ks,
            ties: 0,
            stop_reason: StopReason::Infeasible,
            stats,
            hint: None,
        }
    }
}

/// Candidate region for the local mode: BFS paths from the first query to
/// every other one, grown breadth-first up to `eta` vertices among vertices
/// whose label coreness reaches the smallest coreness seen on the paths.
fn local_region(g: &LabeledGraph, q: &MbccQuery) -> Option<Vec<VertexId>> {
    let labels: Vec<_> = q.queries.iter().map(|&v| g.label(v)).collect();
    let in_labels = |v: VertexId| labels.contains(&g.label(v));
    let mut seeds = vec![q.queries[0]];
    for &t in &q.queries[1..] {
        let path = crate::distance::shortest_path_filtered(g, q.queries[0], t, in_labels)?;
        seeds.extend(path);
    }
    seeds.sort_unstable();
    seeds.dedup();
    let mut delta = vec![0u32; g.vertex_count()];
    for &l in &labels {
        let idx = core_decompose(g, Some(l));
        for v in g.vertices_with_label(l) {
            delta[v as usize] = idx.get(v).unwrap_or(0);
        }
    }
    let threshold: Vec<u32> = labels
        .iter()
        .map(|&l| {
            seeds
                .iter()
                .filter(|&&v| g.label(v) == l)
                .map(|&v| delta[v as usize])
                .min()
                .unwrap_or(0)
        })
        .collect();
    let admit = |v: VertexId| {
        labels
            .iter()
            .position(|&l| l == g.label(v))
            .is_some_and(|i| delta[v as usize] >= threshold[i])
    };
    Some(expand_region(g, &seeds, admit, q.eta))
}

/// Multi-label community search.
pub fn mbcc_search(g: &LabeledGraph, q: &MbccQuery) -> Result<MbccResult, QueryError> {
    q.validate(g)?;
    let m = q.queries.len();
    let local = q.algorithm == Algorithm::L2p;
    let base = if local {
        match local_region(g, q) {
            Some(region) => WorkingSubgraph::from_vertices(g, &region),
            None => {
                let ks = q.queries.iter().zip(&q.k).map(|(&v, &k)| resolve_k(g, v, k)).collect();
                let mut r = MbccResult::infeasible(q.algorithm, "disconnected".into(), ks, SearchStats::default());
                r.hint = Some("query vertices are not connected".into());
                return Ok(r);
            }
        }
    } else {
        WorkingSubgraph::full(g)
    };
    let ks: Vec<u32> = q
        .queries
        .iter()
        .zip(&q.k)
        .map(|(&v, &k)| match (k, local) {
            (CoreParam::Auto, true) => largest_feasible_k(&base, v),
            _ => resolve_k(g, v, k),
        })
        .collect();
    let single = m == 2;
    let groups: Vec<GroupSpec> = q
        .queries
        .iter()
        .zip(&ks)
        .enumerate()
        .map(|(i, (&v, &k))| GroupSpec {
            label: g.label(v),
            query: v,
            k,
            name: if single {
                ["left", "right"][i].to_string()
            } else {
                g.label_name(g.label(v)).to_string()
            },
        })
        .collect();
    let cfg = SearchConfig::for_algorithm(q.algorithm, q.b, q.rho, q.deletion);
    let mut stats = SearchStats::default();
    let g0 = match find_g0_groups(&base, &groups, &cfg, &mut stats)? {
        Ok(g0) => g0,
        Err(inf) => {
            let mut r = MbccResult::infeasible(q.algorithm, inf.reason, ks, stats);
            if local {
                r.hint = Some("retry with a larger --eta or --algorithm lp".into());
            }
            return Ok(r);
        }
    };
    let pair_groups: Vec<(usize, usize)> = g0.pairs.iter().map(|p| p.groups).collect();
    let outcome = BccSearch::new(g0, cfg, stats)?.run()?;
    let vertices = outcome.best.vertices;
    let diameter = crate::distance::diameter(&WorkingSubgraph::from_vertices(g, &vertices))
        .map_err(|e| QueryError::Internal(e.to_string()))?;
    let groups_out = groups
        .iter()
        .map(|s| vertices.iter().copied().filter(|&v| g.label(v) == s.label).collect())
        .collect();
    let leaders = pair_groups
        .iter()
        .zip(&outcome.best.leaders)
        .filter_map(|(&groups, p)| {
            p.map(|p| PairLeaders {
                groups,
                leaders: Leaders {
                    v_l: p.v_l,
                    v_r: p.v_r,
                    chi_l: p.chi_l,
                    chi_r: p.chi_r,
                },
            })
        })
        .collect();
    Ok(MbccResult {
        status: Status::Found,
        algorithm: q.algorithm,
        vertices,
        groups: groups_out,
        leaders,
        query_distance: outcome.best.query_distance,
        diameter,
        iterations: outcome.iterations,
        ks,
        ties: outcome.ties,
        stop_reason: outcome.stop,
        stats: outcome.stats,
        hint: None,
    })
}
