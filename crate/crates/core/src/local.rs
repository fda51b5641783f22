// SPDX-License-Identifier: Apache-2.0

//! Index-guided local search: a coreness- and butterfly-aware path between
//! the query vertices, bounded expansion around it, then shrinking inside
//! the expanded region.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{LabelId, LabeledGraph, VertexId};
use crate::index::BcIndex;
use crate::kcore::extract_kcore;
use crate::online::{find_g0_groups, run_two_group, two_groups, SearchConfig};
use crate::query::{resolve_k, Algorithm, BccQuery, BccResult, CoreParam, QueryError, SearchStats};
use crate::working::WorkingSubgraph;

/// Path from `q_l` to `q_r` with its penalty terms.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    pub vertices: Vec<VertexId>,
    pub hop_length: u32,
    pub min_core: u32,
    pub min_chi: u64,
    pub total_weight: f64,
}

/// Hop length plus coreness and butterfly shortfall penalties.
pub fn path_weight(idx: &BcIndex, hop_length: u32, min_core: u32, min_chi: u64, gamma1: f64, gamma2: f64) -> f64 {
    hop_length as f64 + gamma1 * (idx.delta_max() - min_core) as f64 + gamma2 * (idx.chi_max() - min_chi) as f64
}

fn evaluate(idx: &BcIndex, vertices: Vec<VertexId>, gamma1: f64, gamma2: f64) -> WeightedPath {
    let min_core = vertices.iter().map(|&v| idx.delta(v).unwrap_or(0)).min().unwrap_or(0);
    let min_chi = vertices.iter().map(|&v| idx.chi(v)).min().unwrap_or(0);
    let hop_length = vertices.len() as u32 - 1;
    WeightedPath {
        total_weight: path_weight(idx, hop_length, min_core, min_chi, gamma1, gamma2),
        vertices,
        hop_length,
        min_core,
        min_chi,
    }
}

/// Distinct χ levels are tried exactly up to this many; beyond it the levels
/// are powers of two plus the cap.
const EXACT_CHI_LEVELS: usize = 64;

fn chi_levels(values: &BTreeSet<u64>, cap: u64) -> Vec<u64> {
    let below: Vec<u64> = values.iter().copied().filter(|&x| x <= cap).collect();
    if below.len() <= EXACT_CHI_LEVELS {
        return below;
    }
    let mut levels = vec![0];
    let mut p = 1u64;
    while p < cap {
        levels.push(p);
        p = p.saturating_mul(2);
    }
    levels.push(cap);
    levels.dedup();
    levels
}

/// BFS from `s` to `t` through accepted vertices, stopping at `t`; ties
/// resolve toward smaller ids.
fn bfs_path(g: &LabeledGraph, s: VertexId, t: VertexId, accept: impl Fn(VertexId) -> bool) -> Option<Vec<VertexId>> {
    crate::distance::shortest_path_filtered(g, s, t, accept)
}

/// Path between the query vertices minimizing the weighted length.
///
/// Paths stay within the index's two labels. Every pair of thresholds
/// (coreness `c`, butterfly degree `x`) is tried with a BFS restricted to
/// vertices meeting both; each path found is scored by its true minima.
/// Pairs whose optimistic bound cannot beat the incumbent are skipped.
pub fn weighted_shortest_path(
    idx: &BcIndex,
    g: &LabeledGraph,
    q_l: VertexId,
    q_r: VertexId,
    gamma1: f64,
    gamma2: f64,
) -> Result<WeightedPath, QueryError> {
    let (a, b) = idx.labels();
    let in_pair = |v: VertexId| {
        let l = g.label(v);
        l == a || l == b
    };
    let base = bfs_path(g, q_l, q_r, in_pair).ok_or(QueryError::Disconnected)?;
    let base_hops = base.len() as u32 - 1;
    let mut best = evaluate(idx, base, gamma1, gamma2);

    let core_cap = idx.delta(q_l).unwrap_or(0).min(idx.delta(q_r).unwrap_or(0));
    let chi_cap = idx.chi(q_l).min(idx.chi(q_r));
    let mut cores = BTreeSet::new();
    let mut chis = BTreeSet::new();
    for v in g.vertices().filter(|&v| in_pair(v)) {
        cores.insert(idx.delta(v).unwrap_or(0));
        chis.insert(idx.chi(v));
    }
    let core_levels: Vec<u32> = cores.into_iter().filter(|&c| c <= core_cap).collect();
    let chi_levels = chi_levels(&chis, chi_cap);

    for &c in core_levels.iter().rev() {
        for &x in chi_levels.iter().rev() {
            let bound = path_weight(idx, base_hops, c, x, gamma1, gamma2);
            if bound >= best.total_weight {
                continue;
            }
            let accept = |v: VertexId| in_pair(v) && idx.delta(v).unwrap_or(0) >= c && idx.chi(v) >= x;
            if let Some(p) = bfs_path(g, q_l, q_r, accept) {
                let cand = evaluate(idx, p, gamma1, gamma2);
                if cand.total_weight < best.total_weight {
                    best = cand;
                }
            }
        }
    }
    Ok(best)
}

/// Breadth-first growth from `seeds` through vertices accepted by `admit`,
/// one vertex at a time, until the region holds `eta` vertices. Returns
/// the region sorted.
pub fn expand_region(
    g: &LabeledGraph,
    seeds: &[VertexId],
    admit: impl Fn(VertexId) -> bool,
    eta: usize,
) -> Vec<VertexId> {
    let mut inside = vec![false; g.vertex_count()];
    let mut region = Vec::new();
    let mut queue = VecDeque::new();
    for &s in seeds {
        if !inside[s as usize] {
            inside[s as usize] = true;
            region.push(s);
            queue.push_back(s);
        }
    }
    'grow: while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if region.len() >= eta {
                break 'grow;
            }
            if !inside[w as usize] && admit(w) {
                inside[w as usize] = true;
                region.push(w);
                queue.push_back(w);
            }
        }
    }
    region.sort_unstable();
    region
}

/// Expands `path` to at most `eta` vertices (never fewer than the path),
/// admitting left-label vertices with coreness at least the path's left
/// minimum and right-label vertices likewise.
pub fn local_expand(idx: &BcIndex, g: &LabeledGraph, path: &WeightedPath, eta: usize) -> Vec<VertexId> {
    let (a, b) = idx.labels();
    let floor = |label: LabelId| {
        path.vertices
            .iter()
            .filter(|&&v| g.label(v) == label)
            .map(|&v| idx.delta(v).unwrap_or(0))
            .min()
            .unwrap_or(0)
    };
    let (ka, kb) = (floor(a), floor(b));
    let admit = |v: VertexId| {
        let l = g.label(v);
        (l == a && idx.delta(v).unwrap_or(0) >= ka) || (l == b && idx.delta(v).unwrap_or(0) >= kb)
    };
    expand_region(g, &path.vertices, admit, eta)
}

/// Largest `k` whose `k`-core of `q`'s label in `ws` still contains `q`.
pub fn largest_feasible_k(ws: &WorkingSubgraph<'_>, q: VertexId) -> u32 {
    let label = ws.base().label(q);
    let feasible = |k: u32| !extract_kcore(ws, label, k, q).map(|c| c.is_empty()).unwrap_or(true);
    if !feasible(0) {
        return 0;
    }
    let (mut lo, mut hi) = (0u32, ws.label_degree(q));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

const LOCAL_HINT: &str = "retry with a larger --eta or --algorithm lp";

/// Local search with a prebuilt index.
pub fn l2p_search(g: &LabeledGraph, idx: &BcIndex, q: &BccQuery) -> Result<BccResult, QueryError> {
    q.validate(g)?;
    idx.check_graph(g)
        .map_err(|e| QueryError::IndexMismatch(e.to_string()))?;
    if !idx.covers(g.label(q.q_l), g.label(q.q_r)) {
        return Err(QueryError::IndexMismatch(format!(
            "index covers labels {} and {}",
            idx.label_names()[0],
            idx.label_names()[1]
        )));
    }
    let fixed_k = |k: CoreParam, v: VertexId| match k {
        CoreParam::Fixed(k) => k,
        CoreParam::Auto => idx.delta(v).unwrap_or(0),
    };
    let path = match weighted_shortest_path(idx, g, q.q_l, q.q_r, q.gamma1, q.gamma2) {
        Ok(p) => p,
        Err(QueryError::Disconnected) => {
            let mut r = BccResult::infeasible(
                Algorithm::L2p,
                "disconnected".into(),
                fixed_k(q.k1, q.q_l),
                fixed_k(q.k2, q.q_r),
            );
            r.hint = Some("query vertices are not connected".into());
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let region = local_expand(idx, g, &path, q.eta);
    let base = WorkingSubgraph::from_vertices(g, &region);
    let k_of = |k: CoreParam, v: VertexId| match k {
        CoreParam::Auto => largest_feasible_k(&base, v),
        fixed => resolve_k(g, v, fixed),
    };
    let (k1, k2) = (k_of(q.k1, q.q_l), k_of(q.k2, q.q_r));
    let cfg = SearchConfig::for_algorithm(Algorithm::L2p, q.b, q.rho, q.deletion);
    let mut stats = SearchStats::default();
    match find_g0_groups(&base, &two_groups(g, q.q_l, q.q_r, k1, k2), &cfg, &mut stats)? {
        Err(inf) => {
            let mut r = BccResult::infeasible(Algorithm::L2p, inf.reason, k1, k2);
            r.stats = stats;
            r.hint = Some(LOCAL_HINT.into());
            Ok(r)
        }
        Ok(g0) => run_two_group(g0, q, k1, k2, Algorithm::L2p, stats),
    }
}
