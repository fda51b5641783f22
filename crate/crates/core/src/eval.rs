// SPDX-License-Identifier: Apache-2.0

//! Evaluation workloads: F1 scoring, query generation and synthetic
//! two-label graphs with planted communities.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GraphError, LabelId, LabeledGraph, VertexId};
use crate::index::BcIndex;
use crate::local::l2p_search;
use crate::online::online_search;
use crate::query::{Algorithm, BccQuery, Status};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("graph needs at least two labels")]
    TooFewLabels,
    #[error("no vertex pair passes the degree-rank filter ({0}%) in two labels")]
    DegreeRank(f64),
    #[error("no eligible pair at inter-distance exactly {0}")]
    InterDistance(u32),
    #[error("community {community} references unknown vertex {vertex}")]
    UnknownVertex { community: usize, vertex: VertexId },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Query vertices rank in the top `100 - degree_rank` percent by degree.
    pub degree_rank: f64,
    /// Exact hop distance between the two query vertices.
    pub inter_distance: u32,
    pub num_queries: usize,
    /// Local cross edges as a fraction of the paired communities' internal edges.
    pub cross_edge_ratio_local: f64,
    /// Global noise cross edges as a fraction of all edges.
    pub cross_edge_ratio_global: f64,
    pub rng_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            degree_rank: 80.0,
            inter_distance: 1,
            num_queries: 100,
            cross_edge_ratio_local: 0.10,
            cross_edge_ratio_global: 0.10,
            rng_seed: 0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.degree_rank > 0.0 && self.degree_rank <= 100.0) {
            return Err(EvalError::Config(format!(
                "degree rank {} not in (0, 100]",
                self.degree_rank
            )));
        }
        if self.inter_distance == 0 {
            return Err(EvalError::Config("inter-distance must be at least 1".into()));
        }
        for (name, r) in [
            ("local", self.cross_edge_ratio_local),
            ("global", self.cross_edge_ratio_global),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(EvalError::Config(format!("{name} cross-edge ratio {r} not in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Independent random streams derived from one seed.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub enum Stream {
    Labels = 1,
    LocalEdges = 2,
    GlobalEdges = 3,
    Queries = 4,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Score {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision `|C∩T|/|C|`, recall `|C∩T|/|T|` and their harmonic mean.
/// An empty found set scores zero throughout.
pub fn f1_score(found: &[VertexId], truth: &[VertexId]) -> F1Score {
    let found: HashSet<VertexId> = found.iter().copied().collect();
    let truth: HashSet<VertexId> = truth.iter().copied().collect();
    let hit = found.intersection(&truth).count() as f64;
    let precision = if found.is_empty() {
        0.0
    } else {
        hit / found.len() as f64
    };
    let recall = if truth.is_empty() {
        0.0
    } else {
        hit / truth.len() as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    F1Score { precision, recall, f1 }
}

/// Vertices passing the degree-rank filter: within each label, vertices are
/// ordered by (degree, id) ascending and a vertex at 0-based position `r`
/// of `n` passes when `(r + 1) / n >= rank / 100`.
pub fn degree_rank_eligible(g: &LabeledGraph, rank: f64) -> Vec<bool> {
    let mut ok = vec![false; g.vertex_count()];
    for l in 0..g.label_count() as LabelId {
        let mut vs: Vec<VertexId> = g.vertices_with_label(l).collect();
        vs.sort_by_key(|&v| (g.degree(v), v));
        let n = vs.len() as f64;
        for (r, &v) in vs.iter().enumerate() {
            ok[v as usize] = (r as f64 + 1.0) / n * 100.0 >= rank - 1e-9;
        }
    }
    ok
}

/// Vertices at hop distance exactly `l` from `s`.
fn ring(g: &LabeledGraph, s: VertexId, l: u32) -> Vec<VertexId> {
    let mut dist: BTreeMap<VertexId, u32> = BTreeMap::from([(s, 0)]);
    let mut queue = VecDeque::from([s]);
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == l {
            out.push(u);
            continue;
        }
        for &w in g.neighbors(u) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    out
}

/// Seeded sample of query pairs `(a, b)` with `label(a) < label(b)`, both
/// passing the degree-rank filter, at inter-distance exactly `l`. Returns
/// fewer than `num_queries` pairs when fewer exist, sorted ascending.
pub fn generate_queries(g: &LabeledGraph, cfg: &EvalConfig) -> Result<Vec<(VertexId, VertexId)>, EvalError> {
    cfg.validate()?;
    if g.label_count() < 2 {
        return Err(EvalError::TooFewLabels);
    }
    let ok = degree_rank_eligible(g, cfg.degree_rank);
    let labels: HashSet<LabelId> = g.vertices().filter(|&v| ok[v as usize]).map(|v| g.label(v)).collect();
    if labels.len() < 2 {
        return Err(EvalError::DegreeRank(cfg.degree_rank));
    }
    let sources: Vec<VertexId> = g.vertices().filter(|&v| ok[v as usize]).collect();
    let per_source: Vec<Vec<(VertexId, VertexId)>> = sources
        .par_iter()
        .map(|&u| {
            ring(g, u, cfg.inter_distance)
                .into_iter()
                .filter(|&w| ok[w as usize] && g.label(u) < g.label(w))
                .map(|w| (u, w))
                .collect()
        })
        .collect();
    let mut pairs: Vec<(VertexId, VertexId)> = per_source.into_iter().flatten().collect();
    pairs.sort_unstable();
    if pairs.is_empty() {
        return Err(EvalError::InterDistance(cfg.inter_distance));
    }
    if pairs.len() <= cfg.num_queries {
        return Ok(pairs);
    }
    let mut rng = stream_rng(cfg.rng_seed, Stream::Queries);
    let mut picked: Vec<usize> = sample(&mut rng, pairs.len(), cfg.num_queries).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| pairs[i]).collect())
}

/// Labeled graph with planted ground-truth communities.
#[derive(Debug, Clone)]
pub struct Synthesized {
    pub graph: LabeledGraph,
    /// One entry per community pair: the union of both members, sorted.
    pub truth: Vec<Vec<VertexId>>,
    /// Cross edges added inside community pairs.
    pub local_edges: usize,
    /// Cross edges added anywhere.
    pub global_edges: usize,
}

pub const SYNTH_LABELS: [&str; 2] = ["A", "B"];

/// Labels a graph from its communities and adds cross edges.
///
/// Communities alternate between labels A and B (a vertex keeps the label of
/// the first community listing it); consecutive communities form a planted
/// pair. Every other vertex draws a label at random. Each pair receives
/// `round(ratio_local * internal edges)` cross edges: a small complete
/// bipartite liaison block of side `max(2, floor(sqrt(c)))` (so the pair
/// shares butterflies) and the remainder at random. Finally
/// `ratio_global * |E|` random cross edges are added across the graph.
/// Input labels are ignored; the output keeps external ids.
pub fn synthesize_labels(
    g: &LabeledGraph,
    communities: &[Vec<VertexId>],
    cfg: &EvalConfig,
) -> Result<Synthesized, EvalError> {
    cfg.validate()?;
    let n = g.vertex_count();
    for (ci, c) in communities.iter().enumerate() {
        if let Some(&v) = c.iter().find(|&&v| v as usize >= n) {
            return Err(EvalError::UnknownVertex {
                community: ci,
                vertex: v,
            });
        }
    }
    let mut label: Vec<Option<u8>> = vec![None; n];
    for (ci, c) in communities.iter().enumerate() {
        for &v in c {
            label[v as usize].get_or_insert((ci % 2) as u8);
        }
    }
    let mut rng = stream_rng(cfg.rng_seed, Stream::Labels);
    let label: Vec<u8> = label
        .into_iter()
        .map(|l| l.unwrap_or_else(|| rng.random_range(0..2u8)))
        .collect();

    let mut edges: HashSet<(VertexId, VertexId)> = g.edges().collect();
    let key = |a: VertexId, b: VertexId| if a < b { (a, b) } else { (b, a) };
    let original = edges.len();

    let mut local_edges = 0;
    let mut truth = Vec::new();
    let mut rng = stream_rng(cfg.rng_seed, Stream::LocalEdges);
    for pair in communities.chunks(2) {
        let [c1, c2] = pair else { break };
        let mut union: Vec<VertexId> = c1.iter().chain(c2).copied().collect();
        union.sort_unstable();
        union.dedup();
        truth.push(union);
        let side = |c: &[VertexId], want: u8| -> Vec<VertexId> {
            let mut s: Vec<VertexId> = c.iter().copied().filter(|&v| label[v as usize] == want).collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let (a, b) = (side(c1, 0), side(c2, 1));
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let internal = |c: &[VertexId]| {
            let set: HashSet<VertexId> = c.iter().copied().collect();
            c.iter()
                .map(|&v| g.neighbors(v).iter().filter(|&&u| u > v && set.contains(&u)).count())
                .sum::<usize>()
        };
        let target = (cfg.cross_edge_ratio_local * (internal(c1) + internal(c2)) as f64).round() as usize;
        if target == 0 {
            continue;
        }
        let mut added = 0;
        let s = ((target as f64).sqrt().floor() as usize)
            .max(2)
            .min(a.len())
            .min(b.len());
        if s >= 2 {
            let la = sample(&mut rng, a.len(), s).into_vec();
            let lb = sample(&mut rng, b.len(), s).into_vec();
            for &i in &la {
                for &j in &lb {
                    if edges.insert(key(a[i], b[j])) {
                        added += 1;
                    }
                }
            }
        }
        let capacity = a.len() * b.len();
        let mut attempts = 0;
        while added < target && edges.len() - original < capacity && attempts < 100 * target {
            attempts += 1;
            let u = a[rng.random_range(0..a.len())];
            let v = b[rng.random_range(0..b.len())];
            if edges.insert(key(u, v)) {
                added += 1;
            }
        }
        local_edges += added;
    }

    let mut rng = stream_rng(cfg.rng_seed, Stream::GlobalEdges);
    let target = (cfg.cross_edge_ratio_global * original as f64).round() as usize;
    let (la, lb): (Vec<VertexId>, Vec<VertexId>) = {
        let a = (0..n as VertexId).filter(|&v| label[v as usize] == 0).collect();
        let b = (0..n as VertexId).filter(|&v| label[v as usize] == 1).collect();
        (a, b)
    };
    let mut global_edges = 0;
    if !la.is_empty() && !lb.is_empty() {
        let mut attempts = 0;
        while global_edges < target && attempts < 100 * target {
            attempts += 1;
            let u = la[rng.random_range(0..la.len())];
            let v = lb[rng.random_range(0..lb.len())];
            if edges.insert(key(u, v)) {
                global_edges += 1;
            }
        }
    }

    let vertex_labels: BTreeMap<u64, String> = g
        .vertices()
        .map(|v| (g.external_id(v), SYNTH_LABELS[label[v as usize] as usize].to_string()))
        .collect();
    let mut ext_edges: Vec<(u64, u64)> = edges
        .into_iter()
        .map(|(u, v)| (g.external_id(u), g.external_id(v)))
        .collect();
    ext_edges.sort_unstable();
    let graph = LabeledGraph::from_external(&vertex_labels, &ext_edges)?;
    let truth = truth
        .into_iter()
        .map(|c| {
            let mut c: Vec<VertexId> = c
                .into_iter()
                .map(|v| graph.vertex_of(g.external_id(v)).expect("same vertex set"))
                .collect();
            c.sort_unstable();
            c
        })
        .collect();
    Ok(Synthesized {
        graph,
        truth,
        local_edges,
        global_edges,
    })
}

/// One line of an evaluation report.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub query_id: usize,
    pub algorithm: Algorithm,
    pub status: String,
    pub size: usize,
    pub query_distance: u32,
    pub diameter: u32,
    pub score: Option<F1Score>,
    pub wall_time_ms: f64,
}

pub const TSV_HEADER: &str =
    "query_id\talgorithm\tstatus\tsize\tquery_distance\tdiameter\tprecision\trecall\tf1\twall_time_ms";

impl EvalRow {
    pub fn to_tsv(&self) -> String {
        let (p, r, f) = match self.score {
            Some(s) => (
                format!("{:.4}", s.precision),
                format!("{:.4}", s.recall),
                format!("{:.4}", s.f1),
            ),
            None => ("NA".into(), "NA".into(), "NA".into()),
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            self.query_id,
            self.algorithm,
            self.status,
            self.size,
            self.query_distance,
            self.diameter,
            p,
            r,
            f,
            self.wall_time_ms
        )
    }
}

/// Ground truth for a query: the first community holding both vertices,
/// else the union of communities holding either.
pub fn truth_for(truth: &[Vec<VertexId>], a: VertexId, b: VertexId) -> Vec<VertexId> {
    let has = |c: &Vec<VertexId>, v| c.binary_search(&v).is_ok();
    if let Some(c) = truth.iter().find(|c| has(c, a) && has(c, b)) {
        return c.clone();
    }
    let mut out: Vec<VertexId> = truth
        .iter()
        .filter(|c| has(c, a) || has(c, b))
        .flatten()
        .copied()
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Runs every query under every algorithm on a pool of `jobs` workers.
/// Rows come back in (query, algorithm) order regardless of scheduling.
pub fn run_eval(
    g: &LabeledGraph,
    index: Option<&BcIndex>,
    queries: &[(VertexId, VertexId)],
    truth: &[Vec<VertexId>],
    algorithms: &[Algorithm],
    template: &BccQuery,
    jobs: usize,
) -> Result<Vec<EvalRow>, EvalError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| EvalError::Pool(e.to_string()))?;
    let tasks: Vec<(usize, Algorithm)> = (0..queries.len())
        .flat_map(|i| algorithms.iter().map(move |&a| (i, a)))
        .collect();
    let rows = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, algorithm)| {
                let (a, b) = queries[i];
                let mut q = template.clone();
                q.q_l = a;
                q.q_r = b;
                q.algorithm = algorithm;
                let start = Instant::now();
                let res = match (algorithm, index) {
                    (Algorithm::L2p, Some(idx)) if idx.covers(g.label(a), g.label(b)) => l2p_search(g, idx, &q),
                    _ => online_search(g, &q),
                };
                let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
                let expected = truth_for(truth, a, b);
                match res {
                    Ok(r) => EvalRow {
                        query_id: i,
                        algorithm,
                        status: match &r.status {
                            Status::Found => "found".to_string(),
                            Status::Infeasible(reason) => format!("infeasible:{reason}"),
                        },
                        size: r.vertices.len(),
                        query_distance: r.query_distance,
                        diameter: r.diameter,
                        score: (!expected.is_empty()).then(|| f1_score(&r.vertices, &expected)),
                        wall_time_ms,
                    },
                    Err(e) => EvalRow {
                        query_id: i,
                        algorithm,
                        status: format!("error:{e}"),
                        size: 0,
                        query_distance: 0,
                        diameter: 0,
                        score: (!expected.is_empty()).then(|| f1_score(&[], &expected)),
                        wall_time_ms,
                    },
                }
            })
            .collect()
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f1_basics() {
        let s = f1_score(&[1, 2, 3, 4], &[1, 2, 3, 4]);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        let s = f1_score(&[1, 2], &[1, 2, 3, 4]);
        assert_eq!((s.precision, s.recall), (1.0, 0.5));
        assert!((s.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(f1_score(&[], &[1]).f1, 0.0);
        assert_eq!(f1_score(&[5], &[1]).f1, 0.0);
    }

    proptest! {
        #[test]
        fn f1_matches_counting(
            found in prop::collection::btree_set(0u32..30, 0..20),
            truth in prop::collection::btree_set(0u32..30, 1..20),
        ) {
            let f: Vec<_> = found.iter().copied().collect();
            let t: Vec<_> = truth.iter().copied().collect();
            let s = f1_score(&f, &t);
            let hit = f.iter().filter(|v| truth.contains(v)).count() as f64;
            let (p, r) = if f.is_empty() { (0.0, 0.0) } else { (hit / f.len() as f64, hit / t.len() as f64) };
            let f1 = if hit == 0.0 { 0.0 } else { 2.0 * hit / (f.len() + t.len()) as f64 };
            prop_assert!((s.precision - p).abs() < 1e-12);
            prop_assert!((s.recall - r).abs() < 1e-12);
            prop_assert!((s.f1 - f1).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&s.f1));
            prop_assert_eq!(s.f1 == 0.0, hit == 0.0);
        }
    }

    /// Star centers 0 (label A) and 5 (label B) joined by an edge.
    fn two_stars() -> LabeledGraph {
        LabeledGraph::from_edges(
            &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1],
            vec!["A".into(), "B".into()],
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (5, 6),
                (5, 7),
                (5, 8),
                (5, 9),
                (0, 5),
                (1, 6),
            ],
        )
        .unwrap()
    }

    #[test]
    fn top_rank_picks_unique_maxima() {
        let g = two_stars();
        let cfg = EvalConfig {
            degree_rank: 100.0,
            ..EvalConfig::default()
        };
        assert_eq!(generate_queries(&g, &cfg).unwrap(), vec![(0, 5)]);
    }

    #[test]
    fn distance_constraint_is_exact() {
        let g = two_stars();
        let cfg = EvalConfig {
            degree_rank: 10.0,
            inter_distance: 2,
            num_queries: 5,
            ..EvalConfig::default()
        };
        let qs = generate_queries(&g, &cfg).unwrap();
        assert!(!qs.is_empty() && qs.len() <= 5);
        for &(a, b) in &qs {
            assert!(ring(&g, a, 2).binary_search(&b).is_ok());
            assert!(!g.has_edge(a, b));
        }
        assert_eq!(generate_queries(&g, &cfg).unwrap(), qs);
        let far = EvalConfig {
            inter_distance: 9,
            ..cfg
        };
        assert!(matches!(generate_queries(&g, &far), Err(EvalError::InterDistance(9))));
    }

    fn clique_pair_background() -> (LabeledGraph, Vec<Vec<VertexId>>) {
        let mut edges = Vec::new();
        for base in [0u32, 8] {
            for i in 0..8 {
                for j in i + 1..8 {
                    edges.push((base + i, base + j));
                }
            }
        }
        for v in 16..40u32 {
            edges.push((v, (v + 1 - 16) % 24 + 16));
        }
        edges.push((3, 20));
        let g = LabeledGraph::from_edges(&[0; 40], vec!["_".into()], &edges).unwrap();
        (g, vec![(0..8).collect(), (8..16).collect()])
    }

    #[test]
    fn zero_ratios_only_label() {
        let (g, comms) = clique_pair_background();
        let cfg = EvalConfig {
            cross_edge_ratio_local: 0.0,
            cross_edge_ratio_global: 0.0,
            ..EvalConfig::default()
        };
        let s = synthesize_labels(&g, &comms, &cfg).unwrap();
        assert_eq!(s.graph.edge_count(), g.edge_count());
        assert_eq!((s.local_edges, s.global_edges), (0, 0));
        assert!((0..8).all(|v| s.graph.label_name(s.graph.label(v)) == "A"));
        assert!((8..16).all(|v| s.graph.label_name(s.graph.label(v)) == "B"));
        assert_eq!(s.truth, vec![(0..16).collect::<Vec<_>>()]);
    }

    #[test]
    fn synthesis_is_seeded_and_simple() {
        let (g, comms) = clique_pair_background();
        let cfg = EvalConfig::default();
        let a = synthesize_labels(&g, &comms, &cfg).unwrap();
        let b = synthesize_labels(&g, &comms, &cfg).unwrap();
        assert_eq!(a.graph, b.graph);
        // 10% of 56 internal edges, 10% of 81 edges
        assert_eq!(a.local_edges, 6);
        assert_eq!(a.global_edges, 8);
        assert_eq!(a.graph.edge_count(), g.edge_count() + 14);
        assert_eq!(a.graph.duplicate_edges(), 0);
        for (u, v) in a.graph.edges() {
            assert_ne!(u, v);
        }
        let view = crate::butterfly::BipartiteView::from_graph(&a.graph, 0, 1);
        let st = crate::butterfly::count_butterflies(&view).unwrap();
        assert!(st.max_left() >= 1);
    }
}
