// SPDX-License-Identifier: Apache-2.0

//! Fixtures, random generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::HashSet;

use bcc_core::graph::{LabelId, LabeledGraph, VertexId};
use bcc_core::validate::check_bcc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vertex names of the leader-pair walkthrough graph.
pub mod walk {
    pub const QL: u32 = 0;
    pub const V1: u32 = 1;
    pub const V2: u32 = 2;
    pub const V3: u32 = 3;
    pub const QR: u32 = 4;
    pub const U1: u32 = 5;
    pub const U2: u32 = 6;
    pub const U3: u32 = 7;
    pub const U4: u32 = 8;
    pub const U5: u32 = 9;
    pub const U6: u32 = 10;
    pub const U7: u32 = 11;
    pub const U9: u32 = 12;
}

/// Left group: a K4 on {q_l, v1, v2, v3}. Cross edges join {v1, v3} to
/// {u2, u3, u5, u6}. The right group is a sparse tree-like web around q_r.
pub fn walkthrough_graph() -> LabeledGraph {
    use walk::*;
    let mut labels = vec![0; 4];
    labels.extend([1; 9]);
    let mut edges = vec![(QL, V1), (QL, V2), (QL, V3), (V1, V2), (V1, V3), (V2, V3)];
    for l in [V1, V3] {
        for r in [U2, U3, U5, U6] {
            edges.push((l, r));
        }
    }
    edges.extend([
        (QR, U1),
        (QR, U2),
        (QR, U3),
        (QR, U9),
        (U9, U4),
        (U9, U7),
        (U1, U2),
        (U3, U5),
        (U4, U5),
        (U5, U7),
        (U4, U6),
    ]);
    LabeledGraph::from_edges(&labels, vec!["L".into(), "R".into()], &edges).unwrap()
}

/// Vertex names of the motivating collaboration graph.
pub mod collab {
    pub const QL: u32 = 0;
    pub const V: [u32; 6] = [1, 2, 3, 4, 5, 6];
    pub const W: [u32; 5] = [7, 8, 9, 10, 11];
    pub const QR: u32 = 12;
    pub const U: [u32; 4] = [13, 14, 15, 16];
    pub const P: [u32; 2] = [17, 18];
    pub const SE: u32 = 0;
    pub const UI: u32 = 1;
    pub const PM: u32 = 2;
}

/// Engineers q_l, v1..v4 form a K5 and v5 joins four of them; designers
/// q_r, u1..u3 form a K4; the butterfly {q_l, v5} x {q_r, u3} links them.
/// Distractors: a far engineer K5 reached through v4, a pendant v6, a
/// designer u4 of core 2, and two managers.
pub fn collaboration_graph() -> LabeledGraph {
    use collab::*;
    let [v1, v2, v3, v4, v5, v6] = V;
    let [u1, u2, u3, u4] = U;
    let mut labels = vec![SE; 12];
    labels.extend([UI; 5]);
    labels.extend([PM; 2]);
    let mut edges = Vec::new();
    let clique = |vs: &[u32], edges: &mut Vec<(u32, u32)>| {
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                edges.push((vs[i], vs[j]));
            }
        }
    };
    clique(&[QL, v1, v2, v3, v4], &mut edges);
    clique(&W, &mut edges);
    clique(&[QR, u1, u2, u3], &mut edges);
    edges.extend([(v5, QL), (v5, v1), (v5, v2), (v5, v3), (v4, W[0]), (v6, v1)]);
    edges.extend([(QL, QR), (QL, u3), (v5, QR), (v5, u3)]);
    edges.extend([(u4, u1), (u4, u2)]);
    edges.extend([(P[0], v1), (P[0], u1), (P[1], v1), (P[1], u1), (P[0], P[1])]);
    LabeledGraph::from_edges(&labels, vec!["SE".into(), "UI".into(), "PM".into()], &edges).unwrap()
}

/// Erdos-Renyi graph with uniformly random labels from `0..labels`, using
/// `p_in` inside a label and `p_cross` across labels.
pub fn random_labeled(rng: &mut ChaCha8Rng, n: usize, labels: u32, p_in: f64, p_cross: f64) -> LabeledGraph {
    let lab: Vec<LabelId> = (0..n).map(|_| rng.random_range(0..labels)).collect();
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            let p = if lab[u as usize] == lab[v as usize] {
                p_in
            } else {
                p_cross
            };
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let names = (0..labels).map(|l| format!("L{l}")).collect();
    LabeledGraph::from_edges(&lab, names, &edges).unwrap()
}

/// Random bipartite graph: label 0 on `0..nl`, label 1 on `nl..nl+nr`.
pub fn random_bipartite(rng: &mut ChaCha8Rng, nl: usize, nr: usize, p: f64) -> LabeledGraph {
    let mut labels = vec![0; nl];
    labels.extend(vec![1; nr]);
    let mut edges = Vec::new();
    for u in 0..nl as u32 {
        for v in nl as u32..(nl + nr) as u32 {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::from_edges(&labels, vec!["A".into(), "B".into()], &edges).unwrap()
}

/// Butterfly degrees by enumerating every pair of left and right vertices.
pub fn brute_butterflies(g: &LabeledGraph, left: LabelId, right: LabelId) -> Vec<u64> {
    let ls: Vec<VertexId> = g.vertices_with_label(left).collect();
    let rs: Vec<VertexId> = g.vertices_with_label(right).collect();
    let mut chi = vec![0u64; g.vertex_count()];
    for (i, &a) in ls.iter().enumerate() {
        for &b in &ls[i + 1..] {
            for (j, &c) in rs.iter().enumerate() {
                for &d in &rs[j + 1..] {
                    if g.has_edge(a, c) && g.has_edge(a, d) && g.has_edge(b, c) && g.has_edge(b, d) {
                        for v in [a, b, c, d] {
                            chi[v as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    chi
}

/// All-pairs hop distances inside the subgraph induced by `members`.
pub fn floyd_warshall(g: &LabeledGraph, members: &[VertexId]) -> Vec<Vec<u32>> {
    let n = members.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if i != j && g.has_edge(members[i], members[j]) {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn induced_diameter(g: &LabeledGraph, members: &[VertexId]) -> u32 {
    floyd_warshall(g, members).into_iter().flatten().max().unwrap_or(0)
}

/// Max over members of the larger distance to the two queries.
pub fn induced_query_distance(g: &LabeledGraph, members: &[VertexId], qs: &[VertexId]) -> u32 {
    let d = floyd_warshall(g, members);
    let pos: Vec<usize> = qs
        .iter()
        .map(|q| members.iter().position(|v| v == q).unwrap())
        .collect();
    (0..members.len())
        .map(|i| pos.iter().map(|&p| d[p][i]).max().unwrap())
        .max()
        .unwrap_or(0)
}

/// Coreness by repeatedly removing a minimum-degree vertex, restricted to
/// one label's induced subgraph.
pub fn naive_coreness(g: &LabeledGraph, label: LabelId) -> Vec<Option<u32>> {
    let mut alive: HashSet<VertexId> = g.vertices_with_label(label).collect();
    let mut core = vec![None; g.vertex_count()];
    let mut k = 0;
    while !alive.is_empty() {
        let deg =
            |v: VertexId, alive: &HashSet<VertexId>| g.neighbors(v).iter().filter(|w| alive.contains(w)).count() as u32;
        let &v = alive.iter().min_by_key(|&&v| (deg(v, &alive), v)).unwrap();
        k = k.max(deg(v, &alive));
        core[v as usize] = Some(k);
        alive.remove(&v);
    }
    core
}

/// Smallest-diameter community by enumerating every vertex subset of the
/// two query labels that contains both queries. Returns the optimum
/// diameter and one optimal subset.
pub fn exhaustive_bcc(
    g: &LabeledGraph,
    (q_l, k1): (VertexId, u32),
    (q_r, k2): (VertexId, u32),
    b: u64,
) -> Option<(u32, Vec<VertexId>)> {
    let (a, c) = (g.label(q_l), g.label(q_r));
    let others: Vec<VertexId> = g
        .vertices()
        .filter(|&v| v != q_l && v != q_r && (g.label(v) == a || g.label(v) == c))
        .collect();
    assert!(others.len() <= 20, "exhaustive search is exponential");
    let mut best: Option<(u32, Vec<VertexId>)> = None;
    for mask in 0u32..(1 << others.len()) {
        let mut members = vec![q_l, q_r];
        members.extend((0..others.len()).filter(|i| mask >> i & 1 == 1).map(|i| others[i]));
        members.sort_unstable();
        if check_bcc(g, &members, (q_l, k1), (q_r, k2), b).is_err() {
            continue;
        }
        let d = induced_diameter(g, &members);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, members));
        }
    }
    best
}

/// Every simple path from `s` to `t` with at most `max_hops` edges whose
/// vertices all satisfy `allowed`.
pub fn simple_paths(
    g: &LabeledGraph,
    s: VertexId,
    t: VertexId,
    max_hops: usize,
    allowed: &dyn Fn(VertexId) -> bool,
) -> Vec<Vec<VertexId>> {
    fn go(
        g: &LabeledGraph,
        t: VertexId,
        max_hops: usize,
        allowed: &dyn Fn(VertexId) -> bool,
        path: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        if path.len() > max_hops {
            return;
        }
        for &w in g.neighbors(u) {
            if allowed(w) && !path.contains(&w) {
                path.push(w);
                go(g, t, max_hops, allowed, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, t, max_hops, allowed, &mut vec![s], &mut out);
    out
}

/// Two-label small-world workload with `n` vertices per label.
///
/// Each label is a ring lattice linking every vertex to its two nearest
/// neighbors on each side, plus random chords with probability `chord`.
/// Left vertex `i` (id `i`) is joined to right vertices `i-1, i, i+1`
/// (ids `n + ...`), so consecutive left vertices share butterflies.
pub fn ladder_workload(seed: u64, n: usize, chord: f64) -> LabeledGraph {
    let mut r = rng(seed);
    let mut labels = vec![0; n];
    labels.extend(vec![1; n]);
    let n32 = n as u32;
    let mut edges = Vec::new();
    for side in 0..2u32 {
        let base = side * n32;
        for i in 0..n32 {
            for off in 1..=2 {
                edges.push((base + i, base + (i + off) % n32));
            }
            if r.random_bool(chord) {
                let j = r.random_range(0..n32);
                if j != i {
                    edges.push((base + i, base + j));
                }
            }
        }
    }
    for i in 0..n32 {
        for off in [n32 - 1, 0, 1] {
            edges.push((i, n32 + (i + off) % n32));
        }
    }
    LabeledGraph::from_edges(&labels, vec!["A".into(), "B".into()], &edges).unwrap()
}
