// SPDX-License-Identifier: Apache-2.0

//! Stand-alone community checker.
//!
//! Recomputes every condition from the base graph with naive methods, sharing
//! no code with the search engines beyond [`LabeledGraph`] itself.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{LabelId, LabeledGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("community is empty")]
    Empty,
    #[error("query vertex {0} missing")]
    MissingQuery(VertexId),
    #[error("vertex {0} carries a label outside the query labels")]
    ForeignLabel(VertexId),
    #[error("vertex {vertex} has {degree} same-label neighbors, needs {k}")]
    DegreeTooLow { vertex: VertexId, degree: usize, k: u32 },
    #[error("group of label {0} is not connected")]
    GroupDisconnected(LabelId),
    #[error("community is not connected")]
    Disconnected,
    #[error("no vertex of label {label} reaches butterfly degree {b} against label {other}")]
    NoLeader { label: LabelId, other: LabelId, b: u64 },
    #[error("label groups are not connected through cross-group interactions")]
    InteractionDisconnected,
}

/// One labeled group: its query vertex and core requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupRequirement {
    pub query: VertexId,
    pub k: u32,
}

fn connected_within(g: &LabeledGraph, members: &HashSet<VertexId>) -> bool {
    let Some(&start) = members.iter().min() else {
        return true;
    };
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if members.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == members.len()
}

/// Butterfly degrees of `members` in the cross view between labels `a` and
/// `b`, by pairwise common-neighbor counting.
pub fn naive_butterfly_degrees(
    g: &LabeledGraph,
    members: &HashSet<VertexId>,
    a: LabelId,
    b: LabelId,
) -> Vec<(VertexId, u64)> {
    let mut out = Vec::new();
    for (this, that) in [(a, b), (b, a)] {
        let side: BTreeSet<VertexId> = members.iter().copied().filter(|&v| g.label(v) == this).collect();
        let cross = |v: VertexId| -> HashSet<VertexId> {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|u| members.contains(u) && g.label(*u) == that)
                .collect()
        };
        let lists: Vec<(VertexId, HashSet<VertexId>)> = side.iter().map(|&v| (v, cross(v))).collect();
        for (v, nv) in &lists {
            let mut chi = 0u64;
            for (w, nw) in &lists {
                if v != w {
                    let c = nv.intersection(nw).count() as u64;
                    chi += c * c.saturating_sub(1) / 2;
                }
            }
            out.push((*v, chi));
        }
    }
    out
}

fn pair_interacts(g: &LabeledGraph, members: &HashSet<VertexId>, a: LabelId, b: LabelId, bt: u64) -> Option<LabelId> {
    let chi = naive_butterfly_degrees(g, members, a, b);
    [a, b]
        .into_iter()
        .find(|&label| !chi.iter().any(|&(v, c)| g.label(v) == label && c >= bt))
}

/// Checks a community against per-group core requirements and the
/// cross-group condition. With two groups the cross condition is a leader
/// pair; with more, the group interaction graph must be connected.
pub fn check_community(
    g: &LabeledGraph,
    vertices: &[VertexId],
    groups: &[GroupRequirement],
    b: u64,
) -> Result<(), Violation> {
    if vertices.is_empty() {
        return Err(Violation::Empty);
    }
    let members: HashSet<VertexId> = vertices.iter().copied().collect();
    let labels: Vec<LabelId> = groups.iter().map(|r| g.label(r.query)).collect();
    for r in groups {
        if !members.contains(&r.query) {
            return Err(Violation::MissingQuery(r.query));
        }
    }
    for &v in &members {
        if !labels.contains(&g.label(v)) {
            return Err(Violation::ForeignLabel(v));
        }
    }
    for (r, &label) in groups.iter().zip(&labels) {
        let group: HashSet<VertexId> = members.iter().copied().filter(|&v| g.label(v) == label).collect();
        for &v in &group {
            let degree = g.neighbors(v).iter().filter(|u| group.contains(u)).count();
            if degree < r.k as usize {
                return Err(Violation::DegreeTooLow {
                    vertex: v,
                    degree,
                    k: r.k,
                });
            }
        }
        if !connected_within(g, &group) {
            return Err(Violation::GroupDisconnected(label));
        }
    }
    if !connected_within(g, &members) {
        return Err(Violation::Disconnected);
    }
    if groups.len() == 2 {
        if let Some(label) = pair_interacts(g, &members, labels[0], labels[1], b) {
            let other = if label == labels[0] { labels[1] } else { labels[0] };
            return Err(Violation::NoLeader { label, other, b });
        }
        return Ok(());
    }
    // group interaction graph, connectivity by BFS over group indices
    let m = groups.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if pair_interacts(g, &members, labels[i], labels[j], b).is_none() {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Violation::InteractionDisconnected)
    }
}

/// Two-group shorthand for [`check_community`].
pub fn check_bcc(
    g: &LabeledGraph,
    vertices: &[VertexId],
    (q_l, k1): (VertexId, u32),
    (q_r, k2): (VertexId, u32),
    b: u64,
) -> Result<(), Violation> {
    check_community(
        g,
        vertices,
        &[
            GroupRequirement { query: q_l, k: k1 },
            GroupRequirement { query: q_r, k: k2 },
        ],
        b,
    )
}
