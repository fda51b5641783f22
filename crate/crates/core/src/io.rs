// SPDX-License-Identifier: Apache-2.0

//! Text formats: edge lists, label files and ground-truth community files.
//!
//! Edge file: one edge per line, two whitespace-separated non-negative
//! integer ids. Label file: `<id> <label>` per line. Community file: one
//! community per line as whitespace-separated ids. In all three, blank
//! lines and lines starting with `#` are skipped.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Edges,
    Labels,
    Communities,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Source::Edges => "edge file",
            Source::Labels => "label file",
            Source::Communities => "community file",
        })
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{source_file} line {line}: {message}")]
    Malformed {
        source_file: Source,
        line: usize,
        message: String,
    },
    #[error("edge file line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: u64 },
    #[error("edge file line {line}: vertex {vertex} has no label")]
    MissingLabel { line: usize, vertex: u64 },
    #[error("label file line {line}: vertex {vertex} does not appear in the edge file")]
    UnknownVertex { line: usize, vertex: u64 },
    #[error("label file line {line}: vertex {vertex} already labeled {previous}")]
    ConflictingLabel { line: usize, vertex: u64, previous: String },
    #[error("community file line {line}: unknown vertex {vertex}")]
    UnknownCommunityVertex { line: usize, vertex: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl LoadError {
    fn io(path: &Path, source: io::Error) -> Self {
        LoadError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Reject label-file vertices that never occur in the edge file.
    pub strict: bool,
}

fn content_lines<R: BufRead>(reader: R, source: Source) -> impl Iterator<Item = Result<(usize, String), LoadError>> {
    reader.lines().enumerate().filter_map(move |(i, line)| match line {
        Ok(text) => {
            let trimmed = text.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, trimmed.to_string())))
            }
        }
        Err(e) => Some(Err(LoadError::Malformed {
            source_file: source,
            line: i + 1,
            message: e.to_string(),
        })),
    })
}

fn parse_id(token: &str, source: Source, line: usize) -> Result<u64, LoadError> {
    token.parse::<u64>().map_err(|_| LoadError::Malformed {
        source_file: source,
        line,
        message: format!("expected a non-negative integer id, found {token:?}"),
    })
}

/// Parses an edge list into `(u, v, line)` triples.
pub fn read_edges<R: BufRead>(reader: R) -> Result<Vec<(u64, u64, usize)>, LoadError> {
    let mut edges = Vec::new();
    for item in content_lines(reader, Source::Edges) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(LoadError::Malformed {
                source_file: Source::Edges,
                line,
                message: "expected exactly two vertex ids".into(),
            });
        };
        let u = parse_id(a, Source::Edges, line)?;
        let v = parse_id(b, Source::Edges, line)?;
        if u == v {
            return Err(LoadError::SelfLoop { line, vertex: u });
        }
        edges.push((u, v, line));
    }
    Ok(edges)
}

/// Parses a label file into `(id, label, line)` triples.
pub fn read_labels<R: BufRead>(reader: R) -> Result<Vec<(u64, String, usize)>, LoadError> {
    let mut out = Vec::new();
    for item in content_lines(reader, Source::Labels) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let (Some(a), Some(name), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(LoadError::Malformed {
                source_file: Source::Labels,
                line,
                message: "expected `<id> <label>`".into(),
            });
        };
        out.push((parse_id(a, Source::Labels, line)?, name.to_string(), line));
    }
    Ok(out)
}

/// Loads and validates a labeled graph from an edge stream and a label stream.
pub fn load_graph<E: BufRead, L: BufRead>(
    edges: E,
    labels: L,
    options: LoadOptions,
) -> Result<LabeledGraph, LoadError> {
    let edges = read_edges(edges)?;
    let labels = read_labels(labels)?;

    let mut vertex_labels: BTreeMap<u64, String> = BTreeMap::new();
    let mut label_lines: BTreeMap<u64, usize> = BTreeMap::new();
    for (id, name, line) in labels {
        match vertex_labels.entry(id) {
            Entry::Vacant(slot) => {
                slot.insert(name);
                label_lines.insert(id, line);
            }
            Entry::Occupied(slot) => {
                if *slot.get() != name {
                    return Err(LoadError::ConflictingLabel {
                        line,
                        vertex: id,
                        previous: slot.get().clone(),
                    });
                }
            }
        }
    }

    for &(u, v, line) in &edges {
        for x in [u, v] {
            if !vertex_labels.contains_key(&x) {
                return Err(LoadError::MissingLabel { line, vertex: x });
            }
        }
    }
    if options.strict {
        let used: BTreeSet<u64> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        if let Some((&vertex, &line)) = label_lines
            .iter()
            .filter(|(id, _)| !used.contains(id))
            .min_by_key(|(_, &line)| line)
        {
            return Err(LoadError::UnknownVertex { line, vertex });
        }
    }

    let pairs: Vec<(u64, u64)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let graph = LabeledGraph::from_external(&vertex_labels, &pairs)?;
    if graph.duplicate_edges() > 0 {
        log::warn!("collapsed {} duplicate edges", graph.duplicate_edges());
    }
    Ok(graph)
}

fn open(path: &Path) -> Result<BufReader<File>, LoadError> {
    File::open(path).map(BufReader::new).map_err(|e| LoadError::io(path, e))
}

pub fn load_graph_files(edges: &Path, labels: &Path, options: LoadOptions) -> Result<LabeledGraph, LoadError> {
    load_graph(open(edges)?, open(labels)?, options)
}

/// Writes the canonical text form: edges as `u v` with `u < v` in ascending
/// order, labels as `id label` in ascending id order.
pub fn save_graph<E: Write, L: Write>(g: &LabeledGraph, mut edges: E, mut labels: L) -> io::Result<()> {
    let mut pairs: Vec<(u64, u64)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (g.external_id(u), g.external_id(v));
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    for (a, b) in pairs {
        writeln!(edges, "{a} {b}")?;
    }
    for v in g.vertices() {
        writeln!(labels, "{} {}", g.external_id(v), g.label_name(g.label(v)))?;
    }
    edges.flush()?;
    labels.flush()
}

/// Reads a ground-truth community file, resolving ids against `g`.
pub fn read_communities<R: BufRead>(reader: R, g: &LabeledGraph) -> Result<Vec<Vec<VertexId>>, LoadError> {
    read_raw_communities(reader)?
        .into_iter()
        .map(|(line, ids)| {
            let mut members = ids
                .into_iter()
                .map(|id| {
                    g.vertex_of(id)
                        .ok_or(LoadError::UnknownCommunityVertex { line, vertex: id })
                })
                .collect::<Result<Vec<_>, _>>()?;
            members.sort_unstable();
            members.dedup();
            Ok(members)
        })
        .collect()
}

/// Reads a community file without resolving ids; pairs each community with
/// its line number.
pub fn read_raw_communities<R: BufRead>(reader: R) -> Result<Vec<(usize, Vec<u64>)>, LoadError> {
    let mut out = Vec::new();
    for item in content_lines(reader, Source::Communities) {
        let (line, text) = item?;
        let ids = text
            .split_whitespace()
            .map(|t| parse_id(t, Source::Communities, line))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((line, ids));
    }
    Ok(out)
}

pub fn load_communities(path: &Path, g: &LabeledGraph) -> Result<Vec<Vec<VertexId>>, LoadError> {
    read_communities(open(path)?, g)
}

pub fn write_communities<W: Write>(g: &LabeledGraph, communities: &[Vec<VertexId>], mut out: W) -> io::Result<()> {
    for c in communities {
        let ids: Vec<String> = c.iter().map(|&v| g.external_id(v).to_string()).collect();
        writeln!(out, "{}", ids.join(" "))?;
    }
    out.flush()
}
