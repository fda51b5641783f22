// SPDX-License-Identifier: Apache-2.0

//! Per-vertex coreness and butterfly-degree index for one label pair, with
//! a checksummed little-endian file format.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::butterfly::{count_butterflies, BipartiteView, ButterflyError};
use crate::graph::{LabelId, LabeledGraph, VertexId};
use crate::kcore::{core_decompose, CoreIndex};

const MAGIC: &[u8; 8] = b"BCCIDX\0\0";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("labels must differ")]
    SameLabel,
    #[error("label {0} has no vertices")]
    EmptyLabel(String),
    #[error("not an index file")]
    BadMagic,
    #[error("unsupported index version {0}")]
    Version(u32),
    #[error("index checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },
    #[error("index file is truncated or malformed")]
    Truncated,
    #[error("index does not match graph: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Butterfly(#[from] ButterflyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Coreness (within each vertex's label) and butterfly degree (in the full
/// cross view of the two labels) of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcIndex {
    left_label: LabelId,
    right_label: LabelId,
    label_names: [String; 2],
    vertex_count: u64,
    edge_count: u64,
    coreness: Vec<u32>,
    chi: Vec<u64>,
    delta_max: u32,
    chi_max: u64,
}

impl BcIndex {
    pub fn build(g: &LabeledGraph, left: LabelId, right: LabelId) -> Result<Self, IndexError> {
        if left == right {
            return Err(IndexError::SameLabel);
        }
        for l in [left, right] {
            if g.vertices_with_label(l).next().is_none() {
                return Err(IndexError::EmptyLabel(g.label_name(l).to_string()));
            }
        }
        let mut coreness = vec![CoreIndex::UNDEFINED; g.vertex_count()];
        for l in [left, right] {
            let idx = core_decompose(g, Some(l));
            for v in g.vertices_with_label(l) {
                coreness[v as usize] = idx.raw()[v as usize];
            }
        }
        let chi = count_butterflies(&BipartiteView::from_graph(g, left, right))?
            .as_slice()
            .to_vec();
        Ok(Self::assemble(
            left,
            right,
            [g.label_name(left).to_string(), g.label_name(right).to_string()],
            g.vertex_count() as u64,
            g.edge_count() as u64,
            coreness,
            chi,
        ))
    }

    fn assemble(
        left_label: LabelId,
        right_label: LabelId,
        label_names: [String; 2],
        vertex_count: u64,
        edge_count: u64,
        coreness: Vec<u32>,
        chi: Vec<u64>,
    ) -> Self {
        let delta_max = coreness
            .iter()
            .copied()
            .filter(|&d| d != CoreIndex::UNDEFINED)
            .max()
            .unwrap_or(0);
        let chi_max = chi.iter().copied().max().unwrap_or(0);
        BcIndex {
            left_label,
            right_label,
            label_names,
            vertex_count,
            edge_count,
            coreness,
            chi,
            delta_max,
            chi_max,
        }
    }

    pub fn labels(&self) -> (LabelId, LabelId) {
        (self.left_label, self.right_label)
    }

    pub fn label_names(&self) -> &[String; 2] {
        &self.label_names
    }

    /// True when the index serves queries over labels `a` and `b` (either order).
    pub fn covers(&self, a: LabelId, b: LabelId) -> bool {
        (a, b) == (self.left_label, self.right_label) || (b, a) == (self.left_label, self.right_label)
    }

    /// Coreness within the vertex's label; `None` outside the label pair.
    #[inline]
    pub fn delta(&self, v: VertexId) -> Option<u32> {
        match self.coreness[v as usize] {
            CoreIndex::UNDEFINED => None,
            d => Some(d),
        }
    }

    #[inline]
    pub fn chi(&self, v: VertexId) -> u64 {
        self.chi[v as usize]
    }

    pub fn delta_max(&self) -> u32 {
        self.delta_max
    }

    pub fn chi_max(&self) -> u64 {
        self.chi_max
    }

    pub fn vertex_count(&self) -> usize {
        self.coreness.len()
    }

    /// Confirms the index was built from a graph of this shape and labels.
    pub fn check_graph(&self, g: &LabeledGraph) -> Result<(), IndexError> {
        if self.vertex_count != g.vertex_count() as u64 || self.edge_count != g.edge_count() as u64 {
            return Err(IndexError::Mismatch(format!(
                "index has {} vertices and {} edges, graph has {} and {}",
                self.vertex_count,
                self.edge_count,
                g.vertex_count(),
                g.edge_count()
            )));
        }
        for (id, name) in [
            (self.left_label, &self.label_names[0]),
            (self.right_label, &self.label_names[1]),
        ] {
            if g.label_id(name) != Some(id) {
                return Err(IndexError::Mismatch(format!(
                    "label {name} is not label #{id} of the graph"
                )));
            }
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut buf = Vec::with_capacity(64 + self.coreness.len() * 12);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&self.left_label.to_le_bytes());
        buf.extend_from_slice(&self.right_label.to_le_bytes());
        for name in &self.label_names {
            buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
            buf.extend_from_slice(name.as_bytes());
        }
        buf.extend_from_slice(&self.vertex_count.to_le_bytes());
        buf.extend_from_slice(&self.edge_count.to_le_bytes());
        buf.extend_from_slice(&self.delta_max.to_le_bytes());
        buf.extend_from_slice(&self.chi_max.to_le_bytes());
        for (&d, &c) in self.coreness.iter().zip(&self.chi) {
            buf.extend_from_slice(&d.to_le_bytes());
            buf.extend_from_slice(&c.to_le_bytes());
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        w.write_all(&buf)?;
        w.flush()
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, IndexError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes).map_err(|source| IndexError::Io {
            path: "<reader>".into(),
            source,
        })?;
        Self::from_bytes(&bytes)
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, IndexError> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(IndexError::BadMagic);
        }
        if bytes.len() < MAGIC.len() + 8 {
            return Err(IndexError::Truncated);
        }
        let (body, trailer) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(trailer.try_into().expect("four bytes"));
        let computed = crc32fast::hash(body);
        let mut cur = Cursor {
            bytes: body,
            pos: MAGIC.len(),
        };
        let version = cur.u32()?;
        if version != VERSION {
            return Err(IndexError::Version(version));
        }
        if stored != computed {
            return Err(IndexError::Checksum { stored, computed });
        }
        let left = cur.u32()?;
        let right = cur.u32()?;
        let names = [cur.string()?, cur.string()?];
        let vertex_count = cur.u64()?;
        let edge_count = cur.u64()?;
        let delta_max = cur.u32()?;
        let chi_max = cur.u64()?;
        let n = usize::try_from(vertex_count).map_err(|_| IndexError::Truncated)?;
        if body.len() - cur.pos != n.checked_mul(12).ok_or(IndexError::Truncated)? {
            return Err(IndexError::Truncated);
        }
        let mut coreness = Vec::with_capacity(n);
        let mut chi = Vec::with_capacity(n);
        for _ in 0..n {
            coreness.push(cur.u32()?);
            chi.push(cur.u64()?);
        }
        let idx = Self::assemble(left, right, names, vertex_count, edge_count, coreness, chi);
        if idx.delta_max != delta_max || idx.chi_max != chi_max {
            return Err(IndexError::Truncated);
        }
        Ok(idx)
    }

    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        let io = |source| IndexError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = File::create(path).map_err(io)?;
        self.write_to(BufWriter::new(file)).map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self, IndexError> {
        let file = File::open(path).map_err(|source| IndexError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::read_from(BufReader::new(file))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], IndexError> {
        let end = self.pos.checked_add(n).ok_or(IndexError::Truncated)?;
        let s = self.bytes.get(self.pos..end).ok_or(IndexError::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, IndexError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("four bytes")))
    }

    fn u64(&mut self) -> Result<u64, IndexError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("eight bytes")))
    }

    fn string(&mut self) -> Result<String, IndexError> {
        let len = self.u32()? as usize;
        String::from_utf8(self.take(len)?.to_vec()).map_err(|_| IndexError::Truncated)
    }
}
