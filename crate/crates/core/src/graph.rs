//! The shared memory graph: a fixed universe of symbol nodes, directed
//! adjacency bits, and integer order weights.
//!
//! Every stored sequence is written as a transitive tournament: element `i`
//! (1-based) gains a directed edge to every later element, carrying weight
//! `L - i` so that earlier elements hold larger outgoing weights. Edges are
//! never removed; overlapping sequences share cells, with `max` resolving
//! weight collisions.

use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::{iter_ones, BitMatrix};
use crate::error::{Result, SsakgError};

/// Index of one node in the graph: an object, word, or virtual object.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SymbolId(pub u32);

impl SymbolId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for SymbolId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for SymbolId {
    fn from(id: u32) -> Self {
        SymbolId(id)
    }
}

/// An ordered list of pairwise-distinct symbols.
///
/// Distinctness is enforced at construction; repeated tokens must be encoded
/// as virtual objects first (see the text module).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sequence {
    elements: Vec<SymbolId>,
}

impl Sequence {
    /// Builds a sequence, rejecting empty input and repeated symbols.
    pub fn new(elements: Vec<SymbolId>) -> Result<Self> {
        if elements.is_empty() {
            return Err(SsakgError::SequenceTooShort { len: 0, min: 1 });
        }
        let mut sorted: Vec<u32> = elements.iter().map(|s| s.0).collect();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(SsakgError::DuplicateElement { symbol: pair[0] });
            }
        }
        Ok(Sequence { elements })
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Result<Self> {
        Sequence::new(ids.into_iter().map(SymbolId).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SymbolId] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SymbolId> {
        self.elements.iter()
    }
}

impl std::ops::Index<usize> for Sequence {
    type Output = SymbolId;
    fn index(&self, i: usize) -> &SymbolId {
        &self.elements[i]
    }
}

impl std::fmt::Display for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// The memory graph itself.
///
/// Writes happen from a single owner during the storage phase; afterwards the
/// graph is read-only and can be shared across threads freely.
#[derive(Debug, Clone)]
pub struct Ssakg {
    n: usize,
    adj: BitMatrix,
    /// Transpose of `adj`, kept in sync so symmetric row reads stay
    /// word-parallel.
    adj_rev: BitMatrix,
    weights: Vec<u32>,
    edge_count: usize,
    stored_count: usize,
}

impl Ssakg {
    /// Creates an empty graph over `n` symbol nodes.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(SsakgError::InvalidNodeCount { n });
        }
        Ok(Ssakg {
            n,
            adj: BitMatrix::new(n),
            adj_rev: BitMatrix::new(n),
            weights: vec![0; n * n],
            edge_count: 0,
            stored_count: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stored_count(&self) -> usize {
        self.stored_count
    }

    /// Number of directed edges ever written.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Directed density: used directed edges over the `n(n-1)` possible ones.
    pub fn density(&self) -> f64 {
        self.edge_count as f64 / (self.n as f64 * (self.n - 1) as f64)
    }

    /// Symmetric density: fraction of unordered node pairs connected in at
    /// least one direction. This is the quantity the analytic density model
    /// tracks, since one stored tournament couples `L(L-1)/2` pairs and the
    /// model counts each pair once regardless of direction.
    pub fn pair_density(&self) -> f64 {
        let mut sym_bits: u64 = 0;
        for v in 0..self.n {
            let fwd = self.adj.row(v);
            let rev = self.adj_rev.row(v);
            for (a, b) in fwd.iter().zip(rev.iter()) {
                sym_bits += (a | b).count_ones() as u64;
            }
        }
        // Each connected pair sets two bits in the symmetrized matrix.
        sym_bits as f64 / (self.n as f64 * (self.n - 1) as f64)
    }

    #[inline]
    pub fn has_edge(&self, from: SymbolId, to: SymbolId) -> bool {
        self.adj.get(from.index(), to.index())
    }

    /// Weight of the directed edge, 0 when the edge is absent.
    #[inline]
    pub fn weight(&self, from: SymbolId, to: SymbolId) -> u32 {
        self.weights[from.index() * self.n + to.index()]
    }

    /// True when the two nodes are connected in either direction.
    pub fn symmetric_connected(&self, a: SymbolId, b: SymbolId) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    fn check_symbol(&self, s: SymbolId) -> Result<()> {
        if s.index() >= self.n {
            return Err(SsakgError::SymbolOutOfRange {
                symbol: s.0,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Writes a sequence as a transitive tournament.
    ///
    /// For 1-based positions `i < j`: the edge `s_i -> s_j` is set and its
    /// weight raised to at least `L - i`. Existing cells are never lowered,
    /// so re-storing a sequence leaves the matrices unchanged.
    pub fn store_sequence(&mut self, seq: &Sequence) -> Result<()> {
        if seq.len() < 2 {
            return Err(SsakgError::SequenceTooShort {
                len: seq.len(),
                min: 2,
            });
        }
        for &s in seq.iter() {
            self.check_symbol(s)?;
        }
        let len = seq.len();
        for i in 0..len {
            let from = seq[i].index();
            let order_weight = (len - 1 - i) as u32;
            for j in (i + 1)..len {
                let to = seq[j].index();
                if self.adj.set(from, to) {
                    self.edge_count += 1;
                    self.adj_rev.set(to, from);
                }
                let w = &mut self.weights[from * self.n + to];
                *w = (*w).max(order_weight);
            }
        }
        self.stored_count += 1;
        Ok(())
    }

    /// All nodes symmetrically connected to every one of `symbols`.
    ///
    /// Computed as a word-parallel AND of the symmetrized rows; the queried
    /// symbols themselves never appear in the result (zero diagonal).
    pub fn connected_to_all(&self, symbols: &[SymbolId]) -> Vec<SymbolId> {
        if symbols.is_empty() {
            return Vec::new();
        }
        let words = self.adj.words_per_row();
        let mut acc = vec![u64::MAX; words];
        for &s in symbols {
            let fwd = self.adj.row(s.index());
            let rev = self.adj_rev.row(s.index());
            for w in 0..words {
                acc[w] &= fwd[w] | rev[w];
            }
        }
        iter_ones(&acc, self.n)
            .map(|i| SymbolId(i as u32))
            .collect()
    }
}

/// On-disk form of a graph: `{"n", "stored_count", "edges": [[u,v,w],...]}`
/// with edges sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: usize,
    pub stored_count: usize,
    pub edges: Vec<(u32, u32, u32)>,
}

impl Ssakg {
    pub fn to_snapshot(&self) -> Snapshot {
        let mut edges = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for v in iter_ones(self.adj.row(u), self.n) {
                edges.push((u as u32, v as u32, self.weights[u * self.n + v]));
            }
        }
        Snapshot {
            n: self.n,
            stored_count: self.stored_count,
            edges,
        }
    }

    pub fn from_snapshot(snap: &Snapshot) -> Result<Self> {
        let mut g = Ssakg::new(snap.n)?;
        let mut prev: Option<(u32, u32)> = None;
        for &(u, v, w) in &snap.edges {
            if u as usize >= snap.n || v as usize >= snap.n {
                return Err(SsakgError::FormatError(format!(
                    "edge ({u},{v}) out of range for n={}",
                    snap.n
                )));
            }
            if u == v {
                return Err(SsakgError::FormatError(format!("self-loop on node {u}")));
            }
            if w == 0 {
                return Err(SsakgError::FormatError(format!(
                    "edge ({u},{v}) has zero weight"
                )));
            }
            if let Some(p) = prev {
                if p >= (u, v) {
                    return Err(SsakgError::FormatError(
                        "edges not strictly sorted by (u,v)".into(),
                    ));
                }
            }
            prev = Some((u, v));
            g.adj.set(u as usize, v as usize);
            g.adj_rev.set(v as usize, u as usize);
            g.weights[u as usize * snap.n + v as usize] = w;
            g.edge_count += 1;
        }
        g.stored_count = snap.stored_count;
        Ok(g)
    }

    pub fn save_snapshot<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer(BufWriter::new(file), &self.to_snapshot())?;
        Ok(())
    }

    pub fn load_snapshot<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let snap: Snapshot = serde_json::from_reader(BufReader::new(file))?;
        Ssakg::from_snapshot(&snap)
    }
}
