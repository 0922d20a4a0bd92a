//! The union multigraph `x ∪ y` of two Hamiltonian cycles.
//!
//! Vertices are labelled `1..=n`. Edge identities are stable: edges `0..n`
//! are the edges of `x` in traversal order and `n..2n` those of `y`, so an
//! edge shared by both cycles shows up twice with two distinct ids.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Directed,
    Undirected,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Directed => "directed",
            Mode::Undirected => "undirected",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "directed" => Ok(Mode::Directed),
            "undirected" => Ok(Mode::Undirected),
            other => Err(format!(
                "unknown mode `{other}` (expected directed or undirected)"
            )),
        }
    }
}

/// A 1-based vertex label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    pub fn new(label: u32) -> Self {
        debug_assert!(label >= 1, "vertex labels are 1-based");
        VertexId(label)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(u32);

impl EdgeId {
    pub fn new(id: u32) -> Self {
        EdgeId(id)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A Hamiltonian cycle as a vertex sequence; the closing edge from the last
/// vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HamCycle {
    mode: Mode,
    vertices: Vec<VertexId>,
}

impl HamCycle {
    /// Validates that `labels` is a permutation of `1..=n` with `n >= 3`.
    pub fn new(mode: Mode, labels: &[u32]) -> Result<Self, Error> {
        let n = labels.len();
        if n < 3 {
            return Err(Error::InvalidCycle(format!(
                "a Hamiltonian cycle needs at least 3 vertices, got {n}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for (pos, &v) in labels.iter().enumerate() {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidCycle(format!(
                    "label {v} at position {} is outside 1..={n}",
                    pos + 1
                )));
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::InvalidCycle(format!(
                    "label {v} repeats at position {}",
                    pos + 1
                )));
            }
        }
        Ok(HamCycle {
            mode,
            vertices: labels.iter().map(|&v| VertexId(v)).collect(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn labels(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.0).collect()
    }

    /// Consecutive pairs in traversal order, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    pub fn edge_multiset(&self) -> EdgeMultiset {
        let mut ms = EdgeMultiset::new(self.mode);
        for (a, b) in self.edges() {
            ms.insert(a, b);
        }
        ms
    }

    /// The same cycle traversed backwards.
    pub fn reversed(&self) -> HamCycle {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        HamCycle {
            mode: self.mode,
            vertices,
        }
    }

    /// Rotation starting at vertex 1; undirected cycles are additionally
    /// oriented so that the second vertex is the smaller neighbour of 1.
    pub fn canonical(&self) -> HamCycle {
        let n = self.vertices.len();
        let start = self
            .vertices
            .iter()
            .position(|v| v.0 == 1)
            .expect("validated permutation contains 1");
        let mut vertices: Vec<VertexId> = (0..n).map(|k| self.vertices[(start + k) % n]).collect();
        if self.mode == Mode::Undirected && vertices[n - 1] < vertices[1] {
            vertices[1..].reverse();
        }
        HamCycle {
            mode: self.mode,
            vertices,
        }
    }
}

impl fmt::Display for HamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = match self.mode {
            Mode::Directed => "→",
            Mode::Undirected => "-",
        };
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Multiset of endpoint pairs. Undirected pairs are stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeMultiset {
    mode: Mode,
    counts: BTreeMap<(u32, u32), u32>,
}

impl EdgeMultiset {
    pub fn new(mode: Mode) -> Self {
        EdgeMultiset {
            mode,
            counts: BTreeMap::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn key(mode: Mode, a: VertexId, b: VertexId) -> (u32, u32) {
        match mode {
            Mode::Directed => (a.0, b.0),
            Mode::Undirected => (a.0.min(b.0), a.0.max(b.0)),
        }
    }

    pub fn insert(&mut self, a: VertexId, b: VertexId) {
        *self.counts.entry(Self::key(self.mode, a, b)).or_insert(0) += 1;
    }

    pub fn count(&self, a: VertexId, b: VertexId) -> u32 {
        self.counts
            .get(&Self::key(self.mode, a, b))
            .copied()
            .unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    /// Multiset sum.
    pub fn merged(&self, other: &EdgeMultiset) -> EdgeMultiset {
        let mut out = self.clone();
        for (&k, &c) in &other.counts {
            *out.counts.entry(k).or_insert(0) += c;
        }
        out
    }
}

pub fn cycle_edge_multiset(c: &HamCycle) -> EdgeMultiset {
    c.edge_multiset()
}

pub fn multiset_equals(a: &EdgeMultiset, b: &EdgeMultiset) -> bool {
    a == b
}

/// `x ∪ y` with per-edge identities. Immutable after construction.
///
/// Incidence is stored as four edge ids per vertex. Undirected: all incident
/// edges in ascending id order. Directed: the two out-arcs followed by the
/// two in-arcs, each half in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionMultigraph {
    n: usize,
    mode: Mode,
    edges: Vec<(VertexId, VertexId)>,
    incidence: Vec<[EdgeId; 4]>,
}

impl UnionMultigraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.n as u32).map(VertexId)
    }

    /// `(tail, head)` for directed arcs; `(min, max)` for undirected edges.
    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.index()]
    }

    #[inline]
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e.index()];
        if a == v {
            b
        } else {
            a
        }
    }

    /// All four incident edges of `v`.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId; 4] {
        &self.incidence[v.index()]
    }

    /// Directed only: the two arcs leaving `v`.
    #[inline]
    pub fn out_arcs(&self, v: VertexId) -> &[EdgeId] {
        debug_assert_eq!(self.mode, Mode::Directed);
        &self.incidence[v.index()][..2]
    }

    /// Directed only: the two arcs entering `v`.
    #[inline]
    pub fn in_arcs(&self, v: VertexId) -> &[EdgeId] {
        debug_assert_eq!(self.mode, Mode::Directed);
        &self.incidence[v.index()][2..]
    }

    pub fn is_from_x(&self, e: EdgeId) -> bool {
        e.index() < self.n
    }

    pub fn edge_multiset(&self) -> EdgeMultiset {
        let mut ms = EdgeMultiset::new(self.mode);
        for &(a, b) in &self.edges {
            ms.insert(a, b);
        }
        ms
    }

    pub fn multiset_of<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> EdgeMultiset {
        let mut ms = EdgeMultiset::new(self.mode);
        for e in edges {
            let (a, b) = self.endpoints(e);
            ms.insert(a, b);
        }
        ms
    }

    /// One pair per doubled endpoint pair, lower id first, sorted by the
    /// lower id. Multiplicity never exceeds two since each cycle uses an
    /// endpoint pair at most once.
    pub fn parallel_edge_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut first: BTreeMap<(u32, u32), EdgeId> = BTreeMap::new();
        let mut pairs = Vec::new();
        for e in self.edge_ids() {
            let (a, b) = self.endpoints(e);
            let key = (a.0, b.0);
            match first.get(&key) {
                Some(&lower) => pairs.push((lower, e)),
                None => {
                    first.insert(key, e);
                }
            }
        }
        pairs.sort();
        pairs
    }

    /// The multigraph with every arc reversed (edge ids preserved).
    pub fn reversed(&self) -> UnionMultigraph {
        match self.mode {
            Mode::Undirected => self.clone(),
            Mode::Directed => {
                let edges = self.edges.iter().map(|&(a, b)| (b, a)).collect::<Vec<_>>();
                let incidence = self
                    .incidence
                    .iter()
                    .map(|&[o1, o2, i1, i2]| [i1, i2, o1, o2])
                    .collect();
                UnionMultigraph {
                    n: self.n,
                    mode: self.mode,
                    edges,
                    incidence,
                }
            }
        }
    }
}

pub fn build_union(x: &HamCycle, y: &HamCycle) -> Result<UnionMultigraph, Error> {
    if x.n() != y.n() || x.mode() != y.mode() {
        return Err(Error::MismatchedInstances);
    }
    let n = x.n();
    let mode = x.mode();
    let mut edges = Vec::with_capacity(2 * n);
    for (a, b) in x.edges().chain(y.edges()) {
        edges.push(match mode {
            Mode::Directed => (a, b),
            Mode::Undirected => (a.min(b), a.max(b)),
        });
    }

    const UNSET: EdgeId = EdgeId(u32::MAX);
    let mut incidence = vec![[UNSET; 4]; n + 1];
    let mut fill = vec![[0usize; 2]; n + 1];
    for (id, &(a, b)) in edges.iter().enumerate() {
        let e = EdgeId(id as u32);
        match mode {
            Mode::Directed => {
                let slot = &mut fill[a.index()][0];
                incidence[a.index()][*slot] = e;
                *slot += 1;
                let slot = &mut fill[b.index()][1];
                incidence[b.index()][2 + *slot] = e;
                *slot += 1;
            }
            Mode::Undirected => {
                for v in [a, b] {
                    let slot = &mut fill[v.index()][0];
                    incidence[v.index()][*slot] = e;
                    *slot += 1;
                }
            }
        }
    }
    debug_assert!(fill[1..].iter().all(|f| match mode {
        Mode::Directed => *f == [2, 2],
        Mode::Undirected => f[0] == 4,
    }));

    Ok(UnionMultigraph {
        n,
        mode,
        edges,
        incidence,
    })
}
