//! Simple undirected graphs on vertices `0..n`, stored as dense bitset rows
//! plus a sorted edge list.
//!
//! The edge list order (sorted pairs `(u, v)` with `u < v`) is the canonical
//! edge order used everywhere ties must break: colorings are indexed by it,
//! searches walk it, and witnesses are lexicographically least with respect
//! to it.

mod canon;
mod cliques;
mod edgelist;
mod graph6;
mod surgery;

pub use canon::{canonical_form, canonical_form_colored, canonical_labeling, iso_equal, CANON_CAP};
pub use cliques::{cliques_of_size, clique_number, Cliques};
pub use edgelist::{parse_edge_list, parse_graph, write_edge_list};
pub use graph6::{parse_graph6, write_graph6};
pub use surgery::{identify, merge_edges, Orientation, SurgeryMap};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count a [`Graph`] may have.
pub const MAX_VERTICES: usize = 1024;

/// An edge named by its endpoints. The order of `u` and `v` only matters to
/// operations that document an orientation contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub u: usize,
    pub v: usize,
}

impl EdgeRef {
    pub const fn new(u: usize, v: usize) -> Self {
        EdgeRef { u, v }
    }

    /// The same edge with `u < v`.
    pub fn normalized(self) -> Self {
        if self.u <= self.v {
            self
        } else {
            EdgeRef::new(self.v, self.u)
        }
    }

    pub fn reversed(self) -> Self {
        EdgeRef::new(self.v, self.u)
    }

    pub fn contains(self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The vertex shared with `other`, if the two edges meet in exactly one vertex.
    pub fn shared_vertex(self, other: EdgeRef) -> Option<usize> {
        let a = self.normalized();
        let b = other.normalized();
        if a == b {
            return None;
        }
        [a.u, a.v].into_iter().find(|&x| b.contains(x))
    }

    /// The endpoint that is not `x`.
    pub fn other(self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Parses `u-v` or `u,v`.
impl std::str::FromStr for EdgeRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("`{s}` is not an edge; expected u-v"));
        let (u, v) = s.split_once(['-', ',']).ok_or_else(bad)?;
        let u = u.trim().parse().map_err(|_| bad())?;
        let v = v.trim().parse().map_err(|_| bad())?;
        Ok(EdgeRef::new(u, v))
    }
}

impl From<(usize, usize)> for EdgeRef {
    fn from((u, v): (usize, usize)) -> Self {
        EdgeRef::new(u, v)
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Immutable simple graph.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, cap: MAX_VERTICES });
        }
        let words = words_for(n);
        Ok(Graph {
            n,
            words,
            adj: vec![0; n * words],
            edges: Vec::new(),
        })
    }

    /// Builds a graph from an edge list. Self-loops, duplicates (in either
    /// orientation) and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<EdgeRef>,
    {
        let mut g = Graph::empty(n)?;
        for e in edges {
            let e: EdgeRef = e.into();
            g.check_vertex(e.u)?;
            g.check_vertex(e.v)?;
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if g.has_edge(e.u, e.v) {
                return Err(Error::DuplicateEdge(e.normalized()));
            }
            g.set(e.u, e.v);
        }
        g.rebuild_edge_list();
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but silently collapses duplicate edges.
    pub(crate) fn from_edges_collapsing<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set(u, v);
        }
        g.rebuild_edge_list();
        Ok(g)
    }

    fn set(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    fn rebuild_edge_list(&mut self) {
        let mut edges = std::mem::take(&mut self.edges);
        edges.clear();
        for u in 0..self.n {
            edges.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        self.edges = edges;
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> EdgeRef {
        let (u, v) = self.edges[index];
        EdgeRef::new(u, v)
    }

    /// Bitset row of `v`, `words()` words long.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn contains_edge(&self, e: EdgeRef) -> bool {
        self.has_edge(e.u, e.v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    /// Position of `e` in the canonical edge order.
    pub fn edge_index(&self, e: EdgeRef) -> Option<usize> {
        let e = e.normalized();
        self.edges.binary_search(&(e.u, e.v)).ok()
    }

    pub fn require_edge(&self, e: EdgeRef) -> Result<usize> {
        self.edge_index(e).ok_or(Error::NotAnEdge(e))
    }

    /// The spanning subgraph without the edge at `index`.
    pub fn without_edge(&self, index: usize) -> Graph {
        let mut g = self.clone();
        let (u, v) = g.edges.remove(index);
        g.adj[u * g.words + v / 64] &= !(1 << (v % 64));
        g.adj[v * g.words + u / 64] &= !(1 << (u % 64));
        g
    }

    pub fn with_edge(&self, e: EdgeRef) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.push((e.u, e.v));
        Graph::from_edges(self.n, edges)
    }

    /// Applies `perm`, where `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Precondition(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        Graph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Drops isolated vertices, compacting labels in increasing order.
    /// Returns the graph and the old label of every new vertex.
    pub fn without_isolated(&self) -> (Graph, Vec<usize>) {
        let kept: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_label[v] = i;
        }
        let g = Graph::from_edges_collapsing(
            kept.len(),
            self.edges.iter().map(|&(u, v)| (new_label[u], new_label[v])),
        )
        .expect("relabeling a simple graph stays simple");
        (g, kept)
    }

    /// The subgraph induced on `vertices`, relabeled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let mut edges = Vec::new();
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), edges)
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, edges).expect("complement of a simple graph")
    }

    /// True when every edge of `self` is an edge of `other` (same labels).
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n <= other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}

impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Graph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.edges).cmp(&(other.n, &other.edges))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&write_graph6(self))
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_graph6(&s).map_err(serde::de::Error::custom)
    }
}

// Builders.

pub fn complete_graph(n: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Path with `k` edges on vertices `0..=k`.
pub fn path_graph(k: usize) -> Result<Graph> {
    Graph::from_edges(k + 1, (0..k).map(|i| (i, i + 1)))
}

/// Cycle on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Precondition(format!("cycle needs at least 3 vertices, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `k` disjoint edges `2i - 2i+1`.
pub fn matching(k: usize) -> Result<Graph> {
    Graph::from_edges(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1)))
}

/// `g` on `0..n_g` followed by `h` shifted by `n_g`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Result<Graph> {
    let off = g.n();
    Graph::from_edges(
        g.n() + h.n(),
        g.edges()
            .iter()
            .copied()
            .chain(h.edges().iter().map(|&(u, v)| (u + off, v + off))),
    )
}

/// Every vertex of `left` adjacent to every vertex of `right`.
pub fn join_graphs(left: &Graph, right: &Graph) -> Result<Graph> {
    let off = left.n();
    let mut edges: Vec<(usize, usize)> = disjoint_union(left, right)?.edges().to_vec();
    for u in 0..left.n() {
        for v in 0..right.n() {
            edges.push((u, v + off));
        }
    }
    Graph::from_edges(left.n() + right.n(), edges)
}

/// Multi-source BFS distance between two edges: 0 when they share a vertex,
/// otherwise the length of a shortest path from `{e.u, e.v}` to `{f.u, f.v}`.
/// `None` means unreachable.
pub fn edge_distance(g: &Graph, e: EdgeRef, f: EdgeRef) -> Result<Option<usize>> {
    g.require_edge(e)?;
    g.require_edge(f)?;
    if e.contains(f.u) || e.contains(f.v) {
        return Ok(Some(0));
    }
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    for s in [e.u, e.v] {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        if x == f.u || x == f.v {
            return Ok(Some(dist[x]));
        }
        for y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}
