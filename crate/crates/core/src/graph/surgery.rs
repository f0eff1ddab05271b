//! Vertex identification across two graphs.
//!
//! The combined graph is the disjoint union of `left` and `right` with the
//! requested vertex pairs identified. Each identification class is labeled
//! by its smallest member, counting left vertices first and right vertices
//! after them; classes are then numbered in that order. When no two left
//! vertices end up identified, every left vertex keeps its label and the
//! surviving right vertices follow in increasing order.

use serde::{Deserialize, Serialize};

use super::{EdgeRef, Graph};
use crate::error::{Error, Result};

/// Where every vertex and edge of the two operands went.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryMap {
    pub vertex_left: Vec<usize>,
    pub vertex_right: Vec<usize>,
    /// Image of each operand edge, indexed by canonical edge position.
    pub edge_left: Vec<EdgeRef>,
    pub edge_right: Vec<EdgeRef>,
}

impl SurgeryMap {
    pub fn left_edge(&self, e: EdgeRef) -> EdgeRef {
        EdgeRef::new(self.vertex_left[e.u], self.vertex_left[e.v])
    }

    pub fn right_edge(&self, e: EdgeRef) -> EdgeRef {
        EdgeRef::new(self.vertex_right[e.u], self.vertex_right[e.v])
    }
}

/// Endpoint correspondence for [`merge_edges`]: `Aligned` pairs `ge.u` with
/// `he.u`, `Flipped` pairs `ge.u` with `he.v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    Aligned,
    Flipped,
}

impl Orientation {
    pub fn pairs(self, ge: EdgeRef, he: EdgeRef) -> [(usize, usize); 2] {
        match self {
            Orientation::Aligned => [(ge.u, he.u), (ge.v, he.v)],
            Orientation::Flipped => [(ge.u, he.v), (ge.v, he.u)],
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Disjoint union of `left` and `right` with each `(l, r)` in `pairs`
/// identified. Parallel edges collapse; an identification that would merge
/// the two endpoints of an edge is rejected.
pub fn identify(left: &Graph, right: &Graph, pairs: &[(usize, usize)]) -> Result<(Graph, SurgeryMap)> {
    let nl = left.n();
    let total = nl + right.n();
    let mut parent: Vec<usize> = (0..total).collect();
    for &(l, r) in pairs {
        if l >= nl {
            return Err(Error::VertexOutOfRange { vertex: l, n: nl });
        }
        if r >= right.n() {
            return Err(Error::VertexOutOfRange { vertex: r, n: right.n() });
        }
        let a = find(&mut parent, l);
        let b = find(&mut parent, nl + r);
        // Keep the smaller index as root so roots are class minima.
        let (lo, hi) = (a.min(b), a.max(b));
        parent[hi] = lo;
    }
    let mut label = vec![usize::MAX; total];
    let mut next = 0;
    let mut image = vec![0; total];
    for x in 0..total {
        let root = find(&mut parent, x);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        image[x] = label[root];
    }
    let vertex_left = image[..nl].to_vec();
    let vertex_right = image[nl..].to_vec();
    let mut edges = Vec::with_capacity(left.edge_count() + right.edge_count());
    for (&(u, v), map) in left
        .edges()
        .iter()
        .map(|e| (e, &vertex_left))
        .chain(right.edges().iter().map(|e| (e, &vertex_right)))
    {
        let (a, b) = (map[u], map[v]);
        if a == b {
            return Err(Error::Precondition(format!(
                "identification collapses the edge {u}-{v} into vertex {a}"
            )));
        }
        edges.push((a, b));
    }
    let g = Graph::from_edges_collapsing(next, edges)?;
    let edge_left = left
        .edges()
        .iter()
        .map(|&(u, v)| EdgeRef::new(vertex_left[u], vertex_left[v]).normalized())
        .collect();
    let edge_right = right
        .edges()
        .iter()
        .map(|&(u, v)| EdgeRef::new(vertex_right[u], vertex_right[v]).normalized())
        .collect();
    Ok((
        g,
        SurgeryMap {
            vertex_left,
            vertex_right,
            edge_left,
            edge_right,
        },
    ))
}

/// Merges edge `ge` of `g` with edge `he` of `h` under `orientation`.
pub fn merge_edges(
    g: &Graph,
    ge: EdgeRef,
    h: &Graph,
    he: EdgeRef,
    orientation: Orientation,
) -> Result<(Graph, SurgeryMap)> {
    g.require_edge(ge)?;
    h.require_edge(he)?;
    identify(g, h, &orientation.pairs(ge, he))
}
