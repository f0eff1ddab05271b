//! The color-transition digraph of two distinguished edges: arc `ij` is
//! present when some free coloring gives the first edge color `i` and the
//! second color `j`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{extend, for_each_free_extension, CliqueTuple, Color, ColorSet, Coloring};
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AuxDigraph {
    q: usize,
    arcs: BTreeSet<(Color, Color)>,
}

impl AuxDigraph {
    pub fn new(q: usize, arcs: impl IntoIterator<Item = (Color, Color)>) -> Result<Self> {
        let arcs: BTreeSet<_> = arcs.into_iter().collect();
        if let Some(&(i, j)) = arcs.iter().find(|&&(i, j)| i == 0 || j == 0 || i as usize > q || j as usize > q) {
            return Err(Error::InvalidColorSet(format!("arc {i}->{j} outside [{q}]")));
        }
        Ok(AuxDigraph { q, arcs })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn arcs(&self) -> &BTreeSet<(Color, Color)> {
        &self.arcs
    }

    pub fn has_arc(&self, i: Color, j: Color) -> bool {
        self.arcs.contains(&(i, j))
    }

    pub fn out_neighbors(&self, i: Color) -> ColorSet {
        let mut s = ColorSet::empty(self.q);
        for &(_, j) in self.arcs.iter().filter(|a| a.0 == i) {
            s.insert(j);
        }
        s
    }

    pub fn in_neighbors(&self, j: Color) -> ColorSet {
        let mut s = ColorSet::empty(self.q);
        for &(i, _) in self.arcs.iter().filter(|a| a.1 == j) {
            s.insert(i);
        }
        s
    }

    /// Vertices reachable from `i` by a walk of exactly two arcs.
    pub fn second_out_neighbors(&self, i: Color) -> ColorSet {
        let mut s = ColorSet::empty(self.q);
        for k in self.out_neighbors(i).iter() {
            for j in self.out_neighbors(k).iter() {
                s.insert(j);
            }
        }
        s
    }

    /// One `i -> j` line per arc.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(i, j) in &self.arcs {
            let _ = writeln!(out, "{i} -> {j}");
        }
        out
    }
}

fn check_edges(g: &Graph, g1: EdgeRef, g2: EdgeRef) -> Result<()> {
    g.require_edge(g1)?;
    g.require_edge(g2)?;
    if g1.normalized() == g2.normalized() {
        return Err(Error::Precondition(format!("distinguished edges coincide ({g1})")));
    }
    Ok(())
}

/// Builds the digraph from `q^2` extension queries.
pub fn aux_digraph(g: &Graph, t: &CliqueTuple, g1: EdgeRef, g2: EdgeRef) -> Result<AuxDigraph> {
    check_edges(g, g1, g2)?;
    let pairs: Vec<(Color, Color)> = t.colors().flat_map(|i| t.colors().map(move |j| (i, j))).collect();
    let found: Vec<Option<(Color, Color)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let partial = Coloring::partial(g, &[(g1, i), (g2, j)])?;
            match extend(g, t, &partial) {
                Ok(ext) => Ok(ext.map(|_| (i, j))),
                Err(Error::PartialViolates { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    AuxDigraph::new(t.q(), found.into_iter().flatten())
}

/// Builds the same digraph from one sweep over all free colorings.
pub fn aux_digraph_by_enumeration(g: &Graph, t: &CliqueTuple, g1: EdgeRef, g2: EdgeRef) -> Result<AuxDigraph> {
    check_edges(g, g1, g2)?;
    let (a, b) = (g.require_edge(g1)?, g.require_edge(g2)?);
    let mut arcs = BTreeSet::new();
    let all = t.q() * t.q();
    for_each_free_extension(g, t, &Coloring::unset(g.edge_count()), |c| {
        arcs.insert((c.get(a), c.get(b)));
        if arcs.len() == all {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    AuxDigraph::new(t.q(), arcs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphReport {
    pub q: usize,
    pub empty_out: Vec<Color>,
    pub empty_in: Vec<Color>,
    /// Some `i != j` with both `ij` and `ji`.
    pub has_two_cycle: bool,
    pub symmetric: bool,
    pub out_neighborhoods: Vec<Vec<Color>>,
    pub in_neighborhoods: Vec<Vec<Color>>,
    pub second_out_neighborhoods: Vec<Vec<Color>>,
}

pub fn analyze(d: &AuxDigraph) -> DigraphReport {
    let colors: Vec<Color> = (1..=d.q as Color).collect();
    DigraphReport {
        q: d.q,
        empty_out: colors.iter().copied().filter(|&i| d.out_neighbors(i).is_empty()).collect(),
        empty_in: colors.iter().copied().filter(|&i| d.in_neighbors(i).is_empty()).collect(),
        has_two_cycle: d.arcs.iter().any(|&(i, j)| i != j && d.has_arc(j, i)),
        symmetric: d.arcs.iter().all(|&(i, j)| d.has_arc(j, i)),
        out_neighborhoods: colors.iter().map(|&i| d.out_neighbors(i).to_vec()).collect(),
        in_neighborhoods: colors.iter().map(|&i| d.in_neighbors(i).to_vec()).collect(),
        second_out_neighborhoods: colors.iter().map(|&i| d.second_out_neighbors(i).to_vec()).collect(),
    }
}

/// The arc pattern a gadget's digraph must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Every ordered pair of distinct colors of `X`, nothing else.
    NegativeSender(ColorSet),
    /// Exactly the loops on `X`.
    PositiveSender(ColorSet),
    /// The colors with an outgoing arc (those the first edge can take) are
    /// exactly `X`.
    Determiner(ColorSet),
}

impl Shape {
    /// The exact arc set demanded by a sender shape.
    pub fn sender_arcs(&self) -> Option<BTreeSet<(Color, Color)>> {
        match *self {
            Shape::NegativeSender(x) => {
                Some(x.iter().flat_map(|i| x.iter().filter(move |&j| j != i).map(move |j| (i, j))).collect())
            }
            Shape::PositiveSender(x) => Some(x.iter().map(|i| (i, i)).collect()),
            Shape::Determiner(_) => None,
        }
    }
}

pub fn expected_shape_check(d: &AuxDigraph, shape: Shape) -> bool {
    match shape {
        Shape::Determiner(x) => {
            let tails: BTreeSet<Color> = d.arcs.iter().map(|a| a.0).collect();
            tails == x.iter().collect()
        }
        _ => shape.sender_arcs().as_ref() == Some(&d.arcs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, path_graph};

    fn t33() -> CliqueTuple {
        "3,3".parse().unwrap()
    }

    #[test]
    fn path_has_every_arc() {
        let p = path_graph(2).unwrap();
        let d = aux_digraph(&p, &t33(), EdgeRef::new(0, 1), EdgeRef::new(1, 2)).unwrap();
        assert_eq!(d.arcs().len(), 4);
        assert_eq!(d, aux_digraph_by_enumeration(&p, &t33(), EdgeRef::new(0, 1), EdgeRef::new(1, 2)).unwrap());
    }

    #[test]
    fn triangle_has_every_arc_and_k6_none() {
        let k3 = complete_graph(3).unwrap();
        let d = aux_digraph(&k3, &t33(), EdgeRef::new(0, 1), EdgeRef::new(1, 2)).unwrap();
        assert_eq!(d.arcs().len(), 4);
        let k6 = complete_graph(6).unwrap();
        let d = aux_digraph(&k6, &t33(), EdgeRef::new(0, 1), EdgeRef::new(2, 3)).unwrap();
        assert!(d.arcs().is_empty());
        let r = analyze(&d);
        assert_eq!(r.empty_out, vec![1, 2]);
        assert_eq!(r.empty_in, vec![1, 2]);
        assert!(aux_digraph(&k6, &t33(), EdgeRef::new(0, 1), EdgeRef::new(1, 0)).is_err());
    }

    #[test]
    fn reports_and_shapes() {
        let complete = AuxDigraph::new(3, [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]).unwrap();
        let r = analyze(&complete);
        assert!(r.has_two_cycle && r.symmetric);
        assert_eq!(r.second_out_neighborhoods[0], vec![1, 2, 3]);
        let one = AuxDigraph::new(2, [(1, 2)]).unwrap();
        assert!(!analyze(&one).symmetric);

        let x12 = ColorSet::full(2);
        let neg = AuxDigraph::new(2, [(1, 2), (2, 1)]).unwrap();
        assert!(expected_shape_check(&neg, Shape::NegativeSender(x12)));
        let loops = AuxDigraph::new(3, [(1, 1), (2, 2), (3, 3)]).unwrap();
        assert!(expected_shape_check(&loops, Shape::PositiveSender(ColorSet::full(3))));
        let all = AuxDigraph::new(2, [(1, 1), (1, 2), (2, 1), (2, 2)]).unwrap();
        assert!(!expected_shape_check(&all, Shape::NegativeSender(x12)));
        assert!(expected_shape_check(&all, Shape::Determiner(x12)));
    }
}
