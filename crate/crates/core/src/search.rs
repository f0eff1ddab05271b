//! Exhaustive searches: Ramsey numbers of small tuples, claw thresholds,
//! isomorph-free graph generation, gadget hunting and Ramsey-minimal
//! enumeration.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{arrows, extend, is_minimal, CliqueTuple, Color, ColorSet, Coloring};
use crate::constructions::{claw, SignalPair};
use crate::error::{Error, Result};
use crate::gadget::{verify, GadgetCertificate, GadgetSpec, Polarity, Verdict};
use crate::graph::{canonical_form, canonical_form_colored, complete_graph, EdgeRef, Graph};

/// Largest vertex count for [`nonisomorphic_graphs`].
pub const GENERATION_CAP: usize = 9;

/// Least `n <= cap` with `K_n` arrowing `t`.
pub fn ramsey_number(t: &CliqueTuple, cap: usize) -> Result<usize> {
    let start = t.orders().iter().copied().min().unwrap_or(1);
    for n in start..=cap {
        if arrows(&complete_graph(n)?, t)?.arrows {
            return Ok(n);
        }
    }
    Err(Error::CapExceeded { what: "ramsey number search", cap })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClawScan {
    pub h: usize,
    pub color: Color,
    /// `feasible[d]`: some free coloring of `claw(h, d)` gives `xy` the color.
    pub feasible: Vec<bool>,
    /// Largest feasible `d`.
    pub k: Option<usize>,
}

/// Scans `d = 0..h` for free colorings of `claw(s, h, d)` with `xy`
/// colored `color`. `h` defaults to `r(t) - 1`.
pub fn claw_threshold(t: &CliqueTuple, s: &SignalPair, color: Color, h: Option<usize>) -> Result<ClawScan> {
    if color == 0 || color as usize > t.q() {
        return Err(Error::InvalidColorSet(format!("color {color} outside [{}]", t.q())));
    }
    let h = match h {
        Some(h) => h,
        None => ramsey_number(t, 10)? - 1,
    };
    let feasible = (0..h)
        .into_par_iter()
        .map(|d| {
            let g = claw(s, h, d)?;
            let partial = Coloring::partial(&g.graph, &[(g.edge("xy")?, color)])?;
            Ok(extend(&g.graph, t, &partial)?.is_some())
        })
        .collect::<Result<Vec<bool>>>()?;
    let k = feasible.iter().rposition(|&f| f);
    Ok(ClawScan { h, color, feasible, k })
}

/// Every graph on `n` vertices up to isomorphism, in canonical form and
/// sorted, built by adding a vertex to each graph on `n - 1` vertices in
/// every possible way.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > GENERATION_CAP {
        return Err(Error::CapExceeded { what: "graph generation vertex count", cap: GENERATION_CAP });
    }
    let mut level = vec![Graph::empty(0)?];
    for m in 1..=n {
        let next: HashSet<Graph> = level
            .par_iter()
            .flat_map_iter(|g| {
                (0u32..1 << (m - 1)).map(move |mask| {
                    let mut edges = g.edges().to_vec();
                    edges.extend((0..m - 1).filter(|&v| mask >> v & 1 == 1).map(|v| (v, m - 1)));
                    canonical_form(&Graph::from_edges(m, edges)?)
                })
            })
            .collect::<Result<_>>()?;
        let mut sorted: Vec<Graph> = next.into_iter().collect();
        sorted.sort();
        level = sorted;
    }
    Ok(level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SearchShape {
    Determiner { x: ColorSet },
    Sender { x: ColorSet, polarity: Polarity },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSearchReport {
    pub certificates: Vec<GadgetCertificate>,
    pub graphs: u64,
    /// Candidates verified.
    pub examined: u64,
    /// Candidates left unverified because the budget ran out.
    pub skipped: u64,
    pub budget_exhausted: bool,
}

/// Signal choices of `g` up to automorphism, in canonical edge order.
fn candidates(g: &Graph, shape: SearchShape) -> Result<Vec<GadgetSpec>> {
    let edges: Vec<EdgeRef> = (0..g.edge_count()).map(|i| g.edge(i)).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    match shape {
        SearchShape::Determiner { x } => {
            for &e in &edges {
                let mut colors = vec![0u32; g.n()];
                colors[e.u] = 1;
                colors[e.v] = 1;
                if seen.insert(canonical_form_colored(g, &colors)?) {
                    out.push(GadgetSpec::determiner(x, e));
                }
            }
        }
        SearchShape::Sender { x, polarity } => {
            for &e in &edges {
                for &f in edges.iter().filter(|&&f| f != e) {
                    let mut colors = vec![0u32; g.n()];
                    for v in [e.u, e.v] {
                        colors[v] |= 1;
                    }
                    for v in [f.u, f.v] {
                        colors[v] |= 2;
                    }
                    if seen.insert(canonical_form_colored(g, &colors)?) {
                        out.push(GadgetSpec::sender(x, e, f, polarity));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Verifies every candidate signal choice of every graph from `source`,
/// keeping the certified ones in input order. `budget` caps the number of
/// verifications.
pub fn gadget_search(
    t: &CliqueTuple,
    shape: SearchShape,
    source: impl IntoIterator<Item = Graph>,
    budget: Option<u64>,
) -> Result<GadgetSearchReport> {
    let mut work = Vec::new();
    let mut graphs = 0;
    for g in source {
        graphs += 1;
        for spec in candidates(&g, shape)? {
            work.push((g.clone(), spec));
        }
    }
    let total = work.len() as u64;
    let limit = budget.map_or(total, |b| b.min(total));
    work.truncate(limit as usize);
    let verdicts = work
        .par_iter()
        .map(|(g, spec)| verify(g, t, spec))
        .collect::<Result<Vec<Verdict>>>()?;
    let certificates = verdicts
        .into_iter()
        .filter_map(|v| match v {
            Verdict::Certified(c) => Some(c),
            Verdict::Refused(_) => None,
        })
        .collect();
    Ok(GadgetSearchReport {
        certificates,
        graphs,
        examined: limit,
        skipped: total - limit,
        budget_exhausted: limit < total,
    })
}

/// Largest `n_max` for [`minimal_ramsey_enumeration`].
pub const MINIMAL_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalEnumeration {
    /// `r(t)`, when at most `n_max`.
    pub ramsey_number: Option<usize>,
    /// Edges any arrowing graph needs: `C(r, 2)`.
    pub edge_floor: Option<usize>,
    pub candidates: u64,
    /// Canonical forms, sorted.
    pub graphs: Vec<Graph>,
}

/// All Ramsey-minimal graphs for `t` on at most `n_max` vertices without
/// isolated vertices, up to isomorphism. Graphs with fewer than `r(t)`
/// vertices or `C(r(t), 2)` edges cannot arrow and are skipped.
pub fn minimal_ramsey_enumeration(t: &CliqueTuple, n_max: usize) -> Result<MinimalEnumeration> {
    if n_max > MINIMAL_CAP {
        return Err(Error::CapExceeded { what: "minimal enumeration vertex count", cap: MINIMAL_CAP });
    }
    let r = match ramsey_number(t, n_max) {
        Ok(r) => r,
        Err(Error::CapExceeded { .. }) => {
            return Ok(MinimalEnumeration {
                ramsey_number: None,
                edge_floor: None,
                candidates: 0,
                graphs: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let floor = r * (r - 1) / 2;
    let mut pool = Vec::new();
    for n in r..=n_max {
        pool.extend(
            nonisomorphic_graphs(n)?
                .into_iter()
                .filter(|g| g.edge_count() >= floor && g.min_degree().unwrap_or(0) > 0),
        );
    }
    let keep = pool
        .par_iter()
        .map(|g| is_minimal(g, t))
        .collect::<Result<Vec<bool>>>()?;
    let graphs = pool.iter().zip(&keep).filter(|(_, &k)| k).map(|(g, _)| g.clone()).collect();
    Ok(MinimalEnumeration {
        ramsey_number: Some(r),
        edge_floor: Some(floor),
        candidates: pool.len() as u64,
        graphs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path_graph;

    fn t33() -> CliqueTuple {
        "3,3".parse().unwrap()
    }

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| nonisomorphic_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn ramsey_numbers() {
        assert_eq!(ramsey_number(&t33(), 8).unwrap(), 6);
        assert!(ramsey_number(&t33(), 5).is_err());
    }

    #[test]
    fn claw_with_a_path_stand_in() {
        let s = SignalPair::new(path_graph(2).unwrap(), EdgeRef::new(0, 1), EdgeRef::new(1, 2)).unwrap();
        let scan = claw_threshold(&t33(), &s, 1, None).unwrap();
        assert_eq!(scan.h, 5);
        assert!(scan.feasible[0]);
        assert!(scan.feasible.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn minimal_enumeration_small() {
        let r = minimal_ramsey_enumeration(&t33(), 6).unwrap();
        assert_eq!(r.graphs, vec![complete_graph(6).unwrap()]);
        assert!(minimal_ramsey_enumeration(&t33(), 5).unwrap().graphs.is_empty());
    }

    #[test]
    fn gadget_search_small() {
        let source: Vec<Graph> = (1..=4).flat_map(|n| nonisomorphic_graphs(n).unwrap()).collect();
        let full = SearchShape::Determiner { x: ColorSet::full(2) };
        let found = gadget_search(&t33(), full, source.clone(), None).unwrap();
        assert!(found.certificates.iter().any(|c| c.graph.edge_count() == 1));
        let neg = SearchShape::Sender { x: ColorSet::full(2), polarity: Polarity::Negative };
        assert!(gadget_search(&t33(), neg, source, None).unwrap().certificates.is_empty());
        let one = SearchShape::Determiner { x: ColorSet::new(2, [1]).unwrap() };
        assert!(gadget_search(&t33(), one, [complete_graph(6).unwrap()], None).unwrap().certificates.is_empty());
    }
}
