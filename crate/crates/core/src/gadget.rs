//! Verification of determiner and sender gadgets.
//!
//! A determiner `(G, e)` for a color set `X` is a graph that does not arrow
//! the tuple and whose free colorings give `e` exactly the colors of `X`. A
//! sender `(G, e, f)` is a non-arrowing graph whose free colorings realize on
//! `(e, f)` exactly the distinct pairs from `X` (negative) or exactly the
//! equal pairs from `X` (positive).
//!
//! Safeness is only ever asserted through two structural facts: every
//! determiner is safe, and a sender is safe when its signal edges are at
//! distance at least three. Anything else is reported as unknown.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{extend, is_free, CliqueTuple, Color, ColorSet, Coloring};
use crate::error::{Error, Result};
use crate::graph::{cliques_of_size, edge_distance, EdgeRef, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GadgetKind {
    Determiner { e: EdgeRef },
    Sender { e: EdgeRef, f: EdgeRef, polarity: Polarity },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub x: ColorSet,
    #[serde(flatten)]
    pub kind: GadgetKind,
}

impl GadgetSpec {
    pub fn determiner(x: ColorSet, e: EdgeRef) -> Self {
        GadgetSpec { x, kind: GadgetKind::Determiner { e } }
    }

    pub fn sender(x: ColorSet, e: EdgeRef, f: EdgeRef, polarity: Polarity) -> Self {
        GadgetSpec { x, kind: GadgetKind::Sender { e, f, polarity } }
    }

    /// Signal colors (one per signal edge) that free colorings must realize.
    pub fn required(&self) -> Vec<Vec<Color>> {
        match self.kind {
            GadgetKind::Determiner { .. } => self.x.iter().map(|c| vec![c]).collect(),
            GadgetKind::Sender { polarity, .. } => all_pairs(self.x.q())
                .filter(|&(i, j)| self.x.contains(i) && self.x.contains(j) && ((i == j) == (polarity == Polarity::Positive)))
                .map(|(i, j)| vec![i, j])
                .collect(),
        }
    }

    pub fn signal_edges(&self) -> Vec<EdgeRef> {
        match self.kind {
            GadgetKind::Determiner { e } => vec![e],
            GadgetKind::Sender { e, f, .. } => vec![e, f],
        }
    }
}

fn all_pairs(q: usize) -> impl Iterator<Item = (Color, Color)> {
    (1..=q as Color).flat_map(move |i| (1..=q as Color).map(move |j| (i, j)))
}

/// Which gadget property a refused candidate fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// The graph arrows the tuple: no free coloring at all.
    NonRamsey,
    /// Some free coloring puts disallowed colors on the signal edges.
    DisallowedRealized,
    /// An allowed signal color (pair) is not realized by any free coloring.
    AllowedMissing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub axiom: Axiom,
    /// The offending signal color or pair, when there is one.
    pub colors: Vec<Color>,
    pub witness: Option<Coloring>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Safeness {
    Safe { basis: String },
    Unknown { reason: String },
}

impl Safeness {
    pub fn is_safe(&self) -> bool {
        matches!(self, Safeness::Safe { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalWitness {
    pub signal: Vec<Color>,
    pub coloring: Coloring,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetCertificate {
    pub tuple: CliqueTuple,
    pub graph: Graph,
    pub spec: GadgetSpec,
    pub witnesses: Vec<SignalWitness>,
    /// Signal colors (pairs) for which the extension search found nothing.
    pub exclusions: Vec<Vec<Color>>,
    pub safeness: Safeness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Certified(GadgetCertificate),
    Refused(Refusal),
}

impl Verdict {
    pub fn certificate(&self) -> Option<&GadgetCertificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refused(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            Verdict::Certified(_) => None,
            Verdict::Refused(r) => Some(r),
        }
    }
}

/// Colors `c` for which some free coloring has `e` colored `c`.
pub fn achievable_colors(g: &Graph, t: &CliqueTuple, e: EdgeRef) -> Result<ColorSet> {
    let found = signal_table(g, t, &[e])?;
    let mut s = ColorSet::empty(t.q());
    for k in found.keys() {
        s.insert(k[0]);
    }
    Ok(s)
}

/// Least free coloring for every assignment of colors to `signals`.
fn signal_table(g: &Graph, t: &CliqueTuple, signals: &[EdgeRef]) -> Result<BTreeMap<Vec<Color>, Coloring>> {
    for &e in signals {
        g.require_edge(e)?;
    }
    let mut keys: Vec<Vec<Color>> = vec![vec![]];
    for _ in signals {
        keys = keys.into_iter().flat_map(|k| t.colors().map(move |c| [k.clone(), vec![c]].concat())).collect();
    }
    let rows: Vec<Option<(Vec<Color>, Coloring)>> = keys
        .into_par_iter()
        .map(|k| {
            let fixed: Vec<(EdgeRef, Color)> = signals.iter().copied().zip(k.iter().copied()).collect();
            let partial = Coloring::partial(g, &fixed)?;
            match extend(g, t, &partial) {
                Ok(found) => Ok(found.map(|c| (k, c))),
                Err(Error::PartialViolates { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn check_spec(g: &Graph, t: &CliqueTuple, spec: &GadgetSpec) -> Result<()> {
    t.require_gadget()?;
    if spec.x.q() != t.q() {
        return Err(Error::InvalidColorSet(format!("set over [{}] for a {}-tuple", spec.x.q(), t.q())));
    }
    if spec.x.is_empty() {
        return Err(Error::InvalidColorSet("gadget color set must be non-empty".into()));
    }
    for e in spec.signal_edges() {
        g.require_edge(e)?;
    }
    if let GadgetKind::Sender { e, f, polarity } = spec.kind {
        if e.normalized() == f.normalized() {
            return Err(Error::Precondition(format!("signal edges coincide ({e})")));
        }
        if polarity == Polarity::Negative && spec.x.len() < 2 {
            return Err(Error::InvalidColorSet("a negative sender needs at least two colors".into()));
        }
    }
    Ok(())
}

/// Checks every gadget property of `(g, spec)`; refusals report the first
/// failing property in the order non-Ramsey, disallowed, missing.
pub fn verify(g: &Graph, t: &CliqueTuple, spec: &GadgetSpec) -> Result<Verdict> {
    check_spec(g, t, spec)?;
    let signals = spec.signal_edges();
    let table = signal_table(g, t, &signals)?;
    if table.is_empty() {
        return Ok(Verdict::Refused(Refusal {
            axiom: Axiom::NonRamsey,
            colors: vec![],
            witness: None,
            detail: format!("the graph arrows ({t}); it has no free coloring"),
        }));
    }
    let required = spec.required();
    if let Some((k, c)) = table.iter().find(|(k, _)| !required.contains(k)) {
        return Ok(Verdict::Refused(Refusal {
            axiom: Axiom::DisallowedRealized,
            colors: k.clone(),
            witness: Some(c.clone()),
            detail: format!("signal colors {k:?} are realized by a free coloring"),
        }));
    }
    if let Some(k) = required.iter().find(|k| !table.contains_key(*k)) {
        return Ok(Verdict::Refused(Refusal {
            axiom: Axiom::AllowedMissing,
            colors: k.clone(),
            witness: None,
            detail: format!("no free coloring realizes signal colors {k:?}"),
        }));
    }
    let mut keys: Vec<Vec<Color>> = vec![vec![]];
    for _ in &signals {
        keys = keys.into_iter().flat_map(|k| t.colors().map(move |c| [k.clone(), vec![c]].concat())).collect();
    }
    let exclusions = keys.into_iter().filter(|k| !table.contains_key(k)).collect();
    let witnesses = table
        .into_iter()
        .map(|(signal, coloring)| SignalWitness { signal, coloring })
        .collect();
    Ok(Verdict::Certified(GadgetCertificate {
        tuple: t.clone(),
        graph: g.clone(),
        spec: *spec,
        witnesses,
        exclusions,
        safeness: safeness_of(g, spec)?,
    }))
}

pub fn verify_determiner(g: &Graph, t: &CliqueTuple, e: EdgeRef, x: ColorSet) -> Result<Verdict> {
    verify(g, t, &GadgetSpec::determiner(x, e))
}

pub fn verify_sender(g: &Graph, t: &CliqueTuple, e: EdgeRef, f: EdgeRef, x: ColorSet, polarity: Polarity) -> Result<Verdict> {
    verify(g, t, &GadgetSpec::sender(x, e, f, polarity))
}

fn safeness_of(g: &Graph, spec: &GadgetSpec) -> Result<Safeness> {
    Ok(match spec.kind {
        GadgetKind::Determiner { .. } => Safeness::Safe { basis: "every set-determiner is safe".into() },
        GadgetKind::Sender { e, f, .. } => match edge_distance(g, e, f)? {
            Some(d) if d < 3 => Safeness::Unknown {
                reason: format!("signal edges at distance {d}; safeness is only known from distance 3"),
            },
            d => Safeness::Safe {
                basis: format!(
                    "sender with signal edges at distance {}",
                    d.map_or("infinity".to_string(), |d| d.to_string())
                ),
            },
        },
    })
}

/// Safeness of a gadget that must verify first.
pub fn structural_safeness(g: &Graph, t: &CliqueTuple, spec: &GadgetSpec) -> Result<Safeness> {
    match verify(g, t, spec)? {
        Verdict::Certified(c) => Ok(c.safeness),
        Verdict::Refused(r) => Err(Error::Precondition(format!("gadget does not verify: {}", r.detail))),
    }
}

impl GadgetCertificate {
    /// Re-checks every witness and every exclusion from scratch.
    pub fn revalidate(&self) -> Result<bool> {
        let g = &self.graph;
        let t = &self.tuple;
        check_spec(g, t, &self.spec)?;
        let signals = self.spec.signal_edges();
        let required = self.spec.required();
        if self.witnesses.len() != required.len() {
            return Ok(false);
        }
        for w in &self.witnesses {
            if !required.contains(&w.signal) || !is_free(g, &w.coloring, t)? {
                return Ok(false);
            }
            for (&e, &c) in signals.iter().zip(&w.signal) {
                if w.coloring.color_of(g, e)? != c {
                    return Ok(false);
                }
            }
        }
        let q = t.q();
        if self.exclusions.len() + required.len() != q.pow(signals.len() as u32) {
            return Ok(false);
        }
        for k in &self.exclusions {
            if required.contains(k) {
                return Ok(false);
            }
            let fixed: Vec<(EdgeRef, Color)> = signals.iter().copied().zip(k.iter().copied()).collect();
            if extend(g, t, &Coloring::partial(g, &fixed)?)?.is_some() {
                return Ok(false);
            }
        }
        Ok(self.safeness == safeness_of(g, &self.spec)?)
    }
}

/// First triangle of `g` that is not inside any of `sides`. Some clique on
/// three or more vertices escapes every side exactly when some triangle
/// does, since a clique leaving every side has two vertices missing from
/// different sides and any third vertex completes an escaping triangle.
pub fn escaping_clique(g: &Graph, sides: &[Vec<usize>]) -> Option<Vec<usize>> {
    let member: Vec<Vec<bool>> = sides
        .iter()
        .map(|s| {
            let mut m = vec![false; g.n()];
            for &v in s {
                m[v] = true;
            }
            m
        })
        .collect();
    cliques_of_size(g, 3).find(|k| !member.iter().any(|m| k.iter().all(|&v| m[v])))
}
