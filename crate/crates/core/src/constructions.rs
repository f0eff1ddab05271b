//! Gadget compositions as deterministic graph surgery.
//!
//! Labels follow one convention throughout: the host (or skeleton) keeps
//! its labels, named skeleton vertices come next, and each gadget copy adds
//! its remaining vertices after everything built so far, copies taken in
//! canonical edge order of whatever they hang off. Every result records the
//! [`Construction`] that produced it and can be rebuilt from it.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{extend, is_minimal, CliqueTuple, Coloring};
use crate::error::{Error, Result};
use crate::gadget::{GadgetCertificate, GadgetKind, Polarity};
use crate::graph::{complete_graph, identify, matching, path_graph, EdgeRef, Graph, Orientation, SurgeryMap};
use crate::hyper::{all_patterns, OrientedHypergraph, PatternSet};

/// A graph with two marked edges `e` and `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalPair {
    pub graph: Graph,
    pub e: EdgeRef,
    pub f: EdgeRef,
}

impl SignalPair {
    pub fn new(graph: Graph, e: EdgeRef, f: EdgeRef) -> Result<Self> {
        graph.require_edge(e)?;
        graph.require_edge(f)?;
        if e.normalized() == f.normalized() {
            return Err(Error::Precondition(format!("signal edges coincide ({e})")));
        }
        Ok(SignalPair { graph, e, f })
    }

    fn shared(&self, what: &str) -> Result<usize> {
        self.e.shared_vertex(self.f).ok_or_else(|| {
            Error::Precondition(format!("{what}: signal edges {} and {} must share a vertex", self.e, self.f))
        })
    }
}

/// A graph carrying the marked path `p-a-b-c-d` (or `a-b-c-d` without `pa`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathGadget {
    pub graph: Graph,
    pub pa: Option<EdgeRef>,
    pub ab: EdgeRef,
    pub bc: EdgeRef,
    pub cd: EdgeRef,
}

impl PathGadget {
    /// `[p, a, b, c, d]`, with `p` absent when `pa` is.
    fn vertices(&self) -> Result<(Option<usize>, [usize; 4])> {
        let malformed = || Error::Construction("marked edges do not form a path".into());
        let b = self.ab.shared_vertex(self.bc).ok_or_else(malformed)?;
        let c = self.bc.shared_vertex(self.cd).ok_or_else(malformed)?;
        let a = self.ab.other(b);
        let d = self.cd.other(c);
        if b == c || a == c || a == d || b == d {
            return Err(malformed());
        }
        let p = match self.pa {
            Some(pa) => {
                if !pa.contains(a) {
                    return Err(malformed());
                }
                let p = pa.other(a);
                if [b, c, d].contains(&p) {
                    return Err(malformed());
                }
                Some(p)
            }
            None => None,
        };
        Ok((p, [a, b, c, d]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeeMode {
    /// `u = a`, `v = b`, each host edge is `cd`.
    Case1,
    /// `uv = pa`, each host edge is `cd`.
    Case2,
}

/// Everything needed to rebuild a composed graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Construction {
    Attach {
        host: Graph,
        target: EdgeRef,
        gadget: Graph,
        signal: EdgeRef,
    },
    Join {
        host: Graph,
        a: EdgeRef,
        b: EdgeRef,
        sender: SignalPair,
    },
    GlueOnPath {
        g1: Graph,
        path1: [usize; 3],
        g2: Graph,
        path2: [usize; 3],
    },
    SymmetricDouble {
        s: SignalPair,
    },
    Claw {
        s: SignalPair,
        h: usize,
        d: usize,
    },
    ChainT {
        s: SignalPair,
        sc: SignalPair,
    },
    ChainTprime {
        s: SignalPair,
        sc: SignalPair,
    },
    StarAttachAll {
        f: Graph,
        r: Graph,
        signal: EdgeRef,
        except: Option<EdgeRef>,
    },
    PositiveFromNegative {
        s: SignalPair,
        q: usize,
    },
    DeterminerFromPositive {
        s: SignalPair,
        t: usize,
    },
    TwoLevelStar {
        h: Graph,
        s: SignalPair,
    },
    TeeStar {
        h: Graph,
        gadget: PathGadget,
        mode: TeeMode,
    },
    AssembleCore {
        f: Graph,
        x: usize,
        order: Vec<usize>,
        hyper: OrientedHypergraph,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedGadget {
    pub graph: Graph,
    pub tracked: BTreeMap<String, EdgeRef>,
    pub provenance: Construction,
}

impl ComposedGadget {
    pub fn edge(&self, name: &str) -> Result<EdgeRef> {
        self.tracked
            .get(name)
            .copied()
            .ok_or_else(|| Error::Construction(format!("no tracked edge named {name:?}")))
    }

    pub fn pair(&self, e: &str, f: &str) -> Result<SignalPair> {
        SignalPair::new(self.graph.clone(), self.edge(e)?, self.edge(f)?)
    }

    /// The `ab`, `bc`, `cd` (and `pa` when present) edges as a path gadget.
    pub fn path_gadget(&self) -> Result<PathGadget> {
        Ok(PathGadget {
            graph: self.graph.clone(),
            pa: self.tracked.get("pa").copied(),
            ab: self.edge("ab")?,
            bc: self.edge("bc")?,
            cd: self.edge("cd")?,
        })
    }

    pub fn replay(&self) -> Result<ComposedGadget> {
        build(self.provenance.clone())
    }
}

type Tracked = BTreeMap<String, EdgeRef>;

fn tracked(items: &[(&str, EdgeRef)]) -> Tracked {
    items.iter().map(|&(k, e)| (k.to_string(), e)).collect()
}

/// Runs a recorded construction.
pub fn build(c: Construction) -> Result<ComposedGadget> {
    let (graph, tracked) = match &c {
        Construction::Attach { host, target, gadget, signal } => build_attach(host, *target, gadget, *signal)?,
        Construction::Join { host, a, b, sender } => {
            let (g, map) = join_on(host, *a, *b, sender)?;
            (g, tracked(&[("a", map.left_edge(*a)), ("b", map.left_edge(*b))]))
        }
        Construction::GlueOnPath { g1, path1, g2, path2 } => build_glue(g1, *path1, g2, *path2)?,
        Construction::SymmetricDouble { s } => build_symmetric_double(s)?,
        Construction::Claw { s, h, d } => build_claw(s, *h, *d)?,
        Construction::ChainT { s, sc } => build_chain_t(s, sc)?,
        Construction::ChainTprime { s, sc } => build_chain_tprime(s, sc)?,
        Construction::StarAttachAll { f, r, signal, except } => build_star_attach_all(f, r, *signal, *except)?,
        Construction::PositiveFromNegative { s, q } => build_positive_from_negative(s, *q)?,
        Construction::DeterminerFromPositive { s, t } => build_determiner_from_positive(s, *t)?,
        Construction::TwoLevelStar { h, s } => build_two_level_star(h, s)?,
        Construction::TeeStar { h, gadget, mode } => build_tee_star(h, gadget, *mode)?,
        Construction::AssembleCore { f, x, order, hyper } => build_core(f, *x, order, hyper)?,
    };
    for (name, e) in &tracked {
        if !graph.contains_edge(*e) {
            return Err(Error::Construction(format!("tracked edge {name} = {e} missing from the result")));
        }
    }
    Ok(ComposedGadget {
        graph,
        tracked,
        provenance: c,
    })
}

/// Merges `signal` of `gadget` onto `target` of `host`, endpoints paired in
/// the order given.
pub fn attach(host: &Graph, target: EdgeRef, gadget: &Graph, signal: EdgeRef) -> Result<ComposedGadget> {
    build(Construction::Attach {
        host: host.clone(),
        target,
        gadget: gadget.clone(),
        signal,
    })
}

fn attach_on(host: &Graph, target: EdgeRef, gadget: &Graph, signal: EdgeRef) -> Result<(Graph, SurgeryMap)> {
    host.require_edge(target)?;
    gadget.require_edge(signal)?;
    identify(host, gadget, &Orientation::Aligned.pairs(target, signal))
}

fn build_attach(host: &Graph, target: EdgeRef, gadget: &Graph, signal: EdgeRef) -> Result<(Graph, Tracked)> {
    let (g, map) = attach_on(host, target, gadget, signal)?;
    Ok((g, tracked(&[("e", map.left_edge(target))])))
}

/// Vertex pairs identifying `a` with `e` and `b` with `f`. When both pairs
/// share a vertex the shared vertices are matched; otherwise each edge is
/// matched smaller endpoint to smaller endpoint.
fn join_pairs(a: EdgeRef, b: EdgeRef, e: EdgeRef, f: EdgeRef) -> Vec<(usize, usize)> {
    match (a.shared_vertex(b), e.shared_vertex(f)) {
        (Some(h0), Some(g0)) => vec![(h0, g0), (a.other(h0), e.other(g0)), (b.other(h0), f.other(g0))],
        _ => {
            let (a, b, e, f) = (a.normalized(), b.normalized(), e.normalized(), f.normalized());
            vec![(a.u, e.u), (a.v, e.v), (b.u, f.u), (b.v, f.v)]
        }
    }
}

/// Joins host edges `a` and `b` by `sender`, identifying `a` with `e` and
/// `b` with `f`.
pub fn join(host: &Graph, a: EdgeRef, b: EdgeRef, sender: &SignalPair) -> Result<ComposedGadget> {
    build(Construction::Join {
        host: host.clone(),
        a,
        b,
        sender: sender.clone(),
    })
}

fn join_on(host: &Graph, a: EdgeRef, b: EdgeRef, s: &SignalPair) -> Result<(Graph, SurgeryMap)> {
    host.require_edge(a)?;
    host.require_edge(b)?;
    if a.normalized() == b.normalized() {
        return Err(Error::Precondition(format!("joined host edges coincide ({a})")));
    }
    s.graph.require_edge(s.e)?;
    s.graph.require_edge(s.f)?;
    if s.e.normalized() == s.f.normalized() {
        return Err(Error::Precondition(format!("signal edges coincide ({})", s.e)));
    }
    identify(host, &s.graph, &join_pairs(a, b, s.e, s.f))
}

/// `g1` and `g2` with `a1=a2`, `b1=b2`, `c1=c2`. Each `a_i b_i c_i` must be
/// a path whose ends are not adjacent.
pub fn glue_on_path(g1: &Graph, path1: [usize; 3], g2: &Graph, path2: [usize; 3]) -> Result<ComposedGadget> {
    build(Construction::GlueOnPath {
        g1: g1.clone(),
        path1,
        g2: g2.clone(),
        path2,
    })
}

fn check_open_path(g: &Graph, [a, b, c]: [usize; 3]) -> Result<()> {
    for v in [a, b, c] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
    }
    if a == b || b == c || a == c {
        return Err(Error::Precondition(format!("path {a}-{b}-{c} repeats a vertex")));
    }
    g.require_edge(EdgeRef::new(a, b))?;
    g.require_edge(EdgeRef::new(b, c))?;
    if g.has_edge(a, c) {
        return Err(Error::Precondition(format!("{a} and {c} are adjacent, so {a}-{b}-{c} lies in a triangle")));
    }
    Ok(())
}

fn build_glue(g1: &Graph, p1: [usize; 3], g2: &Graph, p2: [usize; 3]) -> Result<(Graph, Tracked)> {
    check_open_path(g1, p1)?;
    check_open_path(g2, p2)?;
    let pairs = [(p1[0], p2[0]), (p1[1], p2[1]), (p1[2], p2[2])];
    let (g, map) = identify(g1, g2, &pairs)?;
    Ok((
        g,
        tracked(&[
            ("ab", map.left_edge(EdgeRef::new(p1[0], p1[1]))),
            ("bc", map.left_edge(EdgeRef::new(p1[1], p1[2]))),
        ]),
    ))
}

/// Path `abc` joined by one copy of `s` as `(ab, bc) = (e, f)` and another
/// as `(ab, bc) = (f, e)`.
pub fn symmetric_double(s: &SignalPair) -> Result<ComposedGadget> {
    build(Construction::SymmetricDouble { s: s.clone() })
}

fn check_open_signals(s: &SignalPair, what: &str) -> Result<()> {
    let b = s.shared(what)?;
    let (a, c) = (s.e.other(b), s.f.other(b));
    if s.graph.has_edge(a, c) {
        return Err(Error::Precondition(format!("{what}: signal edges lie in a triangle")));
    }
    Ok(())
}

fn build_symmetric_double(s: &SignalPair) -> Result<(Graph, Tracked)> {
    check_open_signals(s, "symmetric double")?;
    let path = path_graph(2)?;
    let (ab, bc) = (EdgeRef::new(0, 1), EdgeRef::new(1, 2));
    let (g, _) = join_on(&path, ab, bc, s)?;
    let swapped = SignalPair {
        graph: s.graph.clone(),
        e: s.f,
        f: s.e,
    };
    let (g, _) = join_on(&g, ab, bc, &swapped)?;
    Ok((g, tracked(&[("ab", ab), ("bc", bc)])))
}

/// `K_h` on `v_1..v_h` (labels `0..h`), then `x = h`, `y = h+1`. Each of
/// `x v_1 .. x v_d` is joined to `xy` by a copy of `s` (`xy = e`), and the
/// bare edge `x v_{d+1}` is added.
pub fn claw(s: &SignalPair, h: usize, d: usize) -> Result<ComposedGadget> {
    build(Construction::Claw { s: s.clone(), h, d })
}

fn build_claw(s: &SignalPair, h: usize, d: usize) -> Result<(Graph, Tracked)> {
    if h <= d {
        return Err(Error::Precondition(format!("claw needs h > d, got h = {h}, d = {d}")));
    }
    s.shared("claw")?;
    let (x, y) = (h, h + 1);
    let mut edges: Vec<(usize, usize)> = complete_graph(h)?.edges().to_vec();
    edges.push((x, y));
    edges.extend((0..=d).map(|i| (i, x)));
    let mut g = Graph::from_edges(h + 2, edges)?;
    let xy = EdgeRef::new(x, y);
    for i in 0..d {
        g = join_on(&g, xy, EdgeRef::new(x, i), s)?.0;
    }
    Ok((g, tracked(&[("xy", xy), ("xz", EdgeRef::new(x, d))])))
}

/// Path `abcd`: `s` joins `ab = e`, `bc = f`; `sc` joins `bc = e`, `cd = f`.
pub fn chain_t(s: &SignalPair, sc: &SignalPair) -> Result<ComposedGadget> {
    build(Construction::ChainT {
        s: s.clone(),
        sc: sc.clone(),
    })
}

fn build_chain_t(s: &SignalPair, sc: &SignalPair) -> Result<(Graph, Tracked)> {
    s.shared("chain")?;
    sc.shared("chain")?;
    let (ab, bc, cd) = (EdgeRef::new(0, 1), EdgeRef::new(1, 2), EdgeRef::new(2, 3));
    let g = path_graph(3)?;
    let g = join_on(&g, ab, bc, s)?.0;
    let g = join_on(&g, bc, cd, sc)?.0;
    Ok((g, tracked(&[("ab", ab), ("bc", bc), ("cd", cd)])))
}

/// Path `pabcd`: `sc` on `(pa, ab)`, `s` on `(ab, bc)`, `sc` on `(bc, cd)`.
pub fn chain_tprime(s: &SignalPair, sc: &SignalPair) -> Result<ComposedGadget> {
    build(Construction::ChainTprime {
        s: s.clone(),
        sc: sc.clone(),
    })
}

fn build_chain_tprime(s: &SignalPair, sc: &SignalPair) -> Result<(Graph, Tracked)> {
    s.shared("chain")?;
    sc.shared("chain")?;
    let [pa, ab, bc, cd] = [0, 1, 2, 3].map(|i| EdgeRef::new(i, i + 1));
    let g = path_graph(4)?;
    let g = join_on(&g, pa, ab, sc)?.0;
    let g = join_on(&g, ab, bc, s)?.0;
    let g = join_on(&g, bc, cd, sc)?.0;
    Ok((g, tracked(&[("pa", pa), ("ab", ab), ("bc", bc), ("cd", cd)])))
}

/// A copy of `r` attached by `signal` to every edge of `f` but `except`.
pub fn star_attach_all(f: &Graph, r: &Graph, signal: EdgeRef, except: Option<EdgeRef>) -> Result<ComposedGadget> {
    build(Construction::StarAttachAll {
        f: f.clone(),
        r: r.clone(),
        signal,
        except,
    })
}

fn build_star_attach_all(f: &Graph, r: &Graph, signal: EdgeRef, except: Option<EdgeRef>) -> Result<(Graph, Tracked)> {
    r.require_edge(signal)?;
    let skip = except.map(|e| f.require_edge(e)).transpose()?;
    let mut g = f.clone();
    for (i, &(u, v)) in f.edges().iter().enumerate() {
        if Some(i) != skip {
            g = attach_on(&g, EdgeRef::new(u, v), r, signal)?.0;
        }
    }
    Ok((g, except.map(|e| tracked(&[("e", e)])).unwrap_or_default()))
}

/// `r` attached to every edge of `g_min` except `e`, from a certified
/// determiner and a graph minimal for the tuple restricted to its colors.
pub fn complement_determiner(r: &GadgetCertificate, g_min: &Graph, e: EdgeRef) -> Result<ComposedGadget> {
    let GadgetKind::Determiner { e: signal } = r.spec.kind else {
        return Err(Error::Precondition("certificate is not for a determiner".into()));
    };
    g_min.require_edge(e)?;
    let restricted = r.tuple.restrict(&r.spec.x)?;
    if !is_minimal(g_min, &restricted)? {
        return Err(Error::Precondition(format!("host is not Ramsey-minimal for ({restricted})")));
    }
    star_attach_all(g_min, &r.graph, signal, Some(e))
}

/// Matching `e_1..e_{q+1}` (edge `e_i` on `2i-2, 2i-1`) with every pair
/// `i < j` other than `(q, q+1)` joined by a copy of `s`.
pub fn positive_from_negative(s: &SignalPair, q: usize) -> Result<ComposedGadget> {
    build(Construction::PositiveFromNegative { s: s.clone(), q })
}

/// [`positive_from_negative`] from a certified negative `[q]`-sender.
pub fn positive_from_negative_certified(cert: &GadgetCertificate) -> Result<ComposedGadget> {
    let GadgetKind::Sender { e, f, polarity: Polarity::Negative } = cert.spec.kind else {
        return Err(Error::Precondition("certificate is not for a negative sender".into()));
    };
    if cert.spec.x.len() < 2 || !cert.spec.x.is_full() {
        return Err(Error::Precondition(format!("sender colors {} must be the whole palette", cert.spec.x)));
    }
    positive_from_negative(&SignalPair::new(cert.graph.clone(), e, f)?, cert.tuple.q())
}

fn build_positive_from_negative(s: &SignalPair, q: usize) -> Result<(Graph, Tracked)> {
    if q < 2 {
        return Err(Error::Precondition(format!("needs at least 2 colors, got {q}")));
    }
    let edge = |i: usize| EdgeRef::new(2 * i, 2 * i + 1);
    let mut g = matching(q + 1)?;
    for i in 0..=q {
        for j in i + 1..=q {
            if (i, j) != (q - 1, q) {
                g = join_on(&g, edge(i), edge(j), s)?.0;
            }
        }
    }
    Ok((g, tracked(&[("e", edge(q - 1)), ("f", edge(q))])))
}

/// `K_t` on `0..t` and a disjoint edge `e = (t, t+1)` joined to every edge
/// of the clique by a copy of `s` (`e` to `e`).
pub fn determiner_from_positive(s: &SignalPair, t: usize) -> Result<ComposedGadget> {
    build(Construction::DeterminerFromPositive { s: s.clone(), t })
}

/// [`determiner_from_positive`] from a certified positive sender.
pub fn determiner_from_positive_certified(cert: &GadgetCertificate, t: usize) -> Result<ComposedGadget> {
    let GadgetKind::Sender { e, f, polarity: Polarity::Positive } = cert.spec.kind else {
        return Err(Error::Precondition("certificate is not for a positive sender".into()));
    };
    determiner_from_positive(&SignalPair::new(cert.graph.clone(), e, f)?, t)
}

fn build_determiner_from_positive(s: &SignalPair, t: usize) -> Result<(Graph, Tracked)> {
    if t < 2 {
        return Err(Error::Precondition(format!("clique order must be at least 2, got {t}")));
    }
    let k = complete_graph(t)?;
    let e = EdgeRef::new(t, t + 1);
    let mut edges = k.edges().to_vec();
    edges.push((t, t + 1));
    let mut g = Graph::from_edges(t + 2, edges)?;
    for &(u, v) in k.edges() {
        g = join_on(&g, e, EdgeRef::new(u, v), s)?.0;
    }
    Ok((g, tracked(&[("e", e)])))
}

/// `h` on `[m]`, `u = m`, `v = m+1`, edge `uv`, and `vx` for every `x` but
/// the last vertex. For each edge `xy` of `h` with `x < y`, one copy of `s`
/// joins `uv = e` to `vx = f` and another joins `vx = e` to `xy = f`.
pub fn two_level_star(h: &Graph, s: &SignalPair) -> Result<ComposedGadget> {
    build(Construction::TwoLevelStar {
        h: h.clone(),
        s: s.clone(),
    })
}

fn star_skeleton(h: &Graph, spokes: bool) -> Result<(Graph, EdgeRef)> {
    let m = h.n();
    let (u, v) = (m, m + 1);
    let mut edges = h.edges().to_vec();
    edges.push((u, v));
    if spokes {
        edges.extend((0..m.saturating_sub(1)).map(|x| (x, v)));
    }
    Ok((Graph::from_edges(m + 2, edges)?, EdgeRef::new(u, v)))
}

fn build_two_level_star(h: &Graph, s: &SignalPair) -> Result<(Graph, Tracked)> {
    s.shared("two-level star")?;
    let (mut g, uv) = star_skeleton(h, true)?;
    for &(x, y) in h.edges() {
        let vx = EdgeRef::new(uv.v, x);
        g = join_on(&g, uv, vx, s)?.0;
        g = join_on(&g, vx, EdgeRef::new(x, y), s)?.0;
    }
    Ok((g, tracked(&[("uv", uv)])))
}

/// `h` on `[m]` plus the edge `uv` (`u = m`, `v = m+1`) with one copy of
/// `gadget` per edge `xy` of `h`, `c = x` and `d = y`.
pub fn tee_star(h: &Graph, gadget: &PathGadget, mode: TeeMode) -> Result<ComposedGadget> {
    build(Construction::TeeStar {
        h: h.clone(),
        gadget: gadget.clone(),
        mode,
    })
}

fn build_tee_star(h: &Graph, t: &PathGadget, mode: TeeMode) -> Result<(Graph, Tracked)> {
    for e in [t.ab, t.bc, t.cd].into_iter().chain(t.pa) {
        t.graph.require_edge(e)?;
    }
    let (p, [a, b, c, d]) = t.vertices()?;
    let (uu, vv) = match mode {
        TeeMode::Case1 => (a, b),
        TeeMode::Case2 => (
            p.ok_or_else(|| Error::Construction("case 2 needs a tracked pa edge".into()))?,
            a,
        ),
    };
    let (mut g, uv) = star_skeleton(h, false)?;
    for &(x, y) in h.edges() {
        g = identify(&g, &t.graph, &[(uv.u, uu), (uv.v, vv), (x, c), (y, d)])?.0;
    }
    Ok((g, tracked(&[("uv", uv)])))
}

/// `Φ`: the colorings of the edges `x order[i]` that extend to no free
/// coloring of `f`. Fails when `deg(x)` exceeds `cap`.
pub fn forbidden_patterns(f: &Graph, t: &CliqueTuple, x: usize, order: &[usize], cap: usize) -> Result<PatternSet> {
    check_order(f, x, order)?;
    if order.len() > cap {
        return Err(Error::CapExceeded {
            what: "neighborhood size",
            cap,
        });
    }
    let edges: Vec<EdgeRef> = order.iter().map(|&y| EdgeRef::new(x, y)).collect();
    let patterns: Vec<_> = all_patterns(t.q(), order.len()).collect();
    let forbidden = patterns
        .into_par_iter()
        .map(|p| {
            let fixed: Vec<_> = edges.iter().copied().zip(p.iter().copied()).collect();
            let partial = Coloring::partial(f, &fixed)?;
            match extend(f, t, &partial) {
                Ok(Some(_)) => Ok(None),
                Ok(None) | Err(Error::PartialViolates { .. }) => Ok(Some(p)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PatternSet::new(t.q(), order.len(), forbidden.into_iter().flatten())
}

fn check_order(f: &Graph, x: usize, order: &[usize]) -> Result<()> {
    if x >= f.n() {
        return Err(Error::VertexOutOfRange { vertex: x, n: f.n() });
    }
    let given: BTreeSet<usize> = order.iter().copied().collect();
    let actual: BTreeSet<usize> = f.neighbors(x).collect();
    if given.len() != order.len() || given != actual {
        return Err(Error::Precondition(format!("order {order:?} is not an ordering of the neighborhood of {x}")));
    }
    Ok(())
}

/// One copy of `f` per arc, `order[i]` identified with the arc's `i`-th
/// vertex and every copy of `x` merged into `x0`. Hypergraph vertices keep
/// their labels, `x0` is next, and the copies follow in arc order.
pub fn assemble_core(f: &Graph, x: usize, order: &[usize], hyper: &OrientedHypergraph) -> Result<ComposedGadget> {
    build(Construction::AssembleCore {
        f: f.clone(),
        x,
        order: order.to_vec(),
        hyper: hyper.clone(),
    })
}

fn build_core(f: &Graph, x: usize, order: &[usize], hyper: &OrientedHypergraph) -> Result<(Graph, Tracked)> {
    check_order(f, x, order)?;
    if hyper.ell() != order.len() {
        return Err(Error::Precondition(format!(
            "hypergraph is {}-uniform but x has degree {}",
            hyper.ell(),
            order.len()
        )));
    }
    let x0 = hyper.n();
    let mut g = Graph::empty(x0 + 1)?;
    for arc in hyper.arcs() {
        let mut pairs: Vec<(usize, usize)> = arc.iter().copied().zip(order.iter().copied()).collect();
        pairs.push((x0, x));
        g = identify(&g, f, &pairs)?.0;
    }
    let marks = match hyper.distinguished() {
        Some((u, w)) => tracked(&[("e", EdgeRef::new(x0, u)), ("f", EdgeRef::new(x0, w))]),
        None => Tracked::new(),
    };
    Ok((g, marks))
}
