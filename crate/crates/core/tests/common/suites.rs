//! Randomized instance checks shared by the property tests and the
//! acceptance target. Each returns `Err` with a description on failure.

use std::collections::{BTreeSet, VecDeque};

use gadget_core::constructions::{self as c, ComposedGadget, SignalPair, TeeMode};
use gadget_core::gadget::escaping_clique;
use gadget_core::graph::{complete_graph, EdgeRef, Graph};
use gadget_core::hyper::OrientedHypergraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Check = std::result::Result<(), String>;

fn fail<T>(what: impl Into<String>) -> std::result::Result<T, String> {
    Err(what.into())
}

fn relabeled(r: &mut ChaCha8Rng, g: &Graph) -> (Graph, Vec<usize>) {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(r);
    (g.relabel(&perm).unwrap(), perm)
}

/// Shortest path length between the endpoint sets of two edges.
pub fn distance_naive(g: &Graph, e: EdgeRef, f: EdgeRef) -> Option<usize> {
    let a = adjacency(g.n(), g.edges().iter().copied());
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for s in [e.u, e.v] {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        for y in 0..g.n() {
            if a[x][y] && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    [f.u, f.v].iter().map(|&v| dist[v]).min().filter(|&d| d != usize::MAX)
}

/// A sender whose signal edges share a vertex and close no triangle,
/// randomly labeled.
pub fn open_sender(r: &mut ChaCha8Rng, n: usize, p: f64) -> SignalPair {
    let g = random_with_open_path(r, n, p);
    let (g, perm) = relabeled(r, &g);
    let e = EdgeRef::new(perm[0], perm[1]);
    let f = EdgeRef::new(perm[1], perm[2]);
    let e = if r.gen_bool(0.5) { e.reversed() } else { e };
    SignalPair::new(g, e, f).unwrap()
}

/// A sender with disjoint signal edges at distance at least `min`.
pub fn far_sender(r: &mut ChaCha8Rng, n: usize, p: f64, min: usize) -> SignalPair {
    assert!(n >= 4);
    loop {
        let mut edges = vec![(0, 1), (2, 3)];
        for u in 0..n {
            for v in u + 1..n {
                if (u, v) != (0, 1) && (u, v) != (2, 3) && r.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let (g, perm) = relabeled(r, &g);
        let e = EdgeRef::new(perm[0], perm[1]);
        let f = EdgeRef::new(perm[2], perm[3]);
        if distance_naive(&g, e, f).is_none_or(|d| d >= min) {
            return SignalPair::new(g, e, f).unwrap();
        }
    }
}

fn check_image(out: &Graph, n: usize, pieces: &[(&Graph, &[usize])]) -> Check {
    let edges: BTreeSet<(usize, usize)> = pieces.iter().flat_map(|(g, m)| mapped_edges(g, m)).collect();
    let want = Graph::from_edges(n, edges).unwrap();
    if &want != out {
        return fail(format!("graph differs from the identification oracle: {:?} vs {:?}", out.edges(), want.edges()));
    }
    Ok(())
}

/// Gluing two random graphs on open paths: a coloring of the result is
/// free exactly when both restrictions are.
pub fn glue_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let orders: Vec<usize> = match seed % 4 {
        0 => vec![3, 3],
        1 => vec![4, 3],
        2 => vec![3, 2],
        _ => vec![3, 3, 3],
    };
    let limit = if orders.len() == 2 { 12 } else { 8 };
    let (g1, g2) = loop {
        let n1 = r.gen_range(3..=6);
        let n2 = r.gen_range(3..=6);
        let g1 = random_with_open_path(&mut r, n1, 0.5);
        let g2 = random_with_open_path(&mut r, n2, 0.5);
        if g1.edge_count() + g2.edge_count() - 2 <= limit {
            break (g1, g2);
        }
    };
    let (g1, p1) = relabeled(&mut r, &g1);
    let (g2, p2) = relabeled(&mut r, &g2);
    let path1 = [p1[0], p1[1], p1[2]];
    let path2 = [p2[0], p2[1], p2[2]];
    let out = c::glue_on_path(&g1, path1, &g2, path2).map_err(|e| e.to_string())?;
    let pairs: Vec<(usize, usize)> = (0..3).map(|i| (path1[i], path2[i])).collect();
    let (n, m1, m2) = identify_naive(g1.n(), g2.n(), &pairs);
    check_image(&out.graph, n, &[(&g1, &m1), (&g2, &m2)])?;
    if out.graph.n() != g1.n() + g2.n() - 3 || out.graph.edge_count() != g1.edge_count() + g2.edge_count() - 2 {
        return fail("glue counts");
    }
    for col in all_colorings(out.graph.edge_count(), orders.len()) {
        let whole = is_free_naive(&out.graph, &orders, &col);
        let left = is_free_naive(&g1, &orders, &restrict(&out.graph, &col, &g1, &m1));
        let right = is_free_naive(&g2, &orders, &restrict(&out.graph, &col, &g2, &m2));
        if whole != (left && right) {
            return fail(format!("seed {seed}: coloring {col:?} free={whole}, sides {left}/{right}"));
        }
    }
    Ok(())
}

fn confined(out: &Graph, sides: &[(&Graph, &[usize])], strong: bool) -> Check {
    let images: Vec<Vec<usize>> = sides
        .iter()
        .map(|(_, m)| m.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
        .collect();
    if let Some(k) = escaping_clique(out, &images) {
        return fail(format!("clique {k:?} leaves every side"));
    }
    for k in cliques_naive(out, 3) {
        let inside = |(g, m): &(&Graph, &[usize])| k.iter().all(|v| m.contains(v)) && (!strong || has_preimage_clique(g, m, &k));
        if !sides.iter().any(inside) {
            return fail(format!("clique {k:?} is not a clique of either operand"));
        }
    }
    Ok(())
}

/// Attach or join a random gadget and check that every clique on three or
/// more vertices comes from one operand. Joins use signal edges at distance
/// at least three; when the host edges share a vertex the gadget is folded
/// and only containment in a side's image is asserted. Returns whether the
/// stronger per-operand check applied.
pub fn confinement_case(seed: u64) -> std::result::Result<bool, String> {
    let mut r = rng(seed);
    if seed % 2 == 0 {
        let host = loop {
            let n = r.gen_range(3..=7);
            let g = random_graph(&mut r, n, 14);
            if g.edge_count() > 0 {
                break g;
            }
        };
        let gadget = loop {
            let n = r.gen_range(2..=6);
            let g = random_graph(&mut r, n, 12);
            if g.edge_count() > 0 {
                break g;
            }
        };
        let target = host.edge(r.gen_range(0..host.edge_count()));
        let signal = gadget.edge(r.gen_range(0..gadget.edge_count()));
        let signal = if r.gen_bool(0.5) { signal.reversed() } else { signal };
        let out = c::attach(&host, target, &gadget, signal).map_err(|e| e.to_string())?;
        let (n, mh, mg) = identify_naive(host.n(), gadget.n(), &[(target.u, signal.u), (target.v, signal.v)]);
        check_image(&out.graph, n, &[(&host, &mh), (&gadget, &mg)])?;
        confined(&out.graph, &[(&host, &mh), (&gadget, &mg)], true)?;
        return Ok(true);
    }
    let shared = seed % 4 == 3;
    let host = loop {
        let n = r.gen_range(4..=7);
        let g = random_graph(&mut r, n, 14);
        if g.edge_count() >= 2 {
            break g;
        }
    };
    let pick: Vec<(EdgeRef, EdgeRef)> = (0..host.edge_count())
        .flat_map(|i| (0..host.edge_count()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| (host.edge(i), host.edge(j)))
        .filter(|&(a, b)| a.shared_vertex(b).is_some() == shared)
        .collect();
    if pick.is_empty() {
        return confinement_case(seed.wrapping_add(1 << 32));
    }
    let (a, b) = pick[r.gen_range(0..pick.len())];
    let n = r.gen_range(4..=8);
    let s = far_sender(&mut r, n, 0.3, 3);
    let out = c::join(&host, a, b, &s).map_err(|e| e.to_string())?;
    let (a2, b2, e2, f2) = (a.normalized(), b.normalized(), s.e.normalized(), s.f.normalized());
    let pairs = [(a2.u, e2.u), (a2.v, e2.v), (b2.u, f2.u), (b2.v, f2.v)];
    let (n, mh, ms) = identify_naive(host.n(), s.graph.n(), &pairs);
    check_image(&out.graph, n, &[(&host, &mh), (&s.graph, &ms)])?;
    confined(&out.graph, &[(&host, &mh), (&s.graph, &ms)], !shared)?;
    Ok(!shared)
}

/// The double of a random open sender has a symmetric color-transition
/// digraph under full enumeration.
pub fn symmetric_double_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let three = seed % 3 == 2;
    let orders = if three { vec![3, 3, 3] } else if seed % 3 == 1 { vec![4, 3] } else { vec![3, 3] };
    let limit = if three { 9 } else { 13 };
    let s = loop {
        let n = r.gen_range(3..=6);
        let s = open_sender(&mut r, n, 0.45);
        if 2 * s.graph.edge_count() - 2 <= limit {
            break s;
        }
    };
    let out = c::symmetric_double(&s).map_err(|e| e.to_string())?;
    let g = &out.graph;
    if g.n() != 2 * s.graph.n() - 3 || g.edge_count() != 2 * s.graph.edge_count() - 2 {
        return fail("double counts");
    }
    let ia = g.edge_index(out.edge("ab").unwrap()).unwrap();
    let ib = g.edge_index(out.edge("bc").unwrap()).unwrap();
    let arcs = arcs_naive(g, &orders, ia, ib);
    if arcs.iter().any(|&(i, j)| !arcs.contains(&(j, i))) {
        return fail(format!("seed {seed}: asymmetric arcs {arcs:?}"));
    }
    let t = gadget_core::coloring::CliqueTuple::new(orders).unwrap();
    let lib = gadget_core::digraph::aux_digraph_by_enumeration(g, &t, out.edge("ab").unwrap(), out.edge("bc").unwrap())
        .map_err(|e| e.to_string())?;
    if lib.arcs() != &arcs {
        return fail("library digraph differs from enumeration");
    }
    Ok(())
}

fn expect(name: &str, got: (usize, usize), want: (usize, usize)) -> Check {
    if got == want {
        Ok(())
    } else {
        fail(format!("{name}: (|V|, |E|) = {got:?}, formula gives {want:?}"))
    }
}

fn counts(g: &ComposedGadget) -> (usize, usize) {
    (g.graph.n(), g.graph.edge_count())
}

fn replayed(g: &ComposedGadget) -> Check {
    if g.replay().map_err(|e| e.to_string())? != *g {
        return fail("replay differs");
    }
    let json = serde_json::to_string(&g.provenance).unwrap();
    let back: c::Construction = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    if c::build(back).map_err(|e| e.to_string())? != *g {
        return fail("rebuild from serialized provenance differs");
    }
    for (name, e) in &g.tracked {
        if !g.graph.contains_edge(*e) {
            return fail(format!("tracked edge {name} missing"));
        }
    }
    Ok(())
}

fn nonempty(r: &mut ChaCha8Rng, lo: usize, hi: usize, max_edges: usize) -> Graph {
    loop {
        let n = r.gen_range(lo..=hi);
        let g = random_graph(r, n, max_edges);
        if g.edge_count() > 0 {
            return g;
        }
    }
}

/// Vertex and edge counts of every construction on random parameters,
/// plus replay determinism.
pub fn counts_case(seed: u64) -> Check {
    let mut r = rng(seed);

    let host = nonempty(&mut r, 2, 8, 16);
    let gad = nonempty(&mut r, 2, 7, 12);
    let target = host.edge(r.gen_range(0..host.edge_count()));
    let signal = gad.edge(r.gen_range(0..gad.edge_count()));
    let out = c::attach(&host, target, &gad, signal).map_err(|e| e.to_string())?;
    expect("attach", counts(&out), (host.n() + gad.n() - 2, host.edge_count() + gad.edge_count() - 1))?;
    replayed(&out)?;

    let host = loop {
        let g = nonempty(&mut r, 4, 8, 16);
        if g.edge_count() >= 2 {
            break g;
        }
    };
    let pairs: Vec<(EdgeRef, EdgeRef)> = (0..host.edge_count())
        .flat_map(|i| (0..host.edge_count()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| (host.edge(i), host.edge(j)))
        .collect();
    let disjoint: Vec<_> = pairs.iter().filter(|(a, b)| a.shared_vertex(*b).is_none()).collect();
    if let Some(&&(a, b)) = disjoint.choose(&mut r) {
        let n = r.gen_range(4..=8);
        let s = far_sender(&mut r, n, 0.3, 2);
        let out = c::join(&host, a, b, &s).map_err(|e| e.to_string())?;
        expect("join", counts(&out), (host.n() + s.graph.n() - 4, host.edge_count() + s.graph.edge_count() - 2))?;
        replayed(&out)?;
    }
    let adjacent: Vec<_> = pairs.iter().filter(|(a, b)| a.shared_vertex(*b).is_some()).collect();
    if let Some(&&(a, b)) = adjacent.choose(&mut r) {
        let n = r.gen_range(3..=7);
        let s = open_sender(&mut r, n, 0.3);
        let out = c::join(&host, a, b, &s).map_err(|e| e.to_string())?;
        expect("join at a shared vertex", counts(&out), (host.n() + s.graph.n() - 3, host.edge_count() + s.graph.edge_count() - 2))?;
        replayed(&out)?;
    }

    let (n1, n2) = (r.gen_range(3..=7), r.gen_range(3..=7));
    let g1 = random_with_open_path(&mut r, n1, 0.4);
    let g2 = random_with_open_path(&mut r, n2, 0.4);
    let out = c::glue_on_path(&g1, [0, 1, 2], &g2, [2, 1, 0]).map_err(|e| e.to_string())?;
    expect("glue", counts(&out), (n1 + n2 - 3, g1.edge_count() + g2.edge_count() - 2))?;
    replayed(&out)?;

    let n = r.gen_range(3..=7);
    let s = open_sender(&mut r, n, 0.4);
    let (ns, ms) = (s.graph.n(), s.graph.edge_count());
    let out = c::symmetric_double(&s).map_err(|e| e.to_string())?;
    expect("symmetric double", counts(&out), (2 * ns - 3, 2 * ms - 2))?;
    replayed(&out)?;

    let h = r.gen_range(1..=7);
    let d = r.gen_range(0..h);
    let out = c::claw(&s, h, d).map_err(|e| e.to_string())?;
    expect("claw", counts(&out), (h + 2 + d * (ns - 3), binom(h, 2) + 1 + (d + 1) + d * (ms - 2)))?;
    replayed(&out)?;

    let n = r.gen_range(3..=7);
    let sc = open_sender(&mut r, n, 0.4);
    let (nc, mc) = (sc.graph.n(), sc.graph.edge_count());
    let t = c::chain_t(&s, &sc).map_err(|e| e.to_string())?;
    expect("chain T", counts(&t), (ns + nc - 2, 3 + (ms - 2) + (mc - 2)))?;
    replayed(&t)?;
    let tp = c::chain_tprime(&s, &sc).map_err(|e| e.to_string())?;
    expect("chain T'", counts(&tp), (ns + 2 * nc - 4, 4 + (ms - 2) + 2 * (mc - 2)))?;
    replayed(&tp)?;

    let f = nonempty(&mut r, 2, 7, 12);
    let gad = nonempty(&mut r, 2, 6, 9);
    let signal = gad.edge(r.gen_range(0..gad.edge_count()));
    let except = if r.gen_bool(0.5) { Some(f.edge(r.gen_range(0..f.edge_count()))) } else { None };
    let k = f.edge_count() - usize::from(except.is_some());
    let out = c::star_attach_all(&f, &gad, signal, except).map_err(|e| e.to_string())?;
    expect("star attach", counts(&out), (f.n() + k * (gad.n() - 2), f.edge_count() + k * (gad.edge_count() - 1)))?;
    replayed(&out)?;

    let n = r.gen_range(4..=8);
    let far = far_sender(&mut r, n, 0.3, 2);
    let (nf, mf) = (far.graph.n(), far.graph.edge_count());
    let q = r.gen_range(2..=4);
    let copies = binom(q + 1, 2) - 1;
    let out = c::positive_from_negative(&far, q).map_err(|e| e.to_string())?;
    expect("positive from negative", counts(&out), (2 * (q + 1) + copies * (nf - 4), (q + 1) + copies * (mf - 2)))?;
    replayed(&out)?;

    let tt = r.gen_range(2..=5);
    let k = binom(tt, 2);
    let out = c::determiner_from_positive(&far, tt).map_err(|e| e.to_string())?;
    expect("determiner from positive", counts(&out), (tt + 2 + k * (nf - 4), k + 1 + k * (mf - 2)))?;
    replayed(&out)?;

    let hh = nonempty(&mut r, 2, 6, 8);
    let (m, eh) = (hh.n(), hh.edge_count());
    let out = c::two_level_star(&hh, &s).map_err(|e| e.to_string())?;
    expect("two-level star", counts(&out), (m + 2 + 2 * eh * (ns - 3), eh + 1 + (m - 1) + 2 * eh * (ms - 2)))?;
    replayed(&out)?;

    let pg = t.path_gadget().map_err(|e| e.to_string())?;
    let lows = hh.edges().iter().map(|&(x, _)| x).collect::<BTreeSet<_>>().len();
    let out = c::tee_star(&hh, &pg, TeeMode::Case1).map_err(|e| e.to_string())?;
    let mt = t.graph.edge_count();
    expect("tee star, case 1", counts(&out), (m + 2 + eh * (t.graph.n() - 4), eh + 1 + eh * (mt - 3) + lows))?;
    replayed(&out)?;
    let pg = tp.path_gadget().map_err(|e| e.to_string())?;
    let out = c::tee_star(&hh, &pg, TeeMode::Case2).map_err(|e| e.to_string())?;
    expect(
        "tee star, case 2",
        counts(&out),
        (m + 2 + eh * (tp.graph.n() - 4), eh + 1 + eh * (tp.graph.edge_count() - 2)),
    )?;
    replayed(&out)?;

    core_case(&mut r)
}

/// `f` with `x = 0` adjacent to an independent set `1..=ell`, assembled
/// over a random oriented hypergraph.
fn core_case(r: &mut ChaCha8Rng) -> Check {
    let ell = r.gen_range(1..=3);
    let extra = r.gen_range(0..=3);
    let nf = 1 + ell + extra;
    let mut edges: Vec<(usize, usize)> = (1..=ell).map(|y| (0, y)).collect();
    for u in 1..nf {
        for v in (u + 1).max(ell + 1)..nf {
            if r.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let f = Graph::from_edges(nf, edges).unwrap();
    let order: Vec<usize> = {
        let mut o: Vec<usize> = (1..=ell).collect();
        o.shuffle(r);
        o
    };
    let hn = r.gen_range(ell.max(2)..=6);
    let arcs_n = r.gen_range(1..=4);
    let mut arcs = Vec::new();
    for _ in 0..64 {
        if arcs.len() == arcs_n {
            break;
        }
        let mut vs: Vec<usize> = (0..hn).collect();
        vs.shuffle(r);
        vs.truncate(ell);
        if !arcs.contains(&vs) {
            arcs.push(vs);
        }
    }
    let hyper = match OrientedHypergraph::new(hn, ell, arcs.clone(), None) {
        Ok(h) => h,
        Err(_) => return Ok(()),
    };
    let out = c::assemble_core(&f, 0, &order, &hyper).map_err(|e| e.to_string())?;
    let covered = arcs.iter().flatten().collect::<BTreeSet<_>>().len();
    let mf = f.edge_count();
    expect(
        "assemble core",
        counts(&out),
        (hn + 1 + arcs.len() * (nf - 1 - ell), arcs.len() * (mf - ell) + covered),
    )?;
    replayed(&out)
}

pub fn k(n: usize) -> Graph {
    complete_graph(n).unwrap()
}
