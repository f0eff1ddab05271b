//! Naive reference implementations shared by the integration tests. Every
//! routine here enumerates everything it is asked about and shares no code
//! with the library beyond the `Graph` container.
#![allow(dead_code)]

pub mod suites;

use std::collections::BTreeSet;

use gadget_core::graph::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over graphs on `n` vertices with exactly `m` edges.
pub fn random_graph_m(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    pairs.truncate(m.min(pairs.len()));
    Graph::from_edges(n, pairs).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_edges: usize) -> Graph {
    let cap = (n * n.saturating_sub(1) / 2).min(max_edges);
    let m = rng.gen_range(0..=cap);
    random_graph_m(rng, n, m)
}

pub fn adjacency(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for (u, v) in edges {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Every vertex subset of size at least `min` that is a clique, as sorted
/// vertex lists, by bitmask enumeration.
pub fn cliques_naive(g: &Graph, min: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    assert!(n <= 20, "naive clique enumeration is for small graphs");
    let a = adjacency(n, g.edges().iter().copied());
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if (mask.count_ones() as usize) < min {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vs.iter().enumerate().all(|(i, &x)| vs[i + 1..].iter().all(|&y| a[x][y])) {
            out.push(vs);
        }
    }
    out
}

fn has_clique(a: &[Vec<bool>], t: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == t {
        return true;
    }
    for v in start..a.len() {
        if chosen.iter().all(|&w| a[w][v]) {
            chosen.push(v);
            if has_clique(a, t, v + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// No color class `c` (edges colored `c`; 0 means uncolored) contains a
/// `K_{orders[c-1]}`.
pub fn is_free_naive(g: &Graph, orders: &[usize], colors: &[u8]) -> bool {
    (1..=orders.len()).all(|c| {
        let class = g
            .edges()
            .iter()
            .zip(colors)
            .filter(|(_, &x)| x as usize == c)
            .map(|(&e, _)| e);
        let a = adjacency(g.n(), class);
        !has_clique(&a, orders[c - 1], 0, &mut Vec::new())
    })
}

/// All colorings of `m` edges with colors `1..=q`, lexicographically.
pub fn all_colorings(m: usize, q: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (q as u64).pow(m as u32);
    (0..total).map(move |mut k| {
        let mut c = vec![0u8; m];
        for i in (0..m).rev() {
            c[i] = (k % q as u64) as u8 + 1;
            k /= q as u64;
        }
        c
    })
}

/// Least free coloring agreeing with the nonzero entries of `fixed`.
pub fn least_extension_naive(g: &Graph, orders: &[usize], fixed: &[u8]) -> Option<Vec<u8>> {
    all_colorings(g.edge_count(), orders.len())
        .filter(|c| c.iter().zip(fixed).all(|(&x, &f)| f == 0 || x == f))
        .find(|c| is_free_naive(g, orders, c))
}

/// Arcs `(i, j)` such that some free coloring gives edge index `a` color
/// `i` and edge index `b` color `j`.
pub fn arcs_naive(g: &Graph, orders: &[usize], a: usize, b: usize) -> BTreeSet<(u8, u8)> {
    all_colorings(g.edge_count(), orders.len())
        .filter(|c| is_free_naive(g, orders, c))
        .map(|c| (c[a], c[b]))
        .collect()
}

/// Vertex images under identification of `left` and `right` along
/// `pairs`: classes are labeled by their least member (left vertices
/// first) and numbered in that order.
pub fn identify_naive(left_n: usize, right_n: usize, pairs: &[(usize, usize)]) -> (usize, Vec<usize>, Vec<usize>) {
    let total = left_n + right_n;
    let mut class: Vec<usize> = (0..total).collect();
    // Repeated relabeling to a fixed point; quadratic, which is fine here.
    loop {
        let mut changed = false;
        for &(l, r) in pairs {
            let (a, b) = (class[l], class[left_n + r]);
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                for c in class.iter_mut() {
                    if *c == hi {
                        *c = lo;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let reps: BTreeSet<usize> = class.iter().copied().collect();
    let index: Vec<usize> = reps.iter().copied().collect();
    let image: Vec<usize> = class.iter().map(|c| index.binary_search(c).unwrap()).collect();
    (reps.len(), image[..left_n].to_vec(), image[left_n..].to_vec())
}

pub fn mapped_edges(g: &Graph, map: &[usize]) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (map[u], map[v]);
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Whether some clique of `operand` maps bijectively onto `k`.
pub fn has_preimage_clique(operand: &Graph, map: &[usize], k: &[usize]) -> bool {
    let a = adjacency(operand.n(), operand.edges().iter().copied());
    let options: Vec<Vec<usize>> = k
        .iter()
        .map(|&w| (0..operand.n()).filter(|&p| map[p] == w).collect())
        .collect();
    fn pick(a: &[Vec<bool>], options: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        let Some(first) = options.first() else { return true };
        for &p in first {
            if chosen.iter().all(|&c| a[c][p]) {
                chosen.push(p);
                if pick(a, &options[1..], chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pick(&a, &options, &mut Vec::new())
}

/// Restriction of a coloring of `whole` to an operand embedded by `map`.
pub fn restrict(whole: &Graph, colors: &[u8], operand: &Graph, map: &[usize]) -> Vec<u8> {
    mapped_edges(operand, map)
        .into_iter()
        .map(|e| colors[whole.edges().iter().position(|&x| x == e).unwrap()])
        .collect()
}

/// A random graph on `n` vertices with an induced path `0-1-2`.
pub fn random_with_open_path(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = vec![(0, 1), (1, 2)];
    for u in 0..n {
        for v in u + 1..n {
            if (u, v) != (0, 1) && (u, v) != (1, 2) && (u, v) != (0, 2) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
