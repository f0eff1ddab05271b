//! Canonical labeling by individualization and refinement.
//!
//! Vertices are partitioned by iterated color refinement; the search then
//! individualizes vertices of the first non-trivial cell until the partition
//! is discrete. Every leaf is a relabeling, and the canonical form is the
//! leaf whose upper-triangle adjacency string (graph6 bit order) is least.
//! Twin vertices in a cell are interchangeable, so only one per twin class
//! is branched on.

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count accepted by the canonical labeler.
pub const CANON_CAP: usize = 16;

fn refine(g: &Graph, cells: &mut Vec<usize>) {
    let n = g.n();
    let mut count = cells.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut keys: Vec<(Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut sig = vec![0usize; count + 1];
                sig[0] = cells[v];
                for w in g.neighbors(v) {
                    sig[1 + cells[w]] += 1;
                }
                (sig, v)
            })
            .collect();
        keys.sort();
        let mut next = 0;
        for i in 0..n {
            if i > 0 && keys[i].0 != keys[i - 1].0 {
                next += 1;
            }
            cells[keys[i].1] = next;
        }
        let new_count = if n == 0 { 0 } else { next + 1 };
        if new_count == count {
            return;
        }
        count = new_count;
    }
}

fn adjacency_key(g: &Graph, order: &[usize]) -> Vec<u64> {
    // order[new] = old
    let n = order.len();
    let bits = n * n.saturating_sub(1) / 2;
    let mut key = vec![0u64; bits.div_ceil(64).max(1)];
    let mut i = 0;
    for v in 1..n {
        for u in 0..v {
            if g.has_edge(order[u], order[v]) {
                key[i / 64] |= 1 << (63 - i % 64);
            }
            i += 1;
        }
    }
    key
}

fn are_twins(g: &Graph, a: usize, b: usize) -> bool {
    (0..g.n()).all(|x| x == a || x == b || g.has_edge(a, x) == g.has_edge(b, x))
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<usize>) {
        let n = self.g.n();
        let mut sizes = vec![0usize; n];
        for &c in &cells {
            sizes[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            let mut order = vec![0; n];
            for (v, &c) in cells.iter().enumerate() {
                order[c] = v;
            }
            let key = adjacency_key(self.g, &order);
            if self.best.as_ref().is_none_or(|(k, _)| key < *k) {
                self.best = Some((key, order));
            }
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if tried.iter().any(|&w| are_twins(self.g, v, w)) {
                continue;
            }
            tried.push(v);
            let mut child: Vec<usize> = cells
                .iter()
                .enumerate()
                .map(|(w, &c)| if c > target || (c == target && w != v) { c + 1 } else { c })
                .collect();
            refine(self.g, &mut child);
            self.descend(child);
        }
    }
}

/// Canonical relabeling `perm[old] = new` of `g` with an optional initial
/// vertex coloring; labels are only ever permuted within color classes, and
/// smaller colors receive smaller labels.
pub fn canonical_labeling(g: &Graph, colors: Option<&[u32]>) -> Result<Vec<usize>> {
    let n = g.n();
    if n > CANON_CAP {
        return Err(Error::CapExceeded { what: "canonical labeling vertex count", cap: CANON_CAP });
    }
    let mut cells: Vec<usize> = match colors {
        Some(c) => {
            if c.len() != n {
                return Err(Error::Precondition(format!("{} colors for {n} vertices", c.len())));
            }
            let mut distinct: Vec<u32> = c.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            c.iter().map(|x| distinct.binary_search(x).unwrap()).collect()
        }
        None => vec![0; n],
    };
    refine(g, &mut cells);
    let mut search = Search { g, best: None };
    search.descend(cells);
    let order = search.best.map(|(_, o)| o).unwrap_or_default();
    let mut perm = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    Ok(perm)
}

pub fn canonical_form(g: &Graph) -> Result<Graph> {
    let perm = canonical_labeling(g, None)?;
    g.relabel(&perm)
}

/// Canonical form of a vertex-colored graph, with the colors carried along
/// to the new labels.
pub fn canonical_form_colored(g: &Graph, colors: &[u32]) -> Result<(Graph, Vec<u32>)> {
    let perm = canonical_labeling(g, Some(colors))?;
    let mut moved = vec![0; g.n()];
    for (old, &new) in perm.iter().enumerate() {
        moved[new] = colors[old];
    }
    Ok((g.relabel(&perm)?, moved))
}

pub fn iso_equal(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}
