//! Depth-first extension search.
//!
//! Uncolored edges are visited in canonical order and colors are tried in
//! increasing order, so the first total coloring reached is the
//! lexicographically least free extension. A color is rejected as soon as
//! the edge would complete a monochromatic clique among the edges colored so
//! far: edge `uv` closes a `K_t` in color `c` exactly when the common
//! `c`-neighborhood of `u` and `v` contains a `c`-colored `K_{t-2}`.
//!
//! The lookahead strategy additionally rejects a color when it leaves some
//! uncolored edge with no admissible color at all. It only cuts subtrees
//! without solutions, so both strategies return the same witness.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{monochromatic_clique, CliqueTuple, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{words_for, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Strategy {
    /// Lookahead for two colors, plain otherwise.
    #[default]
    Auto,
    Plain,
    Lookahead,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Fan subtrees out to the rayon pool when the instance is large enough.
    pub parallel: bool,
    /// Accept whichever witness a worker finds first instead of the least.
    pub any_witness: bool,
    /// Maximum number of color trials before giving up.
    pub node_budget: Option<u64>,
    /// Number of leading free edges enumerated to form parallel tasks.
    pub split_depth: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::Auto,
            parallel: true,
            any_witness: false,
            node_budget: None,
            split_depth: 12,
        }
    }
}

impl SearchOptions {
    pub fn sequential() -> Self {
        SearchOptions { parallel: false, ..Default::default() }
    }
}

/// Instances with fewer free edges always run sequentially.
const PARALLEL_MIN_FREE: usize = 30;

/// Outcome of an arrowing query. `witness` is present exactly when the
/// graph does not arrow the tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowVerdict {
    pub arrows: bool,
    pub witness: Option<Coloring>,
}

type Row<const W: usize> = [u64; W];

#[inline]
fn and<const W: usize>(a: &Row<W>, b: &Row<W>) -> Row<W> {
    let mut r = [0; W];
    for i in 0..W {
        r[i] = a[i] & b[i];
    }
    r
}

#[inline]
fn popcount<const W: usize>(a: &Row<W>) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn first_bit<const W: usize>(a: &Row<W>) -> Option<usize> {
    a.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

#[inline]
fn clear_bit<const W: usize>(a: &mut Row<W>, v: usize) {
    a[v / 64] &= !(1 << (v % 64));
}

#[inline]
fn set_bit<const W: usize>(a: &mut Row<W>, v: usize) {
    a[v / 64] |= 1 << (v % 64);
}

struct Engine<'a, const W: usize> {
    n: usize,
    q: usize,
    // t_c - 2 for color index c = color - 1.
    need: Vec<usize>,
    edges: &'a [(usize, usize)],
    free: Vec<usize>,
    lookahead: bool,
    budget: Option<u64>,
    nodes: &'a AtomicU64,
}

#[derive(Clone)]
struct State<const W: usize> {
    // Row of vertex v in color index c at c * n + v.
    adj: Vec<Row<W>>,
    uncolored: Vec<Row<W>>,
    colors: Vec<Color>,
}

impl<const W: usize> Engine<'_, W> {
    fn initial(&self, partial: &Coloring) -> State<W> {
        let mut s = State {
            adj: vec![[0; W]; self.q * self.n],
            uncolored: vec![[0; W]; self.n],
            colors: partial.colors().to_vec(),
        };
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let c = partial.get(i);
            if c == 0 {
                set_bit(&mut s.uncolored[u], v);
                set_bit(&mut s.uncolored[v], u);
            } else {
                let base = (c as usize - 1) * self.n;
                set_bit(&mut s.adj[base + u], v);
                set_bit(&mut s.adj[base + v], u);
            }
        }
        s
    }

    fn has_clique(&self, rows: &[Row<W>], mut cand: Row<W>, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if popcount(&cand) < k {
            return false;
        }
        if k == 1 {
            return true;
        }
        while let Some(v) = first_bit(&cand) {
            clear_bit(&mut cand, v);
            if popcount(&cand) < k - 1 {
                return false;
            }
            if self.has_clique(rows, and(&cand, &rows[v]), k - 1) {
                return true;
            }
        }
        false
    }

    #[inline]
    fn closes(&self, s: &State<W>, x: usize, y: usize, c: usize) -> bool {
        let rows = &s.adj[c * self.n..(c + 1) * self.n];
        self.has_clique(rows, and(&rows[x], &rows[y]), self.need[c])
    }

    fn set(&self, s: &mut State<W>, e: usize, c: usize) {
        let (u, v) = self.edges[e];
        let base = c * self.n;
        set_bit(&mut s.adj[base + u], v);
        set_bit(&mut s.adj[base + v], u);
        clear_bit(&mut s.uncolored[u], v);
        clear_bit(&mut s.uncolored[v], u);
        s.colors[e] = c as Color + 1;
    }

    fn unset(&self, s: &mut State<W>, e: usize, c: usize) {
        let (u, v) = self.edges[e];
        let base = c * self.n;
        clear_bit(&mut s.adj[base + u], v);
        clear_bit(&mut s.adj[base + v], u);
        set_bit(&mut s.uncolored[u], v);
        set_bit(&mut s.uncolored[v], u);
        s.colors[e] = 0;
    }

    fn blocked(&self, s: &State<W>, x: usize, y: usize) -> bool {
        (0..self.q).all(|d| self.closes(s, x, y, d))
    }

    /// After coloring `uv` with `c`: does some uncolored edge that could
    /// only now have lost color `c` have no admissible color left?
    fn dead_after(&self, s: &State<W>, u: usize, v: usize, c: usize) -> bool {
        let cu = s.adj[c * self.n + u];
        let cv = s.adj[c * self.n + v];
        for (a, other) in [(u, &cv), (v, &cu)] {
            let mut cand = and(other, &s.uncolored[a]);
            while let Some(y) = first_bit(&cand) {
                clear_bit(&mut cand, y);
                if self.blocked(s, a, y) {
                    return true;
                }
            }
        }
        if self.need[c] >= 2 {
            let common = and(&cu, &cv);
            let mut xs = common;
            while let Some(x) = first_bit(&xs) {
                clear_bit(&mut xs, x);
                let mut ys = and(&xs, &s.uncolored[x]);
                while let Some(y) = first_bit(&ys) {
                    clear_bit(&mut ys, y);
                    if self.blocked(s, x, y) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn tick(&self) -> Result<()> {
        if let Some(b) = self.budget {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= b {
                return Err(Error::BudgetExhausted(b));
            }
        }
        Ok(())
    }

    /// Walks free edges `start..stop`, calling `leaf` on every admissible
    /// assignment of them.
    fn run<F>(&self, s: &mut State<W>, start: usize, stop: usize, leaf: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&State<W>) -> ControlFlow<()>,
    {
        let len = stop - start;
        let mut tried = vec![0usize; len + 1];
        let mut placed: Vec<Option<usize>> = vec![None; len + 1];
        let mut d = 0;
        loop {
            if d == len {
                if leaf(s).is_break() {
                    return Ok(ControlFlow::Break(()));
                }
                if d == 0 {
                    return Ok(ControlFlow::Continue(()));
                }
                d -= 1;
                continue;
            }
            let e = self.free[start + d];
            let (u, v) = self.edges[e];
            if let Some(c) = placed[d].take() {
                self.unset(s, e, c);
            }
            let mut advanced = false;
            while tried[d] < self.q {
                let c = tried[d];
                tried[d] += 1;
                self.tick()?;
                if self.closes(s, u, v, c) {
                    continue;
                }
                self.set(s, e, c);
                if self.lookahead && self.dead_after(s, u, v, c) {
                    self.unset(s, e, c);
                    continue;
                }
                placed[d] = Some(c);
                advanced = true;
                break;
            }
            if advanced {
                d += 1;
                tried[d] = 0;
                placed[d] = None;
                continue;
            }
            tried[d] = 0;
            if d == 0 {
                return Ok(ControlFlow::Continue(()));
            }
            d -= 1;
        }
    }

    fn first(&self, mut s: State<W>, start: usize) -> Result<Option<Vec<Color>>> {
        let mut found = None;
        let _ = self.run(&mut s, start, self.free.len(), &mut |st| {
            found = Some(st.colors.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    fn search(&self, partial: &Coloring, opts: &SearchOptions) -> Result<Option<Vec<Color>>> {
        let s = self.initial(partial);
        let m = self.free.len();
        if !opts.parallel || m < PARALLEL_MIN_FREE || rayon::current_num_threads() < 2 {
            return self.first(s, 0);
        }
        let depth = opts.split_depth.clamp(1, m);
        let mut prefixes: Vec<Vec<Color>> = Vec::new();
        let mut root = s.clone();
        let _ = self.run(&mut root, 0, depth, &mut |st| {
            prefixes.push(self.free[..depth].iter().map(|&e| st.colors[e]).collect());
            ControlFlow::Continue(())
        })?;
        let task = |p: &Vec<Color>| -> Option<Result<Vec<Color>>> {
            let mut st = s.clone();
            for (&e, &c) in self.free[..depth].iter().zip(p) {
                self.set(&mut st, e, c as usize - 1);
            }
            self.first(st, depth).transpose()
        };
        let hit = if opts.any_witness {
            prefixes.par_iter().find_map_any(task)
        } else {
            prefixes.par_iter().find_map_first(task)
        };
        hit.transpose()
    }
}

fn validate(g: &Graph, t: &CliqueTuple, partial: &Coloring) -> Result<()> {
    partial.check(g, t)?;
    if let Some((color, clique)) = monochromatic_clique(g, partial, t)? {
        return Err(Error::PartialViolates { color, size: clique.len(), clique });
    }
    Ok(())
}

macro_rules! with_width {
    ($n:expr, $w:ident => $body:expr) => {
        match words_for($n) {
            1 => {
                const $w: usize = 1;
                $body
            }
            2 => {
                const $w: usize = 2;
                $body
            }
            3..=4 => {
                const $w: usize = 4;
                $body
            }
            5..=8 => {
                const $w: usize = 8;
                $body
            }
            _ => {
                const $w: usize = 16;
                $body
            }
        }
    };
}

fn engine<'a, const W: usize>(
    g: &'a Graph,
    t: &CliqueTuple,
    partial: &Coloring,
    opts: &SearchOptions,
    nodes: &'a AtomicU64,
) -> Engine<'a, W> {
    let lookahead = match opts.strategy {
        Strategy::Auto => t.q() == 2,
        Strategy::Plain => false,
        Strategy::Lookahead => true,
    };
    Engine {
        n: g.n(),
        q: t.q(),
        need: t.orders().iter().map(|&x| x - 2).collect(),
        edges: g.edges(),
        free: (0..g.edge_count()).filter(|&i| partial.get(i) == 0).collect(),
        lookahead,
        budget: opts.node_budget,
        nodes,
    }
}

/// Least free total extension of `partial`, if any. Pre-colored edges are
/// never changed; a partial coloring that already contains a forbidden
/// clique is an error rather than "no extension".
pub fn extend(g: &Graph, t: &CliqueTuple, partial: &Coloring) -> Result<Option<Coloring>> {
    extend_with(g, t, partial, &SearchOptions::default())
}

pub fn extend_with(g: &Graph, t: &CliqueTuple, partial: &Coloring, opts: &SearchOptions) -> Result<Option<Coloring>> {
    validate(g, t, partial)?;
    let nodes = AtomicU64::new(0);
    let found = with_width!(g.n(), W => engine::<W>(g, t, partial, opts, &nodes).search(partial, opts))?;
    Ok(found.map(Coloring::from_colors))
}

pub fn arrows(g: &Graph, t: &CliqueTuple) -> Result<ArrowVerdict> {
    arrows_with(g, t, &SearchOptions::default())
}

pub fn arrows_with(g: &Graph, t: &CliqueTuple, opts: &SearchOptions) -> Result<ArrowVerdict> {
    let witness = extend_with(g, t, &Coloring::unset(g.edge_count()), opts)?;
    Ok(ArrowVerdict { arrows: witness.is_none(), witness })
}

/// Calls `f` on every free total extension of `partial`, in lexicographic
/// order, until it breaks.
pub fn for_each_free_extension<F>(g: &Graph, t: &CliqueTuple, partial: &Coloring, mut f: F) -> Result<()>
where
    F: FnMut(&Coloring) -> ControlFlow<()>,
{
    validate(g, t, partial)?;
    let nodes = AtomicU64::new(0);
    let opts = SearchOptions::sequential();
    with_width!(g.n(), W => {
        let eng = engine::<W>(g, t, partial, &opts, &nodes);
        let mut s = eng.initial(partial);
        let mut buf = Coloring::unset(0);
        let _ = eng.run(&mut s, 0, eng.free.len(), &mut |st| {
            buf = Coloring::from_colors(st.colors.clone());
            f(&buf)
        })?;
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_free;
    use crate::graph::{complete_graph, path_graph, EdgeRef};

    fn tuple(s: &str) -> CliqueTuple {
        s.parse().unwrap()
    }

    #[test]
    fn small_complete_graphs() {
        let t = tuple("3,3");
        assert!(arrows(&complete_graph(6).unwrap(), &t).unwrap().arrows);
        let k5 = complete_graph(5).unwrap();
        let v = arrows(&k5, &t).unwrap();
        assert!(!v.arrows);
        assert!(is_free(&k5, v.witness.as_ref().unwrap(), &t).unwrap());
        assert!(!arrows(&complete_graph(2).unwrap(), &t).unwrap().arrows);
    }

    #[test]
    fn k5_witness_is_two_pentagons() {
        let k5 = complete_graph(5).unwrap();
        let w = arrows(&k5, &tuple("3,3")).unwrap().witness.unwrap();
        // Edges 01 02 03 04 12 13 14 23 24 34; least coloring is the
        // pentagon 0-1-3-4-2-0 in color 1.
        assert_eq!(w.colors(), &[1, 1, 2, 2, 2, 1, 2, 2, 1, 1]);
    }

    #[test]
    fn precolored_edges_are_kept() {
        let k3 = complete_graph(3).unwrap();
        let t = tuple("3,3");
        let p = Coloring::partial(&k3, &[(EdgeRef::new(1, 2), 1), (EdgeRef::new(0, 1), 1)]).unwrap();
        let c = extend(&k3, &t, &p).unwrap().unwrap();
        assert_eq!(c.colors(), &[1, 2, 1]);
        let bad = Coloring::from_colors(vec![1, 1, 1]);
        assert!(matches!(extend(&k3, &t, &bad), Err(Error::PartialViolates { color: 1, .. })));
    }

    #[test]
    fn triangle_free_host_takes_color_one() {
        let p = path_graph(2).unwrap();
        let c = extend(&p, &tuple("3,3"), &Coloring::unset(2)).unwrap().unwrap();
        assert_eq!(c.colors(), &[1, 1]);
    }

    #[test]
    fn k6_minus_edge_is_not_ramsey() {
        let k6 = complete_graph(6).unwrap();
        let g = k6.without_edge(0);
        assert!(!arrows(&g, &tuple("3,3")).unwrap().arrows);
    }

    #[test]
    fn strategies_agree() {
        for n in 3..7 {
            let g = complete_graph(n).unwrap();
            for t in ["3,3", "4,3", "3,3,3"] {
                let t = tuple(t);
                let a = arrows_with(&g, &t, &SearchOptions { strategy: Strategy::Plain, ..SearchOptions::sequential() }).unwrap();
                let b = arrows_with(&g, &t, &SearchOptions { strategy: Strategy::Lookahead, ..SearchOptions::sequential() }).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = complete_graph(6).unwrap();
        let opts = SearchOptions { node_budget: Some(10), ..SearchOptions::sequential() };
        assert!(matches!(arrows_with(&g, &tuple("3,3"), &opts), Err(Error::BudgetExhausted(10))));
    }

    #[test]
    fn enumeration_counts_k3() {
        let k3 = complete_graph(3).unwrap();
        let mut count = 0;
        for_each_free_extension(&k3, &tuple("3,3"), &Coloring::unset(3), |_| {
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(count, 6);
    }

    #[test]
    fn single_color_means_clique_containment() {
        let t = tuple("3");
        assert!(arrows(&complete_graph(3).unwrap(), &t).unwrap().arrows);
        assert!(!arrows(&path_graph(4).unwrap(), &t).unwrap().arrows);
    }
}
