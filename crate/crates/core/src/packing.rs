//! Color patterns, the packing parameter and random Turán blowups of
//! hypergraph families.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::error::{Error, Result};
use crate::graph::{clique_number, cliques_of_size, parse_graph6, write_graph6, Graph};
use crate::hyper::OrientedHypergraph;

/// Patterns are checked with one machine word per vertex set.
pub const PATTERN_CAP: usize = 64;

/// Edge-disjoint graphs `G_1..G_q` on a common vertex set `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorPattern {
    n: usize,
    graphs: Vec<Graph>,
}

impl ColorPattern {
    pub fn new(n: usize, graphs: Vec<Graph>) -> Result<Self> {
        if let Some(g) = graphs.iter().find(|g| g.n() != n) {
            return Err(Error::Precondition(format!("pattern graph on {} vertices, expected {n}", g.n())));
        }
        for (i, g) in graphs.iter().enumerate() {
            for h in &graphs[i + 1..] {
                if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| h.has_edge(u, v)) {
                    return Err(Error::Precondition(format!("pattern graphs share the edge {u}-{v}")));
                }
            }
        }
        Ok(ColorPattern { n, graphs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.graphs.len()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    /// Header `pattern n q`, then one graph6 line per color.
    pub fn to_text(&self) -> String {
        let mut out = format!("pattern {} {}\n", self.n, self.q());
        for g in &self.graphs {
            let _ = writeln!(out, "{}", write_graph6(g));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let bad = |m: &str| Error::Precondition(format!("pattern file: {m}"));
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty input"))?.split_whitespace().collect();
        let (n, q) = match header.as_slice() {
            ["pattern", n, q] => (
                n.parse().map_err(|_| bad("bad vertex count"))?,
                q.parse::<usize>().map_err(|_| bad("bad color count"))?,
            ),
            _ => return Err(bad("header must be `pattern n q`")),
        };
        let graphs: Vec<Graph> = lines.map(parse_graph6).collect::<Result<_>>()?;
        if graphs.len() != q {
            return Err(bad(&format!("expected {q} graphs, found {}", graphs.len())));
        }
        ColorPattern::new(n, graphs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PatternVerdict {
    Valid,
    /// `G_color` contains this clique on `t_color + 1` vertices.
    CliqueTooLarge { color: Color, clique: Vec<usize> },
    /// No color class of this vertex coloring holds a clique of its color.
    Uncovered { lambda: Vec<Color> },
}

impl PatternVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PatternVerdict::Valid)
    }
}

fn check_orders(t: &[usize], q: usize) -> Result<()> {
    if t.len() != q {
        return Err(Error::InvalidTuple(format!("{} clique orders for {q} graphs", t.len())));
    }
    if let Some(&bad) = t.iter().find(|&&x| x < 2) {
        return Err(Error::InvalidTuple(format!("clique order {bad} is below 2")));
    }
    Ok(())
}

/// Checks that each `G_i` is `K_{t_i+1}`-free and that every vertex
/// coloring puts a `K_{t_i}` of `G_i` inside color class `i`. The
/// lexicographically least uncovered coloring is reported on failure.
pub fn pattern_valid(p: &ColorPattern, t: &[usize]) -> Result<PatternVerdict> {
    check_orders(t, p.q())?;
    if p.n > PATTERN_CAP {
        return Err(Error::CapExceeded { what: "pattern vertex count", cap: PATTERN_CAP });
    }
    for (i, g) in p.graphs.iter().enumerate() {
        if let Some(clique) = cliques_of_size(g, t[i] + 1).next() {
            return Ok(PatternVerdict::CliqueTooLarge { color: i as Color + 1, clique });
        }
    }
    let masks: Vec<Vec<Vec<u64>>> = p
        .graphs
        .iter()
        .zip(t)
        .map(|(g, &ti)| cliques_by_last(g, ti))
        .collect();
    Ok(match uncovered_coloring(p.n, &masks) {
        Some(lambda) => PatternVerdict::Uncovered { lambda },
        None => PatternVerdict::Valid,
    })
}

/// Masks of the `t`-cliques of `g`, grouped by largest vertex.
fn cliques_by_last(g: &Graph, t: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); g.n()];
    for c in cliques_of_size(g, t) {
        let mask = c.iter().fold(0u64, |m, &v| m | 1 << v);
        out[*c.last().expect("t >= 2")].push(mask);
    }
    out
}

fn uncovered_coloring(n: usize, cliques: &[Vec<Vec<u64>>]) -> Option<Vec<Color>> {
    fn rec(v: usize, n: usize, cliques: &[Vec<Vec<u64>>], class: &mut [u64], lambda: &mut Vec<Color>) -> bool {
        if v == n {
            return true;
        }
        for c in 0..cliques.len() {
            class[c] |= 1 << v;
            let covered = cliques[c][v].iter().any(|&m| m & class[c] == m);
            if !covered {
                lambda.push(c as Color + 1);
                if rec(v + 1, n, cliques, class, lambda) {
                    return true;
                }
                lambda.pop();
            }
            class[c] &= !(1 << v);
        }
        false
    }
    let mut class = vec![0u64; cliques.len()];
    let mut lambda = Vec::with_capacity(n);
    rec(0, n, cliques, &mut class, &mut lambda).then_some(lambda)
}

/// The exhaustive search at one vertex count finished without a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub n: usize,
    pub nodes: u64,
    pub leaves: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingResult {
    pub t: Vec<usize>,
    /// The packing parameter, when found within the caps.
    pub value: Option<usize>,
    pub witness: Option<ColorPattern>,
    /// One entry per vertex count below `value` (or below `lower_bound`).
    pub refutations: Vec<Refutation>,
    /// Proven: the parameter is at least this.
    pub lower_bound: usize,
    pub budget_exhausted: bool,
}

enum Outcome {
    Found(ColorPattern),
    Refuted(Refutation),
    OutOfBudget,
}

struct PatternSearch<'a> {
    n: usize,
    t: &'a [usize],
    edges: Vec<(usize, usize)>,
    /// `class[i][j]` for `i < j`; `q` means absent.
    class: Vec<Vec<usize>>,
    adj: Vec<Vec<u64>>,
    nodes: u64,
    leaves: u64,
    budget: Option<u64>,
    found: Option<ColorPattern>,
    over_budget: bool,
}

fn has_clique(mask: u64, size: usize, adj: &[u64]) -> bool {
    if size == 0 {
        return true;
    }
    if (mask.count_ones() as usize) < size {
        return false;
    }
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique(rest & adj[v], size - 1, adj) {
            return true;
        }
    }
    false
}

impl PatternSearch<'_> {
    fn q(&self) -> usize {
        self.t.len()
    }

    /// Adding `uv` to `G_c` creates no `K_{t_c+1}`.
    fn fits(&self, c: usize, u: usize, v: usize) -> bool {
        let common = self.adj[c][u] & self.adj[c][v];
        !has_clique(common, self.t[c] - 1, &self.adj[c])
    }

    /// `j-1` and `j` agree on every row above `i`.
    fn same_cell(&self, j: usize, i: usize) -> bool {
        (0..i).all(|r| self.class[r][j - 1] == self.class[r][j])
    }

    fn run(&mut self, k: usize) -> bool {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.over_budget = true;
            return true;
        }
        if k == self.edges.len() {
            return self.leaf();
        }
        let (i, j) = self.edges[k];
        let floor = if j > i + 1 && self.same_cell(j, i) {
            self.class[i][j - 1]
        } else {
            0
        };
        for c in floor..=self.q() {
            if c < self.q() && !self.fits(c, i, j) {
                continue;
            }
            self.class[i][j] = c;
            if c < self.q() {
                self.adj[c][i] |= 1 << j;
                self.adj[c][j] |= 1 << i;
            }
            let stop = self.run(k + 1);
            if c < self.q() {
                self.adj[c][i] &= !(1 << j);
                self.adj[c][j] &= !(1 << i);
            }
            if stop {
                return true;
            }
        }
        self.class[i][j] = self.q();
        false
    }

    fn leaf(&mut self) -> bool {
        let q = self.q();
        // A valid pattern extends to a maximal one, so only maximal
        // patterns need the coloring check.
        for &(i, j) in &self.edges {
            if self.class[i][j] == q && (0..q).any(|c| self.fits(c, i, j)) {
                return false;
            }
        }
        self.leaves += 1;
        let graphs: Vec<Graph> = (0..q)
            .map(|c| {
                let edges = self.edges.iter().copied().filter(|&(i, j)| self.class[i][j] == c);
                Graph::from_edges(self.n, edges).expect("edges come from [n]")
            })
            .collect();
        let masks: Vec<Vec<Vec<u64>>> = graphs.iter().zip(self.t).map(|(g, &ti)| cliques_by_last(g, ti)).collect();
        if uncovered_coloring(self.n, &masks).is_none() {
            self.found = Some(ColorPattern::new(self.n, graphs).expect("classes are disjoint"));
            return true;
        }
        false
    }
}

fn search_at(n: usize, t: &[usize], budget: Option<u64>) -> Outcome {
    let q = t.len();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut s = PatternSearch {
        n,
        t,
        edges,
        class: vec![vec![q; n]; n],
        adj: vec![vec![0; n]; q],
        nodes: 0,
        leaves: 0,
        budget,
        found: None,
        over_budget: false,
    };
    s.run(0);
    if s.over_budget {
        Outcome::OutOfBudget
    } else if let Some(p) = s.found {
        Outcome::Found(p)
    } else {
        Outcome::Refuted(Refutation {
            n,
            nodes: s.nodes,
            leaves: s.leaves,
        })
    }
}

/// Least `n <= n_max` with a valid pattern, by exhaustive search at every
/// vertex count in turn. Rows of the class matrix are kept sorted within
/// cells of vertices not yet told apart, which only discards relabelings.
/// `budget` caps the search nodes per vertex count.
pub fn packing_parameter(t: &[usize], n_max: usize, budget: Option<u64>) -> Result<PackingResult> {
    check_orders(t, t.len())?;
    if t.is_empty() {
        return Err(Error::InvalidTuple("no clique orders".into()));
    }
    if n_max > PATTERN_CAP {
        return Err(Error::CapExceeded { what: "pattern vertex count", cap: PATTERN_CAP });
    }
    let mut result = PackingResult {
        t: t.to_vec(),
        value: None,
        witness: None,
        refutations: Vec::new(),
        lower_bound: 1,
        budget_exhausted: false,
    };
    for n in 1..=n_max {
        match search_at(n, t, budget) {
            Outcome::Found(p) => {
                result.value = Some(n);
                result.witness = Some(p);
                result.lower_bound = n;
                return Ok(result);
            }
            Outcome::Refuted(r) => {
                result.refutations.push(r);
                result.lower_bound = n + 1;
            }
            Outcome::OutOfBudget => {
                result.budget_exhausted = true;
                return Ok(result);
            }
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingBounds {
    /// `t_1 t_2`.
    pub lower: u64,
    /// `(8 q t_1 log2 t_1)^3`, rounded up.
    pub upper_log2: f64,
    /// `(8 q t_1 ln t_1)^3`, rounded up.
    pub upper_ln: f64,
}

pub fn packing_bounds(t: &[usize]) -> Result<PackingBounds> {
    let q = t.len();
    if q < 2 {
        return Err(Error::InvalidTuple(format!("bounds need at least two orders, got {q}")));
    }
    if t.windows(2).any(|w| w[0] < w[1]) || t[q - 1] < 2 {
        return Err(Error::InvalidTuple(format!("orders {t:?} must be nonincreasing and at least 2")));
    }
    let t1 = t[0] as f64;
    let cube = |log: f64| (8.0 * q as f64 * t1 * log).powi(3).ceil();
    Ok(PackingBounds {
        lower: (t[0] * t[1]) as u64,
        upper_log2: cube(t1.log2()),
        upper_ln: cube(t1.ln()),
    })
}

/// Edge-disjoint uniform hypergraphs on a common vertex set, each regular.
/// Arc orientation is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphFamily {
    members: Vec<OrientedHypergraph>,
    s: usize,
    k: usize,
}

impl HypergraphFamily {
    pub fn new(members: Vec<OrientedHypergraph>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidHypergraph("empty family".into()))?;
        let (n, s) = (first.n(), first.ell());
        let mut k = None;
        let mut seen = std::collections::BTreeSet::new();
        for (i, h) in members.iter().enumerate() {
            if h.n() != n || h.ell() != s {
                return Err(Error::InvalidHypergraph(format!("member {i} is not {s}-uniform on {n} vertices")));
            }
            let mut degree = vec![0usize; n];
            for arc in h.arcs() {
                arc.iter().for_each(|&v| degree[v] += 1);
                let mut set = arc.clone();
                set.sort_unstable();
                if !seen.insert(set) {
                    return Err(Error::InvalidHypergraph(format!("member {i} repeats a hyperedge")));
                }
            }
            let d = degree.first().copied().unwrap_or(0);
            if degree.iter().any(|&x| x != d) || k.is_some_and(|k| k != d) {
                return Err(Error::InvalidHypergraph(format!("member {i} is not regular of the common degree")));
            }
            k = Some(d);
        }
        Ok(HypergraphFamily {
            members,
            s,
            k: k.unwrap_or(0),
        })
    }

    pub fn members(&self) -> &[OrientedHypergraph] {
        &self.members
    }

    pub fn uniformity(&self) -> usize {
        self.s
    }

    pub fn regularity(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.members[0].n()
    }
}

/// For each hyperedge of member `i`, a uniformly random equipartition into
/// `t_i` parts and the complete `t_i`-partite graph on it.
pub fn turan_blowup(fam: &HypergraphFamily, t: &[usize], seed: u64) -> Result<ColorPattern> {
    if t.len() != fam.members.len() {
        return Err(Error::InvalidTuple(format!("{} orders for {} hypergraphs", t.len(), fam.members.len())));
    }
    if let Some(&bad) = t.iter().find(|&&x| x == 0 || x > fam.s) {
        return Err(Error::InvalidTuple(format!("cannot split a {}-set into {bad} parts", fam.s)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = Vec::with_capacity(t.len());
    for (i, (h, &ti)) in fam.members.iter().zip(t).enumerate() {
        let mut edges = Vec::new();
        for arc in h.arcs() {
            let mut order = arc.clone();
            order.shuffle(&mut rng);
            for a in 0..order.len() {
                for b in a + 1..order.len() {
                    if a % ti != b % ti {
                        edges.push((order[a], order[b]));
                    }
                }
            }
        }
        let g = Graph::from_edges(fam.n(), edges).map_err(|e| match e {
            Error::DuplicateEdge(x) => {
                Error::Precondition(format!("two hyperedges of member {i} share the pair {x}"))
            }
            other => other,
        })?;
        let omega = clique_number(&g);
        if omega > ti {
            return Err(Error::Precondition(format!(
                "blowup of member {i} contains K_{omega}; the family breaks the girth conditions"
            )));
        }
        graphs.push(g);
    }
    ColorPattern::new(fam.n(), graphs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupOutcome {
    pub pattern: ColorPattern,
    pub seed: u64,
    pub attempts: u64,
}

/// [`turan_blowup`] with seeds `seed, seed+1, ..` until the pattern is
/// valid, at most `retries + 1` attempts.
pub fn turan_search(fam: &HypergraphFamily, t: &[usize], seed: u64, retries: u64) -> Result<Option<BlowupOutcome>> {
    for attempt in 0..=retries {
        let s = seed.wrapping_add(attempt);
        let pattern = turan_blowup(fam, t, s)?;
        if pattern_valid(&pattern, t)?.is_valid() {
            return Ok(Some(BlowupOutcome {
                pattern,
                seed: s,
                attempts: attempt + 1,
            }));
        }
    }
    Ok(None)
}
