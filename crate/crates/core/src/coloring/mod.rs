//! Clique tuples, edge colorings, freeness, and the extension/arrowing
//! search.
//!
//! Colors are 1-based (`1..=q`); `0` marks an unset edge in a partial
//! coloring.

mod minimal;
mod search;

pub use minimal::{color_class_permutation_check, is_minimal, minimal_subgraph};
pub use search::{
    arrows, arrows_with, extend, extend_with, for_each_free_extension, ArrowVerdict, SearchOptions,
    Strategy,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cliques_of_size, EdgeRef, Graph};

pub type Color = u8;

/// Largest palette supported.
pub const MAX_COLORS: usize = 16;

/// Clique orders `t_1 >= ... >= t_q >= 2`; color `i` forbids a
/// monochromatic `K_{t_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CliqueTuple {
    orders: Vec<usize>,
}

impl CliqueTuple {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidTuple("empty tuple".into()));
        }
        if orders.len() > MAX_COLORS {
            return Err(Error::InvalidTuple(format!("more than {MAX_COLORS} colors")));
        }
        if let Some(&t) = orders.iter().find(|&&t| t < 2) {
            return Err(Error::InvalidTuple(format!("clique order {t} is below 2")));
        }
        if orders.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidTuple(format!(
                "orders must be nonincreasing, got {}",
                join(&orders)
            )));
        }
        Ok(CliqueTuple { orders })
    }

    /// Sorts into nonincreasing order first. Returns the tuple and, for each
    /// sorted position, the index it had in `orders`.
    pub fn normalized(orders: Vec<usize>) -> Result<(Self, Vec<usize>)> {
        let mut idx: Vec<usize> = (0..orders.len()).collect();
        idx.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
        let sorted = idx.iter().map(|&i| orders[i]).collect();
        Ok((CliqueTuple::new(sorted)?, idx))
    }

    /// Rejects tuples containing a `K_2`, which gadget operations exclude.
    pub fn require_gadget(&self) -> Result<()> {
        if self.orders.iter().any(|&t| t < 3) {
            return Err(Error::InvalidTuple(format!(
                "gadget operations need every order at least 3, got {self}"
            )));
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// Order for color `c` (1-based).
    pub fn t(&self, c: Color) -> usize {
        self.orders[c as usize - 1]
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        1..=self.q() as Color
    }

    /// The sub-tuple on the colors of `x`, in increasing color order.
    pub fn restrict(&self, x: &ColorSet) -> Result<CliqueTuple> {
        if x.q() != self.q() {
            return Err(Error::InvalidColorSet(format!("set over [{}] for a {}-tuple", x.q(), self.q())));
        }
        CliqueTuple::new(x.iter().map(|c| self.t(c)).collect())
    }

    /// True when `sigma` (with `sigma[c-1]` the image of `c`) only moves
    /// colors among equal orders.
    pub fn respects_classes(&self, sigma: &[Color]) -> bool {
        if sigma.len() != self.q() {
            return false;
        }
        let mut seen = vec![false; self.q()];
        for (i, &s) in sigma.iter().enumerate() {
            if s == 0 || s as usize > self.q() || seen[s as usize - 1] {
                return false;
            }
            seen[s as usize - 1] = true;
            if self.orders[i] != self.t(s) {
                return false;
            }
        }
        true
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CliqueTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.orders))
    }
}

/// Parses `"t1,t2,...,tq"`.
pub fn parse_orders(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidTuple(format!("`{}` is not a clique order", p.trim())))
        })
        .collect()
}

impl FromStr for CliqueTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CliqueTuple::new(parse_orders(s)?)
    }
}

impl TryFrom<Vec<usize>> for CliqueTuple {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        CliqueTuple::new(v)
    }
}

impl From<CliqueTuple> for Vec<usize> {
    fn from(t: CliqueTuple) -> Self {
        t.orders
    }
}

/// A subset of the palette `[q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ColorSetRepr", into = "ColorSetRepr")]
pub struct ColorSet {
    q: usize,
    mask: u32,
}

impl ColorSet {
    pub fn new(q: usize, colors: impl IntoIterator<Item = Color>) -> Result<Self> {
        if q == 0 || q > MAX_COLORS {
            return Err(Error::InvalidColorSet(format!("palette size {q}")));
        }
        let mut mask = 0;
        for c in colors {
            if c == 0 || c as usize > q {
                return Err(Error::InvalidColorSet(format!("color {c} outside 1..={q}")));
            }
            mask |= 1 << (c - 1);
        }
        Ok(ColorSet { q, mask })
    }

    pub fn full(q: usize) -> Self {
        ColorSet { q, mask: (1u32 << q) - 1 }
    }

    pub fn empty(q: usize) -> Self {
        ColorSet { q, mask: 0 }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn contains(&self, c: Color) -> bool {
        c >= 1 && (c as usize) <= self.q && self.mask >> (c - 1) & 1 == 1
    }

    pub fn insert(&mut self, c: Color) {
        assert!(c >= 1 && c as usize <= self.q, "color {c} outside palette");
        self.mask |= 1 << (c - 1);
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.q
    }

    pub fn complement(&self) -> ColorSet {
        ColorSet { q: self.q, mask: !self.mask & ((1u32 << self.q) - 1) }
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> {
        let s = *self;
        (1..=s.q as Color).filter(move |&c| s.contains(c))
    }

    pub fn to_vec(&self) -> Vec<Color> {
        self.iter().collect()
    }

    /// Parses `"1,2"` (or `""` / `"{}"` for the empty set) over `[q]`.
    pub fn parse(q: usize, s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let colors = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<Color>().map_err(|_| Error::InvalidColorSet(format!("`{p}` is not a color"))))
            .collect::<Result<Vec<_>>>()?;
        ColorSet::new(q, colors)
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct ColorSetRepr {
    q: usize,
    colors: Vec<Color>,
}

impl From<ColorSet> for ColorSetRepr {
    fn from(s: ColorSet) -> Self {
        ColorSetRepr { q: s.q, colors: s.to_vec() }
    }
}

impl TryFrom<ColorSetRepr> for ColorSet {
    type Error = Error;

    fn try_from(r: ColorSetRepr) -> Result<Self> {
        ColorSet::new(r.q, r.colors)
    }
}

/// Edge coloring indexed by canonical edge position; `0` is unset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    /// All edges unset.
    pub fn unset(edge_count: usize) -> Self {
        Coloring { colors: vec![0; edge_count] }
    }

    pub fn from_colors(colors: Vec<Color>) -> Self {
        Coloring { colors }
    }

    /// Partial coloring of `g` from `(edge, color)` pairs.
    pub fn partial(g: &Graph, fixed: &[(EdgeRef, Color)]) -> Result<Self> {
        let mut c = Coloring::unset(g.edge_count());
        for &(e, col) in fixed {
            let i = g.require_edge(e)?;
            if c.colors[i] != 0 && c.colors[i] != col {
                return Err(Error::ColoringMismatch(format!("edge {e} fixed to two colors")));
            }
            c.colors[i] = col;
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn get(&self, index: usize) -> Color {
        self.colors[index]
    }

    pub fn set(&mut self, index: usize, c: Color) {
        self.colors[index] = c;
    }

    pub fn color_of(&self, g: &Graph, e: EdgeRef) -> Result<Color> {
        Ok(self.colors[g.require_edge(e)?])
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|&c| c != 0)
    }

    /// Checks length and palette against `g` and `t`.
    pub fn check(&self, g: &Graph, t: &CliqueTuple) -> Result<()> {
        if self.colors.len() != g.edge_count() {
            return Err(Error::ColoringMismatch(format!(
                "{} colors for {} edges",
                self.colors.len(),
                g.edge_count()
            )));
        }
        if let Some(&c) = self.colors.iter().find(|&&c| c as usize > t.q()) {
            return Err(Error::ColoringMismatch(format!("color {c} outside 1..={}", t.q())));
        }
        Ok(())
    }

    /// Applies `sigma` (`sigma[c-1]` is the image of `c`) to every set edge.
    pub fn permuted(&self, sigma: &[Color]) -> Coloring {
        Coloring {
            colors: self.colors.iter().map(|&c| if c == 0 { 0 } else { sigma[c as usize - 1] }).collect(),
        }
    }

    /// `"u v c"` lines in canonical edge order.
    pub fn to_lines(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (&(u, v), &c) in g.edges().iter().zip(&self.colors) {
            out.push_str(&format!("{u} {v} {c}\n"));
        }
        out
    }

    /// Reads `"u v c"` lines; `c = 0` or a missing edge leaves it unset.
    pub fn from_lines(g: &Graph, text: &str) -> Result<Self> {
        let mut c = Coloring::unset(g.edge_count());
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::EdgeList { line: i + 1, message: format!("bad coloring line `{line}`") })?;
            let [u, v, col] = nums[..] else {
                return Err(Error::EdgeList { line: i + 1, message: "expected `u v c`".into() });
            };
            let idx = g.require_edge(EdgeRef::new(u, v))?;
            c.colors[idx] = Color::try_from(col)
                .map_err(|_| Error::EdgeList { line: i + 1, message: format!("color {col} too large") })?;
        }
        Ok(c)
    }
}

/// The graph formed by the edges of color `c`.
pub fn color_class(g: &Graph, coloring: &Coloring, c: Color) -> Graph {
    let edges = g.edges().iter().zip(coloring.colors()).filter(|&(_, &x)| x == c).map(|(&e, _)| e);
    Graph::from_edges(g.n(), edges).expect("subgraph of a simple graph")
}

/// First monochromatic `K_{t_c}` among the set edges, by color then
/// lexicographic vertex set.
pub fn monochromatic_clique(g: &Graph, coloring: &Coloring, t: &CliqueTuple) -> Result<Option<(Color, Vec<usize>)>> {
    coloring.check(g, t)?;
    for c in t.colors() {
        let class = color_class(g, coloring, c);
        if let Some(k) = cliques_of_size(&class, t.t(c)).next() {
            return Ok(Some((c, k)));
        }
    }
    Ok(None)
}

/// Whether a total coloring avoids every forbidden monochromatic clique.
pub fn is_free(g: &Graph, coloring: &Coloring, t: &CliqueTuple) -> Result<bool> {
    coloring.check(g, t)?;
    if !coloring.is_total() {
        return Err(Error::PartialColoring);
    }
    Ok(monochromatic_clique(g, coloring, t)?.is_none())
}
