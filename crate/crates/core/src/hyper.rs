//! Oriented uniform hypergraphs, vertex-coloring patterns and toy searches
//! for hypergraphs forcing two vertices apart.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::Color;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedHypergraph {
    n: usize,
    ell: usize,
    arcs: Vec<Vec<usize>>,
    distinguished: Option<(usize, usize)>,
}

impl OrientedHypergraph {
    pub fn new(n: usize, ell: usize, arcs: Vec<Vec<usize>>, distinguished: Option<(usize, usize)>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidHypergraph("uniformity must be positive".into()));
        }
        for (i, arc) in arcs.iter().enumerate() {
            if arc.len() != ell {
                return Err(Error::InvalidHypergraph(format!(
                    "arc {i} has {} vertices, expected {ell}",
                    arc.len()
                )));
            }
            if let Some(&v) = arc.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let distinct: BTreeSet<_> = arc.iter().collect();
            if distinct.len() != ell {
                return Err(Error::InvalidHypergraph(format!("arc {i} repeats a vertex")));
            }
        }
        if let Some((u, w)) = distinguished {
            if u >= n || w >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(w), n });
            }
            if u == w {
                return Err(Error::InvalidHypergraph("distinguished vertices coincide".into()));
            }
        }
        Ok(OrientedHypergraph { n, ell, arcs, distinguished })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn arcs(&self) -> &[Vec<usize>] {
        &self.arcs
    }

    pub fn distinguished(&self) -> Option<(usize, usize)> {
        self.distinguished
    }

    pub fn with_arc(&self, arc: Vec<usize>) -> Result<Self> {
        let mut arcs = self.arcs.clone();
        arcs.push(arc);
        OrientedHypergraph::new(self.n, self.ell, arcs, self.distinguished)
    }

    /// Parses `n ℓ`, then one arc per line, then optionally
    /// `distinguished u u'`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: usize, message: String| Error::InvalidHypergraph(format!("line {line}: {message}"));
        let mut header = None;
        let mut arcs = Vec::new();
        let mut distinguished = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let mut tokens: Vec<&str> = line.split_whitespace().collect();
            let is_distinguished = tokens[0] == "distinguished";
            if is_distinguished {
                tokens.remove(0);
            }
            let nums: Vec<usize> = tokens
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| bad(lineno, format!("not a vertex label: {t:?}"))))
                .collect::<Result<_>>()?;
            if is_distinguished {
                if nums.len() != 2 || distinguished.is_some() {
                    return Err(bad(lineno, "expected one `distinguished u u'` line".into()));
                }
                distinguished = Some((nums[0], nums[1]));
            } else if header.is_none() {
                if nums.len() != 2 {
                    return Err(bad(lineno, "header must be `n ell`".into()));
                }
                header = Some((nums[0], nums[1]));
            } else if distinguished.is_some() {
                return Err(bad(lineno, "arcs must precede the distinguished line".into()));
            } else {
                arcs.push(nums);
            }
        }
        let (n, ell) = header.ok_or_else(|| Error::InvalidHypergraph("missing `n ell` header".into()))?;
        OrientedHypergraph::new(n, ell, arcs, distinguished)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.ell);
        for arc in &self.arcs {
            let line: Vec<String> = arc.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        if let Some((u, w)) = self.distinguished {
            let _ = writeln!(out, "distinguished {u} {w}");
        }
        out
    }

    fn arc_realizes(&self, arc: &[usize], chi: &[Color], phi: &PatternSet) -> bool {
        let pattern: Vec<Color> = arc.iter().map(|&v| chi[v]).collect();
        phi.contains(&pattern)
    }

    /// True when no arc realizes a pattern of `phi` under `chi`.
    pub fn avoids(&self, chi: &[Color], phi: &PatternSet) -> bool {
        self.arcs.iter().all(|a| !self.arc_realizes(a, chi, phi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "girth", content = "value", rename_all = "snake_case")]
pub enum Girth {
    Exact(usize),
    Infinite,
    /// No circuit among subsets up to the cap; the true girth is at least
    /// this value.
    AtLeast(usize),
}

/// Shortest circuit: `h >= 2` hyperedges covering at most `(ℓ-1)h` vertices.
/// Subsets larger than `cap` are not examined.
pub fn hypergraph_girth(h: &OrientedHypergraph, cap: usize) -> Result<Girth> {
    if h.ell < 2 {
        return Err(Error::InvalidHypergraph("girth needs uniformity at least 2".into()));
    }
    let m = h.arcs.len();
    let mut counts = vec![0usize; h.n];
    for size in 2..=m.min(cap) {
        if has_circuit(h, size, 0, 0, 0, &mut counts) {
            return Ok(Girth::Exact(size));
        }
    }
    if cap >= m {
        Ok(Girth::Infinite)
    } else {
        Ok(Girth::AtLeast(cap.max(1) + 1))
    }
}

fn has_circuit(h: &OrientedHypergraph, size: usize, start: usize, chosen: usize, covered: usize, counts: &mut [usize]) -> bool {
    if chosen == size {
        return covered <= (h.ell - 1) * size;
    }
    let m = h.arcs.len();
    for i in start..=m - (size - chosen) {
        let mut added = 0;
        for &v in &h.arcs[i] {
            if counts[v] == 0 {
                added += 1;
            }
            counts[v] += 1;
        }
        let found = has_circuit(h, size, i + 1, chosen + 1, covered + added, counts);
        for &v in &h.arcs[i] {
            counts[v] -= 1;
        }
        if found {
            return true;
        }
    }
    false
}

/// A set of `ℓ`-tuples over `[q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternSet {
    q: usize,
    ell: usize,
    members: BTreeSet<Vec<Color>>,
}

impl PatternSet {
    pub fn new(q: usize, ell: usize, members: impl IntoIterator<Item = Vec<Color>>) -> Result<Self> {
        let mut set = PatternSet::empty(q, ell);
        for p in members {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub fn empty(q: usize, ell: usize) -> Self {
        PatternSet { q, ell, members: BTreeSet::new() }
    }

    pub fn all(q: usize, ell: usize) -> Self {
        PatternSet { q, ell, members: all_patterns(q, ell).collect() }
    }

    pub fn monochromatic(q: usize, ell: usize) -> Self {
        PatternSet { q, ell, members: (1..=q as Color).map(|c| vec![c; ell]).collect() }
    }

    pub fn insert(&mut self, p: Vec<Color>) -> Result<()> {
        if p.len() != self.ell || p.iter().any(|&c| c == 0 || c as usize > self.q) {
            return Err(Error::InvalidPattern(format!("{p:?} is not a ({},{})-pattern", self.q, self.ell)));
        }
        self.members.insert(p);
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn contains(&self, p: &[Color]) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Color>> {
        self.members.iter()
    }

    pub fn contains_monochromatic(&self) -> bool {
        (1..=self.q as Color).all(|c| self.contains(&vec![c; self.ell]))
    }

    /// Patterns of `[q]^ℓ` using fewer than `q` distinct colors.
    pub fn deficient_patterns(q: usize, ell: usize) -> impl Iterator<Item = Vec<Color>> {
        all_patterns(q, ell).filter(move |p| p.iter().collect::<BTreeSet<_>>().len() < q)
    }
}

/// `[q]^ℓ` in lexicographic order.
pub fn all_patterns(q: usize, ell: usize) -> impl Iterator<Item = Vec<Color>> {
    let total = if q == 0 { 0 } else { q.pow(ell as u32) };
    (0..total).map(move |mut k| {
        let mut p = vec![1 as Color; ell];
        for slot in p.iter_mut().rev() {
            *slot = (k % q) as Color + 1;
            k /= q;
        }
        p
    })
}

fn check_phi(h: &OrientedHypergraph, phi: &PatternSet) -> Result<()> {
    if phi.ell != h.ell {
        return Err(Error::InvalidPattern(format!(
            "patterns have length {} but arcs have {}",
            phi.ell, h.ell
        )));
    }
    Ok(())
}

/// Arcs grouped by their largest vertex, so a DFS over vertices in order can
/// test each arc as soon as it is fully colored.
fn arcs_by_last(h: &OrientedHypergraph) -> Vec<Vec<usize>> {
    let mut by_last = vec![Vec::new(); h.n];
    for (i, arc) in h.arcs.iter().enumerate() {
        by_last[*arc.iter().max().expect("arcs are non-empty")].push(i);
    }
    by_last
}

fn dfs_avoiding(
    h: &OrientedHypergraph,
    phi: &PatternSet,
    q: usize,
    by_last: &[Vec<usize>],
    chi: &mut Vec<Color>,
    visit: &mut dyn FnMut(&[Color]) -> bool,
) -> bool {
    let v = chi.len();
    if v == h.n {
        return visit(chi);
    }
    for c in 1..=q as Color {
        chi.push(c);
        let ok = by_last[v].iter().all(|&i| !h.arc_realizes(&h.arcs[i], chi, phi));
        if ok && dfs_avoiding(h, phi, q, by_last, chi, visit) {
            chi.pop();
            return true;
        }
        chi.pop();
    }
    false
}

/// The lexicographically least `Φ`-avoiding vertex `q`-coloring.
pub fn phi_avoiding_coloring(h: &OrientedHypergraph, phi: &PatternSet, q: usize) -> Result<Option<Vec<Color>>> {
    check_phi(h, phi)?;
    if q == 0 {
        return Ok(if h.n == 0 { Some(Vec::new()) } else { None });
    }
    let by_last = arcs_by_last(h);
    let depth = h.n.min(3);
    let prefixes: Vec<Vec<Color>> = all_patterns(q, depth).collect();
    Ok(prefixes.par_iter().find_map_first(|prefix| {
        let mut chi: Vec<Color> = Vec::with_capacity(h.n);
        for &c in prefix {
            chi.push(c);
            let v = chi.len() - 1;
            if by_last[v].iter().any(|&i| h.arc_realizes(&h.arcs[i], &chi, phi)) {
                return None;
            }
        }
        let mut found = None;
        dfs_avoiding(h, phi, q, &by_last, &mut chi, &mut |c| {
            found = Some(c.to_vec());
            true
        });
        found
    }))
}

/// Calls `visit` on every `Φ`-avoiding coloring in lexicographic order until
/// it returns true.
pub fn for_each_avoiding(
    h: &OrientedHypergraph,
    phi: &PatternSet,
    q: usize,
    mut visit: impl FnMut(&[Color]) -> bool,
) -> Result<()> {
    check_phi(h, phi)?;
    let by_last = arcs_by_last(h);
    dfs_avoiding(h, phi, q, &by_last, &mut Vec::with_capacity(h.n), &mut visit);
    Ok(())
}

/// Which defining properties of a separating hypergraph `h` meets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub girth: Girth,
    pub girth_ok: bool,
    pub colorable: bool,
    pub no_arc_through_both: bool,
    pub always_separated: bool,
}

impl SeparationReport {
    pub fn holds(&self) -> bool {
        self.girth_ok && self.colorable && self.no_arc_through_both && self.always_separated
    }
}

/// Checks girth above `g`, a `Φ`-avoiding coloring, no arc through both
/// distinguished vertices, and distinct colors on them in every avoiding
/// coloring, the last by full enumeration.
pub fn check_separating(h: &OrientedHypergraph, phi: &PatternSet, q: usize, g: usize) -> Result<SeparationReport> {
    let (u, w) = h
        .distinguished
        .ok_or_else(|| Error::InvalidHypergraph("no distinguished vertices".into()))?;
    let girth = hypergraph_girth(h, g)?;
    let girth_ok = match girth {
        Girth::Exact(x) => x > g,
        Girth::Infinite | Girth::AtLeast(_) => true,
    };
    let no_arc_through_both = h.arcs.iter().all(|a| !(a.contains(&u) && a.contains(&w)));
    let mut colorable = false;
    let mut always_separated = true;
    for_each_avoiding(h, phi, q, |chi| {
        colorable = true;
        if chi[u] == chi[w] {
            always_separated = false;
            return true;
        }
        false
    })?;
    Ok(SeparationReport {
        girth,
        girth_ok,
        colorable,
        no_arc_through_both,
        always_separated,
    })
}

/// Exhaustive search over hypergraphs on at most `max_n` vertices with at
/// most `max_arcs` arcs, distinguished vertices 0 and 1. Smaller vertex
/// counts, then fewer arcs, then lexicographically earlier arc lists win.
pub fn toy_hypergraph_search(
    phi: &PatternSet,
    q: usize,
    ell: usize,
    g: usize,
    max_n: usize,
    max_arcs: usize,
) -> Result<Option<OrientedHypergraph>> {
    if phi.q != q || phi.ell != ell {
        return Err(Error::InvalidPattern(format!(
            "pattern set is ({},{}) but the search is for ({q},{ell})",
            phi.q, phi.ell
        )));
    }
    if !phi.contains_monochromatic() {
        return Err(Error::Precondition("forbidden patterns must include every monochromatic pattern".into()));
    }
    if ell < 2 {
        return Err(Error::InvalidHypergraph("uniformity must be at least 2".into()));
    }
    for n in ell.max(2)..=max_n {
        let candidates: Vec<Vec<usize>> = ordered_tuples(n, ell)
            .into_iter()
            .filter(|a| !(a.contains(&0) && a.contains(&1)))
            .collect();
        for m in 1..=max_arcs.min(candidates.len()) {
            let mut found = None;
            let mut pick = Vec::with_capacity(m);
            search_subsets(&candidates, m, 0, &mut pick, &mut |arcs| {
                let h = OrientedHypergraph::new(n, ell, arcs.to_vec(), Some((0, 1))).expect("valid by construction");
                match check_separating(&h, phi, q, g) {
                    Ok(r) if r.holds() => {
                        found = Some(h);
                        true
                    }
                    _ => false,
                }
            });
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

fn ordered_tuples(n: usize, ell: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ell);
    fn rec(n: usize, ell: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == ell {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(n, ell, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, ell, &mut cur, &mut out);
    out
}

fn search_subsets(
    candidates: &[Vec<usize>],
    m: usize,
    start: usize,
    pick: &mut Vec<Vec<usize>>,
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    if pick.len() == m {
        return visit(pick);
    }
    for i in start..=candidates.len() - (m - pick.len()) {
        pick.push(candidates[i].clone());
        if search_subsets(candidates, m, i + 1, pick, visit) {
            return true;
        }
        pick.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, ell: usize, arcs: &[&[usize]]) -> OrientedHypergraph {
        OrientedHypergraph::new(n, ell, arcs.iter().map(|a| a.to_vec()).collect(), None).unwrap()
    }

    #[test]
    fn girth_examples() {
        assert_eq!(hypergraph_girth(&hg(4, 3, &[&[0, 1, 2], &[1, 2, 3]]), 5).unwrap(), Girth::Exact(2));
        assert_eq!(hypergraph_girth(&hg(6, 3, &[&[0, 1, 2], &[3, 4, 5]]), 5).unwrap(), Girth::Infinite);
        let loose = hg(6, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        assert_eq!(hypergraph_girth(&loose, 5).unwrap(), Girth::Exact(3));
        assert_eq!(hypergraph_girth(&loose, 2).unwrap(), Girth::AtLeast(3));
    }

    #[test]
    fn parse_round_trip() {
        let text = "5 2\n0 2\n2 3 # middle\n3 1\ndistinguished 0 1\n";
        let h = OrientedHypergraph::parse(text).unwrap();
        assert_eq!(h.arcs().len(), 3);
        assert_eq!(h.distinguished(), Some((0, 1)));
        assert_eq!(OrientedHypergraph::parse(&h.to_text()).unwrap(), h);
        assert!(OrientedHypergraph::parse("3 2\n0 0\n").is_err());
        assert!(OrientedHypergraph::parse("3 2\n0 1 2\n").is_err());
        assert!(OrientedHypergraph::parse("0 1\n").is_ok());
    }

    #[test]
    fn avoiding_colorings() {
        let h = hg(3, 2, &[&[0, 1]]);
        assert_eq!(phi_avoiding_coloring(&h, &PatternSet::empty(2, 2), 2).unwrap(), Some(vec![1, 1, 1]));
        assert_eq!(phi_avoiding_coloring(&h, &PatternSet::all(2, 2), 2).unwrap(), None);
        assert_eq!(
            phi_avoiding_coloring(&h, &PatternSet::monochromatic(2, 2), 2).unwrap(),
            Some(vec![1, 2, 1])
        );
        assert!(phi_avoiding_coloring(&h, &PatternSet::empty(2, 3), 2).is_err());
    }

    #[test]
    fn patterns() {
        assert_eq!(all_patterns(2, 2).collect::<Vec<_>>(), vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(PatternSet::deficient_patterns(3, 2).count(), 9);
        assert_eq!(PatternSet::deficient_patterns(2, 3).count(), 2);
        assert!(PatternSet::new(2, 2, [vec![1, 3]]).is_err());
    }

    #[test]
    fn toy_search_finds_an_odd_path() {
        let phi = PatternSet::monochromatic(2, 2);
        let h = toy_hypergraph_search(&phi, 2, 2, 2, 5, 4).unwrap().expect("a separating 2-graph exists");
        assert!(check_separating(&h, &phi, 2, 2).unwrap().holds());
        assert!(toy_hypergraph_search(&PatternSet::all(2, 2), 2, 2, 2, 4, 3).unwrap().is_none());
        assert!(toy_hypergraph_search(&PatternSet::empty(2, 2), 2, 2, 2, 4, 3).is_err());
    }
}
