use super::Graph;

/// Iterator over the `t`-cliques of a graph, each yielded once as a sorted
/// vertex list, in lexicographic order.
pub struct Cliques<'a> {
    g: &'a Graph,
    t: usize,
    current: Vec<usize>,
    // One frame per depth: candidate set and the next bit to try.
    frames: Vec<(Vec<u64>, usize)>,
    done: bool,
}

pub fn cliques_of_size(g: &Graph, t: usize) -> Cliques<'_> {
    let words = g.words();
    let mut all = vec![0u64; words];
    for v in 0..g.n() {
        all[v / 64] |= 1 << (v % 64);
    }
    Cliques {
        g,
        t,
        current: Vec::with_capacity(t),
        frames: vec![(all, 0)],
        done: false,
    }
}

fn next_bit(set: &[u64], from: usize) -> Option<usize> {
    let mut w = from / 64;
    if w >= set.len() {
        return None;
    }
    let mut word = set[w] & (!0u64).checked_shl((from % 64) as u32).unwrap_or(0);
    loop {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
        w += 1;
        if w >= set.len() {
            return None;
        }
        word = set[w];
    }
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

impl Iterator for Cliques<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.t == 0 {
            self.done = true;
            return Some(Vec::new());
        }
        while let Some((cand, cursor)) = self.frames.last_mut() {
            let Some(v) = next_bit(cand, *cursor) else {
                self.frames.pop();
                self.current.pop();
                continue;
            };
            *cursor = v + 1;
            if self.current.len() + 1 == self.t {
                let mut out = self.current.clone();
                out.push(v);
                return Some(out);
            }
            let need = self.t - self.current.len() - 1;
            let mut next: Vec<u64> = cand.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            // Only vertices after v.
            for (w, word) in next.iter_mut().enumerate() {
                let lo = w * 64;
                if lo + 64 <= v + 1 {
                    *word = 0;
                } else if lo <= v {
                    *word &= !0u64 << (v + 1 - lo);
                }
            }
            if count(&next) >= need {
                self.current.push(v);
                self.frames.push((next, 0));
            }
        }
        self.done = true;
        None
    }
}

/// Order of a largest clique (0 for the graph on no vertices).
pub fn clique_number(g: &Graph) -> usize {
    fn grow(g: &Graph, cand: Vec<u64>, size: usize, best: &mut usize) {
        if size + count(&cand) <= *best {
            return;
        }
        let mut cand = cand;
        let mut from = 0;
        while let Some(v) = next_bit(&cand, from) {
            from = v + 1;
            if size + count(&cand) <= *best {
                return;
            }
            let next: Vec<u64> = cand.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
            *best = (*best).max(size + 1);
            grow(g, next, size + 1, best);
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
    let mut all = vec![0u64; g.words()];
    for v in 0..g.n() {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut best = 0;
    grow(g, all, 0, &mut best);
    best
}
