use super::{arrows, is_free, CliqueTuple, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// `g` arrows `t` and no single-edge deletion does.
pub fn is_minimal(g: &Graph, t: &CliqueTuple) -> Result<bool> {
    if !arrows(g, t)?.arrows {
        return Ok(false);
    }
    for i in 0..g.edge_count() {
        if arrows(&g.without_edge(i), t)?.arrows {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deletes edges greedily in canonical order while arrowing survives, then
/// drops isolated vertices. One pass suffices: an edge kept once stays
/// necessary in every later subgraph.
pub fn minimal_subgraph(g: &Graph, t: &CliqueTuple) -> Result<Graph> {
    if !arrows(g, t)?.arrows {
        return Err(Error::Precondition(format!("graph does not arrow ({t})")));
    }
    let mut current = g.clone();
    for &(u, v) in g.edges() {
        let idx = current.edge_index((u, v).into()).expect("edge still present");
        let candidate = current.without_edge(idx);
        if arrows(&candidate, t)?.arrows {
            current = candidate;
        }
    }
    Ok(current.without_isolated().0)
}

/// Freeness of `sigma ∘ c`. `sigma[i-1]` is the image of color `i` and may
/// only move colors among equal clique orders.
pub fn color_class_permutation_check(g: &Graph, c: &Coloring, t: &CliqueTuple, sigma: &[Color]) -> Result<bool> {
    if !t.respects_classes(sigma) {
        return Err(Error::Precondition(format!(
            "permutation {sigma:?} mixes colors of different orders in ({t})"
        )));
    }
    is_free(g, &c.permuted(sigma), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    #[test]
    fn k6_is_minimal_k7_is_not() {
        let t: CliqueTuple = "3,3".parse().unwrap();
        let k6 = complete_graph(6).unwrap();
        assert!(is_minimal(&k6, &t).unwrap());
        let k7 = complete_graph(7).unwrap();
        assert!(!is_minimal(&k7, &t).unwrap());
        assert_eq!(minimal_subgraph(&k7, &t).unwrap(), k6);
        assert!(minimal_subgraph(&complete_graph(5).unwrap(), &t).is_err());
    }

    #[test]
    fn permutation_classes() {
        let k3 = complete_graph(3).unwrap();
        let c = Coloring::from_colors(vec![1, 1, 2]);
        let t: CliqueTuple = "3,3".parse().unwrap();
        assert!(color_class_permutation_check(&k3, &c, &t, &[1, 2]).unwrap());
        assert!(color_class_permutation_check(&k3, &c, &t, &[2, 1]).unwrap());
        let u: CliqueTuple = "4,3".parse().unwrap();
        assert!(color_class_permutation_check(&k3, &c, &u, &[2, 1]).is_err());
    }
}
