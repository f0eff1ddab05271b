//! Plain-text edge lists: whitespace-separated `u v` pairs, `#` comments, and
//! an optional leading `n <count>` directive that fixes the vertex count
//! (otherwise it is one more than the largest label).

use super::{parse_graph6, Graph};
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        tokens.extend(line.split_whitespace().map(|t| (i + 1, t)));
    }
    let mut declared = None;
    let mut rest = &tokens[..];
    if let Some(&(line, "n")) = rest.first() {
        let Some(&(_, count)) = rest.get(1) else {
            return Err(Error::EdgeList { line, message: "missing vertex count after `n`".into() });
        };
        declared = Some(parse_label(line, count)?);
        rest = &rest[2..];
    }
    if rest.len() % 2 == 1 {
        let (line, t) = rest[rest.len() - 1];
        return Err(Error::EdgeList { line, message: format!("dangling endpoint `{t}`") });
    }
    let mut edges = Vec::with_capacity(rest.len() / 2);
    for pair in rest.chunks(2) {
        let u = parse_label(pair[0].0, pair[0].1)?;
        let v = parse_label(pair[1].0, pair[1].1)?;
        edges.push((pair[1].0, u, v));
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, edges.iter().map(|&(_, u, v)| (u, v))).map_err(|e| match e {
        Error::SelfLoop(_) | Error::DuplicateEdge(_) | Error::VertexOutOfRange { .. } => {
            // Point at the first offending pair.
            let line = first_bad_line(n, &edges).unwrap_or(0);
            Error::EdgeList { line, message: e.to_string() }
        }
        other => other,
    })
}

fn first_bad_line(n: usize, edges: &[(usize, usize, usize)]) -> Option<usize> {
    let mut seen = std::collections::HashSet::new();
    edges.iter().find_map(|&(line, u, v)| {
        let bad = u == v || u >= n || v >= n || !seen.insert((u.min(v), u.max(v)));
        bad.then_some(line)
    })
}

fn parse_label(line: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::EdgeList { line, message: format!("`{token}` is not a vertex label") })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Accepts either format: a single whitespace-free token that is not a bare
/// number is read as graph6, anything else as an edge list.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let meaningful: Vec<&str> = text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let looks_g6 = meaningful.len() == 1
        && !meaningful[0].contains(char::is_whitespace)
        && !meaningful[0].bytes().all(|b| b.is_ascii_digit());
    if looks_g6 {
        parse_graph6(meaningful[0])
    } else {
        parse_edge_list(text)
    }
}
