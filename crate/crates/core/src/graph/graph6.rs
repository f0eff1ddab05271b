//! The graph6 text format: a size header followed by the upper triangle of
//! the adjacency matrix, column by column, packed six bits per printable byte.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Graph6ErrorKind, Result};

const BIAS: u8 = 63;
const LONG: u8 = 126;
const HEADER: &str = ">>graph6<<";

fn err(offset: usize, kind: Graph6ErrorKind) -> Error {
    Error::Graph6 { offset, kind }
}

fn sextet(bytes: &[u8], pos: usize) -> Result<u64> {
    match bytes.get(pos) {
        None => Err(err(pos, Graph6ErrorKind::Truncated)),
        Some(&b) if !(BIAS..=LONG).contains(&b) => Err(err(pos, Graph6ErrorKind::OutOfRangeByte(b))),
        Some(&b) => Ok(u64::from(b - BIAS)),
    }
}

/// Decodes one graph6 string. Surrounding whitespace and the optional
/// `>>graph6<<` header are accepted; offsets in errors index into `text`.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let lead = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = lead;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        base += HEADER.len();
    }
    let bytes = body.as_bytes();
    let at = |pos: usize| base + pos;

    let first = sextet(bytes, 0).map_err(|e| shift(e, base))?;
    let (n, mut pos) = if bytes[0] != LONG {
        (first as usize, 1)
    } else if bytes.get(1) == Some(&LONG) {
        let mut n = 0u64;
        for i in 2..8 {
            n = (n << 6) | sextet(bytes, i).map_err(|e| shift(e, base))?;
        }
        if n < 258_048 {
            return Err(err(at(0), Graph6ErrorKind::MalformedHeader));
        }
        (n as usize, 8)
    } else {
        let mut n = 0u64;
        for i in 1..4 {
            n = (n << 6) | sextet(bytes, i).map_err(|e| shift(e, base))?;
        }
        if n < 63 {
            return Err(err(at(0), Graph6ErrorKind::MalformedHeader));
        }
        (n as usize, 4)
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { n, cap: MAX_VERTICES });
    }

    let total_bits = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut bit = 0usize;
    let mut word = 0u64;
    let mut left = 0u32;
    for v in 1..n {
        for u in 0..v {
            if left == 0 {
                word = sextet(bytes, pos).map_err(|e| shift(e, base))?;
                pos += 1;
                left = 6;
            }
            left -= 1;
            if word >> left & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    debug_assert_eq!(bit, total_bits);
    if pos < bytes.len() {
        return Err(err(at(pos), Graph6ErrorKind::TrailingData));
    }
    Graph::from_edges(n, edges)
}

fn shift(e: Error, base: usize) -> Error {
    match e {
        Error::Graph6 { offset, kind } => Error::Graph6 { offset: offset + base, kind },
        other => other,
    }
}

/// Encodes `g` as graph6 (no header, no trailing newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::with_capacity(8 + n * n / 12);
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else if n < 258_048 {
        out.push(LONG);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    } else {
        out.push(LONG);
        out.push(LONG);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph};

    #[test]
    fn triangle_is_bw() {
        assert_eq!(write_graph6(&complete_graph(3).unwrap()), "Bw");
        assert_eq!(parse_graph6("Bw").unwrap(), complete_graph(3).unwrap());
    }

    #[test]
    fn known_strings() {
        // K6 and C5 as produced by nauty's geng/showg conventions.
        assert_eq!(write_graph6(&complete_graph(6).unwrap()), "E~~w");
        assert_eq!(write_graph6(&cycle_graph(5).unwrap()), "Dhc");
        let g = parse_graph6("E?~o").unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(write_graph6(&g), "E?~o");
    }

    #[test]
    fn header_and_whitespace() {
        assert_eq!(parse_graph6("  >>graph6<<Bw\n").unwrap().edge_count(), 3);
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(
            parse_graph6(""),
            Err(Error::Graph6 { offset: 0, kind: Graph6ErrorKind::Truncated })
        ));
        assert!(matches!(
            parse_graph6("E~"),
            Err(Error::Graph6 { offset: 2, kind: Graph6ErrorKind::Truncated })
        ));
        assert!(matches!(
            parse_graph6("B!"),
            Err(Error::Graph6 { offset: 1, kind: Graph6ErrorKind::OutOfRangeByte(b'!') })
        ));
        assert!(matches!(
            parse_graph6("Bww"),
            Err(Error::Graph6 { offset: 2, kind: Graph6ErrorKind::TrailingData })
        ));
        assert!(matches!(
            parse_graph6("~?@"),
            Err(Error::Graph6 { offset: 3, kind: Graph6ErrorKind::Truncated })
        ));
        assert!(matches!(
            parse_graph6("~??B"),
            Err(Error::Graph6 { offset: 0, kind: Graph6ErrorKind::MalformedHeader })
        ));
    }

    #[test]
    fn long_header_round_trip() {
        let g = complete_graph(70).unwrap();
        let s = write_graph6(&g);
        assert_eq!(s.as_bytes()[0], LONG);
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }
}
