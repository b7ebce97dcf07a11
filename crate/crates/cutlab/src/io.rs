//! Graph serialization: graph6 strings and a plain edge-list text format.
//!
//! graph6 packs the upper triangle of the adjacency matrix in column-major
//! order (exactly the colexicographic pair order used throughout the crate)
//! into 6-bit printable characters.  The edge-list format is an "n m" header
//! line followed by one "u v" line per edge.  Both round-trip bit-exactly.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};
use crate::pairs::{pair_count, pair_from_index};

/// Encodes a graph as a graph6 string (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else {
        // 18-bit size form: '~' then three sextets, most significant first.
        bytes.push(126);
        bytes.push(((n >> 12) & 63) as u8 + 63);
        bytes.push(((n >> 6) & 63) as u8 + 63);
        bytes.push((n & 63) as u8 + 63);
    }
    let bits = pair_count(n);
    let mut sextet = 0u8;
    let mut filled = 0;
    for i in 0..bits {
        let (u, v) = pair_from_index(i);
        sextet = (sextet << 1) | u8::from(g.has_edge(u, v));
        filled += 1;
        if filled == 6 {
            bytes.push(sextet + 63);
            sextet = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        bytes.push((sextet << (6 - filled)) + 63);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

/// Decodes a graph6 string; rejects malformed input, including nonzero
/// padding bits, so that encoding is the exact inverse.
pub fn from_graph6(s: &str) -> Result<Graph> {
    let bytes = s.trim_end_matches(['\r', '\n']).as_bytes();
    if bytes.is_empty() {
        return Err(Error::format("empty graph6 string"));
    }
    let (n, rest) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(Error::format("truncated graph6 size field"));
        }
        let mut n = 0usize;
        for &b in &bytes[1..4] {
            if !(63..=126).contains(&b) {
                return Err(Error::format(format!("invalid graph6 byte {b}")));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, &bytes[4..])
    } else {
        if !(63..=126).contains(&bytes[0]) {
            return Err(Error::format(format!("invalid graph6 byte {}", bytes[0])));
        }
        ((bytes[0] - 63) as usize, &bytes[1..])
    };
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::parameter(format!(
            "graph6 vertex count {n} outside 1..={MAX_VERTICES}"
        )));
    }
    let bits = pair_count(n);
    let expect_bytes = bits.div_ceil(6);
    if rest.len() != expect_bytes {
        return Err(Error::format(format!(
            "graph6 body has {} bytes, expected {expect_bytes} for n={n}",
            rest.len()
        )));
    }
    let mut edges = Vec::new();
    for i in 0..bits {
        let b = rest[i / 6];
        if !(63..=126).contains(&b) {
            return Err(Error::format(format!("invalid graph6 byte {b}")));
        }
        let bit = (b - 63) >> (5 - (i % 6)) & 1;
        if bit == 1 {
            edges.push(pair_from_index(i));
        }
    }
    // Padding bits beyond the triangle must be zero.
    if bits % 6 != 0 {
        let last = rest[rest.len() - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Error::format("nonzero padding bits in graph6 string"));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Writes the "n m" header plus one "u v" line per edge, colex order.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses the edge-list format; the header must match the body exactly.
pub fn from_edge_list(s: &str) -> Result<Graph> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::format("empty edge list"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::format("edge list header is not \"n m\""))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::format("edge list header is not \"n m\""))?;
    if it.next().is_some() {
        return Err(Error::format("trailing tokens in edge list header"));
    }
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::format(format!("bad edge line {line:?}")))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::format(format!("bad edge line {line:?}")))?;
        if it.next().is_some() {
            return Err(Error::format(format!(
                "trailing tokens in edge line {line:?}"
            )));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::format(format!(
            "header promises {m} edges, body has {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, &edges)
}

/// Parses either format: a leading digit means edge list, anything else is
/// read as a graph6 line.  (graph6 bytes are all >= '?', so the two formats
/// never collide on the first character.)
pub fn parse_graph(text: &str) -> Result<Graph> {
    match text.trim_start().chars().next() {
        Some(c) if c.is_ascii_digit() => from_edge_list(text),
        Some(_) => from_graph6(text),
        None => Err(Error::format("empty graph input")),
    }
}
