//! Graph serialization: plain edge lists and the graph6 format.
//!
//! Edge list: first line `n m`, then `m` lines `u v` with 0-based ids.
//! graph6: <https://users.cecs.anu.edu.au/~bdm/data/formats.txt>, optional
//! `>>graph6<<` header accepted on input, never emitted.

use crate::error::{Error, Result};
use crate::graph::Graph;

const G6_HEADER: &str = ">>graph6<<";

/// Parses either supported encoding, sniffing by content: a leading digit
/// means an edge list (digits are not valid graph6 size bytes), anything
/// else is treated as graph6.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let trimmed = text.trim_start();
    match trimmed.chars().next() {
        None => Err(Error::Parse("empty graph input".into())),
        Some(c) if c.is_ascii_digit() => parse_edge_list(text),
        _ => parse_graph6(trimmed.lines().next().unwrap_or("")),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing 'n m' header line".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
    let m: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad edge count".into()))?;
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens on header line".into()));
    }
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut it = line.split_whitespace();
        let u: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line: {line:?}")))?;
        let v: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line: {line:?}")))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens on edge line: {line:?}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header declares {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.strip_prefix(G6_HEADER).unwrap_or(line).trim();
    let bytes: Vec<u8> = line.bytes().collect();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("invalid graph6 byte".into()));
    }
    let vals: Vec<u64> = bytes.iter().map(|&b| (b - 63) as u64).collect();
    if vals.is_empty() {
        return Err(Error::Parse("empty graph6 line".into()));
    }
    let (n, mut pos) = if vals[0] != 63 {
        (vals[0] as usize, 1)
    } else if vals.len() >= 4 && vals[1] != 63 {
        (((vals[1] << 12) | (vals[2] << 6) | vals[3]) as usize, 4)
    } else if vals.len() >= 8 {
        let mut n = 0u64;
        for &v in &vals[2..8] {
            n = (n << 6) | v;
        }
        (n as usize, 8)
    } else {
        return Err(Error::Parse("truncated graph6 size field".into()));
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let avail = (vals.len() - pos) * 6;
    if avail < bits_needed {
        return Err(Error::Parse("truncated graph6 adjacency bits".into()));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    pos *= 6;
    for j in 1..n {
        for i in 0..j {
            let idx = pos + bit;
            if (vals[idx / 6] >> (5 - idx % 6)) & 1 == 1 {
                edges.push((i as u32, j as u32));
            }
            bit += 1;
        }
    }
    Graph::new(n, &edges)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut vals: Vec<u8> = Vec::new();
    if n <= 62 {
        vals.push(n as u8);
    } else {
        // 4096-vertex cap keeps us inside the 18-bit medium form.
        vals.push(63);
        vals.push((n >> 12) as u8 & 63);
        vals.push((n >> 6) as u8 & 63);
        vals.push(n as u8 & 63);
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc <<= 1;
            if g.has_edge(i as u32, j as u32) {
                acc |= 1;
            }
            nbits += 1;
            if nbits == 6 {
                vals.push(acc);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        vals.push(acc << (6 - nbits));
    }
    let mut out: String = vals.iter().map(|&v| (v + 63) as char).collect();
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "4 3\n0 1\n1 2\n2 3\n");
        let h = parse_graph(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn graph6_known_encodings() {
        // K_4, and the worked example from the format description.
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(write_graph6(&k4), "C~\n");
        let g = parse_graph6("DQc").unwrap();
        let expect = Graph::new(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(g, expect);
        assert_eq!(write_graph6(&expect), "DQc\n");
    }

    #[test]
    fn graph6_header_and_round_trip() {
        let g = Graph::new(7, &[(0, 3), (1, 5), (2, 6), (4, 5)]).unwrap();
        let text = write_graph6(&g);
        let h = parse_graph6(&format!("{G6_HEADER}{}", text.trim())).unwrap();
        assert_eq!(g, h);
        let sniffed = parse_graph(&text).unwrap();
        assert_eq!(g, sniffed);
    }

    #[test]
    fn graph6_large_n_form() {
        let edges: Vec<(u32, u32)> = (0..99).map(|i| (i, i + 1)).collect();
        let g = Graph::new(100, &edges).unwrap();
        let text = write_graph6(&g);
        let h = parse_graph6(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("3 1\n0 0\n").is_err());
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("2 1\n0 7\n").is_err());
    }
}
