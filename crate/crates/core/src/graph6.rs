//! graph6 short form (n <= 62).
//!
//! One byte `n + 63`, then the upper triangle `x(0,1), x(0,2), x(1,2), x(0,3), ...`
//! (column by column) packed six bits per byte, most significant bit first, each byte
//! offset by 63 and the last one zero-padded.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_N: usize = 62;

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Parses one graph6 line. A single trailing `\n` (or `\r\n`) is accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text
        .strip_suffix('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .unwrap_or(text);
    let bytes = line.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte 0x{b:02x} is outside the printable range 63..=126")));
    }
    let Some(&first) = bytes.first() else {
        return Err(Error::Graph6("empty line".into()));
    };
    if first == 126 {
        return Err(Error::Graph6("long form (n >= 63) is not supported".into()));
    }
    let n = (first - 63) as usize;
    if n == 0 {
        return Err(Error::NoVertices);
    }
    let body = &bytes[1..];
    let expected = body_len(n);
    if body.len() < expected {
        return Err(Error::Graph6(format!(
            "n = {n} needs {expected} data bytes, found {}",
            body.len()
        )));
    }
    if body.len() > expected {
        return Err(Error::Graph6(format!(
            "{} trailing bytes after the {expected} data bytes for n = {n}",
            body.len() - expected
        )));
    }

    let mut rows = vec![0u64; n];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[bit / 6] - 63;
            if (byte >> (5 - bit % 6)) & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            bit += 1;
        }
    }
    let total = bit;
    while bit < expected * 6 {
        let byte = body[bit / 6] - 63;
        if (byte >> (5 - bit % 6)) & 1 == 1 {
            return Err(Error::Graph6(format!("padding bit {} is set", bit - total)));
        }
        bit += 1;
    }
    Ok(Graph::from_small_rows(n, &rows))
}

/// Encodes `g` in graph6 short form, without a trailing newline.
pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > MAX_N {
        return Err(Error::Graph6TooLarge(n));
    }
    let mut body = vec![0u8; body_len(n)];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                body[bit / 6] |= 1 << (5 - bit % 6);
            }
            bit += 1;
        }
    }
    let mut out = String::with_capacity(1 + body.len());
    out.push((n as u8 + 63) as char);
    out.extend(body.into_iter().map(|b| (b + 63) as char));
    Ok(out)
}

/// Streams graphs from graph6 lines, skipping blank lines. Items carry the 1-based
/// line number.
pub fn read_graph6_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, Result<Graph>)> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Ok(l) if l.trim().is_empty() => None,
        Ok(l) => Some((i + 1, parse_graph6(&l))),
        Err(e) => Some((i + 1, Err(Error::Io(e)))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Hand encoder straight from the format definition, kept separate from the
    /// writer above: collect the bit string, pad, then chunk.
    fn oracle_encode(n: usize, edges: &[(usize, usize)]) -> String {
        let mut bits = Vec::new();
        for j in 1..n {
            for i in 0..j {
                bits.push(edges.contains(&(i, j)) || edges.contains(&(j, i)));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut s = String::new();
        s.push(char::from(n as u8 + 63));
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8);
            s.push(char::from(v + 63));
        }
        s
    }

    #[test]
    fn oracle_matches_known_strings() {
        assert_eq!(oracle_encode(3, &[(0, 1), (0, 2), (1, 2)]), "Bw");
        assert_eq!(oracle_encode(2, &[]), "A?");
        assert_eq!(oracle_encode(2, &[(0, 1)]), "A_");
        // 5 vertices, edges a-c, a-e, b-d, d-e
        assert_eq!(oracle_encode(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]), "DQc");
    }

    #[test]
    fn parse_examples() {
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3, Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap());
        let e2 = parse_graph6("A?").unwrap();
        assert_eq!((e2.n(), e2.edge_count()), (2, 0));
        let k2 = parse_graph6("A_\n").unwrap();
        assert_eq!((k2.n(), k2.edge_count()), (2, 1));
        let g = parse_graph6("DQc").unwrap();
        assert_eq!(g.edges(), vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
    }

    #[test]
    fn write_examples() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(write_graph6(&k3).unwrap(), "Bw");
        assert_eq!(write_graph6(&Graph::from_edges(2, &[]).unwrap()).unwrap(), "A?");
        assert_eq!(write_graph6(&Graph::from_edges(2, &[(0, 1)]).unwrap()).unwrap(), "A_");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_graph6(""), Err(Error::Graph6(_))));
        assert!(matches!(parse_graph6("B"), Err(Error::Graph6(_))));
        assert!(matches!(parse_graph6("Bww"), Err(Error::Graph6(_))));
        assert!(matches!(parse_graph6("B\u{7}"), Err(Error::Graph6(_))));
        assert!(matches!(parse_graph6("B w"), Err(Error::Graph6(_))));
        assert!(matches!(parse_graph6("~??~"), Err(Error::Graph6(_))));
        // n = 2 has one data bit; the five padding bits of '@' (0b000001) are not zero
        assert!(matches!(parse_graph6("A@"), Err(Error::Graph6(_))));
        assert!(matches!(parse_graph6("?"), Err(Error::NoVertices)));
    }

    #[test]
    fn writer_rejects_large_graphs() {
        let g = Graph::from_edges(63, &[]).unwrap();
        assert!(matches!(write_graph6(&g), Err(Error::Graph6TooLarge(63))));
        let g = Graph::from_edges(62, &[(0, 61)]).unwrap();
        assert_eq!(parse_graph6(&write_graph6(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn streams_lines_with_numbers() {
        let text = "Bw\n\nA?\nxx\n";
        let items: Vec<_> = read_graph6_lines(text.as_bytes()).collect();
        assert_eq!(items.len(), 3);
        assert_eq!(items[1].0, 3);
        assert!(items[2].1.is_err());
    }

    proptest! {
        #[test]
        fn round_trip_and_oracle(n in 1usize..=62, pairs in proptest::collection::vec((0usize..62, 0usize..62), 0..120)) {
            let edges: Vec<_> = pairs.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let text = write_graph6(&g).unwrap();
            prop_assert_eq!(&text, &oracle_encode(n, &edges));
            prop_assert_eq!(parse_graph6(&text).unwrap(), g);
        }
    }
}
