//! graph6 text encoding (the format used by nauty's `geng`/`showg`).
//!
//! `N(n)` prefix, then the upper triangle of the adjacency matrix read
//! column by column (`(0,1),(0,2),(1,2),(0,3),...`), packed six bits per
//! character and offset by 63.

use thiserror::Error;

use super::Graph;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("byte {offset}: character {byte:#04x} outside the graph6 range 63..=126")]
    BadCharacter { offset: usize, byte: u8 },
    #[error("byte {offset}: malformed length prefix")]
    BadLength { offset: usize },
    #[error("byte {offset}: expected {expected} data characters, found {found}")]
    WrongLength {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: padding bits after the last adjacency bit are not zero")]
    NonzeroPadding { offset: usize },
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

pub fn graph6_encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_order(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

fn sextet(bytes: &[u8], offset: usize) -> Result<usize, Graph6Error> {
    let b = bytes[offset];
    if !(63..=126).contains(&b) {
        return Err(Graph6Error::BadCharacter { offset, byte: b });
    }
    Ok(usize::from(b - 63))
}

fn decode_order(bytes: &[u8], start: usize) -> Result<(usize, usize), Graph6Error> {
    let take = |count: usize, from: usize| -> Result<usize, Graph6Error> {
        if bytes.len() < from + count {
            return Err(Graph6Error::BadLength { offset: from });
        }
        let mut v = 0;
        for k in 0..count {
            v = (v << 6) | sextet(bytes, from + k)?;
        }
        Ok(v)
    };
    if bytes.len() <= start {
        return Err(Graph6Error::BadLength { offset: start });
    }
    let first = sextet(bytes, start)?;
    if first < 63 {
        return Ok((first, start + 1));
    }
    if bytes.len() > start + 1 && bytes[start + 1] == 126 {
        let n = take(6, start + 2)?;
        if n <= 258_047 {
            return Err(Graph6Error::BadLength { offset: start });
        }
        Ok((n, start + 8))
    } else {
        let n = take(3, start + 1)?;
        if n <= 62 {
            return Err(Graph6Error::BadLength { offset: start });
        }
        Ok((n, start + 4))
    }
}

/// Decodes one graph6 string. An optional `>>graph6<<` header and a trailing
/// newline are accepted.
pub fn graph6_decode(text: &str) -> Result<Graph, Graph6Error> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let bytes = trimmed.as_bytes();
    let start = if trimmed.starts_with(HEADER) {
        HEADER.len()
    } else {
        0
    };
    let (n, data_start) = decode_order(bytes, start)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let found = bytes.len() - data_start;
    if found != expected {
        return Err(Graph6Error::WrongLength {
            offset: data_start,
            expected,
            found,
        });
    }
    for k in data_start..bytes.len() {
        sextet(bytes, k)?;
    }
    let mut edges = Vec::new();
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[data_start + bit / 6] - 63;
            if (byte >> (5 - bit % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    if nbits % 6 != 0 {
        let last = data_start + expected - 1;
        let pad = 6 - nbits % 6;
        if (bytes[last] - 63) & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding { offset: last });
        }
    }
    Ok(Graph::from_pairs(n, &edges).expect("decoded pairs are distinct and in range"))
}
