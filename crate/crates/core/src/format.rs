//! graph6 and sparse6 text encodings.
//!
//! Both formats pack bits into 6-bit groups offset by 63 so every byte is
//! printable. graph6 stores the upper triangle column by column; sparse6
//! stores an edge list relative to a running "current vertex".

use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{vertex_cap, Graph};

const GRAPH6_HEADER: &str = ">>graph6<<";
const SPARSE6_HEADER: &str = ">>sparse6<<";

/// A decoding failure, located by byte offset within the line (after any
/// header).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("byte {offset}: malformed length prefix")]
    BadLength { offset: usize },
    #[error("byte {offset}: character {byte:#04x} outside the printable range 63..=126")]
    BadByte { offset: usize, byte: u8 },
    #[error("byte {offset}: expected {expected} data bytes, found {found}")]
    WrongDataLength {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: nonzero padding bits")]
    NonzeroPadding { offset: usize },
    #[error("byte {offset}: graph order {n} exceeds the configured maximum {max}")]
    TooManyVertices { offset: usize, n: usize, max: usize },
    #[error("byte {offset}: sparse6 self-loop or repeated edge {u}-{v}")]
    NotSimple { offset: usize, u: usize, v: usize },
    #[error("empty line")]
    Empty,
}

fn check_byte(offset: usize, byte: u8) -> Result<u8, FormatError> {
    if (63..=126).contains(&byte) {
        Ok(byte - 63)
    } else {
        Err(FormatError::BadByte { offset, byte })
    }
}

/// Decodes the N(n) prefix. Returns `(n, bytes consumed)`.
fn decode_order(bytes: &[u8]) -> Result<(usize, usize), FormatError> {
    let first = *bytes.first().ok_or(FormatError::BadLength { offset: 0 })?;
    if first != 126 {
        return Ok((check_byte(0, first)? as usize, 1));
    }
    let (start, width) = if bytes.get(1) == Some(&126) {
        (2, 6)
    } else {
        (1, 3)
    };
    if bytes.len() < start + width {
        return Err(FormatError::BadLength {
            offset: bytes.len(),
        });
    }
    let mut n = 0usize;
    for (i, &b) in bytes[start..start + width].iter().enumerate() {
        n = (n << 6) | check_byte(start + i, b)? as usize;
    }
    // The long forms are only valid for orders the short forms cannot carry.
    let minimal = if width == 3 { n >= 63 } else { n > 258_047 };
    if !minimal {
        return Err(FormatError::BadLength { offset: start });
    }
    Ok((n, start + width))
}

fn encode_order(n: usize, out: &mut String) {
    if n < 63 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

fn check_cap(offset: usize, n: usize) -> Result<(), FormatError> {
    let max = vertex_cap();
    if n > max {
        return Err(FormatError::TooManyVertices { offset, n, max });
    }
    Ok(())
}

fn push_bits(bits: &[bool], out: &mut String) {
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for i in 0..6 {
            v = (v << 1) | u8::from(chunk.get(i).copied().unwrap_or(false));
        }
        out.push((v + 63) as char);
    }
}

/// Parses one graph6 line. A leading `>>graph6<<` header and surrounding
/// whitespace are tolerated.
pub fn parse_graph6(line: &str) -> Result<Graph, FormatError> {
    let line = line.trim();
    let body = line.strip_prefix(GRAPH6_HEADER).unwrap_or(line);
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(FormatError::Empty);
    }
    let (n, start) = decode_order(bytes)?;
    check_cap(0, n)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let data = &bytes[start..];
    if data.len() != expected {
        return Err(FormatError::WrongDataLength {
            offset: start,
            expected,
            found: data.len(),
        });
    }
    let mut rows = vec![VertexSet::empty(); n];
    let (mut i, mut j) = (0usize, 1usize);
    let mut bit_index = 0usize;
    for (off, &b) in data.iter().enumerate() {
        let val = check_byte(start + off, b)?;
        for shift in (0..6).rev() {
            let set = (val >> shift) & 1 == 1;
            if bit_index >= nbits {
                if set {
                    return Err(FormatError::NonzeroPadding {
                        offset: start + off,
                    });
                }
                continue;
            }
            if set {
                rows[i].insert(j);
                rows[j].insert(i);
            }
            bit_index += 1;
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}

/// Canonical graph6 encoding (no header, zero padding).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::new();
    encode_order(n, &mut out);
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    push_bits(&bits, &mut out);
    out
}

fn sparse6_width(n: usize) -> usize {
    let mut k = 1;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Parses one sparse6 line (leading `:`; optional `>>sparse6<<` header).
/// Only simple graphs are accepted.
pub fn parse_sparse6(line: &str) -> Result<Graph, FormatError> {
    let line = line.trim();
    let body = line.strip_prefix(SPARSE6_HEADER).unwrap_or(line);
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(FormatError::Empty);
    }
    if bytes[0] != b':' {
        return Err(FormatError::BadLength { offset: 0 });
    }
    let (n, used) = decode_order(&bytes[1..]).map_err(|e| match e {
        FormatError::BadLength { offset } => FormatError::BadLength { offset: offset + 1 },
        FormatError::BadByte { offset, byte } => FormatError::BadByte {
            offset: offset + 1,
            byte,
        },
        other => other,
    })?;
    check_cap(1, n)?;
    let start = 1 + used;
    let k = sparse6_width(n);
    let mut bits = Vec::with_capacity((bytes.len() - start) * 6);
    for (off, &b) in bytes[start..].iter().enumerate() {
        let val = check_byte(start + off, b)?;
        for shift in (0..6).rev() {
            bits.push(((val >> shift) & 1 == 1, start + off));
        }
    }
    let mut rows = vec![VertexSet::empty(); n];
    let mut v = 0usize;
    let mut pos = 0usize;
    while pos + 1 + k <= bits.len() {
        let (b, offset) = bits[pos];
        let x = bits[pos + 1..pos + 1 + k]
            .iter()
            .fold(0usize, |acc, &(bit, _)| (acc << 1) | usize::from(bit));
        pos += 1 + k;
        if b {
            v += 1;
        }
        if x >= n || v >= n {
            break;
        }
        if x > v {
            v = x;
        } else {
            if x == v || rows[x].contains(v) {
                return Err(FormatError::NotSimple { offset, u: x, v });
            }
            rows[x].insert(v);
            rows[v].insert(x);
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}

/// sparse6 encoding (no header).
pub fn write_sparse6(g: &Graph) -> String {
    let n = g.n();
    let k = sparse6_width(n);
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (v, u)).collect();
    edges.sort_unstable();
    let mut bits = Vec::new();
    let enc = |x: usize, bits: &mut Vec<bool>| {
        for shift in (0..k).rev() {
            bits.push((x >> shift) & 1 == 1);
        }
    };
    let mut cur = 0usize;
    for (v, u) in edges {
        if v == cur {
            bits.push(false);
            enc(u, &mut bits);
        } else if v == cur + 1 {
            cur = v;
            bits.push(true);
            enc(u, &mut bits);
        } else {
            cur = v;
            bits.push(true);
            enc(v, &mut bits);
            bits.push(false);
            enc(u, &mut bits);
        }
    }
    let pad = (6 - bits.len() % 6) % 6;
    if k < 6 && n == (1 << k) && pad >= k && cur + 1 < n {
        // Padding with ones alone would decode as an edge to vertex n-1.
        bits.push(false);
    }
    let pad = (6 - bits.len() % 6) % 6;
    bits.extend(std::iter::repeat_n(true, pad));
    let mut out = String::from(":");
    encode_order(n, &mut out);
    push_bits(&bits, &mut out);
    out
}

/// Parses either encoding, dispatching on the leading `:` of sparse6.
pub fn parse_any(line: &str) -> Result<Graph, FormatError> {
    let t = line.trim();
    if t.starts_with(':') || t.starts_with(SPARSE6_HEADER) {
        parse_sparse6(t)
    } else {
        parse_graph6(t)
    }
}
