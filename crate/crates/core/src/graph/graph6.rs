//! The graph6 interchange format.
//!
//! Header: `n + 63` for `n <= 62`, otherwise `~` followed by three 6-bit
//! groups (big endian). Payload: the upper triangle read column by column,
//! `x(0,1), x(0,2), x(1,2), x(0,3), ...`, packed six bits per byte, each
//! byte offset by 63.

use super::Graph;
use crate::{Error, Result};

/// Largest order representable with the short and three-byte headers.
pub const MAX_ORDER: usize = (1 << 18) - 1;

const HEADER: &str = ">>graph6<<";

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b} outside the range 63..=126")));
    }
    let (n, payload) = match bytes {
        [] => return Err(Error::Graph6("empty record".into())),
        [126, 126, ..] => return Err(Error::Graph6(format!("orders above {MAX_ORDER} are not supported"))),
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::Graph6("truncated long-form header".into()));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
            (n, &rest[3..])
        }
        [b, rest @ ..] => (usize::from(b - 63), rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if payload.len() != expected {
        return Err(Error::Graph6(format!(
            "payload has {} bytes, expected {expected} for n = {n}",
            payload.len()
        )));
    }
    let bit = |k: usize| (payload[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::new(n, edges)
}

pub fn emit_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > MAX_ORDER {
        return Err(Error::Graph6(format!("order {n} exceeds {MAX_ORDER}")));
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend((0..3).rev().map(|s| ((n >> (6 * s)) & 63) as u8 + 63));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut packed = vec![0u8; bits.div_ceil(6)];
    for &(i, j) in g.edges() {
        // column-major index of (i, j), i < j
        let k = j * (j - 1) / 2 + i;
        packed[k / 6] |= 1 << (5 - k % 6);
    }
    out.extend(packed.into_iter().map(|b| b + 63));
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}
