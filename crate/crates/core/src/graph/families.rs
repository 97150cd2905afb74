//! Named graph families and the `family:param` spec mini-language.

use super::{parse_graph6, Graph};
use crate::{Error, Result};

pub fn cycle(n: usize) -> Result<Graph> {
    at_least("cycle", n, 3)?;
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path on `k` vertices.
pub fn path(k: usize) -> Result<Graph> {
    at_least("path", k, 1)?;
    Graph::new(k, (1..k).map(|i| (i - 1, i)))
}

/// Star with `k` leaves around centre 0.
pub fn star(k: usize) -> Result<Graph> {
    at_least("star", k, 1)?;
    Graph::new(k + 1, (1..=k).map(|i| (0, i)))
}

pub fn complete(n: usize) -> Result<Graph> {
    at_least("complete", n, 1)?;
    Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

/// Circular ladder CL(n): outer cycle `0..n`, inner cycle `n..2n`, rungs
/// `(i, n + i)`.
pub fn circular_ladder(n: usize) -> Result<Graph> {
    at_least("cl", n, 3)?;
    let outer = (0..n).map(|i| (i, (i + 1) % n));
    let inner = (0..n).map(|i| (n + i, n + (i + 1) % n));
    let rungs = (0..n).map(|i| (i, n + i));
    Graph::new(2 * n, outer.chain(inner).chain(rungs))
}

/// Moebius ladder ML(n): the cycle `0..2n` plus the diameters `(i, n + i)`.
///
/// With these labels ML(n) is CL(n) with `(0, n-1)`, `(n, 2n-1)` replaced by
/// `(n-1, n)`, `(0, 2n-1)`.
pub fn moebius_ladder(n: usize) -> Result<Graph> {
    at_least("ml", n, 3)?;
    let m = 2 * n;
    let rim = (0..m).map(|i| (i, (i + 1) % m));
    let diameters = (0..n).map(|i| (i, n + i));
    Graph::new(m, rim.chain(diameters))
}

/// Four-cycle with a pendant edge at vertex 0.
pub fn dragon() -> Graph {
    Graph::new(5, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4)]).expect("static graph")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, 5 + i));
    Graph::new(10, outer.chain(inner).chain(spokes)).expect("static graph")
}

/// Parses a graph spec:
/// `cycle:n | path:n | star:n | cl:n | ml:n | dragon | petersen | complete:n |
/// g6:<string> | file:<path>`.
///
/// `file:` reads the first non-empty line of the file as graph6.
pub fn generate(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    let (family, arg) = match spec.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (spec, None),
    };
    let int = || -> Result<usize> {
        let a = arg.ok_or_else(|| bad(spec, "missing size parameter"))?;
        a.trim()
            .parse()
            .map_err(|_| bad(spec, &format!("`{a}` is not a nonnegative integer")))
    };
    let no_arg = |g: Graph| -> Result<Graph> {
        match arg {
            Some(_) => Err(bad(spec, "family takes no parameter")),
            None => Ok(g),
        }
    };
    let sized = |r: Result<Graph>| r.map_err(|e| bad(spec, &e.to_string()));
    match family {
        "cycle" => sized(cycle(int()?)),
        "path" => sized(path(int()?)),
        "star" => sized(star(int()?)),
        "cl" => sized(circular_ladder(int()?)),
        "ml" => sized(moebius_ladder(int()?)),
        "complete" => sized(complete(int()?)),
        "dragon" => no_arg(dragon()),
        "petersen" => no_arg(petersen()),
        "g6" => parse_graph6(arg.unwrap_or("")),
        "file" => {
            let p = arg.ok_or_else(|| bad(spec, "missing path"))?;
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{p}: {e}")))?;
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| bad(spec, "file contains no graph6 record"))?;
            parse_graph6(line)
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn at_least(family: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "{family} needs size parameter >= {min}, got {n}"
        )));
    }
    Ok(())
}

fn bad(spec: &str, reason: &str) -> Error {
    Error::BadGraphSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    }
}
