use rand::Rng;

use super::Graph;
use crate::{Error, Result};

/// Rejection-sampling budget for a single swap.
pub const MAX_SWAP_ATTEMPTS: usize = 10_000;

/// One degree-preserving double edge swap.
///
/// Picks two edges `(a,b)`, `(c,d)` on four distinct vertices and replaces
/// them with `(a,c)`, `(b,d)`; the orientation of each edge is random, so
/// both rewirings are reachable. Swaps that would create a parallel edge are
/// resampled. Connectivity is not enforced.
pub fn walk_step<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Graph> {
    let m = g.edge_count();
    if m < 2 {
        return Err(Error::NoValidSwap(0));
    }
    let edges = g.edges();
    for _ in 0..MAX_SWAP_ATTEMPTS {
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m - 1);
        let j = if j >= i { j + 1 } else { j };
        let (mut a, mut b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen::<bool>() {
            std::mem::swap(&mut a, &mut b);
        }
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if a == c || a == d || b == c || b == d {
            continue;
        }
        if g.has_edge(a, c) || g.has_edge(b, d) {
            continue;
        }
        let next = edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &e)| e)
            .chain([(a, c), (b, d)]);
        return Graph::new(g.n(), next);
    }
    Err(Error::NoValidSwap(MAX_SWAP_ATTEMPTS))
}
