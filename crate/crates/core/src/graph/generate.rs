use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Edge, Multigraph};
use crate::error::{Error, Result};

/// Default cap on the number of edges the blow-up constructions may produce.
pub const DEFAULT_EDGE_CAP: usize = 2_000_000;

const REGULAR_RETRY_CAP: usize = 200_000;

/// Connected simple `d`-regular graph on `n` vertices drawn from the pairing
/// model. Any pairing with a self-loop or a repeated pair, and any
/// disconnected outcome, is discarded and redrawn.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Multigraph> {
    if d < 3 {
        return Err(Error::Argument(format!(
            "degree must be at least 3, got {d}"
        )));
    }
    if n <= d {
        return Err(Error::Argument(format!("need n > d, got n = {n}, d = {d}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "n * d must be even, got {n} * {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n * d).map(|p| p / d).collect();
    let mut seen = HashSet::with_capacity(n * d / 2);
    'attempt: for _ in 0..REGULAR_RETRY_CAP {
        points.shuffle(&mut rng);
        seen.clear();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue 'attempt;
            }
            let e = Edge::unit(a.min(b), a.max(b));
            if !seen.insert(e.key()) {
                continue 'attempt;
            }
            edges.push(e);
        }
        let g = Multigraph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Argument(format!(
        "no simple connected {d}-regular graph on {n} vertices after {REGULAR_RETRY_CAP} pairings"
    )))
}

/// Replaces every edge `(u, v)` by `k` vertex-disjoint paths of `k` unit
/// edges from `u` to `v`. Original vertices keep their ids; the `k * (k - 1)`
/// internal vertices of edge `i` are numbered consecutively after the
/// original vertices, path by path.
pub fn gadget_subdivide(g: &Multigraph, k: usize, edge_cap: usize) -> Result<Multigraph> {
    if k == 0 {
        return Err(Error::Argument(
            "gadget path count k must be positive".into(),
        ));
    }
    if !g.is_unit_weight() {
        return Err(Error::Argument(
            "gadget construction needs a unit-weight graph".into(),
        ));
    }
    let predicted_edges = g.m().saturating_mul(k).saturating_mul(k);
    let predicted_vertices = g.n() + g.m().saturating_mul(k).saturating_mul(k - 1);
    if predicted_edges > edge_cap {
        return Err(Error::SizeLimit {
            what: "gadget",
            predicted_vertices,
            predicted_edges,
            cap: edge_cap,
        });
    }
    let mut next = g.n();
    let mut edges = Vec::with_capacity(predicted_edges);
    for e in g.edges() {
        for _ in 0..k {
            let mut prev = e.tail;
            for _ in 1..k {
                edges.push(Edge::unit(prev, next));
                prev = next;
                next += 1;
            }
            edges.push(Edge::unit(prev, e.head));
        }
    }
    debug_assert_eq!(next, predicted_vertices);
    Multigraph::new(next, edges)
}

/// Edge-multiset union on the larger of the two vertex ranges.
pub fn graph_union(g: &Multigraph, h: &Multigraph) -> Multigraph {
    let mut edges = Vec::with_capacity(g.m() + h.m());
    edges.extend_from_slice(g.edges());
    edges.extend_from_slice(h.edges());
    Multigraph::new(g.n().max(h.n()), edges).expect("union of valid graphs is valid")
}

/// Unit-weight multigraph in which edge `e` becomes a path of `lengths[e]`
/// hops, each hop made of `capacities[e]` parallel unit edges.
pub fn weighted_to_multigraph(
    g: &Multigraph,
    capacities: &[u64],
    lengths: &[u64],
    edge_cap: usize,
) -> Result<Multigraph> {
    if capacities.len() != g.m() || lengths.len() != g.m() {
        return Err(Error::Argument(format!(
            "expected {} capacities and lengths, got {} and {}",
            g.m(),
            capacities.len(),
            lengths.len()
        )));
    }
    if capacities.iter().chain(lengths).any(|&x| x == 0) {
        return Err(Error::Argument(
            "capacities and lengths must be positive".into(),
        ));
    }
    let predicted_edges: u128 = capacities
        .iter()
        .zip(lengths)
        .map(|(&c, &s)| c as u128 * s as u128)
        .sum();
    let internal: u128 = lengths.iter().map(|&s| s as u128 - 1).sum();
    if predicted_edges > edge_cap as u128 {
        return Err(Error::SizeLimit {
            what: "multigraph expansion",
            predicted_vertices: (g.n() as u128 + internal).min(usize::MAX as u128) as usize,
            predicted_edges: predicted_edges.min(usize::MAX as u128) as usize,
            cap: edge_cap,
        });
    }
    let mut next = g.n();
    let mut edges = Vec::with_capacity(predicted_edges as usize);
    for (e, (&c, &s)) in g.edges().iter().zip(capacities.iter().zip(lengths)) {
        let mut prev = e.tail;
        for hop in 0..s {
            let to = if hop + 1 == s {
                e.head
            } else {
                next += 1;
                next - 1
            };
            for _ in 0..c {
                edges.push(Edge::unit(prev, to));
            }
            prev = to;
        }
    }
    Multigraph::new(next, edges)
}
