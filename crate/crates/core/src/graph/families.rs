//! Small named unit-weight graphs.

use super::{Edge, Multigraph};

pub fn complete(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push(Edge::unit(a, b));
        }
    }
    Multigraph::new(n, edges).expect("complete graph is valid")
}

/// Cycle `0 - 1 - ... - (n-1) - 0`; needs `n >= 3`.
pub fn cycle(n: usize) -> Multigraph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let edges = (0..n).map(|i| Edge::unit(i, (i + 1) % n)).collect();
    Multigraph::new(n, edges).expect("cycle is valid")
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Multigraph {
    let edges = (1..n).map(|i| Edge::unit(i - 1, i)).collect();
    Multigraph::new(n, edges).expect("path is valid")
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Multigraph {
    let edges = (1..=leaves).map(|i| Edge::unit(0, i)).collect();
    Multigraph::new(leaves + 1, edges).expect("star is valid")
}

pub fn petersen() -> Multigraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push(Edge::unit(i, (i + 1) % 5));
        edges.push(Edge::unit(i, i + 5));
        edges.push(Edge::unit(5 + i, 5 + (i + 2) % 5));
    }
    Multigraph::new(10, edges).expect("petersen graph is valid")
}
