//! Conductance: exact enumeration for small graphs and a Cheeger bracket
//! (spectral lower bound, sweep-cut upper bound) for the rest.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{cut_weight, volume, Multigraph, VertexSet};
use crate::error::{Error, Result};

/// Largest vertex count accepted by [`conductance_exact`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Vertex count above which the dense eigensolver is not attempted.
const DENSE_EIGEN_LIMIT: usize = 3000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Exact,
    SweepUpperBound,
    CheegerLowerBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConductanceCertificate {
    pub phi: f64,
    /// Cut side realizing `phi`; empty when only a bound is known.
    pub witness: VertexSet,
    pub kind: CertificateKind,
}

/// `|∂S| / min(vol S, vol V∖S)` for a proper side with positive volume on both sides.
fn cut_ratio(g: &Multigraph, s: &VertexSet) -> Option<f64> {
    let vs = volume(g, s);
    let vc = g.total_volume() - vs;
    let denom = vs.min(vc);
    (denom > 0.0).then(|| cut_weight(g, s) / denom)
}

/// The side of a cut with smaller volume; ties go to the side holding vertex 0.
fn smaller_side(g: &Multigraph, side_with_zero: VertexSet) -> VertexSet {
    let v = volume(g, &side_with_zero);
    if v <= g.total_volume() - v {
        side_with_zero
    } else {
        side_with_zero.complement()
    }
}

pub fn conductance_exact(g: &Multigraph) -> Result<ConductanceCertificate> {
    conductance_exact_with_limit(g, DEFAULT_ENUMERATION_LIMIT)
}

/// Minimum of `|∂S| / vol(S)` over all `S` with `vol(S) <= vol(V)/2`, by
/// enumerating every cut with vertex 0 pinned to one side. Disconnected
/// graphs get `phi = 0` with a component as witness.
pub fn conductance_exact_with_limit(
    g: &Multigraph,
    limit: usize,
) -> Result<ConductanceCertificate> {
    let n = g.n();
    if n > limit || n > 63 {
        return Err(Error::SizeLimit {
            what: "exact conductance enumeration (use conductance_bounds)",
            predicted_vertices: n,
            predicted_edges: g.m(),
            cap: limit.min(63),
        });
    }
    if n < 2 {
        return Err(Error::Argument(
            "conductance needs at least two vertices".into(),
        ));
    }
    let labels = g.components();
    if labels.iter().any(|&c| c != 0) || g.m() == 0 {
        let comp = VertexSet::from_mask(labels.iter().map(|&c| c == 0).collect());
        return Ok(ConductanceCertificate {
            phi: 0.0,
            witness: smaller_side(g, comp),
            kind: CertificateKind::Exact,
        });
    }

    let deg = g.weighted_degrees();
    let total = g.total_volume();
    let mut incident: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in g.edges() {
        incident[e.tail].push((e.head, e.weight));
        incident[e.head].push((e.tail, e.weight));
    }

    // Vertices 1..n are free bits; the top `high` of them split the search
    // into independent chunks, each walked in Gray-code order.
    let free = n - 1;
    let high = free.min(6);
    let low = free - high;
    let chunk_best: Vec<Option<(f64, u64)>> = (0..1u64 << high)
        .into_par_iter()
        .map(|chunk| {
            let mut mask: u64 = 1 | (chunk << (1 + low));
            let mut in_a: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            let mut vol_a: f64 = (0..n).filter(|&v| in_a[v]).map(|v| deg[v]).sum();
            let mut cut: f64 = g
                .edges()
                .iter()
                .filter(|e| in_a[e.tail] != in_a[e.head])
                .map(|e| e.weight)
                .sum();
            let mut best: Option<(f64, u64)> = None;
            let mut consider = |cut: f64, vol_a: f64, mask: u64| {
                let denom = vol_a.min(total - vol_a);
                if denom > 0.0 {
                    let r = cut / denom;
                    if best.is_none_or(|(b, _)| r < b) {
                        best = Some((r, mask));
                    }
                }
            };
            consider(cut, vol_a, mask);
            for i in 1..1u64 << low {
                let v = 1 + i.trailing_zeros() as usize;
                for &(u, w) in &incident[v] {
                    if in_a[u] != in_a[v] {
                        cut -= w;
                    } else {
                        cut += w;
                    }
                }
                if in_a[v] {
                    vol_a -= deg[v];
                } else {
                    vol_a += deg[v];
                }
                in_a[v] = !in_a[v];
                mask ^= 1 << v;
                consider(cut, vol_a, mask);
            }
            best
        })
        .collect();

    let (_, mask) = chunk_best
        .into_iter()
        .flatten()
        .fold(None::<(f64, u64)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
        .expect("connected graph with an edge has a proper cut");
    let witness = smaller_side(g, VertexSet::from_bits(n, mask));
    let phi = cut_weight(g, &witness) / volume(g, &witness);
    Ok(ConductanceCertificate {
        phi,
        witness,
        kind: CertificateKind::Exact,
    })
}

/// Cheeger bracket `λ₂/2 <= Φ <= sweep(u₂)` from the normalized Laplacian.
/// The upper certificate carries the best sweep cut of `D^{-1/2} u₂`.
pub fn conductance_bounds(
    g: &Multigraph,
) -> Result<(ConductanceCertificate, ConductanceCertificate)> {
    g.ensure_connected()?;
    let n = g.n();
    if n > DENSE_EIGEN_LIMIT {
        return Err(Error::SizeLimit {
            what: "dense spectral conductance bound",
            predicted_vertices: n,
            predicted_edges: g.m(),
            cap: DENSE_EIGEN_LIMIT,
        });
    }
    let deg = g.weighted_degrees();
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut norm_lap = DMatrix::<f64>::identity(n, n);
    for e in g.edges() {
        let s = e.weight * inv_sqrt[e.tail] * inv_sqrt[e.head];
        norm_lap[(e.tail, e.head)] -= s;
        norm_lap[(e.head, e.tail)] -= s;
    }
    let eig = norm_lap
        .clone()
        .try_symmetric_eigen(1e-14, 100_000)
        .ok_or_else(|| Error::Convergence {
            what: "normalized Laplacian eigendecomposition",
            iterations: 100_000,
            estimate: f64::NAN,
            last_iterate: Vec::new(),
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lambda2 = eig.eigenvalues[order[1]].max(0.0);
    let fiedler: Vec<f64> = (0..n)
        .map(|v| eig.eigenvectors[(v, order[1])] * inv_sqrt[v])
        .collect();

    let witness = sweep_cut(g, &fiedler);
    let upper_phi = cut_ratio(g, &witness).expect("sweep cut is proper");
    let lower = ConductanceCertificate {
        phi: (lambda2 / 2.0).min(upper_phi),
        witness: VertexSet::empty(n),
        kind: CertificateKind::CheegerLowerBound,
    };
    let upper = ConductanceCertificate {
        phi: upper_phi,
        witness,
        kind: CertificateKind::SweepUpperBound,
    };
    Ok((lower, upper))
}

/// Best prefix cut of the vertices sorted by `score`, as its smaller-volume side.
pub(crate) fn sweep_cut(g: &Multigraph, score: &[f64]) -> VertexSet {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
    let deg = g.weighted_degrees();
    let total = g.total_volume();
    let adj = g.adjacency();
    let mut in_s = vec![false; n];
    let (mut cut, mut vol) = (0.0, 0.0);
    let mut best = (f64::INFINITY, 0usize);
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        for &(u, ei) in &adj[v] {
            let w = g.edge(ei).weight;
            if in_s[u] {
                cut -= w;
            } else {
                cut += w;
            }
        }
        in_s[v] = true;
        vol += deg[v];
        let denom = vol.min(total - vol);
        if denom > 0.0 && cut / denom < best.0 {
            best = (cut / denom, k + 1);
        }
    }
    let side = VertexSet::from_indices(n, order[..best.1].iter().copied()).expect("in range");
    let side = if side.contains(0) {
        side
    } else {
        side.complement()
    };
    smaller_side(g, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::{gen_random_regular, Edge};

    /// Plain enumeration over every subset, no pinning, no Gray code.
    fn brute_force(g: &Multigraph) -> f64 {
        let n = g.n();
        let total = g.total_volume();
        let mut best = f64::INFINITY;
        for bits in 1..(1u64 << n) - 1 {
            let s = VertexSet::from_bits(n, bits);
            let v = volume(g, &s);
            if v > 0.0 && v <= total / 2.0 {
                best = best.min(cut_weight(g, &s) / v);
            }
        }
        best
    }

    #[test]
    fn k2_and_c4() {
        let c = conductance_exact(&complete(2)).unwrap();
        assert_eq!(c.phi, 1.0);
        assert_eq!(c.witness.iter().collect::<Vec<_>>(), vec![0]);
        let c4 = conductance_exact(&cycle(4)).unwrap();
        assert_eq!(c4.phi, 0.5);
        assert_eq!(c4.witness.len(), 2);
        assert_eq!(volume(&cycle(4), &c4.witness), 4.0);
        assert_eq!(cut_weight(&cycle(4), &c4.witness), 2.0);
    }

    #[test]
    fn disconnected_is_zero() {
        let g = Multigraph::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let c = conductance_exact(&g).unwrap();
        assert_eq!(c.phi, 0.0);
        assert_eq!(cut_weight(&g, &c.witness), 0.0);
        assert!(c.witness.contains(0));
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..6 {
            let g = gen_random_regular(10, 3, seed).unwrap();
            let c = conductance_exact(&g).unwrap();
            assert!((c.phi - brute_force(&g)).abs() < 1e-12);
            assert!(volume(&g, &c.witness) <= g.total_volume() / 2.0);
        }
        for g in [petersen(), path(7), star(5), complete(6)] {
            assert!((conductance_exact(&g).unwrap().phi - brute_force(&g)).abs() < 1e-12);
        }
        let w = Multigraph::new(
            4,
            vec![
                Edge::new(0, 1, 3.0),
                Edge::new(1, 2, 1.0),
                Edge::new(2, 3, 2.5),
                Edge::new(3, 0, 1.0),
            ],
        )
        .unwrap();
        assert!((conductance_exact(&w).unwrap().phi - brute_force(&w)).abs() < 1e-12);
    }

    #[test]
    fn size_limit() {
        let g = cycle(30);
        assert!(matches!(
            conductance_exact(&g),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn cheeger_brackets_exact() {
        for g in [complete(2), cycle(4), petersen(), path(6)] {
            let exact = conductance_exact(&g).unwrap().phi;
            let (lo, hi) = conductance_bounds(&g).unwrap();
            assert!(lo.phi <= exact + 1e-12, "{} > {}", lo.phi, exact);
            assert!(exact <= hi.phi + 1e-12);
            assert_eq!(hi.kind, CertificateKind::SweepUpperBound);
        }
    }

    #[test]
    fn bounds_need_connectivity() {
        let g = Multigraph::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            conductance_bounds(&g),
            Err(Error::Disconnected { .. })
        ));
    }
}
