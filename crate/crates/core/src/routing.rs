//! Electrical flow routing `A = W Bᵀ L⁺` and its competitive ratios.
//!
//! `ρ_∞` is computed from one Laplacian solve per distinct edge endpoint pair
//! as `max_e ‖W Bᵀ L⁺ χ_e‖₁`. Other exponents go through the dense matrix
//! `|W⁻¹ A B W|` (which is `|Π|` on unit-weight graphs) and an induced norm.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{conductance_bounds, conductance_exact, Multigraph, DEFAULT_ENUMERATION_LIMIT};
use crate::linalg::{
    induced_norm, norm2, LaplacianSolver, LinearOperator, PNorm, DEFAULT_NORM_ITER_CAP,
    DEFAULT_NORM_TOL,
};

/// Largest edge count for which `|Π|` is materialized.
pub const DEFAULT_DENSE_EDGE_CAP: usize = 4000;

/// Floor asserted on every competitive ratio.
pub const RHO_FLOOR: f64 = 1.0 - 1e-6;

/// Vertex-indexed vector summing to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Demand(Vec<f64>);

impl Demand {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let l1: f64 = values.iter().map(|v| v.abs()).sum();
        let sum: f64 = values.iter().sum();
        if sum.abs() > 1e-12 * l1.max(f64::MIN_POSITIVE) {
            return Err(Error::Contract(format!("demand sums to {sum:e}, not zero")));
        }
        Ok(Demand(values))
    }

    /// `1_a - 1_b`.
    pub fn pair(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::Argument(format!("pair ({a}, {b}) outside [0, {n})")));
        }
        let mut v = vec![0.0; n];
        v[a] += 1.0;
        v[b] -= 1.0;
        Ok(Demand(v))
    }

    /// Unit demand across edge `e = (tail, head)`: `1_tail - 1_head`.
    pub fn edge(g: &Multigraph, e: usize) -> Self {
        let edge = g.edge(e);
        Self::pair(g.n(), edge.tail, edge.head).expect("edge endpoints are in range")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Edge-indexed flow, signed relative to each edge's stored orientation
/// (positive means tail to head).
#[derive(Debug, Clone, PartialEq)]
pub struct Flow(pub Vec<f64>);

impl Flow {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn l1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    /// `B f`: net inflow at each vertex.
    pub fn divergence(&self, g: &Multigraph) -> Vec<f64> {
        let mut out = vec![0.0; g.n()];
        for (e, f) in g.edges().iter().zip(&self.0) {
            out[e.head] += f;
            out[e.tail] -= f;
        }
        out
    }

    /// `fᵀ W⁻¹ f`.
    pub fn energy(&self, g: &Multigraph) -> f64 {
        g.edges()
            .iter()
            .zip(&self.0)
            .map(|(e, f)| f * f / e.weight)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VoltageOffset {
    /// Orthogonal to `1`, as returned by the solver.
    Raw,
    /// Shifted by the given amount after solving.
    Shifted(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoltageProfile {
    pub values: Vec<f64>,
    pub offset: VoltageOffset,
}

impl VoltageProfile {
    /// `vᵀ L v`.
    pub fn energy(&self, g: &Multigraph) -> f64 {
        g.edges()
            .iter()
            .map(|e| e.weight * (self.values[e.head] - self.values[e.tail]).powi(2))
            .sum()
    }
}

/// The electrical routing operator on a fixed connected graph.
#[derive(Debug, Clone)]
pub struct ElectricalRouting<'g> {
    g: &'g Multigraph,
    solver: LaplacianSolver,
    tol: f64,
}

impl<'g> ElectricalRouting<'g> {
    pub fn new(g: &'g Multigraph, tol: f64) -> Result<Self> {
        Ok(ElectricalRouting {
            g,
            solver: LaplacianSolver::new(g)?,
            tol,
        })
    }

    pub fn graph(&self) -> &'g Multigraph {
        self.g
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `v = L⁺ χ` together with the relative solver residual.
    pub fn voltages(&self, chi: &Demand) -> Result<(VoltageProfile, f64)> {
        let report = self.solver.solve(chi.values(), self.tol)?;
        Ok((
            VoltageProfile {
                values: report.solution,
                offset: VoltageOffset::Raw,
            },
            report.residual_norm,
        ))
    }

    /// `f = W Bᵀ v` for `v = L⁺ χ`.
    pub fn route(&self, chi: &Demand) -> Result<Flow> {
        let (v, _) = self.voltages(chi)?;
        Ok(self.flow_from_voltages(&v.values))
    }

    pub fn flow_from_voltages(&self, v: &[f64]) -> Flow {
        Flow(
            self.g
                .edges()
                .iter()
                .map(|e| e.weight * (v[e.head] - v[e.tail]))
                .collect(),
        )
    }
}

impl LinearOperator for ElectricalRouting<'_> {
    fn nrows(&self) -> usize {
        self.g.m()
    }

    fn ncols(&self) -> usize {
        self.g.n()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.route(&Demand::new(x.to_vec())?)?.0)
    }
}

pub fn route_electrical(g: &Multigraph, chi: &Demand, tol: f64) -> Result<Flow> {
    ElectricalRouting::new(g, tol)?.route(chi)
}

/// `χᵀ L⁺ χ` for `χ = 1_s - 1_t`; zero when `s == t`.
pub fn effective_resistance(g: &Multigraph, s: usize, t: usize, tol: f64) -> Result<f64> {
    if s == t {
        if s >= g.n() {
            return Err(Error::Argument(format!(
                "vertex {s} outside [0, {})",
                g.n()
            )));
        }
        return Ok(0.0);
    }
    let router = ElectricalRouting::new(g, tol)?;
    let (v, _) = router.voltages(&Demand::pair(g.n(), s, t)?)?;
    Ok(v.values[s] - v.values[t])
}

/// `‖W⁻¹ Σ |fᵢ|‖_p`; flows of different commodities never cancel.
pub fn congestion(g: &Multigraph, flows: &[Flow], p: PNorm) -> f64 {
    let mut load = vec![0.0; g.m()];
    for f in flows {
        for (l, v) in load.iter_mut().zip(&f.0) {
            *l += v.abs();
        }
    }
    for (l, e) in load.iter_mut().zip(g.edges()) {
        *l /= e.weight;
    }
    p.vector_norm(&load)
}

/// Per-edge results of routing each unit edge demand `χ_e` electrically.
#[derive(Debug, Clone)]
pub struct EdgeSweep {
    /// `‖W Bᵀ L⁺ χ_e‖₁` for every edge, in edge order.
    pub flow_l1: Vec<f64>,
    /// Largest relative solver residual over all solves.
    pub max_residual: f64,
    /// Distinct endpoint pairs solved.
    pub solves: usize,
}

/// Per edge: index into the distinct pair list, and a sign.
type PairRefs = Vec<(usize, f64)>;

/// Unique unordered endpoint pairs and, per edge, `(pair index, sign)` such
/// that `χ_e = sign · (1_lo - 1_hi)`.
fn endpoint_pairs(g: &Multigraph) -> (Vec<(usize, usize)>, PairRefs) {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    let per_edge = g
        .edges()
        .iter()
        .map(|e| {
            let key = e.key();
            let id = *index.entry(key).or_insert_with(|| {
                pairs.push(key);
                pairs.len() - 1
            });
            (id, if e.tail == key.0 { 1.0 } else { -1.0 })
        })
        .collect();
    (pairs, per_edge)
}

/// Voltages `L⁺ (1_lo - 1_hi)` for every distinct endpoint pair, in parallel.
fn pair_voltages(
    router: &ElectricalRouting<'_>,
    pairs: &[(usize, usize)],
) -> Result<Vec<(Vec<f64>, f64)>> {
    let n = router.graph().n();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let (v, res) = router.voltages(&Demand::pair(n, a, b)?)?;
            Ok((v.values, res))
        })
        .collect()
}

pub fn edge_sweep(g: &Multigraph, tol: f64) -> Result<EdgeSweep> {
    let router = ElectricalRouting::new(g, tol)?;
    let (pairs, per_edge) = endpoint_pairs(g);
    let volts = pair_voltages(&router, &pairs)?;
    let pair_l1: Vec<f64> = volts
        .iter()
        .map(|(v, _)| router.flow_from_voltages(v).l1())
        .collect();
    let max_residual = volts.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    Ok(EdgeSweep {
        flow_l1: per_edge.iter().map(|&(id, _)| pair_l1[id]).collect(),
        max_residual,
        solves: pairs.len(),
    })
}

/// `ρ_∞(A) = max_e ‖W Bᵀ L⁺ χ_e‖₁`.
pub fn rho_infinity(g: &Multigraph, tol: f64) -> Result<f64> {
    Ok(edge_sweep(g, tol)?.flow_l1.into_iter().fold(0.0, f64::max))
}

/// Dense `W Bᵀ L⁺ B`, column `e` being the electrical flow for `B e = -χ_e`.
/// On unit-weight graphs this is the projection `Π = Bᵀ L⁺ B`.
pub fn electrical_times_incidence(
    g: &Multigraph,
    tol: f64,
    edge_cap: usize,
) -> Result<DMatrix<f64>> {
    let m = g.m();
    if m > edge_cap {
        return Err(Error::SizeLimit {
            what: "dense projection matrix",
            predicted_vertices: g.n(),
            predicted_edges: m,
            cap: edge_cap,
        });
    }
    let router = ElectricalRouting::new(g, tol)?;
    let (pairs, per_edge) = endpoint_pairs(g);
    let volts = pair_voltages(&router, &pairs)?;
    let pair_flows: Vec<Flow> = volts
        .iter()
        .map(|(v, _)| router.flow_from_voltages(v))
        .collect();
    let mut out = DMatrix::zeros(m, m);
    for (e, &(id, sign)) in per_edge.iter().enumerate() {
        // B e = 1_head - 1_tail = -χ_e = -sign (1_lo - 1_hi)
        for (r, f) in pair_flows[id].0.iter().enumerate() {
            out[(r, e)] = -sign * f;
        }
    }
    Ok(out)
}

/// `Π = Bᵀ L⁺ B` for a unit-weight graph.
pub fn projection_matrix(g: &Multigraph, tol: f64) -> Result<DMatrix<f64>> {
    if !g.is_unit_weight() {
        return Err(Error::Contract(
            "the projection matrix is defined here for unit weights".into(),
        ));
    }
    electrical_times_incidence(g, tol, DEFAULT_DENSE_EDGE_CAP)
}

pub fn rho_p(g: &Multigraph, p: PNorm, tol: f64) -> Result<f64> {
    rho_p_capped(g, p, tol, DEFAULT_DENSE_EDGE_CAP)
}

/// `ρ_p(A) = ‖|Π|‖_{p→p}` on a unit-weight graph, from the dense `|Π|`.
pub fn rho_p_capped(g: &Multigraph, p: PNorm, tol: f64, edge_cap: usize) -> Result<f64> {
    if !g.is_unit_weight() {
        return Err(Error::Contract(
            "rho_p needs unit weights; use rho_general or expand with weighted_to_multigraph"
                .into(),
        ));
    }
    let pi = electrical_times_incidence(g, tol, edge_cap)?.map(f64::abs);
    induced_norm(&pi, p, DEFAULT_NORM_TOL, DEFAULT_NORM_ITER_CAP)
}

/// Competitive ratio of an arbitrary routing operator in `ℓ_p`:
/// `‖|W⁻¹ A B W|‖_{p→p}`, assembled by applying `A` to every `χ_e`.
pub fn rho_general(g: &Multigraph, a: &impl LinearOperator, p: PNorm) -> Result<f64> {
    let (n, m) = (g.n(), g.m());
    if a.nrows() != m || a.ncols() != n {
        return Err(Error::Argument(format!(
            "operator is {} x {}, expected {m} x {n}",
            a.nrows(),
            a.ncols()
        )));
    }
    let columns: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|e| {
            let chi = Demand::edge(g, e);
            let f = Flow(a.apply(chi.values())?);
            let div = f.divergence(g);
            let err: Vec<f64> = div.iter().zip(chi.values()).map(|(x, y)| x - y).collect();
            if norm2(&err) > 1e-6 * norm2(chi.values()) {
                return Err(Error::Contract(format!(
                    "operator does not route the demand of edge {e} (residual {:e})",
                    norm2(&err)
                )));
            }
            Ok(f.0)
        })
        .collect::<Result<_>>()?;
    let w = g.weights();
    let mut mat = DMatrix::zeros(m, m);
    for (c, col) in columns.iter().enumerate() {
        // column of A B W is -w_c A χ_c; the sign vanishes under |.|
        for (r, v) in col.iter().enumerate() {
            mat[(r, c)] = (v * w[c] / w[r]).abs();
        }
    }
    induced_norm(&mat, p, DEFAULT_NORM_TOL, DEFAULT_NORM_ITER_CAP)
}

/// Mean over edges of `‖A_E χ_e‖₁` on a unit-weight graph.
pub fn localization(g: &Multigraph, tol: f64) -> Result<f64> {
    if !g.is_unit_weight() {
        return Err(Error::Contract(
            "localization is defined for unit-weight graphs".into(),
        ));
    }
    let sweep = edge_sweep(g, tol)?;
    Ok(sweep.flow_l1.iter().sum::<f64>() / g.m() as f64)
}

/// Share of the net flow at `v` that uses edges selected by `mask`.
pub fn flow_share_at(g: &Multigraph, f: &Flow, v: usize, mask: &[bool]) -> f64 {
    let (mut sel, mut all) = (0.0, 0.0);
    for ((e, x), &take) in g.edges().iter().zip(&f.0).zip(mask) {
        let into_v = if e.head == v {
            *x
        } else if e.tail == v {
            -*x
        } else {
            continue;
        };
        all += into_v;
        if take {
            sel += into_v;
        }
    }
    if all == 0.0 {
        0.0
    } else {
        sel / all
    }
}

#[derive(Debug, Clone)]
pub struct CompetitiveReport {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub volume: f64,
    pub phi_lower: f64,
    pub phi_upper: f64,
    pub phi_exact: bool,
    /// `ρ_p` for each requested exponent, in request order.
    pub rho: Vec<(PNorm, f64)>,
    /// `3 ln(vol V) / Φ` with `Φ` the certified lower bound.
    pub bound: f64,
    pub localization: f64,
    pub max_residual: f64,
    /// Worst-case absolute error carried into each ratio by the solves,
    /// `m · tol · ‖χ_e‖₂`.
    pub error_bound: f64,
}

impl CompetitiveReport {
    pub fn rho_for(&self, p: PNorm) -> Option<f64> {
        self.rho.iter().find(|(q, _)| *q == p).map(|(_, r)| *r)
    }
}

/// `3 ln(vol V) / Φ`.
pub fn upper_bound(volume: f64, phi: f64) -> f64 {
    3.0 * volume.ln() / phi
}

pub fn competitive_report(
    g: &Multigraph,
    graph_id: &str,
    p_list: &[PNorm],
    tol: f64,
) -> Result<CompetitiveReport> {
    g.ensure_connected()?;
    let (phi_lower, phi_upper, phi_exact) = if g.n() <= DEFAULT_ENUMERATION_LIMIT {
        let c = conductance_exact(g)?;
        (c.phi, c.phi, true)
    } else {
        let (lo, hi) = conductance_bounds(g)?;
        (lo.phi, hi.phi, false)
    };
    let sweep = edge_sweep(g, tol)?;
    let rho_inf = sweep.flow_l1.iter().copied().fold(0.0, f64::max);
    let unit = g.is_unit_weight();
    let needs_dense = p_list.iter().any(|p| !p.is_infinite());
    let abs_pi = if needs_dense {
        if !unit {
            return Err(Error::Contract(
                "finite-p ratios need unit weights; expand the graph first".into(),
            ));
        }
        Some(electrical_times_incidence(g, tol, DEFAULT_DENSE_EDGE_CAP)?.map(f64::abs))
    } else {
        None
    };
    let mut rho = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let value = match (&abs_pi, p.is_infinite()) {
            (_, true) => rho_inf,
            (Some(mat), false) => induced_norm(mat, p, DEFAULT_NORM_TOL, DEFAULT_NORM_ITER_CAP)?,
            (None, false) => unreachable!("dense matrix is built whenever a finite p is requested"),
        };
        if value < RHO_FLOOR {
            return Err(Error::Contract(format!("rho_{p} = {value} fell below 1")));
        }
        rho.push((p, value));
    }
    let volume = g.total_volume();
    let localization = if unit {
        sweep.flow_l1.iter().sum::<f64>() / g.m() as f64
    } else {
        f64::NAN
    };
    Ok(CompetitiveReport {
        graph_id: graph_id.to_string(),
        n: g.n(),
        m: g.m(),
        volume,
        phi_lower,
        phi_upper,
        phi_exact,
        rho,
        bound: upper_bound(volume, phi_lower),
        localization,
        max_residual: sweep.max_residual,
        error_bound: g.m() as f64 * tol * std::f64::consts::SQRT_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::{gadget_subdivide, gen_random_regular, Edge, DEFAULT_EDGE_CAP};
    use crate::linalg::DEFAULT_TOL;
    use crate::oracle;

    const TOL: f64 = DEFAULT_TOL;

    #[test]
    fn k2_routes_itself() {
        let g = complete(2);
        let chi = Demand::edge(&g, 0);
        let f = route_electrical(&g, &chi, TOL).unwrap();
        // B f = χ with B = (-1, +1)ᵀ forces f = -1: one unit against the orientation.
        assert!((f.0[0] + 1.0).abs() < 1e-12);
        assert!((f.l1() - 1.0).abs() < 1e-12);
        assert_eq!(f.divergence(&g), vec![1.0, -1.0]);
    }

    #[test]
    fn k3_split_matches_oracle() {
        let g = complete(3);
        let chi = Demand::pair(3, 0, 1).unwrap();
        let f = route_electrical(&g, &chi, TOL).unwrap();
        let lp = oracle::pinv(&oracle::dense_laplacian(3, &g.edge_triples()));
        let v = lp * nalgebra::DVector::from_column_slice(chi.values());
        for (e, x) in g.edges().iter().zip(&f.0) {
            assert!((x - (v[e.head] - v[e.tail])).abs() < 1e-9);
        }
        let mut mags: Vec<f64> = f.0.iter().map(|x| x.abs()).collect();
        mags.sort_by(f64::total_cmp);
        assert!((mags[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((mags[1] - 1.0 / 3.0).abs() < 1e-9);
        assert!((mags[2] - 2.0 / 3.0).abs() < 1e-9);
        assert!((f.l1() - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn c4_series_parallel() {
        let g = cycle(4);
        let f = route_electrical(&g, &Demand::edge(&g, 0), TOL).unwrap();
        assert!((f.0[0].abs() - 0.75).abs() < 1e-9);
        for x in &f.0[1..] {
            assert!((x.abs() - 0.25).abs() < 1e-9);
        }
        assert!((f.l1() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn routing_residual_and_energy() {
        let g = gen_random_regular(20, 3, 4).unwrap();
        let router = ElectricalRouting::new(&g, TOL).unwrap();
        let mut vals = vec![0.0; 20];
        vals[2] = 1.5;
        vals[9] = -1.0;
        vals[13] = -0.5;
        let chi = Demand::new(vals).unwrap();
        let (v, _) = router.voltages(&chi).unwrap();
        let f = router.flow_from_voltages(&v.values);
        let err: Vec<f64> = f
            .divergence(&g)
            .iter()
            .zip(chi.values())
            .map(|(a, b)| a - b)
            .collect();
        assert!(norm2(&err) <= 10.0 * TOL * norm2(chi.values()));
        let ev = v.energy(&g);
        let ef = f.energy(&g);
        let quad: f64 = chi.values().iter().zip(&v.values).map(|(a, b)| a * b).sum();
        assert!((ef - ev).abs() <= 1e-8 * ev);
        assert!((quad - ev).abs() <= 1e-8 * ev);
    }

    #[test]
    fn resistance_examples() {
        assert!((effective_resistance(&complete(2), 0, 1, TOL).unwrap() - 1.0).abs() < 1e-12);
        assert!((effective_resistance(&path(6), 0, 5, TOL).unwrap() - 5.0).abs() < 1e-8);
        assert_eq!(effective_resistance(&path(3), 1, 1, TOL).unwrap(), 0.0);
        for k in 1..=5 {
            let gad = gadget_subdivide(&complete(2), k, DEFAULT_EDGE_CAP).unwrap();
            let r = effective_resistance(&gad, 0, 1, TOL).unwrap();
            assert!((r - 1.0).abs() < 1e-8, "k = {k}: {r}");
        }
    }

    #[test]
    fn congestion_examples() {
        let k2 = complete(2);
        assert_eq!(congestion(&k2, &[Flow(vec![3.0])], PNorm::ONE), 3.0);
        assert_eq!(
            congestion(&k2, &[Flow(vec![1.0]), Flow(vec![-2.0])], PNorm::INF),
            3.0
        );
        let heavy = Multigraph::new(2, vec![Edge::new(0, 1, 2.0)]).unwrap();
        assert_eq!(congestion(&heavy, &[Flow(vec![3.0])], PNorm::INF), 1.5);
    }

    #[test]
    fn rho_infinity_goldens() {
        assert!((rho_infinity(&complete(2), TOL).unwrap() - 1.0).abs() < 1e-12);
        let k3 = complete(3);
        let c4 = cycle(4);
        for (g, want) in [(&k3, 4.0 / 3.0), (&c4, 1.5)] {
            let dense =
                oracle::max_abs_row_sum(&oracle::dense_projection(g.n(), &g.edge_triples()));
            assert!((dense - want).abs() < 1e-12);
            assert!((rho_infinity(g, TOL).unwrap() - want).abs() < 1e-8);
        }
    }

    #[test]
    fn parallel_edges_share_solves() {
        let g = Multigraph::from_unit_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 0)]).unwrap();
        let sweep = edge_sweep(&g, TOL).unwrap();
        assert_eq!(sweep.solves, 3);
        assert_eq!(sweep.flow_l1.len(), 4);
        assert_eq!(sweep.flow_l1[0], sweep.flow_l1[1]);
    }

    #[test]
    fn projection_identities() {
        let g = gen_random_regular(12, 3, 2).unwrap();
        let pi = projection_matrix(&g, TOL).unwrap();
        let oracle_pi = oracle::dense_projection(g.n(), &g.edge_triples());
        assert!((&pi - &oracle_pi).amax() < 1e-8);
        assert!((&pi - pi.transpose()).amax() <= 1e-8);
        assert!((&pi * &pi - &pi).amax() <= 1e-6);
    }

    #[test]
    fn rho_p_examples() {
        for p in [PNorm::ONE, PNorm::TWO, PNorm::new(3.0).unwrap(), PNorm::INF] {
            assert!((rho_p(&complete(2), p, TOL).unwrap() - 1.0).abs() < 1e-8);
        }
        let k3 = complete(3);
        let want = oracle::spectral_norm(&oracle::abs_matrix(&oracle::dense_projection(
            3,
            &k3.edge_triples(),
        )));
        assert!((want - 4.0 / 3.0).abs() < 1e-12);
        assert!((rho_p(&k3, PNorm::TWO, TOL).unwrap() - want).abs() < 1e-8);
        let g = petersen();
        let r1 = rho_p(&g, PNorm::ONE, TOL).unwrap();
        let rinf = rho_p(&g, PNorm::INF, TOL).unwrap();
        assert!((r1 - rinf).abs() <= 1e-6 * rinf);
        assert!((rinf - rho_infinity(&g, TOL).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn rho_p_rejects_weights_and_size() {
        let w = Multigraph::new(2, vec![Edge::new(0, 1, 2.0)]).unwrap();
        assert!(matches!(
            rho_p(&w, PNorm::TWO, TOL),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            rho_p_capped(&cycle(10), PNorm::TWO, TOL, 5),
            Err(Error::SizeLimit { .. })
        ));
    }

    /// Routes `χ_e` for C4 edge (3, 0) along the path 3-2-1-0 and every
    /// other edge directly.
    struct TreeRoutingC4;

    impl LinearOperator for TreeRoutingC4 {
        fn nrows(&self) -> usize {
            4
        }
        fn ncols(&self) -> usize {
            4
        }
        fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
            // Tree edges 0:(0,1) 1:(1,2) 2:(2,3); edge 3:(3,0) unused.
            // For a demand x (net inflow), the tree flow on edge (i, i+1) is
            // minus the inflow accumulated on vertices 0..=i.
            let mut f = vec![0.0; 4];
            let mut acc = 0.0;
            for i in 0..3 {
                acc += x[i];
                f[i] = -acc;
            }
            Ok(f)
        }
    }

    #[test]
    fn rho_general_examples() {
        let g = petersen();
        let router = ElectricalRouting::new(&g, TOL).unwrap();
        for p in [PNorm::ONE, PNorm::new(2.5).unwrap(), PNorm::INF] {
            let a = rho_general(&g, &router, p).unwrap();
            let b = rho_p(&g, p, TOL).unwrap();
            assert!((a - b).abs() <= 1e-7 * b);
        }
        let heavy = Multigraph::new(2, vec![Edge::new(0, 1, 2.0)]).unwrap();
        let hr = ElectricalRouting::new(&heavy, TOL).unwrap();
        assert!((rho_general(&heavy, &hr, PNorm::INF).unwrap() - 1.0).abs() < 1e-9);

        let c4 = cycle(4);
        // Each tree edge carries its own demand plus the chord's; the chord
        // demand itself travels three edges.
        assert_eq!(rho_general(&c4, &TreeRoutingC4, PNorm::INF).unwrap(), 2.0);
        assert_eq!(rho_general(&c4, &TreeRoutingC4, PNorm::ONE).unwrap(), 3.0);
    }

    struct Broken;

    impl LinearOperator for Broken {
        fn nrows(&self) -> usize {
            4
        }
        fn ncols(&self) -> usize {
            4
        }
        fn apply(&self, _: &[f64]) -> Result<Vec<f64>> {
            Ok(vec![0.0; 4])
        }
    }

    #[test]
    fn rho_general_checks_routing() {
        assert!(matches!(
            rho_general(&cycle(4), &Broken, PNorm::INF),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn localization_examples() {
        assert!((localization(&complete(2), TOL).unwrap() - 1.0).abs() < 1e-12);
        assert!((localization(&complete(3), TOL).unwrap() - 4.0 / 3.0).abs() < 1e-9);
        let g = gen_random_regular(16, 3, 9).unwrap();
        assert!(localization(&g, TOL).unwrap() <= rho_infinity(&g, TOL).unwrap() + 1e-9);
    }

    #[test]
    fn report_examples() {
        let r = competitive_report(&complete(2), "k2", &[PNorm::INF], TOL).unwrap();
        assert!((r.rho_for(PNorm::INF).unwrap() - 1.0).abs() < 1e-12);
        assert!((r.bound - 3.0 * 2f64.ln()).abs() < 1e-12);
        let c4 = competitive_report(&cycle(4), "c4", &[PNorm::ONE, PNorm::INF], TOL).unwrap();
        assert!((c4.rho_for(PNorm::INF).unwrap() - 1.5).abs() < 1e-8);
        assert!((c4.rho_for(PNorm::ONE).unwrap() - 1.5).abs() < 1e-8);
        assert!((c4.bound - 6.0 * 8f64.ln()).abs() < 1e-12);
        let g = gen_random_regular(16, 3, 1).unwrap();
        let rep = competitive_report(&g, "r16", &[PNorm::INF], TOL).unwrap();
        assert!(rep.rho_for(PNorm::INF).unwrap() <= rep.bound);
        assert!(rep.phi_exact);
    }

    #[test]
    fn demand_validation() {
        assert!(Demand::new(vec![1.0, 0.5]).is_err());
        assert!(Demand::new(vec![0.0, 0.0]).is_ok());
        assert!(Demand::pair(2, 0, 2).is_err());
    }
}
