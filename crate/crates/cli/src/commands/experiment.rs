//! Batch experiments over generated graphs. Cells run in parallel and are
//! collected in grid order, so output does not depend on scheduling.

use std::path::PathBuf;

use anyhow::{bail, ensure, Result};
use ohmlab::graph::{gadget_subdivide, gen_random_regular, graph_union, Multigraph};
use ohmlab::linalg::{induced_norm, PNorm, DEFAULT_NORM_ITER_CAP, DEFAULT_NORM_TOL};
use ohmlab::routing::{edge_sweep, effective_resistance, electrical_times_incidence, upper_bound};
use rayon::prelude::*;

use super::{load_graph, phi_interval};
use crate::output::{num, slack_ok, Context, Table, Violations};

/// Where an experiment takes its graph from.
#[derive(Debug, Clone)]
pub enum GraphSource {
    File(PathBuf),
    Regular { n: usize, d: usize },
}

impl GraphSource {
    pub fn load(&self, seed: u64) -> Result<Multigraph> {
        match self {
            GraphSource::File(p) => load_graph(p),
            GraphSource::Regular { n, d } => Ok(gen_random_regular(*n, *d, seed)?),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    pub p_grid: Vec<PNorm>,
    pub seeds: Vec<u64>,
    pub tol: f64,
    pub cap_edges: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.seeds.is_empty(), "no seeds");
        ensure!(
            self.tol > 0.0 && self.tol < 1.0,
            "tolerance {} outside (0, 1)",
            self.tol
        );
        Ok(())
    }
}

/// `(n, d, seed)` cells, d-major.
pub fn regular_grid(ns: &[usize], ds: &[usize], seeds: &[u64]) -> Result<Vec<(usize, usize, u64)>> {
    ensure!(!seeds.is_empty(), "no seeds");
    let mut cells = Vec::new();
    for &d in ds {
        for &n in ns {
            if n * d % 2 == 1 {
                bail!("no {d}-regular graph on {n} vertices");
            }
            cells.extend(seeds.iter().map(|&s| (n, d, s)));
        }
    }
    Ok(cells)
}

pub const UPPERBOUND_HEADER: [&str; 9] = [
    "n", "d", "seed", "m", "phi", "rho_inf", "bound", "ratio", "slack",
];

pub fn upperbound(cells: &[(usize, usize, u64)], ctx: &Context) -> Result<(Table, Violations)> {
    let rows: Vec<_> = cells
        .par_iter()
        .map(|&(n, d, seed)| -> Result<_> {
            let g = gen_random_regular(n, d, seed)?;
            let (phi, _) = phi_interval(&g)?;
            let rho = edge_sweep(&g, ctx.tol)?
                .flow_l1
                .into_iter()
                .fold(0.0, f64::max);
            Ok((
                n,
                d,
                seed,
                g.m(),
                phi,
                rho,
                upper_bound(g.total_volume(), phi),
            ))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&UPPERBOUND_HEADER);
    let mut bad = Violations::default();
    for (n, d, seed, m, phi, rho, bound) in rows {
        let slack = bound - rho;
        bad.check(slack_ok(slack, bound), || {
            format!("n={n} d={d} seed={seed}: rho_inf {rho} > bound {bound}")
        });
        table.push(vec![
            n.to_string(),
            d.to_string(),
            seed.to_string(),
            m.to_string(),
            num(phi),
            num(rho),
            num(bound),
            num(rho / bound),
            num(slack),
        ]);
    }
    Ok((table, bad))
}

pub const INTERPOLATION_HEADER: [&str; 7] = [
    "p",
    "rho_p",
    "riesz_thorin",
    "localization_bound",
    "conductance_bound",
    "slack_rt",
    "slack_loc",
];

pub fn interpolation(cfg: &ExperimentConfig) -> Result<(Table, Violations)> {
    cfg.validate()?;
    let g = cfg.source.load(cfg.seeds[0])?;
    ensure!(
        g.is_unit_weight(),
        "interpolation needs a unit-weight graph"
    );
    let abs_pi = electrical_times_incidence(&g, cfg.tol, cfg.cap_edges)?.map(f64::abs);
    let norm = |p: PNorm| induced_norm(&abs_pi, p, DEFAULT_NORM_TOL, DEFAULT_NORM_ITER_CAP);
    let (r1, r2, rinf) = (norm(PNorm::ONE)?, norm(PNorm::TWO)?, norm(PNorm::INF)?);
    let (phi, _) = phi_interval(&g)?;
    let conductance_bound = upper_bound(g.total_volume(), phi);

    let rhos: Vec<f64> = cfg
        .p_grid
        .par_iter()
        .map(|&p| norm(p))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&INTERPOLATION_HEADER);
    let mut bad = Violations::default();
    for (&p, &rho) in cfg.p_grid.iter().zip(&rhos) {
        let q = 1.0 / p.value();
        let rt = r1.powf(q) * rinf.powf(1.0 - q);
        // between 2 and inf for p >= 2; between 1 and 2 below, which is the
        // same by symmetry of |Pi|
        let loc = if p.value() >= 2.0 {
            r2.powf(2.0 * q) * rinf.powf(1.0 - 2.0 * q)
        } else {
            r1.powf(2.0 * q - 1.0) * r2.powf(2.0 - 2.0 * q)
        };
        let (s_rt, s_loc) = (rt - rho, loc - rho);
        bad.check(slack_ok(s_rt, rt), || {
            format!("p={p}: rho {rho} above Riesz-Thorin bound {rt}")
        });
        bad.check(slack_ok(s_loc, loc), || {
            format!("p={p}: rho {rho} above rho_2 bound {loc}")
        });
        table.push(vec![
            p.to_string(),
            num(rho),
            num(rt),
            num(loc),
            num(conductance_bound),
            num(s_rt),
            num(s_loc),
        ]);
    }
    Ok((table, bad))
}

pub fn lowerbound_header(ps: &[PNorm]) -> Vec<String> {
    let mut h: Vec<String> = [
        "k",
        "n",
        "m",
        "phi_lower",
        "phi_upper",
        "rho_inf",
        "resistance_min",
        "resistance_max",
    ]
    .map(String::from)
    .to_vec();
    h.extend(
        ps.iter()
            .filter(|p| !p.is_infinite())
            .map(|p| format!("rho_{p}")),
    );
    h
}

struct LowerRow {
    k: usize,
    n: usize,
    m: usize,
    phi: (f64, f64),
    rho_inf: f64,
    resistance: (f64, f64),
    rho_p: Vec<f64>,
}

pub fn lowerbound(
    cfg: &ExperimentConfig,
    ks: &[usize],
    gen_cap: usize,
) -> Result<(Table, Violations)> {
    cfg.validate()?;
    ensure!(!ks.is_empty(), "no k values");
    let base = cfg.source.load(cfg.seeds[0])?;
    let finite: Vec<PNorm> = cfg
        .p_grid
        .iter()
        .copied()
        .filter(|p| !p.is_infinite())
        .collect();
    let rows: Vec<LowerRow> = ks
        .par_iter()
        .map(|&k| -> Result<LowerRow> {
            let g = graph_union(&base, &gadget_subdivide(&base, k, gen_cap)?);
            let phi = phi_interval(&g)?;
            let rho_inf = edge_sweep(&g, cfg.tol)?
                .flow_l1
                .into_iter()
                .fold(0.0, f64::max);
            let mut resistance = (f64::INFINITY, 0.0f64);
            for e in base.edges() {
                let r = effective_resistance(&g, e.tail, e.head, cfg.tol)?;
                resistance = (resistance.0.min(r), resistance.1.max(r));
            }
            let rho_p = if finite.is_empty() {
                Vec::new()
            } else {
                let abs_pi = electrical_times_incidence(&g, cfg.tol, cfg.cap_edges)?.map(f64::abs);
                finite
                    .iter()
                    .map(|&p| induced_norm(&abs_pi, p, DEFAULT_NORM_TOL, DEFAULT_NORM_ITER_CAP))
                    .collect::<Result<_, _>>()?
            };
            Ok(LowerRow {
                k,
                n: g.n(),
                m: g.m(),
                phi,
                rho_inf,
                resistance,
                rho_p,
            })
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&lowerbound_header(&cfg.p_grid));
    let mut bad = Violations::default();
    for (i, r) in rows.iter().enumerate() {
        if i > 0 && ks[i] > ks[i - 1] {
            let prev = &rows[i - 1];
            bad.check(r.rho_inf >= prev.rho_inf - 1e-9, || {
                format!(
                    "rho_inf fell from {} to {} between k={} and k={}",
                    prev.rho_inf, r.rho_inf, prev.k, r.k
                )
            });
            bad.check(r.phi.1 <= prev.phi.1 + 1e-12, || {
                format!(
                    "phi upper bound rose from {} to {} between k={} and k={}",
                    prev.phi.1, r.phi.1, prev.k, r.k
                )
            });
        }
        let mut cells = vec![
            r.k.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            num(r.phi.0),
            num(r.phi.1),
            num(r.rho_inf),
            num(r.resistance.0),
            num(r.resistance.1),
        ];
        cells.extend(r.rho_p.iter().copied().map(num));
        table.push(cells);
    }
    Ok((table, bad))
}

pub const LOCALIZATION_HEADER: [&str; 10] = [
    "n",
    "d",
    "seed",
    "localization",
    "rho_inf",
    "phi",
    "conductance_bound",
    "log2_bound",
    "within_log2",
    "slack",
];

pub fn localization(cells: &[(usize, usize, u64)], ctx: &Context) -> Result<(Table, Violations)> {
    let rows: Vec<_> = cells
        .par_iter()
        .map(|&(n, d, seed)| -> Result<_> {
            let g = gen_random_regular(n, d, seed)?;
            let (phi, _) = phi_interval(&g)?;
            let l1 = edge_sweep(&g, ctx.tol)?.flow_l1;
            let rho = l1.iter().copied().fold(0.0, f64::max);
            let loc = l1.iter().sum::<f64>() / g.m() as f64;
            Ok((
                n,
                d,
                seed,
                loc,
                rho,
                phi,
                upper_bound(g.total_volume(), phi),
            ))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&LOCALIZATION_HEADER);
    let mut bad = Violations::default();
    for (n, d, seed, loc, rho, phi, bound) in rows {
        let log2 = (n as f64).ln().powi(2) + 10.0;
        let slack = rho.min(bound) - loc;
        bad.check(slack_ok(slack, loc), || {
            format!(
                "n={n} d={d} seed={seed}: localization {loc} above {}",
                rho.min(bound)
            )
        });
        table.push(vec![
            n.to_string(),
            d.to_string(),
            seed.to_string(),
            num(loc),
            num(rho),
            num(phi),
            num(bound),
            num(log2),
            (loc <= log2).to_string(),
            num(slack),
        ]);
    }
    Ok((table, bad))
}
