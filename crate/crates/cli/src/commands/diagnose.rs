use std::path::Path;

use anyhow::{ensure, Result};
use ohmlab::diagnostics::{
    check_delta_bound, check_integral_identity, check_unit_flow_across_cuts, diagnostic_rows,
    threshold_profile, DIAGNOSTIC_HEADER,
};
use ohmlab::routing::Demand;

use super::{load_graph, phi_interval};
use crate::output::{num, Context, Table, Violations};

pub const SUMMARY_HEADER: [&str; 10] = [
    "edge",
    "breakpoints",
    "phi",
    "integral_lhs",
    "integral_rhs",
    "integral_gap",
    "crossing_deviation",
    "thresholds_checked",
    "derivative_violations",
    "max_residual",
];

const GAP_TOL: f64 = 1e-10;
const CROSSING_TOL: f64 = 1e-8;

pub struct Diagnosis {
    pub dump: Table,
    pub summary: Table,
    pub violations: Violations,
}

pub fn run(
    path: &Path,
    edge: usize,
    samples: usize,
    phi: Option<f64>,
    ctx: &Context,
) -> Result<Diagnosis> {
    let g = load_graph(path)?;
    ensure!(
        edge < g.m(),
        "edge {edge} out of range, the graph has {} edges",
        g.m()
    );
    let chi = Demand::edge(&g, edge);
    let tp = threshold_profile(&g, &chi, ctx.tol)?;
    // a lower bound on phi only loosens the derivative inequalities
    let phi = match phi {
        Some(p) => p,
        None => phi_interval(&g)?.0,
    };

    let mut dump = Table::new(&DIAGNOSTIC_HEADER.split(',').collect::<Vec<_>>());
    for r in diagnostic_rows(&tp, samples) {
        dump.push(
            [
                r.t,
                r.delta,
                r.vol_geq,
                r.volplus,
                r.dvolplus_dt,
                r.crossing_flow,
            ]
            .map(num)
            .to_vec(),
        );
    }

    let identity = check_integral_identity(&tp);
    let gap = identity.gap / identity.lhs.abs().max(f64::MIN_POSITIVE);
    let crossing = check_unit_flow_across_cuts(&tp, &chi, samples);
    let delta = check_delta_bound(&tp, phi, samples)?;

    let mut v = Violations::default();
    v.check(gap <= GAP_TOL, || {
        format!("integral identity gap {gap:e} above {GAP_TOL:e}")
    });
    v.check(crossing <= CROSSING_TOL, || {
        format!("crossing flow off by {crossing:e}")
    });
    for bad in delta.violations.iter().take(5) {
        v.0.push(format!(
            "{:?} fails at t = {}: {} > {}",
            bad.inequality, bad.t, bad.lhs, bad.rhs
        ));
    }
    if delta.violations.len() > 5 {
        v.0.push(format!(
            "... and {} more threshold failures",
            delta.violations.len() - 5
        ));
    }

    let mut summary = Table::new(&SUMMARY_HEADER);
    summary.push(vec![
        edge.to_string(),
        tp.breakpoints.len().to_string(),
        num(phi),
        num(identity.lhs),
        num(identity.rhs),
        num(gap),
        num(crossing),
        delta.thresholds_checked.to_string(),
        delta.violations.len().to_string(),
        num(tp.residual),
    ]);
    Ok(Diagnosis {
        dump,
        summary,
        violations: v,
    })
}
