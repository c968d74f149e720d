use anyhow::{ensure, Result};
use ohmlab::linalg::PNorm;
use ohmlab::routing::competitive_report;

use super::load_graph;
use crate::output::{num, slack_ok, Context, Table, Violations};
use std::path::Path;

pub const HEADER: [&str; 4] = ["p", "rho_p", "bound", "slack"];

pub fn run(path: &Path, ps: &[PNorm], ctx: &Context) -> Result<(Table, Violations)> {
    ensure!(!ps.is_empty(), "empty p grid");
    let g = load_graph(path)?;
    if ps.iter().any(|p| !p.is_infinite()) {
        ensure!(
            g.m() <= ctx.dense_cap(),
            "finite p needs the dense {m}x{m} routing matrix; {m} edges exceeds --cap-edges {}",
            ctx.dense_cap(),
            m = g.m()
        );
    }
    let rep = competitive_report(&g, &path.display().to_string(), ps, ctx.tol)?;
    let mut table = Table::new(&HEADER);
    let mut bad = Violations::default();
    for &(p, rho) in &rep.rho {
        let slack = rep.bound - rho;
        bad.check(slack_ok(slack, rep.bound), || {
            format!("p={p}: rho {rho} exceeds bound {}", rep.bound)
        });
        table.push(vec![p.to_string(), num(rho), num(rep.bound), num(slack)]);
    }
    Ok((table, bad))
}
