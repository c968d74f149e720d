use std::path::Path;

use anyhow::{ensure, Context as _, Result};
use ohmlab::graph::Multigraph;
use ohmlab::sparsify::{
    energy_objective, expected_cut_l1, harmonic_extension, l1_extension_min, l1_objective,
    sample_cut_l1, schur_complement, schur_edges, schur_energy, Partition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::load_graph;
use crate::output::{num, Context, Table, Violations};

pub const HEADER: [&str; 5] = ["item", "u", "v", "value", "reference"];

/// Largest `|F|` for the exhaustive 0/1 search.
pub const BRUTE_FORCE_LIMIT: usize = 16;

fn row(
    item: &str,
    u: Option<usize>,
    v: Option<usize>,
    value: f64,
    reference: Option<f64>,
) -> Vec<String> {
    let id = |x: Option<usize>| x.map(|i| i.to_string()).unwrap_or_default();
    vec![
        item.into(),
        id(u),
        id(v),
        num(value),
        reference.map(num).unwrap_or_default(),
    ]
}

/// Minimum of the ℓ1 objective over every 0/1 assignment of `F`.
pub fn brute_force_l1(g: &Multigraph, part: &Partition, x: &[f64]) -> Result<f64> {
    let nf = part.eliminated().len();
    ensure!(
        nf <= BRUTE_FORCE_LIMIT,
        "|F| = {nf} is too large to enumerate"
    );
    let mut best = f64::INFINITY;
    for mask in 0u64..(1 << nf) {
        let y: Vec<f64> = (0..nf).map(|i| ((mask >> i) & 1) as f64).collect();
        best = best.min(l1_objective(g, &part.combine(x, &y)?));
    }
    Ok(best)
}

pub fn run(
    graph: &Path,
    partition: &Path,
    x: Option<&[f64]>,
    samples: usize,
    ctx: &Context,
) -> Result<(Table, Violations)> {
    let g = load_graph(graph)?;
    let text = std::fs::read_to_string(partition)
        .with_context(|| format!("cannot read {}", partition.display()))?;
    let part = Partition::parse(&text, g.n())?;
    let x: Vec<f64> = match x {
        Some(v) => v.to_vec(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            part.terminals()
                .iter()
                .map(|_| if rng.gen::<bool>() { 1.0 } else { 0.0 })
                .collect()
        }
    };
    ensure!(
        x.len() == part.terminals().len(),
        "x has {} values, C has {}",
        x.len(),
        part.terminals().len()
    );

    let mut table = Table::new(&HEADER);
    let mut bad = Violations::default();
    for (&v, &xv) in part.terminals().iter().zip(&x) {
        table.push(row("x", Some(v), None, xv, None));
    }

    let lh = schur_complement(&g, &part)?;
    for (a, b, w) in schur_edges(&lh, &part) {
        table.push(row("schur_weight", Some(a), Some(b), w, None));
    }

    let y = harmonic_extension(&g, &part, &x)?;
    for (&v, &yv) in part.eliminated().iter().zip(&y) {
        table.push(row("harmonic", Some(v), None, yv, None));
    }
    let z = part.combine(&x, &y)?;
    let (reduced, full) = (schur_energy(&lh, &x), energy_objective(&g, &z));
    bad.check((reduced - full).abs() <= 1e-10 * full.max(1.0), || {
        format!("Schur energy {reduced} differs from extension energy {full}")
    });
    table.push(row("energy", None, None, reduced, Some(full)));

    let cut = expected_cut_l1(&g, &z)?;
    bad.check(
        (cut.closed_form - cut.integrated).abs() <= 1e-12 * cut.closed_form.max(1.0),
        || {
            format!(
                "expected threshold cut {} vs {}",
                cut.closed_form, cut.integrated
            )
        },
    );
    table.push(row(
        "expected_cut",
        None,
        None,
        cut.closed_form,
        Some(cut.integrated),
    ));
    let (mean, stderr) = sample_cut_l1(&g, &z, samples, ctx.seed)?;
    bad.check(
        (mean - cut.closed_form).abs() <= 4.0 * stderr + 1e-12,
        || {
            format!(
                "sampled cut mean {mean} is more than 4 standard errors from {}",
                cut.closed_form
            )
        },
    );
    table.push(row("sampled_cut", None, None, mean, Some(cut.closed_form)));
    table.push(row("sampled_cut_stderr", None, None, stderr, None));

    if x.iter().all(|&v| v == 0.0 || v == 1.0) {
        let (value, ymin) = l1_extension_min(&g, &part, &x)?;
        let brute = (part.eliminated().len() <= BRUTE_FORCE_LIMIT)
            .then(|| brute_force_l1(&g, &part, &x))
            .transpose()?;
        if let Some(b) = brute {
            bad.check((value - b).abs() <= 1e-9 * b.max(1.0), || {
                format!("min-cut value {value}, exhaustive {b}")
            });
        }
        table.push(row("l1_min", None, None, value, brute));
        for (&v, &yv) in part.eliminated().iter().zip(&ymin) {
            table.push(row("minimizer", Some(v), None, yv, None));
        }
    }
    Ok((table, bad))
}
