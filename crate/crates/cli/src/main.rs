mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{ensure, Context as _, Result};
use clap::Parser;

use args::{Cli, Command, ExperimentCommand, GridArgs};
use commands::experiment::{self, ExperimentConfig, GraphSource};
use output::{with_output, Context, Table, Violations};

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("OHMLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("OHMLAB_THREADS={raw:?} is not a count"))?;
    ensure!(threads > 0, "OHMLAB_THREADS must be positive");
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn seeds(ctx: &Context, count: u64) -> Vec<u64> {
    (0..count).map(|i| ctx.seed + i).collect()
}

fn grid(g: &GridArgs, ctx: &Context) -> Result<Vec<(usize, usize, u64)>> {
    experiment::regular_grid(&g.n, &g.d, &seeds(ctx, g.seeds))
}

fn emit(cli: &Cli, ctx: &Context, table: &Table) -> Result<()> {
    with_output(cli.out.as_deref(), |w| table.write(w, ctx.timestamp))
}

fn run(cli: &Cli) -> Result<Violations> {
    ensure!(cli.tol > 0.0 && cli.tol < 1.0, "--tol must lie in (0, 1)");
    let ctx = Context {
        tol: cli.tol,
        seed: cli.seed,
        cap_edges: cli.cap_edges,
        timestamp: !cli.no_timestamp,
    };
    let (table, bad) = match &cli.command {
        Command::Gen(g) => {
            with_output(cli.out.as_deref(), |w| commands::gen::run(g, &ctx, w))?;
            return Ok(Violations::default());
        }
        Command::Report { graph, p } => commands::report::run(graph, p, &ctx)?,
        Command::Diagnose {
            graph,
            edge,
            samples,
            summary,
            phi,
        } => {
            let d = commands::diagnose::run(graph, *edge, *samples, *phi, &ctx)?;
            match summary {
                Some(path) => {
                    let file = File::create(path)
                        .with_context(|| format!("cannot create {}", path.display()))?;
                    d.summary.write(BufWriter::new(file), false)?;
                }
                None => d.summary.write(io::stderr().lock(), false)?,
            }
            (d.dump, d.violations)
        }
        Command::Sparsify {
            graph,
            partition,
            x,
            samples,
        } => commands::sparsify::run(graph, partition, x.as_deref(), *samples, &ctx)?,
        Command::Experiment(e) => match e {
            ExperimentCommand::Upperbound(g) => experiment::upperbound(&grid(g, &ctx)?, &ctx)?,
            ExperimentCommand::Localization(g) => experiment::localization(&grid(g, &ctx)?, &ctx)?,
            ExperimentCommand::Interpolation { graph, n, d, p } => {
                let source = match graph {
                    Some(path) => GraphSource::File(path.clone()),
                    None => GraphSource::Regular { n: *n, d: *d },
                };
                experiment::interpolation(&ExperimentConfig {
                    source,
                    p_grid: p.clone(),
                    seeds: vec![ctx.seed],
                    tol: ctx.tol,
                    cap_edges: ctx.dense_cap(),
                })?
            }
            ExperimentCommand::Lowerbound { base, n, d, k, p } => {
                let source = match base {
                    Some(path) => GraphSource::File(path.clone()),
                    None => GraphSource::Regular { n: *n, d: *d },
                };
                let cfg = ExperimentConfig {
                    source,
                    p_grid: p.clone(),
                    seeds: vec![ctx.seed],
                    tol: ctx.tol,
                    cap_edges: ctx.dense_cap(),
                };
                experiment::lowerbound(&cfg, k, ctx.generation_cap())?
            }
        },
    };
    emit(cli, &ctx, &table)?;
    Ok(bad)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not failures; usage errors are
            // operational, so they must not look like a violation
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = init_threads().and_then(|()| run(&cli));
    match outcome {
        Ok(bad) if bad.is_empty() => ExitCode::SUCCESS,
        Ok(bad) => {
            let mut err = io::stderr().lock();
            for msg in &bad.0 {
                let _ = writeln!(err, "violation: {msg}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
