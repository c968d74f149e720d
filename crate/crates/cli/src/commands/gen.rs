use std::io::Write;

use anyhow::Result;
use ohmlab::graph::{gadget_subdivide, gen_random_regular, graph_union, write_graph, Multigraph};

use super::load_graph;
use crate::args::GenCommand;
use crate::output::Context;

pub fn build(cmd: &GenCommand, ctx: &Context) -> Result<Multigraph> {
    Ok(match cmd {
        GenCommand::Regular { n, d } => gen_random_regular(*n, *d, ctx.seed)?,
        GenCommand::Gadget { base, k } => {
            gadget_subdivide(&load_graph(base)?, *k, ctx.generation_cap())?
        }
        GenCommand::Union { a, b } => {
            let (ga, gb) = (load_graph(a)?, load_graph(b)?);
            let g = graph_union(&ga, &gb);
            anyhow::ensure!(
                g.m() <= ctx.generation_cap(),
                "union has {} edges, cap is {}",
                g.m(),
                ctx.generation_cap()
            );
            g
        }
    })
}

pub fn run(cmd: &GenCommand, ctx: &Context, out: &mut dyn Write) -> Result<()> {
    write_graph(&build(cmd, ctx)?, out)?;
    Ok(())
}
