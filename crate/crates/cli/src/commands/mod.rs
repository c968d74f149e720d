pub mod diagnose;
pub mod experiment;
pub mod gen;
pub mod report;
pub mod sparsify;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context as _, Result};
use ohmlab::graph::{
    conductance_bounds, conductance_exact, read_graph, Multigraph, DEFAULT_ENUMERATION_LIMIT,
};

pub fn load_graph(path: &Path) -> Result<Multigraph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_graph(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

/// `(lower, upper)` conductance: exact by enumeration on small graphs,
/// otherwise the Cheeger bound and the best spectral sweep cut.
pub fn phi_interval(g: &Multigraph) -> Result<(f64, f64)> {
    if g.n() <= DEFAULT_ENUMERATION_LIMIT {
        let c = conductance_exact(g)?;
        Ok((c.phi, c.phi))
    } else {
        let (lo, hi) = conductance_bounds(g)?;
        Ok((lo.phi, hi.phi))
    }
}
