//! Vertex sparsification onto a terminal set `C` and the extension and
//! rounding procedures that go with it.
//!
//! Vectors "on C" and "on F" are indexed by position in
//! [`Partition::terminals`] and [`Partition::eliminated`] respectively.

mod maxflow;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{cut_weight, Multigraph, VertexSet};
use crate::linalg::SparseMatrix;

pub use maxflow::FlowNetwork;

/// Slack allowed on the maximum principle before clamping.
pub const BOX_SLACK: f64 = 1e-10;
/// Values this close are treated as one level set.
pub const LEVEL_SNAP: f64 = 1e-9;
/// Relative objective increase tolerated per level shift.
pub const LEVEL_TOL: f64 = 1e-6;

/// Split of the vertices into terminals `C` and eliminated vertices `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    c: Vec<usize>,
    f: Vec<usize>,
}

impl Partition {
    /// `F` is everything outside `terminals`.
    pub fn new(terminals: &VertexSet) -> Result<Self> {
        let n = terminals.universe();
        let c: Vec<usize> = terminals.iter().collect();
        if c.is_empty() {
            return Err(Error::Argument("terminal set C is empty".into()));
        }
        let f = (0..n).filter(|&v| !terminals.contains(v)).collect();
        Ok(Partition { n, c, f })
    }

    /// Checks that `c` and `f` split `[0, n)` exactly.
    pub fn from_lists(n: usize, c: &[usize], f: &[usize]) -> Result<Self> {
        let mut seen = vec![false; n];
        for &v in c.iter().chain(f) {
            if v >= n {
                return Err(Error::Argument(format!("vertex {v} outside [0, {n})")));
            }
            if seen[v] {
                return Err(Error::Argument(format!("vertex {v} listed twice")));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Argument(format!("vertex {v} is in neither C nor F")));
        }
        let terminals = VertexSet::from_indices(n, c.iter().copied())?;
        Self::new(&terminals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terminals(&self) -> &[usize] {
        &self.c
    }

    pub fn eliminated(&self) -> &[usize] {
        &self.f
    }

    /// Assembles the full vertex vector `(x; y)`.
    pub fn combine(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.c.len() || y.len() != self.f.len() {
            return Err(Error::Argument(format!(
                "expected {} terminal and {} eliminated values, got {} and {}",
                self.c.len(),
                self.f.len(),
                x.len(),
                y.len()
            )));
        }
        let mut z = vec![0.0; self.n];
        self.c.iter().zip(x).for_each(|(&v, &a)| z[v] = a);
        self.f.iter().zip(y).for_each(|(&v, &a)| z[v] = a);
        Ok(z)
    }

    /// Parses the two-line format `C: ids` / `F: ids`. Blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (mut c, mut f) = (None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            let (label, rest) = line
                .split_once(':')
                .ok_or_else(|| parse_err("expected `C:` or `F:`".into()))?;
            let ids = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err(format!("bad vertex id {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let slot = match label.trim() {
                "C" => &mut c,
                "F" => &mut f,
                other => return Err(parse_err(format!("unknown label {other:?}"))),
            };
            if slot.replace(ids).is_some() {
                return Err(parse_err(format!("duplicate `{}:` line", label.trim())));
            }
        }
        let c = c.ok_or(Error::Parse {
            line: 0,
            msg: "missing `C:` line".into(),
        })?;
        let f = f.ok_or(Error::Parse {
            line: 0,
            msg: "missing `F:` line".into(),
        })?;
        Self::from_lists(n, &c, &f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ids: &[usize]| {
            ids.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "C: {}", join(&self.c))?;
        writeln!(f, "F: {}", join(&self.f))
    }
}

/// Dense Laplacian blocks `(L_CC, L_CF, L_FF)`.
fn blocks(g: &Multigraph, part: &Partition) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    if g.n() != part.n {
        return Err(Error::Argument(format!(
            "partition covers {} vertices, graph has {}",
            part.n,
            g.n()
        )));
    }
    // position within its own side, and which side
    let mut pos = vec![(false, 0); g.n()];
    part.c
        .iter()
        .enumerate()
        .for_each(|(i, &v)| pos[v] = (true, i));
    part.f
        .iter()
        .enumerate()
        .for_each(|(i, &v)| pos[v] = (false, i));
    let (nc, nf) = (part.c.len(), part.f.len());
    let mut cc = DMatrix::zeros(nc, nc);
    let mut cf = DMatrix::zeros(nc, nf);
    let mut ff = DMatrix::zeros(nf, nf);
    for e in g.edges() {
        let w = e.weight;
        for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
            match (pos[a], pos[b]) {
                ((true, i), (true, j)) => {
                    cc[(i, i)] += w;
                    cc[(i, j)] -= w;
                }
                ((true, i), (false, j)) => {
                    cc[(i, i)] += w;
                    cf[(i, j)] -= w;
                }
                ((false, i), (true, _)) => ff[(i, i)] += w,
                ((false, i), (false, j)) => {
                    ff[(i, i)] += w;
                    ff[(i, j)] -= w;
                }
            }
        }
    }
    Ok((cc, cf, ff))
}

/// Errors with [`Error::Singular`] if some component of `G[F]` has no edge to `C`.
fn check_reaches_terminals(g: &Multigraph, part: &Partition) -> Result<()> {
    let mut in_c = vec![false; g.n()];
    part.c.iter().for_each(|&v| in_c[v] = true);
    let adj = g.adjacency();
    let mut seen = in_c.clone();
    for &s in &part.f {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        let mut touches = false;
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &(u, _) in &adj[comp[i]] {
                if in_c[u] {
                    touches = true;
                } else if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            i += 1;
        }
        if !touches {
            comp.sort_unstable();
            return Err(Error::Singular { component: comp });
        }
    }
    Ok(())
}

/// `L_FF⁻¹ M` by LU, which keeps small rational cases exact (no square roots).
fn solve_ff(ff: &DMatrix<f64>, rhs: DMatrix<f64>) -> Result<DMatrix<f64>> {
    ff.clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Contract("eliminated block is numerically singular".into()))
}

/// `L_H = L_CC - L_CF L_FF⁻¹ L_FC`, indexed by terminal position.
pub fn schur_complement(g: &Multigraph, part: &Partition) -> Result<SparseMatrix> {
    let (cc, cf, ff) = blocks(g, part)?;
    check_reaches_terminals(g, part)?;
    let mut lh = cc;
    if !part.f.is_empty() {
        lh -= &cf * solve_ff(&ff, cf.transpose())?;
    }
    // symmetrize away rounding
    let sym = (&lh + lh.transpose()) * 0.5;
    Ok(SparseMatrix::from_dense(&sym))
}

/// Edges of the graph a Schur complement Laplacian represents, as
/// `(terminal a, terminal b, weight)` in original vertex ids. Off-diagonal
/// entries below `1e-14` times the largest diagonal are dropped.
pub fn schur_edges(lh: &SparseMatrix, part: &Partition) -> Vec<(usize, usize, f64)> {
    let scale = (0..part.c.len()).map(|i| lh.get(i, i)).fold(0.0, f64::max);
    lh.triplets()
        .filter(|&(i, j, v)| i < j && -v > 1e-14 * scale)
        .map(|(i, j, v)| (part.c[i], part.c[j], -v))
        .collect()
}

fn check_unit_box(what: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !(0.0..=1.0).contains(x)) {
        Some(i) => Err(Error::Contract(format!(
            "{what}[{i}] = {} lies outside [0, 1]",
            v[i]
        ))),
        None => Ok(()),
    }
}

/// Energy-minimizing extension `y = -L_FF⁻¹ L_FC x` of `x ∈ [0, 1]^C`.
/// The result lies in `[0, 1]^F` up to floating noise, which is clamped.
pub fn harmonic_extension(g: &Multigraph, part: &Partition, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != part.c.len() {
        return Err(Error::Argument(format!(
            "x has {} entries, |C| = {}",
            x.len(),
            part.c.len()
        )));
    }
    check_unit_box("x", x)?;
    let (_, cf, ff) = blocks(g, part)?;
    check_reaches_terminals(g, part)?;
    if part.f.is_empty() {
        return Ok(Vec::new());
    }
    let rhs = -(cf.transpose() * DVector::from_column_slice(x));
    let y = solve_ff(
        &ff,
        DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice()),
    )?;
    y.iter()
        .enumerate()
        .map(|(i, &v)| {
            if (-BOX_SLACK..=1.0 + BOX_SLACK).contains(&v) {
                Ok(v.clamp(0.0, 1.0))
            } else {
                Err(Error::Contract(format!(
                    "harmonic value {v} at vertex {} escapes [0, 1]",
                    part.f[i]
                )))
            }
        })
        .collect()
}

/// Entrywise clamp to `[0, 1]`.
pub fn cap_to_unit_box(y: &[f64]) -> Vec<f64> {
    y.iter().map(|v| v.clamp(0.0, 1.0)).collect()
}

/// `‖W Bᵀ z‖₁ = Σ w |z(a) - z(b)|`.
pub fn l1_objective(g: &Multigraph, z: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|e| e.weight * (z[e.tail] - z[e.head]).abs())
        .sum()
}

/// `zᵀ L z = Σ w (z(a) - z(b))²`.
pub fn energy_objective(g: &Multigraph, z: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|e| e.weight * (z[e.tail] - z[e.head]).powi(2))
        .sum()
}

/// `xᵀ L_H x`.
pub fn schur_energy(lh: &SparseMatrix, x: &[f64]) -> f64 {
    lh.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

fn check_binary(what: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|&x| x != 0.0 && x != 1.0) {
        Some(i) => Err(Error::Contract(format!(
            "{what}[{i}] = {} is not 0 or 1",
            v[i]
        ))),
        None => Ok(()),
    }
}

/// Exact minimum of `‖W Bᵀ (x; y)‖₁` over `y` for a 0/1 boundary `x`,
/// with a 0/1 minimizer. Ties put eliminated vertices on the 0 side.
pub fn l1_extension_min(g: &Multigraph, part: &Partition, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    if x.len() != part.c.len() {
        return Err(Error::Argument(format!(
            "x has {} entries, |C| = {}",
            x.len(),
            part.c.len()
        )));
    }
    if g.n() != part.n {
        return Err(Error::Argument("partition and graph sizes differ".into()));
    }
    check_binary("x", x)?;
    let nf = part.f.len();
    if x.iter().all(|&v| v == 1.0) {
        return Ok((0.0, vec![1.0; nf]));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok((0.0, vec![0.0; nf]));
    }
    let (s, t) = (g.n(), g.n() + 1);
    let mut net = FlowNetwork::new(g.n() + 2);
    for e in g.edges() {
        net.add_edge(e.tail, e.head, e.weight);
    }
    for (&v, &xv) in part.c.iter().zip(x) {
        if xv == 1.0 {
            net.add_arc(s, v, f64::INFINITY);
        } else {
            net.add_arc(v, t, f64::INFINITY);
        }
    }
    net.max_flow(s, t);
    let side = net.source_side(s);
    let y: Vec<f64> = part
        .f
        .iter()
        .map(|&v| if side[v] { 1.0 } else { 0.0 })
        .collect();
    // report the cut weight itself, which is exact for the returned y
    let value = l1_objective(g, &part.combine(x, &y)?);
    Ok((value, y))
}

/// Rounds a fractional minimizer `y` of the ℓ1 extension program to a 0/1
/// vector with the same objective by repeatedly moving the smallest nonzero
/// level set down to 0.
pub fn discretize_minimizer(
    g: &Multigraph,
    part: &Partition,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>> {
    check_binary("x", x)?;
    check_unit_box("y", y)?;
    let mut y = snap_levels(y);
    let start = l1_objective(g, &part.combine(x, &y)?);
    let limit = start + LEVEL_TOL * start.max(1.0);
    for _ in 0..=y.len() {
        let Some(r) = y
            .iter()
            .copied()
            .filter(|&v| v > 0.0 && v < 1.0)
            .reduce(f64::min)
        else {
            return Ok(y);
        };
        y.iter_mut().filter(|v| **v == r).for_each(|v| *v = 0.0);
        let now = l1_objective(g, &part.combine(x, &y)?);
        if now > limit {
            return Err(Error::Contract(format!(
                "moving level {r} to 0 raised the objective from {start} to {now}; \
                 y was not a minimizer"
            )));
        }
    }
    unreachable!("each step removes one level")
}

/// Groups values within `LEVEL_SNAP` of each other (and of 0 and 1).
fn snap_levels(y: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let mut out = y.to_vec();
    let mut anchor = f64::NAN;
    for &i in &order {
        // a NaN anchor (first value) always starts a new level
        if anchor.is_nan() || y[i] - anchor > LEVEL_SNAP {
            anchor = y[i];
        }
        out[i] = anchor;
    }
    for v in &mut out {
        if *v <= LEVEL_SNAP {
            *v = 0.0;
        } else if *v >= 1.0 - LEVEL_SNAP {
            *v = 1.0;
        }
    }
    out
}

/// `{a | x(a) > t}`: an edge is cut exactly when `min ≤ t < max` over its
/// endpoints.
pub fn random_threshold_cut(x: &[f64], t: f64) -> Result<VertexSet> {
    check_unit_box("x", x)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Argument(format!("threshold {t} outside [0, 1]")));
    }
    Ok(VertexSet::from_mask(x.iter().map(|&v| v > t).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedCut {
    /// `Σ w |x(a) - x(b)|`.
    pub closed_form: f64,
    /// `∫₀¹ w(∂S_t) dt`, summed over the intervals between values of `x`.
    pub integrated: f64,
}

/// Expected weight of the threshold cut for `t` uniform on `[0, 1]`.
pub fn expected_cut_l1(g: &Multigraph, x: &[f64]) -> Result<ExpectedCut> {
    if x.len() != g.n() {
        return Err(Error::Argument(format!(
            "x has {} entries, n = {}",
            x.len(),
            g.n()
        )));
    }
    check_unit_box("x", x)?;
    let mut levels: Vec<f64> = x.iter().copied().chain([0.0, 1.0]).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut integrated = 0.0;
    for w in levels.windows(2) {
        let s = random_threshold_cut(x, 0.5 * (w[0] + w[1]))?;
        integrated += cut_weight(g, &s) * (w[1] - w[0]);
    }
    Ok(ExpectedCut {
        closed_form: l1_objective(g, x),
        integrated,
    })
}

/// Monte Carlo estimate of the expected threshold cut: `(mean, standard error)`.
pub fn sample_cut_l1(g: &Multigraph, x: &[f64], samples: usize, seed: u64) -> Result<(f64, f64)> {
    check_unit_box("x", x)?;
    if samples < 2 {
        return Err(Error::Argument("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let t: f64 = rng.gen();
        let c = cut_weight(g, &random_threshold_cut(x, t)?);
        sum += c;
        sq += c * c;
    }
    let k = samples as f64;
    let mean = sum / k;
    let var = ((sq - k * mean * mean) / (k - 1.0)).max(0.0);
    Ok((mean, (var / k).sqrt()))
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses with `n` taken as one more than the largest listed id.
    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .lines()
            .filter_map(|l| l.split_once(':'))
            .flat_map(|(_, ids)| {
                ids.split_whitespace()
                    .filter_map(|t| t.parse::<usize>().ok())
            })
            .max()
            .map_or(0, |m| m + 1);
        Self::parse(s, n)
    }
}
