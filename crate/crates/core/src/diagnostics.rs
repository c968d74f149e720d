//! Threshold-cut quantities of a single electrical flow.
//!
//! For voltages `v` and a threshold `t`, `S_t = {a | v(a) >= t}`, `δ(t)` is
//! the weight of edges leaving `S_t`, and the fractional volume `vol_≥(t)`
//! interpolates linearly across every edge. All of these are piecewise
//! linear or piecewise constant between consecutive voltage values, so every
//! integral below is evaluated exactly from the breakpoints.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexSet};
use crate::routing::{Demand, ElectricalRouting, VoltageOffset, VoltageProfile};

/// Relative slack for the inequality checks.
pub const CHECK_SLACK: f64 = 1e-8;

/// Voltages closer than this fraction of the voltage range are merged.
const SNAP: f64 = 1e-12;

/// Edge stored so that `v(low) <= v(high)`: the direction the flow takes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedEdge {
    pub low: usize,
    pub high: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdProfile {
    /// Centered voltages.
    pub voltages: VoltageProfile,
    pub edges: Vec<OrientedEdge>,
    /// Sorted distinct voltage values.
    pub breakpoints: Vec<f64>,
    /// Amount subtracted from the solved voltages.
    pub center_shift: f64,
    /// Relative residual of the Laplacian solve (zero when built from given voltages).
    pub residual: f64,
    volume: f64,
}

/// Solves `v = L⁺ χ` and builds the centered profile.
pub fn threshold_profile(g: &Multigraph, chi: &Demand, tol: f64) -> Result<ThresholdProfile> {
    let router = ElectricalRouting::new(g, tol)?;
    let (v, residual) = router.voltages(chi)?;
    let mut tp = ThresholdProfile::from_voltages(g, &v.values)?;
    tp.residual = residual;
    Ok(tp)
}

impl ThresholdProfile {
    /// Centers arbitrary voltages. The shift is the leftmost `c` with
    /// `vol_≥(c) >= vol(V)/2 >= vol_≥(t)` for every `t > c`; when no edge has
    /// both endpoints at voltage `c` this is `vol_≥(c) = vol(V)/2`.
    pub fn from_voltages(g: &Multigraph, values: &[f64]) -> Result<Self> {
        if values.len() != g.n() {
            return Err(Error::Argument(format!(
                "{} voltages for {} vertices",
                values.len(),
                g.n()
            )));
        }
        if g.m() == 0 {
            return Err(Error::InvalidGraph(
                "threshold profile needs at least one edge".into(),
            ));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument("voltages must be finite".into()));
        }
        let mut v = snap(values);
        let edges: Vec<OrientedEdge> = g
            .edges()
            .iter()
            .map(|e| {
                let (low, high) = if v[e.tail] <= v[e.head] {
                    (e.tail, e.head)
                } else {
                    (e.head, e.tail)
                };
                OrientedEdge {
                    low,
                    high,
                    weight: e.weight,
                }
            })
            .collect();
        let mut breakpoints = v.clone();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();

        let mut tp = ThresholdProfile {
            voltages: VoltageProfile {
                values: Vec::new(),
                offset: VoltageOffset::Raw,
            },
            edges,
            breakpoints,
            center_shift: 0.0,
            residual: 0.0,
            volume: g.total_volume(),
        };
        tp.voltages.values = v.clone();
        let shift = tp.centering_point();
        v.iter_mut().for_each(|x| *x -= shift);
        tp.breakpoints.iter_mut().for_each(|x| *x -= shift);
        tp.voltages = VoltageProfile {
            values: v,
            offset: VoltageOffset::Shifted(-shift),
        };
        tp.center_shift = shift;
        Ok(tp)
    }

    fn centering_point(&self) -> f64 {
        let half = self.volume / 2.0;
        let b = &self.breakpoints;
        let mut prev_right = self.volume;
        for k in 0..b.len() {
            let at = self.fractional_volume(b[k]);
            if k > 0 && prev_right > half && at <= half {
                return b[k - 1] + (prev_right - half) / (prev_right - at) * (b[k] - b[k - 1]);
            }
            let right = at - self.flat_volume_at(b[k]);
            if at >= half && right <= half {
                return b[k];
            }
            prev_right = right;
        }
        *b.last().expect("at least one vertex")
    }

    /// Volume carried by edges whose endpoints both sit at voltage `t`.
    fn flat_volume_at(&self, t: f64) -> f64 {
        let v = &self.voltages.values;
        self.edges
            .iter()
            .filter(|e| v[e.low] == t && v[e.high] == t)
            .map(|e| 2.0 * e.weight)
            .sum()
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn t_min(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.breakpoints.last().expect("nonempty")
    }

    /// `S_t = {a | v(a) >= t}`.
    pub fn threshold_cut(&self, t: f64) -> VertexSet {
        VertexSet::from_mask(self.voltages.values.iter().map(|&x| x >= t).collect())
    }

    fn crossing(&self, t: f64) -> impl Iterator<Item = (&OrientedEdge, f64)> + '_ {
        let v = &self.voltages.values;
        self.edges.iter().filter_map(move |e| {
            let (lo, hi) = (v[e.low], v[e.high]);
            (lo < t && t <= hi).then_some((e, hi - lo))
        })
    }

    /// `δ(t)`: weight of the edges cut by `S_t`.
    pub fn delta(&self, t: f64) -> f64 {
        self.crossing(t).map(|(e, _)| e.weight).sum()
    }

    /// `vol_≥(t)`.
    pub fn fractional_volume(&self, t: f64) -> f64 {
        let v = &self.voltages.values;
        self.edges
            .iter()
            .map(|e| {
                let (lo, hi) = (v[e.low], v[e.high]);
                if t <= lo {
                    2.0 * e.weight
                } else if t <= hi {
                    2.0 * e.weight * (hi - t) / (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// `vol⁺_≥(t) = vol_≥(t) + 1`.
    pub fn volplus(&self, t: f64) -> f64 {
        self.fractional_volume(t) + 1.0
    }

    /// Analytic `d/dt vol⁺_≥(t)`; meaningful away from breakpoints.
    pub fn dvolplus_dt(&self, t: f64) -> f64 {
        -self
            .crossing(t)
            .map(|(e, gap)| 2.0 * e.weight / gap)
            .sum::<f64>()
    }

    /// Flow carried into `S_t` across the cut, `Σ w (v(high) - v(low))`.
    pub fn crossing_flow(&self, t: f64) -> f64 {
        self.crossing(t).map(|(e, gap)| e.weight * gap).sum()
    }

    /// The same profile for `-v`, with every edge re-oriented. Thresholds
    /// `t > 0` of the mirror correspond to thresholds `-t < 0` of `self`.
    pub fn mirrored(&self) -> Self {
        let breakpoints: Vec<f64> = self.breakpoints.iter().rev().map(|x| -x).collect();
        let shift = match self.voltages.offset {
            VoltageOffset::Shifted(s) => VoltageOffset::Shifted(-s),
            raw => raw,
        };
        ThresholdProfile {
            voltages: VoltageProfile {
                values: self.voltages.values.iter().map(|x| -x).collect(),
                offset: shift,
            },
            edges: self
                .edges
                .iter()
                .map(|e| OrientedEdge {
                    low: e.high,
                    high: e.low,
                    weight: e.weight,
                })
                .collect(),
            breakpoints,
            center_shift: -self.center_shift,
            residual: self.residual,
            volume: self.volume,
        }
    }

    /// Midpoints of consecutive breakpoints (restricted to `(lo, hi)`).
    fn interval_midpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&b| lo < b && b < hi)
            .collect();
        pts.insert(0, lo);
        pts.push(hi);
        pts.windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// `count` evenly spaced thresholds in `(lo, hi)`, each moved to the
    /// midpoint of its interval when it lands on a breakpoint.
    fn spread(&self, lo: f64, hi: f64, count: usize) -> Vec<f64> {
        if hi <= lo {
            return Vec::new();
        }
        let guard = 1e-9 * (self.t_max() - self.t_min()).max(f64::MIN_POSITIVE);
        let b = &self.breakpoints;
        (0..count)
            .map(|k| {
                let t = lo + (k as f64 + 0.5) / count as f64 * (hi - lo);
                let j = b.partition_point(|&x| x < t);
                let near = [j.checked_sub(1), Some(j)]
                    .into_iter()
                    .flatten()
                    .find(|&i| i < b.len() && (b[i] - t).abs() < guard);
                match near {
                    None => t,
                    Some(i) => {
                        let left = b[i].max(lo);
                        let right = b.get(i + 1).map_or(hi, |&x| x.min(hi));
                        if right > left {
                            0.5 * (left + right)
                        } else {
                            0.5 * (b[i - 1].max(lo) + b[i].min(hi))
                        }
                    }
                }
            })
            .collect()
    }
}

/// Merges voltages that differ by less than `SNAP` times the range, so
/// symmetric vertices get identical values.
fn snap(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let (lo, hi) = (values[order[0]], values[*order.last().unwrap()]);
    let eps = SNAP * (hi - lo);
    let mut out = values.to_vec();
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || values[order[i]] - values[order[i - 1]] > eps {
            let group = &order[start..i];
            let mean = group.iter().map(|&j| values[j]).sum::<f64>() / group.len() as f64;
            group.iter().for_each(|&j| out[j] = mean);
            start = i;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralIdentity {
    /// `Σ w |v(a) - v(b)|`.
    pub lhs: f64,
    /// `∫ δ(t) dt`, summed exactly over breakpoint intervals.
    pub rhs: f64,
    pub gap: f64,
}

pub fn check_integral_identity(tp: &ThresholdProfile) -> IntegralIdentity {
    let v = &tp.voltages.values;
    let lhs: f64 = tp
        .edges
        .iter()
        .map(|e| e.weight * (v[e.high] - v[e.low]))
        .sum();
    let rhs: f64 = tp
        .breakpoints
        .windows(2)
        .map(|w| tp.delta(0.5 * (w[0] + w[1])) * (w[1] - w[0]))
        .sum();
    IntegralIdentity {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    }
}

/// Largest deviation of the crossing flow from the demand enclosed by `S_t`,
/// over `samples` thresholds strictly inside `(t_min, t_max)`. For a unit
/// edge demand the enclosed demand is 1 at every such threshold.
pub fn check_unit_flow_across_cuts(tp: &ThresholdProfile, chi: &Demand, samples: usize) -> f64 {
    tp.spread(tp.t_min(), tp.t_max(), samples)
        .into_iter()
        .map(|t| {
            let inside: f64 = tp.threshold_cut(t).iter().map(|a| chi.values()[a]).sum();
            (tp.crossing_flow(t) - inside).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// `-d/dt vol⁺_≥ >= 2 δ²`.
    CauchySchwarz,
    /// `δ <= -(3 / (2Φ)) (d/dt vol⁺_≥) / vol⁺_≥`.
    DeltaBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub inequality: Inequality,
    /// Threshold in the original (unmirrored) voltages.
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaBoundReport {
    pub thresholds_checked: usize,
    pub violations: Vec<Violation>,
    /// Largest `lhs / rhs` seen for each inequality, in declaration order.
    pub worst_ratio: [f64; 2],
}

impl DeltaBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both derivative inequalities at thresholds on either side of the
/// centering point: every interval midpoint plus `samples` spread points for
/// `t > 0`, then the same on the mirrored profile for `t < 0`.
pub fn check_delta_bound(
    tp: &ThresholdProfile,
    phi: f64,
    samples: usize,
) -> Result<DeltaBoundReport> {
    if phi.is_nan() || phi <= 0.0 || phi.is_infinite() {
        return Err(Error::Argument(format!(
            "conductance bound must be positive, got {phi}"
        )));
    }
    let mut report = DeltaBoundReport::default();
    let mirror = tp.mirrored();
    for (side, sign) in [(tp, 1.0), (&mirror, -1.0)] {
        let hi = side.t_max();
        if hi <= 0.0 {
            continue;
        }
        let mut ts = side.interval_midpoints(0.0, hi);
        ts.extend(side.spread(0.0, hi, samples));
        for t in ts {
            report.thresholds_checked += 1;
            let delta = side.delta(t);
            let neg_d = -side.dvolplus_dt(t);
            let checks = [
                (Inequality::CauchySchwarz, 2.0 * delta * delta, neg_d),
                (
                    Inequality::DeltaBound,
                    delta,
                    1.5 / phi * neg_d / side.volplus(t),
                ),
            ];
            for (i, (inequality, lhs, rhs)) in checks.into_iter().enumerate() {
                if rhs > 0.0 {
                    report.worst_ratio[i] = report.worst_ratio[i].max(lhs / rhs);
                } else if lhs > 0.0 {
                    report.worst_ratio[i] = f64::INFINITY;
                }
                if lhs > rhs + CHECK_SLACK * lhs.abs().max(rhs.abs()) {
                    report.violations.push(Violation {
                        inequality,
                        t: sign * t,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// One row of the diagnostic dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    pub delta: f64,
    pub vol_geq: f64,
    pub volplus: f64,
    pub dvolplus_dt: f64,
    pub crossing_flow: f64,
}

pub const DIAGNOSTIC_HEADER: &str = "t,delta,vol_geq,volplus,dvolplus_dt,crossing_flow";

/// Rows at every interval midpoint plus `samples` spread thresholds, sorted by `t`.
pub fn diagnostic_rows(tp: &ThresholdProfile, samples: usize) -> Vec<DiagnosticRow> {
    let mut ts = tp.interval_midpoints(tp.t_min(), tp.t_max());
    ts.extend(tp.spread(tp.t_min(), tp.t_max(), samples));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.into_iter()
        .map(|t| DiagnosticRow {
            t,
            delta: tp.delta(t),
            vol_geq: tp.fractional_volume(t),
            volplus: tp.volplus(t),
            dvolplus_dt: tp.dvolplus_dt(t),
            crossing_flow: tp.crossing_flow(t),
        })
        .collect()
}

pub fn write_diagnostic_csv(rows: &[DiagnosticRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{DIAGNOSTIC_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.t, r.delta, r.vol_geq, r.volplus, r.dvolplus_dt, r.crossing_flow
        )?;
    }
    Ok(())
}
