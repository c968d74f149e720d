//! Induced `p → p` operator norms. `p ∈ {1, ∞}` use the exact column/row-sum
//! formulas; interior `p` is computed for entrywise-nonnegative matrices with
//! the nonlinear power iteration
//! `x ← normalize(ψ_{p*}(Mᵀ ψ_p(M x)))`, `ψ_p(v) = v^{p-1}`,
//! bracketed at every step by the lower bound `‖M x‖_p` and the
//! Collatz–Wielandt-type upper bound
//! `(max_i (Mᵀ (M x)^{p-1})_i / x_i^{p-1})^{1/p}`.

use std::fmt;
use std::str::FromStr;

use super::MatrixView;
use crate::error::{Error, Result};

pub const DEFAULT_NORM_TOL: f64 = 1e-8;
pub const DEFAULT_NORM_ITER_CAP: usize = 20_000;

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PNorm(f64);

impl PNorm {
    pub const ONE: PNorm = PNorm(1.0);
    pub const TWO: PNorm = PNorm(2.0);
    pub const INF: PNorm = PNorm(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(PNorm(p))
        } else {
            Err(Error::Argument(format!(
                "norm exponent must lie in [1, inf], got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `‖v‖_p`.
    pub fn vector_norm(self, v: &[f64]) -> f64 {
        let p = self.0;
        if p.is_infinite() {
            v.iter().fold(0.0, |a, x| a.max(x.abs()))
        } else if p == 1.0 {
            v.iter().map(|x| x.abs()).sum()
        } else {
            let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if scale == 0.0 {
                return 0.0;
            }
            scale
                * v.iter()
                    .map(|x| (x.abs() / scale).powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p)
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PNorm::INF),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad norm exponent {s:?}")))?;
                PNorm::new(p)
            }
        }
    }
}

/// `‖M‖_{1→1}`: largest absolute column sum.
pub fn induced_norm_1(m: &impl MatrixView) -> f64 {
    let mut sums = vec![0.0; m.ncols()];
    m.for_each_entry(|_, c, v| sums[c] += v.abs());
    sums.into_iter().fold(0.0, f64::max)
}

/// `‖M‖_{∞→∞}`: largest absolute row sum.
pub fn induced_norm_inf(m: &impl MatrixView) -> f64 {
    let mut sums = vec![0.0; m.nrows()];
    m.for_each_entry(|r, _, v| sums[r] += v.abs());
    sums.into_iter().fold(0.0, f64::max)
}

/// `‖M‖_{p→p}` for `p ∈ [1, ∞]`; interior `p` requires a nonnegative matrix.
pub fn induced_norm(m: &impl MatrixView, p: PNorm, tol: f64, iter_cap: usize) -> Result<f64> {
    if p.is_infinite() {
        Ok(induced_norm_inf(m))
    } else if p.value() == 1.0 {
        Ok(induced_norm_1(m))
    } else {
        induced_norm_p_nonneg(m, p.value(), tol, iter_cap)
    }
}

/// `‖M‖_{p→p}` of an entrywise-nonnegative matrix, to relative accuracy `tol`.
pub fn induced_norm_p_nonneg(
    m: &impl MatrixView,
    p: f64,
    tol: f64,
    iter_cap: usize,
) -> Result<f64> {
    let mut negative = None;
    m.for_each_entry(|r, c, v| {
        if v < 0.0 && negative.is_none() {
            negative = Some((r, c, v));
        }
    });
    if let Some((r, c, v)) = negative {
        return Err(Error::Contract(format!(
            "matrix entry ({r}, {c}) = {v} is negative"
        )));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::Argument(format!(
            "norm exponent must lie in [1, inf], got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(induced_norm_inf(m));
    }
    if p == 1.0 {
        return Ok(induced_norm_1(m));
    }
    let p = if (p - 2.0).abs() < 1e-9 { 2.0 } else { p };
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 || induced_norm_inf(m) == 0.0 {
        return Ok(0.0);
    }

    let pn = PNorm(p);
    let dual_exp = 1.0 / (p - 1.0);
    let mut x = vec![1.0; cols];
    normalize(&mut x, pn);
    let mut y = vec![0.0; rows];
    let mut z = vec![0.0; cols];
    let mut prev_lower = 0.0;
    let mut restarted = false;
    let mut lower = 0.0;
    let mut gap = f64::INFINITY;
    for iter in 0..iter_cap {
        m.mul_vec_into(&x, &mut y);
        lower = pn.vector_norm(&y);
        // ψ_p(Mx), scaled by the largest entry to keep powers in range.
        let ymax = y.iter().fold(0.0f64, |a, &v| a.max(v));
        let g: Vec<f64> = y.iter().map(|&v| (v / ymax).powf(p - 1.0)).collect();
        m.tr_mul_vec_into(&g, &mut z);
        let mut ratio = 0.0f64;
        for (zi, xi) in z.iter().zip(&x) {
            if *zi > 0.0 {
                ratio = ratio.max(if *xi > 0.0 {
                    zi / xi.powf(p - 1.0)
                } else {
                    f64::INFINITY
                });
            }
        }
        let upper = (ratio * ymax.powf(p - 1.0)).powf(1.0 / p);
        gap = upper - lower;
        if gap <= tol * lower {
            return Ok(lower);
        }
        if !restarted && iter > 0 && iter < 50 && lower <= prev_lower {
            // Stalled: perturb the iterate deterministically and continue.
            restarted = true;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (*xi).max(1e-3) * (1.0 + 0.1 * ((i * 7919) % 13) as f64 / 13.0);
            }
            normalize(&mut x, pn);
            prev_lower = lower;
            continue;
        }
        prev_lower = lower;
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi = zi.powf(dual_exp);
        }
        normalize(&mut x, pn);
    }
    Err(Error::Convergence {
        what: "nonnegative p-norm power iteration",
        iterations: iter_cap,
        estimate: if lower > 0.0 { gap / lower } else { gap },
        last_iterate: x,
    })
}

fn normalize(x: &mut [f64], p: PNorm) {
    let n = p.vector_norm(x);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}
