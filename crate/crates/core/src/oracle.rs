//! Dense reference computations for tests. Everything here works from plain
//! edge lists and nalgebra matrices so it shares no code path with the crate
//! proper; integration tests include this file directly.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub type EdgeList = [(usize, usize, f64)];

pub fn dense_laplacian(n: usize, edges: &EdgeList) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    for &(a, b, w) in edges {
        l[(a, a)] += w;
        l[(b, b)] += w;
        l[(a, b)] -= w;
        l[(b, a)] -= w;
    }
    l
}

/// `n × m`, `-1` at the tail, `+1` at the head.
pub fn dense_incidence(n: usize, edges: &EdgeList) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(n, edges.len());
    for (e, &(t, h, _)) in edges.iter().enumerate() {
        b[(t, e)] = -1.0;
        b[(h, e)] = 1.0;
    }
    b
}

/// Moore-Penrose pseudoinverse of a symmetric PSD matrix via eigendecomposition.
pub fn pinv(l: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(l.clone());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut out = DMatrix::zeros(l.nrows(), l.ncols());
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam.abs() > 1e-9 * scale.max(1.0) {
            let u = eig.eigenvectors.column(k);
            out += (u * u.transpose()) / lam;
        }
    }
    out
}

pub fn pinv_apply(l: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    (pinv(l) * DVector::from_column_slice(b))
        .iter()
        .copied()
        .collect()
}

/// `Π = Bᵀ L⁺ B`.
pub fn dense_projection(n: usize, edges: &EdgeList) -> DMatrix<f64> {
    let b = dense_incidence(n, edges);
    let lp = pinv(&dense_laplacian(n, edges));
    b.transpose() * lp * b
}

/// `W Bᵀ L⁺ B` (equal to `Π` on unit weights).
pub fn dense_electrical_times_b(n: usize, edges: &EdgeList) -> DMatrix<f64> {
    let b = dense_incidence(n, edges);
    let lp = pinv(&dense_laplacian(n, edges));
    let w = DMatrix::from_diagonal(&DVector::from_iterator(
        edges.len(),
        edges.iter().map(|e| e.2),
    ));
    w * b.transpose() * lp * b
}

pub fn effective_resistance(n: usize, edges: &EdgeList, s: usize, t: usize) -> f64 {
    let lp = pinv(&dense_laplacian(n, edges));
    lp[(s, s)] + lp[(t, t)] - 2.0 * lp[(s, t)]
}

pub fn abs_matrix(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.map(f64::abs)
}

pub fn max_abs_row_sum(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_col_sum(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a: f64, &v| a.max(v))
}

/// Minimizes `cᵀz` subject to `A z = b`, `z >= 0` with a dense two-phase
/// simplex (Bland's rule). Returns `None` if infeasible.
pub fn simplex_min(a: &DMatrix<f64>, b: &[f64], c: &[f64]) -> Option<(f64, Vec<f64>)> {
    let (rows, vars) = (a.nrows(), a.ncols());
    // Tableau columns: vars, artificials, rhs.
    let width = vars + rows + 1;
    let mut t = DMatrix::<f64>::zeros(rows, width);
    let mut basis: Vec<usize> = Vec::with_capacity(rows);
    for r in 0..rows {
        let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for v in 0..vars {
            t[(r, v)] = sign * a[(r, v)];
        }
        t[(r, vars + r)] = 1.0;
        t[(r, width - 1)] = sign * b[r];
        basis.push(vars + r);
    }
    let eps = 1e-11;
    let run = |t: &mut DMatrix<f64>, basis: &mut Vec<usize>, cost: &[f64], allowed: usize| {
        loop {
            // reduced costs
            let mut enter = None;
            for j in 0..allowed {
                if basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j];
                for r in 0..rows {
                    rc -= cost[basis[r]] * t[(r, j)];
                }
                if rc < -eps {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else { return };
            let mut leave: Option<(f64, usize, usize)> = None;
            for r in 0..rows {
                if t[(r, j)] > eps {
                    let ratio = t[(r, width - 1)] / t[(r, j)];
                    let better = match leave {
                        None => true,
                        Some((best, _, bv)) => {
                            ratio < best - eps || (ratio <= best + eps && basis[r] < bv)
                        }
                    };
                    if better {
                        leave = Some((ratio, r, basis[r]));
                    }
                }
            }
            let Some((_, r, _)) = leave else {
                panic!("unbounded LP in oracle")
            };
            let piv = t[(r, j)];
            for k in 0..width {
                t[(r, k)] /= piv;
            }
            for rr in 0..rows {
                if rr != r {
                    let f = t[(rr, j)];
                    if f != 0.0 {
                        for k in 0..width {
                            let v = t[(r, k)];
                            t[(rr, k)] -= f * v;
                        }
                    }
                }
            }
            basis[r] = j;
        }
    };
    let mut phase1 = vec![0.0; vars + rows];
    phase1[vars..].iter_mut().for_each(|c| *c = 1.0);
    run(&mut t, &mut basis, &phase1, vars + rows);
    let infeas: f64 = (0..rows)
        .filter(|&r| basis[r] >= vars)
        .map(|r| t[(r, width - 1)])
        .sum();
    if infeas > 1e-8 {
        return None;
    }
    // Drive remaining (zero-valued) artificials out of the basis where possible.
    for r in 0..rows {
        if basis[r] >= vars {
            if let Some(j) = (0..vars).find(|&j| t[(r, j)].abs() > eps && !basis.contains(&j)) {
                let piv = t[(r, j)];
                for k in 0..width {
                    t[(r, k)] /= piv;
                }
                for rr in 0..rows {
                    if rr != r {
                        let f = t[(rr, j)];
                        for k in 0..width {
                            let v = t[(r, k)];
                            t[(rr, k)] -= f * v;
                        }
                    }
                }
                basis[r] = j;
            }
        }
    }
    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat_n(0.0, rows));
    run(&mut t, &mut basis, &phase2, vars);
    let mut z = vec![0.0; vars];
    for r in 0..rows {
        if basis[r] < vars {
            z[basis[r]] = t[(r, width - 1)];
        }
    }
    let val = z.iter().zip(c).map(|(a, b)| a * b).sum();
    Some((val, z))
}

/// Continuous minimum of `Σ w |u(a) - u(b)|` over `u` agreeing with
/// `boundary` (Some value) and free in `[0, 1]` elsewhere, as an LP.
pub fn l1_extension_lp(n: usize, edges: &EdgeList, boundary: &[Option<f64>]) -> f64 {
    let free: Vec<usize> = (0..n).filter(|&v| boundary[v].is_none()).collect();
    let mut col = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        col[v] = i;
    }
    let nf = free.len();
    let m = edges.len();
    // variables: y (nf), slack (nf), p (m), q (m)
    let vars = 2 * nf + 2 * m;
    let rows = nf + m;
    let mut a = DMatrix::zeros(rows, vars);
    let mut b = vec![0.0; rows];
    let mut c = vec![0.0; vars];
    for i in 0..nf {
        a[(i, i)] = 1.0;
        a[(i, nf + i)] = 1.0;
        b[i] = 1.0;
    }
    for (e, &(s, t, w)) in edges.iter().enumerate() {
        let r = nf + e;
        // u(s) - u(t) - p + q = 0
        let mut rhs = 0.0;
        match boundary[s] {
            Some(x) => rhs -= x,
            None => a[(r, col[s])] += 1.0,
        }
        match boundary[t] {
            Some(x) => rhs += x,
            None => a[(r, col[t])] -= 1.0,
        }
        a[(r, 2 * nf + e)] = -1.0;
        a[(r, 2 * nf + m + e)] = 1.0;
        b[r] = rhs;
        c[2 * nf + e] = w;
        c[2 * nf + m + e] = w;
    }
    simplex_min(&a, &b, &c).expect("box LP is feasible").0
}
