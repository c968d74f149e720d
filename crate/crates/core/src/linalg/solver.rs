//! Laplacian solves on the sum-zero subspace: the numeric stand-in for `L⁺ b`.

use super::sparse::{laplacian, SparseMatrix};
use super::{dot, norm2, MatrixView};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Default relative residual tolerance for Laplacian solves.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// Final `‖L x - b‖₂ / ‖b‖₂`, measured on the true residual.
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Jacobi-preconditioned conjugate gradient for a connected graph's
/// Laplacian. Built once and shared across solves.
#[derive(Debug, Clone)]
pub struct LaplacianSolver {
    lap: SparseMatrix,
    inv_diag: Vec<f64>,
    max_iter: usize,
}

impl LaplacianSolver {
    pub fn new(g: &Multigraph) -> Result<Self> {
        g.ensure_connected()?;
        let lap = laplacian(g);
        let inv_diag = g.weighted_degrees().iter().map(|d| 1.0 / d).collect();
        let (wmin, wmax) = g
            .edges()
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), e| {
                (lo.min(e.weight), hi.max(e.weight))
            });
        // κ̂ = n² · wmax / wmin; cap = 10 · n · √κ̂, at least 10⁴.
        let n = g.n() as f64;
        let cap = 10.0 * n * n * (wmax / wmin).sqrt();
        let max_iter = cap.clamp(1e4, 1e8) as usize;
        Ok(LaplacianSolver {
            lap,
            inv_diag,
            max_iter,
        })
    }

    pub fn with_max_iterations(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn n(&self) -> usize {
        self.inv_diag.len()
    }

    pub fn laplacian(&self) -> &SparseMatrix {
        &self.lap
    }

    /// Solves `L x = b` for `b ⟂ 1`, returning the solution orthogonal to `1`
    /// with `‖L x - b‖₂ <= tol ‖b‖₂`.
    pub fn solve(&self, b: &[f64], tol: f64) -> Result<SolveReport> {
        let n = self.n();
        if b.len() != n {
            return Err(Error::Argument(format!(
                "rhs has length {}, expected {n}",
                b.len()
            )));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Argument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let bnorm = norm2(b);
        if bnorm == 0.0 {
            return Ok(SolveReport {
                solution: vec![0.0; n],
                residual_norm: 0.0,
                iterations: 0,
            });
        }
        let sum: f64 = b.iter().sum();
        if sum.abs() > 10.0 * tol * bnorm {
            return Err(Error::Contract(format!(
                "right-hand side is not a demand: 1ᵀb = {sum:e} with ‖b‖ = {bnorm:e}"
            )));
        }
        let mut rhs = b.to_vec();
        center(&mut rhs);
        let target = tol * bnorm;

        let mut x = vec![0.0; n];
        let mut r = rhs.clone();
        let mut z = vec![0.0; n];
        let mut q = vec![0.0; n];
        let mut iterations = 0;
        loop {
            // (Re)start from the true residual.
            self.precondition(&r, &mut z);
            let mut p = z.clone();
            let mut rz = dot(&r, &z);
            while norm2(&r) > 0.5 * target && iterations < self.max_iter {
                self.lap.mul_vec_into(&p, &mut q);
                let pq = dot(&p, &q);
                if pq <= 0.0 {
                    break;
                }
                let alpha = rz / pq;
                for i in 0..n {
                    x[i] += alpha * p[i];
                    r[i] -= alpha * q[i];
                }
                self.precondition(&r, &mut z);
                let rz_next = dot(&r, &z);
                let beta = rz_next / rz;
                rz = rz_next;
                for i in 0..n {
                    p[i] = z[i] + beta * p[i];
                }
                iterations += 1;
            }
            center(&mut x);
            self.lap.mul_vec_into(&x, &mut q);
            for i in 0..n {
                r[i] = rhs[i] - q[i];
            }
            let res = norm2(&r);
            if res <= target {
                return Ok(SolveReport {
                    solution: x,
                    residual_norm: res / bnorm,
                    iterations,
                });
            }
            if iterations >= self.max_iter {
                return Err(Error::Convergence {
                    what: "Laplacian conjugate gradient",
                    iterations,
                    estimate: res / bnorm,
                    last_iterate: x,
                });
            }
        }
    }

    fn precondition(&self, r: &[f64], z: &mut [f64]) {
        for ((zi, ri), di) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = ri * di;
        }
        center(z);
    }
}

/// One-shot solve; see [`LaplacianSolver::solve`].
pub fn solve_laplacian(g: &Multigraph, b: &[f64], tol: f64) -> Result<SolveReport> {
    LaplacianSolver::new(g)?.solve(b, tol)
}

/// Subtracts the mean so the vector is orthogonal to `1`.
pub(crate) fn center(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::gen_random_regular;
    use crate::oracle;

    #[test]
    fn k2_by_hand() {
        let r = solve_laplacian(&complete(2), &[1.0, -1.0], DEFAULT_TOL).unwrap();
        assert!((r.solution[0] - 0.5).abs() < 1e-14);
        assert!((r.solution[1] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_rhs() {
        let r = solve_laplacian(&petersen(), &[0.0; 10], DEFAULT_TOL).unwrap();
        assert_eq!(r.solution, vec![0.0; 10]);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn path_against_dense_pseudoinverse() {
        let g = path(3);
        let b = [1.0, 0.0, -1.0];
        let expect = oracle::pinv_apply(&oracle::dense_laplacian(g.n(), &g.edge_triples()), &b);
        assert!(expect
            .iter()
            .zip([1.0, 0.0, -1.0])
            .all(|(a, b)| (a - b).abs() < 1e-12));
        let r = solve_laplacian(&g, &b, DEFAULT_TOL).unwrap();
        for (x, y) in r.solution.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn residual_and_orthogonality() {
        let g = gen_random_regular(40, 3, 5).unwrap();
        let solver = LaplacianSolver::new(&g).unwrap();
        let mut b = vec![0.0; 40];
        b[3] = 2.0;
        b[17] = -0.5;
        b[30] = -1.5;
        let r = solver.solve(&b, DEFAULT_TOL).unwrap();
        assert!(r.residual_norm <= DEFAULT_TOL);
        let lx = solver.laplacian().mul_vec(&r.solution);
        let res: f64 = lx
            .iter()
            .zip(&b)
            .map(|(a, c)| (a - c).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(res <= DEFAULT_TOL * norm2(&b));
        let s: f64 = r.solution.iter().sum();
        assert!(s.abs() <= 1e-12 * norm2(&r.solution));
    }

    #[test]
    fn rejects_non_demand_and_disconnected() {
        assert!(matches!(
            solve_laplacian(&complete(3), &[1.0, 0.0, 0.0], DEFAULT_TOL),
            Err(Error::Contract(_))
        ));
        let g = Multigraph::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            solve_laplacian(&g, &[1.0, -1.0, 0.0, 0.0], DEFAULT_TOL),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn iteration_cap_reports_convergence_error() {
        let g = gen_random_regular(30, 3, 1).unwrap();
        let solver = LaplacianSolver::new(&g).unwrap().with_max_iterations(2);
        let mut b = vec![0.0; 30];
        b[0] = 1.0;
        b[29] = -1.0;
        match solver.solve(&b, 1e-12) {
            Err(Error::Convergence {
                iterations,
                last_iterate,
                ..
            }) => {
                assert_eq!(iterations, 2);
                assert_eq!(last_iterate.len(), 30);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
