//! Incidence/Laplacian assembly, Laplacian solves, and induced matrix norms.

mod norms;
mod solver;
mod sparse;

use nalgebra::DMatrix;

use crate::error::Result;

pub use norms::{
    induced_norm, induced_norm_1, induced_norm_inf, induced_norm_p_nonneg, PNorm,
    DEFAULT_NORM_ITER_CAP, DEFAULT_NORM_TOL,
};
pub use solver::{solve_laplacian, LaplacianSolver, SolveReport, DEFAULT_TOL};
pub use sparse::{incidence, laplacian, SparseMatrix};

/// Read-only access to a real matrix, sparse or dense.
pub trait MatrixView {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `y = M x`.
    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]);
    /// `y = Mᵀ x`.
    fn tr_mul_vec_into(&self, x: &[f64], y: &mut [f64]);
    /// Visits every stored entry; zeros may or may not be visited.
    fn for_each_entry(&self, f: impl FnMut(usize, usize, f64));
}

impl MatrixView for DMatrix<f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn tr_mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (c, out) in y.iter_mut().enumerate() {
            *out = self.column(c).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn for_each_entry(&self, mut f: impl FnMut(usize, usize, f64)) {
        for c in 0..self.ncols() {
            for r in 0..self.nrows() {
                f(r, c, self[(r, c)]);
            }
        }
    }
}

/// A linear map from vertex space to edge space (an oblivious routing when
/// it satisfies `B A χ = χ` for every demand).
pub trait LinearOperator: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
