//! Sanity checks of the dense reference computations themselves.

use nalgebra::DMatrix;

use crate::oracle::*;

#[test]
fn simplex_small() {
    // min -x - y  s.t. x + s1 = 1, y + s2 = 2
    let a = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    let (v, z) = simplex_min(&a, &[1.0, 2.0], &[-1.0, -1.0, 0.0, 0.0]).unwrap();
    assert!((v + 3.0).abs() < 1e-12);
    assert!((z[0] - 1.0).abs() < 1e-12 && (z[1] - 2.0).abs() < 1e-12);
}

#[test]
fn l1_lp_path() {
    // path a-b-c with u(a)=1, u(c)=0: minimum 1
    let edges = [(0, 1, 1.0), (1, 2, 1.0)];
    let v = l1_extension_lp(3, &edges, &[Some(1.0), None, Some(0.0)]);
    assert!((v - 1.0).abs() < 1e-12);
}

#[test]
fn pinv_k3() {
    let l = dense_laplacian(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]);
    let p = pinv(&l);
    assert!((p[(0, 0)] - 2.0 / 9.0).abs() < 1e-12);
    assert!((p[(0, 1)] + 1.0 / 9.0).abs() < 1e-12);
}
