use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use super::MatrixView;
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Compressed-row sparse matrix. Entries are sorted by `(row, col)`, summed
/// over duplicates, and never hold explicit zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = t.iter().find(|&&(r, c, _)| r >= rows || c >= cols) {
            return Err(Error::Argument(format!(
                "entry ({r}, {c}) outside a {rows} x {cols} matrix"
            )));
        }
        t.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0; rows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values = Vec::with_capacity(t.len());
        let mut i = 0;
        while i < t.len() {
            let (r, c) = (t[i].0, t[i].1);
            let mut v = 0.0;
            while i < t.len() && t[i].0 == r && t[i].1 == c {
                v += t[i].2;
                i += 1;
            }
            if v != 0.0 {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0))).expect("in range")
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let trip = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, m[(r, c)]));
        Self::from_triplets(m.nrows(), m.ncols(), trip).expect("in range")
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.col_idx[lo..hi].binary_search(&c) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    /// `(col, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v)),
        )
        .expect("in range")
    }

    /// Entrywise absolute value.
    pub fn abs(&self) -> Self {
        SparseMatrix {
            values: self.values.iter().map(|v| v.abs()).collect(),
            ..self.clone()
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            d[(r, c)] = v;
        }
        d
    }

    /// Coordinate text: a `rows cols nnz` header, then one `row col value` per line.
    pub fn write_coordinate<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(out, "{r} {c} {v}")?;
        }
        Ok(())
    }

    pub fn read_coordinate<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let bad = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let header = header?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| bad(1, "bad header")))
            .collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(bad(1, "expected `rows cols nnz`"));
        }
        let mut trip = Vec::with_capacity(h[2]);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(i + 1, "expected `row col value`"));
            }
            let r = f[0].parse().map_err(|_| bad(i + 1, "bad row"))?;
            let c = f[1].parse().map_err(|_| bad(i + 1, "bad col"))?;
            let v = f[2].parse().map_err(|_| bad(i + 1, "bad value"))?;
            trip.push((r, c, v));
        }
        if trip.len() != h[2] {
            return Err(bad(0, "entry count does not match header"));
        }
        Self::from_triplets(h[0], h[1], trip)
    }
}

impl MatrixView for SparseMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    fn tr_mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (r, xr) in x.iter().enumerate().take(self.rows) {
            for (c, v) in self.row(r) {
                y[c] += v * xr;
            }
        }
    }

    fn for_each_entry(&self, mut f: impl FnMut(usize, usize, f64)) {
        for (r, c, v) in self.triplets() {
            f(r, c, v);
        }
    }
}

/// `n × m` incidence matrix: column `e` has `-1` at the tail and `+1` at the head.
pub fn incidence(g: &Multigraph) -> SparseMatrix {
    let trip = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(i, e)| [(e.tail, i, -1.0), (e.head, i, 1.0)]);
    SparseMatrix::from_triplets(g.n(), g.m(), trip).expect("edge endpoints are in range")
}

/// `L = B W Bᵀ`.
pub fn laplacian(g: &Multigraph) -> SparseMatrix {
    let trip = g.edges().iter().flat_map(|e| {
        [
            (e.tail, e.tail, e.weight),
            (e.head, e.head, e.weight),
            (e.tail, e.head, -e.weight),
            (e.head, e.tail, -e.weight),
        ]
    });
    SparseMatrix::from_triplets(g.n(), g.n(), trip).expect("edge endpoints are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn incidence_columns() {
        let b = incidence(&complete(2));
        assert_eq!(b.to_dense(), DMatrix::from_row_slice(2, 1, &[-1.0, 1.0]));
        let b3 = incidence(&complete(3));
        assert_eq!((b3.nrows(), b3.ncols(), b3.nnz()), (3, 3, 6));
        let ones = vec![1.0; 3];
        let mut col_sums = vec![0.0; 3];
        b3.tr_mul_vec_into(&ones, &mut col_sums);
        assert!(col_sums.iter().all(|&s| s == 0.0));
        for e in 0..3 {
            let col: Vec<f64> = (0..3).map(|v| b3.get(v, e)).collect();
            assert_eq!(col.iter().filter(|&&x| x == -1.0).count(), 1);
            assert_eq!(col.iter().filter(|&&x| x == 1.0).count(), 1);
        }
    }

    #[test]
    fn laplacian_examples() {
        let l = laplacian(&complete(2)).to_dense();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let c4 = laplacian(&cycle(4)).to_dense();
        let mut expect = DMatrix::identity(4, 4) * 2.0;
        for i in 0..4 {
            expect[(i, (i + 1) % 4)] = -1.0;
            expect[((i + 1) % 4, i)] = -1.0;
        }
        assert_eq!(c4, expect);
        let p = laplacian(&petersen());
        assert!(p.mul_vec(&[1.0; 10]).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_is_b_w_bt() {
        let g = crate::graph::Multigraph::new(
            3,
            vec![
                crate::graph::Edge::new(0, 1, 2.0),
                crate::graph::Edge::new(1, 2, 3.0),
                crate::graph::Edge::new(1, 0, 1.5),
            ],
        )
        .unwrap();
        let b = incidence(&g).to_dense();
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(g.weights()));
        assert_eq!(laplacian(&g).to_dense(), &b * w * b.transpose());
    }

    #[test]
    fn duplicates_sum_and_zeros_drop() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            [(0, 0, 1.0), (0, 0, 2.0), (1, 1, 1.0), (1, 1, -1.0)],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 3.0);
        assert!(SparseMatrix::from_triplets(2, 2, [(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn coordinate_round_trip() {
        let l = laplacian(&cycle(5));
        let mut buf = Vec::new();
        l.write_coordinate(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("5 5 15\n"));
        assert_eq!(SparseMatrix::read_coordinate(buf.as_slice()).unwrap(), l);
    }
}
