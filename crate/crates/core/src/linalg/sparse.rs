use std::collections::BTreeMap;

/// Compressed sparse row matrix over `f64` with sorted column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Accumulates `(row, col, value)` entries; duplicates are summed.
#[derive(Clone, Debug, Default)]
pub struct TripletBuilder {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl TripletBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        TripletBuilder {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        assert!(
            row < self.nrows && col < self.ncols,
            "entry ({row}, {col}) out of bounds"
        );
        *self.entries.entry((row, col)).or_insert(0.0) += value;
    }

    pub fn build(self) -> CsrMatrix {
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values = Vec::with_capacity(self.entries.len());
        for (&(r, c), &v) in &self.entries {
            if v == 0.0 {
                continue;
            }
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for r in 0..self.nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl CsrMatrix {
    pub fn diagonal(d: &[f64]) -> Self {
        let mut b = TripletBuilder::new(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            b.push(i, i, v);
        }
        b.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[range.clone()].binary_search(&c) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec length");
        (0..self.nrows)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut b = TripletBuilder::new(self.ncols, self.nrows);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                b.push(c, r, v);
            }
        }
        b.build()
    }

    pub fn matmul(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(self.ncols, other.nrows, "matmul shapes");
        let mut b = TripletBuilder::new(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for (k, v) in self.row(r) {
                for (c, w) in other.row(k) {
                    b.push(r, c, v * w);
                }
            }
        }
        b.build()
    }

    pub fn add(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(
            (self.nrows, self.ncols),
            (other.nrows, other.ncols),
            "add shapes"
        );
        let mut b = TripletBuilder::new(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r).chain(other.row(r)) {
                b.push(r, c, v);
            }
        }
        b.build()
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &CsrMatrix) -> CsrMatrix {
        self.add(&other.scale(alpha))
    }

    pub fn scale(&self, alpha: f64) -> CsrMatrix {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&self, d: &[f64]) -> CsrMatrix {
        let mut out = self.clone();
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out.values[k] *= d[r];
            }
        }
        out
    }

    /// `self · diag(d)`.
    pub fn scale_cols(&self, d: &[f64]) -> CsrMatrix {
        let mut out = self.clone();
        for k in 0..out.values.len() {
            out.values[k] *= d[out.col_idx[k]];
        }
        out
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let t = self.transpose();
        let mut worst = 0.0f64;
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                worst = worst.max((v - t.get(r, c)).abs());
            }
            for (c, v) in t.row(r) {
                worst = worst.max((v - self.get(r, c)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_sums_duplicates_and_drops_zeros() {
        let mut b = TripletBuilder::new(2, 3);
        b.push(0, 2, 1.0);
        b.push(0, 2, 2.0);
        b.push(1, 0, 1.0);
        b.push(1, 0, -1.0);
        let m = b.build();
        assert_eq!(m.get(0, 2), 3.0);
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn products_match_dense() {
        let mut b = TripletBuilder::new(3, 2);
        b.push(0, 0, 1.0);
        b.push(1, 1, -2.0);
        b.push(2, 0, 3.0);
        b.push(2, 1, 0.5);
        let a = b.build();
        let ata = a.transpose().matmul(&a);
        let dense = a.to_dense().transpose() * a.to_dense();
        assert!((ata.to_dense() - dense).amax() < 1e-15);
        assert_eq!(a.matvec(&[1.0, 2.0]), vec![1.0, -4.0, 4.0]);
        assert_eq!(ata.asymmetry(), 0.0);
    }
}
