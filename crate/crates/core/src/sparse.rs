//! Sparse symmetric matrices: coordinate assembly, compressed rows, and the
//! tridiagonal special case used by the reduced models.

use nalgebra::DMatrix;

/// Coordinate-format accumulator. Entries may repeat; duplicates are summed
/// during compression.
#[derive(Clone, Debug, Default)]
pub struct CooMatrix {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl CooMatrix {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.dim && col < self.dim);
        if value != 0.0 {
            self.entries.push((row, col, value));
        }
    }

    /// Compress to row-major CSR, summing duplicate coordinates. The entry
    /// order within a row is strictly increasing in column, so the result is
    /// bit-reproducible for a given insertion sequence.
    pub fn to_csr(mut self) -> CsrMatrix {
        self.entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(self.entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut cur_row = 0usize;
        for (r, c, v) in self.entries {
            while cur_row < r {
                cur_row += 1;
                row_ptr[cur_row] = cols.len();
            }
            if cols.len() > row_ptr[cur_row] && *cols.last().unwrap() == c {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
            }
        }
        while cur_row < self.dim {
            cur_row += 1;
            row_ptr[cur_row] = cols.len();
        }
        CsrMatrix { dim: self.dim, row_ptr, cols, vals }
    }
}

/// Real matrix in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        match self.cols[lo..hi].binary_search(&col) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yr = acc;
        }
    }

    pub fn for_each_entry(&self, mut f: impl FnMut(usize, usize, f64)) {
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                f(r, self.cols[k], self.vals[k]);
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        self.for_each_entry(|r, c, v| m[(r, c)] = v);
        m
    }

    /// Largest absolute difference between the matrix and its transpose.
    pub fn symmetry_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        self.for_each_entry(|r, c, v| {
            dev = dev.max((v - self.get(c, r)).abs());
        });
        dev
    }

    /// Row-sum (infinity) norm.
    pub fn inf_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for r in 0..self.dim {
            let s: f64 = self.vals[self.row_ptr[r]..self.row_ptr[r + 1]]
                .iter()
                .map(|v| v.abs())
                .sum();
            best = best.max(s);
        }
        best
    }
}

/// Real symmetric tridiagonal matrix, stored as its diagonal and
/// first off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len().max(1));
        Self { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col {
            self.diag[row]
        } else if row + 1 == col {
            self.offdiag[row]
        } else if col + 1 == row {
            self.offdiag[col]
        } else {
            0.0
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.offdiag[i];
                m[(i + 1, i)] = self.offdiag[i];
            }
        }
        m
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let n = self.dim();
        let mut coo = CooMatrix::new(n);
        for i in 0..n {
            coo.push(i, i, self.diag[i]);
            if i + 1 < n {
                coo.push(i, i + 1, self.offdiag[i]);
                coo.push(i + 1, i, self.offdiag[i]);
            }
        }
        coo.to_csr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coo_sums_duplicates_and_orders_rows() {
        let mut coo = CooMatrix::new(3);
        coo.push(2, 0, 1.0);
        coo.push(0, 1, 2.0);
        coo.push(0, 1, 0.5);
        coo.push(1, 1, -1.0);
        let csr = coo.to_csr();
        assert_eq!(csr.nnz(), 3);
        assert_eq!(csr.get(0, 1), 2.5);
        assert_eq!(csr.get(1, 1), -1.0);
        assert_eq!(csr.get(2, 0), 1.0);
        assert_eq!(csr.get(0, 0), 0.0);
    }

    #[test]
    fn csr_matvec_matches_dense() {
        let mut coo = CooMatrix::new(4);
        coo.push(0, 0, 2.0);
        coo.push(1, 3, -1.0);
        coo.push(3, 1, -1.0);
        coo.push(2, 2, 5.0);
        let csr = coo.to_csr();
        let x = [1.0, 2.0, 3.0, 4.0];
        let mut y = [0.0; 4];
        csr.matvec(&x, &mut y);
        let d = csr.to_dense();
        for i in 0..4 {
            let expect: f64 = (0..4).map(|j| d[(i, j)] * x[j]).sum();
            assert!((y[i] - expect).abs() < 1e-15);
        }
        assert_eq!(csr.symmetry_deviation(), 0.0);
    }

    #[test]
    fn tridiagonal_round_trip() {
        let t = Tridiagonal::new(vec![1.0, 2.0, 3.0], vec![-1.0, 4.0]);
        let csr = t.to_csr();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.get(i, j), csr.get(i, j));
            }
        }
        let x = [1.0, -1.0, 2.0];
        let mut y1 = [0.0; 3];
        let mut y2 = [0.0; 3];
        t.matvec(&x, &mut y1);
        csr.matvec(&x, &mut y2);
        assert_eq!(y1, y2);
    }

    #[test]
    fn empty_rows_are_handled() {
        let coo = CooMatrix::new(5);
        let csr = coo.to_csr();
        assert_eq!(csr.nnz(), 0);
        let mut y = [1.0; 5];
        csr.matvec(&[1.0; 5], &mut y);
        assert_eq!(y, [0.0; 5]);
    }
}
