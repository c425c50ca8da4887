//! Minimal symmetric sparse matrix in CSR form (full storage, not just a
//! triangle), enough for assembly, matvecs and dense conversion.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct Csr {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl Csr {
    /// Builds from (row, col, value) triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Csr {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
                last = Some((r, c));
            }
            indptr[r + 1] = indices.len();
        }
        for r in 1..=n {
            indptr[r] = indptr[r].max(indptr[r - 1]);
        }
        Csr {
            n,
            indptr,
            indices,
            data,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for r in 0..self.n {
            let mut s = 0.0;
            for t in self.indptr[r]..self.indptr[r + 1] {
                s += self.data[t] * x[self.indices[t]];
            }
            y[r] = s;
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            for t in self.indptr[r]..self.indptr[r + 1] {
                d[(r, self.indices[t])] += self.data[t];
            }
        }
        d
    }

    pub fn diagonal(&self) -> DVector<f64> {
        let mut d = DVector::zeros(self.n);
        for r in 0..self.n {
            for t in self.indptr[r]..self.indptr[r + 1] {
                if self.indices[t] == r {
                    d[r] += self.data[t];
                }
            }
        }
        d
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.data[self.indptr[r]..self.indptr[r + 1]].iter().sum()
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |t| (self.indices[t], self.data[t]))
    }

    /// Submatrix on the given (sorted) index subset.
    pub fn restrict(&self, keep: &[usize]) -> Csr {
        let mut pos = vec![usize::MAX; self.n];
        for (t, &g) in keep.iter().enumerate() {
            pos[g] = t;
        }
        let mut triplets = Vec::new();
        for (rnew, &r) in keep.iter().enumerate() {
            for t in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[t];
                if pos[c] != usize::MAX {
                    triplets.push((rnew, pos[c], self.data[t]));
                }
            }
        }
        Csr::from_triplets(keep.len(), triplets)
    }
}
