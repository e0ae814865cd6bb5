//! Dense kernels backing the spectral oracle: a small square-matrix type,
//! a real nonsymmetric eigensolver (balancing, Householder reduction to
//! Hessenberg form, shifted QR with accumulated transformations), complex
//! LU factorization, and eigenvalue-set matching.

pub mod assign;
pub mod clu;
pub mod eigen;

use crate::scalar::Scalar;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    n: usize,
    a: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![S::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> S {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.a[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[S], y: &mut [S]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let row = self.row(i);
            let mut acc = S::zero();
            for (aij, xj) in row.iter().zip(x.iter()) {
                acc += *aij * *xj;
            }
            y[i] = acc;
        }
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let mut y = vec![S::zero(); self.n];
        self.matvec(x, &mut y);
        y
    }
}
