//! Complex dense LU factorization with partial pivoting, used to invert
//! eigenvector matrices and to estimate their conditioning.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major complex dense matrix.
#[derive(Debug, Clone)]
pub struct ComplexMatrix<S> {
    n: usize,
    a: Vec<Complex<S>>,
}

impl<S: Scalar> ComplexMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![Complex::new(S::zero(), S::zero()); n * n],
        }
    }

    pub fn from_columns(columns: &[Vec<Complex<S>>]) -> Self {
        let n = columns.len();
        let mut m = Self::zeros(n);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length must equal column count");
            for (i, &value) in col.iter().enumerate() {
                m.a[i * n + j] = value;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<S> {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex<S> {
        &mut self.a[i * self.n + j]
    }

    pub fn matvec(&self, x: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(x.len(), self.n);
        let mut out = vec![Complex::new(S::zero(), S::zero()); self.n];
        for i in 0..self.n {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            let mut acc = Complex::new(S::zero(), S::zero());
            for (aij, xj) in row.iter().zip(x.iter()) {
                acc += aij * xj;
            }
            out[i] = acc;
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> S {
        let mut worst = S::zero();
        for j in 0..self.n {
            let mut sum = S::zero();
            for i in 0..self.n {
                sum += self.at(i, j).norm();
            }
            if sum > worst {
                worst = sum;
            }
        }
        worst
    }
}

/// LU factorization PA = LU with partial pivoting.
#[derive(Debug, Clone)]
pub struct LuFactor<S> {
    lu: ComplexMatrix<S>,
    pivots: Vec<usize>,
}

impl<S: Scalar> LuFactor<S> {
    pub fn factor(a: &ComplexMatrix<S>) -> Result<Self> {
        let n = a.order();
        let mut lu = a.clone();
        let mut pivots: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut best = k;
            let mut best_mag = lu.at(k, k).norm();
            for i in (k + 1)..n {
                let mag = lu.at(i, k).norm();
                if mag > best_mag {
                    best = i;
                    best_mag = mag;
                }
            }
            if best_mag == S::zero() {
                return Err(Error::Singular {
                    context: "lu-factor".into(),
                    pivot: 0.0,
                    step: k,
                });
            }
            if best != k {
                for j in 0..n {
                    let tmp = lu.at(k, j);
                    *lu.at_mut(k, j) = lu.at(best, j);
                    *lu.at_mut(best, j) = tmp;
                }
                pivots.swap(k, best);
            }
            let pivot = lu.at(k, k);
            for i in (k + 1)..n {
                let factor = lu.at(i, k) / pivot;
                *lu.at_mut(i, k) = factor;
                for j in (k + 1)..n {
                    let delta = factor * lu.at(k, j);
                    *lu.at_mut(i, j) -= delta;
                }
            }
        }
        Ok(Self { lu, pivots })
    }

    pub fn solve(&self, b: &[Complex<S>]) -> Vec<Complex<S>> {
        let n = self.lu.order();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex<S>> = self.pivots.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu.at(i, j) * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu.at(i, j) * x[j];
            }
            x[i] = acc / self.lu.at(i, i);
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix<S> {
        let n = self.lu.order();
        let mut inv = ComplexMatrix::zeros(n);
        let mut unit = vec![Complex::new(S::zero(), S::zero()); n];
        for j in 0..n {
            unit[j] = Complex::new(S::one(), S::zero());
            let col = self.solve(&unit);
            unit[j] = Complex::new(S::zero(), S::zero());
            for (i, value) in col.into_iter().enumerate() {
                *inv.at_mut(i, j) = value;
            }
        }
        inv
    }
}

/// 1-norm condition number computed from the explicit inverse. The matrices
/// involved here are at most a few thousand rows, so the O(n^3) cost of the
/// exact computation is acceptable and avoids estimator noise in tests.
pub fn cond1<S: Scalar>(a: &ComplexMatrix<S>) -> Result<S> {
    let factor = LuFactor::factor(a)?;
    Ok(a.norm1() * factor.inverse().norm1())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn solve_recovers_known_vector() {
        let cols = vec![
            vec![c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.5), c(3.0, 0.0), c(0.0, 2.0)],
            vec![c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.3)],
        ];
        let a = ComplexMatrix::from_columns(&cols);
        let x_true = vec![c(1.0, -2.0), c(0.5, 0.0), c(-3.0, 1.0)];
        let b = a.matvec(&x_true);
        let x = LuFactor::factor(&a).unwrap().solve(&b);
        for (got, want) in x.iter().zip(x_true.iter()) {
            assert!((got - want).norm() < 1e-13);
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let cols = vec![
            vec![c(4.0, 0.0), c(1.0, 1.0)],
            vec![c(-1.0, 2.0), c(3.0, -1.0)],
        ];
        let a = ComplexMatrix::from_columns(&cols);
        let inv = LuFactor::factor(&a).unwrap().inverse();
        for j in 0..2 {
            let col: Vec<Complex<f64>> = (0..2).map(|i| a.at(i, j)).collect();
            let e = inv.matvec(&col);
            for (i, value) in e.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((value - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let cols = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ];
        let a = ComplexMatrix::from_columns(&cols);
        assert!(LuFactor::factor(&a).is_err());
    }

    #[test]
    fn identity_condition_is_one() {
        let cols = vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ];
        let a = ComplexMatrix::from_columns(&cols);
        assert!((cond1(&a).unwrap() - 1.0).abs() < 1e-15);
    }
}
