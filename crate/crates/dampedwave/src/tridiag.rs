//! Symmetric tridiagonal matrices: the storage format for stiffness and mass,
//! an LDL^T solver for the mass systems, and a QL eigensolver used as the
//! symmetric oracle.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric tridiagonal matrix stored as its two distinct diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag<S> {
    diag: Vec<S>,
    off: Vec<S>,
}

impl<S: Scalar> SymTridiag<S> {
    pub fn new(diag: Vec<S>, off: Vec<S>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        Self { diag, off }
    }

    /// Identity of the given order.
    pub fn identity(order: usize) -> Self {
        Self {
            diag: vec![S::one(); order],
            off: vec![S::zero(); order.saturating_sub(1)],
        }
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn off(&self) -> &[S] {
        &self.off
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        if i == j {
            self.diag[i]
        } else if i + 1 == j {
            self.off[i]
        } else if j + 1 == i {
            self.off[j]
        } else {
            S::zero()
        }
    }

    pub fn matvec(&self, x: &[S], y: &mut [S]) {
        let n = self.order();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let mut y = vec![S::zero(); self.order()];
        self.matvec(x, &mut y);
        y
    }

    /// x^T A x.
    pub fn quadratic_form(&self, x: &[S]) -> S {
        let n = self.order();
        assert_eq!(x.len(), n);
        let mut acc = S::zero();
        for i in 0..n {
            acc += self.diag[i] * x[i] * x[i];
            if i + 1 < n {
                acc += S::two() * self.off[i] * x[i] * x[i + 1];
            }
        }
        acc
    }

    /// D A D for a diagonal congruence with entries `scale`.
    pub fn diagonal_congruence(&self, scale: &[S]) -> Self {
        let n = self.order();
        assert_eq!(scale.len(), n);
        let diag = (0..n).map(|i| self.diag[i] * scale[i] * scale[i]).collect();
        let off = (0..n.saturating_sub(1))
            .map(|i| self.off[i] * scale[i] * scale[i + 1])
            .collect();
        Self { diag, off }
    }

    /// LDL^T factorization; requires positive pivots (SPD or close to it).
    pub fn factor_ldlt(&self) -> Result<LdltFactor<S>> {
        let n = self.order();
        let mut d = vec![S::zero(); n];
        let mut l = vec![S::zero(); n.saturating_sub(1)];
        d[0] = self.diag[0];
        for i in 0..n - 1 {
            if d[i] <= S::zero() {
                return Err(Error::Singular {
                    context: "tridiagonal LDL^T",
                    pivot: d[i].to_f64().unwrap_or(f64::NAN),
                    step: i,
                });
            }
            l[i] = self.off[i] / d[i];
            d[i + 1] = self.diag[i + 1] - l[i] * self.off[i];
        }
        if d[n - 1] <= S::zero() {
            return Err(Error::Singular {
                context: "tridiagonal LDL^T",
                pivot: d[n - 1].to_f64().unwrap_or(f64::NAN),
                step: n - 1,
            });
        }
        Ok(LdltFactor { d, l })
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<S>> {
        let mut d = self.diag.clone();
        let mut e = padded_off(&self.off, self.order());
        ql_implicit_shifts(&mut d, &mut e, None)?;
        Ok(d)
    }

    /// Full eigen decomposition: ascending eigenvalues and orthonormal
    /// eigenvectors (column k of the returned matrix pairs with value k).
    pub fn eigen_decomposition(&self) -> Result<(Vec<S>, ColumnMajor<S>)> {
        let n = self.order();
        let mut d = self.diag.clone();
        let mut e = padded_off(&self.off, n);
        let mut z = ColumnMajor::identity(n);
        ql_implicit_shifts(&mut d, &mut e, Some(&mut z))?;
        Ok((d, z))
    }
}

/// LDL^T factors of a symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct LdltFactor<S> {
    d: Vec<S>,
    l: Vec<S>,
}

impl<S: Scalar> LdltFactor<S> {
    pub fn order(&self) -> usize {
        self.d.len()
    }

    pub fn solve_in_place(&self, b: &mut [S]) {
        let n = self.d.len();
        assert_eq!(b.len(), n);
        for i in 1..n {
            let upd = self.l[i - 1] * b[i - 1];
            b[i] = b[i] - upd;
        }
        for i in 0..n {
            b[i] = b[i] / self.d[i];
        }
        for i in (0..n - 1).rev() {
            let upd = self.l[i] * b[i + 1];
            b[i] = b[i] - upd;
        }
    }

    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Dense column-major matrix of eigenvectors.
#[derive(Debug, Clone)]
pub struct ColumnMajor<S> {
    n: usize,
    a: Vec<S>,
}

impl<S: Scalar> ColumnMajor<S> {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![S::zero(); n * n];
        for i in 0..n {
            a[i + i * n] = S::one();
        }
        Self { n, a }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> &[S] {
        &self.a[j * self.n..(j + 1) * self.n]
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> S {
        self.a[i + j * self.n]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.a[i + j * self.n]
    }

    fn swap_columns(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.n {
            self.a.swap(k + i * self.n, k + j * self.n);
        }
    }
}

fn padded_off<S: Scalar>(off: &[S], n: usize) -> Vec<S> {
    let mut e = vec![S::zero(); n];
    e[..off.len()].copy_from_slice(off);
    e
}

/// QL iteration with implicit shifts on a symmetric tridiagonal matrix
/// (EISPACK tql2 lineage). `d` holds the diagonal, `e[i]` couples rows
/// i and i+1 with a zero sentinel at the end. Eigenvalues are sorted
/// ascending on return, with eigenvector columns permuted to match.
fn ql_implicit_shifts<S: Scalar>(
    d: &mut [S],
    e: &mut [S],
    mut z: Option<&mut ColumnMajor<S>>,
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = S::epsilon();
    let mut f = S::zero();
    let mut tst1 = S::zero();
    let mut total_iter = 0usize;
    let iter_cap = 60 * n.max(1);

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let threshold = eps * tst1;
        loop {
            let mut m = l;
            while m < n {
                if e[m].abs() <= threshold {
                    break;
                }
                m += 1;
            }
            if m <= l {
                break;
            }
            total_iter += 1;
            if total_iter > iter_cap {
                return Err(Error::EigenNonConvergence {
                    order: n,
                    cap: iter_cap,
                    converged: l,
                    partial: d[..l]
                        .iter()
                        .map(|v| (v.to_f64().unwrap_or(f64::NAN), 0.0))
                        .collect(),
                });
            }

            // Implicit shift from the leading 2x2.
            let g0 = d[l];
            let mut p = (d[l + 1] - g0) / (S::two() * e[l]);
            let mut r = p.hypot(S::one());
            if p < S::zero() {
                r = -r;
            }
            d[l] = e[l] / (p + r);
            d[l + 1] = e[l] * (p + r);
            let dl1 = d[l + 1];
            let mut h = g0 - d[l];
            for item in d.iter_mut().take(n).skip(l + 2) {
                *item = *item - h;
            }
            f += h;

            // QL sweep from m-1 down to l.
            p = d[m];
            let mut c = S::one();
            let mut c2 = c;
            let mut c3 = c;
            let el1 = e[l + 1];
            let mut s = S::zero();
            let mut s2 = S::zero();
            for i in (l..m).rev() {
                c3 = c2;
                c2 = c;
                s2 = s;
                let g = c * e[i];
                h = c * p;
                r = p.hypot(e[i]);
                e[i + 1] = s * r;
                s = e[i] / r;
                c = p / r;
                p = c * d[i] - s * g;
                d[i + 1] = h + s * (c * g + s * d[i]);
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..n {
                        let hk = zm.at(k, i + 1);
                        *zm.at_mut(k, i + 1) = s * zm.at(k, i) + c * hk;
                        *zm.at_mut(k, i) = c * zm.at(k, i) - s * hk;
                    }
                }
            }
            p = -s * s2 * c3 * el1 * e[l] / dl1;
            e[l] = s * p;
            d[l] = c * p;

            if e[l].abs() <= threshold {
                break;
            }
        }
        d[l] += f;
        e[l] = S::zero();
    }

    // Ascending order, carrying vectors along.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, dj) in d.iter().enumerate().take(n).skip(i + 1) {
            if *dj < p {
                k = j;
                p = *dj;
            }
        }
        if k != i {
            d.swap(i, k);
            if let Some(zm) = z.as_deref_mut() {
                zm.swap_columns(i, k);
            }
        }
    }
    Ok(())
}
