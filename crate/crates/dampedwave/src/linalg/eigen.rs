//! Real nonsymmetric eigensolver: Parlett-Reinsch balancing, Householder
//! reduction to upper Hessenberg form, and the shifted-QR iteration with
//! accumulated transformations and eigenvector back-substitution, in the
//! EISPACK/JAMA lineage.

use num_complex::Complex;

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigenvalues and right eigenvectors of a real square matrix.
///
/// Complex conjugate pairs appear adjacently; each eigenvector is normalized
/// to unit Euclidean norm.
#[derive(Debug, Clone)]
pub struct RealEigen<S> {
    pub values: Vec<Complex<S>>,
    /// vectors[k] pairs with values[k].
    pub vectors: Vec<Vec<Complex<S>>>,
}

/// Iteration cap for the QR stage, as a multiple of the matrix order.
pub const QR_ITERATION_CAP_PER_ORDER: usize = 100;

pub fn eigen_decompose<S: Scalar>(a: &DenseMatrix<S>) -> Result<RealEigen<S>> {
    let n = a.order();
    if n == 0 {
        return Ok(RealEigen {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut h = a.clone();
    let scale = balance(&mut h);
    let mut v = hessenberg(&mut h);
    let (d, e) = hqr2(&mut h, &mut v, QR_ITERATION_CAP_PER_ORDER * n)?;

    // Undo the balancing similarity on the accumulated vectors.
    for i in 0..n {
        for j in 0..n {
            *v.at_mut(i, j) = v.at(i, j) * scale[i];
        }
    }

    Ok(extract_pairs(&d, &e, &v))
}

/// Parlett-Reinsch norm balancing (radix 2, no permutation stage). Returns
/// the diagonal similarity D with A_balanced = D^-1 A D; right eigenvectors
/// of A are D times those of the balanced matrix.
fn balance<S: Scalar>(a: &mut DenseMatrix<S>) -> Vec<S> {
    let n = a.order();
    let radix = S::two();
    let radix_sq = radix * radix;
    let mut scale = vec![S::one(); n];
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = S::zero();
            let mut r = S::zero();
            for j in 0..n {
                if j != i {
                    c += a.at(j, i).abs();
                    r += a.at(i, j).abs();
                }
            }
            if c > S::zero() && r > S::zero() {
                let mut f = S::one();
                let mut c_mut = c;
                let s = c + r;
                let mut g = r / radix;
                while c_mut < g {
                    f *= radix;
                    c_mut *= radix_sq;
                }
                g = r * radix;
                while c_mut > g {
                    f /= radix;
                    c_mut /= radix_sq;
                }
                if (c_mut + r) / f < S::of(0.95) * s {
                    done = false;
                    let g_inv = S::one() / f;
                    scale[i] *= f;
                    for j in 0..n {
                        *a.at_mut(i, j) = a.at(i, j) * g_inv;
                    }
                    for j in 0..n {
                        *a.at_mut(j, i) = a.at(j, i) * f;
                    }
                }
            }
        }
    }
    scale
}

/// Householder reduction to upper Hessenberg form, accumulating the
/// orthogonal transformation.
fn hessenberg<S: Scalar>(h: &mut DenseMatrix<S>) -> DenseMatrix<S> {
    let n = h.order();
    let low = 0;
    let high = n - 1;
    let mut ort = vec![S::zero(); n];

    for m in (low + 1)..high {
        let mut scale = S::zero();
        for i in m..=high {
            scale += h.at(i, m - 1).abs();
        }
        if scale != S::zero() {
            let mut hh = S::zero();
            for i in (m..=high).rev() {
                ort[i] = h.at(i, m - 1) / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > S::zero() {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = S::zero();
                for i in (m..=high).rev() {
                    f += ort[i] * h.at(i, j);
                }
                f /= hh;
                for i in m..=high {
                    *h.at_mut(i, j) = h.at(i, j) - f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = S::zero();
                for j in (m..=high).rev() {
                    f += ort[j] * h.at(i, j);
                }
                f /= hh;
                for j in m..=high {
                    *h.at_mut(i, j) = h.at(i, j) - f * ort[j];
                }
            }
            ort[m] *= scale;
            *h.at_mut(m, m - 1) = scale * g;
        }
    }

    let mut v = DenseMatrix::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() });
    for m in ((low + 1)..high).rev() {
        if h.at(m, m - 1) != S::zero() {
            for i in (m + 1)..=high {
                ort[i] = h.at(i, m - 1);
            }
            for j in m..=high {
                let mut g = S::zero();
                for i in m..=high {
                    g += ort[i] * v.at(i, j);
                }
                // Double division avoids possible underflow.
                g = (g / ort[m]) / h.at(m, m - 1);
                for i in m..=high {
                    *v.at_mut(i, j) = v.at(i, j) + g * ort[i];
                }
            }
        }
    }
    v
}

fn cdiv<S: Scalar>(xr: S, xi: S, yr: S, yi: S) -> (S, S) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Shifted QR on an upper Hessenberg matrix, accumulating into `v`, then
/// eigenvector back-substitution. Returns eigenvalues as (real, imag) parts;
/// on success `v` holds the real Schur-vector columns (complex pairs as
/// consecutive real/imaginary columns).
#[allow(clippy::too_many_lines)]
fn hqr2<S: Scalar>(
    h: &mut DenseMatrix<S>,
    v: &mut DenseMatrix<S>,
    iteration_cap: usize,
) -> Result<(Vec<S>, Vec<S>)> {
    let nn = h.order();
    let mut d = vec![S::zero(); nn];
    let mut e = vec![S::zero(); nn];
    let low: isize = 0;
    let high: isize = nn as isize - 1;
    let eps = S::epsilon();
    let mut exshift = S::zero();
    let (mut p, mut q, mut r, mut s, mut z) =
        (S::zero(), S::zero(), S::zero(), S::zero(), S::zero());
    let (mut w, mut x, mut y);

    let at = |h: &DenseMatrix<S>, i: isize, j: isize| h.at(i as usize, j as usize);

    let mut norm = S::zero();
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h.at(i, j).abs();
        }
    }

    let mut n: isize = nn as isize - 1;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while n >= low {
        // Look for a single small subdiagonal element.
        let mut l = n;
        while l > low {
            s = at(h, l - 1, l - 1).abs() + at(h, l, l).abs();
            if s == S::zero() {
                s = norm;
            }
            if at(h, l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One root found.
            *h.at_mut(n as usize, n as usize) = at(h, n, n) + exshift;
            d[n as usize] = at(h, n, n);
            e[n as usize] = S::zero();
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // Two roots found.
            w = at(h, n, n - 1) * at(h, n - 1, n);
            p = (at(h, n - 1, n - 1) - at(h, n, n)) / S::two();
            q = p * p + w;
            z = q.abs().sqrt();
            *h.at_mut(n as usize, n as usize) = at(h, n, n) + exshift;
            *h.at_mut((n - 1) as usize, (n - 1) as usize) = at(h, n - 1, n - 1) + exshift;
            x = at(h, n, n);

            if q >= S::zero() {
                // Real pair.
                z = if p >= S::zero() { p + z } else { p - z };
                d[(n - 1) as usize] = x + z;
                d[n as usize] = d[(n - 1) as usize];
                if z != S::zero() {
                    d[n as usize] = x - w / z;
                }
                e[(n - 1) as usize] = S::zero();
                e[n as usize] = S::zero();
                x = at(h, n, n - 1);
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (n - 1) as usize..nn {
                    z = h.at((n - 1) as usize, j);
                    *h.at_mut((n - 1) as usize, j) = q * z + p * h.at(n as usize, j);
                    *h.at_mut(n as usize, j) = q * h.at(n as usize, j) - p * z;
                }
                for i in 0..=n as usize {
                    z = h.at(i, (n - 1) as usize);
                    *h.at_mut(i, (n - 1) as usize) = q * z + p * h.at(i, n as usize);
                    *h.at_mut(i, n as usize) = q * h.at(i, n as usize) - p * z;
                }
                for i in low as usize..=high as usize {
                    z = v.at(i, (n - 1) as usize);
                    *v.at_mut(i, (n - 1) as usize) = q * z + p * v.at(i, n as usize);
                    *v.at_mut(i, n as usize) = q * v.at(i, n as usize) - p * z;
                }
            } else {
                // Complex pair.
                d[(n - 1) as usize] = x + p;
                d[n as usize] = x + p;
                e[(n - 1) as usize] = z;
                e[n as usize] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // Form shift.
            x = at(h, n, n);
            y = S::zero();
            w = S::zero();
            if l < n {
                y = at(h, n - 1, n - 1);
                w = at(h, n, n - 1) * at(h, n - 1, n);
            }

            // Wilkinson's original ad hoc shift.
            if iter == 10 || iter == 20 {
                exshift += x;
                for i in low..=n {
                    let cur = h.at(i as usize, i as usize);
                    *h.at_mut(i as usize, i as usize) = cur - x;
                }
                s = at(h, n, n - 1).abs() + at(h, n - 1, n - 2).abs();
                x = S::of(0.75) * s;
                y = x;
                w = S::of(-0.4375) * s * s;
            }

            // MATLAB's new ad hoc shift.
            if iter == 30 {
                s = (y - x) / S::two();
                s = s * s + w;
                if s > S::zero() {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / S::two() + s);
                    for i in low..=n {
                        let cur = h.at(i as usize, i as usize);
                        *h.at_mut(i as usize, i as usize) = cur - s;
                    }
                    exshift += s;
                    x = S::of(0.964);
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total_iter += 1;
            if total_iter > iteration_cap {
                let converged = (nn as isize - 1 - n) as usize;
                return Err(Error::EigenNonConvergence {
                    order: nn,
                    cap: iteration_cap,
                    converged,
                    partial: ((n + 1) as usize..nn)
                        .map(|k| {
                            (
                                d[k].to_f64().unwrap_or(f64::NAN),
                                e[k].to_f64().unwrap_or(f64::NAN),
                            )
                        })
                        .collect(),
                });
            }

            // Look for two consecutive small sub-diagonal elements.
            let mut m = n - 2;
            while m >= l {
                z = at(h, m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / at(h, m + 1, m) + at(h, m, m + 1);
                q = at(h, m + 1, m + 1) - z - r - s;
                r = at(h, m + 2, m + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if at(h, m, m - 1).abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (at(h, m - 1, m - 1).abs() + z.abs() + at(h, m + 1, m + 1).abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=n {
                *h.at_mut(i as usize, (i - 2) as usize) = S::zero();
                if i > m + 2 {
                    *h.at_mut(i as usize, (i - 3) as usize) = S::zero();
                }
            }

            // Double QR step involving rows l..n and columns m..n.
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = at(h, k, k - 1);
                    q = at(h, k + 1, k - 1);
                    r = if notlast { at(h, k + 2, k - 1) } else { S::zero() };
                    x = p.abs() + q.abs() + r.abs();
                    if x == S::zero() {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < S::zero() {
                    s = -s;
                }
                if s != S::zero() {
                    if k != m {
                        *h.at_mut(k as usize, (k - 1) as usize) = -s * x;
                    } else if l != m {
                        let cur = at(h, k, k - 1);
                        *h.at_mut(k as usize, (k - 1) as usize) = -cur;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    // Row modification.
                    for j in k as usize..nn {
                        let mut pj = h.at(k as usize, j) + q * h.at((k + 1) as usize, j);
                        if notlast {
                            pj += r * h.at((k + 2) as usize, j);
                            *h.at_mut((k + 2) as usize, j) = h.at((k + 2) as usize, j) - pj * z;
                        }
                        *h.at_mut(k as usize, j) = h.at(k as usize, j) - pj * x;
                        *h.at_mut((k + 1) as usize, j) = h.at((k + 1) as usize, j) - pj * y;
                    }

                    // Column modification.
                    let upper = if n < k + 3 { n } else { k + 3 };
                    for i in 0..=upper as usize {
                        let mut pi = x * h.at(i, k as usize) + y * h.at(i, (k + 1) as usize);
                        if notlast {
                            pi += z * h.at(i, (k + 2) as usize);
                            *h.at_mut(i, (k + 2) as usize) = h.at(i, (k + 2) as usize) - pi * r;
                        }
                        *h.at_mut(i, k as usize) = h.at(i, k as usize) - pi;
                        *h.at_mut(i, (k + 1) as usize) = h.at(i, (k + 1) as usize) - pi * q;
                    }

                    // Accumulate transformations.
                    for i in low as usize..=high as usize {
                        let mut pi = x * v.at(i, k as usize) + y * v.at(i, (k + 1) as usize);
                        if notlast {
                            pi += z * v.at(i, (k + 2) as usize);
                            *v.at_mut(i, (k + 2) as usize) = v.at(i, (k + 2) as usize) - pi * r;
                        }
                        *v.at_mut(i, k as usize) = v.at(i, k as usize) - pi;
                        *v.at_mut(i, (k + 1) as usize) = v.at(i, (k + 1) as usize) - pi * q;
                    }
                }
            }
        }
    }

    // Backsubstitute to find vectors of upper triangular form.
    if norm == S::zero() {
        return Ok((d, e));
    }

    for n in (0..nn as isize).rev() {
        p = d[n as usize];
        q = e[n as usize];

        if q == S::zero() {
            // Real vector.
            let mut l = n;
            *h.at_mut(n as usize, n as usize) = S::one();
            for i in (0..n).rev() {
                w = at(h, i, i) - p;
                r = S::zero();
                for j in l..=n {
                    r += at(h, i, j) * at(h, j, n);
                }
                if e[i as usize] < S::zero() {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i as usize] == S::zero() {
                        *h.at_mut(i as usize, n as usize) = if w != S::zero() {
                            -r / w
                        } else {
                            -r / (eps * norm)
                        };
                    } else {
                        // Solve real equations.
                        x = at(h, i, i + 1);
                        y = at(h, i + 1, i);
                        q = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize];
                        let t = (x * s - z * r) / q;
                        *h.at_mut(i as usize, n as usize) = t;
                        *h.at_mut((i + 1) as usize, n as usize) = if x.abs() > z.abs() {
                            (-r - w * t) / x
                        } else {
                            (-s - y * t) / z
                        };
                    }

                    // Overflow control.
                    let t = at(h, i, n).abs();
                    if (eps * t) * t > S::one() {
                        for j in i..=n {
                            let cur = at(h, j, n);
                            *h.at_mut(j as usize, n as usize) = cur / t;
                        }
                    }
                }
            }
        } else if q < S::zero() {
            // Complex vector, stored in columns n-1 (real) and n (imaginary).
            let mut l = n - 1;

            if at(h, n, n - 1).abs() > at(h, n - 1, n).abs() {
                *h.at_mut((n - 1) as usize, (n - 1) as usize) = q / at(h, n, n - 1);
                *h.at_mut((n - 1) as usize, n as usize) =
                    -(at(h, n, n) - p) / at(h, n, n - 1);
            } else {
                let (cr, ci) = cdiv(
                    S::zero(),
                    -at(h, n - 1, n),
                    at(h, n - 1, n - 1) - p,
                    q,
                );
                *h.at_mut((n - 1) as usize, (n - 1) as usize) = cr;
                *h.at_mut((n - 1) as usize, n as usize) = ci;
            }
            *h.at_mut(n as usize, (n - 1) as usize) = S::zero();
            *h.at_mut(n as usize, n as usize) = S::one();
            for i in (0..n - 1).rev() {
                let mut ra = S::zero();
                let mut sa = S::zero();
                for j in l..=n {
                    ra += at(h, i, j) * at(h, j, n - 1);
                    sa += at(h, i, j) * at(h, j, n);
                }
                w = at(h, i, i) - p;

                if e[i as usize] < S::zero() {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i as usize] == S::zero() {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        *h.at_mut(i as usize, (n - 1) as usize) = cr;
                        *h.at_mut(i as usize, n as usize) = ci;
                    } else {
                        // Solve complex equations.
                        x = at(h, i, i + 1);
                        y = at(h, i + 1, i);
                        let mut vr = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize]
                            - q * q;
                        let vi = (d[i as usize] - p) * S::two() * q;
                        if vr == S::zero() && vi == S::zero() {
                            vr = eps
                                * norm
                                * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        *h.at_mut(i as usize, (n - 1) as usize) = cr;
                        *h.at_mut(i as usize, n as usize) = ci;
                        if x.abs() > z.abs() + q.abs() {
                            *h.at_mut((i + 1) as usize, (n - 1) as usize) =
                                (-ra - w * at(h, i, n - 1) + q * at(h, i, n)) / x;
                            *h.at_mut((i + 1) as usize, n as usize) =
                                (-sa - w * at(h, i, n) - q * at(h, i, n - 1)) / x;
                        } else {
                            let (cr2, ci2) = cdiv(
                                -r - y * at(h, i, n - 1),
                                -s - y * at(h, i, n),
                                z,
                                q,
                            );
                            *h.at_mut((i + 1) as usize, (n - 1) as usize) = cr2;
                            *h.at_mut((i + 1) as usize, n as usize) = ci2;
                        }
                    }

                    // Overflow control.
                    let t = at(h, i, n - 1).abs().max(at(h, i, n).abs());
                    if (eps * t) * t > S::one() {
                        for j in i..=n {
                            let c1 = at(h, j, n - 1);
                            let c2 = at(h, j, n);
                            *h.at_mut(j as usize, (n - 1) as usize) = c1 / t;
                            *h.at_mut(j as usize, n as usize) = c2 / t;
                        }
                    }
                }
            }
        }
    }

    // Multiply by transformation matrix to give vectors of the original
    // full matrix.
    for j in (low..nn as isize).rev() {
        for i in low as usize..=high as usize {
            z = S::zero();
            let kmax = if j < high { j } else { high };
            for k in low as usize..=kmax as usize {
                z += v.at(i, k) * h.at(k, j as usize);
            }
            *v.at_mut(i, j as usize) = z;
        }
    }

    Ok((d, e))
}

/// Converts the (d, e, V) Schur-style output into complex eigenpairs: a pair
/// of consecutive columns (x, y) with e[k] > 0 encodes the vectors x +- iy
/// for the eigenvalues d[k] +- i e[k].
fn extract_pairs<S: Scalar>(d: &[S], e: &[S], v: &DenseMatrix<S>) -> RealEigen<S> {
    let n = d.len();
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if e[k] == S::zero() {
            let mut vec: Vec<Complex<S>> =
                (0..n).map(|i| Complex::new(v.at(i, k), S::zero())).collect();
            normalize(&mut vec);
            values.push(Complex::new(d[k], S::zero()));
            vectors.push(vec);
            k += 1;
        } else {
            let mut plus: Vec<Complex<S>> = (0..n)
                .map(|i| Complex::new(v.at(i, k), v.at(i, k + 1)))
                .collect();
            normalize(&mut plus);
            let minus: Vec<Complex<S>> = plus.iter().map(|c| c.conj()).collect();
            values.push(Complex::new(d[k], e[k]));
            vectors.push(plus);
            values.push(Complex::new(d[k + 1], e[k + 1]));
            vectors.push(minus);
            k += 2;
        }
    }
    RealEigen { values, vectors }
}

fn normalize<S: Scalar>(v: &mut [Complex<S>]) {
    let mut norm_sq = S::zero();
    for c in v.iter() {
        norm_sq += c.norm_sqr();
    }
    let norm = norm_sq.sqrt();
    if norm > S::zero() {
        for c in v.iter_mut() {
            *c = Complex::new(c.re / norm, c.im / norm);
        }
    }
}
