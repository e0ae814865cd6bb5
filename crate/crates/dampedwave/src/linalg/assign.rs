//! Matching of two point sets in the complex plane: cheap greedy pairing
//! first, optimal assignment (Hungarian algorithm with potentials) when the
//! greedy pass collides.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pairs each entry of `a` with a distinct entry of `b`, requiring every
/// matched distance to satisfy |a_i - b_j| <= rel_cap * max(|a_i|, 1).
///
/// Returns `perm` with `b[perm[i]]` matched to `a[i]`. A greedy
/// nearest-neighbor pass handles the common well-separated case; if two
/// points contend for the same partner the optimal assignment is computed
/// instead, and the cap is enforced on its result.
pub fn match_complex_sets<S: Scalar>(
    a: &[Complex<S>],
    b: &[Complex<S>],
    rel_cap: S,
) -> Result<Vec<usize>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Ok(vec![]);
    }

    if let Some(perm) = greedy_match(a, b, rel_cap) {
        return Ok(perm);
    }

    let perm = hungarian(a, b);
    let mut unmatched = 0usize;
    let mut worst = S::zero();
    for (i, &j) in perm.iter().enumerate() {
        let scale = a[i].norm().max(S::one());
        let dist = (a[i] - b[j]).norm();
        if dist > rel_cap * scale {
            unmatched += 1;
        }
        if dist / scale > worst {
            worst = dist / scale;
        }
    }
    if unmatched > 0 {
        return Err(Error::MatchingFailed {
            unmatched,
            total: n,
            cap: rel_cap.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(perm)
}

fn greedy_match<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>], rel_cap: S) -> Option<Vec<usize>> {
    let n = a.len();
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (i, &ai) in a.iter().enumerate() {
        let mut best = usize::MAX;
        let mut best_dist = S::infinity();
        for (j, &bj) in b.iter().enumerate() {
            let dist = (ai - bj).norm();
            if dist < best_dist {
                best = j;
                best_dist = dist;
            }
        }
        let scale = ai.norm().max(S::one());
        if best == usize::MAX || taken[best] || best_dist > rel_cap * scale {
            return None;
        }
        taken[best] = true;
        perm[i] = best;
    }
    Some(perm)
}

/// Minimum-cost assignment via shortest augmenting paths with dual
/// potentials, O(n^3). Costs are Euclidean distances in the complex plane.
fn hungarian<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> Vec<usize> {
    let n = a.len();
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm().to_f64().unwrap_or(f64::MAX);

    // 1-based arrays with a dummy row/column 0, following the classical
    // potentials formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut way = vec![0usize; n + 1];
    // p[j] = row currently assigned to column j (0 = none).
    let mut p = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if p[j] != 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn well_separated_points_match_greedily() {
        let a = vec![c(0.0, 1.0), c(0.0, -1.0), c(-2.0, 5.0)];
        let b = vec![c(-2.0, 5.0 + 1e-9), c(1e-9, 1.0), c(0.0, -1.0)];
        let perm = match_complex_sets(&a, &b, 1e-4).unwrap();
        assert_eq!(perm, vec![1, 2, 0]);
    }

    #[test]
    fn contended_nearest_neighbor_falls_back_to_optimal() {
        // Both of a's first two points are nearest to b[0]; the optimal
        // assignment still pairs each within the cap.
        let a = vec![c(0.0, 0.0), c(0.1, 0.0)];
        let b = vec![c(0.04, 0.0), c(0.14, 0.0)];
        let perm = match_complex_sets(&a, &b, 0.5).unwrap();
        assert_eq!(perm, vec![0, 1]);
    }

    #[test]
    fn distant_partner_is_rejected() {
        let a = vec![c(0.0, 0.0), c(10.0, 0.0)];
        let b = vec![c(0.0, 0.0), c(50.0, 0.0)];
        let err = match_complex_sets(&a, &b, 1e-4).unwrap_err();
        assert!(matches!(err, Error::MatchingFailed { unmatched: 1, .. }));
    }

    #[test]
    fn permutation_is_recovered_exactly() {
        let a: Vec<Complex<f64>> = (0..12)
            .map(|k| c(f64::from(k).cos() * 3.0, f64::from(k).sin() * 3.0))
            .collect();
        let mut b = a.clone();
        b.rotate_left(5);
        let perm = match_complex_sets(&a, &b, 1e-12).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            assert!((a[i] - b[j]).norm() < 1e-15);
        }
    }
}
