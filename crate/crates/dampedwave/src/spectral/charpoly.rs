//! Damped spectrum of the difference scheme through its characteristic
//! polynomial p(z) = z^(4n+6) + (xi/c) z^(4n+5) - (xi/c) z + 1, whose
//! genuine roots map to eigenvalues via lambda = (c/h)(z - 1/z).
//!
//! Rearranging p(z) = 0 gives the fixed-point form
//! z^(4n+5) = (xi z - c)/(c z + xi) =: G(z), so each root in the open first
//! quadrant is the limit of z <- |G|^(1/(4n+5)) exp(i (arg G + 2 j pi)/(4n+5))
//! started from the midpoint of its angular sector. The angle map contracts
//! by 1/(4n+5), so convergence is fast and unconditional per sector.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::assign::match_complex_sets;
use crate::model::{Mesh, PhysicalParams};
use crate::scalar::Scalar;

use super::{Provenance, Spectrum};

/// Evaluates p(z) = z^(4n+6) + (xi/c) z^(4n+5) - (xi/c) z + 1 for the
/// difference scheme with n interior points.
pub fn char_poly_eval<S: Scalar>(
    params: &PhysicalParams<S>,
    interior_points: usize,
    z: Complex<S>,
) -> Complex<S> {
    let r = params.gain / params.wave_speed;
    let d = 4 * interior_points + 5;
    let zd = z.powu(d as u32);
    let one = Complex::new(S::one(), S::zero());
    zd * z + zd.scale(r) - z.scale(r) + one
}

/// One converged first-quadrant polynomial root.
#[derive(Debug, Clone, Copy)]
pub struct SectorRoot<S> {
    pub z: Complex<S>,
    /// Angular sector index j; arg z lies in [2j pi / (4n+5), (2j+1) pi / (4n+5)].
    pub sector: usize,
    pub iterations: usize,
    /// Magnitude of the final update.
    pub last_step: S,
    /// |p(z)| at the converged point.
    pub poly_residual: S,
}

/// Fixed-point iteration cap per sector; contraction is ~1/(4n+5), so the
/// observed counts stay in single digits.
pub const SECTOR_ITERATION_CAP: usize = 200;

/// Absolute update size below which the sector iteration is converged.
pub const SECTOR_STEP_TOLERANCE: f64 = 1e-13;

/// Finds the n+1 first-quadrant roots of the characteristic polynomial,
/// one per angular sector j = 0..n.
pub fn sector_roots<S: Scalar>(
    params: &PhysicalParams<S>,
    mesh: Mesh,
) -> Result<Vec<SectorRoot<S>>> {
    if mesh.interior_points < 2 {
        return Err(Error::MeshTooCoarse {
            n: mesh.interior_points,
        });
    }
    let n = mesh.interior_points;
    let d = S::of_usize(4 * n + 5);
    let c = params.wave_speed;
    let xi = params.gain;
    let tol = S::tol(SECTOR_STEP_TOLERANCE);
    let exponent = S::one() / d;
    let mut roots = Vec::with_capacity(n + 1);

    for j in 0..=n {
        let start_angle = (S::of_usize(2 * j) + S::half()) * S::pi() / d;
        let mut z = Complex::from_polar(S::one(), start_angle);
        let mut converged = false;
        let mut iterations = 0;
        let mut last_step = S::infinity();
        let two_j_pi = S::of_usize(2 * j) * S::pi();
        while iterations < SECTOR_ITERATION_CAP {
            iterations += 1;
            let g = (z.scale(xi) - Complex::new(c, S::zero()))
                / (z.scale(c) + Complex::new(xi, S::zero()));
            // arg G sits near [pi/2, pi] for first-quadrant z; unwrap the
            // atan2 jump so the branch stays continuous across arg = pi.
            let mut theta = g.im.atan2(g.re);
            if theta < -S::half() * S::pi() {
                theta += S::two() * S::pi();
            }
            let next = Complex::from_polar(
                g.norm().powf(exponent),
                (theta + two_j_pi) / d,
            );
            last_step = (next - z).norm();
            z = next;
            if last_step < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SectorNonConvergence {
                sector: j,
                iterations,
                last_step: last_step.to_f64().unwrap_or(f64::NAN),
            });
        }
        roots.push(SectorRoot {
            z,
            sector: j,
            iterations,
            last_step,
            poly_residual: char_poly_eval(params, n, z).norm(),
        });
    }
    Ok(roots)
}

/// Maps converged polynomial roots to the damped eigenvalues
/// lambda = (c/h)(z - 1/z), appending complex conjugates, with the
/// closed-form eigenvectors y_k = z^(2k) - z^(-2k) in phase space.
pub fn roots_to_eigenvalues<S: Scalar>(
    params: &PhysicalParams<S>,
    mesh: Mesh,
    roots: &[SectorRoot<S>],
) -> Spectrum<S> {
    let order = mesh.interior_points + 1;
    let h = mesh.spacing(params.length);
    let scale = params.wave_speed / h;
    let mut values = Vec::with_capacity(2 * roots.len());
    let mut vectors = Vec::with_capacity(2 * roots.len());
    let mut residuals = Vec::with_capacity(2 * roots.len());
    for root in roots {
        let z = root.z;
        let lambda = (z - z.inv()).scale(scale);
        let mut shape: Vec<Complex<S>> = Vec::with_capacity(order);
        for k in 1..=order {
            let zp = z.powu(2 * k as u32);
            shape.push(zp - zp.inv());
        }
        let mut v: Vec<Complex<S>> = shape.clone();
        v.extend(shape.iter().map(|y| lambda * y));
        let norm = v
            .iter()
            .fold(S::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt();
        for c in v.iter_mut() {
            *c = Complex::new(c.re / norm, c.im / norm);
        }
        let conj_v: Vec<Complex<S>> = v.iter().map(|c| c.conj()).collect();
        values.push(lambda);
        vectors.push(v);
        residuals.push(root.poly_residual);
        values.push(lambda.conj());
        vectors.push(conj_v);
        residuals.push(root.poly_residual);
    }
    let mut spectrum = Spectrum {
        values,
        vectors: Some(vectors),
        residuals,
        provenance: Provenance::SectorIteration,
    };
    super::sort_spectrum(
        &mut spectrum.values,
        spectrum.vectors.as_mut(),
        &mut spectrum.residuals,
    );
    spectrum
}

/// Convenience: sector iteration followed by the eigenvalue map.
pub fn sector_spectrum<S: Scalar>(
    params: &PhysicalParams<S>,
    mesh: Mesh,
) -> Result<Spectrum<S>> {
    let roots = sector_roots(params, mesh)?;
    Ok(roots_to_eigenvalues(params, mesh, &roots))
}

/// Agreement between two spectra of the same system.
#[derive(Debug, Clone)]
pub struct MatchReport<S> {
    /// `b.values[permutation[i]]` is matched to `a.values[i]`.
    pub permutation: Vec<usize>,
    pub max_abs_distance: S,
    pub max_rel_distance: S,
}

/// Pairs two spectra one-to-one and reports the worst distances. Fails if
/// the sets cannot be paired within `rel_cap` relative separation.
pub fn match_spectra<S: Scalar>(
    a: &Spectrum<S>,
    b: &Spectrum<S>,
    rel_cap: S,
) -> Result<MatchReport<S>> {
    let permutation = match_complex_sets(&a.values, &b.values, rel_cap)?;
    let mut max_abs = S::zero();
    let mut max_rel = S::zero();
    for (i, &j) in permutation.iter().enumerate() {
        let dist = (a.values[i] - b.values[j]).norm();
        let rel = dist / a.values[i].norm().max(S::one());
        if dist > max_abs {
            max_abs = dist;
        }
        if rel > max_rel {
            max_rel = rel;
        }
    }
    Ok(MatchReport {
        permutation,
        max_abs_distance: max_abs,
        max_rel_distance: max_rel,
    })
}
