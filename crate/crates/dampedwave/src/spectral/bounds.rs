//! Frequency-wise modulus envelopes for the damped spectra and the mesh
//! scaling of the worst real part.
//!
//! For either scheme the j-th upper-half eigenvalue (sorted by imaginary
//! part) obeys h^2 |lambda_j|^2 <= A^2 c^2 sin^2(2 j pi / (4n + 5)) + C h,
//! with A^2 = 4 for the difference scheme, A^2 = 12 for the element scheme,
//! and C an O(1) constant. The checker reports the per-mode deficits scaled
//! by l/h, the smallest non-negative constant C that would make every bound
//! hold (zero when all deficits are already negative), and how the
//! mesh-scaled spectral abscissa shrinks across a refinement sequence.

use crate::error::{Error, Result};
use crate::model::{Mesh, PhysicalParams, Scheme};
use crate::scalar::Scalar;

use super::Spectrum;

/// Squared envelope amplitude A^2 in
/// h^2 |lambda|^2 <= A^2 c^2 sin^2(2 j pi / (4n + 5)).
pub fn envelope_amplitude_sq<S: Scalar>(scheme: Scheme) -> S {
    match scheme {
        Scheme::FiniteDifference => S::of(4.0),
        Scheme::FiniteElement => S::of(12.0),
    }
}

/// Squared-modulus envelope values A^2 c^2 sin^2(2 j pi / (4n + 5)) / h^2
/// for the n+1 upper-half modes on the given mesh.
pub fn modulus_envelope_sq<S: Scalar>(
    params: &PhysicalParams<S>,
    mesh: Mesh,
    scheme: Scheme,
) -> Vec<S> {
    let n = mesh.interior_points;
    let h = mesh.spacing(params.length);
    let amp = envelope_amplitude_sq::<S>(scheme) * params.wave_speed * params.wave_speed
        / (h * h);
    let denom = S::of_usize(4 * n + 5);
    (1..=n + 1)
        .map(|j| {
            let s = (S::of_usize(2 * j) * S::pi() / denom).sin();
            amp * s * s
        })
        .collect()
}

/// Outcome of checking one or more spectra against the modulus envelope.
#[derive(Debug, Clone)]
pub struct BoundsCheck<S> {
    /// Per spectrum, per upper-half mode:
    /// (h^2 |lambda_j|^2 / c^2 - A^2 sin^2(2 j pi/(4n+5))) * l / h.
    /// Negative entries mean the bound holds with margin.
    pub deficits: Vec<Vec<S>>,
    /// Smallest non-negative constant C (same normalization) making every
    /// bound hold jointly across the inputs; zero when all deficits are
    /// already negative.
    pub fitted_offset: S,
    /// h max_j |Re lambda_j| / c for each spectrum, in input order.
    pub scaled_abscissa: Vec<S>,
    /// Successive ratios of `scaled_abscissa`; near 1/2 across a mesh
    /// doubling when the worst damping is mesh-independent.
    pub halving_ratios: Vec<S>,
}

/// Checks each spectrum against the envelope for its mesh and summarizes
/// the refinement trend. Spectra must come from the same physical
/// parameters and scheme, ordered by mesh refinement.
pub fn check_modulus_bounds<S: Scalar>(
    params: &PhysicalParams<S>,
    scheme: Scheme,
    runs: &[(Mesh, &Spectrum<S>)],
) -> Result<BoundsCheck<S>> {
    let c_sq = params.wave_speed * params.wave_speed;
    let mut deficits = Vec::with_capacity(runs.len());
    let mut scaled_abscissa = Vec::with_capacity(runs.len());
    let mut fitted = S::zero();
    for (mesh, spectrum) in runs {
        let n = mesh.interior_points;
        let upper = spectrum.upper_half();
        if upper.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                actual: upper.len(),
            });
        }
        let h = mesh.spacing(params.length);
        let envelope = modulus_envelope_sq(params, *mesh, scheme);
        // Deficit in units of h: divide the dimensionless gap by h/l.
        let scale = params.length / h;
        let row: Vec<S> = upper
            .iter()
            .zip(envelope.iter())
            .map(|(lambda, &env)| (lambda.norm_sqr() - env) * h * h / c_sq * scale)
            .collect();
        for &d in &row {
            if d > fitted {
                fitted = d;
            }
        }
        let worst_re = upper
            .iter()
            .map(|l| l.re.abs())
            .fold(S::zero(), |a, b| if b > a { b } else { a });
        deficits.push(row);
        scaled_abscissa.push(worst_re * h / params.wave_speed);
    }
    let halving_ratios = scaled_abscissa
        .windows(2)
        .map(|w| w[1] / w[0])
        .collect();
    Ok(BoundsCheck {
        deficits,
        fitted_offset: fitted,
        scaled_abscissa,
        halving_ratios,
    })
}
