//! Direct mode filtering of the damped operator: expand states in the
//! (generally non-orthogonal) eigenbasis, retain the conjugate pairs whose
//! normalized squared modulus kappa(lambda) = h^2 |lambda|^2 / (A^2 c^2)
//! stays below a cutoff, and project by zeroing the dropped coefficients.
//!
//! The retained set is closed under conjugation by construction, so the
//! projector maps real states to real states, commutes with the flow, and
//! is idempotent up to the conditioning of the eigenbasis.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::clu::{ComplexMatrix, LuFactor};
use crate::model::{SemiDiscreteModel, State};
use crate::scalar::Scalar;
use crate::spectral::bounds::envelope_amplitude_sq;
use crate::spectral::Spectrum;

/// Complex eigenbasis of the first-order operator: eigenvalues, the matrix
/// of right eigenvectors, and its LU-inverted dual basis.
#[derive(Debug, Clone)]
pub struct EigenBasis<S> {
    values: Vec<Complex<S>>,
    vectors: ComplexMatrix<S>,
    factor: LuFactor<S>,
    condition: S,
}

/// 1-norm condition bound above which an eigenbasis is refused; projection
/// coefficients lose all accuracy long before machine precision times this.
pub const BASIS_CONDITION_GUARD: f64 = 1e12;

/// Builds the eigenbasis from a spectrum that carries eigenvectors (the
/// dense route provides them). Fails when vectors are missing, the basis is
/// singular, or its condition number exceeds [`BASIS_CONDITION_GUARD`].
pub fn eigen_basis<S: Scalar>(spectrum: &Spectrum<S>) -> Result<EigenBasis<S>> {
    let vectors = spectrum
        .vectors
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter {
            reason: "eigenbasis construction needs a spectrum with eigenvectors".into(),
        })?;
    let dim = spectrum.values.len();
    if vectors.len() != dim || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: vectors.first().map_or(0, Vec::len),
        });
    }
    let matrix = ComplexMatrix::from_columns(vectors);
    let factor = LuFactor::factor(&matrix)?;
    let inverse = factor.inverse();
    let condition = matrix.norm1() * inverse.norm1();
    if condition > S::of(BASIS_CONDITION_GUARD) {
        return Err(Error::IllConditionedBasis {
            cond: condition.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(EigenBasis {
        values: spectrum.values.clone(),
        vectors: matrix,
        factor,
        condition,
    })
}

impl<S: Scalar> EigenBasis<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<S>] {
        &self.values
    }

    pub fn condition(&self) -> S {
        self.condition
    }

    fn flatten(state: &State<S>) -> Vec<Complex<S>> {
        state
            .displacement
            .iter()
            .chain(state.velocity.iter())
            .map(|&x| Complex::new(x, S::zero()))
            .collect()
    }

    /// Expansion coefficients of a real state in this basis.
    pub fn coefficients(&self, state: &State<S>) -> Vec<Complex<S>> {
        self.factor.solve(&Self::flatten(state))
    }

    /// Real part of the synthesis V a, reshaped into a state.
    pub fn synthesize(&self, coefficients: &[Complex<S>]) -> State<S> {
        let flat = self.vectors.matvec(coefficients);
        let order = flat.len() / 2;
        State {
            displacement: flat[..order].iter().map(|c| c.re).collect(),
            velocity: flat[order..].iter().map(|c| c.re).collect(),
        }
    }
}

/// Mode retention rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec<S> {
    /// Keep the conjugate pairs with kappa(lambda) <= cutoff, cutoff in
    /// (0, 1]. A cutoff of 1 keeps everything (kappa < 1 always holds).
    Gamma(S),
    /// Keep exactly this many lowest-frequency conjugate pairs.
    PairCount(usize),
}

/// An eigenbasis together with a retention mask over its modes.
#[derive(Debug, Clone)]
pub struct FilteredBasis<S> {
    basis: EigenBasis<S>,
    retained: Vec<bool>,
    retained_pairs: usize,
    /// max over retained modes of h^2 |lambda|^2.
    pub kappa: S,
    /// kappa / (A^2 c^2): the achieved normalized cut level in [0, 1).
    pub gamma_effective: S,
    /// True when nothing was dropped; projection is then the identity and
    /// is skipped entirely, keeping outputs bit-identical to unfiltered.
    pub keeps_all: bool,
}

impl<S: Scalar> FilteredBasis<S> {
    pub fn basis(&self) -> &EigenBasis<S> {
        &self.basis
    }

    pub fn retained_mask(&self) -> &[bool] {
        &self.retained
    }

    pub fn retained_pairs(&self) -> usize {
        self.retained_pairs
    }

    pub fn retained_values(&self) -> Vec<Complex<S>> {
        self.basis
            .values
            .iter()
            .zip(self.retained.iter())
            .filter_map(|(l, &keep)| keep.then_some(*l))
            .collect()
    }
}

/// Normalized squared modulus kappa(lambda) = h^2 |lambda|^2 / (A^2 c^2)
/// used for all retention decisions; it lies in [0, 1) on the spectrum.
pub fn normalized_modulus_sq<S: Scalar>(model: &SemiDiscreteModel<S>, lambda: Complex<S>) -> S {
    let h = model.spacing();
    let c = model.params().wave_speed;
    let amp_sq = envelope_amplitude_sq::<S>(model.scheme());
    h * h * lambda.norm_sqr() / (amp_sq * c * c)
}

/// Conjugate pairs of mode indices, ordered by |Im lambda| ascending; each
/// pair carries its kappa measure.
fn conjugate_pairs<S: Scalar>(
    model: &SemiDiscreteModel<S>,
    values: &[Complex<S>],
) -> Vec<(usize, usize, S)> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        let (la, lb) = (values[a], values[b]);
        la.im
            .abs()
            .partial_cmp(&lb.im.abs())
            .unwrap()
            .then(lb.im.partial_cmp(&la.im).unwrap())
    });
    idx.chunks(2)
        .map(|pair| {
            let gamma_a = normalized_modulus_sq(model, values[pair[0]]);
            let gamma_b = if pair.len() == 2 {
                normalized_modulus_sq(model, values[pair[1]])
            } else {
                gamma_a
            };
            (
                pair[0],
                *pair.last().unwrap(),
                if gamma_a > gamma_b { gamma_a } else { gamma_b },
            )
        })
        .collect()
}

/// Applies a retention rule to an eigenbasis of the model's operator.
pub fn select_modes<S: Scalar>(
    basis: EigenBasis<S>,
    model: &SemiDiscreteModel<S>,
    spec: FilterSpec<S>,
) -> Result<FilteredBasis<S>> {
    let pairs = conjugate_pairs(model, basis.values());
    let total = pairs.len();
    let keep_pair: Vec<bool> = match spec {
        FilterSpec::Gamma(cutoff) => {
            if !(cutoff > S::zero() && cutoff <= S::one()) {
                return Err(Error::InvalidParameter {
                    reason: format!("filter cutoff must lie in (0, 1], got {cutoff}"),
                });
            }
            let keep: Vec<bool> = pairs.iter().map(|&(_, _, g)| g <= cutoff).collect();
            if !keep.iter().any(|&k| k) {
                let smallest = pairs
                    .iter()
                    .map(|&(_, _, g)| g)
                    .fold(S::infinity(), |a, b| if b < a { b } else { a });
                return Err(Error::FilterTooAggressive {
                    gamma: cutoff.to_f64().unwrap_or(f64::NAN),
                    smallest: smallest.to_f64().unwrap_or(f64::NAN),
                });
            }
            keep
        }
        FilterSpec::PairCount(m) => {
            if m == 0 || m > total {
                return Err(Error::PairCountOutOfRange { m, max: total });
            }
            (0..total).map(|i| i < m).collect()
        }
    };

    let mut retained = vec![false; basis.len()];
    let mut kappa_norm = S::zero();
    let mut retained_pairs = 0usize;
    for (&(i, j, gamma), &keep) in pairs.iter().zip(keep_pair.iter()) {
        if keep {
            retained[i] = true;
            retained[j] = true;
            retained_pairs += 1;
            if gamma > kappa_norm {
                kappa_norm = gamma;
            }
        }
    }
    let c = model.params().wave_speed;
    let amp_sq = envelope_amplitude_sq::<S>(model.scheme());
    let keeps_all = retained.iter().all(|&k| k);
    Ok(FilteredBasis {
        basis,
        retained,
        retained_pairs,
        kappa: kappa_norm * amp_sq * c * c,
        gamma_effective: kappa_norm,
        keeps_all,
    })
}

/// Projects a state onto the retained modes: synthesize(mask * coefficients).
/// When nothing was dropped the input is returned unchanged (bit-exact).
pub fn project_state<S: Scalar>(filtered: &FilteredBasis<S>, state: &State<S>) -> State<S> {
    if filtered.keeps_all {
        return state.clone();
    }
    let mut coeffs = filtered.basis.coefficients(state);
    for (c, &keep) in coeffs.iter_mut().zip(filtered.retained.iter()) {
        if !keep {
            *c = Complex::new(S::zero(), S::zero());
        }
    }
    filtered.basis.synthesize(&coeffs)
}

/// Cutoff value that retains exactly `m` conjugate pairs: the midpoint
/// between the m-th and (m+1)-th normalized pair moduli, or the midpoint
/// between the top modulus and 1 when every pair is kept.
pub fn gamma_for_pair_count<S: Scalar>(
    model: &SemiDiscreteModel<S>,
    spectrum: &Spectrum<S>,
    m: usize,
) -> Result<S> {
    let mut gammas: Vec<S> = conjugate_pairs(model, &spectrum.values)
        .iter()
        .map(|&(_, _, g)| g)
        .collect();
    gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if m == 0 || m > gammas.len() {
        return Err(Error::PairCountOutOfRange {
            m,
            max: gammas.len(),
        });
    }
    let upper = if m == gammas.len() {
        S::one()
    } else {
        gammas[m]
    };
    Ok((gammas[m - 1] + upper) * S::half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, Mesh, PhysicalParams, Scheme};
    use crate::spectral::dense_spectrum;

    fn setup(n: usize, xi: f64) -> (SemiDiscreteModel<f64>, Spectrum<f64>) {
        let p = PhysicalParams::new(1.0, 1.0, xi).unwrap();
        let model = build_model(p, Mesh::new(n).unwrap(), Scheme::FiniteDifference).unwrap();
        let spectrum = dense_spectrum(&model).unwrap();
        (model, spectrum)
    }

    fn random_state(order: usize) -> State<f64> {
        let mut s = State::zeros(order);
        for i in 0..order {
            s.displacement[i] = ((i * 7 + 3) as f64 * 0.77).sin();
            s.velocity[i] = ((i * 5 + 1) as f64 * 1.31).cos();
        }
        s
    }

    #[test]
    fn projection_is_idempotent() {
        let (model, spectrum) = setup(8, 0.6);
        let basis = eigen_basis(&spectrum).unwrap();
        let filtered = select_modes(basis, &model, FilterSpec::PairCount(4)).unwrap();
        let s = random_state(model.order());
        let ps = project_state(&filtered, &s);
        let pps = project_state(&filtered, &ps);
        let gap: f64 = ps
            .displacement
            .iter()
            .chain(ps.velocity.iter())
            .zip(pps.displacement.iter().chain(pps.velocity.iter()))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(gap < 1e-12 * ps.norm().max(1.0), "idempotence gap {gap}");
    }

    #[test]
    fn larger_cutoff_retains_superset() {
        let (model, spectrum) = setup(10, 0.4);
        let g1 = select_modes(
            eigen_basis(&spectrum).unwrap(),
            &model,
            FilterSpec::Gamma(0.2),
        )
        .unwrap();
        let g2 = select_modes(
            eigen_basis(&spectrum).unwrap(),
            &model,
            FilterSpec::Gamma(0.7),
        )
        .unwrap();
        assert!(g1.retained_pairs() <= g2.retained_pairs());
        for (a, b) in g1.retained_mask().iter().zip(g2.retained_mask()) {
            assert!(!a || *b, "cutoff 0.2 kept a mode that 0.7 dropped");
        }
        assert!(g1.gamma_effective <= 0.2 && g2.gamma_effective <= 0.7);
    }

    #[test]
    fn keep_all_is_bit_identical() {
        let (model, spectrum) = setup(6, 0.8);
        let filtered = select_modes(
            eigen_basis(&spectrum).unwrap(),
            &model,
            FilterSpec::Gamma(1.0),
        )
        .unwrap();
        assert!(filtered.keeps_all);
        let s = random_state(model.order());
        let ps = project_state(&filtered, &s);
        assert_eq!(s, ps);
    }

    #[test]
    fn cutoff_below_fundamental_is_refused() {
        let (model, spectrum) = setup(6, 0.8);
        let err = select_modes(
            eigen_basis(&spectrum).unwrap(),
            &model,
            FilterSpec::Gamma(1e-9),
        );
        assert!(matches!(err, Err(Error::FilterTooAggressive { .. })));
    }

    #[test]
    fn pair_count_bounds_are_enforced() {
        let (model, spectrum) = setup(5, 0.5);
        for m in [0usize, 7] {
            let err = select_modes(
                eigen_basis(&spectrum).unwrap(),
                &model,
                FilterSpec::PairCount(m),
            );
            assert!(matches!(err, Err(Error::PairCountOutOfRange { .. })));
        }
    }

    #[test]
    fn gamma_round_trip_retains_requested_pairs() {
        let (model, spectrum) = setup(9, 0.7);
        for m in 1..=10usize {
            let gamma = gamma_for_pair_count(&model, &spectrum, m).unwrap();
            let filtered = select_modes(
                eigen_basis(&spectrum).unwrap(),
                &model,
                FilterSpec::Gamma(gamma),
            )
            .unwrap();
            assert_eq!(filtered.retained_pairs(), m, "cutoff {gamma} at m={m}");
        }
    }
}
