//! Energy bookkeeping along trajectories: the boundary dissipation
//! identity, step-size convergence of the integrator, Lyapunov sandwich
//! bounds, and explicit decay certificates checked against simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dampedwave::dynamics::{
    decay_prediction, dissipation_residual, energy, energy_trace, energy_with_variant,
    fit_decay_rate, fundamental_damped_state, integrate, lyapunov, lyapunov_corrector,
    modal_trajectory, sine_band_state, DiffStencil, FemEnergyVariant, Integrator,
};
use dampedwave::filter::{eigen_basis, gamma_for_pair_count, select_modes, FilterSpec};
use dampedwave::model::{build_model, Mesh, PhysicalParams, Scheme, SemiDiscreteModel, State};
use dampedwave::spectral::dense_spectrum;

const C: f64 = 1.0;
const L: f64 = 1.0;

fn desk_model(scheme: Scheme, n: usize, xi: f64) -> SemiDiscreteModel<f64> {
    let p = PhysicalParams::new(C, L, xi).unwrap();
    build_model(p, Mesh::new(n).unwrap(), scheme).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, order: usize) -> State<f64> {
    let mut s = State::zeros(order);
    for i in 0..order {
        s.displacement[i] = rng.gen_range(-1.0..1.0);
        s.velocity[i] = rng.gen_range(-1.0..1.0);
    }
    s
}

#[test]
fn dissipation_identity_resolved_by_the_wide_stencil() {
    // Gentlest trajectory at desk scale: exact modal evolution of the
    // slowest damped mode, sampled densely.
    for (scheme, floor_2nd) in [
        (Scheme::FiniteDifference, 2.729e-5),
        (Scheme::FiniteElement, 3.459e-5),
    ] {
        let model = desk_model(scheme, 30, 0.9);
        let initial = fundamental_damped_state(&model).unwrap();
        let traj = integrate(
            &model,
            &initial,
            Integrator::ModalExact { dt: 1e-3 },
            10.0,
        )
        .unwrap();

        // The 5-point stencil resolves the identity to discretization dust.
        let wide = dissipation_residual(&model, &traj, DiffStencil::FourthOrder).unwrap();
        assert!(wide < 1e-8, "{scheme:?} wide-stencil residual {wide}");

        // The 3-point stencil hits its truncation floor instead; pin the
        // observed magnitude within a factor of 3.
        let narrow = dissipation_residual(&model, &traj, DiffStencil::SecondOrder).unwrap();
        assert!(
            narrow > floor_2nd / 3.0 && narrow < floor_2nd * 3.0,
            "{scheme:?} narrow-stencil residual {narrow} vs floor {floor_2nd}"
        );
        assert!(narrow / wide > 1e3, "stencil separation lost");
    }
}

#[test]
fn rk4_energy_never_increases_under_damping() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for scheme in [Scheme::FiniteDifference, Scheme::FiniteElement] {
        for xi in [0.0, 0.3, 0.9] {
            let model = desk_model(scheme, 12, xi);
            let s = random_state(&mut rng, model.order());
            let dt = model.spacing() / 8.0;
            let traj = integrate(&model, &s, Integrator::Rk4 { dt }, 3.0).unwrap();
            let mut previous = f64::INFINITY;
            for state in &traj.states {
                let e = energy(&model, state);
                assert!(e <= previous * (1.0 + 1e-12), "energy rose: {e} > {previous}");
                previous = e;
            }
        }
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    let model = desk_model(Scheme::FiniteDifference, 10, 0.5);
    let mut initial = State::zeros(model.order());
    for i in 0..model.order() {
        initial.displacement[i] = (0.9 * (i as f64 + 1.0)).sin();
        initial.velocity[i] = (1.7 * (i as f64 + 1.0)).cos();
    }
    let h = model.spacing();
    let horizon = 5.0;
    let mut errors = Vec::new();
    for divisor in [10.0, 20.0, 40.0] {
        let dt = h / divisor;
        let approx = integrate(&model, &initial, Integrator::Rk4 { dt }, horizon).unwrap();
        let exact = integrate(&model, &initial, Integrator::ModalExact { dt }, horizon).unwrap();
        let mut err = 0.0f64;
        for (a, b) in approx.states.iter().zip(exact.states.iter()) {
            for i in 0..model.order() {
                err = err.max((a.displacement[i] - b.displacement[i]).abs());
                err = err.max((a.velocity[i] - b.velocity[i]).abs());
            }
        }
        errors.push(err);
    }
    // Halving the step cuts the error 16-fold (observed ratios 16.0).
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (13.0..19.0).contains(&ratio),
            "Richardson ratio {ratio}, errors {errors:?}"
        );
    }
}

#[test]
fn lyapunov_functional_is_sandwiched_by_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0usize;
    for scheme in [Scheme::FiniteDifference, Scheme::FiniteElement] {
        for &n in &[8usize, 30] {
            let model = desk_model(scheme, n, 0.9);
            for _ in 0..25 {
                let s = random_state(&mut rng, model.order());
                let e = energy(&model, &s);
                for fac in [0.1, 0.3, 0.9] {
                    let delta = fac * C / L;
                    let val = lyapunov(&model, &s, delta);
                    let lo = (1.0 - fac) * e;
                    let hi = (1.0 + fac) * e;
                    assert!(
                        lo - 1e-9 * e <= val && val <= hi + 1e-9 * e,
                        "{scheme:?} n = {n} fac = {fac}: {val} outside [{lo}, {hi}]"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 300);
}

#[test]
fn corrector_is_dominated_by_energy_times_length_over_speed() {
    // |F| <= (l/c) E is the inequality behind the sandwich; check it raw.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for scheme in [Scheme::FiniteDifference, Scheme::FiniteElement] {
        let model = desk_model(scheme, 17, 0.6);
        for _ in 0..50 {
            let s = random_state(&mut rng, model.order());
            let f = lyapunov_corrector(&model, &s).abs();
            let e = energy(&model, &s);
            assert!(f <= (L / C) * e * (1.0 + 1e-9), "{scheme:?}: |F| = {f}, E = {e}");
        }
    }
}

#[test]
fn filtered_flow_respects_its_certificate() {
    // High-band start, 10 retained pairs, exact filtered flow over [0, 20].
    // The certificate built from the achieved cut level must envelope the
    // energy history with its full amplitude margin, and the fitted rates
    // are pinned to the frozen observations.
    let cases = [
        (Scheme::FiniteDifference, 1.2805),
        (Scheme::FiniteElement, 3.0921),
    ];
    for (scheme, sigma_fit_frozen) in cases {
        let model = desk_model(scheme, 30, 0.9);
        let spectrum = dense_spectrum(&model).unwrap();
        let basis = eigen_basis(&spectrum).unwrap();
        let filtered = select_modes(basis, &model, FilterSpec::PairCount(10)).unwrap();
        let pred = decay_prediction(C, L, 0.9, filtered.gamma_effective).unwrap();

        let initial = sine_band_state(&model, 20, 30, 1e-3).unwrap();
        let projected = dampedwave::filter::project_state(&filtered, &initial);
        let traj = modal_trajectory(
            filtered.basis(),
            &initial,
            Some(filtered.retained_mask()),
            0.01,
            20.0,
        )
        .unwrap();
        let trace = energy_trace(&model, &traj, pred.delta, FemEnergyVariant::WithClampedCell);
        let e0 = energy(&model, &projected);
        assert!((trace.energies[0] - e0).abs() < 1e-9 * e0);

        let mut min_margin = f64::INFINITY;
        for (t, e) in trace.times.iter().zip(trace.energies.iter()) {
            let bound = pred.amplitude * e0 * (-pred.sigma * t).exp();
            min_margin = min_margin.min(bound / e);
        }
        // The history decays faster than exp(-sigma t) outright, so the
        // worst margin is the amplitude factor itself.
        assert!(
            (min_margin - pred.amplitude).abs() < 1e-6 * pred.amplitude,
            "{scheme:?}: margin {min_margin} vs amplitude {}",
            pred.amplitude
        );

        let fit = fit_decay_rate(&trace.times, &trace.energies).unwrap();
        assert!(
            (fit.sigma - sigma_fit_frozen).abs() < 0.02 * sigma_fit_frozen,
            "{scheme:?}: fitted rate {} vs frozen {sigma_fit_frozen}",
            fit.sigma
        );
        assert!(!fit.used_local_maxima);
        assert!(fit.sigma > pred.sigma, "filtered flow must beat its certificate");
    }
}

#[test]
fn filtered_certificate_rates_at_desk_scale() {
    // Retaining 10 pairs at n = 30, xi = 0.9 yields the frozen effective
    // cut levels and therefore these certificate rates.
    let cases = [
        (Scheme::FiniteDifference, 0.19934),
        (Scheme::FiniteElement, 0.22916),
    ];
    for (scheme, sigma_frozen) in cases {
        let model = desk_model(scheme, 30, 0.9);
        let spectrum = dense_spectrum(&model).unwrap();
        let basis = eigen_basis(&spectrum).unwrap();
        let filtered = select_modes(basis, &model, FilterSpec::PairCount(10)).unwrap();
        let pred = decay_prediction(C, L, 0.9, filtered.gamma_effective).unwrap();
        assert!(
            (pred.sigma - sigma_frozen).abs() < 1e-4,
            "{scheme:?} sigma {} vs {sigma_frozen}",
            pred.sigma
        );

        // The pair-count cut and the equivalent gamma cut give one rate.
        let gamma = gamma_for_pair_count(&model, &spectrum, 10).unwrap();
        let via_gamma = decay_prediction(C, L, 0.9, gamma).unwrap();
        assert!(via_gamma.sigma <= pred.sigma + 1e-12);
    }
}

#[test]
fn element_energy_variants_differ_by_the_clamped_cell() {
    let model = desk_model(Scheme::FiniteElement, 9, 0.4);
    let mut s = State::zeros(model.order());
    for i in 0..model.order() {
        s.displacement[i] = (0.5 + i as f64).sin();
        s.velocity[i] = (0.2 + i as f64).cos();
    }
    let full = energy(&model, &s);
    let trimmed = energy_with_variant(&model, &s, FemEnergyVariant::WithoutClampedCell);
    let h = model.spacing();
    let cell = h / 12.0
        * (s.velocity[0] * s.velocity[0]
            + 6.0 * C * C * s.displacement[0] * s.displacement[0] / (h * h));
    assert!((full - trimmed - cell).abs() < 1e-14 * full);

    // The difference scheme has no such ambiguity.
    let fd = desk_model(Scheme::FiniteDifference, 9, 0.4);
    let full = energy(&fd, &s);
    let same = energy_with_variant(&fd, &s, FemEnergyVariant::WithoutClampedCell);
    assert_eq!(full, same);
}
