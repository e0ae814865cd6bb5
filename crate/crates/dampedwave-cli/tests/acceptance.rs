//! Acceptance suite: one test per shipping criterion, each printing a
//! single PASS/FAIL line with its measured numbers (visible under
//! `--nocapture`) and asserting the pinned tolerances, including the
//! wall-clock budgets.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dampedwave::dynamics::{
    decay_prediction, dissipation_residual, energy, fit_decay_rate, fundamental_damped_state,
    integrate, lyapunov, lyapunov_corrector, pde_decay_prediction, sine_band_state, DiffStencil,
    FemEnergyVariant, Integrator,
};
use dampedwave::filter::{eigen_basis, project_state, select_modes, FilterSpec};
use dampedwave::model::{build_model, Mesh, PhysicalParams, Scheme, SemiDiscreteModel, State};
use dampedwave::spectral::{
    check_modulus_bounds, dense_spectrum, fd_sine_frequencies, fem_undamped_spectrum,
    match_spectra, pde_spectrum, sector_roots, sector_spectrum,
};

use dampedwave_cli::{presets, run, FormatChoice, Verb};

fn report(index: usize, title: &str, ok: bool, details: &str) {
    println!(
        "acceptance {index} {title}: {} ({details})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance {index} {title}: {details}");
}

fn model(scheme: Scheme, n: usize, c: f64, l: f64, xi: f64) -> SemiDiscreteModel<f64> {
    let params = PhysicalParams::new(c, l, xi).unwrap();
    build_model(params, Mesh::new(n).unwrap(), scheme).unwrap()
}

/// Closed-form control-free frequencies against the dense eigensolve, with
/// the element scheme's printed formula flagged until the mesh resolves it.
#[test]
fn acceptance_1_closed_form_spectral_equivalence() {
    const REL_TOL: f64 = 1e-9;
    const BUDGET_SECS: f64 = 10.0;
    let start = Instant::now();

    let mut worst_fd = 0.0f64;
    let mut worst_fem = 0.0f64;
    let mut flags = Vec::new();
    for n in [2usize, 5, 10, 50, 100] {
        let fd = model(Scheme::FiniteDifference, n, 1.0, 1.0, 0.0);
        let closed = fd_sine_frequencies(1.0, fd.spacing(), fd.order());
        let dense = dense_spectrum(&fd).unwrap();
        for (omega_sq, value) in closed.iter().zip(dense.upper_half()) {
            let omega = omega_sq.sqrt();
            worst_fd = worst_fd.max((value.im - omega).abs() / omega);
        }

        let fem = model(Scheme::FiniteElement, n, 1.0, 1.0, 0.0);
        let params = *fem.params();
        let (exact, formula) = fem_undamped_spectrum(&params, fem.mesh()).unwrap();
        let dense = dense_spectrum(&fem).unwrap();
        for (reference, value) in exact.upper_half().iter().zip(dense.upper_half()) {
            worst_fem = worst_fem.max((value.im - reference.im).abs() / reference.im);
        }
        flags.push((n, formula.formula_is_accurate, formula.max_relative_error));
    }

    // The quotient-formula approximation carries an O(1/n) defect: 26%
    // at n = 10, crossing the 5% gate just before n = 50 (4.94%).
    let flags_ok = flags
        .iter()
        .all(|&(n, accurate, _)| accurate == (n >= 50));
    let elapsed = start.elapsed().as_secs_f64();
    let ok = worst_fd < REL_TOL && worst_fem < REL_TOL && flags_ok && elapsed < BUDGET_SECS;
    report(
        1,
        "closed-form spectral equivalence",
        ok,
        &format!(
            "fd max rel {worst_fd:.2e}, fem max rel {worst_fem:.2e}, tol {REL_TOL:.0e}; \
             formula flagged below n=50, accurate from n=50 ({flags_ok}); {elapsed:.1}s < {BUDGET_SECS}s"
        ),
    );
}

/// Tip observability of the top mode degrades under refinement for the
/// difference scheme, and both schemes' top frequencies approach their
/// ceilings; driven through the observability command.
#[test]
fn acceptance_2_observability_blowup() {
    const RATIO_TOL: f64 = 0.01;
    const CEILING_TOL: f64 = 0.05;
    const BUDGET_SECS: f64 = 60.0;
    let start = Instant::now();
    let frozen_fd = [(20usize, 32.0241f64), (40, 117.5702), (80, 451.8985)];

    let config = |scheme: &str| {
        format!(
            r#"{{"scheme":"{scheme}","n_values":[20,40,80,400],"c":1.0,"l":1.0,"t":3.0}}"#
        )
    };
    let fd = run(Verb::Observability, &config("fd"), Some(FormatChoice::Json))
        .unwrap()
        .summary
        .observability
        .unwrap();
    let fem = run(Verb::Observability, &config("fem"), Some(FormatChoice::Json))
        .unwrap()
        .summary
        .observability
        .unwrap();

    let mut ratios_ok = true;
    for (row, (n, want)) in fd.iter().zip(frozen_fd) {
        ratios_ok &= row.n == n && (row.ratio - want).abs() < RATIO_TOL * want;
    }
    let increasing = fd[0].ratio < fd[1].ratio && fd[1].ratio < fd[2].ratio;
    let fd_ceiling = fd[3].normalized_top_modulus_sq;
    let fem_ceiling = fem[3].normalized_top_modulus_sq;
    let ceilings_ok =
        (fd_ceiling - 4.0).abs() < CEILING_TOL * 4.0 && (fem_ceiling - 12.0).abs() < CEILING_TOL * 12.0;

    let elapsed = start.elapsed().as_secs_f64();
    let ok = ratios_ok && increasing && ceilings_ok && elapsed < BUDGET_SECS;
    report(
        2,
        "observability blow-up",
        ok,
        &format!(
            "fd ratios {:.1}/{:.1}/{:.1} strictly increasing ({increasing}); \
             ceilings at n=400: fd {fd_ceiling:.5} -> 4, fem {fem_ceiling:.5} -> 12, tol 5%; \
             {elapsed:.1}s < {BUDGET_SECS}s",
            fd[0].ratio, fd[1].ratio, fd[2].ratio
        ),
    );
}

/// The damped spectrum from polynomial sector roots matches the dense
/// oracle eigenvalue-for-eigenvalue; every mode decays.
#[test]
fn acceptance_3_damped_spectrum_triple_agreement() {
    const ROOT_RESIDUAL_TOL: f64 = 1e-10;
    const MATCH_TOL: f64 = 1e-6;
    const BUDGET_SECS: f64 = 5.0;
    let start = Instant::now();

    let m = model(Scheme::FiniteDifference, 30, 1.0, 1.0, 0.9);
    let params = *m.params();
    let roots = sector_roots(&params, m.mesh()).unwrap();
    let count_ok = roots.len() == 31;
    let quadrant_ok = roots.iter().all(|r| r.z.re > 0.0 && r.z.im > 0.0);
    let worst_residual = roots
        .iter()
        .map(|r| r.poly_residual)
        .fold(0.0f64, f64::max);

    let sector = sector_spectrum(&params, m.mesh()).unwrap();
    let dense = dense_spectrum(&m).unwrap();
    let matched = match_spectra(&dense, &sector, 1e-4).unwrap();
    let abscissa = dense.abscissa();

    let elapsed = start.elapsed().as_secs_f64();
    let ok = count_ok
        && quadrant_ok
        && worst_residual <= ROOT_RESIDUAL_TOL
        && matched.max_rel_distance < MATCH_TOL
        && abscissa < 0.0
        && elapsed < BUDGET_SECS;
    report(
        3,
        "damped spectrum triple agreement",
        ok,
        &format!(
            "31 first-quadrant roots ({}), max |p(z)| {worst_residual:.1e} <= {ROOT_RESIDUAL_TOL:.0e}, \
             dense-sector rel gap {:.1e} < {MATCH_TOL:.0e}, abscissa {abscissa:.5} < 0; \
             {elapsed:.1}s < {BUDGET_SECS}s",
            count_ok && quadrant_ok,
            matched.max_rel_distance
        ),
    );
}

/// Modulus envelopes hold with margin at three refinements and the worst
/// real part scales like the spacing.
#[test]
fn acceptance_4_modulus_bounds_and_halving() {
    const HALVING_BAND: (f64, f64) = (0.35, 0.65);
    const BUDGET_SECS: f64 = 30.0;
    let start = Instant::now();

    let params = PhysicalParams::new(1.0, 1.0, 0.9).unwrap();
    let mut details = String::new();
    let mut ok = true;
    for scheme in [Scheme::FiniteDifference, Scheme::FiniteElement] {
        let meshes: Vec<Mesh> = [50usize, 100, 200]
            .iter()
            .map(|&n| Mesh::new(n).unwrap())
            .collect();
        let spectra: Vec<_> = meshes
            .iter()
            .map(|&mesh| dense_spectrum(&build_model(params, mesh, scheme).unwrap()).unwrap())
            .collect();
        let runs: Vec<_> = meshes.iter().copied().zip(spectra.iter()).collect();
        let check = check_modulus_bounds(&params, scheme, &runs).unwrap();
        let slack_ok = check.fitted_offset == 0.0;
        let halving_ok = check
            .halving_ratios
            .iter()
            .all(|&r| r > HALVING_BAND.0 && r < HALVING_BAND.1);
        ok &= slack_ok && halving_ok;
        details.push_str(&format!(
            "{}: offset {:.1e}, halving {:.3}/{:.3}; ",
            scheme.label(),
            check.fitted_offset,
            check.halving_ratios[0],
            check.halving_ratios[1]
        ));
    }

    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < BUDGET_SECS;
    report(
        4,
        "modulus bounds with O(h) abscissa",
        ok,
        &format!("{details}band ({}, {}); {elapsed:.1}s < {BUDGET_SECS}s", HALVING_BAND.0, HALVING_BAND.1),
    );
}

/// Boundary dissipation identity along exact trajectories: the fourth-order
/// stencil resolves dE/dt = -xi (v'_tip)^2 to well below the gate.
#[test]
fn acceptance_5_dissipation_identity() {
    const RESIDUAL_TOL: f64 = 1e-5;
    let start = Instant::now();

    let mut residuals = Vec::new();
    for scheme in [Scheme::FiniteDifference, Scheme::FiniteElement] {
        let m = model(scheme, 30, 1.0, 1.0, 0.9);
        let initial = fundamental_damped_state(&m).unwrap();
        let trajectory =
            integrate(&m, &initial, Integrator::ModalExact { dt: 1e-3 }, 10.0).unwrap();
        let residual = dissipation_residual(&m, &trajectory, DiffStencil::FourthOrder).unwrap();
        residuals.push((scheme.label(), residual));
    }

    let elapsed = start.elapsed().as_secs_f64();
    let ok = residuals.iter().all(|&(_, r)| r < RESIDUAL_TOL);
    report(
        5,
        "boundary dissipation identity",
        ok,
        &format!(
            "normalized residuals {} {:.2e}, {} {:.2e} < {RESIDUAL_TOL:.0e} \
             (dt 1e-3, t 10); {elapsed:.1}s",
            residuals[0].0, residuals[0].1, residuals[1].0, residuals[1].1
        ),
    );
}

/// Filtered runs obey their explicit decay certificate at every sample,
/// and the fitted rate beats the predicted one. The presets' bundled
/// reference figures are reported side by side; their cut levels sit
/// outside [0, 1), so they are a discrepancy report, not a target.
#[test]
fn acceptance_6_decay_envelope_certificate() {
    const SIGMA_FIT_FROZEN: [(&str, f64); 2] = [("filtered-fd", 1.2805), ("filtered-fem", 3.0921)];
    const SIGMA_PRED_FROZEN: [f64; 2] = [0.19934, 0.22916];
    const FIT_REL_TOL: f64 = 0.02;
    const PRED_ABS_TOL: f64 = 1e-4;
    const BUDGET_SECS: f64 = 30.0;
    let start = Instant::now();

    let mut ok = true;
    let mut details = String::new();
    for (i, (preset, frozen_fit)) in SIGMA_FIT_FROZEN.iter().enumerate() {
        let artifacts = run(Verb::Simulate, presets::preset(preset).unwrap(), None).unwrap();
        let decay = artifacts.summary.decay.unwrap();
        let reference = artifacts.summary.reference.unwrap();
        let envelope_ok = decay.envelope_min_margin >= 1.0;
        let order_ok = decay.sigma_fit >= decay.sigma_predicted;
        let fit_ok = (decay.sigma_fit - frozen_fit).abs() < FIT_REL_TOL * frozen_fit;
        let pred_ok = (decay.sigma_predicted - SIGMA_PRED_FROZEN[i]).abs() < PRED_ABS_TOL;
        let ref_ok = !reference.gamma_in_unit_interval;
        ok &= envelope_ok && order_ok && fit_ok && pred_ok && ref_ok;
        details.push_str(&format!(
            "{preset}: margin {:.3} >= 1, sigma_fit {:.4} >= sigma_pred {:.5}, \
             reference sigma {:.4} (gap {:+.4}, its gamma {} outside [0,1)); ",
            decay.envelope_min_margin,
            decay.sigma_fit,
            decay.sigma_predicted,
            reference.sigma_given,
            reference.sigma_gap,
            reference.gamma_given
        ));
    }

    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed < BUDGET_SECS;
    report(
        6,
        "filtered decay envelope",
        ok,
        &format!("{details}{elapsed:.1}s < {BUDGET_SECS}s"),
    );
}

/// Without filtering the fitted decay rate degrades under refinement: the
/// fine mesh decays at under half the coarse-mesh rate.
#[test]
fn acceptance_7_no_uniform_decay_unfiltered() {
    const FROZEN: [(usize, f64); 2] = [(30, 0.05184), (120, 0.01038)];
    const FIT_REL_TOL: f64 = 0.02;
    const BUDGET_SECS: f64 = 120.0;
    let start = Instant::now();

    let mut fits = Vec::new();
    for (n, frozen) in FROZEN {
        let m = model(Scheme::FiniteDifference, n, 1.0, 1.0, 0.9);
        // The same band of top modes at every refinement.
        let initial = sine_band_state(&m, n - 10, n, 1e-3).unwrap();
        let trajectory =
            integrate(&m, &initial, Integrator::ModalExact { dt: 0.01 }, 20.0).unwrap();
        let times = trajectory.times.clone();
        let energies: Vec<f64> = trajectory
            .states
            .iter()
            .map(|s| energy(&m, s))
            .collect();
        let fit = fit_decay_rate(&times, &energies).unwrap();
        fits.push((n, fit.sigma, (fit.sigma - frozen).abs() < FIT_REL_TOL * frozen));
    }

    let degraded = fits[1].1 < 0.5 * fits[0].1;
    let elapsed = start.elapsed().as_secs_f64();
    let ok = degraded && fits.iter().all(|&(_, _, pin)| pin) && elapsed < BUDGET_SECS;
    report(
        7,
        "decay degrades without filtering",
        ok,
        &format!(
            "sigma_fit n=30 {:.5}, n=120 {:.5}, ratio {:.3} < 0.5; {elapsed:.1}s < {BUDGET_SECS}s",
            fits[0].1,
            fits[1].1,
            fits[1].1 / fits[0].1
        ),
    );
}

/// Continuum reference values: the damped lattice's real part and the
/// maximal decay rate of the explicit certificate.
#[test]
fn acceptance_8_continuum_reference() {
    const RE_TOL: f64 = 1e-12;
    const SIGMA_TOL: f64 = 1e-15;
    let start = Instant::now();

    let params = PhysicalParams::new(1.0, 1.0, 0.9).unwrap();
    let expected_re = -0.5 * 19.0f64.ln();
    let worst_re = pde_spectrum(&params, 16)
        .iter()
        .map(|v| (v.re - expected_re).abs())
        .fold(0.0f64, f64::max);

    // The discrete certificate peaks at gain = wave speed, cut level 0.
    let peak = decay_prediction::<f64>(1.0, 1.0, 1.0, 0.0).unwrap().sigma;
    let peak_ok = (peak - 0.25).abs() < SIGMA_TOL;
    let mut grid_max = (0.0f64, 0.0f64);
    for k in 1..=100 {
        let xi = k as f64 / 100.0;
        let sigma = decay_prediction(1.0, 1.0, xi, 0.0).unwrap().sigma;
        if sigma > grid_max.1 {
            grid_max = (xi, sigma);
        }
    }
    let maximizer_ok = grid_max.0 == 1.0 && grid_max.1 <= 0.25 + SIGMA_TOL;
    // The continuum certificate reaches the same cap at the same gain.
    let pde_peak = pde_decay_prediction::<f64>(1.0, 1.0, 1.0).unwrap().sigma;
    let pde_ok = (pde_peak - 0.25).abs() < SIGMA_TOL;

    let elapsed = start.elapsed().as_secs_f64();
    let ok = worst_re < RE_TOL && peak_ok && maximizer_ok && pde_ok;
    report(
        8,
        "continuum reference values",
        ok,
        &format!(
            "lattice re defect {worst_re:.1e} < {RE_TOL:.0e}; sigma max {peak:.15} = 1/4 at \
             gain = wave speed (grid argmax {}), continuum peak {pde_peak:.15}; {elapsed:.1}s",
            grid_max.0
        ),
    );
}

fn random_state(rng: &mut ChaCha8Rng, order: usize) -> State<f64> {
    State {
        displacement: (0..order).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        velocity: (0..order).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    }
}

fn random_scheme(rng: &mut ChaCha8Rng) -> Scheme {
    if rng.gen_bool(0.5) {
        Scheme::FiniteDifference
    } else {
        Scheme::FiniteElement
    }
}

/// Randomized property suites, 100 cases each with a fixed seed: the
/// Lyapunov sandwich, projector idempotence, filter monotonicity,
/// conjugate symmetry, and byte-level determinism of the runner.
#[test]
fn acceptance_9_randomized_property_suites() {
    const CASES: usize = 100;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ddba11);

    // Lyapunov sandwich: |F| <= (l/c) E and (1 -+ delta l / c) E brackets
    // E + delta F.
    for case in 0..CASES {
        let c = rng.gen_range(0.5..2.0);
        let l = rng.gen_range(0.5..2.0);
        let xi = rng.gen_range(0.0..0.9 * c);
        let n = rng.gen_range(4..=20);
        let m = build_model(
            PhysicalParams::new(c, l, xi).unwrap(),
            Mesh::new(n).unwrap(),
            random_scheme(&mut rng),
        )
        .unwrap();
        let state = random_state(&mut rng, m.order());
        let e = energy(&m, &state);
        let f = lyapunov_corrector(&m, &state);
        let slack = 1e-12 * e.max(1.0);
        assert!(f.abs() <= (l / c) * e + slack, "case {case}: |F| = {} > (l/c)E = {}", f.abs(), (l / c) * e);
        let delta = decay_prediction(c, l, xi, 0.0).unwrap().delta;
        let ld = lyapunov(&m, &state, delta);
        let lo = (1.0 - delta * l / c) * e - slack;
        let hi = (1.0 + delta * l / c) * e + slack;
        assert!(lo <= ld && ld <= hi, "case {case}: {lo} <= {ld} <= {hi}");
    }

    // Projector idempotence on random filtered bases.
    for case in 0..CASES {
        let n = rng.gen_range(4..=12);
        let xi = rng.gen_range(0.1..0.9);
        let m = model(random_scheme(&mut rng), n, 1.0, 1.0, xi);
        let spec = if rng.gen_bool(0.5) {
            FilterSpec::Gamma(rng.gen_range(0.1..1.0))
        } else {
            FilterSpec::PairCount(rng.gen_range(1..=n + 1))
        };
        let dense = dense_spectrum(&m).unwrap();
        let filtered = select_modes(eigen_basis(&dense).unwrap(), &m, spec).unwrap();
        let state = random_state(&mut rng, m.order());
        let once = project_state(&filtered, &state);
        let twice = project_state(&filtered, &once);
        let mut defect = 0.0f64;
        let mut scale = 1e-30f64;
        for i in 0..m.order() {
            defect = defect
                .max((twice.displacement[i] - once.displacement[i]).abs())
                .max((twice.velocity[i] - once.velocity[i]).abs());
            scale = scale.max(once.displacement[i].abs()).max(once.velocity[i].abs());
        }
        assert!(defect <= 1e-8 * scale.max(1.0), "case {case}: defect {defect:.2e}");
    }

    // Filter monotonicity: a larger cut level retains a superset.
    for case in 0..CASES {
        let n = rng.gen_range(4..=12);
        let xi = rng.gen_range(0.1..0.9);
        let m = model(random_scheme(&mut rng), n, 1.0, 1.0, xi);
        let dense = dense_spectrum(&m).unwrap();
        let mut cuts = [rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0)];
        cuts.sort_by(f64::total_cmp);
        let narrow = select_modes(eigen_basis(&dense).unwrap(), &m, FilterSpec::Gamma(cuts[0]));
        let wide = select_modes(eigen_basis(&dense).unwrap(), &m, FilterSpec::Gamma(cuts[1]));
        match (narrow, wide) {
            (Ok(narrow), Ok(wide)) => {
                let nested = narrow
                    .retained_mask()
                    .iter()
                    .zip(wide.retained_mask())
                    .all(|(&a, &b)| !a || b);
                assert!(nested, "case {case}: cuts {cuts:?} not nested");
                assert!(narrow.retained_pairs() <= wide.retained_pairs());
            }
            // A cut below the slowest mode retains nothing and is rejected;
            // that empty selection is the trivial subset of anything.
            (Err(_), _) => {}
            (Ok(_), Err(_)) => panic!("case {case}: wide cut {} rejected while narrow {} kept modes", cuts[1], cuts[0]),
        }
    }

    // Conjugate symmetry of every dense spectrum.
    for case in 0..CASES {
        let n = rng.gen_range(4..=14);
        let xi = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.1..0.9) };
        let m = model(random_scheme(&mut rng), n, 1.0, 1.0, xi);
        let dense = dense_spectrum(&m).unwrap();
        for v in &dense.values {
            let partner = dense
                .values
                .iter()
                .map(|w| (w - v.conj()).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(
                partner <= 1e-9 * v.norm().max(1.0),
                "case {case}: {v} lacks a conjugate partner (gap {partner:.2e})"
            );
        }
    }

    // Determinism: identical configuration, identical bytes, every verb.
    for case in 0..CASES {
        let verb = [Verb::Spectrum, Verb::Simulate, Verb::Observability, Verb::DecayReport]
            [case % 4];
        let scheme = if rng.gen_bool(0.5) { "fd" } else { "fem" };
        let n = rng.gen_range(5..=10);
        let xi = rng.gen_range(0.1..0.9);
        let text = match verb {
            Verb::Spectrum => format!(
                r#"{{"scheme":"{scheme}","n":{n},"c":1.0,"l":1.0,"xi":{xi},
                   "filter":{{"mode":"pair_count","value":{}}}}}"#,
                rng.gen_range(1..=n + 1)
            ),
            Verb::Simulate => format!(
                r#"{{"scheme":"{scheme}","n":{n},"c":1.0,"l":1.0,"xi":{xi},
                   "filter":{{"mode":"gamma","value":{}}},
                   "ic":{{"kind":"sine_band","k_min":1,"k_max":{},"amplitude":0.01}},
                   "t":2.0,"dt":0.02,"integrator":"modal-exact"}}"#,
                // Stay above the slowest mode's level so the cut is valid.
                rng.gen_range(0.5..1.0),
                rng.gen_range(2..=n)
            ),
            Verb::Observability => format!(
                r#"{{"scheme":"{scheme}","n_values":[{},{}],"c":1.0,"l":1.0,"t":3.0}}"#,
                rng.gen_range(5..=10),
                rng.gen_range(11..=20)
            ),
            Verb::DecayReport => format!(
                r#"{{"scheme":"{scheme}","n":{n},"c":1.0,"l":1.0,
                   "xi_values":[{xi}],"gamma_values":[{},{}],
                   "ic":{{"kind":"sine_band","k_min":1,"k_max":3,"amplitude":0.01}},
                   "t":2.0,"dt":0.02}}"#,
                rng.gen_range(0.5..0.75),
                rng.gen_range(0.75..0.99)
            ),
        };
        let a = run(verb, &text, None).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let b = run(verb, &text, None).unwrap();
        assert_eq!(a.files, b.files, "case {case} ({verb:?}) diverged");
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        9,
        "randomized property suites",
        true,
        &format!("5 suites x {CASES} cases, zero failures; {elapsed:.1}s"),
    );
}

/// The energy variants agree once the clamped-cell share is removed, kept
/// here as a cross-check that simulate's default energy is the documented
/// one (the variant identity itself is covered in the library's tests).
#[test]
fn simulate_energy_uses_the_clamped_cell_variant() {
    let m = model(Scheme::FiniteElement, 10, 1.0, 1.0, 0.5);
    let initial = sine_band_state(&m, 1, 4, 0.01).unwrap();
    let trajectory = integrate(&m, &initial, Integrator::ModalExact { dt: 0.01 }, 1.0).unwrap();
    let trace = dampedwave::dynamics::energy_trace(
        &m,
        &trajectory,
        0.0,
        FemEnergyVariant::WithClampedCell,
    );
    assert!((trace.energies[0] - energy(&m, &initial)).abs() < 1e-15);
}
