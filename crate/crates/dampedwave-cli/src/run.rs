//! Command execution. Every verb computes all of its artifacts in memory
//! first and only then reports them; a failure anywhere therefore leaves
//! no partial outputs behind. Identical configurations produce byte-wise
//! identical artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use dampedwave::dynamics::{
    decay_prediction, dissipation_residual, energy_trace, fit_decay_rate, integrate,
    modal_trajectory, observability_ratio, pde_decay_prediction, top_mode_state, DiffStencil,
    FemEnergyVariant, Integrator, ObsKind, Trajectory,
};
use dampedwave::export::{energy_csv, energy_lines_svg, spectrum_csv, spectrum_scatter_svg};
use dampedwave::filter::{eigen_basis, normalized_modulus_sq, project_state, select_modes, FilteredBasis};
use dampedwave::model::{build_model, Mesh, PhysicalParams, SemiDiscreteModel};
use dampedwave::spectral::{
    dense_spectrum, fd_sine_frequencies, fem_undamped_spectrum, pde_spectrum, sector_spectrum,
    Provenance, Spectrum,
};

use crate::config::{
    ic_state, parse_config, DecayReportConfig, ExperimentConfig, IntegratorName,
    ObservabilityConfig, OutputFlags, ReferenceValues, SchemeName,
};
use crate::error::{CliError, Result};
use crate::summary::{
    DecayBlock, DecayRow, DissipationBlock, EnergyBlock, FilterBlock, ModelBlock,
    ObservabilityRow, ReferenceBlock, RunSummary, SpectrumBlock,
};

/// The four verbs of the runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Spectrum,
    Simulate,
    Observability,
    DecayReport,
}

impl Verb {
    pub fn label(self) -> &'static str {
        match self {
            Verb::Spectrum => "spectrum",
            Verb::Simulate => "simulate",
            Verb::Observability => "observability",
            Verb::DecayReport => "decay-report",
        }
    }
}

/// `--format` narrows which machine-readable artifacts are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatChoice {
    Csv,
    Json,
}

fn apply_format(flags: &mut OutputFlags, choice: Option<FormatChoice>) {
    match choice {
        Some(FormatChoice::Csv) => {
            flags.csv = true;
            flags.json = false;
        }
        Some(FormatChoice::Json) => {
            flags.csv = false;
            flags.json = true;
        }
        None => {}
    }
}

/// Fully computed run: relative file names with their contents, plus the
/// structured summary the JSON artifact is rendered from.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub summary: RunSummary,
}

impl Artifacts {
    fn finish(mut summary: RunSummary, mut files: Vec<(String, String)>, json: bool) -> Artifacts {
        let mut names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
        if json {
            names.push("summary.json".to_string());
        }
        summary.files = names;
        if json {
            files.push(("summary.json".to_string(), summary.to_json()));
        }
        Artifacts { files, summary }
    }
}

/// Parses, validates, and executes one command against a configuration
/// document. Nothing is written; pair with [`write_artifacts`].
pub fn run(verb: Verb, config_text: &str, format: Option<FormatChoice>) -> Result<Artifacts> {
    match verb {
        Verb::Spectrum => {
            let mut cfg: ExperimentConfig = parse_config(config_text)?;
            cfg.validate()?;
            apply_format(&mut cfg.outputs, format);
            cmd_spectrum(&cfg)
        }
        Verb::Simulate => {
            let mut cfg: ExperimentConfig = parse_config(config_text)?;
            cfg.validate()?;
            apply_format(&mut cfg.outputs, format);
            cmd_simulate(&cfg)
        }
        Verb::Observability => {
            let mut cfg: ObservabilityConfig = parse_config(config_text)?;
            cfg.validate()?;
            apply_format(&mut cfg.outputs, format);
            cmd_observability(&cfg)
        }
        Verb::DecayReport => {
            let mut cfg: DecayReportConfig = parse_config(config_text)?;
            cfg.validate()?;
            apply_format(&mut cfg.outputs, format);
            cmd_decay_report(&cfg)
        }
    }
}

/// Writes every artifact under `out_dir`, creating it if needed. On a
/// write failure the files already written by this call are removed.
pub fn write_artifacts(artifacts: &Artifacts, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (name, content) in &artifacts.files {
        let path = out_dir.join(name);
        if let Err(e) = fs::write(&path, content) {
            for done in &written {
                fs::remove_file(done).ok();
            }
            return Err(CliError::Io(e));
        }
        written.push(path);
    }
    Ok(written)
}

fn echo<T: serde::Serialize>(cfg: &T) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn model_block(cfg_n: usize, model: &SemiDiscreteModel<f64>) -> ModelBlock {
    ModelBlock {
        scheme: model.scheme().label().to_string(),
        n: cfg_n,
        order: model.order(),
        phase_dim: model.phase_dim(),
        spacing: model.spacing(),
    }
}

fn spectrum_block(model: &SemiDiscreteModel<f64>, spectrum: &Spectrum<f64>) -> SpectrumBlock {
    let max_norm = spectrum
        .values
        .iter()
        .map(|&l| normalized_modulus_sq(model, l))
        .fold(0.0f64, f64::max);
    let max_residual = spectrum.residuals.iter().copied().fold(0.0f64, f64::max);
    SpectrumBlock {
        count: spectrum.values.len(),
        abscissa: spectrum.abscissa(),
        max_normalized_modulus_sq: max_norm,
        max_residual,
    }
}

fn filter_block(filtered: &FilteredBasis<f64>) -> FilterBlock {
    FilterBlock {
        retained_pairs: filtered.retained_pairs(),
        retained_modes: filtered.retained_mask().iter().filter(|&&k| k).count(),
        total_modes: filtered.retained_mask().len(),
        gamma_effective: filtered.gamma_effective,
        kappa: filtered.kappa,
        basis_condition: filtered.basis().condition(),
        keeps_all: filtered.keeps_all,
    }
}

/// Continuum eigenvalue lattice packaged as a spectrum batch.
fn continuum_spectrum(params: &PhysicalParams<f64>, pairs: usize) -> Spectrum<f64> {
    let values = pde_spectrum(params, pairs);
    let count = values.len();
    Spectrum {
        values,
        vectors: None,
        residuals: vec![0.0; count],
        provenance: Provenance::Continuum,
    }
}

fn subset_spectrum(values: Vec<num_complex::Complex<f64>>) -> Spectrum<f64> {
    let count = values.len();
    Spectrum {
        values,
        vectors: None,
        residuals: vec![0.0; count],
        provenance: Provenance::DenseSolve,
    }
}

fn cmd_spectrum(cfg: &ExperimentConfig) -> Result<Artifacts> {
    let model = cfg.build_model()?;
    let params = *model.params();
    let dense = dense_spectrum(&model)?;
    let continuum = continuum_spectrum(&params, model.order());
    let sector = match cfg.scheme {
        SchemeName::Fd => Some(sector_spectrum(&params, model.mesh())?),
        SchemeName::Fem => None,
    };

    let filtered = match cfg.filter_spec() {
        Some(spec) => Some(select_modes(eigen_basis(&dense)?, &model, spec)?),
        None => None,
    };

    let mut files = Vec::new();
    if cfg.outputs.csv {
        files.push(("spectrum-dense.csv".to_string(), spectrum_csv(&dense)));
        if let Some(sector) = &sector {
            files.push(("spectrum-sector.csv".to_string(), spectrum_csv(sector)));
        }
        files.push(("spectrum-continuum.csv".to_string(), spectrum_csv(&continuum)));
        if let Some(f) = &filtered {
            let mut table = String::from("index,re,im,normalized_modulus_sq,retained\n");
            for (i, (l, &keep)) in f
                .basis()
                .values()
                .iter()
                .zip(f.retained_mask().iter())
                .enumerate()
            {
                let kappa = normalized_modulus_sq(&model, *l);
                let _ = writeln!(table, "{i},{},{},{kappa},{keep}", l.re, l.im);
            }
            files.push(("spectrum-partition.csv".to_string(), table));
        }
    }
    if cfg.outputs.svg {
        let svg = match &filtered {
            Some(f) => {
                let mask = f.retained_mask();
                let vals = f.basis().values();
                let kept = subset_spectrum(
                    vals.iter()
                        .zip(mask)
                        .filter_map(|(l, &k)| k.then_some(*l))
                        .collect(),
                );
                let dropped = subset_spectrum(
                    vals.iter()
                        .zip(mask)
                        .filter_map(|(l, &k)| (!k).then_some(*l))
                        .collect(),
                );
                spectrum_scatter_svg(&[
                    ("retained", &kept),
                    ("filtered", &dropped),
                    ("continuum", &continuum),
                ])
            }
            None => {
                let mut series: Vec<(&str, &Spectrum<f64>)> = vec![("dense", &dense)];
                if let Some(sector) = &sector {
                    series.push(("sector", sector));
                }
                series.push(("continuum", &continuum));
                spectrum_scatter_svg(&series)
            }
        };
        files.push(("spectrum.svg".to_string(), svg));
    }

    let mut summary = RunSummary::new(Verb::Spectrum.label(), echo(cfg));
    summary.model = Some(model_block(cfg.n, &model));
    summary.spectrum = Some(spectrum_block(&model, &dense));
    summary.filter = filtered.as_ref().map(filter_block);
    Ok(Artifacts::finish(summary, files, cfg.outputs.json))
}

fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Artifacts> {
    let model = cfg.build_model()?;
    let (ic, t, dt, integrator) = cfg.require_simulation()?;
    let initial_raw = ic_state(&model, ic)?;

    let dense = dense_spectrum(&model)?;
    let filtered = match cfg.filter_spec() {
        Some(spec) => Some(select_modes(eigen_basis(&dense)?, &model, spec)?),
        None => None,
    };
    let initial = match &filtered {
        Some(f) => project_state(f, &initial_raw),
        None => initial_raw,
    };
    let mask: Option<&[bool]> = filtered
        .as_ref()
        .and_then(|f| (!f.keeps_all).then(|| f.retained_mask()));

    let trajectory: Trajectory<f64> = match integrator {
        IntegratorName::Rk4 => integrate(&model, &initial, Integrator::Rk4 { dt }, t)?,
        IntegratorName::ModalExact => match &filtered {
            Some(f) => modal_trajectory(f.basis(), &initial, mask, dt, t)?,
            None => integrate(&model, &initial, Integrator::ModalExact { dt }, t)?,
        },
    };

    // The certificate for the run: the achieved cut level when filtering,
    // otherwise the largest normalized modulus present in the spectrum.
    let gamma_eff = match &filtered {
        Some(f) => f.gamma_effective,
        None => dense
            .values
            .iter()
            .map(|&l| normalized_modulus_sq(&model, l))
            .fold(0.0f64, f64::max),
    };
    let pred = decay_prediction(cfg.c, cfg.l, cfg.xi, gamma_eff)?;

    let trace = energy_trace(&model, &trajectory, pred.delta, FemEnergyVariant::default());
    let fit = fit_decay_rate(&trace.times, &trace.energies)?;
    let e0 = trace.energies[0];
    let mut margin = f64::INFINITY;
    for (ti, ei) in trace.times.iter().zip(trace.energies.iter()) {
        if *ei > 0.0 {
            let bound = pred.amplitude * e0 * (-pred.sigma * ti).exp();
            margin = margin.min(bound / ei);
        }
    }
    let residual = dissipation_residual(&model, &trajectory, DiffStencil::FourthOrder)?;

    let mut files = Vec::new();
    if cfg.outputs.csv {
        files.push(("energy.csv".to_string(), energy_csv(&trace)));
        files.push(("spectrum.csv".to_string(), spectrum_csv(&dense)));
    }
    if cfg.outputs.svg {
        let bound: Vec<f64> = trace
            .times
            .iter()
            .map(|ti| pred.amplitude * e0 * (-pred.sigma * ti).exp())
            .collect();
        let svg = energy_lines_svg(&[
            ("energy", &trace.times, &trace.energies),
            ("certificate", &trace.times, &bound),
        ]);
        files.push(("energy.svg".to_string(), svg));
    }

    let mut summary = RunSummary::new(Verb::Simulate.label(), echo(cfg));
    summary.model = Some(model_block(cfg.n, &model));
    summary.spectrum = Some(spectrum_block(&model, &dense));
    summary.filter = filtered.as_ref().map(filter_block);
    summary.decay = Some(DecayBlock {
        delta: pred.delta,
        sigma_predicted: pred.sigma,
        amplitude: pred.amplitude,
        sigma_fit: fit.sigma,
        fit_used_local_maxima: fit.used_local_maxima,
        envelope_min_margin: margin,
    });
    summary.dissipation = Some(DissipationBlock {
        max_residual: residual,
        stencil: "fourth-order".to_string(),
    });
    summary.energy = Some(EnergyBlock {
        initial: e0,
        final_value: *trace.energies.last().expect("nonempty trace"),
        samples: trace.energies.len(),
    });
    summary.reference = cfg
        .reference
        .map(|r| reference_block(r, pred.sigma));
    Ok(Artifacts::finish(summary, files, cfg.outputs.json))
}

fn reference_block(given: ReferenceValues, sigma_recomputed: f64) -> ReferenceBlock {
    ReferenceBlock {
        sigma_given: given.sigma,
        gamma_given: given.gamma,
        sigma_recomputed,
        sigma_gap: sigma_recomputed - given.sigma,
        gamma_in_unit_interval: given.gamma >= 0.0 && given.gamma < 1.0,
    }
}

/// Largest control-free squared frequency, normalized: h^2 |lambda_max|^2 / c^2.
fn top_modulus_normalized(model: &SemiDiscreteModel<f64>) -> Result<f64> {
    let params = model.params();
    let h = model.spacing();
    let value = match model.scheme() {
        dampedwave::model::Scheme::FiniteDifference => {
            let omega_sq = fd_sine_frequencies(params.wave_speed, h, model.order());
            omega_sq.last().copied().expect("nonempty frequency list")
        }
        dampedwave::model::Scheme::FiniteElement => {
            let (_, report) = fem_undamped_spectrum(params, model.mesh())?;
            report
                .exact_values
                .last()
                .copied()
                .expect("nonempty eigenvalue list")
        }
    };
    Ok(h * h * value / (params.wave_speed * params.wave_speed))
}

fn cmd_observability(cfg: &ObservabilityConfig) -> Result<Artifacts> {
    let rows: Vec<ObservabilityRow> = cfg
        .n_values
        .par_iter()
        .map(|&n| -> Result<ObservabilityRow> {
            let params = PhysicalParams::new(cfg.c, cfg.l, 0.0)?;
            let model = build_model(params, Mesh::new(n)?, cfg.scheme.to_scheme())?;
            let initial = top_mode_state(&model)?;
            let ratio = observability_ratio(&model, &initial, ObsKind::TipVelocity, cfg.t)?;
            Ok(ObservabilityRow {
                n,
                spacing: model.spacing(),
                ratio,
                normalized_top_modulus_sq: top_modulus_normalized(&model)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut files = Vec::new();
    if cfg.outputs.csv {
        let mut table = String::from("n,spacing,observability_ratio,normalized_top_modulus_sq\n");
        for row in &rows {
            let _ = writeln!(
                table,
                "{},{},{},{}",
                row.n, row.spacing, row.ratio, row.normalized_top_modulus_sq
            );
        }
        files.push(("observability.csv".to_string(), table));
    }

    let mut summary = RunSummary::new(Verb::Observability.label(), echo(cfg));
    summary.observability = Some(rows);
    Ok(Artifacts::finish(summary, files, cfg.outputs.json))
}

/// One grid point of the decay table: certificate plus the fitted rate of
/// the matching filtered run.
fn decay_row(cfg: &DecayReportConfig, xi: f64, gamma: f64) -> Result<DecayRow> {
    let pred = decay_prediction(cfg.c, cfg.l, xi, gamma)?;
    let params = PhysicalParams::new(cfg.c, cfg.l, xi)?;
    let model = build_model(params, Mesh::new(cfg.n)?, cfg.scheme.to_scheme())?;
    let dense = dense_spectrum(&model)?;
    let filtered = select_modes(
        eigen_basis(&dense)?,
        &model,
        dampedwave::filter::FilterSpec::Gamma(gamma),
    )?;
    let initial = project_state(&filtered, &ic_state(&model, &cfg.ic)?);
    let mask: Option<&[bool]> = (!filtered.keeps_all).then(|| filtered.retained_mask());
    let trajectory = modal_trajectory(filtered.basis(), &initial, mask, cfg.dt, cfg.t)?;
    let trace = energy_trace(&model, &trajectory, pred.delta, FemEnergyVariant::default());
    let fit = fit_decay_rate(&trace.times, &trace.energies)?;
    Ok(DecayRow {
        scheme: cfg.scheme.to_scheme().label().to_string(),
        xi,
        gamma,
        delta: pred.delta,
        sigma_predicted: pred.sigma,
        sigma_fit: Some(fit.sigma),
        amplitude: pred.amplitude,
    })
}

fn cmd_decay_report(cfg: &DecayReportConfig) -> Result<Artifacts> {
    let grid: Vec<(f64, f64)> = cfg
        .xi_values
        .iter()
        .flat_map(|&xi| cfg.gamma_values.iter().map(move |&g| (xi, g)))
        .collect();
    let mut rows: Vec<DecayRow> = grid
        .par_iter()
        .map(|&(xi, gamma)| decay_row(cfg, xi, gamma))
        .collect::<Result<Vec<_>>>()?;

    // Continuum certificates alongside, one per gain.
    for &xi in &cfg.xi_values {
        let pred = pde_decay_prediction(cfg.c, cfg.l, xi)?;
        rows.push(DecayRow {
            scheme: "pde".to_string(),
            xi,
            gamma: 0.0,
            delta: pred.delta,
            sigma_predicted: pred.sigma,
            sigma_fit: None,
            amplitude: pred.amplitude,
        });
    }

    let mut files = Vec::new();
    if cfg.outputs.csv {
        let mut table = String::from("scheme,xi,gamma,delta,sigma_predicted,sigma_fit,amplitude\n");
        for row in &rows {
            let fit = row.sigma_fit.map(|s| s.to_string()).unwrap_or_default();
            let _ = writeln!(
                table,
                "{},{},{},{},{},{fit},{}",
                row.scheme, row.xi, row.gamma, row.delta, row.sigma_predicted, row.amplitude
            );
        }
        files.push(("decay-report.csv".to_string(), table));
    }

    let mut summary = RunSummary::new(Verb::DecayReport.label(), echo(cfg));
    // The reference, when given, is compared against the first grid point.
    summary.reference = cfg
        .reference
        .map(|r| reference_block(r, rows[0].sigma_predicted));
    summary.decay_table = Some(rows);
    Ok(Artifacts::finish(summary, files, cfg.outputs.json))
}
