//! Run configurations: one JSON document per run, strictly validated
//! against every module precondition before any work starts. Unknown
//! fields are rejected so a typo cannot silently change an experiment.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use dampedwave::dynamics::{mode_state, sine_band_state};
use dampedwave::filter::FilterSpec;
use dampedwave::model::{build_model, Mesh, PhysicalParams, Scheme, SemiDiscreteModel, State};

use crate::error::{CliError, Result};

/// Spatial discretization named in configs: `"fd"` or `"fem"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Fd,
    Fem,
}

impl SchemeName {
    pub fn to_scheme(self) -> Scheme {
        match self {
            SchemeName::Fd => Scheme::FiniteDifference,
            SchemeName::Fem => Scheme::FiniteElement,
        }
    }
}

/// Time integrator named in configs: `"rk4"` or `"modal-exact"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorName {
    #[default]
    Rk4,
    ModalExact,
}

/// Mode retention rule: `{"mode": "gamma", "value": 0.25}` keeps every
/// conjugate pair at or below the normalized cut, `{"mode": "pair_count",
/// "value": 10}` keeps exactly that many lowest-frequency pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum FilterConfig {
    Gamma(f64),
    PairCount(usize),
}

/// Initial data selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IcConfig {
    /// Sum of interior sine profiles k_min..=k_max scaled by `amplitude`,
    /// velocity set equal to the displacement.
    SineBand {
        k_min: usize,
        k_max: usize,
        amplitude: f64,
    },
    /// k-th control-free mode (1-based), unit displacement, zero velocity.
    Mode { k: usize },
    /// Vectors supplied in a JSON file `{"displacement": [...], "velocity":
    /// [...]}`, both of length N + 1.
    Custom { path: String },
}

fn default_true() -> bool {
    true
}

/// Which artifact families a run writes; all on by default.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFlags {
    #[serde(default = "default_true")]
    pub csv: bool,
    #[serde(default = "default_true")]
    pub json: bool,
    #[serde(default = "default_true")]
    pub svg: bool,
}

impl Default for OutputFlags {
    fn default() -> Self {
        OutputFlags {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

/// Externally published decay figures to print a side-by-side discrepancy
/// report against; they are echoed and compared, never fed into formulas.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValues {
    pub sigma: f64,
    pub gamma: f64,
}

/// One spectrum or simulation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeName,
    /// Interior mesh nodes N; the spacing is h = L / (N + 1).
    pub n: usize,
    pub c: f64,
    pub l: f64,
    pub xi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ic: Option<IcConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorName>,
    #[serde(default)]
    pub outputs: OutputFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceValues>,
}

/// Observability table over a list of mesh sizes; the system is always
/// control-free here (the ratio is only defined at zero gain).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservabilityConfig {
    pub scheme: SchemeName,
    pub n_values: Vec<usize>,
    pub c: f64,
    pub l: f64,
    /// Observation horizon; must exceed the round-trip time 2L/c.
    pub t: f64,
    #[serde(default)]
    pub outputs: OutputFlags,
}

/// Decay-rate table over a (gain, cut level) grid, with one fitted rate
/// per grid point and the continuum prediction alongside.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayReportConfig {
    pub scheme: SchemeName,
    pub n: usize,
    pub c: f64,
    pub l: f64,
    pub xi_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub ic: IcConfig,
    pub t: f64,
    pub dt: f64,
    #[serde(default)]
    pub outputs: OutputFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceValues>,
}

pub fn parse_config<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Config(msg.into()))
}

/// Maps a model-assembly rejection to a configuration error: anything the
/// constructors refuse was wrong in the input document, not discovered
/// mid-computation.
fn as_config(e: dampedwave::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl ExperimentConfig {
    /// Validates the physical block and assembles the model.
    pub fn build_model(&self) -> Result<SemiDiscreteModel<f64>> {
        let params = PhysicalParams::new(self.c, self.l, self.xi).map_err(as_config)?;
        let mesh = Mesh::new(self.n).map_err(as_config)?;
        build_model(params, mesh, self.scheme.to_scheme()).map_err(as_config)
    }

    /// Checks every field any command might consume; commands additionally
    /// require their own fields via [`ExperimentConfig::require_simulation`].
    pub fn validate(&self) -> Result<()> {
        self.build_model()?;
        if let Some(filter) = self.filter {
            match filter {
                FilterConfig::Gamma(g) => {
                    if !(g > 0.0 && g <= 1.0) {
                        return config_err(format!("filter gamma must lie in (0, 1], got {g}"));
                    }
                }
                FilterConfig::PairCount(m) => {
                    if m == 0 || m > self.n + 1 {
                        return config_err(format!(
                            "filter pair count must lie in 1..={}, got {m}",
                            self.n + 1
                        ));
                    }
                }
            }
        }
        if let Some(t) = self.t {
            if !(t.is_finite() && t > 0.0) {
                return config_err(format!("horizon t must be positive, got {t}"));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return config_err(format!("step dt must be positive, got {dt}"));
            }
        }
        if let (Some(t), Some(dt)) = (self.t, self.dt) {
            if dt > t {
                return config_err(format!("step dt = {dt} exceeds horizon t = {t}"));
            }
        }
        if let Some(IcConfig::SineBand { k_min, k_max, .. }) = self.ic {
            if k_min == 0 || k_min > k_max {
                return config_err(format!(
                    "sine band needs 1 <= k_min <= k_max, got {k_min}..{k_max}"
                ));
            }
        }
        if let Some(IcConfig::Mode { k }) = self.ic {
            if k == 0 || k > self.n + 1 {
                return config_err(format!("mode index {k} out of range 1..={}", self.n + 1));
            }
        }
        Ok(())
    }

    /// Simulation runs need initial data and a sampling grid.
    pub fn require_simulation(&self) -> Result<(&IcConfig, f64, f64, IntegratorName)> {
        let ic = match &self.ic {
            Some(ic) => ic,
            None => return config_err("simulate needs an \"ic\" block"),
        };
        let t = match self.t {
            Some(t) => t,
            None => return config_err("simulate needs a horizon \"t\""),
        };
        let dt = match self.dt {
            Some(dt) => dt,
            None => return config_err("simulate needs a step \"dt\""),
        };
        Ok((ic, t, dt, self.integrator.unwrap_or_default()))
    }

    pub fn filter_spec(&self) -> Option<FilterSpec<f64>> {
        self.filter.map(|f| match f {
            FilterConfig::Gamma(g) => FilterSpec::Gamma(g),
            FilterConfig::PairCount(m) => FilterSpec::PairCount(m),
        })
    }
}

impl ObservabilityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return config_err("observability needs a nonempty \"n_values\" list");
        }
        for &n in &self.n_values {
            Mesh::new(n).map_err(as_config)?;
        }
        let params = PhysicalParams::new(self.c, self.l, 0.0).map_err(as_config)?;
        let round_trip = 2.0 * params.length / params.wave_speed;
        if !(self.t.is_finite() && self.t > round_trip) {
            return config_err(format!(
                "observation horizon t = {} must exceed the round-trip time {round_trip}",
                self.t
            ));
        }
        Ok(())
    }
}

impl DecayReportConfig {
    pub fn validate(&self) -> Result<()> {
        Mesh::new(self.n).map_err(as_config)?;
        PhysicalParams::new(self.c, self.l, 0.0).map_err(as_config)?;
        if self.xi_values.is_empty() || self.gamma_values.is_empty() {
            return config_err("decay-report needs nonempty \"xi_values\" and \"gamma_values\"");
        }
        for &xi in &self.xi_values {
            if !(xi.is_finite() && xi > 0.0 && xi < self.c) {
                return config_err(format!("grid gain xi = {xi} must lie in (0, c = {})", self.c));
            }
        }
        for &g in &self.gamma_values {
            if !(g.is_finite() && g > 0.0 && g < 1.0) {
                return config_err(format!("grid cut gamma = {g} must lie in (0, 1)"));
            }
        }
        if !(self.t.is_finite() && self.t > 0.0 && self.dt.is_finite() && self.dt > 0.0) {
            return config_err(format!(
                "horizon t = {} and step dt = {} must be positive",
                self.t, self.dt
            ));
        }
        if self.dt > self.t {
            return config_err(format!("step dt = {} exceeds horizon t = {}", self.dt, self.t));
        }
        Ok(())
    }
}

/// Payload of a `custom` initial-data file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomIc {
    displacement: Vec<f64>,
    velocity: Vec<f64>,
}

/// Materializes configured initial data for a model.
pub fn ic_state(model: &SemiDiscreteModel<f64>, ic: &IcConfig) -> Result<State<f64>> {
    match ic {
        IcConfig::SineBand {
            k_min,
            k_max,
            amplitude,
        } => Ok(sine_band_state(model, *k_min, *k_max, *amplitude)?),
        IcConfig::Mode { k } => Ok(mode_state(model, *k)?),
        IcConfig::Custom { path } => {
            let text = fs::read_to_string(Path::new(path)).map_err(|e| {
                CliError::Config(format!("cannot read initial data file {path}: {e}"))
            })?;
            let data: CustomIc = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("malformed initial data file {path}: {e}"))
            })?;
            let order = model.order();
            if data.displacement.len() != order || data.velocity.len() != order {
                return config_err(format!(
                    "initial data in {path} must have {order} entries per vector, got {} and {}",
                    data.displacement.len(),
                    data.velocity.len()
                ));
            }
            Ok(State {
                displacement: data.displacement,
                velocity: data.velocity,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":0.5}"#.to_string()
    }

    #[test]
    fn minimal_config_parses_and_validates() {
        let cfg: ExperimentConfig = parse_config(&minimal()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.scheme, SchemeName::Fd);
        assert!(cfg.outputs.csv && cfg.outputs.json && cfg.outputs.svg);
        assert!(cfg.filter.is_none());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":0.5,"xl":3}"#;
        let err = parse_config::<ExperimentConfig>(text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("xl"));
    }

    #[test]
    fn filter_and_ic_shapes_round_trip() {
        let text = r#"{
            "scheme": "fem", "n": 30, "c": 1.0, "l": 1.0, "xi": 0.9,
            "filter": {"mode": "pair_count", "value": 10},
            "ic": {"kind": "sine_band", "k_min": 20, "k_max": 30, "amplitude": 0.001},
            "t": 20.0, "dt": 0.01, "integrator": "modal-exact"
        }"#;
        let cfg: ExperimentConfig = parse_config(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.filter, Some(FilterConfig::PairCount(10)));
        let (_, t, dt, integ) = cfg.require_simulation().unwrap();
        assert_eq!((t, dt), (20.0, 0.01));
        assert_eq!(integ, IntegratorName::ModalExact);
        let echoed = serde_json::to_value(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_value(echoed).unwrap();
        assert_eq!(back.filter, cfg.filter);
        assert_eq!(back.ic, cfg.ic);
    }

    #[test]
    fn preconditions_are_checked_before_any_work() {
        for bad in [
            r#"{"scheme":"fd","n":1,"c":1.0,"l":1.0,"xi":0.5}"#,
            r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":1.0}"#,
            r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":0.5,"filter":{"mode":"gamma","value":0.0}}"#,
            r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":0.5,"filter":{"mode":"pair_count","value":12}}"#,
            r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":0.5,"t":-2.0}"#,
            r#"{"scheme":"fd","n":10,"c":1.0,"l":1.0,"xi":0.5,"ic":{"kind":"mode","k":12}}"#,
        ] {
            let cfg: ExperimentConfig = parse_config(bad).unwrap();
            let err = cfg.validate().unwrap_err();
            assert_eq!(err.exit_code(), 2, "accepted: {bad}");
        }
    }

    #[test]
    fn simulation_fields_are_required_for_simulate() {
        let cfg: ExperimentConfig = parse_config(&minimal()).unwrap();
        let err = cfg.require_simulation().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn custom_ic_length_is_enforced() {
        let dir = std::env::temp_dir().join("dampedwave-cli-ic-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ic.json");
        std::fs::write(&path, r#"{"displacement":[1.0,2.0],"velocity":[0.0,0.0]}"#).unwrap();
        let cfg: ExperimentConfig = parse_config(&minimal()).unwrap();
        let model = cfg.build_model().unwrap();
        let ic = IcConfig::Custom {
            path: path.to_string_lossy().into_owned(),
        };
        let err = ic_state(&model, &ic).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        std::fs::remove_file(&path).ok();
    }
}
