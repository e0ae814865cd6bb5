//! Machine-readable run summary. Every number here is lifted directly
//! from a library operation; nothing is recomputed in the runner. The
//! serialized form is pinned by `schema/run-summary.schema.json` at the
//! workspace root.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub command: String,
    /// Echo of the parsed configuration, so an artifact directory is
    /// self-describing.
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecayBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dissipation: Option<DissipationBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observability: Option<Vec<ObservabilityRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_table: Option<Vec<DecayRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceBlock>,
    /// Relative paths of every artifact this run wrote.
    pub files: Vec<String>,
}

impl RunSummary {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunSummary {
            command: command.to_string(),
            config,
            model: None,
            spectrum: None,
            filter: None,
            decay: None,
            dissipation: None,
            energy: None,
            observability: None,
            decay_table: None,
            reference: None,
            files: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("summary serializes");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelBlock {
    pub scheme: String,
    pub n: usize,
    /// N + 1 unknowns after eliminating the clamped node.
    pub order: usize,
    pub phase_dim: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumBlock {
    pub count: usize,
    /// Largest real part across the spectrum.
    pub abscissa: f64,
    /// Largest normalized squared modulus h^2|lambda|^2 / (A^2 c^2).
    pub max_normalized_modulus_sq: f64,
    /// Worst relative eigenpair defect measured by the dense route.
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterBlock {
    pub retained_pairs: usize,
    pub retained_modes: usize,
    pub total_modes: usize,
    /// Largest retained normalized squared modulus; the achieved cut level.
    pub gamma_effective: f64,
    /// Largest retained raw squared modulus h^2|lambda|^2.
    pub kappa: f64,
    /// 1-norm condition estimate of the eigenvector basis.
    pub basis_condition: f64,
    pub keeps_all: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayBlock {
    /// Multiplier strength of the certificate.
    pub delta: f64,
    pub sigma_predicted: f64,
    /// Envelope amplitude M: E(t) <= M E(0) exp(-sigma t).
    pub amplitude: f64,
    pub sigma_fit: f64,
    pub fit_used_local_maxima: bool,
    /// min over samples of (certificate envelope) / E(t); >= 1 means the
    /// certificate held at every sample.
    pub envelope_min_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DissipationBlock {
    /// Max defect of dE/dt + xi v'_tip^2 = 0, normalized by E(0)/T.
    pub max_residual: f64,
    pub stencil: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyBlock {
    pub initial: f64,
    #[serde(rename = "final")]
    pub final_value: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservabilityRow {
    pub n: usize,
    pub spacing: f64,
    /// E(0) / integral of the squared tip observation.
    pub ratio: f64,
    /// h^2 |lambda_max|^2 / c^2 for the control-free top mode.
    pub normalized_top_modulus_sq: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayRow {
    pub scheme: String,
    pub xi: f64,
    pub gamma: f64,
    pub delta: f64,
    pub sigma_predicted: f64,
    /// Fitted rate of the matching filtered run; absent on continuum rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_fit: Option<f64>,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceBlock {
    pub sigma_given: f64,
    pub gamma_given: f64,
    pub sigma_recomputed: f64,
    /// sigma_recomputed - sigma_given.
    pub sigma_gap: f64,
    /// Whether the given cut level even lies in [0, 1); out-of-range
    /// references cannot be reproduced by any run.
    pub gamma_in_unit_interval: bool,
}
