use thiserror::Error;

/// Unified error type for model assembly, spectral computations, filtering,
/// and time integration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh needs at least 2 interior nodes, got N = {n}")]
    MeshTooCoarse { n: usize },

    #[error("invalid physical parameters: {reason}")]
    InvalidParameter { reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("feedback gain out of range for {context}: need {requirement}, got xi = {xi}")]
    GainOutOfRange {
        context: &'static str,
        requirement: &'static str,
        xi: f64,
    },

    #[error("dense eigensolver exceeded {cap} iterations at order {order}; {converged} eigenvalues converged")]
    EigenNonConvergence {
        order: usize,
        cap: usize,
        converged: usize,
        /// Eigenvalues recovered before the cap, as (re, im).
        partial: Vec<(f64, f64)>,
    },

    #[error("dense eigensolve refused: order {order} exceeds the cost guard {guard}")]
    DenseSizeGuard { order: usize, guard: usize },

    #[error("eigenpair residual {residual:.3e} exceeds {tolerance:.3e} at eigenvalue index {index}")]
    ResidualTooLarge {
        index: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("fixed-point iteration in sector {sector} did not contract within {iterations} iterations (last step {last_step:.3e})")]
    SectorNonConvergence {
        sector: usize,
        iterations: usize,
        last_step: f64,
    },

    #[error("eigenvalue matching failed: {unmatched} of {total} eigenvalues had no partner within relative {cap:.1e}")]
    MatchingFailed {
        unmatched: usize,
        total: usize,
        cap: f64,
    },

    #[error("eigenbasis too ill-conditioned: estimate {cond:.3e} exceeds 1e12")]
    IllConditionedBasis { cond: f64 },

    #[error("filter retains no modes: gamma = {gamma} lies below the smallest normalized modulus {smallest}")]
    FilterTooAggressive { gamma: f64, smallest: f64 },

    #[error("retained pair count {m} out of range 1..={max}")]
    PairCountOutOfRange { m: usize, max: usize },

    #[error("integration unstable: energy grew {growth:.2}x; reduce the step to dt <= {suggested_dt:.3e} (h/(5c))")]
    StepSizeUnstable { growth: f64, suggested_dt: f64 },

    #[error("observation horizon T = {t} must exceed the round-trip time 2L/c = {round_trip}")]
    HorizonTooShort { t: f64, round_trip: f64 },

    #[error("decay fit needs positive energies; found E = {value:.3e} inside the fit window")]
    NonPositiveEnergy { value: f64 },

    #[error("singular matrix encountered in {context} (pivot {pivot:.3e} at step {step})")]
    Singular {
        context: &'static str,
        pivot: f64,
        step: usize,
    },

    #[error("spectrum incomplete: expected {expected} eigenvalues, got {actual}")]
    IncompleteSpectrum { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
