//! Experiment runner around the `dampedwave` library: JSON-configured
//! spectrum, simulation, observability, and decay-rate commands with
//! deterministic CSV, JSON, and SVG artifacts.
//!
//! The binary is a thin shell over this crate; tests drive the same code
//! in process.

pub mod config;
pub mod error;
pub mod presets;
pub mod run;
pub mod schema_check;
pub mod summary;

pub use error::CliError;
pub use run::{run, write_artifacts, Artifacts, FormatChoice, Verb};
