//! Configuration-driven experiment runner for growthlab.

pub mod config;
pub mod runner;

pub use config::{list_presets, Diagnostic, Experiment, ExperimentConfig};
pub use runner::{exit_code, run, Manifest, Status, EXIT_BUDGET, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
