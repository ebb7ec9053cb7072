//! Hypergraph-state verification workbench.
//!
//! Builds colorable hypergraph states, runs color-class stabilizer tests,
//! simulates the three-color and general verification protocols against
//! honest, noisy and adversarial provers, and checks their statistical
//! guarantees at desk scale.

pub mod cli;
pub mod config;
pub mod error;
pub mod hypergraph;
pub mod oracle;
pub mod protocol;
pub mod stabilizer;
pub mod state;
pub mod stats;

pub use error::{Error, Result};
pub use hypergraph::{
    exact_chromatic_number, exact_coloring, greedy_cover, union_jack, validate_cover, ColorStats, Hypergraph,
    IndependenceCover,
};
pub use protocol::{
    derive_paper_params, run_case_study, run_verification, ProtocolParams, ProverModel, StateSpec,
};
pub use stabilizer::{acceptability_probability, analytic_pass_probability, run_color_test, CorrectableSet};
pub use state::{build_state, NoiseModel, StateVector};
