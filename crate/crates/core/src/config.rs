//! JSON run configuration for the `protocol` command.
//!
//! ```json
//! {
//!   "hypergraph": {"source": "union_jack", "cells": 1},
//!   "cover": {"method": "generator"},
//!   "protocol": {"kind": "case_study", "k": 1},
//!   "prover": {"kind": "single_bad_copy", "bad": {"kind": "z_error", "qubits": [0, 1, 9]}},
//!   "correctable": {"mode": "zero"},
//!   "trials": 1000,
//!   "seed": 7
//! }
//! ```
//!
//! Unknown keys are rejected everywhere. Errors name the offending field
//! path together with the line and column.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    exact_coloring, greedy_cover, union_jack, validate_cover, Hypergraph, IndependenceCover, DEFAULT_EXACT_LIMIT,
};
use crate::protocol::{ProtocolParams, ProverModel};
use crate::stabilizer::CorrectableSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum HypergraphSource {
    /// Edge-list file, relative to the config file.
    File { path: PathBuf },
    UnionJack { cells: usize },
    Inline { n: usize, edges: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoverSource {
    Greedy {},
    Exact {
        #[serde(default = "default_exact_limit")]
        vertex_limit: usize,
    },
    /// The cover produced by the hypergraph generator.
    Generator {},
    Explicit { classes: Vec<Vec<usize>> },
}

fn default_exact_limit() -> usize {
    DEFAULT_EXACT_LIMIT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProtocolSpec {
    CaseStudy { k: usize },
    Verification { params: ProtocolParams },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub hypergraph: HypergraphSource,
    #[serde(default = "default_cover")]
    pub cover: CoverSource,
    pub protocol: ProtocolSpec,
    pub prover: ProverModel,
    #[serde(default)]
    pub correctable: CorrectableSet,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Fidelity gap for the bad-target statistic.
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_cover() -> CoverSource {
    CoverSource::Greedy {}
}

fn default_trials() -> u64 {
    1
}

fn default_delta() -> f64 {
    0.5
}

/// A configuration with its hypergraph and cover materialized.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub config: RunConfig,
    pub hypergraph: Hypergraph,
    pub cover: IndependenceCover,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let at = if inner.line() > 0 {
                format!(" (line {}, column {})", inner.line(), inner.column())
            } else {
                String::new()
            };
            Error::Config(format!("field `{path}`: {inner}{at}"))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Checks that do not need the hypergraph.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Config(format!("field `{field}`: {msg}")));
        if self.trials == 0 {
            return bad("trials", "must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return bad("delta", format!("{} outside [0, 1]", self.delta));
        }
        match &self.protocol {
            ProtocolSpec::CaseStudy { k } if *k == 0 => bad("protocol.k", "must be at least 1".into()),
            ProtocolSpec::Verification { params } => params
                .validate()
                .or_else(|e| bad("protocol.params", e.to_string())),
            _ => Ok(()),
        }?;
        if let HypergraphSource::UnionJack { cells: 0 } = self.hypergraph {
            return bad("hypergraph.cells", "must be at least 1".into());
        }
        if matches!(self.cover, CoverSource::Generator {}) && !matches!(self.hypergraph, HypergraphSource::UnionJack { .. })
        {
            return bad("cover.method", "`generator` needs a generated hypergraph".into());
        }
        Ok(())
    }

    /// Loads the hypergraph and builds the cover. Relative file paths are
    /// taken from `base_dir`.
    pub fn resolve(self, base_dir: &Path) -> Result<ResolvedRun> {
        let (hypergraph, generated) = match &self.hypergraph {
            HypergraphSource::File { path } => {
                let full = if path.is_absolute() { path.clone() } else { base_dir.join(path) };
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::Config(format!("field `hypergraph.path`: {}: {e}", full.display())))?;
                (Hypergraph::parse(&text)?, None)
            }
            HypergraphSource::UnionJack { cells } => {
                let (h, c) = union_jack(*cells)?;
                (h, Some(c))
            }
            HypergraphSource::Inline { n, edges } => (
                Hypergraph::from_edges(*n, edges.iter().cloned())
                    .map_err(|e| Error::Config(format!("field `hypergraph.edges`: {e}")))?,
                None,
            ),
        };
        let cover = match &self.cover {
            CoverSource::Greedy {} => greedy_cover(&hypergraph),
            CoverSource::Exact { vertex_limit } => exact_coloring(&hypergraph, *vertex_limit)?,
            CoverSource::Generator {} => generated.ok_or_else(|| Error::Config("no generator cover".into()))?,
            CoverSource::Explicit { classes } => IndependenceCover::new(classes.clone()),
        };
        validate_cover(&hypergraph, &cover).map_err(|e| Error::Config(format!("field `cover`: {e}")))?;
        if let ProtocolSpec::Verification { params } = &self.protocol {
            if params.qubits_per_register != hypergraph.num_vertices() {
                return Err(Error::Config(format!(
                    "field `protocol.params.qubits_per_register`: {} but the hypergraph has {} vertices",
                    params.qubits_per_register,
                    hypergraph.num_vertices()
                )));
            }
        }
        Ok(ResolvedRun {
            config: self,
            hypergraph,
            cover,
        })
    }
}
