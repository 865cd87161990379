//! JSON inputs: run configurations and identity case files.

use std::path::PathBuf;

use gwloc_core::cohomology::Expr;
use gwloc_core::engine::{EngineOptions, TwistSpec, TwistSummand};
use gwloc_core::error::Error as CoreError;
use gwloc_core::identities::{ChernReading, IdentityCase, IdentityId};
use gwloc_core::target::{CurveClass, TargetKind, TargetModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parse::{parse_expr, ParseError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Version(u32),
    #[error("{field}: {err}")]
    Expression { field: String, err: ParseError },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
}

/// Input of `compute` and `dump-graphs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    pub target: TargetKind,
    pub class: CurveClass,
    #[serde(default)]
    pub twist: Vec<TwistSummand>,
    #[serde(default)]
    pub insertions: Vec<String>,
    /// Weight-draw seeds; the engine defaults are used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    /// Cache directory; overrides GWLOC_CACHE_DIR.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let c: RunConfig = serde_json::from_str(s)?;
        if c.version != SCHEMA_VERSION {
            return Err(ConfigError::Version(c.version));
        }
        if let Some(seeds) = &c.seeds {
            if seeds.is_empty() {
                return Err(ConfigError::Invalid("seeds must not be empty".into()));
            }
        }
        for (i, s) in c.insertions.iter().enumerate() {
            parse_expr(s).map_err(|err| ConfigError::Expression { field: format!("insertions[{i}]"), err })?;
        }
        Ok(c)
    }

    pub fn model(&self) -> Result<TargetModel, CoreError> {
        TargetModel::build(self.target.clone())
    }

    pub fn twist_spec(&self) -> Option<TwistSpec> {
        (!self.twist.is_empty()).then(|| TwistSpec { summands: self.twist.clone() })
    }

    pub fn engine_options(&self) -> EngineOptions {
        let mut o = EngineOptions::default();
        if let Some(s) = &self.seeds {
            o.seeds = s.clone();
        }
        o
    }
}

/// An identity-suite case file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub identity: String,
    #[serde(default)]
    pub base_dim: u32,
    #[serde(default)]
    pub twists: Vec<i64>,
    #[serde(default)]
    pub degree: i64,
    #[serde(default)]
    pub sigmas: Vec<String>,
    #[serde(default)]
    pub alphas: Vec<String>,
    #[serde(default)]
    pub e: u32,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default)]
    pub reading: ChernReading,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
}

fn one() -> u32 {
    1
}

fn exprs(field: &str, items: &[String]) -> Result<Vec<Expr>, ConfigError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_expr(s).map_err(|err| ConfigError::Expression { field: format!("{field}[{i}]"), err }))
        .collect()
}

impl CaseFile {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let c: CaseFile = serde_json::from_str(s)?;
        if c.version != SCHEMA_VERSION {
            return Err(ConfigError::Version(c.version));
        }
        if IdentityId::parse(&c.identity).is_none() {
            return Err(ConfigError::Invalid(format!("unknown identity {:?}", c.identity)));
        }
        exprs("sigmas", &c.sigmas)?;
        exprs("alphas", &c.alphas)?;
        Ok(c)
    }

    pub fn identity_id(&self) -> IdentityId {
        IdentityId::parse(&self.identity).expect("validated on load")
    }

    /// Build the suite case. Engine-level rejections (such as negative
    /// twists) come back as core errors.
    pub fn to_case(&self) -> Result<Result<IdentityCase, CoreError>, ConfigError> {
        let sigmas = exprs("sigmas", &self.sigmas)?;
        let alphas = exprs("alphas", &self.alphas)?;
        let id = self.identity_id();
        let twists =
            if self.twists.is_empty() && id == IdentityId::PnFibrationDemo { vec![0] } else { self.twists.clone() };
        Ok(IdentityCase::new(id, self.base_dim, twists, self.degree).map(|c| {
            c.with_sigmas(sigmas).with_alphas(alphas).with_e(self.e).with_k(self.k).with_reading(self.reading)
        }))
    }

    pub fn engine_options(&self) -> EngineOptions {
        let mut o = EngineOptions::default();
        if let Some(s) = &self.seeds {
            o.seeds = s.clone();
        }
        o
    }
}
