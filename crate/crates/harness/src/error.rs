use std::path::PathBuf;

use chromatic_pac::bounds::BoundError;
use chromatic_pac::covers::CoversError;
use chromatic_pac::depgraph::{CoverError, GraphError};
use chromatic_pac::gibbs::GibbsError;
use chromatic_pac::klcore::KlError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Gibbs(#[from] GibbsError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Covers(#[from] CoversError),
    #[error(transparent)]
    Kl(#[from] KlError),
}

/// Variant name of a `Debug` rendering, e.g. `InvalidDelta(2.0)` gives
/// `InvalidDelta`.
fn variant_name<T: std::fmt::Debug>(value: &T) -> String {
    let text = format!("{value:?}");
    let end = text
        .find(|c: char| !(c.is_alphanumeric() || c == '_'))
        .unwrap_or(text.len());
    text[..end].to_string()
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Qualified name such as `BoundError::InvalidDelta`, used in CLI
    /// messages.
    pub fn component(&self) -> String {
        match self {
            HarnessError::Io { .. } => "IoError".into(),
            HarnessError::Parse { .. } => "ParseError".into(),
            HarnessError::Config(_) => "ConfigError".into(),
            HarnessError::Csv(_) => "CsvError".into(),
            HarnessError::Json(_) => "JsonError".into(),
            HarnessError::Gibbs(e) => format!("GibbsError::{}", variant_name(e)),
            HarnessError::Bound(e) => format!("BoundError::{}", variant_name(e)),
            HarnessError::Graph(e) => format!("GraphError::{}", variant_name(e)),
            HarnessError::Cover(e) => format!("CoverError::{}", variant_name(e)),
            HarnessError::Covers(e) => format!("CoversError::{}", variant_name(e)),
            HarnessError::Kl(e) => format!("KlError::{}", variant_name(e)),
        }
    }
}
