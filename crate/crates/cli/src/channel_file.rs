//! JSON channel files.
//!
//! ```json
//! {"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]], "name": "identity"}
//! ```
//!
//! Each Kraus operator is a list of rows, each entry an `[re, im]` pair.

use std::collections::BTreeMap;
use std::path::Path;

use chanint::{Complex, ComplexMatrix, DensityMatrix, KrausChannel};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(#[from] chanint::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub state: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Syntax problems become `Parse` (with position); well-formed JSON that
/// does not fit the schema becomes `Schema`.
fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, FileError> {
    let value: Value = serde_json::from_str(text).map_err(|e| FileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    serde_json::from_value(value).map_err(|e| FileError::Schema(e.to_string()))
}

pub fn read_text(path: &Path) -> Result<Vec<u8>, FileError> {
    std::fs::read(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl ChannelFile {
    pub fn from_channel(ch: &KrausChannel, name: Option<String>) -> Self {
        let kraus = ch
            .ops()
            .iter()
            .map(|op| {
                (0..op.rows())
                    .map(|i| op.row(i).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            dim: ch.dim(),
            kraus,
            name,
            metadata: None,
        }
    }

    /// Builds the channel, keeping the Kraus order of the file.
    pub fn to_channel(&self) -> Result<KrausChannel, FileError> {
        if self.dim == 0 {
            return Err(FileError::Schema("dim must be positive".into()));
        }
        if self.kraus.is_empty() {
            return Err(FileError::Schema(
                "kraus must list at least one operator".into(),
            ));
        }
        let mut ops = Vec::with_capacity(self.kraus.len());
        for (k, rows) in self.kraus.iter().enumerate() {
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(FileError::Schema(format!(
                    "kraus[{k}] is not a {0}x{0} matrix",
                    self.dim
                )));
            }
            let data = rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex::new(re, im))
                .collect();
            ops.push(ComplexMatrix::from_row_major(self.dim, self.dim, data)?);
        }
        Ok(KrausChannel::validate(ops, self.dim)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("channel files always serialize");
        s.push('\n');
        s
    }
}

/// Parses and validates channel JSON text.
pub fn parse_channel(text: &str) -> Result<KrausChannel, FileError> {
    from_json::<ChannelFile>(text)?.to_channel()
}

pub fn parse_channel_file(text: &str) -> Result<ChannelFile, FileError> {
    let file = from_json::<ChannelFile>(text)?;
    file.to_channel()?;
    Ok(file)
}

/// Reads a pure state; the vector must already have unit norm to within
/// 1e-9 and is then renormalized exactly.
pub fn parse_state(text: &str) -> Result<DensityMatrix, FileError> {
    let file: StateFile = from_json(text)?;
    if file.state.is_empty() {
        return Err(FileError::Schema("state must not be empty".into()));
    }
    let v: Vec<Complex> = file
        .state
        .iter()
        .map(|&[re, im]| Complex::new(re, im))
        .collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FileError::Validation(chanint::Error::NonFinite));
    }
    let norm = chanint::numerics::vec_norm(&v);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(FileError::Validation(chanint::Error::InvalidState(
            format!("state vector norm {norm} differs from 1 by more than 1e-9"),
        )));
    }
    let unit: Vec<Complex> = v.iter().map(|z| z / norm).collect();
    Ok(DensityMatrix::pure(&unit)?)
}
