//! On-disk formats.
//!
//! Model files are JSON documents with fields `n_states`, `n_symbols`,
//! `transition` (N rows of N numbers), `emission` (N rows of M numbers),
//! and `initial` (N numbers). Observation files are whitespace- or
//! comma-separated zero-based symbol indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::HmmModel;
use crate::obs::ObservationSequence;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    n_states: usize,
    n_symbols: usize,
    transition: Vec<Vec<f64>>,
    emission: Vec<Vec<f64>>,
    initial: Vec<f64>,
}

/// Parse a model document without checking the stochastic invariants.
/// Syntax and shape problems are still errors.
pub fn parse_model_unvalidated(text: &str) -> Result<HmmModel> {
    let file: ModelFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("model file: {e}")))?;
    HmmModel::new(
        file.n_states,
        file.n_symbols,
        Matrix::from_rows(&file.transition)?,
        Matrix::from_rows(&file.emission)?,
        file.initial,
    )
}

/// Parse and validate a model document.
pub fn parse_model(text: &str) -> Result<HmmModel> {
    let model = parse_model_unvalidated(text)?;
    let report = model.validate();
    if report.ok {
        Ok(model)
    } else {
        Err(Error::Validation(report))
    }
}

/// Serialize a model to its file format. Numbers round-trip exactly; the
/// field order is fixed, so equal models produce identical bytes.
pub fn serialize_model(model: &HmmModel) -> String {
    let file = ModelFile {
        n_states: model.n_states(),
        n_symbols: model.n_symbols(),
        transition: model.transition().to_nested(),
        emission: model.emission().to_nested(),
        initial: model.initial().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("model serialization cannot fail");
    text.push('\n');
    text
}

/// Parse an observation sequence from whitespace- or comma-separated
/// zero-based integers.
pub fn parse_observations(text: &str) -> Result<ObservationSequence> {
    let mut symbols = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == ',') {
        if token.is_empty() {
            continue;
        }
        let symbol: usize = token
            .parse()
            .map_err(|_| Error::Parse(format!("invalid symbol index {token:?}")))?;
        symbols.push(symbol);
    }
    ObservationSequence::new(symbols)
}

pub fn read_model(path: &std::path::Path) -> Result<HmmModel> {
    parse_model(&std::fs::read_to_string(path)?)
}

pub fn read_observations(path: &std::path::Path) -> Result<ObservationSequence> {
    parse_observations(&std::fs::read_to_string(path)?)
}
