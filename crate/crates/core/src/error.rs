//! Error type shared across the crate.

use crate::model::ValidationReport;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Declared dimensions and actual shapes disagree.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// The model parses but violates a stochastic-matrix invariant.
    #[error("model validation failed:\n{0}")]
    Validation(ValidationReport),

    /// Malformed input text (model file, observation file, CLI argument).
    #[error("parse error: {0}")]
    Parse(String),

    /// Observation symbol outside the model's alphabet.
    #[error("symbol {symbol} out of range for a model with {n_symbols} symbols")]
    SymbolRange { symbol: usize, n_symbols: usize },

    /// Matrix is numerically singular under partial pivoting.
    #[error("matrix is numerically singular (pivot {pivot:.3e} below {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    /// QR iteration did not settle within the budget.
    #[error("eigenvalue iteration failed to converge for a {size}x{size} matrix within {budget} iterations per eigenvalue")]
    Convergence { size: usize, budget: usize },

    /// Imaginary residue left after a diagonalized power of a real matrix.
    #[error("imaginary residue {residue:.3e} exceeds the 1e-9 quality bound; the factorization is unreliable")]
    NumericQuality { residue: f64 },

    /// Direct enumeration refused: N^T exceeds the configured cap.
    #[error("direct enumeration needs {required} state sequences, above the cap of {cap}; rerun with --cap {required} or higher")]
    CapExceeded { required: u128, cap: u64 },

    /// Closed-form operation count does not fit in 64 bits.
    #[error("operation count overflow computing {0}")]
    CountOverflow(&'static str),

    /// Failure attributed to one scaled matrix.
    #[error("symbol {symbol}: {source}")]
    AtSymbol {
        symbol: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wrap an error with the observation-symbol index it belongs to.
    pub fn at_symbol(self, symbol: usize) -> Self {
        Error::AtSymbol {
            symbol,
            source: Box::new(self),
        }
    }
}
