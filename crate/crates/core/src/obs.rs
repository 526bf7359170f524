//! Observation sequences and their run-length encoding.

use crate::error::{Error, Result};
use crate::model::HmmModel;

/// Zero-based symbol indices o_1..o_T, with T >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationSequence {
    symbols: Vec<usize>,
}

impl ObservationSequence {
    pub fn new(symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Parse("observation sequence is empty".into()));
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sequences
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Every symbol must fit the paired model's alphabet.
    pub fn validate_for(&self, model: &HmmModel) -> Result<()> {
        for &s in &self.symbols {
            if s >= model.n_symbols() {
                return Err(Error::SymbolRange {
                    symbol: s,
                    n_symbols: model.n_symbols(),
                });
            }
        }
        Ok(())
    }
}

/// Maximal in-order runs (symbol, count) of an observation sequence.
/// Adjacent runs carry distinct symbols and the counts sum to the source
/// length; decoding reproduces the source exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLengthSequence {
    runs: Vec<(usize, usize)>,
}

impl RunLengthSequence {
    pub fn runs(&self) -> &[(usize, usize)] {
        &self.runs
    }

    pub fn decode(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &(symbol, count) in &self.runs {
            out.extend(std::iter::repeat(symbol).take(count));
        }
        out
    }

    pub fn total_len(&self) -> usize {
        self.runs.iter().map(|&(_, c)| c).sum()
    }
}

/// Run-length encode a full observation sequence.
pub fn run_length_encode(obs: &ObservationSequence) -> RunLengthSequence {
    RunLengthSequence {
        runs: encode_slice(obs.symbols()),
    }
}

/// Maximal runs of an arbitrary slice (empty slice gives no runs).
pub fn encode_slice(symbols: &[usize]) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &s in symbols {
        match runs.last_mut() {
            Some((sym, count)) if *sym == s => *count += 1,
            _ => runs.push((s, 1)),
        }
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn obs(symbols: &[usize]) -> ObservationSequence {
        ObservationSequence::new(symbols.to_vec()).unwrap()
    }

    #[test]
    fn basic_runs() {
        assert_eq!(run_length_encode(&obs(&[0, 0, 1])).runs(), &[(0, 2), (1, 1)]);
        assert_eq!(run_length_encode(&obs(&[2])).runs(), &[(2, 1)]);
        assert_eq!(
            run_length_encode(&obs(&[0, 0, 1, 1, 0])).runs(),
            &[(0, 2), (1, 2), (0, 1)]
        );
    }

    #[test]
    fn empty_sequence_rejected() {
        assert!(ObservationSequence::new(vec![]).is_err());
    }

    #[test]
    fn symbol_range_check() {
        let model = crate::model::gen_random_model(2, 3, 0).unwrap();
        assert!(obs(&[0, 1, 2]).validate_for(&model).is_ok());
        let err = obs(&[0, 3]).validate_for(&model).unwrap_err();
        assert!(matches!(err, Error::SymbolRange { symbol: 3, .. }));
    }

    proptest! {
        #[test]
        fn roundtrip_and_invariants(symbols in proptest::collection::vec(0usize..5, 1..1000)) {
            let rle = run_length_encode(&obs(&symbols));
            prop_assert_eq!(rle.decode(), symbols.clone());
            prop_assert_eq!(rle.total_len(), symbols.len());
            for pair in rle.runs().windows(2) {
                prop_assert_ne!(pair[0].0, pair[1].0);
            }
            for &(_, count) in rle.runs() {
                prop_assert!(count >= 1);
            }
        }
    }
}
