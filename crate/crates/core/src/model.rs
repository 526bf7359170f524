//! The HMM parameter set λ = (A, B, π) and its stochastic invariants.

use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Absolute tolerance for row sums of stochastic matrices.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Discrete hidden Markov model: `n_states` hidden states, `n_symbols`
/// observable symbols, row-stochastic transition (N x N) and emission
/// (N x M) matrices, and an initial state distribution of length N.
///
/// Construction checks shapes only; [`HmmModel::validate`] checks the
/// probability invariants and reports every violation.
#[derive(Debug, Clone, PartialEq)]
pub struct HmmModel {
    n_states: usize,
    n_symbols: usize,
    transition: Matrix,
    emission: Matrix,
    initial: Vec<f64>,
}

impl HmmModel {
    pub fn new(
        n_states: usize,
        n_symbols: usize,
        transition: Matrix,
        emission: Matrix,
        initial: Vec<f64>,
    ) -> Result<Self> {
        if n_states == 0 || n_symbols == 0 {
            return Err(Error::Dimension(
                "n_states and n_symbols must be positive".into(),
            ));
        }
        if transition.rows() != n_states || transition.cols() != n_states {
            return Err(Error::Dimension(format!(
                "transition matrix is {}x{}, expected {n_states}x{n_states}",
                transition.rows(),
                transition.cols()
            )));
        }
        if emission.rows() != n_states || emission.cols() != n_symbols {
            return Err(Error::Dimension(format!(
                "emission matrix is {}x{}, expected {n_states}x{n_symbols}",
                emission.rows(),
                emission.cols()
            )));
        }
        if initial.len() != n_states {
            return Err(Error::Dimension(format!(
                "initial vector has length {}, expected {n_states}",
                initial.len()
            )));
        }
        Ok(Self {
            n_states,
            n_symbols,
            transition,
            emission,
            initial,
        })
    }

    /// Shape-check and validate in one step.
    pub fn validated(
        n_states: usize,
        n_symbols: usize,
        transition: Matrix,
        emission: Matrix,
        initial: Vec<f64>,
    ) -> Result<Self> {
        let model = Self::new(n_states, n_symbols, transition, emission, initial)?;
        let report = model.validate();
        if report.ok {
            Ok(model)
        } else {
            Err(Error::Validation(report))
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn emission(&self) -> &Matrix {
        &self.emission
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    /// Check every probability invariant: entries in [0, 1], transition and
    /// emission rows summing to 1 within [`ROW_SUM_TOL`], initial vector
    /// summing to 1 within the same tolerance.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        check_entries(&mut violations, self.transition.data(), self.n_states, "A");
        check_entries(&mut violations, self.emission.data(), self.n_symbols, "B");
        for (i, &v) in self.initial.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                violations.push(Violation {
                    location: format!("pi[{i}]"),
                    description: if v < 0.0 {
                        format!("negative probability at pi[{i}]")
                    } else {
                        format!("probability above 1 at pi[{i}]")
                    },
                    measured: v,
                });
            }
        }

        for i in 0..self.n_states {
            let sum: f64 = self.transition.row(i).iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                violations.push(Violation {
                    location: format!("A[{i}]"),
                    description: format!("transition row {i} sums to {sum}"),
                    measured: sum,
                });
            }
        }
        for i in 0..self.n_states {
            let sum: f64 = self.emission.row(i).iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                violations.push(Violation {
                    location: format!("B[{i}]"),
                    description: format!("emission row {i} sums to {sum}"),
                    measured: sum,
                });
            }
        }
        let sum: f64 = self.initial.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            violations.push(Violation {
                location: "pi".into(),
                description: format!("initial vector sums to {sum}"),
                measured: sum,
            });
        }

        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

fn check_entries(violations: &mut Vec<Violation>, data: &[f64], cols: usize, name: &str) {
    for (idx, &v) in data.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            let (i, j) = (idx / cols, idx % cols);
            violations.push(Violation {
                location: format!("{name}[{i}][{j}]"),
                description: if v < 0.0 {
                    format!("negative probability at {name}[{i}][{j}]")
                } else {
                    format!("probability above 1 at {name}[{i}][{j}]")
                },
                measured: v,
            });
        }
    }
}

/// One invariant violation: where, what, and the offending value.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub location: String,
    pub description: String,
    pub measured: f64,
}

/// Outcome of [`HmmModel::validate`]; `ok` iff `violations` is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            write!(f, "OK")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "  {} (measured {:.17})", v.description, v.measured)?;
            }
            Ok(())
        }
    }
}

/// Generate a reproducible random model.
///
/// The scheme is fixed so seeds mean the same thing everywhere: a ChaCha8
/// stream seeded with `seed` yields 64-bit words; each word maps to a
/// uniform draw in (0, 1] via `1 − (w >> 11) / 2^53`; rows are drawn in
/// order (transition rows, then emission rows, then the initial vector) and
/// normalized by their sum. Every entry is strictly positive, which keeps
/// the scaled matrices generic.
pub fn gen_random_model(n_states: usize, n_symbols: usize, seed: u64) -> Result<HmmModel> {
    if n_states == 0 || n_symbols == 0 {
        return Err(Error::Dimension(
            "n_states and n_symbols must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = move || {
        let w = rng.next_u64();
        1.0 - (w >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut stochastic_row = |len: usize| -> Vec<f64> {
        let raw: Vec<f64> = (0..len).map(|_| draw()).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / sum).collect()
    };

    let transition: Vec<Vec<f64>> = (0..n_states).map(|_| stochastic_row(n_states)).collect();
    let emission: Vec<Vec<f64>> = (0..n_states).map(|_| stochastic_row(n_symbols)).collect();
    let initial = stochastic_row(n_states);

    HmmModel::new(
        n_states,
        n_symbols,
        Matrix::from_rows(&transition)?,
        Matrix::from_rows(&emission)?,
        initial,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_transition_validates() {
        let model = HmmModel::new(
            2,
            2,
            Matrix::identity(2),
            mat(&[&[0.5, 0.5], &[0.1, 0.9]]),
            vec![1.0, 0.0],
        )
        .unwrap();
        assert!(model.validate().ok);
    }

    #[test]
    fn bad_row_sum_reported_with_row_index() {
        let model = HmmModel::new(
            2,
            2,
            mat(&[&[0.5, 0.6], &[0.5, 0.5]]),
            mat(&[&[0.5, 0.5], &[0.5, 0.5]]),
            vec![0.5, 0.5],
        )
        .unwrap();
        let report = model.validate();
        assert!(!report.ok);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].location, "A[0]");
        assert!((report.violations[0].measured - 1.1).abs() < 1e-15);
    }

    #[test]
    fn negative_emission_entry_named() {
        let model = HmmModel::new(
            2,
            2,
            mat(&[&[0.5, 0.5], &[0.5, 0.5]]),
            mat(&[&[1.1, -0.1], &[0.5, 0.5]]),
            vec![0.5, 0.5],
        )
        .unwrap();
        let report = model.validate();
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| v.description.contains("negative probability at B[0][1]")));
    }

    #[test]
    fn dimension_mismatch_is_not_a_validation_error() {
        let err = HmmModel::new(
            3,
            2,
            Matrix::identity(2),
            mat(&[&[0.5, 0.5], &[0.5, 0.5]]),
            vec![0.5, 0.5],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_random_model(3, 4, 42).unwrap();
        let b = gen_random_model(3, 4, 42).unwrap();
        assert_eq!(a, b);
        let c = gen_random_model(3, 4, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_model() {
        let m = gen_random_model(1, 1, 7).unwrap();
        assert_eq!(m.transition().get(0, 0), 1.0);
        assert_eq!(m.emission().get(0, 0), 1.0);
        assert_eq!(m.initial()[0], 1.0);
    }

    #[test]
    fn generated_models_validate_with_positive_entries() {
        for seed in 0..50u64 {
            let n = 1 + (seed as usize % 6);
            let m = 1 + (seed as usize * 3 % 5);
            let model = gen_random_model(n, m, seed).unwrap();
            assert!(model.validate().ok, "seed {seed}");
            assert!(model.transition().data().iter().all(|&v| v > 0.0));
            assert!(model.emission().data().iter().all(|&v| v > 0.0));
            assert!(model.initial().iter().all(|&v| v > 0.0));
        }
    }
}
