//! Four interchangeable evaluators for the observation-sequence
//! probability P(O|λ).
//!
//! * `direct`  — full enumeration of the N^T hidden state sequences,
//!   (2T−1)·N^T multiplications and N^T−1 additions by construction.
//! * `forward` — the scaled forward recursion, used as the numerically
//!   robust reference.
//! * `chain`   — left-to-right vector-matrix products through the
//!   symbol-scaled transition matrices A_k.
//! * `diag`    — run-length powers A_k^l computed through cached
//!   eigenfactorizations, with naive powering as the fallback for
//!   defective matrices.
//!
//! All four share one result contract and count every multiplication and
//! addition they perform.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{
    diagonalize, mat_mul, matrix_power_diag, matrix_power_naive, DiagFactorization, DiagOutcome,
    Matrix, OpCounter,
};
use crate::model::HmmModel;
use crate::obs::{encode_slice, ObservationSequence};

/// Default cap on the number of enumerated state sequences (N^T) for the
/// direct method.
pub const DEFAULT_DIRECT_CAP: u64 = 100_000_000;

/// Evaluation method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Direct,
    Forward,
    Chain,
    DiagPower,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Direct,
        Method::Forward,
        Method::Chain,
        Method::DiagPower,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Forward => "forward",
            Method::Chain => "chain",
            Method::DiagPower => "diag",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "forward" => Ok(Method::Forward),
            "chain" => Ok(Method::Chain),
            "diag" => Ok(Method::DiagPower),
            other => Err(Error::Parse(format!(
                "unknown method {other:?} (expected direct, forward, chain, or diag)"
            ))),
        }
    }
}

/// Numeric side channel of an evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Largest imaginary magnitude discarded by diagonalized powers.
    pub max_imag_residue: f64,
    /// Symbols whose powers fell back to repeated multiplication.
    pub fallbacks_used: Vec<usize>,
    /// Set when the probability dropped below the smallest positive normal.
    pub underflow_flag: bool,
    /// ln P(O|λ); exact under rescaling for the forward method, ln of the
    /// computed probability otherwise.
    pub log_probability: f64,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            max_imag_residue: 0.0,
            fallbacks_used: Vec::new(),
            underflow_flag: false,
            log_probability: f64::NEG_INFINITY,
        }
    }
}

/// P(O|λ) plus the method that produced it, its operation counts, and
/// numeric diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub probability: f64,
    pub method: Method,
    pub counter: OpCounter,
    pub diagnostics: Diagnostics,
}

impl EvaluationResult {
    fn new(probability: f64, method: Method, counter: OpCounter) -> Self {
        let mut diagnostics = Diagnostics::default();
        diagnostics.log_probability = probability.ln();
        diagnostics.underflow_flag = probability < f64::MIN_POSITIVE;
        Self {
            probability,
            method,
            counter,
            diagnostics,
        }
    }
}

/// The per-symbol scaled transition matrices A_k (column j of A times
/// b_j(k)) with their cached factorizations; `None` marks a numerically
/// defective matrix that downstream powering handles naively.
#[derive(Debug, Clone)]
pub struct ScaledMatrixSet {
    matrices: Vec<Matrix>,
    factorizations: Vec<Option<DiagFactorization>>,
}

impl ScaledMatrixSet {
    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, symbol: usize) -> &Matrix {
        &self.matrices[symbol]
    }

    pub fn factorization(&self, symbol: usize) -> Option<&DiagFactorization> {
        self.factorizations[symbol].as_ref()
    }

    /// Symbols whose scaled matrix was rejected as defective.
    pub fn defective_symbols(&self) -> Vec<usize> {
        self.factorizations
            .iter()
            .enumerate()
            .filter_map(|(k, f)| f.is_none().then_some(k))
            .collect()
    }
}

/// Build A_k for one symbol; N^2 multiplications.
fn scaled_matrix(model: &HmmModel, symbol: usize, counter: &mut OpCounter) -> Matrix {
    let n = model.n_states();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            counter.mul();
            out.set(i, j, model.transition().get(i, j) * model.emission().get(j, symbol));
        }
    }
    out
}

/// Precompute all M scaled matrices and their factorizations.
///
/// Construction costs N^2 multiplications per symbol on the counter; the
/// factorizations are precomputation and not tallied. Eigensolver failures
/// carry the symbol index.
pub fn build_scaled_set(model: &HmmModel, counter: &mut OpCounter) -> Result<ScaledMatrixSet> {
    ensure_valid(model)?;
    let mut matrices = Vec::with_capacity(model.n_symbols());
    let mut factorizations = Vec::with_capacity(model.n_symbols());
    for k in 0..model.n_symbols() {
        let a_k = scaled_matrix(model, k, counter);
        let outcome = diagonalize(&a_k).map_err(|e| e.at_symbol(k))?;
        factorizations.push(match outcome {
            DiagOutcome::Diagonalizable(f) => Some(f),
            DiagOutcome::NotDiagonalizable { .. } => None,
        });
        matrices.push(a_k);
    }
    Ok(ScaledMatrixSet {
        matrices,
        factorizations,
    })
}

/// Element-wise product π_i · b_i(o_1); N multiplications.
pub fn initial_vector(model: &HmmModel, o1: usize, counter: &mut OpCounter) -> Vec<f64> {
    (0..model.n_states())
        .map(|i| {
            counter.mul();
            model.initial()[i] * model.emission().get(i, o1)
        })
        .collect()
}

fn ensure_valid(model: &HmmModel) -> Result<()> {
    let report = model.validate();
    if report.ok {
        Ok(())
    } else {
        Err(Error::Validation(report))
    }
}

fn ensure_inputs(model: &HmmModel, obs: &ObservationSequence) -> Result<()> {
    ensure_valid(model)?;
    obs.validate_for(model)
}

/// Direct enumeration over all N^T hidden state sequences.
///
/// Each sequence contributes π_{q1}·b_{q1}(o1)·∏ a_{q(t−1)q(t)}·b_{qt}(ot),
/// exactly 2T−1 multiplications; the N^T terms are summed with N^T − 1
/// additions. Refuses to run when N^T exceeds `cap`.
pub fn eval_direct_with_cap(
    model: &HmmModel,
    obs: &ObservationSequence,
    counter: &mut OpCounter,
    cap: u64,
) -> Result<EvaluationResult> {
    ensure_inputs(model, obs)?;
    let n = model.n_states();
    let t = obs.len();
    let sequences = (n as u128)
        .checked_pow(t as u32)
        .ok_or(Error::CapExceeded {
            required: u128::MAX,
            cap,
        })?;
    if sequences > cap as u128 {
        return Err(Error::CapExceeded {
            required: sequences,
            cap,
        });
    }

    let symbols = obs.symbols();
    let a = model.transition();
    let b = model.emission();
    let pi = model.initial();

    let mut states = vec![0usize; t];
    let mut total = 0.0f64;
    let mut first = true;
    loop {
        counter.mul();
        let mut p = pi[states[0]] * b.get(states[0], symbols[0]);
        for step in 1..t {
            counter.mul();
            p *= a.get(states[step - 1], states[step]);
            counter.mul();
            p *= b.get(states[step], symbols[step]);
        }
        if first {
            total = p;
            first = false;
        } else {
            counter.add();
            total += p;
        }

        // Odometer increment over the state tuple.
        let mut pos = t;
        loop {
            if pos == 0 {
                return Ok(EvaluationResult::new(total, Method::Direct, *counter));
            }
            pos -= 1;
            states[pos] += 1;
            if states[pos] < n {
                break;
            }
            states[pos] = 0;
        }
    }
}

/// [`eval_direct_with_cap`] at the default cap.
pub fn eval_direct(
    model: &HmmModel,
    obs: &ObservationSequence,
    counter: &mut OpCounter,
) -> Result<EvaluationResult> {
    eval_direct_with_cap(model, obs, counter, DEFAULT_DIRECT_CAP)
}

/// Scaled forward recursion.
///
/// The state distribution is renormalized each step and the log of the
/// accumulated scale is carried exactly, so long sequences neither
/// underflow nor overflow; when the final probability is below the
/// smallest positive normal it is reported as 0 with the underflow flag
/// set and the log-probability still exact.
pub fn eval_forward(
    model: &HmmModel,
    obs: &ObservationSequence,
    counter: &mut OpCounter,
) -> Result<EvaluationResult> {
    ensure_inputs(model, obs)?;
    let n = model.n_states();
    let symbols = obs.symbols();
    let a = model.transition();
    let b = model.emission();

    let mut alpha = initial_vector(model, symbols[0], counter);
    let mut log_scale = 0.0f64;
    let mut structurally_zero = false;

    for step in 0..symbols.len() {
        if step > 0 {
            let ot = symbols[step];
            let mut next = vec![0.0f64; n];
            for (j, slot) in next.iter_mut().enumerate() {
                counter.mul();
                let mut acc = alpha[0] * a.get(0, j);
                for (i, &alpha_i) in alpha.iter().enumerate().skip(1) {
                    counter.mul();
                    counter.add();
                    acc += alpha_i * a.get(i, j);
                }
                counter.mul();
                *slot = acc * b.get(j, ot);
            }
            alpha = next;
        }

        let mut scale = alpha[0];
        for &v in &alpha[1..] {
            counter.add();
            scale += v;
        }
        if scale == 0.0 {
            structurally_zero = true;
            break;
        }
        let inv = 1.0 / scale;
        for v in &mut alpha {
            counter.mul();
            *v *= inv;
        }
        log_scale += scale.ln();
    }

    let log_probability = if structurally_zero {
        f64::NEG_INFINITY
    } else {
        log_scale
    };
    let probability = log_probability.exp();
    let probability = if probability < f64::MIN_POSITIVE {
        0.0
    } else {
        probability
    };

    let mut result = EvaluationResult::new(probability, Method::Forward, *counter);
    result.diagnostics.log_probability = log_probability;
    result.diagnostics.underflow_flag = probability < f64::MIN_POSITIVE;
    Ok(result)
}

/// Ordered vector-matrix chain through the scaled matrices.
///
/// Scales the distinct A_k it needs on the fly (N^2 multiplications each),
/// then folds the initial row vector through them at N^2 multiplications
/// and N(N−1) additions per step, and sums the final vector.
pub fn eval_chain(
    model: &HmmModel,
    obs: &ObservationSequence,
    counter: &mut OpCounter,
) -> Result<EvaluationResult> {
    ensure_inputs(model, obs)?;
    let n = model.n_states();
    let symbols = obs.symbols();

    let mut scaled: Vec<Option<Matrix>> = vec![None; model.n_symbols()];
    for &s in &symbols[1..] {
        if scaled[s].is_none() {
            scaled[s] = Some(scaled_matrix(model, s, counter));
        }
    }

    let mut vec = initial_vector(model, symbols[0], counter);
    for &s in &symbols[1..] {
        let a_k = scaled[s].as_ref().expect("scaled on demand above");
        let mut next = vec![0.0f64; n];
        for (j, slot) in next.iter_mut().enumerate() {
            counter.mul();
            let mut acc = vec[0] * a_k.get(0, j);
            for (i, &v) in vec.iter().enumerate().skip(1) {
                counter.mul();
                counter.add();
                acc += v * a_k.get(i, j);
            }
            *slot = acc;
        }
        vec = next;
    }

    let mut total = vec[0];
    for &v in &vec[1..] {
        counter.add();
        total += v;
    }
    Ok(EvaluationResult::new(total, Method::Chain, *counter))
}

/// Run-length powered evaluation through the cached factorizations.
///
/// The tail o_2..o_T is run-length encoded in encounter order; each run's
/// power A_v^l comes from [`matrix_power_diag`] when a factorization
/// exists, else from [`matrix_power_naive`] (recorded as a fallback, as is
/// any run whose diagonalized power fails the imaginary-residue bound).
/// The power matrices are multiplied left to right, the initial vector is
/// applied, and the entries of the final row vector are summed.
pub fn eval_diag_power(
    model: &HmmModel,
    obs: &ObservationSequence,
    counter: &mut OpCounter,
    set: &ScaledMatrixSet,
) -> Result<EvaluationResult> {
    ensure_inputs(model, obs)?;
    let n = model.n_states();
    let symbols = obs.symbols();
    let runs = encode_slice(&symbols[1..]);

    let mut max_residue = 0.0f64;
    let mut fallbacks: Vec<usize> = Vec::new();
    let mut record_fallback = |list: &mut Vec<usize>, symbol: usize| {
        if !list.contains(&symbol) {
            list.push(symbol);
        }
    };

    let mut combined: Option<Matrix> = None;
    for &(symbol, len) in &runs {
        let power = match set.factorization(symbol) {
            Some(f) => match matrix_power_diag(f, len, counter) {
                Ok((matrix, residue)) => {
                    max_residue = max_residue.max(residue);
                    matrix
                }
                Err(Error::NumericQuality { residue }) => {
                    // Retry the run with naive powering before failing.
                    max_residue = max_residue.max(residue);
                    record_fallback(&mut fallbacks, symbol);
                    matrix_power_naive(set.matrix(symbol), len, counter)
                        .map_err(|e| e.at_symbol(symbol))?
                }
                Err(e) => return Err(e.at_symbol(symbol)),
            },
            None => {
                record_fallback(&mut fallbacks, symbol);
                matrix_power_naive(set.matrix(symbol), len, counter)
                    .map_err(|e| e.at_symbol(symbol))?
            }
        };
        combined = Some(match combined {
            None => power,
            Some(acc) => mat_mul(&acc, &power, counter)?,
        });
    }

    let init = initial_vector(model, symbols[0], counter);
    let final_vec = match &combined {
        None => init,
        Some(product) => {
            let mut out = vec![0.0f64; n];
            for (j, slot) in out.iter_mut().enumerate() {
                counter.mul();
                let mut acc = init[0] * product.get(0, j);
                for (i, &v) in init.iter().enumerate().skip(1) {
                    counter.mul();
                    counter.add();
                    acc += v * product.get(i, j);
                }
                *slot = acc;
            }
            out
        }
    };

    let mut total = final_vec[0];
    for &v in &final_vec[1..] {
        counter.add();
        total += v;
    }
    // Roundoff through complex arithmetic can leave a tiny negative value
    // where the true probability is zero.
    let total = total.max(0.0);

    let mut result = EvaluationResult::new(total, Method::DiagPower, *counter);
    result.diagnostics.max_imag_residue = max_residue;
    result.diagnostics.fallbacks_used = fallbacks;
    Ok(result)
}
