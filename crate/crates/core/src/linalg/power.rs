//! Matrix powers by diagonalization, with a repeated-multiplication
//! baseline for defective inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    cinvert, cmat_mul, cmat_mul_uncounted, eigendecompose, mat_mul, ComplexMatrix, Matrix,
    OpCounter,
};

/// Eigenvector-matrix condition estimate above which a factorization is
/// treated as defective.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Max-norm reconstruction error an accepted factorization must meet.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Largest imaginary magnitude tolerated when a diagonalized power of a
/// real matrix is projected back to real entries.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Accepted eigenfactorization `m = p · diag(d) · p_inv`.
#[derive(Debug, Clone)]
pub struct DiagFactorization {
    p: ComplexMatrix,
    d: Vec<Complex64>,
    p_inv: ComplexMatrix,
    condition_estimate: f64,
}

impl DiagFactorization {
    pub fn size(&self) -> usize {
        self.d.len()
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.d
    }

    pub fn p_inv(&self) -> &ComplexMatrix {
        &self.p_inv
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }
}

/// Outcome of [`diagonalize`]: either an accepted factorization or the
/// evidence that the matrix is numerically defective.
#[derive(Debug, Clone)]
pub enum DiagOutcome {
    Diagonalizable(DiagFactorization),
    NotDiagonalizable {
        condition_estimate: f64,
        reconstruction_error: f64,
    },
}

impl DiagOutcome {
    pub fn factorization(&self) -> Option<&DiagFactorization> {
        match self {
            DiagOutcome::Diagonalizable(f) => Some(f),
            DiagOutcome::NotDiagonalizable { .. } => None,
        }
    }
}

/// Diagonalize a square real matrix.
///
/// Returns `NotDiagonalizable` when the eigenvector matrix is numerically
/// singular, its condition estimate exceeds [`CONDITION_LIMIT`], or the
/// reconstruction misses [`RECONSTRUCTION_TOL`]. Convergence failures of
/// the eigensolver propagate as errors.
pub fn diagonalize(m: &Matrix) -> Result<DiagOutcome> {
    let (d, p) = eigendecompose(m)?;
    let p_inv = match cinvert(&p) {
        Ok(inv) => inv,
        Err(Error::Singular { .. }) => {
            return Ok(DiagOutcome::NotDiagonalizable {
                condition_estimate: f64::INFINITY,
                reconstruction_error: f64::INFINITY,
            })
        }
        Err(e) => return Err(e),
    };

    let condition_estimate = p.inf_norm() * p_inv.inf_norm();
    let reconstruction_error = reconstruction_error(m, &p, &d, &p_inv)?;
    if condition_estimate > CONDITION_LIMIT || reconstruction_error >= RECONSTRUCTION_TOL {
        return Ok(DiagOutcome::NotDiagonalizable {
            condition_estimate,
            reconstruction_error,
        });
    }
    Ok(DiagOutcome::Diagonalizable(DiagFactorization {
        p,
        d,
        p_inv,
        condition_estimate,
    }))
}

/// ‖p · diag(d) · p_inv − m‖ in max-norm.
fn reconstruction_error(
    m: &Matrix,
    p: &ComplexMatrix,
    d: &[Complex64],
    p_inv: &ComplexMatrix,
) -> Result<f64> {
    let pd = cmat_mul_uncounted(p, &ComplexMatrix::from_diagonal(d))?;
    let rec = cmat_mul_uncounted(&pd, p_inv)?;
    let n = m.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((rec.get(i, j) - Complex64::new(m.get(i, j), 0.0)).norm());
        }
    }
    Ok(worst)
}

/// `m^l` through the factorization: the diagonal is powered entrywise
/// (`size * (l - 1)` multiplications), then two full products reassemble
/// the matrix. Returns the real part and the largest imaginary magnitude
/// discarded; a residue at or above [`IMAG_RESIDUE_TOL`] is an error.
pub fn matrix_power_diag(
    f: &DiagFactorization,
    l: usize,
    counter: &mut OpCounter,
) -> Result<(Matrix, f64)> {
    let n = f.size();
    if l == 0 {
        return Ok((Matrix::identity(n), 0.0));
    }
    let mut powered = Vec::with_capacity(n);
    for &lambda in &f.d {
        let mut acc = lambda;
        for _ in 1..l {
            counter.cmul();
            acc *= lambda;
        }
        powered.push(acc);
    }
    let pd = cmat_mul(&f.p, &ComplexMatrix::from_diagonal(&powered), counter)?;
    let full = cmat_mul(&pd, &f.p_inv, counter)?;
    let (real, residue) = full.real_part();
    if residue >= IMAG_RESIDUE_TOL {
        return Err(Error::NumericQuality { residue });
    }
    Ok((real, residue))
}

/// `m^l` by repeated multiplication; `l = 0` gives the identity.
pub fn matrix_power_naive(m: &Matrix, l: usize, counter: &mut OpCounter) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "matrix power needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if l == 0 {
        return Ok(Matrix::identity(m.rows()));
    }
    let mut acc = m.clone();
    for _ in 1..l {
        acc = mat_mul(&acc, m, counter)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn factorize(m: &Matrix) -> DiagFactorization {
        match diagonalize(m).unwrap() {
            DiagOutcome::Diagonalizable(f) => f,
            DiagOutcome::NotDiagonalizable { .. } => panic!("expected diagonalizable"),
        }
    }

    #[test]
    fn descending_diagonal_factors_exactly() {
        let m = mat(&[&[0.7, 0.0], &[0.0, 0.3]]);
        let f = factorize(&m);
        assert!((f.d[0] - Complex64::new(0.7, 0.0)).norm() < 1e-14);
        assert!((f.d[1] - Complex64::new(0.3, 0.0)).norm() < 1e-14);
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                assert!((f.p.get(i, j) - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn unordered_diagonal_factors_with_permutation() {
        let m = mat(&[&[0.3, 0.0], &[0.0, 0.7]]);
        let f = factorize(&m);
        assert!((f.d[0] - Complex64::new(0.7, 0.0)).norm() < 1e-14);
        assert!((f.p.get(1, 0) - Complex64::ONE).norm() < 1e-14);
        assert!((f.p.get(0, 1) - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn stochastic_two_by_two_reconstructs() {
        let m = mat(&[&[0.9, 0.1], &[0.2, 0.8]]);
        let f = factorize(&m);
        assert!(f.condition_estimate() < 100.0);
        assert!(reconstruction_error(&m, &f.p, &f.d, &f.p_inv).unwrap() < 1e-10);
    }

    #[test]
    fn jordan_block_is_defective() {
        let m = mat(&[&[0.5, 0.25], &[0.0, 0.5]]);
        match diagonalize(&m).unwrap() {
            DiagOutcome::NotDiagonalizable { .. } => {}
            DiagOutcome::Diagonalizable(f) => panic!(
                "defective matrix accepted (cond {:.3e})",
                f.condition_estimate()
            ),
        }
    }

    #[test]
    fn power_zero_is_exact_identity() {
        let f = factorize(&mat(&[&[0.9, 0.1], &[0.2, 0.8]]));
        let mut counter = OpCounter::new();
        let (p0, residue) = matrix_power_diag(&f, 0, &mut counter).unwrap();
        assert_eq!(p0, Matrix::identity(2));
        assert_eq!(residue, 0.0);
        assert_eq!((counter.muls, counter.adds), (0, 0));
    }

    #[test]
    fn power_one_reconstructs_source() {
        let m = mat(&[&[0.9, 0.1], &[0.2, 0.8]]);
        let f = factorize(&m);
        let (p1, _) = matrix_power_diag(&f, 1, &mut OpCounter::new()).unwrap();
        assert!(p1.max_abs_diff(&m) < 1e-10);
    }

    #[test]
    fn power_two_matches_hand_square() {
        let m = mat(&[&[0.9, 0.1], &[0.2, 0.8]]);
        let f = factorize(&m);
        let (p2, _) = matrix_power_diag(&f, 2, &mut OpCounter::new()).unwrap();
        assert!(p2.max_abs_diff(&mat(&[&[0.83, 0.17], &[0.34, 0.66]])) < 1e-10);
    }

    #[test]
    fn power_diag_count_law() {
        let n = 3;
        let m = mat(&[&[0.6, 0.3, 0.1], &[0.2, 0.5, 0.3], &[0.1, 0.2, 0.7]]);
        let f = factorize(&m);
        for l in [1usize, 2, 5, 17] {
            let mut counter = OpCounter::new();
            matrix_power_diag(&f, l, &mut counter).unwrap();
            let n3 = (n * n * n) as u64;
            let diag_muls = (n * (l - 1)) as u64;
            assert_eq!(counter.muls, diag_muls + 2 * n3, "l={l}");
            assert_eq!(counter.adds, 2 * (n * n * (n - 1)) as u64, "l={l}");
        }
    }

    #[test]
    fn naive_power_basics() {
        let mut counter = OpCounter::new();
        let id = matrix_power_naive(&mat(&[&[0.5, 0.5], &[0.3, 0.7]]), 0, &mut counter).unwrap();
        assert_eq!(id, Matrix::identity(2));
        assert_eq!(counter.muls, 0);

        let cube = matrix_power_naive(&mat(&[&[2.0]]), 3, &mut counter).unwrap();
        assert_eq!(cube.get(0, 0), 8.0);
    }

    #[test]
    fn diag_and_naive_agree_on_random_matrices() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut uniform = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let mut accepted = 0;
        for trial in 0..100usize {
            let n = 2 + trial % 5;
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                let row: Vec<f64> = (0..n).map(|_| uniform() + 1e-3).collect();
                let sum: f64 = row.iter().sum();
                for (j, v) in row.iter().enumerate() {
                    m.set(i, j, v / sum);
                }
            }
            let f = factorize(&m);
            accepted += 1;
            for l in [0usize, 1, 2, 5, 17, 50] {
                let (diag, _) = matrix_power_diag(&f, l, &mut OpCounter::new()).unwrap();
                let naive = matrix_power_naive(&m, l, &mut OpCounter::new()).unwrap();
                let diff = diag.max_abs_diff(&naive);
                assert!(diff < 1e-9, "trial {trial} n={n} l={l}: diff {diff:.3e}");
            }
        }
        assert_eq!(accepted, 100);
    }
}
