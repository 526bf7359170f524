//! Dense real and complex matrices with instrumented arithmetic.
//!
//! Every multiplication and addition performed by the evaluation kernels
//! runs through an [`OpCounter`] owned by the caller, so measured costs can
//! be compared against closed-form predictions. A complex multiply or add
//! tallies as one multiplication or addition; the CLI offers a real-op
//! expansion (x4 multiplications, x2 additions) next to the raw tallies.

use num_complex::Complex64;

use crate::error::{Error, Result};

mod eigen;
mod power;

pub use eigen::{eigendecompose, MAX_QR_ITERATIONS};
pub use power::{
    diagonalize, matrix_power_diag, matrix_power_naive, DiagFactorization, DiagOutcome,
    CONDITION_LIMIT, IMAG_RESIDUE_TOL, RECONSTRUCTION_TOL,
};

/// Pivot threshold for inversion, relative to the matrix max-norm.
pub const PIVOT_REL_TOL: f64 = 1e-14;

/// Tally of multiplications and additions performed by one evaluation.
///
/// `complex_muls`/`complex_adds` record the subset of the totals that ran in
/// complex arithmetic, so callers can expand them to real-op equivalents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub muls: u64,
    pub adds: u64,
    pub complex_muls: u64,
    pub complex_adds: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn mul(&mut self) {
        self.muls += 1;
    }

    #[inline]
    pub fn add(&mut self) {
        self.adds += 1;
    }

    #[inline]
    pub fn cmul(&mut self) {
        self.muls += 1;
        self.complex_muls += 1;
    }

    #[inline]
    pub fn cadd(&mut self) {
        self.adds += 1;
        self.complex_adds += 1;
    }

    /// Fold another counter into this one.
    pub fn merge(&mut self, other: &OpCounter) {
        self.muls += other.muls;
        self.adds += other.adds;
        self.complex_muls += other.complex_muls;
        self.complex_adds += other.complex_adds;
    }

    /// Real-op equivalents: each complex multiplication expands to 4 real
    /// multiplications, each complex addition to 2 real additions.
    pub fn expanded(&self) -> (u64, u64) {
        let muls = self.muls - self.complex_muls + 4 * self.complex_muls;
        let adds = self.adds - self.complex_adds + 2 * self.complex_adds;
        (muls, adds)
    }
}

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "matrix data length {} != {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Matrix infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Column as a vector.
    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Matrix infinity norm (max absolute row sum of moduli).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Real part, plus the largest imaginary magnitude discarded.
    pub fn real_part(&self) -> (Matrix, f64) {
        let mut max_imag: f64 = 0.0;
        let data = self
            .data
            .iter()
            .map(|v| {
                max_imag = max_imag.max(v.im.abs());
                v.re
            })
            .collect();
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            max_imag,
        )
    }
}

/// Instrumented real matrix product.
///
/// Adds `a.rows * b.cols * a.cols` multiplications and
/// `a.rows * b.cols * (a.cols - 1)` additions to the counter.
pub fn mat_mul(a: &Matrix, b: &Matrix, counter: &mut OpCounter) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            counter.mul();
            let mut acc = a.get(i, 0) * b.get(0, j);
            for k in 1..a.cols {
                counter.mul();
                counter.add();
                acc += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Instrumented complex matrix product; same count law as [`mat_mul`] with
/// each complex operation tallied once.
pub fn cmat_mul(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    counter: &mut OpCounter,
) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            counter.cmul();
            let mut acc = a.get(i, 0) * b.get(0, j);
            for k in 1..a.cols {
                counter.cmul();
                counter.cadd();
                acc += a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Uncounted complex product, for precomputation and verification paths.
pub(crate) fn cmat_mul_uncounted(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut scratch = OpCounter::new();
    cmat_mul(a, b, &mut scratch)
}

/// Invert a real square matrix by Gauss-Jordan elimination with partial
/// pivoting. Pivots below `PIVOT_REL_TOL * max_abs` are singular.
pub fn invert(m: &Matrix) -> Result<Matrix> {
    let (inv, _) = cinvert_impl(&m.to_complex())?;
    Ok(inv.real_part().0)
}

/// Complex counterpart of [`invert`].
pub fn cinvert(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    cinvert_impl(m).map(|(inv, _)| inv)
}

/// Gauss-Jordan with partial pivoting on the augmented system [m | I].
/// Returns the inverse and the smallest pivot modulus encountered.
fn cinvert_impl(m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!(
            "cannot invert non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let threshold = PIVOT_REL_TOL * m.max_abs();
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&p, &q| {
                a.get(p, col)
                    .norm()
                    .partial_cmp(&a.get(q, col).norm())
                    .expect("pivot moduli are never NaN")
            })
            .expect("non-empty pivot range");
        let pivot = a.get(pivot_row, col);
        let pivot_mag = pivot.norm();
        if pivot_mag <= threshold {
            return Err(Error::Singular {
                pivot: pivot_mag,
                threshold,
            });
        }
        min_pivot = min_pivot.min(pivot_mag);
        if pivot_row != col {
            for j in 0..n {
                let (x, y) = (a.get(col, j), a.get(pivot_row, j));
                a.set(col, j, y);
                a.set(pivot_row, j, x);
                let (x, y) = (inv.get(col, j), inv.get(pivot_row, j));
                inv.set(col, j, y);
                inv.set(pivot_row, j, x);
            }
        }
        let inv_pivot = Complex64::ONE / pivot;
        for j in 0..n {
            a.set(col, j, a.get(col, j) * inv_pivot);
            inv.set(col, j, inv.get(col, j) * inv_pivot);
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = a.get(i, col);
            if factor == Complex64::ZERO {
                continue;
            }
            for j in 0..n {
                a.set(i, j, a.get(i, j) - factor * a.get(col, j));
                inv.set(i, j, inv.get(i, j) - factor * inv.get(col, j));
            }
        }
    }
    Ok((inv, min_pivot))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_product_counts_ops() {
        let x = mat(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 9.0]]);
        let mut counter = OpCounter::new();
        let out = mat_mul(&Matrix::identity(3), &x, &mut counter).unwrap();
        assert_eq!(out, x);
        assert_eq!(counter.muls, 27);
        assert_eq!(counter.adds, 18);
    }

    #[test]
    fn hand_squared_two_by_two() {
        let a = mat(&[&[0.9, 0.1], &[0.2, 0.8]]);
        let mut counter = OpCounter::new();
        let sq = mat_mul(&a, &a, &mut counter).unwrap();
        let expected = mat(&[&[0.83, 0.17], &[0.34, 0.66]]);
        assert!(sq.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn one_by_one_product() {
        let a = mat(&[&[2.0]]);
        let b = mat(&[&[3.0]]);
        let mut counter = OpCounter::new();
        let out = mat_mul(&a, &b, &mut counter).unwrap();
        assert_eq!(out.get(0, 0), 6.0);
        assert_eq!((counter.muls, counter.adds), (1, 0));
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 2);
        assert!(matches!(
            mat_mul(&a, &b, &mut OpCounter::new()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn invert_identity_and_diagonal() {
        let inv = invert(&Matrix::identity(4)).unwrap();
        assert!(inv.max_abs_diff(&Matrix::identity(4)) < 1e-15);

        let d = mat(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let inv = invert(&d).unwrap();
        assert!(inv.max_abs_diff(&mat(&[&[0.5, 0.0], &[0.0, 0.25]])) < 1e-15);
    }

    #[test]
    fn invert_rank_deficient_fails() {
        let m = mat(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(invert(&m), Err(Error::Singular { .. })));
    }

    #[test]
    fn invert_roundtrip_random() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut uniform = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        for n in 2..=8usize {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    // Diagonal dominance keeps the sample well-conditioned.
                    let v = uniform() + if i == j { 2.0 } else { 0.0 };
                    m.set(i, j, v);
                }
            }
            let inv = invert(&m).unwrap();
            let mut scratch = OpCounter::new();
            let prod = mat_mul(&m, &inv, &mut scratch).unwrap();
            assert!(
                prod.max_abs_diff(&Matrix::identity(n)) < 1e-10,
                "round-trip failed at n={n}"
            );
        }
    }

    #[test]
    fn counter_expansion() {
        let mut c = OpCounter::new();
        c.mul();
        c.cmul();
        c.add();
        c.cadd();
        assert_eq!((c.muls, c.adds), (2, 2));
        assert_eq!(c.expanded(), (5, 3));
    }
}
