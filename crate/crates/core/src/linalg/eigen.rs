//! Eigendecomposition of a real, possibly non-symmetric matrix.
//!
//! Householder reduction to upper Hessenberg form followed by the shifted
//! double-step QR iteration, in the classic EISPACK/JAMA formulation. The
//! iteration produces the real Schur form; eigenvectors come from
//! back-substitution and back-transformation. Complex conjugate pairs are
//! assembled from adjacent column pairs of the accumulated transform.
//!
//! Output ordering is fixed: eigenvalues sorted by descending magnitude,
//! ties broken by descending real part, then descending imaginary part.
//! Each eigenvector is scaled to unit max-modulus component and rotated so
//! its first significant component is real and positive.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Matrix};

/// QR iterations allowed per eigenvalue before giving up.
pub const MAX_QR_ITERATIONS: usize = 100;

const EPS: f64 = 2.220446049250313e-16; // 2^-52

/// Eigenvalues and eigenvectors (as columns) of a square real matrix.
///
/// Postcondition, verified by the test suite: for each pair (λ, v),
/// `‖m·v − λ·v‖∞ < 1e-8 · max(1, ‖m‖∞)`.
pub fn eigendecompose(m: &Matrix) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }

    let mut ws = Workspace::new(m);
    ws.hessenberg();
    ws.schur()?;

    let (values, vectors) = assemble(&ws);
    Ok(sort_and_normalize(values, vectors))
}

/// Flat-storage workspace for the reduction. `h` carries the Hessenberg and
/// later quasi-triangular form, `v` accumulates the similarity transforms,
/// `d`/`e` receive real/imaginary eigenvalue parts.
struct Workspace {
    n: usize,
    h: Vec<f64>,
    v: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
    ort: Vec<f64>,
}

impl Workspace {
    fn new(m: &Matrix) -> Self {
        let n = m.rows();
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        Self {
            n,
            h: m.data().to_vec(),
            v,
            d: vec![0.0; n],
            e: vec![0.0; n],
            ort: vec![0.0; n],
        }
    }

    /// Householder reduction to upper Hessenberg form, accumulating the
    /// orthogonal transform into `v`.
    fn hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return; // already Hessenberg, v stays identity
        }
        let high = n - 1;
        let h = &mut self.h;
        let v = &mut self.v;
        let ort = &mut self.ort;

        macro_rules! H {
            ($i:expr, $j:expr) => {
                h[($i) * n + ($j)]
            };
        }
        macro_rules! V {
            ($i:expr, $j:expr) => {
                v[($i) * n + ($j)]
            };
        }

        for m in 1..=high - 1 {
            let mut scale = 0.0;
            for i in m..=high {
                scale += H![i, m - 1].abs();
            }
            if scale == 0.0 {
                continue;
            }

            let mut hsum = 0.0;
            for i in (m..=high).rev() {
                ort[i] = H![i, m - 1] / scale;
                hsum += ort[i] * ort[i];
            }
            let mut g = hsum.sqrt();
            if ort[m] > 0.0 {
                g = -g;
            }
            hsum -= ort[m] * g;
            ort[m] -= g;

            // Apply the similarity transform H <- (I - u u'/h) H (I - u u'/h).
            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * H![i, j];
                }
                f /= hsum;
                for i in m..=high {
                    H![i, j] -= f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * H![i, j];
                }
                f /= hsum;
                for j in m..=high {
                    H![i, j] -= f * ort[j];
                }
            }
            ort[m] *= scale;
            H![m, m - 1] = scale * g;
        }

        // Accumulate the transformations.
        for m in (1..=high - 1).rev() {
            if H![m, m - 1] == 0.0 {
                continue;
            }
            for i in m + 1..=high {
                ort[i] = H![i, m - 1];
            }
            for j in m..=high {
                let mut g = 0.0;
                for i in m..=high {
                    g += ort[i] * V![i, j];
                }
                // Double division avoids possible underflow.
                g = (g / ort[m]) / H![m, m - 1];
                for i in m..=high {
                    V![i, j] += g * ort[i];
                }
            }
        }
    }

    /// Shifted double-step QR iteration on the Hessenberg form, then
    /// eigenvector back-substitution and back-transformation.
    ///
    /// Signed indices mirror the reference formulation, where the active
    /// block shrinks past zero to terminate.
    fn schur(&mut self) -> Result<()> {
        let nn = self.n;
        let ni = nn as isize;
        let h = &mut self.h;
        let v = &mut self.v;
        let d = &mut self.d;
        let e = &mut self.e;

        macro_rules! H {
            ($i:expr, $j:expr) => {
                h[($i) as usize * nn + ($j) as usize]
            };
        }
        macro_rules! V {
            ($i:expr, $j:expr) => {
                v[($i) as usize * nn + ($j) as usize]
            };
        }

        let low: isize = 0;
        let high: isize = ni - 1;
        let mut exshift = 0.0;
        let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let (mut t, mut w, mut x, mut y): (f64, f64, f64, f64);

        let mut norm = 0.0;
        for i in 0..ni {
            for j in (i - 1).max(0)..ni {
                norm += H![i, j].abs();
            }
        }

        let mut n = ni - 1;
        let mut iter = 0usize;
        while n >= low {
            // Look for a single small sub-diagonal element.
            let mut l = n;
            while l > low {
                s = H![l - 1, l - 1].abs() + H![l, l].abs();
                if s == 0.0 {
                    s = norm;
                }
                if H![l, l - 1].abs() < EPS * s {
                    break;
                }
                l -= 1;
            }

            if l == n {
                // One root found.
                H![n, n] += exshift;
                d[n as usize] = H![n, n];
                e[n as usize] = 0.0;
                n -= 1;
                iter = 0;
            } else if l == n - 1 {
                // Two roots found.
                w = H![n, n - 1] * H![n - 1, n];
                p = (H![n - 1, n - 1] - H![n, n]) / 2.0;
                q = p * p + w;
                z = q.abs().sqrt();
                H![n, n] += exshift;
                H![n - 1, n - 1] += exshift;
                x = H![n, n];

                if q >= 0.0 {
                    // Real pair.
                    z = if p >= 0.0 { p + z } else { p - z };
                    d[(n - 1) as usize] = x + z;
                    d[n as usize] = d[(n - 1) as usize];
                    if z != 0.0 {
                        d[n as usize] = x - w / z;
                    }
                    e[(n - 1) as usize] = 0.0;
                    e[n as usize] = 0.0;
                    x = H![n, n - 1];
                    s = x.abs() + z.abs();
                    p = x / s;
                    q = z / s;
                    r = (p * p + q * q).sqrt();
                    p /= r;
                    q /= r;

                    for j in n - 1..ni {
                        z = H![n - 1, j];
                        H![n - 1, j] = q * z + p * H![n, j];
                        H![n, j] = q * H![n, j] - p * z;
                    }
                    for i in 0..=n {
                        z = H![i, n - 1];
                        H![i, n - 1] = q * z + p * H![i, n];
                        H![i, n] = q * H![i, n] - p * z;
                    }
                    for i in low..=high {
                        z = V![i, n - 1];
                        V![i, n - 1] = q * z + p * V![i, n];
                        V![i, n] = q * V![i, n] - p * z;
                    }
                } else {
                    // Complex pair.
                    d[(n - 1) as usize] = x + p;
                    d[n as usize] = x + p;
                    e[(n - 1) as usize] = z;
                    e[n as usize] = -z;
                }
                n -= 2;
                iter = 0;
            } else {
                // No convergence yet: form a shift.
                x = H![n, n];
                y = 0.0;
                w = 0.0;
                if l < n {
                    y = H![n - 1, n - 1];
                    w = H![n, n - 1] * H![n - 1, n];
                }

                // Wilkinson's original ad hoc shift.
                if iter == 10 {
                    exshift += x;
                    for i in low..=n {
                        H![i, i] -= x;
                    }
                    s = H![n, n - 1].abs() + H![n - 1, n - 2].abs();
                    x = 0.75 * s;
                    y = x;
                    w = -0.4375 * s * s;
                }

                // MATLAB's ad hoc shift.
                if iter == 30 {
                    s = (y - x) / 2.0;
                    s = s * s + w;
                    if s > 0.0 {
                        s = s.sqrt();
                        if y < x {
                            s = -s;
                        }
                        s = x - w / ((y - x) / 2.0 + s);
                        for i in low..=n {
                            H![i, i] -= s;
                        }
                        exshift += s;
                        x = 0.964;
                        y = 0.964;
                        w = 0.964;
                    }
                }

                iter += 1;
                if iter > MAX_QR_ITERATIONS {
                    return Err(Error::Convergence {
                        size: nn,
                        budget: MAX_QR_ITERATIONS,
                    });
                }

                // Look for two consecutive small sub-diagonal elements.
                let mut m = n - 2;
                while m >= l {
                    z = H![m, m];
                    r = x - z;
                    s = y - z;
                    p = (r * s - w) / H![m + 1, m] + H![m, m + 1];
                    q = H![m + 1, m + 1] - z - r - s;
                    r = H![m + 2, m + 1];
                    s = p.abs() + q.abs() + r.abs();
                    p /= s;
                    q /= s;
                    r /= s;
                    if m == l {
                        break;
                    }
                    if H![m, m - 1].abs() * (q.abs() + r.abs())
                        < EPS * (p.abs() * (H![m - 1, m - 1].abs() + z.abs() + H![m + 1, m + 1].abs()))
                    {
                        break;
                    }
                    m -= 1;
                }

                for i in m + 2..=n {
                    H![i, i - 2] = 0.0;
                    if i > m + 2 {
                        H![i, i - 3] = 0.0;
                    }
                }

                // Double QR step on rows l..=n, columns m..=n.
                for k in m..=n - 1 {
                    let notlast = k != n - 1;
                    if k != m {
                        p = H![k, k - 1];
                        q = H![k + 1, k - 1];
                        r = if notlast { H![k + 2, k - 1] } else { 0.0 };
                        x = p.abs() + q.abs() + r.abs();
                        if x == 0.0 {
                            continue;
                        }
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                    s = (p * p + q * q + r * r).sqrt();
                    if p < 0.0 {
                        s = -s;
                    }
                    if s == 0.0 {
                        continue;
                    }
                    if k != m {
                        H![k, k - 1] = -s * x;
                    } else if l != m {
                        H![k, k - 1] = -H![k, k - 1];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..ni {
                        p = H![k, j] + q * H![k + 1, j];
                        if notlast {
                            p += r * H![k + 2, j];
                            H![k + 2, j] -= p * z;
                        }
                        H![k, j] -= p * x;
                        H![k + 1, j] -= p * y;
                    }
                    for i in 0..=n.min(k + 3) {
                        p = x * H![i, k] + y * H![i, k + 1];
                        if notlast {
                            p += z * H![i, k + 2];
                            H![i, k + 2] -= p * r;
                        }
                        H![i, k] -= p;
                        H![i, k + 1] -= p * q;
                    }
                    for i in low..=high {
                        p = x * V![i, k] + y * V![i, k + 1];
                        if notlast {
                            p += z * V![i, k + 2];
                            V![i, k + 2] -= p * r;
                        }
                        V![i, k] -= p;
                        V![i, k + 1] -= p * q;
                    }
                }
            }
        }

        if norm == 0.0 {
            return Ok(());
        }

        // Back-substitution: eigenvectors of the quasi-triangular form.
        for n in (0..ni).rev() {
            p = d[n as usize];
            q = e[n as usize];

            if q == 0.0 {
                // Real eigenvector.
                let mut l = n;
                H![n, n] = 1.0;
                for i in (0..n).rev() {
                    w = H![i, i] - p;
                    r = 0.0;
                    for j in l..=n {
                        r += H![i, j] * H![j, n];
                    }
                    if e[i as usize] < 0.0 {
                        z = w;
                        s = r;
                    } else {
                        l = i;
                        if e[i as usize] == 0.0 {
                            if w != 0.0 {
                                H![i, n] = -r / w;
                            } else {
                                H![i, n] = -r / (EPS * norm);
                            }
                        } else {
                            // Solve the 2x2 real block.
                            x = H![i, i + 1];
                            y = H![i + 1, i];
                            q = (d[i as usize] - p) * (d[i as usize] - p)
                                + e[i as usize] * e[i as usize];
                            t = (x * s - z * r) / q;
                            H![i, n] = t;
                            if x.abs() > z.abs() {
                                H![i + 1, n] = (-r - w * t) / x;
                            } else {
                                H![i + 1, n] = (-s - y * t) / z;
                            }
                        }
                        // Overflow control.
                        t = H![i, n].abs();
                        if (EPS * t) * t > 1.0 {
                            for j in i..=n {
                                H![j, n] /= t;
                            }
                        }
                    }
                }
            } else if q < 0.0 {
                // Complex eigenvector, stored in columns n-1 (real part)
                // and n (imaginary part).
                let mut l = n - 1;

                if H![n, n - 1].abs() > H![n - 1, n].abs() {
                    H![n - 1, n - 1] = q / H![n, n - 1];
                    H![n - 1, n] = -(H![n, n] - p) / H![n, n - 1];
                } else {
                    let (cr, ci) = cdiv(0.0, -H![n - 1, n], H![n - 1, n - 1] - p, q);
                    H![n - 1, n - 1] = cr;
                    H![n - 1, n] = ci;
                }
                H![n, n - 1] = 0.0;
                H![n, n] = 1.0;
                for i in (0..n - 1).rev() {
                    let mut ra = 0.0;
                    let mut sa = 0.0;
                    for j in l..=n {
                        ra += H![i, j] * H![j, n - 1];
                        sa += H![i, j] * H![j, n];
                    }
                    w = H![i, i] - p;

                    if e[i as usize] < 0.0 {
                        z = w;
                        r = ra;
                        s = sa;
                    } else {
                        l = i;
                        if e[i as usize] == 0.0 {
                            let (cr, ci) = cdiv(-ra, -sa, w, q);
                            H![i, n - 1] = cr;
                            H![i, n] = ci;
                        } else {
                            // Solve the complex 2x2 block.
                            x = H![i, i + 1];
                            y = H![i + 1, i];
                            let mut vr = (d[i as usize] - p) * (d[i as usize] - p)
                                + e[i as usize] * e[i as usize]
                                - q * q;
                            let vi = (d[i as usize] - p) * 2.0 * q;
                            if vr == 0.0 && vi == 0.0 {
                                vr = EPS
                                    * norm
                                    * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                            }
                            let (cr, ci) =
                                cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                            H![i, n - 1] = cr;
                            H![i, n] = ci;
                            if x.abs() > z.abs() + q.abs() {
                                H![i + 1, n - 1] = (-ra - w * H![i, n - 1] + q * H![i, n]) / x;
                                H![i + 1, n] = (-sa - w * H![i, n] - q * H![i, n - 1]) / x;
                            } else {
                                let (cr, ci) =
                                    cdiv(-r - y * H![i, n - 1], -s - y * H![i, n], z, q);
                                H![i + 1, n - 1] = cr;
                                H![i + 1, n] = ci;
                            }
                        }
                        // Overflow control.
                        t = H![i, n - 1].abs().max(H![i, n].abs());
                        if (EPS * t) * t > 1.0 {
                            for j in i..=n {
                                H![j, n - 1] /= t;
                                H![j, n] /= t;
                            }
                        }
                    }
                }
            }
        }

        // Back transformation to eigenvectors of the original matrix.
        for j in (low..ni).rev() {
            for i in low..=high {
                z = 0.0;
                for k in low..=j.min(high) {
                    z += V![i, k] * H![k, j];
                }
                V![i, j] = z;
            }
        }

        Ok(())
    }
}

/// Complex scalar division (xr + i·xi) / (yr + i·yi), Smith's algorithm.
fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let den = yr + r * yi;
        ((xr + r * xi) / den, (xi - r * xr) / den)
    } else {
        let r = yr / yi;
        let den = yi + r * yr;
        ((r * xr + xi) / den, (r * xi - xr) / den)
    }
}

/// Pair up `d`/`e` with columns of `v`: a zero imaginary part gives a real
/// eigenvector; a conjugate pair at columns (j, j+1) gives v_re ± i·v_im.
fn assemble(ws: &Workspace) -> (Vec<Complex64>, ComplexMatrix) {
    let n = ws.n;
    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut j = 0;
    while j < n {
        if ws.e[j] == 0.0 {
            values.push(Complex64::new(ws.d[j], 0.0));
            for i in 0..n {
                vectors.set(i, j, Complex64::new(ws.v[i * n + j], 0.0));
            }
            j += 1;
        } else {
            debug_assert!(ws.e[j] > 0.0 && j + 1 < n);
            values.push(Complex64::new(ws.d[j], ws.e[j]));
            values.push(Complex64::new(ws.d[j + 1], ws.e[j + 1]));
            for i in 0..n {
                let re = ws.v[i * n + j];
                let im = ws.v[i * n + j + 1];
                vectors.set(i, j, Complex64::new(re, im));
                vectors.set(i, j + 1, Complex64::new(re, -im));
            }
            j += 2;
        }
    }
    (values, vectors)
}

/// Deterministic presentation: magnitude-descending eigenvalue order and a
/// fixed eigenvector gauge.
fn sort_and_normalize(
    values: Vec<Complex64>,
    vectors: ComplexMatrix,
) -> (Vec<Complex64>, ComplexMatrix) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (values[a], values[b]);
        vb.norm()
            .partial_cmp(&va.norm())
            .unwrap()
            .then(vb.re.partial_cmp(&va.re).unwrap())
            .then(vb.im.partial_cmp(&va.im).unwrap())
    });

    let mut out_values = Vec::with_capacity(n);
    let mut out_vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        out_values.push(values[src]);
        let col = normalize_vector(vectors.col(src));
        for (i, v) in col.into_iter().enumerate() {
            out_vectors.set(i, dst, v);
        }
    }
    (out_values, out_vectors)
}

/// Scale to unit max modulus, then rotate so the first component with
/// modulus above 1e-12 of the max is real and positive.
fn normalize_vector(mut col: Vec<Complex64>) -> Vec<Complex64> {
    let max_mod = col.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if max_mod == 0.0 {
        return col;
    }
    for v in &mut col {
        *v /= max_mod;
    }
    if let Some(first) = col.iter().find(|v| v.norm() > 1e-12) {
        let phase = first / first.norm();
        for v in &mut col {
            *v /= phase;
        }
    }
    col
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cmat_mul_uncounted;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// max_i ‖m·v_i − λ_i·v_i‖∞ over all eigenpairs.
    fn residual(m: &Matrix, values: &[Complex64], vectors: &ComplexMatrix) -> f64 {
        let mc = m.to_complex();
        let mv = cmat_mul_uncounted(&mc, vectors).unwrap();
        let n = m.rows();
        let mut worst = 0.0f64;
        for (j, lambda) in values.iter().enumerate() {
            for i in 0..n {
                worst = worst.max((mv.get(i, j) - lambda * vectors.get(i, j)).norm());
            }
        }
        worst
    }

    #[test]
    fn diagonal_matrix() {
        let m = mat(&[&[0.3, 0.0], &[0.0, 0.7]]);
        let (values, vectors) = eigendecompose(&m).unwrap();
        assert!((values[0] - Complex64::new(0.7, 0.0)).norm() < 1e-14);
        assert!((values[1] - Complex64::new(0.3, 0.0)).norm() < 1e-14);
        // Descending order puts the 0.7-eigenvector (e_2) first.
        assert!((vectors.get(1, 0) - Complex64::ONE).norm() < 1e-14);
        assert!(vectors.get(0, 0).norm() < 1e-14);
        assert!((vectors.get(0, 1) - Complex64::ONE).norm() < 1e-14);
        assert!(vectors.get(1, 1).norm() < 1e-14);
    }

    #[test]
    fn two_state_stochastic() {
        // Characteristic polynomial (λ−1)(λ−0.7); eigenvectors ∝ [1,1], [1,−2].
        let m = mat(&[&[0.9, 0.1], &[0.2, 0.8]]);
        let (values, vectors) = eigendecompose(&m).unwrap();
        assert!((values[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((values[1] - Complex64::new(0.7, 0.0)).norm() < 1e-12);

        let ratio0 = vectors.get(1, 0) / vectors.get(0, 0);
        assert!((ratio0 - Complex64::ONE).norm() < 1e-10);
        let ratio1 = vectors.get(1, 1) / vectors.get(0, 1);
        assert!((ratio1 - Complex64::new(-2.0, 0.0)).norm() < 1e-10);
        assert!(residual(&m, &values, &vectors) < 1e-12);
    }

    #[test]
    fn rotation_gives_conjugate_pair() {
        let m = mat(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let (values, vectors) = eigendecompose(&m).unwrap();
        // Tie on magnitude and real part: +i sorts before −i.
        assert!((values[0] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!((values[1] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!(residual(&m, &values, &vectors) < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let m = mat(&[&[0.42]]);
        let (values, vectors) = eigendecompose(&m).unwrap();
        assert_eq!(values[0], Complex64::new(0.42, 0.0));
        assert_eq!(vectors.get(0, 0), Complex64::ONE);
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::zeros(3, 3);
        let (values, vectors) = eigendecompose(&m).unwrap();
        assert!(values.iter().all(|v| v.norm() == 0.0));
        // Identity columns are a valid eigenbasis of the zero matrix.
        for j in 0..3 {
            assert!((vectors.get(j, j) - Complex64::ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn normalization_gauge() {
        let m = mat(&[&[0.9, 0.1], &[0.2, 0.8]]);
        let (_, vectors) = eigendecompose(&m).unwrap();
        for j in 0..2 {
            let col = vectors.col(j);
            let max_mod = col.iter().fold(0.0f64, |mx, v| mx.max(v.norm()));
            assert!((max_mod - 1.0).abs() < 1e-12);
            let first = col.iter().find(|v| v.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-12 && first.re > 0.0);
        }
    }

    #[test]
    fn random_residuals_meet_bound() {
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut uniform = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        for trial in 0..100usize {
            let n = 2 + trial % 15; // sizes 2..=16
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, uniform() * 2.0 - 1.0);
                }
            }
            let (values, vectors) = eigendecompose(&m).unwrap();
            let bound = 1e-8 * m.inf_norm().max(1.0);
            let res = residual(&m, &values, &vectors);
            assert!(res < bound, "trial {trial} n={n}: residual {res:.3e} >= {bound:.3e}");
        }
    }
}
