//! Minimal dense real/complex matrix helpers for the numerical modules:
//! products, modified Gram–Schmidt QR with one reorthogonalization pass
//! ("twice is enough"), LU determinants, and a column-scaled variant of the
//! QR diagonal that works in log space so strongly stretched matrices never
//! overflow the triangular factor.
//!
//! Everything here is written for small square matrices (n ≤ a few dozen);
//! no attempt is made at blocking or SIMD.

use num::complex::Complex64;
use num::Zero;

/// Row-major square real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    pub n: usize,
    pub a: Vec<f64>,
}

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        RMat { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &RMat) -> RMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = RMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RMat {
        let n = self.n;
        let mut out = RMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Largest absolute entry of `selfᵀ·self − I` (orthogonality defect).
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut dot = 0.0;
                for k in 0..n {
                    dot += self.get(k, i) * self.get(k, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = 1.0f64;
        for col in 0..n {
            let mut piv = col;
            for row in (col + 1)..n {
                if a[row * n + col].abs() > a[piv * n + col].abs() {
                    piv = row;
                }
            }
            if a[piv * n + col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for row in (col + 1)..n {
                let f = a[row * n + col] / d;
                for j in col..n {
                    a[row * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, a: vec![Complex64::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Largest absolute entry of `selfᴴ·self − I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut dot = Complex64::zero();
                for k in 0..n {
                    dot += self.get(k, i).conj() * self.get(k, j);
                }
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::zero()
                };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting on magnitudes.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut piv = col;
            for row in (col + 1)..n {
                if a[row * n + col].norm_sqr() > a[piv * n + col].norm_sqr() {
                    piv = row;
                }
            }
            if a[piv * n + col].is_zero() {
                return Complex64::zero();
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[col * n + col];
            det *= d;
            for row in (col + 1)..n {
                let f = a[row * n + col] / d;
                for j in col..n {
                    a[row * n + j] = a[row * n + j] - f * a[col * n + j];
                }
            }
        }
        det
    }
}

/// Modified Gram–Schmidt QR with one reorthogonalization pass.  Returns
/// `(Q, rdiag)` where `Q` has orthonormal columns, `rdiag` is the (positive)
/// diagonal of the triangular factor, and `A = Q·R` with the unique `R`
/// having that diagonal.  `None` if a column norm vanishes (singular input).
pub fn mgs_real(m: &RMat) -> Option<(RMat, Vec<f64>)> {
    let n = m.n;
    // Work column-wise on a transposed copy so columns are contiguous.
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| m.get(i, j)).collect())
        .collect();
    let mut rdiag = vec![0.0; n];
    for j in 0..n {
        // Two orthogonalization passes against the previous columns.
        for _pass in 0..2 {
            for k in 0..j {
                let (head, tail) = v.split_at_mut(j);
                let qk = &head[k];
                let vj = &mut tail[0];
                let dot: f64 = qk.iter().zip(vj.iter()).map(|(a, b)| a * b).sum();
                for i in 0..n {
                    vj[i] -= dot * qk[i];
                }
            }
        }
        let norm: f64 = v[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        rdiag[j] = norm;
        for x in v[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = RMat::zeros(n);
    for j in 0..n {
        for i in 0..n {
            q.set(i, j, v[j][i]);
        }
    }
    Some((q, rdiag))
}

/// Complex counterpart of [`mgs_real`]; the triangular diagonal is real and
/// positive (the unique QR normalization on `GL(n,ℂ)`).
pub fn mgs_complex(m: &CMat) -> Option<(CMat, Vec<f64>)> {
    let n = m.n;
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| m.get(i, j)).collect())
        .collect();
    let mut rdiag = vec![0.0; n];
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let (head, tail) = v.split_at_mut(j);
                let qk = &head[k];
                let vj = &mut tail[0];
                let dot: Complex64 = qk
                    .iter()
                    .zip(vj.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for i in 0..n {
                    vj[i] -= dot * qk[i];
                }
            }
        }
        let norm: f64 = v[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        rdiag[j] = norm;
        for x in v[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = CMat::zeros(n);
    for j in 0..n {
        for i in 0..n {
            q.set(i, j, v[j][i]);
        }
    }
    Some((q, rdiag))
}

/// `ln` of the QR diagonal of `m`, computed with per-column prescaling:
/// `QR(M·D) = Q·(R·D)` for diagonal `D`, so normalizing every column to unit
/// length first keeps the factorization well-scaled and the true diagonal is
/// recovered as `ln r′_jj + ln‖col_j‖`.  `None` on singular/overflowing input.
pub fn log_qr_diag_real(m: &RMat) -> Option<Vec<f64>> {
    let n = m.n;
    let mut scaled = m.clone();
    let mut log_scale = vec![0.0; n];
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| m.get(i, j).powi(2)).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        log_scale[j] = norm.ln();
        for i in 0..n {
            scaled.set(i, j, m.get(i, j) / norm);
        }
    }
    let (_, rdiag) = mgs_real(&scaled)?;
    Some(
        rdiag
            .iter()
            .zip(&log_scale)
            .map(|(r, s)| r.ln() + s)
            .collect(),
    )
}

/// Complex counterpart of [`log_qr_diag_real`].
pub fn log_qr_diag_complex(m: &CMat) -> Option<Vec<f64>> {
    let n = m.n;
    let mut scaled = m.clone();
    let mut log_scale = vec![0.0; n];
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| m.get(i, j).norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        log_scale[j] = norm.ln();
        for i in 0..n {
            let v = m.get(i, j) / norm;
            scaled.set(i, j, v);
        }
    }
    let (_, rdiag) = mgs_complex(&scaled)?;
    Some(
        rdiag
            .iter()
            .zip(&log_scale)
            .map(|(r, s)| r.ln() + s)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rmat(rows: &[&[f64]]) -> RMat {
        let n = rows.len();
        let mut m = RMat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    #[test]
    fn qr_reconstructs_and_is_orthogonal() {
        let m = rmat(&[&[2.0, 1.0, 0.5], &[-1.0, 3.0, 2.0], &[0.0, 1.0, -1.0]]);
        let (q, rdiag) = mgs_real(&m).unwrap();
        assert!(q.orthogonality_defect() < 1e-13);
        assert!(rdiag.iter().all(|r| *r > 0.0));
        // First diagonal entry of R is the first column norm.
        assert!((rdiag[0] - (4.0f64 + 1.0).sqrt()).abs() < 1e-13);
        // |det M| = Π r_jj.
        let prod: f64 = rdiag.iter().product();
        assert!((prod - m.det().abs()).abs() < 1e-12 * prod);
    }

    #[test]
    fn log_diag_matches_direct_qr_on_benign_input() {
        let m = rmat(&[&[1.5, 0.3], &[0.7, -2.0]]);
        let (_, rdiag) = mgs_real(&m).unwrap();
        let logs = log_qr_diag_real(&m).unwrap();
        for (l, r) in logs.iter().zip(&rdiag) {
            assert!((l - r.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn log_diag_survives_extreme_stretching() {
        // diag(e^t, e^-t)·rotation for t = 40: entries up to e^40 ≈ 2.4e17,
        // R₂₂ = e^-40; direct products would lose it, logs must not.
        let t = 40.0f64;
        let c = (0.3f64).cos();
        let s = (0.3f64).sin();
        let m = rmat(&[&[t.exp() * c, t.exp() * s], &[-(-t).exp() * s, (-t).exp() * c]]);
        let logs = log_qr_diag_real(&m).unwrap();
        // det = 1 forces the two log-diagonals to cancel.
        assert!((logs[0] + logs[1]).abs() < 1e-9);
        // First diagonal = log of the first column norm.
        let expected0 = 0.5 * ((t.exp() * c).powi(2) + ((-t).exp() * s).powi(2)).ln();
        assert!((logs[0] - expected0).abs() < 1e-12);
    }

    #[test]
    fn complex_qr_basics() {
        let mut m = CMat::zeros(2);
        m.set(0, 0, Complex64::new(1.0, 2.0));
        m.set(0, 1, Complex64::new(0.0, -1.0));
        m.set(1, 0, Complex64::new(-0.5, 0.3));
        m.set(1, 1, Complex64::new(2.0, 0.0));
        let (q, rdiag) = mgs_complex(&m).unwrap();
        assert!(q.orthogonality_defect() < 1e-13);
        assert!(rdiag.iter().all(|r| *r > 0.0));
        let prod: f64 = rdiag.iter().product();
        assert!((prod - m.det().norm()).abs() < 1e-12 * prod);
        let logs = log_qr_diag_complex(&m).unwrap();
        for (l, r) in logs.iter().zip(&rdiag) {
            assert!((l - r.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_input_is_rejected() {
        // Repeated unit column: the projection is exact in binary floating
        // point, so the residual norm is exactly zero.
        let m = rmat(&[&[1.0, 1.0], &[0.0, 0.0]]);
        assert!(mgs_real(&m).is_none());
        let z = RMat::zeros(3);
        assert!(log_qr_diag_real(&z).is_none());
    }

    #[test]
    fn determinants() {
        let m = rmat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!((m.det() + 1.0).abs() < 1e-15);
        let id = RMat::identity(4);
        assert!((id.det() - 1.0).abs() < 1e-15);
    }
}
