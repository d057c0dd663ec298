//! Monte Carlo evaluation of the spherical decay benchmark
//!
//! ```text
//!     Ξ(g) = ∫_K δ_B(a(g·k))^{-1/2} dk ,      ∫_K dk = 1 ,
//! ```
//!
//! where `a(·)` is the split part of the Iwasawa factorization `g = k·a·n`
//! and `δ_B(a) = Π |α(a)|^{m_α}` is the modular function of the minimal
//! parabolic (see [`crate::exponents::modular_weight`]).  Ξ takes values in
//! `(0, 1]`, is bi-K-invariant and symmetric under `g ↦ g⁻¹`, and decays
//! along chamber rays; the bound checker in this module certifies the shape
//!
//! ```text
//!     c₁·δ_B^{-1/2}(a)  ≤  Ξ(a)  ≤  c₂(ε)·δ_B^{-1/2+ε}(a)
//! ```
//!
//! empirically: `r(t) = Ξ(a_t)·δ_B^{1/2}(a_t)` must stay positive (lower
//! bound, `r` grows roughly linearly in `t`), while `u(t) = r(t)·δ_B^{-ε}(a_t)`
//! must eventually decrease (upper bound).
//!
//! # Numerical models
//!
//! | group      | matrices                | maximal compact K            |
//! |------------|-------------------------|------------------------------|
//! | SL(n,ℝ)    | n×n real, det 1         | SO(n)                        |
//! | SL(n,ℂ)    | n×n complex, det 1      | SU(n)                        |
//! | SO₀(1,n)   | (n+1)×(n+1) real        | block-conjugate of SO(n)     |
//! | SU(1,n)    | (n+1)×(n+1) complex     | block-conjugate of S(U(n)×U(1)) |
//!
//! The rank-one groups use the split form with Gram matrix
//! `J = e₀eₙᵀ + eₙe₀ᵀ + Σ_{0<i<n} e_ie_iᵀ` (signature (n,1)), because in that
//! basis `A = diag(e^t, 1, …, 1, e^{-t})` and the nilpotent part are genuinely
//! upper triangular, so plain QR recovers the Iwasawa factors: `g = QR` with
//! positive diagonal forces `Q = k` and `diag(R) = a`.  The compact factor is
//! conjugate, by the orthogonal change of basis `P` diagonalizing `J`, to
//! `SO(n)` (real case) or `{(U, det U⁻¹)} ≅ U(n)` (complex case), which is how
//! Haar sampling is implemented.
//!
//! Quaternionic and non-archimedean groups are excluded from numerics; their
//! exponents remain exact/symbolic in [`crate::exponents`].
//!
//! # Haar sampling
//!
//! A Ginibre matrix (i.i.d. Gaussian entries) is orthonormalized by modified
//! Gram–Schmidt with the positive-diagonal normalization of the triangular
//! factor.  That sign/phase convention makes the column frame exactly Haar on
//! O(n)/U(n) (Mezzadri, *How to generate random matrices from the classical
//! compact groups*, Notices AMS 54 (2007)); restriction to SO(n) flips the
//! last column when det = −1, and to SU(n) rotates the last column by
//! `det⁻¹` — both maps push Haar forward to Haar (the first by right
//! translation under a fixed reflection, the second by left SU(n)-equivariance).
//!
//! # Determinism
//!
//! Sampling is blocked: block `b` draws from `ChaCha8` seeded with the user
//! seed on stream `b`.  Blocks are evaluated in parallel but reduced in block
//! order, so a given `(point, n_samples, seed)` always returns bit-identical
//! estimates regardless of thread count.

use crate::catalog::{Family, FieldKind, GroupSpec};
use crate::exponents::modular_weight;
use crate::linalg::{self, CMat, RMat};
use crate::rational::to_f64;
use num::complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest accepted Monte Carlo sample count for [`hc_estimate`].
pub const MIN_SAMPLES: u64 = 1_000;

/// Samples per RNG block; block `b` uses stream `b` of the seeded generator.
const BLOCK: u64 = 4096;

/// Tolerance for the trace-zero constraint on SL(n) chamber coordinates.
const SUM_TOL: f64 = 1e-9;

/// Tolerance for the weak-descent (closed chamber) constraint.
const ORDER_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum HcError {
    #[error("no numerical matrix model for {0} (quaternionic/non-archimedean groups are exact-only)")]
    UnsupportedNumericField(String),
    #[error("deterministic quadrature backend only covers SL(2,R) and SL(2,C), not {0}")]
    QuadratureUnsupported(String),
    #[error("Cartan parameter outside the closed positive chamber: {0}")]
    InvalidChamber(String),
    #[error("invalid input: {0}")]
    InvalidParameter(String),
    #[error("orthonormalization failed: matrix is numerically singular")]
    DecompositionFailure,
}

/// Backend selector for [`hc_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    Quadrature,
}

// ─────────────────────────────────────────────────────────────────────────────
// Cartan points
// ─────────────────────────────────────────────────────────────────────────────

/// A point `a = exp(H)` of the closed positive Weyl chamber, stored through
/// its logarithmic coordinates.
///
/// * `SL(n)`: `n` coordinates `(t₁,…,tₙ)` with `Σtᵢ = 0` and `t₁ ≥ … ≥ tₙ`;
///   the torus element is `diag(e^{t₁},…,e^{tₙ})`.
/// * rank-one families (`SO₀(1,n)`, `SU(1,n)`, `Sp(1,n)`): a single `t ≥ 0`;
///   the torus element is `diag(e^t, 1, …, 1, e^{-t})`.
/// * `Sp(2n)`, `SU(n,m)`, `Sp(n,m)`: `n` coordinates with `t₁ ≥ … ≥ tₙ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanPoint {
    group: GroupSpec,
    log_coords: Vec<f64>,
}

impl CartanPoint {
    /// Validate the coordinates against the group's chamber and wrap them.
    pub fn new(group: GroupSpec, log_coords: Vec<f64>) -> Result<Self, HcError> {
        if log_coords.iter().any(|t| !t.is_finite()) {
            return Err(HcError::InvalidChamber("non-finite coordinate".into()));
        }
        match group.family {
            Family::Sl => {
                let n = group.n as usize;
                if log_coords.len() != n {
                    return Err(HcError::InvalidChamber(format!(
                        "{} needs {n} coordinates, got {}",
                        group.id(),
                        log_coords.len()
                    )));
                }
                let sum: f64 = log_coords.iter().sum();
                if sum.abs() > SUM_TOL {
                    return Err(HcError::InvalidChamber(format!(
                        "coordinates must sum to zero (got {sum:e})"
                    )));
                }
                for w in log_coords.windows(2) {
                    if w[0] + ORDER_TOL < w[1] {
                        return Err(HcError::InvalidChamber(
                            "coordinates must be weakly decreasing".into(),
                        ));
                    }
                }
            }
            Family::So01n | Family::Su1n | Family::Sp1n => {
                if log_coords.len() != 1 {
                    return Err(HcError::InvalidChamber(format!(
                        "rank-one {} needs exactly one coordinate",
                        group.id()
                    )));
                }
                if log_coords[0] < 0.0 {
                    return Err(HcError::InvalidChamber(
                        "rank-one coordinate must be ≥ 0".into(),
                    ));
                }
            }
            Family::Sp2n | Family::Sunm | Family::Spnm => {
                let n = group.n as usize;
                if log_coords.len() != n {
                    return Err(HcError::InvalidChamber(format!(
                        "{} needs {n} coordinates, got {}",
                        group.id(),
                        log_coords.len()
                    )));
                }
                for w in log_coords.windows(2) {
                    if w[0] + ORDER_TOL < w[1] {
                        return Err(HcError::InvalidChamber(
                            "coordinates must be weakly decreasing".into(),
                        ));
                    }
                }
                if *log_coords.last().unwrap() < -ORDER_TOL {
                    return Err(HcError::InvalidChamber(
                        "last coordinate must be ≥ 0".into(),
                    ));
                }
            }
        }
        Ok(CartanPoint { group, log_coords })
    }

    /// One-parameter chamber ray: `[t]` for rank-one groups, `[t, −t]` for
    /// SL(2).  Groups of higher rank have no canonical scalar ray here.
    pub fn scalar(group: GroupSpec, t: f64) -> Result<Self, HcError> {
        match group.family {
            Family::So01n | Family::Su1n | Family::Sp1n => Self::new(group, vec![t]),
            Family::Sl if group.n == 2 => Self::new(group, vec![t, -t]),
            _ => Err(HcError::InvalidParameter(format!(
                "no scalar chamber ray for {}; pass full coordinates",
                group.id()
            ))),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn log_coords(&self) -> &[f64] {
        &self.log_coords
    }

    /// True when the point is the identity (all coordinates zero).
    pub fn is_identity(&self) -> bool {
        self.log_coords.iter().all(|t| *t == 0.0)
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Matrix models
// ─────────────────────────────────────────────────────────────────────────────

/// A concrete matrix in a group's numerical model.
#[derive(Debug, Clone)]
pub enum ModelMatrix {
    Real(RMat),
    Complex(CMat),
}

impl ModelMatrix {
    pub fn dim(&self) -> usize {
        match self {
            ModelMatrix::Real(m) => m.n,
            ModelMatrix::Complex(m) => m.n,
        }
    }

    /// Matrix product; both operands must be of the same kind and size.
    pub fn mul(&self, rhs: &ModelMatrix) -> ModelMatrix {
        match (self, rhs) {
            (ModelMatrix::Real(a), ModelMatrix::Real(b)) => ModelMatrix::Real(a.mul(b)),
            (ModelMatrix::Complex(a), ModelMatrix::Complex(b)) => {
                ModelMatrix::Complex(a.mul(b))
            }
            _ => panic!("mixed real/complex matrix product"),
        }
    }

    fn log_qr_diag(&self) -> Option<Vec<f64>> {
        match self {
            ModelMatrix::Real(m) => linalg::log_qr_diag_real(m),
            ModelMatrix::Complex(m) => linalg::log_qr_diag_complex(m),
        }
    }
}

/// Size of the matrix model for a numerically supported group.
pub fn model_dim(group: &GroupSpec) -> Result<usize, HcError> {
    numeric_support(group)?;
    Ok(match group.family {
        Family::Sl => group.n as usize,
        Family::So01n | Family::Su1n => group.n as usize + 1,
        _ => unreachable!("numeric_support admits only Sl/So01n/Su1n"),
    })
}

fn model_is_complex(group: &GroupSpec) -> bool {
    matches!(group.family, Family::Su1n)
        || (group.family == Family::Sl && group.field == FieldKind::Complex)
}

/// Check that a numerical matrix model exists: SL(n,ℝ), SL(n,ℂ), SO₀(1,n),
/// SU(1,n).  Quaternionic, non-archimedean, and higher-rank C/BC groups are
/// exact-only.
pub fn numeric_support(group: &GroupSpec) -> Result<(), HcError> {
    let ok = match group.family {
        Family::Sl => matches!(group.field, FieldKind::Real | FieldKind::Complex),
        Family::So01n | Family::Su1n => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(HcError::UnsupportedNumericField(group.id()))
    }
}

/// Orthogonal change of basis diagonalizing the split Gram matrix `J`:
/// columns `(e₀+eₙ)/√2, e₁, …, e_{n−1}, (e₀−eₙ)/√2`.  The first `dim−1`
/// columns span the +1 eigenspace of `J`, the last its −1 eigenspace.
fn split_basis(dim: usize) -> RMat {
    let mut p = RMat::zeros(dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    p.set(0, 0, s);
    p.set(dim - 1, 0, s);
    for j in 1..dim - 1 {
        p.set(j, j, 1.0);
    }
    p.set(0, dim - 1, s);
    p.set(dim - 1, dim - 1, -s);
    p
}

fn gaussian_rmat<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    let mut m = RMat::zeros(n);
    for v in m.a.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
    m
}

fn gaussian_cmat<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut m = CMat::zeros(n);
    for v in m.a.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v = Complex64::new(re, im);
    }
    m
}

/// Haar-distributed element of SO(n).
fn haar_special_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    loop {
        let g = gaussian_rmat(n, rng);
        if let Some((mut q, _)) = linalg::mgs_real(&g) {
            if q.det() < 0.0 {
                for i in 0..n {
                    let v = -q.get(i, n - 1);
                    q.set(i, n - 1, v);
                }
            }
            return q;
        }
        // Singular Gaussian draws have probability zero; redraw.
    }
}

/// Haar-distributed element of U(n).
fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    loop {
        let g = gaussian_cmat(n, rng);
        if let Some((q, _)) = linalg::mgs_complex(&g) {
            return q;
        }
    }
}

/// Haar-distributed element of SU(n): rotate the last column of a Haar
/// unitary by `det⁻¹`.
fn haar_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut q = haar_unitary(n, rng);
    let d = q.det();
    let phase = d.conj() / d.norm();
    for i in 0..n {
        let v = q.get(i, n - 1) * phase;
        q.set(i, n - 1, v);
    }
    q
}

/// Embed an n×n block into the top-left of an (n+1)×(n+1) identity.
fn embed_real(block: &RMat) -> RMat {
    let dim = block.n + 1;
    let mut m = RMat::identity(dim);
    for i in 0..block.n {
        for j in 0..block.n {
            m.set(i, j, block.get(i, j));
        }
    }
    m
}

fn embed_complex(block: &CMat, corner: Complex64) -> CMat {
    let dim = block.n + 1;
    let mut m = CMat::zeros(dim);
    for i in 0..block.n {
        for j in 0..block.n {
            m.set(i, j, block.get(i, j));
        }
    }
    m.set(dim - 1, dim - 1, corner);
    m
}

fn cmat_from_real(m: &RMat) -> CMat {
    let mut out = CMat::zeros(m.n);
    for i in 0..m.n {
        for j in 0..m.n {
            out.set(i, j, Complex64::new(m.get(i, j), 0.0));
        }
    }
    out
}

/// Draw one Haar-distributed element of the maximal compact subgroup in the
/// group's matrix model.
pub fn haar_sample_one<R: Rng + ?Sized>(
    group: &GroupSpec,
    rng: &mut R,
) -> Result<ModelMatrix, HcError> {
    numeric_support(group)?;
    let n = group.n as usize;
    Ok(match (group.family, group.field) {
        (Family::Sl, FieldKind::Real) => ModelMatrix::Real(haar_special_orthogonal(n, rng)),
        (Family::Sl, FieldKind::Complex) => ModelMatrix::Complex(haar_special_unitary(n, rng)),
        (Family::So01n, _) => {
            // K ≅ SO(n) acting on the +1 eigenspace of J, identity on the
            // −1 eigenspace; conjugate back to the split basis.
            let p = split_basis(n + 1);
            let k = p.mul(&embed_real(&haar_special_orthogonal(n, rng))).mul(&p.transpose());
            ModelMatrix::Real(k)
        }
        (Family::Su1n, _) => {
            // K ≅ S(U(n)×U(1)) = {(U, det U⁻¹)}: the corner phase is forced
            // by the determinant, so Haar on K is the pushforward of Haar
            // on U(n) under a group isomorphism.
            let u = haar_unitary(n, rng);
            let corner = {
                let d = u.det();
                d.conj() / d.norm()
            };
            let p = cmat_from_real(&split_basis(n + 1));
            let k = p.mul(&embed_complex(&u, corner)).mul(&p.adjoint());
            ModelMatrix::Complex(k)
        }
        _ => unreachable!("numeric_support admits only Sl/So01n/Su1n"),
    })
}

/// `count` i.i.d. Haar samples from the maximal compact, deterministic in
/// `seed`.
pub fn haar_sample(
    group: &GroupSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<ModelMatrix>, HcError> {
    if count == 0 {
        return Err(HcError::InvalidParameter("count must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| haar_sample_one(group, &mut rng)).collect()
}

/// The torus element `a = exp(H)` of a Cartan point in the matrix model.
pub fn torus_matrix(point: &CartanPoint) -> Result<ModelMatrix, HcError> {
    let group = &point.group;
    let dim = model_dim(group)?;
    let mut diag = vec![1.0f64; dim];
    match group.family {
        Family::Sl => {
            for (d, t) in diag.iter_mut().zip(&point.log_coords) {
                *d = t.exp();
            }
        }
        Family::So01n | Family::Su1n => {
            let t = point.log_coords[0];
            diag[0] = t.exp();
            diag[dim - 1] = (-t).exp();
        }
        _ => unreachable!("model_dim admits only Sl/So01n/Su1n"),
    }
    Ok(if model_is_complex(group) {
        let mut m = CMat::zeros(dim);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(*d, 0.0));
        }
        ModelMatrix::Complex(m)
    } else {
        let mut m = RMat::zeros(dim);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, *d);
        }
        ModelMatrix::Real(m)
    })
}

/// Logarithms of the diagonal of the triangular factor in `g = k·a·n`
/// (the `|χ(a)|` values of the model's diagonal characters, in log form).
pub fn iwasawa_log_a(group: &GroupSpec, g: &ModelMatrix) -> Result<Vec<f64>, HcError> {
    numeric_support(group)?;
    let want_complex = model_is_complex(group);
    let got_complex = matches!(g, ModelMatrix::Complex(_));
    if want_complex != got_complex {
        return Err(HcError::InvalidParameter(format!(
            "matrix kind does not match the {} model",
            group.id()
        )));
    }
    if g.dim() != model_dim(group)? {
        return Err(HcError::InvalidParameter(format!(
            "matrix size {} does not match the {} model",
            g.dim(),
            group.id()
        )));
    }
    g.log_qr_diag().ok_or(HcError::DecompositionFailure)
}

/// The `|χ(a)|` values themselves (linear scale).  Prefer [`iwasawa_log_a`]
/// for strongly stretched elements.
pub fn iwasawa_a_part(group: &GroupSpec, g: &ModelMatrix) -> Result<Vec<f64>, HcError> {
    Ok(iwasawa_log_a(group, g)?.into_iter().map(f64::exp).collect())
}

/// Log-values of the simple restricted roots at the torus part encoded by
/// the diagonal logs `ld`.
fn simple_log_alpha(group: &GroupSpec, ld: &[f64]) -> Vec<f64> {
    match group.family {
        Family::Sl => ld.windows(2).map(|w| w[0] - w[1]).collect(),
        Family::So01n | Family::Su1n => vec![ld[0]],
        _ => unreachable!("numeric groups only"),
    }
}

/// Exponents of the simple roots in `δ_B`, as floats.
fn modular_coefficients(group: &GroupSpec) -> Vec<f64> {
    modular_weight(group).coords().iter().map(to_f64).collect()
}

// ─────────────────────────────────────────────────────────────────────────────
// Monte Carlo estimation
// ─────────────────────────────────────────────────────────────────────────────

/// A Monte Carlo estimate of Ξ at one group element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Estimate `Ξ(g)` for an arbitrary model matrix `g` by averaging
/// `δ_B(a(g·k))^{-1/2}` over Haar samples `k`.  The integrand is evaluated
/// in log space, so torus elements with `t` up to ~40 are safe.
pub fn hc_estimate_matrix(
    group: &GroupSpec,
    g: &ModelMatrix,
    n_samples: u64,
    seed: u64,
) -> Result<HCEstimate, HcError> {
    numeric_support(group)?;
    if n_samples == 0 {
        return Err(HcError::InvalidParameter("n_samples must be ≥ 1".into()));
    }
    if g.dim() != model_dim(group)? {
        return Err(HcError::InvalidParameter(
            "matrix size does not match the group model".into(),
        ));
    }
    let coeffs = modular_coefficients(group);
    let n_blocks = n_samples.div_ceil(BLOCK);

    // Each block owns an independent RNG stream; the reduction below walks
    // blocks in index order so the result is independent of thread timing.
    let partials: Result<Vec<(f64, f64)>, HcError> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n_samples);
            let mut sum = 0.0f64;
            let mut sumsq = 0.0f64;
            for _ in lo..hi {
                let k = haar_sample_one(group, &mut rng)?;
                let gk = g.mul(&k);
                let ld = gk.log_qr_diag().ok_or(HcError::DecompositionFailure)?;
                let log_alpha = simple_log_alpha(group, &ld);
                let log_delta: f64 = coeffs
                    .iter()
                    .zip(&log_alpha)
                    .map(|(c, a)| c * a)
                    .sum();
                let f = (-0.5 * log_delta).exp();
                sum += f;
                sumsq += f * f;
            }
            Ok((sum, sumsq))
        })
        .collect();

    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    for (s, s2) in partials? {
        sum += s;
        sumsq += s2;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let variance = if n_samples > 1 {
        ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(HCEstimate {
        value: mean,
        std_error: (variance / n).sqrt(),
        n_samples,
        seed,
    })
}

/// Estimate `Ξ(a)` at a chamber point.  Requires `n_samples ≥ 10³`.
pub fn hc_estimate(
    point: &CartanPoint,
    n_samples: u64,
    seed: u64,
) -> Result<HCEstimate, HcError> {
    if n_samples < MIN_SAMPLES {
        return Err(HcError::InvalidParameter(format!(
            "n_samples must be ≥ {MIN_SAMPLES}"
        )));
    }
    let g = torus_matrix(point)?;
    hc_estimate_matrix(&point.group, &g, n_samples, seed)
}

// ─────────────────────────────────────────────────────────────────────────────
// Bound checking along a chamber ray
// ─────────────────────────────────────────────────────────────────────────────

/// One grid point of a [`BoundCheckReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub t: f64,
    pub xi: f64,
    /// Monte Carlo standard error of `xi`; `None` for the quadrature backend.
    pub std_error: Option<f64>,
    /// `r(t) = Ξ(a_t)·δ_B^{1/2}(a_t)` — must stay positive (lower bound).
    pub lower: f64,
    /// `u(t) = r(t)·δ_B^{-ε}(a_t)` — must eventually decrease (upper bound).
    pub upper: f64,
}

/// Empirical two-sided envelope check for Ξ along the scalar chamber ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub group: String,
    pub method: Method,
    pub epsilon: f64,
    pub points: Vec<BoundPoint>,
    /// Index of the maximum of `u`; the decrease test runs on the suffix.
    pub peak_index: usize,
    pub pass_lower: bool,
    pub pass_upper: bool,
}

/// Log of `δ_B(a_t)` along the scalar ray.
fn log_delta_scalar(group: &GroupSpec, t: f64) -> f64 {
    let coeffs = modular_coefficients(group);
    let log_alpha: Vec<f64> = match group.family {
        Family::Sl => vec![2.0 * t], // a_t = diag(e^t, e^{-t}), α(a) = e^{2t}
        Family::So01n | Family::Su1n => vec![t],
        _ => unreachable!("numeric groups only"),
    };
    coeffs.iter().zip(&log_alpha).map(|(c, a)| c * a).sum()
}

fn quadrature_xi(group: &GroupSpec, t: f64) -> Result<f64, HcError> {
    if group.family == Family::Sl && group.n == 2 {
        match group.field {
            FieldKind::Real => return Ok(quadrature::xi_sl2_real(t)),
            FieldKind::Complex => return Ok(quadrature::xi_sl2_complex(t)),
            _ => {}
        }
    }
    Err(HcError::QuadratureUnsupported(group.id()))
}

/// Certify the shape of the two-sided spherical bounds on a grid `t_grid`
/// (strictly increasing, nonnegative): the lower surrogate `r(t)` must be
/// positive everywhere, and the upper surrogate `u(t)` must be
/// non-increasing beyond its maximum, with at least two grid points past the
/// peak so the decrease is actually witnessed.  Slack: 3 combined standard
/// errors for the Monte Carlo backend, 10⁻⁹ relative for quadrature.
pub fn hc_bound_check(
    group: &GroupSpec,
    t_grid: &[f64],
    epsilon: f64,
    method: Method,
    n_samples: u64,
    seed: u64,
) -> Result<BoundCheckReport, HcError> {
    numeric_support(group)?;
    if t_grid.is_empty() {
        return Err(HcError::InvalidParameter("empty grid".into()));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HcError::InvalidParameter(
            "grid must be strictly increasing".into(),
        ));
    }
    if t_grid[0] < 0.0 {
        return Err(HcError::InvalidParameter("grid must be nonnegative".into()));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(HcError::InvalidParameter(
            "epsilon must lie in (0, 1/2)".into(),
        ));
    }

    let mut points = Vec::with_capacity(t_grid.len());
    // Standard error of u(t), zero for quadrature; kept outside the serialized
    // report points so the slack rule stays in one place.
    let mut u_errs = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (xi, std_error) = match method {
            Method::Quadrature => (quadrature_xi(group, t)?, None),
            Method::MonteCarlo => {
                let point = CartanPoint::scalar(group.clone(), t)?;
                let est = hc_estimate(&point, n_samples.max(MIN_SAMPLES), seed)?;
                (est.value, Some(est.std_error))
            }
        };
        let log_delta = log_delta_scalar(group, t);
        let lower = (xi.ln() + 0.5 * log_delta).exp();
        let upper = (xi.ln() + (0.5 - epsilon) * log_delta).exp();
        u_errs.push(match std_error {
            Some(se) => se * ((0.5 - epsilon) * log_delta).exp(),
            None => 1e-9 * (1.0 + upper.abs()),
        });
        points.push(BoundPoint {
            t,
            xi,
            std_error,
            lower,
            upper,
        });
    }

    let pass_lower = points.iter().all(|p| p.lower.is_finite() && p.lower > 0.0);

    let peak_index = points
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.upper.total_cmp(&b.upper))
        .map(|(i, _)| i)
        .unwrap();
    let tail_long_enough = points.len() - 1 - peak_index >= 2;
    let tail_decreasing = (peak_index..points.len() - 1).all(|i| {
        let slack = 3.0 * (u_errs[i].powi(2) + u_errs[i + 1].powi(2)).sqrt();
        points[i + 1].upper <= points[i].upper + slack
    });
    let pass_upper = tail_long_enough && tail_decreasing;

    Ok(BoundCheckReport {
        group: group.id(),
        method,
        epsilon,
        points,
        peak_index,
        pass_lower,
        pass_upper,
    })
}

// ─────────────────────────────────────────────────────────────────────────────
// Deterministic quadrature backends (rank-one compact factor only)
// ─────────────────────────────────────────────────────────────────────────────

/// Dense deterministic quadrature for the two groups whose compact factor
/// integral collapses to one dimension.
///
/// * `SL(2,ℝ)`: with `k` the rotation by θ and `a_t = diag(e^t, e^{-t})`,
///   the first column of `a_t·k` has norm `(e^{2t}cos²θ + e^{-2t}sin²θ)^{1/2}`
///   and `δ_B^{-1/2}` is its reciprocal, so
///   `Ξ(a_t) = (1/2π)∫₀^{2π} (e^{2t}cos²θ + e^{-2t}sin²θ)^{-1/2} dθ`.
/// * `SL(2,ℂ)`: only `|k₁₁|²` enters the integrand, and for Haar SU(2) that
///   quantity is uniform on `[0,1]`, so
///   `Ξ(a_t) = ∫₀¹ (e^{2t}u + e^{-2t}(1−u))^{-1} du`.
///
/// Both integrands develop boundary layers of width `e^{-2t}`/`e^{-4t}`, so
/// uniform grids are useless at large `t`; instead each integral is split
/// into dyadic panels accumulating at the layer and integrated by composite
/// Simpson panels, giving ~12 correct digits across the tested range.
///
/// Closed forms used only as cross-checks in tests: the real case equals
/// `e^{-t}/AGM(1, e^{-2t})` (complete elliptic integral via the
/// arithmetic–geometric mean), the complex case equals `2t/sinh(2t)`.
pub mod quadrature {
    /// Composite Simpson rule with `n_sub` (even) subintervals.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n_sub: usize) -> f64 {
        debug_assert!(n_sub % 2 == 0);
        let h = (b - a) / n_sub as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n_sub {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    /// Integrate `f` over `(0, upper]` with dyadic panels `[upper·2^{-k-1},
    /// upper·2^{-k}]`; the remaining `(0, upper·2^{-levels}]` sliver is
    /// dropped (callers choose `levels` so the integrand-bound × width is
    /// far below the target accuracy).
    fn dyadic_to_zero(f: impl Fn(f64) -> f64 + Copy, upper: f64, levels: u32, n_sub: usize) -> f64 {
        let mut total = 0.0;
        let mut hi = upper;
        for _ in 0..levels {
            let lo = hi * 0.5;
            total += simpson(f, lo, hi, n_sub);
            hi = lo;
        }
        total
    }

    /// Arithmetic–geometric mean, quadratically convergent.
    pub fn agm(a0: f64, b0: f64) -> f64 {
        assert!(a0 > 0.0 && b0 > 0.0);
        let (mut a, mut b) = (a0, b0);
        for _ in 0..64 {
            if (a - b).abs() <= 1e-16 * a.abs() {
                break;
            }
            let (na, nb) = (0.5 * (a + b), (a * b).sqrt());
            a = na;
            b = nb;
        }
        0.5 * (a + b)
    }

    /// Dense quadrature for Ξ on SL(2,ℝ) at `a_t = diag(e^t, e^{-t})`.
    pub fn xi_sl2_real(t: f64) -> f64 {
        let t = t.abs();
        let p = (2.0 * t).exp();
        let q = (-2.0 * t).exp();
        // Substituting u = cos²θ and splitting at 1/2 with u = v², 1−u = w²:
        // Ξ = (1/π)[∫₀^{1/√2} 2 dv/(√(1−v²)√(q+(p−q)v²))
        //          + ∫₀^{1/√2} 2 dw/(√(1−w²)√(p−(p−q)w²))].
        // The v-integrand varies on scale √(q/p) = e^{-2t} near 0 — dyadic
        // panels; the w-integrand is uniformly smooth — one Simpson rule.
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let fv = move |v: f64| 2.0 / ((1.0 - v * v).sqrt() * (q + (p - q) * v * v).sqrt());
        let fw = move |w: f64| 2.0 / ((1.0 - w * w).sqrt() * (p - (p - q) * w * w).sqrt());
        let part_v = dyadic_to_zero(fv, half, 90, 512);
        let part_w = simpson(fw, 0.0, half, 1 << 14);
        (part_v + part_w) / std::f64::consts::PI
    }

    /// Closed form for the same quantity via the arithmetic–geometric mean:
    /// `Ξ(a_t) = (2/π)e^{-t}K(√(1−e^{-4t})) = e^{-t}/AGM(1, e^{-2t})`.
    /// Kept as an independent cross-check of [`xi_sl2_real`].
    pub fn xi_sl2_real_closed(t: f64) -> f64 {
        let t = t.abs();
        (-t).exp() / agm(1.0, (-2.0 * t).exp())
    }

    /// Dense quadrature for Ξ on SL(2,ℂ) at `a_t = diag(e^t, e^{-t})`.
    pub fn xi_sl2_complex(t: f64) -> f64 {
        let t = t.abs();
        let a = (2.0 * t).exp();
        let b = (-2.0 * t).exp();
        // f(u) = 1/(b + (a−b)u) is a hyperbola varying over scales down to
        // b/a = e^{-4t} near u = 0; dyadic panels resolve every scale.
        let f = move |u: f64| 1.0 / (b + (a - b) * u);
        dyadic_to_zero(f, 1.0, 140, 512)
    }

    /// Closed form `2t/sinh(2t)`, cross-check for [`xi_sl2_complex`].
    pub fn xi_sl2_complex_closed(t: f64) -> f64 {
        let x = 2.0 * t.abs();
        if x < 1e-8 {
            1.0 - x * x / 6.0
        } else {
            x / x.sinh()
        }
    }
}

// ─────────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::GroupSpec;

    fn sl2r() -> GroupSpec {
        GroupSpec::sl(2, FieldKind::Real).unwrap()
    }

    fn sl2c() -> GroupSpec {
        GroupSpec::sl(2, FieldKind::Complex).unwrap()
    }

    fn max_abs_diff_real(a: &RMat, b: &RMat) -> f64 {
        a.a.iter()
            .zip(&b.a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Split Gram matrix J of the rank-one models.
    fn j_form(dim: usize) -> RMat {
        let mut j = RMat::zeros(dim);
        j.set(0, dim - 1, 1.0);
        j.set(dim - 1, 0, 1.0);
        for i in 1..dim - 1 {
            j.set(i, i, 1.0);
        }
        j
    }

    #[test]
    fn chamber_validation() {
        let g = GroupSpec::sl(3, FieldKind::Real).unwrap();
        assert!(CartanPoint::new(g.clone(), vec![1.0, 0.0, -1.0]).is_ok());
        // Wrong length.
        assert!(matches!(
            CartanPoint::new(g.clone(), vec![1.0, -1.0]),
            Err(HcError::InvalidChamber(_))
        ));
        // Sum far from zero.
        assert!(matches!(
            CartanPoint::new(g.clone(), vec![1.0, 0.0, -0.5]),
            Err(HcError::InvalidChamber(_))
        ));
        // Not descending.
        assert!(matches!(
            CartanPoint::new(g, vec![-1.0, 0.0, 1.0]),
            Err(HcError::InvalidChamber(_))
        ));
        // Rank-one: negative t rejected.
        let h = GroupSpec::so01n(3).unwrap();
        assert!(CartanPoint::scalar(h.clone(), 0.7).is_ok());
        assert!(matches!(
            CartanPoint::scalar(h, -0.1),
            Err(HcError::InvalidChamber(_))
        ));
        // No scalar ray for SL(3).
        assert!(matches!(
            CartanPoint::scalar(GroupSpec::sl(3, FieldKind::Real).unwrap(), 1.0),
            Err(HcError::InvalidParameter(_))
        ));
    }

    #[test]
    fn unsupported_groups_are_rejected() {
        let q = GroupSpec::sl(3, FieldKind::Quaternion).unwrap();
        assert!(matches!(
            haar_sample(&q, 1, 0),
            Err(HcError::UnsupportedNumericField(_))
        ));
        let sp = GroupSpec::sp1n(2).unwrap();
        assert!(matches!(
            CartanPoint::scalar(sp, 1.0).and_then(|p| hc_estimate(&p, 1000, 0)),
            Err(HcError::UnsupportedNumericField(_))
        ));
        // Quadrature backend is narrower still.
        let so = GroupSpec::so01n(3).unwrap();
        assert!(matches!(
            hc_bound_check(&so, &[1.0, 2.0, 3.0], 0.1, Method::Quadrature, 0, 0),
            Err(HcError::QuadratureUnsupported(_))
        ));
    }

    #[test]
    fn iwasawa_identity_and_compact_give_ones() {
        let g = sl2r();
        let id = ModelMatrix::Real(RMat::identity(2));
        let a = iwasawa_a_part(&g, &id).unwrap();
        assert!(a.iter().all(|x| (x - 1.0).abs() < 1e-14));

        // Any k ∈ K is absorbed into the compact factor.
        for (i, k) in haar_sample(&g, 4, 5).unwrap().iter().enumerate() {
            let a = iwasawa_a_part(&g, k).unwrap();
            assert!(
                a.iter().all(|x| (x - 1.0).abs() < 1e-12),
                "sample {i} gave a-part {a:?}"
            );
        }
        let su = GroupSpec::su1n(2).unwrap();
        for k in haar_sample(&su, 4, 5).unwrap() {
            let a = iwasawa_a_part(&su, &k).unwrap();
            assert!(a.iter().all(|x| (x - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn iwasawa_diagonal_is_its_own_a_part() {
        let g = sl2r();
        let point = CartanPoint::scalar(g.clone(), 1.0).unwrap();
        let m = torus_matrix(&point).unwrap();
        let a = iwasawa_a_part(&g, &m).unwrap();
        assert!((a[0] - 1.0f64.exp()).abs() < 1e-12);
        assert!((a[1] - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn haar_moments_match_exact_values() {
        // Mean of k₁₁ vanishes by symmetry; mean of k₁₁² is 1/n on SO(n).
        let samples = haar_sample(&sl2r(), 10_000, 7).unwrap();
        let (mut m1, mut m2) = (0.0f64, 0.0f64);
        for k in &samples {
            let ModelMatrix::Real(m) = k else { unreachable!() };
            m1 += m.get(0, 0);
            m2 += m.get(0, 0) * m.get(0, 0);
        }
        m1 /= samples.len() as f64;
        m2 /= samples.len() as f64;
        assert!(m1.abs() < 4.0 / (samples.len() as f64).sqrt(), "mean {m1}");
        assert!((m2 - 0.5).abs() < 0.02, "second moment {m2}");

        let sl3 = GroupSpec::sl(3, FieldKind::Real).unwrap();
        let samples = haar_sample(&sl3, 10_000, 7).unwrap();
        let mut m2 = 0.0f64;
        for k in &samples {
            let ModelMatrix::Real(m) = k else { unreachable!() };
            m2 += m.get(0, 0) * m.get(0, 0);
        }
        m2 /= samples.len() as f64;
        assert!((m2 - 1.0 / 3.0).abs() < 0.02, "second moment {m2}");
    }

    #[test]
    fn rank_one_compact_samples_lie_in_the_group() {
        let so = GroupSpec::so01n(2).unwrap();
        let j = j_form(3);
        for k in haar_sample(&so, 6, 3).unwrap() {
            let ModelMatrix::Real(m) = k else { unreachable!() };
            // Orthogonal, form-preserving, determinant one.
            assert!(m.orthogonality_defect() < 1e-12);
            let mjm = m.transpose().mul(&j).mul(&m);
            assert!(max_abs_diff_real(&mjm, &j) < 1e-12);
            assert!((m.det() - 1.0).abs() < 1e-12);
        }

        let su = GroupSpec::su1n(2).unwrap();
        let jc = cmat_from_real(&j_form(3));
        for k in haar_sample(&su, 6, 3).unwrap() {
            let ModelMatrix::Complex(m) = k else { unreachable!() };
            assert!(m.orthogonality_defect() < 1e-12);
            let mjm = m.adjoint().mul(&jc).mul(&m);
            let diff: f64 = mjm
                .a
                .iter()
                .zip(&jc.a)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
            assert!((m.det() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn xi_at_identity_is_one_with_zero_error() {
        for group in [sl2r(), GroupSpec::su1n(2).unwrap()] {
            let point = CartanPoint::scalar(group.clone(), 0.0).unwrap();
            let est = hc_estimate(&point, 1000, 99).unwrap();
            assert!((est.value - 1.0).abs() < 1e-12, "{}: {}", group.id(), est.value);
            assert!(est.std_error < 1e-12);
        }
    }

    #[test]
    fn quadrature_agrees_with_closed_forms() {
        for t in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let q = quadrature::xi_sl2_real(t);
            let c = quadrature::xi_sl2_real_closed(t);
            assert!(
                (q - c).abs() < 1e-9 * c,
                "real t={t}: quadrature {q} vs closed {c}"
            );
        }
        for t in [0.0, 0.5, 2.0, 6.0] {
            let q = quadrature::xi_sl2_complex(t);
            let c = quadrature::xi_sl2_complex_closed(t);
            assert!(
                (q - c).abs() < 1e-9 * c,
                "complex t={t}: quadrature {q} vs closed {c}"
            );
        }
        assert!((quadrature::xi_sl2_real(0.0) - 1.0).abs() < 1e-12);
        assert!((quadrature::xi_sl2_complex(0.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn monte_carlo_matches_quadrature() {
        let point = CartanPoint::scalar(sl2r(), 2.0).unwrap();
        let est = hc_estimate(&point, 40_000, 11).unwrap();
        let oracle = quadrature::xi_sl2_real(2.0);
        assert!(
            (est.value - oracle).abs() < 3.0 * est.std_error,
            "MC {} ± {} vs oracle {}",
            est.value,
            est.std_error,
            oracle
        );

        let point = CartanPoint::scalar(sl2c(), 1.5).unwrap();
        let est = hc_estimate(&point, 40_000, 11).unwrap();
        let oracle = quadrature::xi_sl2_complex(1.5);
        assert!(
            (est.value - oracle).abs() < 3.0 * est.std_error,
            "MC {} ± {} vs oracle {}",
            est.value,
            est.std_error,
            oracle
        );
    }

    #[test]
    fn estimates_are_deterministic_and_seed_sensitive() {
        let point = CartanPoint::scalar(sl2r(), 1.0).unwrap();
        let a = hc_estimate(&point, 5_000, 42).unwrap();
        let b = hc_estimate(&point, 5_000, 42).unwrap();
        assert_eq!(a, b);
        let c = hc_estimate(&point, 5_000, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn variance_law_for_sl2_real() {
        // E[f²] = 1 exactly on this family, so the standard error must be
        // √((1−Ξ²)/n) up to sampling noise in the variance itself.
        let point = CartanPoint::scalar(sl2r(), 2.0).unwrap();
        let est = hc_estimate(&point, 40_000, 17).unwrap();
        let predicted = ((1.0 - est.value * est.value) / est.n_samples as f64).sqrt();
        assert!(
            (est.std_error - predicted).abs() < 0.1 * predicted,
            "std_error {} vs predicted {}",
            est.std_error,
            predicted
        );
    }

    #[test]
    fn symmetry_under_inverse() {
        // Ξ(a) = Ξ(a⁻¹); the inverse leaves the chamber so it goes through
        // the raw matrix interface.
        let g = sl2r();
        let mut inv = RMat::zeros(2);
        inv.set(0, 0, (-2.0f64).exp());
        inv.set(1, 1, (2.0f64).exp());
        let est_inv = hc_estimate_matrix(&g, &ModelMatrix::Real(inv), 40_000, 23).unwrap();
        let est_fwd = hc_estimate(&CartanPoint::scalar(g, 2.0).unwrap(), 40_000, 29).unwrap();
        let combined = (est_inv.std_error.powi(2) + est_fwd.std_error.powi(2)).sqrt();
        assert!(
            (est_inv.value - est_fwd.value).abs() < 3.0 * combined,
            "{} vs {}",
            est_inv.value,
            est_fwd.value
        );
    }

    #[test]
    fn xi_decays_along_the_ray() {
        let mut prev = f64::INFINITY;
        for t in [0.0, 1.0, 2.0, 3.0, 4.0] {
            let v = quadrature::xi_sl2_real(t);
            assert!(v < prev || t == 0.0, "xi not decreasing at t={t}");
            assert!(v > 0.0 && v <= 1.0 + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn bound_check_passes_on_reference_grids() {
        let grid: Vec<f64> = (1..=8).map(|k| k as f64).collect();
        let report =
            hc_bound_check(&sl2r(), &grid, 0.1, Method::Quadrature, 0, 0).unwrap();
        assert!(report.pass_lower, "lower failed: {report:?}");
        assert!(report.pass_upper, "upper failed: {report:?}");
        // r(t) grows roughly linearly: r(2t)/r(t) stays well below 4.
        let r2 = report.points[1].lower;
        let r4 = report.points[3].lower;
        let r8 = report.points[7].lower;
        assert!(r4 / r2 < 3.0 && r8 / r4 < 3.0, "r not ~linear: {r2} {r4} {r8}");

        let grid: Vec<f64> = (1..=6).map(|k| k as f64).collect();
        let report =
            hc_bound_check(&sl2c(), &grid, 0.1, Method::Quadrature, 0, 0).unwrap();
        assert!(report.pass_lower && report.pass_upper, "{report:?}");
    }

    #[test]
    fn bound_check_at_zero_gives_r_one() {
        let grid = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let report =
            hc_bound_check(&sl2r(), &grid, 0.1, Method::Quadrature, 0, 0).unwrap();
        assert!((report.points[0].lower - 1.0).abs() < 1e-9);
        assert!((report.points[0].upper - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bound_check_monte_carlo_backend_works_on_rank_one() {
        // δ_B = e^t for SO₀(1,2) and Ξ ~ c·t·e^{-t/2}, so u ~ t·e^{-εt}
        // peaks near t = 1/ε; ε = 0.3 puts the peak well inside the grid.
        let so = GroupSpec::so01n(2).unwrap();
        let grid = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let report =
            hc_bound_check(&so, &grid, 0.3, Method::MonteCarlo, 20_000, 31).unwrap();
        assert!(report.pass_lower);
        assert!(report.pass_upper, "{report:?}");
    }

    #[test]
    fn bound_check_rejects_bad_grids() {
        assert!(matches!(
            hc_bound_check(&sl2r(), &[], 0.1, Method::Quadrature, 0, 0),
            Err(HcError::InvalidParameter(_))
        ));
        assert!(matches!(
            hc_bound_check(&sl2r(), &[1.0, 1.0], 0.1, Method::Quadrature, 0, 0),
            Err(HcError::InvalidParameter(_))
        ));
        assert!(matches!(
            hc_bound_check(&sl2r(), &[1.0, 2.0], 0.7, Method::Quadrature, 0, 0),
            Err(HcError::InvalidParameter(_))
        ));
    }

    #[test]
    fn estimate_requires_min_samples() {
        let point = CartanPoint::scalar(sl2r(), 1.0).unwrap();
        assert!(matches!(
            hc_estimate(&point, 999, 0),
            Err(HcError::InvalidParameter(_))
        ));
    }
}
