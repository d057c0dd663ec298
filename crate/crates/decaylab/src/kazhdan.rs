//! Kazhdan constants for the pair `(G ⋉ V, V)` from spherical-function data.
//!
//! For a chamber element `h` with `Ξ(h) < 1` and an integrability exponent
//! `m` (the least integer with `2m ≥ p`, taken from the decay machinery in
//! [`crate::exponents`]), the compact set `K ∪ {h}` is a Kazhdan set and
//!
//! ```text
//!     κ(x) = √(2(1−x)) / (√(2(1−x)) + 3) ,      x = Ξ(h)^{1/m} ,
//! ```
//!
//! is an explicit Kazhdan constant.  When `V` splits into `N` irreducible
//! summands with per-summand witnesses `h₁,…,h_N`, the pair constant is
//! `(1/√N)·min_i κ(xᵢ)`.
//!
//! `κ` is strictly decreasing on `(0,1]`, vanishes at `x = 1` (an `h` that
//! the representation cannot distinguish from `K` certifies nothing), and
//! approaches — never attains — the supremum `√2/(√2+3) ≈ 0.3203772` as
//! `x → 0⁺`.

use crate::catalog::{CatalogError, GroupSpec, RepSpec};
use crate::exponents::{baseline_exponent, improved_exponent, ExponentError, Provenance};
use crate::hcfun::{hc_estimate, CartanPoint, HCEstimate, HcError};
use crate::rational::Rat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KazhdanError {
    #[error("xi power {0} outside (0, 1]")]
    InvalidXi(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("witness element lies in the compact factor and certifies nothing")]
    TrivialElement,
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Hc(#[from] HcError),
}

/// Supremum of `κ` on `(0,1]`: `√2/(√2+3)`, approached as `x → 0⁺` and
/// never attained.
pub fn kappa_sup() -> f64 {
    let s = 2.0f64.sqrt();
    s / (s + 3.0)
}

/// The constant `κ(x) = √(2(1−x))/(√(2(1−x)) + 3)` for `x ∈ (0, 1]`.
pub fn kappa(xi_pow: f64) -> Result<f64, KazhdanError> {
    if !(xi_pow > 0.0 && xi_pow <= 1.0) {
        return Err(KazhdanError::InvalidXi(xi_pow));
    }
    let s = (2.0 * (1.0 - xi_pow)).sqrt();
    Ok(s / (s + 3.0))
}

/// Combine per-summand constants: `(1/√N)·min κᵢ`.  Every κ must lie
/// strictly between 0 and the supremum `√2/(√2+3)` (the open range `κ`
/// actually attains on witnesses with `Ξ < 1`), and `n` must match the list
/// length.
pub fn pair_constant(kappas: &[f64], n: usize) -> Result<f64, KazhdanError> {
    if kappas.is_empty() {
        return Err(KazhdanError::InvalidInput(
            "at least one component constant required".into(),
        ));
    }
    if kappas.len() != n {
        return Err(KazhdanError::InvalidInput(format!(
            "component count {n} does not match {} constants",
            kappas.len()
        )));
    }
    let sup = kappa_sup();
    let mut min = f64::INFINITY;
    for &k in kappas {
        if !(k > 0.0 && k < sup) {
            return Err(KazhdanError::InvalidInput(format!(
                "constant {k} outside (0, {sup})"
            )));
        }
        min = min.min(k);
    }
    Ok(min / (n as f64).sqrt())
}

/// One irreducible summand's witness data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KazhdanComponent {
    /// Integer power applied to Ξ (the least `m` with `2m ≥ p`).
    pub m: u64,
    /// Chamber witness for this summand.
    pub h: CartanPoint,
    /// `Ξ(h)^{1/m}`, in `(0, 1]`.
    pub xi_pow: f64,
}

/// Witness data for a representation with `N` irreducible summands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KazhdanInput {
    pub components: Vec<KazhdanComponent>,
}

impl KazhdanInput {
    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// `(1/√N)·min κ(xᵢ)` over the components.
    pub fn pair_constant(&self) -> Result<f64, KazhdanError> {
        let kappas: Result<Vec<f64>, KazhdanError> = self
            .components
            .iter()
            .map(|c| kappa(c.xi_pow))
            .collect();
        pair_constant(&kappas?, self.n())
    }
}

/// Full record of an end-to-end constant computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KazhdanReport {
    pub group: String,
    pub rep: String,
    /// Which exponent machinery produced `p` (improved where available).
    pub provenance: Provenance,
    #[serde(with = "crate::rational::rat_serde")]
    pub p: Rat,
    pub m: u64,
    pub xi: HCEstimate,
    pub xi_pow: f64,
    pub kappa: f64,
}

/// Kazhdan constant for the generating pair `(K, h)`: chain the exponent
/// report (improved construction where catalogued, baseline otherwise) into
/// `m`, estimate `Ξ(h)` by Monte Carlo, and apply `κ(Ξ(h)^{1/m})`.
///
/// The estimate is clamped to 1 before taking the root: Monte Carlo noise
/// can push a near-identity estimate a hair above the exact upper bound
/// `Ξ ≤ 1`, and `κ` is defined on `(0,1]`.
pub fn kazhdan_for_set(
    group: &GroupSpec,
    rep: &RepSpec,
    h: &CartanPoint,
    n_samples: u64,
    seed: u64,
) -> Result<KazhdanReport, KazhdanError> {
    if h.group() != group {
        return Err(KazhdanError::InvalidInput(format!(
            "witness belongs to {}, not {}",
            h.group().id(),
            group.id()
        )));
    }
    if h.is_identity() {
        return Err(KazhdanError::TrivialElement);
    }
    let report = match improved_exponent(group, rep) {
        Ok(r) => r,
        Err(
            ExponentError::UnsupportedMechanism { .. }
            | ExponentError::Catalog(CatalogError::NoImprovement { .. }),
        ) => baseline_exponent(group, rep)?,
        Err(e) => return Err(e.into()),
    };
    let xi = hc_estimate(h, n_samples, seed)?;
    let xi_pow = xi.value.min(1.0).powf(1.0 / report.m as f64);
    let kappa = kappa(xi_pow)?;
    Ok(KazhdanReport {
        group: group.id(),
        rep: rep.name().into(),
        provenance: report.provenance,
        p: report.p,
        m: report.m,
        xi,
        xi_pow,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FieldKind;
    use crate::hcfun::quadrature;
    use crate::rational::rint;

    #[test]
    fn kappa_exact_values() {
        // √(2·0) = 0 and √(2·1/2) = 1 are exact in binary floating point,
        // so these two values admit equality assertions.
        assert_eq!(kappa(1.0).unwrap(), 0.0);
        assert_eq!(kappa(0.5).unwrap(), 0.25);
        assert!((kappa(1e-300).unwrap() - kappa_sup()).abs() < 1e-12);
        assert!((kappa_sup() - 0.3203772410170407).abs() < 1e-15);
    }

    #[test]
    fn kappa_rejects_out_of_range() {
        for bad in [0.0, -0.5, 1.0 + 1e-9, 2.0, f64::NAN] {
            assert!(matches!(kappa(bad), Err(KazhdanError::InvalidXi(_))), "{bad}");
        }
    }

    #[test]
    fn kappa_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let x = i as f64 / 100.0;
            let k = kappa(x).unwrap();
            assert!(k < prev, "not strictly decreasing at x={x}");
            prev = k;
        }
    }

    #[test]
    fn pair_constant_identities() {
        assert!((pair_constant(&[0.25], 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((pair_constant(&[0.1, 0.2, 0.3, 0.25], 4).unwrap() - 0.05).abs() < 1e-12);
        let two = pair_constant(&[0.3, 0.3], 2).unwrap();
        assert!((two - 0.3 / 2.0f64.sqrt()).abs() < 1e-12);
        // Never exceeds the smallest component.
        assert!(two <= 0.3);
    }

    #[test]
    fn pair_constant_rejects_bad_input() {
        assert!(matches!(
            pair_constant(&[], 0),
            Err(KazhdanError::InvalidInput(_))
        ));
        assert!(matches!(
            pair_constant(&[0.2, 0.2], 3),
            Err(KazhdanError::InvalidInput(_))
        ));
        // 0 and the supremum are not attainable component constants.
        assert!(pair_constant(&[0.0], 1).is_err());
        assert!(pair_constant(&[kappa_sup()], 1).is_err());
    }

    #[test]
    fn input_glue_matches_manual_combination() {
        let g = GroupSpec::sl(2, FieldKind::Real).unwrap();
        let input = KazhdanInput {
            components: vec![
                KazhdanComponent {
                    m: 1,
                    h: CartanPoint::scalar(g.clone(), 2.0).unwrap(),
                    xi_pow: 0.5,
                },
                KazhdanComponent {
                    m: 2,
                    h: CartanPoint::scalar(g, 3.0).unwrap(),
                    xi_pow: 0.8,
                },
            ],
        };
        let by_hand = pair_constant(
            &[kappa(0.5).unwrap(), kappa(0.8).unwrap()],
            2,
        )
        .unwrap();
        assert_eq!(input.pair_constant().unwrap(), by_hand);
        // Out-of-range xi_pow in a component surfaces as an error.
        let mut bad = input.clone();
        bad.components[0].xi_pow = 1.5;
        assert!(bad.pair_constant().is_err());
    }

    #[test]
    fn end_to_end_adjoint_sl2() {
        // Adjoint SL(2,ℝ): improved p = 2, so m = 1 and the constant is
        // κ(Ξ(a₂)) with Ξ checked against the dense quadrature oracle.
        let g = GroupSpec::sl(2, FieldKind::Real).unwrap();
        let h = CartanPoint::scalar(g.clone(), 2.0).unwrap();
        let report = kazhdan_for_set(&g, &RepSpec::Adjoint, &h, 40_000, 7).unwrap();
        assert_eq!(report.p, rint(2));
        assert_eq!(report.m, 1);
        let oracle = quadrature::xi_sl2_real(2.0);
        assert!(
            (report.xi.value - oracle).abs() < 3.0 * report.xi.std_error,
            "xi {} vs oracle {}",
            report.xi.value,
            oracle
        );
        assert_eq!(report.kappa, kappa(report.xi_pow).unwrap());
        // End-to-end value against the oracle-driven prediction.
        let predicted = kappa(oracle).unwrap();
        assert!(
            (report.kappa - predicted).abs() < 0.01,
            "kappa {} vs predicted {}",
            report.kappa,
            predicted
        );
    }

    #[test]
    fn trivial_witness_is_rejected() {
        let g = GroupSpec::sl(2, FieldKind::Real).unwrap();
        let h = CartanPoint::scalar(g.clone(), 0.0).unwrap();
        assert!(matches!(
            kazhdan_for_set(&g, &RepSpec::Adjoint, &h, 1000, 0),
            Err(KazhdanError::TrivialElement)
        ));
    }

    #[test]
    fn witness_group_must_match() {
        let g = GroupSpec::sl(2, FieldKind::Real).unwrap();
        let other = GroupSpec::so01n(2).unwrap();
        let h = CartanPoint::scalar(other, 1.0).unwrap();
        assert!(matches!(
            kazhdan_for_set(&g, &RepSpec::Adjoint, &h, 1000, 0),
            Err(KazhdanError::InvalidInput(_))
        ));
    }

    #[test]
    fn constant_grows_along_the_ray() {
        // Ξ decreases along the chamber ray, so κ increases.
        let g = GroupSpec::sl(2, FieldKind::Real).unwrap();
        let at = |t: f64| {
            let h = CartanPoint::scalar(g.clone(), t).unwrap();
            kazhdan_for_set(&g, &RepSpec::Standard, &h, 20_000, 13)
                .unwrap()
                .kappa
        };
        let k2 = at(2.0);
        let k4 = at(4.0);
        assert!(k4 > k2, "κ(t=4)={k4} not above κ(t=2)={k2}");
    }

    #[test]
    fn baseline_fallback_for_uncatalogued_reps() {
        // A custom copy of the standard weights has no catalogued
        // improvement; the chain must fall back to the baseline exponent.
        let g = GroupSpec::so01n(2).unwrap();
        let weights = crate::catalog::lookup_rep_weights(&g, &RepSpec::Standard).unwrap();
        let custom = RepSpec::Custom(weights);
        let h = CartanPoint::scalar(g.clone(), 2.0).unwrap();
        let report = kazhdan_for_set(&g, &custom, &h, 1_000, 3).unwrap();
        assert_eq!(report.provenance, Provenance::Baseline);
        assert_eq!(report.p, rint(3));
        assert_eq!(report.m, 2);
    }
}
