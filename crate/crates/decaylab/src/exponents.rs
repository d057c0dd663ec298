//! Decay exponents for the catalogued groups: the baseline integrability
//! exponent `p` attached to a representation's weight structure, its
//! mechanism-specific improvements, and the summary table over the classical
//! families.
//!
//! The pipeline is exact end to end.  For a weight multiset `Φ` with highest
//! weight `λ` and lowest weight `ϱ` the *baseline decay weight* is
//! `Λ = (q/2)·(λ − ϱ)` where the convention factor is `q = (1/3)^{♯Φ−1}`,
//! sharpened to `(1/3)^{♯Φ−2}` when the highest weight space is a line.
//! Writing `δ_B = Σ m_α α` for the modular weight, the exponent is
//!
//! ```text
//! p = max_j  (coefficient of α_j in δ_B) / (coefficient of α_j in Λ)
//! ```
//!
//! and `m` is the least integer with `2m ≥ p`.  Improvements replace `Λ`:
//! shell packing substitutes `|γ|` for `q`; the product bound uses
//! `δ·Σ_i λ_i` over the paired weights; the rank-one variant uses `|γ′|·β`
//! with `β` the middle weight of the chain.

use crate::catalog::{
    lookup_improvement, lookup_rep_weights, lookup_root_data, CatalogError, Family, FieldKind,
    GroupSpec, Mechanism, RepSpec,
};
use crate::lattice::{middle_weight, LatticeError, RepWeights, WeightVector};
use crate::rational::{ceil_half, pow_third, rat_serde, rint, vec_rat_serde, Rat};
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;
use thiserror::Error;

/// Which construction produced a decay weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Baseline,
    ShellImproved,
    HoweProduct,
    Rank1Beta,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Baseline => "baseline",
            Provenance::ShellImproved => "shell_improved",
            Provenance::HoweProduct => "howe_product",
            Provenance::Rank1Beta => "rank1_beta",
        }
    }
}

/// A decay weight in simple-root coordinates, tagged with its construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayWeight {
    pub vector: WeightVector,
    pub provenance: Provenance,
}

/// Exponent derived from a decay weight against a modular weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PExponent {
    #[serde(with = "rat_serde")]
    pub p: Rat,
    /// Least integer with `2m ≥ p`.
    pub m: u64,
    /// The per-simple-root ratios whose maximum is `p`.
    #[serde(with = "vec_rat_serde")]
    pub ratios: Vec<Rat>,
}

/// Full record for one `(group, representation, mechanism)` computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub group: String,
    pub rep: String,
    pub provenance: Provenance,
    /// Baseline convention factor `q`, when the construction uses one.
    #[serde(with = "crate::rational::opt_rat_serde")]
    pub q: Option<Rat>,
    /// Shell or rank-one coefficient (`γ` resp. `γ′`), when used.
    #[serde(with = "crate::rational::opt_rat_serde")]
    pub gamma: Option<Rat>,
    /// Product-bound factor `δ`, when used.
    pub delta: Option<u32>,
    pub decay: DecayWeight,
    pub delta_b: WeightVector,
    #[serde(with = "rat_serde")]
    pub p: Rat,
    pub m: u64,
    #[serde(with = "vec_rat_serde")]
    pub ratios: Vec<Rat>,
    /// True when the exponent holds as `p + ε` for every `ε > 0` rather than
    /// at `p` itself (nonarchimedean shell packing).
    pub epsilon_flag: bool,
}

#[derive(Debug, Error)]
pub enum ExponentError {
    /// Fewer than two distinct weights: no decay direction exists.
    #[error("degenerate representation: {0}")]
    DegenerateRepresentation(String),
    /// Some simple-root direction has modular growth but no decay.
    #[error("not excellent: {0}")]
    NotExcellent(String),
    /// The requested construction does not apply to this group/rep.
    #[error("unsupported mechanism for {group}/{rep}: {detail}")]
    UnsupportedMechanism {
        group: String,
        rep: String,
        detail: String,
    },
    /// Structural mismatch between the inputs.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The modular weight `Σ_{α>0} m_α·α` computed from the root table.
pub fn modular_weight(group: &GroupSpec) -> WeightVector {
    let datum = lookup_root_data(group);
    datum
        .positive_roots
        .iter()
        .fold(WeightVector::zero(datum.rank), |acc, (root, mult)| {
            &acc + &root.scale(&rint(*mult as i64))
        })
}

/// The convention factor `q` of a weight multiset: `(1/3)^{♯Φ−1}`, or
/// `(1/3)^{♯Φ−2}` when the highest weight space is one-dimensional.
pub fn q_factor(weights: &RepWeights) -> Result<Rat, ExponentError> {
    let n = weights.len() as u32;
    if n < 2 {
        return Err(ExponentError::DegenerateRepresentation(format!(
            "need at least two distinct weights, got {n}"
        )));
    }
    let exp = if weights.highest_dim() == 1 { n - 2 } else { n - 1 };
    Ok(pow_third(exp))
}

/// Maximize `δ_B`-coefficient over decay-coefficient across the simple roots.
pub fn p_from_decay(decay: &DecayWeight, delta_b: &WeightVector) -> Result<PExponent, ExponentError> {
    let d = &decay.vector;
    if d.rank() != delta_b.rank() {
        return Err(ExponentError::Mismatch(format!(
            "decay has rank {}, modular weight has rank {}",
            d.rank(),
            delta_b.rank()
        )));
    }
    if d.coords().iter().any(Signed::is_negative) {
        return Err(ExponentError::Mismatch(
            "decay weight has a negative simple-root coordinate".into(),
        ));
    }
    let mut ratios = Vec::with_capacity(d.rank());
    for j in 0..d.rank() {
        let num = delta_b.coord(j);
        let den = d.coord(j);
        if den.is_zero() {
            if num.is_zero() {
                return Err(ExponentError::Mismatch(format!(
                    "simple root {} carries neither modular growth nor decay",
                    j + 1
                )));
            }
            return Err(ExponentError::NotExcellent(format!(
                "no decay along simple root {} while the modular weight grows there",
                j + 1
            )));
        }
        ratios.push(num / den);
    }
    let p = ratios.iter().max().cloned().ok_or_else(|| {
        ExponentError::Mismatch("empty coordinate vector".into())
    })?;
    if !p.is_positive() {
        return Err(ExponentError::NotExcellent(
            "modular weight vanishes in every decay direction".into(),
        ));
    }
    let m = ceil_half(&p);
    Ok(PExponent { p, m, ratios })
}

fn assemble(
    group: &GroupSpec,
    rep: &RepSpec,
    provenance: Provenance,
    q: Option<Rat>,
    gamma: Option<Rat>,
    delta: Option<u32>,
    decay_vec: WeightVector,
    epsilon_flag: bool,
) -> Result<ExponentReport, ExponentError> {
    let decay = DecayWeight {
        vector: decay_vec,
        provenance,
    };
    let delta_b = modular_weight(group);
    let pe = p_from_decay(&decay, &delta_b)?;
    Ok(ExponentReport {
        group: group.id(),
        rep: rep.name().into(),
        provenance,
        q,
        gamma,
        delta,
        decay,
        delta_b,
        p: pe.p,
        m: pe.m,
        ratios: pe.ratios,
        epsilon_flag,
    })
}

/// Baseline exponent: decay `Λ = (q/2)(λ − ϱ)` against `δ_B`.
pub fn baseline_exponent(group: &GroupSpec, rep: &RepSpec) -> Result<ExponentReport, ExponentError> {
    let weights = lookup_rep_weights(group, rep)?;
    let q = q_factor(&weights)?;
    let span = weights.highest() - weights.lowest();
    let decay = span.scale(&(q.clone() / rint(2)));
    assemble(group, rep, Provenance::Baseline, Some(q), None, None, decay, false)
}

/// Improved exponent, dispatching on the catalogued mechanism: shell packing
/// (`|γ|` replaces `q`) or the paired-weight product bound.
pub fn improved_exponent(group: &GroupSpec, rep: &RepSpec) -> Result<ExponentReport, ExponentError> {
    let record = lookup_improvement(group, rep)?;
    match record.mechanism {
        Mechanism::ShellImprovement => {
            let gamma = record.gamma.expect("shell record carries gamma");
            let weights = lookup_rep_weights(group, rep)?;
            if weights.len() < 2 {
                return Err(ExponentError::DegenerateRepresentation(
                    "need at least two distinct weights".into(),
                ));
            }
            let span = weights.highest() - weights.lowest();
            let decay = span.scale(&(gamma.abs() / rint(2)));
            assemble(
                group,
                rep,
                Provenance::ShellImproved,
                None,
                Some(gamma),
                None,
                decay,
                record.log_correction,
            )
        }
        Mechanism::HoweProduct => howe_product_exponent(group, rep),
        Mechanism::Rank1Beta => rank1_prime_exponent(group, rep),
    }
}

/// Product-bound exponent: decay `δ·Σ_i λ_i` over the paired weights
/// `±λ_1, …, ±λ_n` of the representation.
pub fn howe_product_exponent(group: &GroupSpec, rep: &RepSpec) -> Result<ExponentReport, ExponentError> {
    let record = lookup_improvement(group, rep)?;
    let delta = match record.mechanism {
        Mechanism::HoweProduct => record.delta.expect("product record carries delta"),
        other => {
            return Err(ExponentError::UnsupportedMechanism {
                group: group.id(),
                rep: rep.name().into(),
                detail: format!(
                    "catalogued mechanism is {}, not howe_product",
                    other.name()
                ),
            })
        }
    };
    let weights = lookup_rep_weights(group, rep)?;
    // The bound multiplies rank-one estimates attached to the pairs ±λ_i, so
    // the nonzero weights must match up in ± pairs of equal dimension.
    let entries = weights.entries();
    let mut positive_sum = WeightVector::zero(weights.rank());
    for (idx, e) in entries.iter().enumerate() {
        if e.weight.is_zero() {
            continue;
        }
        let neg = -&e.weight;
        let partner = entries.iter().position(|f| f.weight == neg);
        match partner {
            Some(j) if entries[j].dim == e.dim => {
                if idx < j {
                    positive_sum = &positive_sum + &e.weight;
                }
            }
            _ => {
                return Err(ExponentError::UnsupportedMechanism {
                    group: group.id(),
                    rep: rep.name().into(),
                    detail: format!(
                        "weight {} has no matching partner of equal dimension",
                        e.weight
                    ),
                })
            }
        }
    }
    if positive_sum.is_zero() {
        return Err(ExponentError::DegenerateRepresentation(
            "no nonzero weight pairs".into(),
        ));
    }
    let decay = positive_sum.scale(&rint(delta as i64));
    assemble(
        group,
        rep,
        Provenance::HoweProduct,
        None,
        None,
        Some(delta),
        decay,
        false,
    )
}

/// Rank-one middle-weight exponent: decay `Λ′ = |γ′|·β` with `β` the middle
/// weight and `γ′` the parity-dependent packing exponent
/// (`−(1/3)^{⌈♯Φ/2⌉}`, one power of 3 weaker when the highest weight space is
/// a line).
pub fn rank1_prime_exponent(group: &GroupSpec, rep: &RepSpec) -> Result<ExponentReport, ExponentError> {
    if group.rank() != 1 {
        return Err(ExponentError::UnsupportedMechanism {
            group: group.id(),
            rep: rep.name().into(),
            detail: "the middle-weight variant is a rank-one construction".into(),
        });
    }
    let weights = lookup_rep_weights(group, rep)?;
    let beta = middle_weight(&weights)?;
    if !beta.coords().iter().all(Signed::is_positive) {
        return Err(ExponentError::Mismatch(format!(
            "middle weight {beta} is not positive; the chain is too short or unbalanced"
        )));
    }
    let n = weights.len() as u32;
    let base = n.div_ceil(2); // ♯Φ/2 rounded up: the even/odd split of the exponent
    let exp = if weights.highest_dim() == 1 { base - 1 } else { base };
    let gamma_prime = -pow_third(exp);
    let decay = beta.scale(&gamma_prime.abs());
    assemble(
        group,
        rep,
        Provenance::Rank1Beta,
        None,
        Some(gamma_prime),
        None,
        decay,
        false,
    )
}

/// One row of the family summary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkRow {
    pub group: String,
    pub family: Family,
    pub n: u32,
    pub m: Option<u32>,
    pub field: FieldKind,
    pub mechanism: Mechanism,
    #[serde(with = "rat_serde")]
    pub p: Rat,
    /// Least integer with `2·m_int ≥ p`.
    pub m_int: u64,
    pub epsilon_flag: bool,
}

/// Best catalogued exponent for each summary family: `SL(2,k)` (adjoint,
/// all three fields), the rank-one families and `Sp(2n,ℂ)` over `n_range`,
/// and `Sp(n,m)` over `n ∈ n_range, m ∈ [n, m_max]`.
pub fn remark_table(
    n_range: RangeInclusive<u32>,
    m_max: u32,
) -> Result<Vec<RemarkRow>, ExponentError> {
    let mut rows = Vec::new();
    let mut push = |group: &GroupSpec, rep: &RepSpec| -> Result<(), ExponentError> {
        let report = improved_exponent(group, rep)?;
        let mechanism = match report.provenance {
            Provenance::ShellImproved => Mechanism::ShellImprovement,
            Provenance::HoweProduct => Mechanism::HoweProduct,
            Provenance::Rank1Beta => Mechanism::Rank1Beta,
            Provenance::Baseline => unreachable!("improved_exponent never returns baselines"),
        };
        rows.push(RemarkRow {
            group: group.id(),
            family: group.family,
            n: group.n,
            m: group.m,
            field: group.field,
            mechanism,
            p: report.p,
            m_int: report.m,
            epsilon_flag: report.epsilon_flag,
        });
        Ok(())
    };

    for field in [FieldKind::Real, FieldKind::Complex, FieldKind::NonArchimedean] {
        push(&GroupSpec::sl(2, field)?, &RepSpec::Adjoint)?;
    }
    for n in n_range.clone() {
        push(&GroupSpec::su1n(n)?, &RepSpec::Standard)?;
        push(&GroupSpec::so01n(n)?, &RepSpec::Standard)?;
        push(&GroupSpec::sp1n(n)?, &RepSpec::Standard)?;
        push(&GroupSpec::sp2n(n, FieldKind::Complex)?, &RepSpec::Standard)?;
    }
    for n in n_range {
        for m in n..=m_max {
            push(&GroupSpec::spnm(n, m)?, &RepSpec::Standard)?;
        }
    }
    Ok(rows)
}
