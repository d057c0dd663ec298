//! Group/representation catalog: restricted root data with multiplicities,
//! standard and adjoint weight systems, and the recorded decay-improvement
//! mechanism for each classical family handled by this crate.
//!
//! Supported families (the "field" is the field of the matrix entries; the
//! group is an algebraic group over that field for the `SL`/`Sp(2n)` rows and
//! a real group for the rank-one and two-parameter rows):
//!
//! | family      | field            | real/relative rank | root system |
//! |-------------|------------------|--------------------|-------------|
//! | `SL(n,k)`   | ℝ, ℂ, ℍ, nonarch | n − 1              | A_{n−1}     |
//! | `Sp(2n,k)`  | ℝ, ℂ, nonarch    | n                  | C_n         |
//! | `SO₀(1,n)`  | ℝ                | 1                  | A₁          |
//! | `SU(1,n)`   | ℂ                | 1                  | BC₁         |
//! | `Sp(1,n)`   | ℍ                | 1                  | BC₁         |
//! | `SU(n,m)`   | ℂ, m ≥ n ≥ 2     | n                  | C_n / BC_n  |
//! | `Sp(n,m)`   | ℍ, m ≥ n ≥ 2     | n                  | BC_n        |
//!
//! Conventions.
//!
//! * All weight and root coordinates are relative to the simple-root basis
//!   `(α₁, …, α_r)` of the *restricted* root system, so `α_k` is the k-th
//!   coordinate unit vector.  For the C/BC-type families the torus characters
//!   `λ_i` (entry functionals of the standard matrix model) convert via
//!   `λ_i = α_i + … + α_{n−1} + c·α_n` with `c = 1/2` when `2λ_n` is the long
//!   simple root (C type: `Sp(2n)`, `SU(n,n)`, `Sp(n,n)`) and `c = 1` when
//!   `λ_n` itself is simple (BC type: `m > n`).
//! * Weight-space dimensions are counted over the group's field of
//!   definition: complex groups count complex dimensions (so the standard
//!   weight spaces of `Sp(2n,ℂ)` have dim 1), while the real forms count real
//!   dimensions (so `SU(1,n)` standard weight spaces have dim 2 and the
//!   quaternionic families dim 4).
//! * Restricted-root multiplicities follow the classical tables for these
//!   symmetric spaces (Helgason, *Differential Geometry, Lie Groups, and
//!   Symmetric Spaces*, Ch. X Table VI).

use crate::lattice::{order_weights, RepWeights, WeightVector};
use crate::rational::{rat, rint, Rat};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Ground field of the matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Real,
    Complex,
    Quaternion,
    /// A nonarchimedean local field; symbolic only (no numerics).
    NonArchimedean,
}

impl FieldKind {
    /// The factor `δ(k)`: 2 for ℂ and 1 otherwise.
    pub fn delta_factor(self) -> u32 {
        match self {
            FieldKind::Complex => 2,
            _ => 1,
        }
    }

    /// Real dimension of the field as an ℝ-algebra (nonarchimedean fields
    /// have no such dimension and return `None`).
    pub fn real_dim(self) -> Option<u32> {
        match self {
            FieldKind::Real => Some(1),
            FieldKind::Complex => Some(2),
            FieldKind::Quaternion => Some(4),
            FieldKind::NonArchimedean => None,
        }
    }

    pub fn descriptor(self) -> FieldDescriptor {
        FieldDescriptor {
            kind: self,
            delta_factor: self.delta_factor(),
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            FieldKind::Real => "R",
            FieldKind::Complex => "C",
            FieldKind::Quaternion => "H",
            FieldKind::NonArchimedean => "k",
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// A field together with its `δ(k)` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub delta_factor: u32,
}

/// Group family tags; see the module table for parameters and constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sl,
    Sp2n,
    So01n,
    Su1n,
    Sp1n,
    Sunm,
    Spnm,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sl => "SL(n,k)",
            Family::Sp2n => "Sp(2n,k)",
            Family::So01n => "SO0(1,n)",
            Family::Su1n => "SU(1,n)",
            Family::Sp1n => "Sp(1,n)",
            Family::Sunm => "SU(n,m)",
            Family::Spnm => "Sp(n,m)",
        }
    }
}

/// A concrete catalogued group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: u32,
    /// Second parameter, present only for the `SU(n,m)`/`Sp(n,m)` families.
    pub m: Option<u32>,
    pub field: FieldKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("unsupported representation for {group}: {detail}")]
    UnsupportedRepresentation { group: String, detail: String },
    #[error("no catalogued improvement for {group} with the {rep} representation")]
    NoImprovement { group: String, rep: String },
}

impl GroupSpec {
    pub fn new(
        family: Family,
        n: u32,
        m: Option<u32>,
        field: FieldKind,
    ) -> Result<Self, CatalogError> {
        let bad = |msg: String| Err(CatalogError::InvalidGroup(msg));
        match family {
            Family::Sl => {
                if n < 2 {
                    return bad(format!("SL(n,k) needs n >= 2, got n = {n}"));
                }
            }
            Family::Sp2n => {
                if n < 2 {
                    return bad(format!("Sp(2n,k) needs n >= 2, got n = {n}"));
                }
                if field == FieldKind::Quaternion {
                    return bad("Sp(2n,k) is catalogued for k = R, C or nonarchimedean".into());
                }
            }
            Family::So01n => {
                if n < 2 {
                    return bad(format!("SO0(1,n) needs n >= 2, got n = {n}"));
                }
                if field != FieldKind::Real {
                    return bad("SO0(1,n) is a real group".into());
                }
            }
            Family::Su1n => {
                if n < 2 {
                    return bad(format!("SU(1,n) needs n >= 2, got n = {n}"));
                }
                if field != FieldKind::Complex {
                    return bad("SU(1,n) has complex matrix entries".into());
                }
            }
            Family::Sp1n => {
                if n < 2 {
                    return bad(format!("Sp(1,n) needs n >= 2, got n = {n}"));
                }
                if field != FieldKind::Quaternion {
                    return bad("Sp(1,n) has quaternionic matrix entries".into());
                }
            }
            Family::Sunm | Family::Spnm => {
                let m = match m {
                    Some(m) => m,
                    None => return bad(format!("{} needs both n and m", family.name())),
                };
                if n < 2 || m < n {
                    return bad(format!(
                        "{} needs m >= n >= 2, got n = {n}, m = {m}",
                        family.name()
                    ));
                }
                let wanted = if family == Family::Sunm {
                    FieldKind::Complex
                } else {
                    FieldKind::Quaternion
                };
                if field != wanted {
                    return bad(format!(
                        "{} has {} matrix entries",
                        family.name(),
                        wanted.short()
                    ));
                }
            }
        }
        if matches!(family, Family::Sunm | Family::Spnm) != m.is_some() {
            return bad("parameter m is only meaningful for SU(n,m)/Sp(n,m)".into());
        }
        Ok(GroupSpec { family, n, m, field })
    }

    pub fn sl(n: u32, field: FieldKind) -> Result<Self, CatalogError> {
        Self::new(Family::Sl, n, None, field)
    }
    pub fn sp2n(n: u32, field: FieldKind) -> Result<Self, CatalogError> {
        Self::new(Family::Sp2n, n, None, field)
    }
    pub fn so01n(n: u32) -> Result<Self, CatalogError> {
        Self::new(Family::So01n, n, None, FieldKind::Real)
    }
    pub fn su1n(n: u32) -> Result<Self, CatalogError> {
        Self::new(Family::Su1n, n, None, FieldKind::Complex)
    }
    pub fn sp1n(n: u32) -> Result<Self, CatalogError> {
        Self::new(Family::Sp1n, n, None, FieldKind::Quaternion)
    }
    pub fn sunm(n: u32, m: u32) -> Result<Self, CatalogError> {
        Self::new(Family::Sunm, n, Some(m), FieldKind::Complex)
    }
    pub fn spnm(n: u32, m: u32) -> Result<Self, CatalogError> {
        Self::new(Family::Spnm, n, Some(m), FieldKind::Quaternion)
    }

    /// Rank of the restricted root system.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::Sl => (self.n - 1) as usize,
            Family::Sp2n | Family::Sunm | Family::Spnm => self.n as usize,
            Family::So01n | Family::Su1n | Family::Sp1n => 1,
        }
    }

    /// Display identifier, e.g. `SL(3,H)`, `Sp(6,C)`, `SU(1,4)`, `Sp(2,3)`.
    pub fn id(&self) -> String {
        match self.family {
            Family::Sl => format!("SL({},{})", self.n, self.field.short()),
            Family::Sp2n => format!("Sp({},{})", 2 * self.n, self.field.short()),
            Family::So01n => format!("SO0(1,{})", self.n),
            Family::Su1n => format!("SU(1,{})", self.n),
            Family::Sp1n => format!("Sp(1,{})", self.n),
            Family::Sunm => format!("SU({},{})", self.n, self.m.unwrap()),
            Family::Spnm => format!("Sp({},{})", self.n, self.m.unwrap()),
        }
    }

    /// The coefficient `c` in `λ_n = … + c·α_n` for the C/BC-type families:
    /// `1/2` when the restricted system is type C (long root `2λ_n` simple)
    /// and `1` when it is type BC (`λ_n` itself simple).  `None` for type A
    /// and the rank-one families, where no such conversion is used.
    fn short_coeff(&self) -> Option<Rat> {
        match self.family {
            Family::Sp2n => Some(rat(1, 2)),
            Family::Sunm | Family::Spnm => {
                if self.m.unwrap() > self.n {
                    Some(rint(1))
                } else {
                    Some(rat(1, 2))
                }
            }
            _ => None,
        }
    }

    /// Torus character `λ_i` (1-indexed) in simple-root coordinates, for the
    /// C/BC-type families of rank n: `λ_i = α_i + … + α_{n−1} + c·α_n`.
    fn e_basis(&self, i: u32) -> WeightVector {
        let n = self.n as usize;
        let c = self.short_coeff().expect("e_basis needs a C/BC-type family");
        let mut coords = vec![Rat::zero(); n];
        for item in coords.iter_mut().take(n - 1).skip(i as usize - 1) {
            *item = rint(1);
        }
        coords[n - 1] = c;
        WeightVector::new(coords)
    }
}

/// Representation selector for catalog lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepSpec {
    /// The defining module of the matrix model.
    Standard,
    /// The adjoint module; catalogued for `SL(2,k)`, k = ℝ, ℂ or nonarch.
    Adjoint,
    /// A caller-supplied weight multiset (rank must match the group).
    Custom(RepWeights),
}

impl RepSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RepSpec::Standard => "standard",
            RepSpec::Adjoint => "adjoint",
            RepSpec::Custom(_) => "custom",
        }
    }
}

/// Positive restricted roots with multiplicities, in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub rank: usize,
    /// `(root, multiplicity)` pairs; multiplicities are real dimensions of
    /// root spaces for the real forms and field dimensions for the k-groups.
    pub positive_roots: Vec<(WeightVector, u32)>,
}

/// How a catalogued decay improvement is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    /// Shell packing under the compact orbit: decay coefficient `|γ|`
    /// replaces the baseline `q`.
    ShellImprovement,
    /// Product of rank-one estimates over paired weights `±λ_i` ("Howe's
    /// trick"): decay vector `δ·Σ λ_i`.
    HoweProduct,
    /// Rank-one middle-weight variant: decay `|γ′|·β` with `β` the middle
    /// weight of the chain.
    Rank1Beta,
}

impl Mechanism {
    pub fn name(self) -> &'static str {
        match self {
            Mechanism::ShellImprovement => "shell_improvement",
            Mechanism::HoweProduct => "howe_product",
            Mechanism::Rank1Beta => "rank1_beta",
        }
    }
}

/// A catalogued improvement: the mechanism plus its constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImprovementRecord {
    pub mechanism: Mechanism,
    /// Shell-packing exponent `γ < 0`; the improved decay coefficient is
    /// `|γ|`.  Present exactly for `ShellImprovement`.
    #[serde(with = "crate::rational::opt_rat_serde")]
    pub gamma: Option<Rat>,
    /// Per-weight factor `δ` of the product bound.  Present exactly for
    /// `HoweProduct`.
    pub delta: Option<u32>,
    /// True when the packing argument over a nonarchimedean field costs an
    /// arbitrarily small ε in the exponent (`p + ε` for every ε > 0).
    pub log_correction: bool,
    /// Where the constant comes from.
    pub source: String,
}

/// Positive restricted roots of the group, with multiplicities.
pub fn lookup_root_data(group: &GroupSpec) -> RootDatum {
    let n = group.n;
    let mut roots: Vec<(WeightVector, u32)> = Vec::new();
    match group.family {
        Family::Sl => {
            // Type A_{n−1}: α_i + … + α_j for 1 ≤ i ≤ j ≤ n−1, all of
            // multiplicity dim_ℝ(k) (1, 2, 4) resp. 1 for nonarchimedean k.
            let rank = (n - 1) as usize;
            let mult = group.field.real_dim().unwrap_or(1);
            for i in 0..rank {
                for j in i..rank {
                    let mut coords = vec![Rat::zero(); rank];
                    for item in coords.iter_mut().take(j + 1).skip(i) {
                        *item = rint(1);
                    }
                    roots.push((WeightVector::new(coords), mult));
                }
            }
        }
        Family::Sp2n => {
            // Type C_n: e_i ± e_j (i < j) and 2e_i, every root of
            // multiplicity 1 for split k and 2 for k = ℂ.
            let mult = group.field.delta_factor();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    let ei = group.e_basis(i);
                    let ej = group.e_basis(j);
                    roots.push((&ei - &ej, mult));
                    roots.push((&ei + &ej, mult));
                }
                let ei = group.e_basis(i);
                roots.push((&ei + &ei, mult));
            }
        }
        Family::So01n => {
            roots.push((WeightVector::new(vec![rint(1)]), n - 1));
        }
        Family::Su1n => {
            roots.push((WeightVector::new(vec![rint(1)]), 2 * (n - 1)));
            roots.push((WeightVector::new(vec![rint(2)]), 1));
        }
        Family::Sp1n => {
            roots.push((WeightVector::new(vec![rint(1)]), 4 * (n - 1)));
            roots.push((WeightVector::new(vec![rint(2)]), 3));
        }
        Family::Sunm | Family::Spnm => {
            // Type C_n (m = n) or BC_n (m > n) with the multiplicities of
            // the corresponding symmetric space: d = 2 (complex) or 4
            // (quaternionic) on e_i ± e_j, 1 resp. 3 on 2e_i, and
            // d·(m − n) on the short roots e_i when m > n.
            let m = group.m.unwrap();
            let (pair_mult, long_mult) = if group.family == Family::Sunm {
                (2, 1)
            } else {
                (4, 3)
            };
            let short_mult = pair_mult * (m - n);
            for i in 1..=n {
                for j in (i + 1)..=n {
                    let ei = group.e_basis(i);
                    let ej = group.e_basis(j);
                    roots.push((&ei - &ej, pair_mult));
                    roots.push((&ei + &ej, pair_mult));
                }
                let ei = group.e_basis(i);
                roots.push((&ei + &ei, long_mult));
                if short_mult > 0 {
                    roots.push((ei, short_mult));
                }
            }
        }
    }
    RootDatum {
        rank: group.rank(),
        positive_roots: roots,
    }
}

/// The weight multiset of `rep`, ordered highest to lowest.
pub fn lookup_rep_weights(group: &GroupSpec, rep: &RepSpec) -> Result<RepWeights, CatalogError> {
    let entries: Vec<(WeightVector, u32)> = match (rep, group.family) {
        (RepSpec::Custom(w), _) => {
            if w.rank() != group.rank() {
                return Err(CatalogError::UnsupportedRepresentation {
                    group: group.id(),
                    detail: format!(
                        "custom weight set has rank {}, group has rank {}",
                        w.rank(),
                        group.rank()
                    ),
                });
            }
            return Ok(w.clone());
        }
        (RepSpec::Standard, Family::Sl) => {
            // Defining module k^n: highest weight (in simple-root
            // coordinates) ((n−1)/n, (n−2)/n, …, 1/n), then w_{i+1} = w_i − α_i.
            let rank = (group.n - 1) as usize;
            let dim = standard_weight_dim(group);
            let mut coords: Vec<Rat> = (0..rank)
                .map(|j| rat((rank - j) as i64, group.n as i64))
                .collect();
            let mut entries = Vec::with_capacity(group.n as usize);
            entries.push((WeightVector::new(coords.clone()), dim));
            for i in 0..rank {
                coords[i] -= rint(1);
                entries.push((WeightVector::new(coords.clone()), dim));
            }
            entries
        }
        (RepSpec::Standard, Family::Sp2n) => (1..=group.n)
            .flat_map(|i| {
                let e = group.e_basis(i);
                [(e.clone(), 1), (-&e, 1)]
            })
            .collect(),
        (RepSpec::Standard, Family::So01n) => rank_one_standard(group.n, 1),
        (RepSpec::Standard, Family::Su1n) => rank_one_standard(group.n, 2),
        (RepSpec::Standard, Family::Sp1n) => rank_one_standard(group.n, 4),
        (RepSpec::Standard, Family::Sunm | Family::Spnm) => {
            let m = group.m.unwrap();
            let d = if group.family == Family::Sunm { 2 } else { 4 };
            let mut entries: Vec<(WeightVector, u32)> = (1..=group.n)
                .flat_map(|i| {
                    let e = group.e_basis(i);
                    [(e.clone(), d), (-&e, d)]
                })
                .collect();
            if m > group.n {
                entries.push((WeightVector::zero(group.rank()), d * (m - group.n)));
            }
            entries
        }
        (RepSpec::Adjoint, Family::Sl) => {
            if group.n != 2 || group.field == FieldKind::Quaternion {
                return Err(CatalogError::UnsupportedRepresentation {
                    group: group.id(),
                    detail: "adjoint weights are catalogued for SL(2,k) with k commutative".into(),
                });
            }
            // 𝔰𝔩₂(k) = g_α ⊕ h ⊕ g_{−α}, each of dimension 1 over k.
            vec![
                (WeightVector::new(vec![rint(1)]), 1),
                (WeightVector::new(vec![rint(0)]), 1),
                (WeightVector::new(vec![rint(-1)]), 1),
            ]
        }
        (RepSpec::Adjoint, _) => {
            return Err(CatalogError::UnsupportedRepresentation {
                group: group.id(),
                detail: "adjoint weights are catalogued for SL(2,k) only".into(),
            });
        }
    };
    order_weights(&entries).map_err(|e| CatalogError::UnsupportedRepresentation {
        group: group.id(),
        detail: e.to_string(),
    })
}

fn rank_one_standard(n: u32, d: u32) -> Vec<(WeightVector, u32)> {
    vec![
        (WeightVector::new(vec![rint(1)]), d),
        (WeightVector::new(vec![rint(0)]), d * (n - 1)),
        (WeightVector::new(vec![rint(-1)]), d),
    ]
}

/// Dimension of the standard highest weight space over the field of
/// definition (the quantity the `q` convention tests against 1).
pub fn standard_weight_dim(group: &GroupSpec) -> u32 {
    match group.family {
        Family::Sl => {
            if group.field == FieldKind::Quaternion {
                4
            } else {
                1
            }
        }
        Family::Sp2n => 1,
        Family::So01n => 1,
        Family::Su1n | Family::Sunm => 2,
        Family::Sp1n | Family::Spnm => 4,
    }
}

/// The catalogued improvement for `(group, rep)`, if any.
pub fn lookup_improvement(
    group: &GroupSpec,
    rep: &RepSpec,
) -> Result<ImprovementRecord, CatalogError> {
    let no = || {
        Err(CatalogError::NoImprovement {
            group: group.id(),
            rep: rep.name().into(),
        })
    };
    let shell = |gamma: Rat, log_correction: bool, source: &str| {
        Ok(ImprovementRecord {
            mechanism: Mechanism::ShellImprovement,
            gamma: Some(gamma),
            delta: None,
            log_correction,
            source: source.into(),
        })
    };
    let howe = |delta: u32| {
        Ok(ImprovementRecord {
            mechanism: Mechanism::HoweProduct,
            gamma: None,
            delta: Some(delta),
            log_correction: false,
            source: "product of rank-one estimates over the paired weights (Howe's trick)".into(),
        })
    };
    match (group.family, rep) {
        (Family::Sl, RepSpec::Standard) if group.n == 3 => {
            // One shell exponent per ground field.
            let gamma = match group.field {
                FieldKind::Real | FieldKind::NonArchimedean => rint(-1),
                FieldKind::Complex => rint(-2),
                FieldKind::Quaternion => rint(-4),
            };
            shell(
                gamma,
                false,
                "first-coordinate shell packed by two-plane rotations of the maximal compact",
            )
        }
        (Family::Sl, RepSpec::Adjoint) if group.n == 2 => shell(
            rat(-1, 2),
            group.field == FieldKind::NonArchimedean,
            "nilpotent-coordinate shell packed by the rotation subgroup of the adjoint action",
        ),
        (Family::So01n, RepSpec::Standard) => shell(
            rat(-1, 2),
            false,
            "shell packing through the adjoint model of the isometry group of the hyperbolic plane section",
        ),
        (Family::Su1n, RepSpec::Standard) => shell(
            rint(-1),
            false,
            "first-coordinate shell packed by the U(1)-rotation family",
        ),
        (Family::Sp1n, RepSpec::Standard) => shell(
            rint(-3),
            false,
            "first-coordinate shell packed by the Sp(1)-rotation family",
        ),
        (Family::Sp2n, RepSpec::Standard) => howe(group.field.delta_factor()),
        (Family::Sunm, RepSpec::Standard) => howe(1),
        (Family::Spnm, RepSpec::Standard) => howe(3),
        _ => no(),
    }
}

/// Closed-form simple-root coordinates of the modular weight
/// `Σ_{α>0} m_α·α`, derived independently of the root table (used by the
/// cross-check invariant).
///
/// For the C/BC-type families the coordinates are partial sums of the
/// per-character exponents `b_i` in `δ_B = Π |λ_i(a)|^{b_i}`:
///
/// * `Sp(2n,k)`: `b_i = 2·δ(k)·(n+1−i)`
/// * `SU(n,m)`:  `b_i = 2(n+m−2i) + 2`
/// * `Sp(n,m)`:  `b_i = 4(n+m) + 6 − 8i`
///
/// since `λ_i = α_i + … + α_{n−1} + c·α_n` gives coefficient
/// `Σ_{i≤j} b_i` at `α_j` (j < n) and `c·Σ_i b_i` at `α_n`.
pub fn delta_b_closed_form(group: &GroupSpec) -> WeightVector {
    let n = group.n as i64;
    match group.family {
        Family::Sl => {
            // Type A_{r}: coefficient d·k(r+1−k) at α_k.
            let r = n - 1;
            let d = group.field.real_dim().unwrap_or(1) as i64;
            WeightVector::new((1..=r).map(|k| rint(d * k * (r + 1 - k))).collect())
        }
        Family::So01n => WeightVector::new(vec![rint(n - 1)]),
        Family::Su1n => WeightVector::new(vec![rint(2 * n)]),
        Family::Sp1n => WeightVector::new(vec![rint(4 * n + 2)]),
        Family::Sp2n | Family::Sunm | Family::Spnm => {
            let exps: Vec<i64> = match group.family {
                Family::Sp2n => {
                    let mu = group.field.delta_factor() as i64;
                    (1..=n).map(|i| 2 * mu * (n + 1 - i)).collect()
                }
                Family::Sunm => {
                    let m = group.m.unwrap() as i64;
                    (1..=n).map(|i| 2 * (n + m - 2 * i) + 2).collect()
                }
                Family::Spnm => {
                    let m = group.m.unwrap() as i64;
                    (1..=n).map(|i| 4 * (n + m) + 6 - 8 * i).collect()
                }
                _ => unreachable!(),
            };
            let c = group.short_coeff().unwrap();
            let total: i64 = exps.iter().sum();
            let mut coords: Vec<Rat> = Vec::with_capacity(n as usize);
            let mut partial = 0i64;
            for (j, b) in exps.iter().enumerate() {
                partial += b;
                if (j as i64) < n - 1 {
                    coords.push(rint(partial));
                }
            }
            coords.push(c * rint(total));
            WeightVector::new(coords)
        }
    }
}

// ───────────────────────────────────────────────────────────────────────────
// Catalog data file (documentation of record)
// ───────────────────────────────────────────────────────────────────────────

/// One family entry of the shipped catalog data file.  Formula fields are
/// human-readable strings; `instances` carries exact values on a small
/// parameter grid so the file is self-checking against the code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub family: String,
    pub fields: Vec<String>,
    pub rank: String,
    pub restricted_roots: String,
    pub multiplicities: String,
    pub multiplicity_citation: String,
    pub modular_weight: String,
    pub standard_weights: String,
    pub weight_space_dims: String,
    pub improvement: Option<ImprovementSummary>,
    /// Literature value of the sharp decay exponent of the group itself
    /// (documentation only; not used by any computation).
    pub literature_p_g0: Option<LiteratureP>,
    pub instances: Vec<CatalogInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementSummary {
    pub mechanism: String,
    pub constant: String,
    pub log_correction: bool,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiteratureP {
    pub value: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogInstance {
    pub group: String,
    pub rank: usize,
    pub positive_root_count: usize,
    /// Simple-root coordinates of `Σ m_α α`.
    pub modular_weight: Vec<crate::rational::RatRepr>,
    /// `(weight, dim)` pairs of the standard module, highest first.
    pub standard_weights: Vec<(String, u32)>,
}

fn instance(group: &GroupSpec) -> CatalogInstance {
    let datum = lookup_root_data(group);
    let modular = datum.positive_roots.iter().fold(
        WeightVector::zero(datum.rank),
        |acc, (root, mult)| &acc + &root.scale(&rint(*mult as i64)),
    );
    let weights = lookup_rep_weights(group, &RepSpec::Standard).expect("standard weights");
    CatalogInstance {
        group: group.id(),
        rank: datum.rank,
        positive_root_count: datum.positive_roots.len(),
        modular_weight: modular.coords().iter().map(crate::rational::RatRepr::from).collect(),
        standard_weights: weights
            .iter()
            .map(|e| (e.weight.to_string(), e.dim))
            .collect(),
    }
}

/// Build the full catalog record list (the content of `data/catalog.json`).
pub fn catalog_records() -> Vec<CatalogRecord> {
    let helgason = "Helgason, Differential Geometry, Lie Groups, and Symmetric Spaces, Ch. X Table VI";
    let improvement_of = |g: &GroupSpec, rep: &RepSpec| {
        lookup_improvement(g, rep).ok().map(|rec| ImprovementSummary {
            mechanism: rec.mechanism.name().into(),
            constant: match rec.mechanism {
                Mechanism::HoweProduct => format!("delta = {}", rec.delta.unwrap()),
                _ => format!("gamma = {}", crate::rational::display(rec.gamma.as_ref().unwrap())),
            },
            log_correction: rec.log_correction,
            source: rec.source,
        })
    };
    let sl3r = GroupSpec::sl(3, FieldKind::Real).unwrap();
    let sl2r = GroupSpec::sl(2, FieldKind::Real).unwrap();
    vec![
        CatalogRecord {
            family: "SL(n,k)".into(),
            fields: vec!["R".into(), "C".into(), "H".into(), "nonarchimedean".into()],
            rank: "n - 1".into(),
            restricted_roots: "A_{n-1}: a_i + ... + a_j, 1 <= i <= j <= n-1".into(),
            multiplicities: "dim_R(k) = 1, 2, 4 on every root; 1 for nonarchimedean k".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "coefficient dim_R(k) * j(n-j) at a_j".into(),
            standard_weights: "k^n: w_1 = ((n-1)/n, ..., 1/n), w_{i+1} = w_i - a_i".into(),
            weight_space_dims: "1 over k (4 real dimensions for k = H, counted over R)".into(),
            improvement: improvement_of(&sl3r, &RepSpec::Standard).map(|mut s| {
                s.constant = "gamma = -dim_R(k) for n = 3 standard; gamma = -1/2 for n = 2 adjoint".into();
                s
            }),
            literature_p_g0: Some(LiteratureP {
                value: "2(n-1) for every local field (infinite for n = 2)".into(),
                citation: "Vogan's classification for GL_n; see Oh, Duke Math. J. 113 (2002)".into(),
            }),
            instances: vec![
                instance(&sl2r),
                instance(&sl3r),
                instance(&GroupSpec::sl(3, FieldKind::Complex).unwrap()),
                instance(&GroupSpec::sl(3, FieldKind::Quaternion).unwrap()),
                instance(&GroupSpec::sl(4, FieldKind::Real).unwrap()),
            ],
        },
        CatalogRecord {
            family: "Sp(2n,k)".into(),
            fields: vec!["R".into(), "C".into(), "nonarchimedean".into()],
            rank: "n".into(),
            restricted_roots: "C_n: e_i +- e_j (i < j), 2e_i; e_i = a_i + ... + a_{n-1} + a_n/2".into(),
            multiplicities: "1 on every root for split k; 2 for k = C".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "delta_B = prod |e_i|^{2 delta(k) (n+1-i)}".into(),
            standard_weights: "k^{2n}: +-e_1, ..., +-e_n".into(),
            weight_space_dims: "1 over k".into(),
            improvement: improvement_of(&GroupSpec::sp2n(2, FieldKind::Real).unwrap(), &RepSpec::Standard),
            literature_p_g0: Some(LiteratureP {
                value: "4n for k = C".into(),
                citation: "Howe's estimates for the oscillator-type spectrum of Sp(2n,C)".into(),
            }),
            instances: vec![
                instance(&GroupSpec::sp2n(2, FieldKind::Real).unwrap()),
                instance(&GroupSpec::sp2n(2, FieldKind::Complex).unwrap()),
                instance(&GroupSpec::sp2n(3, FieldKind::Complex).unwrap()),
            ],
        },
        CatalogRecord {
            family: "SO0(1,n)".into(),
            fields: vec!["R".into()],
            rank: "1".into(),
            restricted_roots: "A_1: a".into(),
            multiplicities: "n - 1 on a".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "delta_B = |a(.)|^{n-1}".into(),
            standard_weights: "R^{n+1}: a, 0, -a with dims 1, n-1, 1".into(),
            weight_space_dims: "1 over R".into(),
            improvement: improvement_of(&GroupSpec::so01n(2).unwrap(), &RepSpec::Standard),
            literature_p_g0: Some(LiteratureP {
                value: "infinite (the group is not Kazhdan)".into(),
                citation: "classical; see Oh, Duke Math. J. 113 (2002)".into(),
            }),
            instances: vec![instance(&GroupSpec::so01n(2).unwrap()), instance(&GroupSpec::so01n(4).unwrap())],
        },
        CatalogRecord {
            family: "SU(1,n)".into(),
            fields: vec!["C".into()],
            rank: "1".into(),
            restricted_roots: "BC_1: a, 2a".into(),
            multiplicities: "2(n-1) on a, 1 on 2a".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "delta_B = |a(.)|^{2n}".into(),
            standard_weights: "C^{n+1} over R: a, 0, -a with dims 2, 2(n-1), 2".into(),
            weight_space_dims: "2 over R (one complex line)".into(),
            improvement: improvement_of(&GroupSpec::su1n(2).unwrap(), &RepSpec::Standard),
            literature_p_g0: Some(LiteratureP {
                value: "infinite (the group is not Kazhdan)".into(),
                citation: "classical; see Oh, Duke Math. J. 113 (2002)".into(),
            }),
            instances: vec![instance(&GroupSpec::su1n(2).unwrap()), instance(&GroupSpec::su1n(3).unwrap())],
        },
        CatalogRecord {
            family: "Sp(1,n)".into(),
            fields: vec!["H".into()],
            rank: "1".into(),
            restricted_roots: "BC_1: a, 2a".into(),
            multiplicities: "4(n-1) on a, 3 on 2a".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "delta_B = |a(.)|^{4n+2}".into(),
            standard_weights: "H^{n+1} over R: a, 0, -a with dims 4, 4(n-1), 4".into(),
            weight_space_dims: "4 over R (one quaternionic line)".into(),
            improvement: improvement_of(&GroupSpec::sp1n(2).unwrap(), &RepSpec::Standard),
            literature_p_g0: Some(LiteratureP {
                value: "2n + 1".into(),
                citation: "Baldoni-Silva's and Kostant's spherical unitary dual computations".into(),
            }),
            instances: vec![instance(&GroupSpec::sp1n(2).unwrap()), instance(&GroupSpec::sp1n(3).unwrap())],
        },
        CatalogRecord {
            family: "SU(n,m)".into(),
            fields: vec!["C".into()],
            rank: "n (with m >= n >= 2)".into(),
            restricted_roots: "C_n (m = n) or BC_n (m > n): e_i +- e_j, 2e_i, and e_i when m > n".into(),
            multiplicities: "2 on e_i +- e_j, 1 on 2e_i, 2(m-n) on e_i".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "delta_B = prod |e_i|^{2(n+m-2i)+2}".into(),
            standard_weights: "C^{n+m} over R: +-e_1, ..., +-e_n (dims 2) and 0 (dim 2(m-n))".into(),
            weight_space_dims: "2 over R per nonzero weight".into(),
            improvement: improvement_of(&GroupSpec::sunm(2, 2).unwrap(), &RepSpec::Standard),
            literature_p_g0: Some(LiteratureP {
                value: "2(n+m-1)".into(),
                citation: "J.-S. Li's bounds on matrix coefficients of SU(n,m)".into(),
            }),
            instances: vec![instance(&GroupSpec::sunm(2, 2).unwrap()), instance(&GroupSpec::sunm(2, 4).unwrap())],
        },
        CatalogRecord {
            family: "Sp(n,m)".into(),
            fields: vec!["H".into()],
            rank: "n (with m >= n >= 2)".into(),
            restricted_roots: "BC_n (C_n when m = n): e_i +- e_j, 2e_i, and e_i when m > n".into(),
            multiplicities: "4 on e_i +- e_j, 3 on 2e_i, 4(m-n) on e_i".into(),
            multiplicity_citation: helgason.into(),
            modular_weight: "delta_B = prod |e_i|^{4(n+m)+6-8i}".into(),
            standard_weights: "H^{n+m} over R: +-e_1, ..., +-e_n (dims 4) and 0 (dim 4(m-n))".into(),
            weight_space_dims: "4 over R per nonzero weight".into(),
            improvement: improvement_of(&GroupSpec::spnm(2, 2).unwrap(), &RepSpec::Standard),
            literature_p_g0: Some(LiteratureP {
                value: "2(n+m) - 1".into(),
                citation: "J.-S. Li's bounds on matrix coefficients of Sp(n,m)".into(),
            }),
            instances: vec![instance(&GroupSpec::spnm(2, 2).unwrap()), instance(&GroupSpec::spnm(2, 3).unwrap())],
        },
    ]
}
