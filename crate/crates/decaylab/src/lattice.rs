//! Weight vectors over the simple-root coordinate lattice and the canonical
//! weight ordering used by the exponent pipeline.
//!
//! Coordinates are exact rationals relative to the simple roots
//! `(α₁, …, α_r)` of the ambient restricted root system, so `α_k` itself is
//! the k-th coordinate unit vector.  A finite weight set with highest weight
//! `λ` is ordered by *depth*: writing `φ = λ − Σ_j c_j α_j` with all
//! `c_j ≥ 0`, the depth is `L(φ) = Σ_j c_j` and ties break lexicographically
//! on `(c_1, …, c_r)` ascending.  The highest weight is the unique depth-0
//! element and the lowest weight comes last.  This is a concrete, total
//! refinement of the usual dominance order; any refinement gives the same
//! highest/lowest/middle elements, which is all downstream code consumes.

use crate::rational::{rat_serde, vec_rat_serde, Rat};
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

/// A weight written in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    #[serde(with = "vec_rat_serde")]
    coords: Vec<Rat>,
}

impl WeightVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        WeightVector { coords }
    }

    pub fn zero(rank: usize) -> Self {
        WeightVector {
            coords: vec![Rat::zero(); rank],
        }
    }

    /// Number of simple-root coordinates (the rank of the ambient system).
    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> &Rat {
        &self.coords[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    /// True if every coordinate is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Sum of coordinates (the depth functional on differences `λ − φ`).
    pub fn coord_sum(&self) -> Rat {
        self.coords.iter().sum()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        WeightVector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl Add for &WeightVector {
    type Output = WeightVector;
    fn add(self, rhs: &WeightVector) -> WeightVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in weight addition");
        WeightVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &WeightVector {
    type Output = WeightVector;
    fn sub(self, rhs: &WeightVector) -> WeightVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in weight subtraction");
        WeightVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::rational::display(c))?;
        }
        write!(f, ")")
    }
}

/// One weight of a representation together with the dimension of its weight
/// space (counted over the group's field of definition).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub weight: WeightVector,
    pub dim: u32,
    /// Depth `L(λ − weight)` relative to the highest weight.
    #[serde(with = "rat_serde")]
    pub depth: Rat,
}

/// A representation's weight multiset, totally ordered from highest to lowest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepWeights {
    entries: Vec<WeightEntry>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    /// The set is empty, has duplicates or mixed ranks, has no element
    /// dominating all others, or some element is not below the dominant one.
    #[error("malformed weight set: {0}")]
    MalformedWeightSet(String),
    /// An operation restricted to rank-one weight sets was applied elsewhere.
    #[error("rank mismatch: expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// Totally order a weight multiset by (depth, lexicographic) below its
/// highest weight.
///
/// The input is an unordered list of `(weight, dim)` pairs with distinct
/// weights and positive dims.  Fails with [`LatticeError::MalformedWeightSet`]
/// when no input weight dominates the whole set (i.e. some difference
/// `λ − φ` has a negative simple-root coordinate for every candidate `λ`).
pub fn order_weights(entries: &[(WeightVector, u32)]) -> Result<RepWeights, LatticeError> {
    if entries.is_empty() {
        return Err(LatticeError::MalformedWeightSet("empty weight set".into()));
    }
    let rank = entries[0].0.rank();
    for (w, dim) in entries {
        if w.rank() != rank {
            return Err(LatticeError::MalformedWeightSet(format!(
                "mixed coordinate ranks {} and {}",
                rank,
                w.rank()
            )));
        }
        if *dim == 0 {
            return Err(LatticeError::MalformedWeightSet(
                "zero-dimensional weight space".into(),
            ));
        }
    }
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            if entries[i].0 == entries[j].0 {
                return Err(LatticeError::MalformedWeightSet(format!(
                    "duplicate weight {}",
                    entries[i].0
                )));
            }
        }
    }
    let highest = entries
        .iter()
        .map(|(w, _)| w)
        .find(|cand| entries.iter().all(|(w, _)| (*cand - w).is_nonnegative()))
        .cloned()
        .ok_or_else(|| {
            LatticeError::MalformedWeightSet(
                "no weight dominates the set (missing highest weight)".into(),
            )
        })?;
    let mut keyed: Vec<(WeightVector, WeightEntry)> = entries
        .iter()
        .map(|(w, dim)| {
            let diff = &highest - w;
            let entry = WeightEntry {
                weight: w.clone(),
                dim: *dim,
                depth: diff.coord_sum(),
            };
            (diff, entry)
        })
        .collect();
    keyed.sort_by(|(da, ea), (db, eb)| {
        ea.depth
            .cmp(&eb.depth)
            .then_with(|| da.lex_cmp(db))
            .then_with(|| ea.weight.lex_cmp(&eb.weight))
    });
    Ok(RepWeights {
        entries: keyed.into_iter().map(|(_, e)| e).collect(),
    })
}

impl RepWeights {
    /// Order a raw `(weight, dim)` list; see [`order_weights`].
    pub fn new(entries: &[(WeightVector, u32)]) -> Result<Self, LatticeError> {
        order_weights(entries)
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[WeightEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeightEntry> {
        self.entries.iter()
    }

    /// Rank of the ambient root system.
    pub fn rank(&self) -> usize {
        self.entries[0].weight.rank()
    }

    /// The highest weight `λ` (first in the order).
    pub fn highest(&self) -> &WeightVector {
        &self.entries[0].weight
    }

    /// The lowest weight `ϱ` (last in the order).
    pub fn lowest(&self) -> &WeightVector {
        &self.entries[self.entries.len() - 1].weight
    }

    /// Dimension of the highest weight space.
    pub fn highest_dim(&self) -> u32 {
        self.entries[0].dim
    }

    /// Total dimension `Σ dim(φ)`.
    pub fn total_dim(&self) -> u64 {
        self.entries.iter().map(|e| e.dim as u64).sum()
    }
}

/// The middle weight `β` of a rank-one weight chain: with the weights ordered
/// `φ_1 > φ_2 > … > φ_N`, this is `φ_{N/2}` for even `N` and `φ_{(N−1)/2}`
/// for odd `N` (1-indexed), i.e. the weight sitting just above the centre of
/// the chain.
pub fn middle_weight(weights: &RepWeights) -> Result<WeightVector, LatticeError> {
    if weights.rank() != 1 {
        return Err(LatticeError::RankMismatch {
            expected: 1,
            got: weights.rank(),
        });
    }
    let n = weights.len();
    if n < 2 {
        return Err(LatticeError::MalformedWeightSet(
            "middle weight needs at least two weights".into(),
        ));
    }
    let idx_1 = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
    Ok(weights.entries[idx_1 - 1].weight.clone())
}

/// Dimension-weighted sum `Σ_φ dim(φ)·φ` of a weight multiset.
pub fn weight_sum(weights: &RepWeights) -> WeightVector {
    let rank = weights.rank();
    weights.iter().fold(WeightVector::zero(rank), |acc, e| {
        &acc + &e.weight.scale(&crate::rational::rint(e.dim as i64))
    })
}
