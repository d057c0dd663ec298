//! Cross-module invariant suites.
//!
//! Everything the exact-arithmetic layers promise is checkable in
//! milliseconds, so this module re-derives each structural claim from
//! scratch over the whole catalogued group grid:
//!
//! * **lattice** — weight sums vanish with multiplicity; every simple root
//!   lies in the ℚ-span of the weight set (exact Gaussian elimination); the
//!   highest weight has strictly positive simple-root coordinates.
//! * **catalog** — the modular weight assembled from the root table,
//!   `Σ m_α·α`, equals the per-family closed form, exactly; root tables are
//!   internally consistent (nonzero roots, positive multiplicities,
//!   matching ranks).
//! * **exponents** — reported `m` is minimal (`2m ≥ p` and `2(m−1) < p`);
//!   every catalogued improvement actually improves (`p_improved ≤
//!   p_baseline`).
//! * **kazhdan** — the spectral-gap transfer curve takes its two pinned
//!   values exactly, decreases strictly, and stays below its supremum; the
//!   multi-witness combination rule matches its closed form.
//!
//! [`run`] executes the suites (optionally a single one by name) and
//! reports every check; the first failure is surfaced prominently because
//! the command-line `verify` front end turns it into the process exit
//! status.  [`Fault`] supports deliberate corruption so that the failure
//! path itself is testable end to end.

use crate::catalog::{
    delta_b_closed_form, lookup_improvement, lookup_rep_weights, lookup_root_data, FieldKind,
    GroupSpec, RepSpec,
};
use crate::exponents::{baseline_exponent, improved_exponent, modular_weight, ExponentReport};
use crate::kazhdan::{kappa, kappa_sup, pair_constant};
use crate::lattice::{weight_sum, WeightVector};
use crate::rational::{rint, Rat};
use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Names accepted by [`run`]'s `only` filter, in execution order.
pub const SUITE_NAMES: &[&str] = &["lattice", "catalog", "exponents", "kazhdan"];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`; expected one of lattice, catalog, exponents, kazhdan")]
    UnknownSuite(String),
}

/// Deliberate data corruption for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Inflate one root multiplicity before the modular-weight cross-check,
    /// which must then fail naming that check.
    DeltaB,
}

/// One executed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub suite: String,
    pub check: String,
    /// The catalog entry checked (empty for global checks).
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

/// Result of a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
    pub passed: bool,
    /// `"suite/check (subject): detail"` of the first failed check.
    pub first_failure: Option<String>,
}

impl VerifyReport {
    fn from_outcomes(outcomes: Vec<CheckOutcome>) -> Self {
        let first_failure = outcomes.iter().find(|o| !o.passed).map(|o| {
            format!(
                "{}/{} ({}): {}",
                o.suite, o.check, o.subject, o.detail
            )
        });
        VerifyReport {
            passed: first_failure.is_none(),
            outcomes,
            first_failure,
        }
    }

    pub fn suite_counts(&self) -> Vec<(String, usize, usize)> {
        let mut counts: Vec<(String, usize, usize)> = Vec::new();
        for o in &self.outcomes {
            match counts.iter_mut().find(|(s, _, _)| s == &o.suite) {
                Some((_, total, failed)) => {
                    *total += 1;
                    if !o.passed {
                        *failed += 1;
                    }
                }
                None => counts.push((o.suite.clone(), 1, usize::from(!o.passed))),
            }
        }
        counts
    }
}

/// The full group grid the suites sweep: every catalogued family over an
/// exercise-sized parameter range, with the representations the catalog
/// carries for it.
pub fn standard_entries() -> Vec<(GroupSpec, RepSpec)> {
    let mut entries = Vec::new();
    let fields = [
        FieldKind::Real,
        FieldKind::Complex,
        FieldKind::Quaternion,
        FieldKind::NonArchimedean,
    ];
    for n in 2..=4 {
        for field in fields {
            let g = GroupSpec::sl(n, field).unwrap();
            entries.push((g.clone(), RepSpec::Standard));
            if n == 2 && field != FieldKind::Quaternion {
                entries.push((g, RepSpec::Adjoint));
            }
        }
    }
    for n in 2..=6 {
        entries.push((GroupSpec::so01n(n).unwrap(), RepSpec::Standard));
        entries.push((GroupSpec::su1n(n).unwrap(), RepSpec::Standard));
        entries.push((GroupSpec::sp1n(n).unwrap(), RepSpec::Standard));
    }
    for n in 2..=5 {
        entries.push((GroupSpec::sp2n(n, FieldKind::Complex).unwrap(), RepSpec::Standard));
    }
    for (n, m) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        entries.push((GroupSpec::sunm(n, m).unwrap(), RepSpec::Standard));
        entries.push((GroupSpec::spnm(n, m).unwrap(), RepSpec::Standard));
    }
    entries
}

/// The two sides of the modular-weight cross-check: `Σ m_α·α` assembled
/// from the root table, and the family closed form.  Exposed so the
/// command-line front end can display the disagreement on failure.
pub fn delta_b_crosscheck_datum(group: &GroupSpec) -> (WeightVector, WeightVector) {
    (modular_weight(group), delta_b_closed_form(group))
}

/// Run the suites, optionally restricted to one by name.
pub fn run(only: Option<&str>) -> Result<VerifyReport, VerifyError> {
    run_with_fault(only, None)
}

/// [`run`] with an optional deliberate fault injected (testing the failure
/// path of the verification front end).
pub fn run_with_fault(only: Option<&str>, fault: Option<Fault>) -> Result<VerifyReport, VerifyError> {
    if let Some(name) = only {
        if !SUITE_NAMES.contains(&name) {
            return Err(VerifyError::UnknownSuite(name.to_string()));
        }
    }
    let wants = |name: &str| only.is_none() || only == Some(name);
    let mut outcomes = Vec::new();
    if wants("lattice") {
        lattice_suite(&mut outcomes);
    }
    if wants("catalog") {
        catalog_suite(&mut outcomes, fault);
    }
    if wants("exponents") {
        exponents_suite(&mut outcomes);
    }
    if wants("kazhdan") {
        kazhdan_suite(&mut outcomes);
    }
    Ok(VerifyReport::from_outcomes(outcomes))
}

fn push(
    outcomes: &mut Vec<CheckOutcome>,
    suite: &str,
    check: &str,
    subject: String,
    passed: bool,
    detail: String,
) {
    outcomes.push(CheckOutcome {
        suite: suite.to_string(),
        check: check.to_string(),
        subject,
        passed,
        detail,
    });
}

// ─────────────────────────────────────────────────────────────────────────────
// Exact linear algebra over ℚ
// ─────────────────────────────────────────────────────────────────────────────

/// Does `target` lie in the ℚ-span of `rows`?  Exact Gaussian elimination.
fn in_rational_span(rows: &[&WeightVector], target: &WeightVector) -> bool {
    let rank = target.rank();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let reduce = |mut v: Vec<Rat>, basis: &[Vec<Rat>]| -> Vec<Rat> {
        for b in basis {
            let pivot = b.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !v[pivot].is_zero() {
                let factor = v[pivot].clone() / b[pivot].clone();
                for j in 0..rank {
                    let delta = factor.clone() * b[j].clone();
                    v[j] -= delta;
                }
            }
        }
        v
    };
    for row in rows {
        let reduced = reduce(row.coords().to_vec(), &basis);
        if reduced.iter().any(|x| !x.is_zero()) {
            basis.push(reduced);
        }
    }
    let residue = reduce(target.coords().to_vec(), &basis);
    residue.iter().all(Zero::is_zero)
}

// ─────────────────────────────────────────────────────────────────────────────
// Suites
// ─────────────────────────────────────────────────────────────────────────────

fn lattice_suite(outcomes: &mut Vec<CheckOutcome>) {
    const SUITE: &str = "lattice";
    for (group, rep) in standard_entries() {
        let subject = format!("{}/{}", group.id(), rep.name());
        let weights = match lookup_rep_weights(&group, &rep) {
            Ok(w) => w,
            Err(e) => {
                push(
                    outcomes,
                    SUITE,
                    "weights-available",
                    subject,
                    false,
                    e.to_string(),
                );
                continue;
            }
        };

        let sum = weight_sum(&weights);
        push(
            outcomes,
            SUITE,
            "weight-sum-zero",
            subject.clone(),
            sum.is_zero(),
            format!("Σ dim·ψ = {sum}"),
        );

        let weight_rows: Vec<&WeightVector> =
            weights.iter().map(|e| &e.weight).collect();
        let rank = group.rank();
        let spanned = (0..rank).all(|j| {
            let mut coords = vec![rint(0); rank];
            coords[j] = rint(1);
            in_rational_span(&weight_rows, &WeightVector::new(coords))
        });
        push(
            outcomes,
            SUITE,
            "root-in-weight-span",
            subject.clone(),
            spanned,
            if spanned {
                format!("all {rank} simple roots lie in the weight span")
            } else {
                "a simple root escapes the ℚ-span of the weights".into()
            },
        );

        let lambda = weights.highest();
        let positive = lambda.coords().iter().all(|c| c > &Rat::zero());
        push(
            outcomes,
            SUITE,
            "positive-lambda-coordinates",
            subject,
            positive,
            format!("λ = {lambda}"),
        );
    }
}

fn catalog_suite(outcomes: &mut Vec<CheckOutcome>, fault: Option<Fault>) {
    const SUITE: &str = "catalog";
    let mut seen: Vec<String> = Vec::new();
    let mut fault_armed = fault == Some(Fault::DeltaB);
    for (group, _) in standard_entries() {
        let subject = group.id();
        if seen.contains(&subject) {
            continue;
        }
        seen.push(subject.clone());

        let datum = lookup_root_data(&group);
        let table_ok = !datum.positive_roots.is_empty()
            && datum.rank == group.rank()
            && datum.positive_roots.iter().all(|(root, mult)| {
                root.rank() == datum.rank
                    && !root.is_zero()
                    && root.is_nonnegative()
                    && *mult >= 1
            });
        push(
            outcomes,
            SUITE,
            "root-table-sanity",
            subject.clone(),
            table_ok,
            format!("{} positive roots, rank {}", datum.positive_roots.len(), datum.rank),
        );

        let mut from_roots = datum.positive_roots.iter().fold(
            WeightVector::zero(datum.rank),
            |acc, (root, mult)| &acc + &root.scale(&rint(*mult as i64)),
        );
        if fault_armed {
            // Corrupt exactly one multiplicity: add one extra copy of the
            // first positive root.
            from_roots = &from_roots + &datum.positive_roots[0].0;
            fault_armed = false;
        }
        let closed = delta_b_closed_form(&group);
        let agrees = from_roots == closed;
        push(
            outcomes,
            SUITE,
            "delta-b-crosscheck",
            subject,
            agrees,
            if agrees {
                format!("Σ m_α·α = {closed}")
            } else {
                format!("root table gives {from_roots}, closed form gives {closed}")
            },
        );
    }
}

fn m_is_minimal(report: &ExponentReport) -> bool {
    let two_m = rint(2 * report.m as i64);
    let p = &report.p;
    &two_m >= p && (two_m - rint(2)) < *p
}

fn exponents_suite(outcomes: &mut Vec<CheckOutcome>) {
    const SUITE: &str = "exponents";
    for (group, rep) in standard_entries() {
        let subject = format!("{}/{}", group.id(), rep.name());
        let baseline = match baseline_exponent(&group, &rep) {
            Ok(r) => r,
            Err(e) => {
                push(
                    outcomes,
                    SUITE,
                    "baseline-computes",
                    subject,
                    false,
                    e.to_string(),
                );
                continue;
            }
        };
        push(
            outcomes,
            SUITE,
            "m-minimality",
            subject.clone(),
            m_is_minimal(&baseline),
            format!("baseline p = {}, m = {}", baseline.p, baseline.m),
        );

        if lookup_improvement(&group, &rep).is_ok() {
            match improved_exponent(&group, &rep) {
                Ok(improved) => {
                    push(
                        outcomes,
                        SUITE,
                        "dominance",
                        subject.clone(),
                        improved.p <= baseline.p,
                        format!("improved p = {} vs baseline p = {}", improved.p, baseline.p),
                    );
                    push(
                        outcomes,
                        SUITE,
                        "m-minimality",
                        subject,
                        m_is_minimal(&improved),
                        format!("improved p = {}, m = {}", improved.p, improved.m),
                    );
                }
                Err(e) => {
                    push(
                        outcomes,
                        SUITE,
                        "dominance",
                        subject,
                        false,
                        format!("catalogued improvement failed to compute: {e}"),
                    );
                }
            }
        }
    }
}

fn kazhdan_suite(outcomes: &mut Vec<CheckOutcome>) {
    const SUITE: &str = "kazhdan";
    let k1 = kappa(1.0).expect("kappa(1)");
    push(
        outcomes,
        SUITE,
        "pinned-values",
        "kappa".into(),
        k1 == 0.0,
        format!("κ(1) = {k1}"),
    );
    let k_half = kappa(0.5).expect("kappa(1/2)");
    push(
        outcomes,
        SUITE,
        "pinned-values",
        "kappa".into(),
        k_half == 0.25,
        format!("κ(1/2) = {k_half}"),
    );

    let sup = kappa_sup();
    let mut strictly_decreasing = true;
    let mut below_sup = true;
    let mut prev = f64::INFINITY;
    for i in 1..=100 {
        let x = i as f64 / 100.0;
        let k = kappa(x).expect("kappa on grid");
        if k >= prev {
            strictly_decreasing = false;
        }
        if k >= sup {
            below_sup = false;
        }
        prev = k;
    }
    push(
        outcomes,
        SUITE,
        "kappa-monotonicity",
        "kappa".into(),
        strictly_decreasing,
        "κ strictly decreasing on the 100-point grid".into(),
    );
    push(
        outcomes,
        SUITE,
        "kappa-below-sup",
        "kappa".into(),
        below_sup,
        format!("κ < {sup} on the grid"),
    );

    let kappas = [0.1, 0.2, 0.3, 0.25];
    let combined = pair_constant(&kappas, kappas.len()).expect("pair constant");
    let expected = 0.1 / (kappas.len() as f64).sqrt();
    push(
        outcomes,
        SUITE,
        "pair-constant-closed-form",
        "pair_constant".into(),
        (combined - expected).abs() < 1e-12,
        format!("min κ/√N = {expected}, got {combined}"),
    );
}
