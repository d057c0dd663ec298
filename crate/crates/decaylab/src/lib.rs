//! Decay exponents, spherical-function estimates, Kazhdan pair constants,
//! and orbit shell-packing experiments for classical matrix groups.
//!
//! The crate has an exact side and a numerical side.
//!
//! * [`catalog`] records restricted root data, standard/adjoint weight
//!   systems, and improvement mechanisms for the supported families;
//!   [`lattice`] provides the exact weight arithmetic and the canonical
//!   ordering; [`exponents`] turns both into integrability exponents `p`
//!   and the derived integer `m`, all in exact rational arithmetic.
//! * [`hcfun`] estimates the spherical function
//!   `Ξ_G(g) = ∫_K δ_B(a(gk))^{−1/2} dk` by Monte Carlo over the maximal
//!   compact subgroup (with a deterministic quadrature oracle for the
//!   `SL(2)` rays); [`kazhdan`] converts exponent-plus-estimate data into
//!   explicit Kazhdan-pair constants; [`orbitlab`] certifies the
//!   shell-packing counts behind the shell improvements empirically.
//! * [`verify`] bundles the structural invariants of the exact side into
//!   runnable suites (used by the `verify` CLI subcommand).

pub mod catalog;
pub mod exponents;
pub mod hcfun;
pub mod kazhdan;
pub mod lattice;
pub mod linalg;
pub mod orbitlab;
pub mod verify;
pub mod rational;
