//! Exact arithmetic for cohomotopy-valued monopole invariants and their
//! finite-dimensional models.
//!
//! * [`series`] and [`chern`]: truncated power series over `Q` and the Chern
//!   character `K(CP^{d-1}) → H^*(CP^{d-1}; Q)`.
//! * [`divisibility`]: Hurewicz kernel/cokernel orders and the
//!   lcm-of-denominators lower bound for the divisibility of the invariant.
//! * [`fourmanifold`]: Dirac index, expected moduli dimension and the
//!   Donaldson shift from characteristic numbers.
//! * [`lattice`]: definite unimodular forms, characteristic vectors and exact
//!   short-vector enumeration.
//! * [`reduction`]: finite-dimensional reduction of `f = l + c` to a degree.
//! * [`chamber`]: latitude paths and the ±1 wall-crossing jump.

#![allow(clippy::needless_range_loop)]

pub mod chamber;
pub mod chern;
pub mod divisibility;
pub mod fourmanifold;
pub mod lattice;
pub mod rational;
pub mod reduction;
pub mod series;

pub use chamber::{
    make_path, signed_preimage_count, wall_crossing_jump, Chamber, ChamberCount, ChamberError, LatitudePath,
};
pub use chern::{
    chern_character, chern_character_inverse_monomial, minimal_integral_multiplier, ChernError, HClass, KClass,
};
pub use divisibility::{
    hurewicz_cokernel_order, hurewicz_kernel_order, k_from_bplus, sharpness_scan, sw_divisibility_lower_bound,
    DivisibilityError, DivisibilityReport,
};
pub use fourmanifold::{
    dirac_index_d, divisibility_constraint, donaldson_k, expected_moduli_dimension, DonaldsonK, FourManifoldData,
    ManifoldError,
};
pub use lattice::{
    diagonal_witness, donaldson_admissible, enumerate_coset_by_norm, find_characteristic, is_characteristic,
    min_characteristic_norm, validate, AdmissibilityVerdict, GramMatrix, LatticeError, LatticeVector, Validity,
};
pub use rational::Rational;
pub use reduction::degree::{brouwer_degree, DegreeError, DegreeOptions};
pub use reduction::demo::proper_not_bounded_demo;
pub use reduction::{
    choose_reduction_subspace, reduce_and_degree, stability_check, verify_miss_condition, DegreeReport, MissVerdict,
    ProblemSpec, ReductionError, ReductionOptions, ReductionProblem, Retraction, StabilityVerdict,
};
pub use series::{taylor_coefficients_a, TruncatedSeries};
