//! Exact equivariant Riemann–Roch characters from isolated fixed-point data.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice_weyl`]: weights, root data and the Weyl group.
//! * [`characters`]: the character ring of the torus and slab-truncated
//!   polarized series.
//! * [`induction`]: Weyl characters, holomorphic induction and decomposition
//!   into irreducibles.
//! * [`geometry`]: fixed-point data of a manifold with bundles and moment
//!   values, plus generators for standard examples.
//! * [`localization`]: fixed-point summation, localized characters, induction
//!   of strata and the verification reports built on top of them.

pub mod characters;
pub mod gallery;
pub mod geometry;
pub mod induction;
pub mod lattice_weyl;
pub mod localization;

pub use lattice_weyl::{
    DominantWitness, Gram, LatticeError, Rational, RationalWeight, RootDatum, Weight, WeylElement,
};
pub use characters::{
    geometric_expansion, polarized_inverse, wedge_dual, CharacterError, HalfSpace, LaurentElement,
    Polarization, PolarizedSeries, Window, WindowedCharacter,
};
pub use induction::{
    decompose_invariant, hol, hol_from_levi, hol_series, hol_via_subgroup, hol_windowed,
    invariant_part, restrict, weyl_character, GCharacter, InductionError,
};
pub use geometry::{
    check_moment_bundle, critical_set, dual, make_flag_manifold, make_point,
    make_projective_space, product, tensor_power, validate, Diagnostic, FixedPointDatum,
    GeometryError, ManifoldSpec, Stratum, StratumMember,
};
pub use localization::{
    decompose, eta, generic_directions, induce_decomposition, induce_localized, level_unit,
    multiplicity_support_check, point_contribution, positivity_certificate, rigidity_check,
    rr_character, rr_g, rr_localized, rr_localized_zero, su2_theta, su2_theta_induced, verify,
    Certificate, Decomposition, InducedDecomposition, LocalizationError, LocalizedCharacter,
    LocalizedStratum, RigidityReport, Status, VerificationRecord, VerificationReport, VerifyOptions,
};
