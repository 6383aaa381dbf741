//! Separating invariants of finite group actions on affine varieties.
//!
//! The crate is organized bottom-up: exact fields and matrices, sparse
//! polynomials, a Buchberger engine, then group actions, scenes with their
//! separating-variety component graphs, multiplicative (lattice/torus)
//! actions, and degree-bounded invariant computation. The `sepinv` CLI sits
//! on top of these modules.

pub mod action;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod groebner;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod multiplicative;
pub mod poly;
pub mod scene;

pub use action::{
    act, close_group, is_invariant, is_invariant_torus, laurent_normalize, reynolds,
    ActionElement, FiniteGroup, IntMatrix, DEFAULT_CLOSURE_CAP,
};
pub use error::{Error, Result};
pub use field::{FieldScalar, FieldSpec};
pub use groebner::{
    dimension, groebner_basis, groebner_basis_in, radical_member, singular_locus_ideal, Dimension,
    GroebnerBasis,
    GroebnerConfig,
};
pub use invariants::{
    check_identity, check_membership_mod_variety, default_degree_bound, invariant_space,
    molien_series, GradedPiece, Membership,
};
pub use io::{load_ideal, load_scene, parse_ideal_str, parse_scene_str};
pub use matrix::ExactMatrix;
pub use multiplicative::{
    lattice_height_crosscheck, orbit_sum, reflection_rank_lattice, torus_relations, torus_ring,
    torus_scene, LatticeCodimCheck,
};
pub use poly::{parse_poly, DoubledRing, Monomial, MonomialOrder, PolyRing, Polynomial};
pub use scene::{
    build_component_graph, classify_reflections, crosscheck_connectedness,
    crosscheck_connectedness_with, fixed_codim, fixed_codim_via_ideal, gamma_sep_bounds,
    k_reflection_indices, min_reflection_k, min_reflection_k_from, verify_separating_groebner,
    verify_separating_points, x_connected_in_codim, ComponentGraph, ConnectednessCrosscheck,
    FixedCodim, GammaBounds, HypothesisFlag, PointsVerdict, PointsWitness, ScanSummary, Scene,
    SeparatingVerdict, ViolationCertificate, Weight, DEFAULT_POINT_CAP,
};
