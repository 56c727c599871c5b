//! Exact computations in double affine Hecke algebras.
//!
//! The crate builds, over any reduced irreducible root system, the polynomial
//! (basic) representation of the double affine Hecke algebra with exact
//! coefficients in `q^(1/2m)` and `t_nu^(1/2)`, computes nonsymmetric
//! Macdonald polynomials as joint eigenvectors of the commuting `Y`-operators,
//! and verifies the structural identities of the theory (defining relations,
//! duality of the Fourier pairing, evaluation and norm product formulas,
//! recurrence/Pieri expansions, symmetrizations, shift operator) as exact
//! identities of rational functions. A separate layer specializes `q` to a
//! root of unity and builds the finite-dimensional modules carrying a
//! projective `SL(2,Z)` action.
//!
//! Module map:
//! - [`scalar`], [`mpoly`], [`ratfun`], [`cyclotomic`]: the coefficient fields
//!   (multivariate rational functions over `Q` or over a cyclotomic field).
//! - [`rootsys`]: static root-system data (roots, coroots, coweights,
//!   lattices, the group `Pi`, normalization constants).
//! - [`weyl`]: the extended affine Weyl group, lengths, lambda-sets, reduced
//!   words, orderings and cones on the coweight lattice.
//! - [`coeffs`]: Laurent polynomials over the coefficient field, conjugations,
//!   spectral points and evaluation maps.
//! - [`ops`]: the operators of the basic representation (X, group elements,
//!   Demazure-Lusztig T, Y, G-products, intertwiners, symmetrizers) and the
//!   defining-relation checker.
//! - [`macdonald`]: nonsymmetric Macdonald polynomials and their spectral
//!   theory (duality, evaluation, norms, Pieri, symmetric polynomials, shift).
//! - [`unity`]: roots-of-unity specializations, the finite module `V_N`, the
//!   Gaussian, and the projective `SL(2,Z)` matrices.
//! - [`par`]: data-parallel batch driver (rayon behind the `parallel`
//!   feature, with a sequential fallback).

pub mod coeffs;
pub mod cyclotomic;
pub mod linalg;
pub mod macdonald;
pub mod mpoly;
pub mod ops;
pub mod par;
pub mod ratfun;
pub mod rootsys;
pub mod scalar;
pub mod unity;
pub mod weyl;

use thiserror::Error;

/// Errors produced by constructors and operations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root system type: {0}")]
    InvalidType(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("exponent of {var} is not integral: got {num}/{den}")]
    NonIntegralExponent { var: &'static str, num: i64, den: i64 },
    #[error("linear system is singular: {0}")]
    SingularSystem(String),
    #[error("spectral point lies on a wall: {0}")]
    WallSingularity(String),
    #[error("denominator vanishes under specialization: {0}")]
    VanishingDenominator(String),
    #[error("inadmissible roots-of-unity parameters: {0}")]
    InadmissibleContext(String),
    #[error("sign set violates the stabilizer constraint at node {0}")]
    BadSignSet(usize),
    #[error("expansion window exhausted: {0}")]
    WindowExhausted(String),
    #[error("relation failed: {0}")]
    RelationFailed(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
