//! Computational tools for contracting automorphisms of normal surface
//! singularities.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`] and [`algebra`]: exact cyclotomic or floating coefficients,
//!   truncated jets, composition, inversion, diagonal cyclic groups.
//! * [`normal_form`]: resonances, equivariant Poincaré-Dulac normalization,
//!   Koenigs linearization and the arithmetic of germs over cyclic quotients.
//! * [`graph`]: dual graphs, intersection forms, blow-downs and
//!   Hirzebruch-Jung continued fractions.
//! * [`dynamics`]: corner inequalities, the cycle obstruction and
//!   hyperbolicity propagation from a central curve.
//! * [`orbifold`]: orbifold Euler characteristics, geometrization and
//!   orbibundle degrees.
//! * [`classify`]: the end-to-end classifier and the orbit surface table.
//! * [`verify`] and [`batch`]: the randomized property suite and the
//!   parallel (or sequential) batch driver.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod batch;
pub mod classify;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod normal_form;
pub mod orbifold;
pub mod scalar;
pub mod verify;

pub use error::{AlgebraError, ClassifyError, DynamicsError, GraphError, NormalFormError, OrbifoldError, ParseError};
pub use scalar::{Cyclotomic, Float, Scalar, DEFAULT_TOLERANCE};
