//! Resonances, equivariant Poincaré-Dulac normal forms, Koenigs
//! linearization and germs over cyclic quotient singularities.

pub mod hj_germ;
pub mod homological;
pub mod koenigs;
pub mod poincare_dulac;
pub mod resonance;

pub use hj_germ::{classify_hj_germ, identify_form, HjCase, HjGermForm};
pub use homological::{homological_split, HomologicalSplit};
pub use koenigs::{koenigs, solve_conjugacy_equation, KoenigsMethod, KoenigsResult};
pub use poincare_dulac::{poincare_dulac, LinearTreatment, NormalFormResult};
pub use resonance::{resonances, ResonanceReport};
