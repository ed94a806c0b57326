//! Truncated power series, linear algebra and cyclic diagonal group actions.

pub mod codec;
pub mod group;
pub mod jet;
pub mod linalg;
pub mod multi_index;

pub use codec::{GermDocument, JetDocument, JsonScalar};
pub use group::{apply_group, check_commutes, equivariance_lattice, equivariant_average, DiagonalGroup, Side};
pub use jet::{compose, invert, Jet};
pub use linalg::Matrix;
pub use multi_index::{MonomialBasis, MultiIndex};
