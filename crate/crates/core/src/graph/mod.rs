//! Resolution dual graphs: intersection forms, shapes, blow-downs and
//! Hirzebruch-Jung continued fractions.

pub mod blowdown;
pub mod document;
pub mod hj;
pub mod matrix;
pub mod shape;

pub use blowdown::{blow_down, minimal_negative_model, BlowDown, MinimalModel};
pub use document::{CornerAnnotation, DualGraph, DynamicsAnnotation, Vertex};
pub use hj::{dual_q, hj_expand, hj_fold, resolution_chain, CyclicQuotientData};
pub use matrix::{abs_determinant, intersection_matrix, is_negative_definite, leading_minors};
pub use shape::{chain_order, legs, shape, Shape};
