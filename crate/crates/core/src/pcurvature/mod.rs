//! Fast p-curvature via local computations glued by the Chinese remainder theorem.

pub mod driver;
pub mod glue;
pub mod local;
pub mod points;
pub mod solutions;

pub use driver::{
    choose_single_modulus, p_curvature, p_curvature_operator, p_curvature_operator_with, p_curvature_with, Algorithm,
    Options,
};
