//! p-curvature of linear differential systems and operators over `F_p(x)`.

pub mod arith;
pub mod diff;
pub mod dp;
pub mod error;
pub mod field;
pub mod matrix;
pub mod pcurvature;
pub mod poly;
pub mod quot;
pub mod random;
pub mod ring;
pub mod series;
pub mod toolkit;

pub use diff::{katz_pcurvature, DiffOperator, DiffSystem, PCurvature};
pub use dp::{DpMulti, DpRing, DpSeries};
pub use error::{Error, Result};
pub use field::{is_prime, PrimeField};
pub use matrix::Matrix;
pub use pcurvature::{
    p_curvature, p_curvature_operator, p_curvature_operator_with, p_curvature_with, Algorithm, Options,
};
pub use poly::Poly;
pub use quot::{QuotElem, QuotRing, RingPoly};
pub use ring::{Ring, SeriesAlgebra};
pub use series::{Series, SeriesRing};
