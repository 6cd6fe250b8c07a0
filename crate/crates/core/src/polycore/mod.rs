//! Integer polynomials, real domains, weights and safe evaluation.

pub mod domain;
pub mod poly;
pub mod roots;
pub mod supnorm;
pub mod weight;

pub use domain::{parse_real, IntervalUnion, RationalPoint};
pub use poly::IntPoly;
pub use roots::{monic_from_roots, poly_roots, real_roots, Root};
pub use supnorm::sup_norm_on_grid;
pub use weight::{FactorSpec, FactorWeight, WeightFactor};
