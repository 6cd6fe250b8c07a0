//! Bounds for integer Chebyshev constants of real sets and lemniscates.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod fmt;
pub mod jacobi;
pub mod leja;
pub mod optimize;
pub mod polycore;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use polycore::{FactorWeight, IntPoly, IntervalUnion, RationalPoint};
pub use scalar::Real;

/// Concrete double-precision types.
pub type IntervalUnionF64 = IntervalUnion<f64>;
pub type FactorWeightF64 = FactorWeight<f64>;
pub type TwoFactorParamsF64 = jacobi::TwoFactorParams<f64>;
pub type TwoFactorEquilibriumF64 = jacobi::TwoFactorEquilibrium<f64>;
pub type LejaSequenceF64 = leja::LejaSequence<f64>;

/// Concrete single-precision types.
pub type IntervalUnionF32 = IntervalUnion<f32>;
pub type FactorWeightF32 = FactorWeight<f32>;
pub type TwoFactorParamsF32 = jacobi::TwoFactorParams<f32>;
pub type TwoFactorEquilibriumF32 = jacobi::TwoFactorEquilibrium<f32>;
pub type LejaSequenceF32 = leja::LejaSequence<f32>;
