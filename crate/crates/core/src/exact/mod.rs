//! Exact small-degree integer Chebyshev polynomials and related constructions.

mod construct;
mod factors;
mod lll;
mod record;
mod search;
mod symmetry;

pub use construct::{hilbert_fekete_construct, leja_nodes, Construction};
pub use factors::{
    default_factors, factor_analyze, quarter_interval_factors, unit_interval_factors, MultiplicityEntry,
    MultiplicityTable,
};
pub use lll::lll_reduce;
pub use record::{FactorPower, FactorizationRecord};
pub use search::{
    brute_force_minimum, chebyshev_matrix, search_degrees, search_integer_chebyshev, search_with_ties,
    sup_norm_critical, SearchOutcome, DEFAULT_MAX_DEGREE, TIE_TOLERANCE,
};
pub use symmetry::{symmetry_lift, symmetry_reduce, Symmetry};
