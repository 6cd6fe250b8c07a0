//! Known factors of integer Chebyshev polynomials and exact multiplicity extraction.

use serde::{Deserialize, Serialize};

use super::record::{FactorPower, FactorizationRecord};
use crate::polycore::IntPoly;

/// Known factors for `[0, 1/4]` in the variable `z`.
pub fn quarter_interval_factors() -> Vec<IntPoly> {
    [
        &[0, 1][..],
        &[-1, 4],
        &[-1, 5],
        &[-1, 6],
        &[1, -11, 29],
        &[-1, 17, -94, 169],
        &[1, -23, 194, -712, 961],
        &[-1, 28, -310, 1697, -4594, 4921],
    ]
    .iter()
    .map(|c| IntPoly::from_i64s(c))
    .collect()
}

/// Known factors `A_1, ..., A_8` for `[0, 1]` in the variable `x`.
pub fn unit_interval_factors() -> Vec<IntPoly> {
    [
        &[0, 1, -1][..],
        &[-1, 2],
        &[1, -5, 5],
        &[1, -6, 6],
        &[1, -11, 40, -58, 29],
        &[1, -17, 111, -357, 601, -507, 169],
        &[1, -23, 217, -1100, 3291, -5980, 6478, -3844, 961],
        &[1, -28, 338, -2317, 9995, -28388, 53866, -67586, 53804, -24605, 4921],
    ]
    .iter()
    .map(|c| IntPoly::from_i64s(c))
    .collect()
}

/// Multiplicity of one known factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub factor: IntPoly,
    pub multiplicity: usize,
    /// `multiplicity / n`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub degree: usize,
    pub entries: Vec<MultiplicityEntry>,
    pub residual: IntPoly,
}

/// Default factor list for a record's domain: the `z` table on `[0, 1/4]`,
/// the `x` table otherwise.
pub fn default_factors(record: &FactorizationRecord) -> Vec<IntPoly> {
    match record.domain.intervals() {
        [iv] if iv[0] == 0.0 && iv[1] == 0.25 => quarter_interval_factors(),
        _ => unit_interval_factors(),
    }
}

/// Divides out each known factor as often as it divides exactly, in list order.
///
/// Returns the table and the record with `factors` and `residual` filled in.
pub fn factor_analyze(record: &FactorizationRecord, known: &[IntPoly]) -> (MultiplicityTable, FactorizationRecord) {
    let mut rest = record.polynomial.clone();
    let mut factors = Vec::new();
    let mut entries = Vec::new();
    for f in known {
        let mut l = 0;
        if f.degree().unwrap_or(0) > 0 && !rest.is_zero() {
            while let Some(q) = rest.div_exact(f) {
                rest = q;
                l += 1;
            }
        }
        if l > 0 {
            factors.push(FactorPower { factor: f.clone(), multiplicity: l });
        }
        entries.push(MultiplicityEntry { factor: f.clone(), multiplicity: l, ratio: l as f64 / record.degree.max(1) as f64 });
    }
    let out = FactorizationRecord { factors, residual: rest.clone(), ..record.clone() };
    (MultiplicityTable { degree: record.degree, entries, residual: rest }, out)
}
