//! Integer Chebyshev polynomials split into known factors and a residual.

use serde::{Deserialize, Serialize};

use crate::polycore::{IntPoly, IntervalUnion};

/// One known factor and its exact multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPower {
    pub factor: IntPoly,
    pub multiplicity: usize,
}

/// `Q_n = (prod_i F_i^{l_i}) R_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationRecord {
    pub domain: IntervalUnion<f64>,
    /// The degree class searched; the polynomial may have lower degree.
    pub degree: usize,
    pub polynomial: IntPoly,
    pub norm: f64,
    pub factors: Vec<FactorPower>,
    pub residual: IntPoly,
}

impl FactorizationRecord {
    /// A record with no factors extracted yet.
    pub fn unfactored(domain: IntervalUnion<f64>, degree: usize, polynomial: IntPoly, norm: f64) -> Self {
        FactorizationRecord { domain, degree, residual: polynomial.clone(), polynomial, norm, factors: Vec::new() }
    }

    /// Product of the factor powers and the residual.
    pub fn reassemble(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(self.residual.clone(), |acc, f| &acc * &f.factor.pow(f.multiplicity as u32))
    }

    /// Exact reconstruction and degree bookkeeping both hold.
    pub fn is_consistent(&self) -> bool {
        let deg = |p: &IntPoly| p.degree().unwrap_or(0);
        let total: usize = self.factors.iter().map(|f| deg(&f.factor) * f.multiplicity).sum::<usize>() + deg(&self.residual);
        self.reassemble() == self.polynomial && total == deg(&self.polynomial)
    }

    /// `l_i / n` for each factor.
    pub fn ratios(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.multiplicity as f64 / self.degree.max(1) as f64).collect()
    }

    /// `norm^{1/n}`.
    pub fn root_norm(&self) -> f64 {
        self.norm.powf(1.0 / self.degree.max(1) as f64)
    }
}
