//! Product weights `w = (prod |Q_i|^{a_i})^{1/(1-a)}` with `a = sum a_i deg Q_i`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use super::roots::{poly_roots, Root};
use crate::error::{domain_err, Error, Result};
use crate::scalar::{real, Real};

/// One factor of a weight with its cached roots.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFactor<T: Real> {
    poly: IntPoly,
    exponent: T,
    log_lead: T,
    roots: Vec<Root<T>>,
}

impl<T: Real> WeightFactor<T> {
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn roots(&self) -> &[Root<T>] {
        &self.roots
    }

    /// `log|Q(z)|` through the factored form, accurate near the roots.
    pub fn log_abs_complex(&self, z: Complex<T>) -> T {
        let mut acc = self.log_lead;
        for r in &self.roots {
            let d = (z - r.value).norm();
            acc = acc + T::from_usize(r.multiplicity).unwrap() * d.ln();
        }
        acc
    }

    pub fn log_abs(&self, x: T) -> T {
        self.log_abs_complex(Complex::new(x, T::zero()))
    }
}

/// Serialised form: `[{"poly": [-1, 4], "exponent": 0.1}, ...]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec<T> {
    pub poly: IntPoly,
    pub exponent: T,
}

/// Weight built from integer polynomial factors.
///
/// The empty factor list is the unit weight `w = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Real"))]
#[serde(try_from = "Vec<FactorSpec<T>>", into = "Vec<FactorSpec<T>>")]
pub struct FactorWeight<T: Real> {
    factors: Vec<WeightFactor<T>>,
    alpha_total: T,
}

impl<T: Real> FactorWeight<T> {
    pub fn new(factors: Vec<(IntPoly, T)>) -> Result<Self> {
        let tol: T = real::<T>(1e-9).max(T::epsilon() * real(1e3));
        let mut out = Vec::with_capacity(factors.len());
        let mut alpha = T::zero();
        for (poly, exponent) in factors {
            let deg = match poly.degree() {
                Some(d) if d >= 1 => d,
                _ => return domain_err(format!("weight factor {poly} is constant")),
            };
            if !(exponent > T::zero()) || !exponent.is_finite() {
                return domain_err(format!("exponent {exponent} of factor {poly} must be positive"));
            }
            alpha = alpha + exponent * T::from_usize(deg).unwrap();
            let roots = poly_roots(&poly, tol)?;
            let lead = poly.leading().unwrap();
            let log_lead = T::from_f64(super::poly::log_abs_bigint(lead)).unwrap();
            out.push(WeightFactor { poly, exponent, log_lead, roots });
        }
        if !(alpha < T::one()) {
            return domain_err(format!("total exponent {alpha} must be below 1"));
        }
        Ok(FactorWeight { factors: out, alpha_total: alpha })
    }

    pub fn unit() -> Self {
        FactorWeight { factors: Vec::new(), alpha_total: T::zero() }
    }

    pub fn from_specs(specs: Vec<FactorSpec<T>>) -> Result<Self> {
        Self::new(specs.into_iter().map(|s| (s.poly, s.exponent)).collect())
    }

    pub fn factors(&self) -> &[WeightFactor<T>] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// `a = sum a_i m_i`.
    pub fn alpha_total(&self) -> T {
        self.alpha_total
    }

    /// `1 / (1 - a)`.
    pub fn normaliser(&self) -> T {
        (T::one() - self.alpha_total).recip()
    }

    /// `log w(z)`; `-inf` at factor zeros.
    pub fn log_abs_complex(&self, z: Complex<T>) -> T {
        if self.factors.is_empty() {
            return T::zero();
        }
        let mut acc = T::zero();
        for f in &self.factors {
            let l = f.log_abs_complex(z);
            if l == T::neg_infinity() {
                return T::neg_infinity();
            }
            acc = acc + f.exponent * l;
        }
        acc * self.normaliser()
    }

    /// `log w(x)` on the real line; `-inf` exactly at factor zeros.
    pub fn log_abs(&self, x: T) -> T {
        self.log_abs_complex(Complex::new(x, T::zero()))
    }

    /// Every root of every factor.
    pub fn zeros(&self) -> Vec<Complex<T>> {
        self.factors.iter().flat_map(|f| f.roots.iter().map(|r| r.value)).collect()
    }

    /// Real factor zeros, sorted and deduplicated.
    pub fn real_zeros(&self) -> Vec<T> {
        let mut z: Vec<T> =
            self.zeros().into_iter().filter(|c| c.im == T::zero()).map(|c| c.re).collect();
        z.sort_by(|a, b| a.partial_cmp(b).unwrap());
        z.dedup();
        z
    }

    pub fn specs(&self) -> Vec<FactorSpec<T>> {
        self.factors.iter().map(|f| FactorSpec { poly: f.poly.clone(), exponent: f.exponent }).collect()
    }
}

impl<T: Real> TryFrom<Vec<FactorSpec<T>>> for FactorWeight<T> {
    type Error = Error;
    fn try_from(v: Vec<FactorSpec<T>>) -> Result<Self> {
        Self::from_specs(v)
    }
}

impl<T: Real> From<FactorWeight<T>> for Vec<FactorSpec<T>> {
    fn from(w: FactorWeight<T>) -> Self {
        w.specs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn unit_modulus_gives_zero() {
        let w = FactorWeight::new(vec![(p("z"), 0.4)]).unwrap();
        assert_eq!(w.log_abs(1.0), 0.0);
        assert_eq!(w.log_abs(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn two_factor_hand_value() {
        // 1/(1 - 0.6) (0.5 ln 1/8 + 0.1 ln 1/2) = 2.5 (-1.5 - 0.1) ln 2 = -4 ln 2
        let w = FactorWeight::new(vec![(p("z"), 0.5), (p("4z-1"), 0.1)]).unwrap();
        assert_relative_eq!(w.log_abs(0.125), -4.0 * std::f64::consts::LN_2, epsilon = 1e-14);
    }

    #[test]
    fn rejects_invalid() {
        assert!(FactorWeight::new(vec![(p("z"), 1.0)]).is_err());
        assert!(FactorWeight::new(vec![(p("z"), -0.1)]).is_err());
        assert!(FactorWeight::new(vec![(p("3"), 0.1)]).is_err());
        assert!(FactorWeight::new(vec![(p("z^2"), 0.5)]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let w = FactorWeight::new(vec![(p("z"), 0.5), (p("-1,4"), 0.1)]).unwrap();
        let txt = serde_json::to_string(&w).unwrap();
        let back: FactorWeight<f64> = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, w);
    }
}
