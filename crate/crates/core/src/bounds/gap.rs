//! Sources of `F_w - U^{mu_w}(z)` and the neighbourhood invariance test.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::TwoFactorEquilibrium;
use crate::leja::LejaSequence;
use crate::polycore::IntervalUnion;
use crate::scalar::{real, Real};

/// Anything that can evaluate the weighted potential gap.
pub trait GapEvaluator<T: Real> {
    /// `a = sum a_i m_i` of the underlying weight.
    fn alpha_total(&self) -> T;
    /// `F_w - U^{mu_w}(z)`.
    fn potential_gap(&self, z: Complex<T>) -> Result<T>;
    fn log_weight(&self, z: Complex<T>) -> T;
    /// Support of the equilibrium measure (exact or estimated).
    fn support(&self) -> IntervalUnion<T>;
    /// Zeros of the weight.
    fn weight_zeros(&self) -> Vec<Complex<T>>;
    /// Estimator spread of the last gap evaluation scale; zero for closed forms.
    fn gap_spread(&self, _z: Complex<T>) -> T {
        T::zero()
    }
}

impl<T: Real> GapEvaluator<T> for TwoFactorEquilibrium<T> {
    fn alpha_total(&self) -> T {
        self.params().alpha_total()
    }
    fn potential_gap(&self, z: Complex<T>) -> Result<T> {
        Ok(TwoFactorEquilibrium::potential_gap(self, z))
    }
    fn log_weight(&self, z: Complex<T>) -> T {
        TwoFactorEquilibrium::log_weight(self, z)
    }
    fn support(&self) -> IntervalUnion<T> {
        TwoFactorEquilibrium::support(self).as_union()
    }
    fn weight_zeros(&self) -> Vec<Complex<T>> {
        let p = self.params();
        let mut z = Vec::new();
        if p.alpha1 > T::zero() {
            z.push(Complex::from(T::zero()));
        }
        if p.alpha2 > T::zero() {
            z.push(Complex::from(real::<T>(0.25)));
        }
        z
    }
}

impl<T: Real> GapEvaluator<T> for LejaSequence<T> {
    fn alpha_total(&self) -> T {
        self.weight().alpha_total()
    }
    fn potential_gap(&self, z: Complex<T>) -> Result<T> {
        Ok(self.estimate_potential_gap(z)?.value)
    }
    fn log_weight(&self, z: Complex<T>) -> T {
        self.weight().log_abs_complex(z)
    }
    fn support(&self) -> IntervalUnion<T> {
        self.support_estimate()
    }
    fn weight_zeros(&self) -> Vec<Complex<T>> {
        self.weight().zeros()
    }
    fn gap_spread(&self, z: Complex<T>) -> T {
        self.estimate_potential_gap(z).map(|e| e.spread).unwrap_or(T::nan())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Outcome of sampling `F_w - U^{mu_w}(z) + log w(z)` on the disks `|z - z_j| <= eps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodCheck {
    pub verdict: Verdict,
    /// Largest sampled value of the left side; `NaN` when nothing could be sampled.
    pub max_value: f64,
    pub samples: usize,
}

impl NeighborhoodCheck {
    /// True only for a conclusive pass.
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

const RADII: usize = 12;
const ANGLES: usize = 24;

/// Whether adding the `eps`-disks around the weight zeros provably leaves
/// `t_Z(E)` unchanged, judged on a polar sample of each disk.
///
/// Disks touching the support, or a sample the evaluator rejects, make the
/// answer inconclusive.
pub fn neighborhood_invariance_check<T: Real>(eps: T, evaluator: &impl GapEvaluator<T>) -> NeighborhoodCheck {
    let support = evaluator.support();
    let zeros = evaluator.weight_zeros();
    let mut max = f64::NEG_INFINITY;
    let mut samples = 0;
    let mut inconclusive = !(eps > T::zero()) || zeros.is_empty();
    for z0 in &zeros {
        if support.distance(*z0) <= eps {
            inconclusive = true;
        }
        for i in 1..=RADII {
            let rho = eps * T::from_usize(i).unwrap() / T::from_usize(RADII).unwrap();
            for j in 0..ANGLES {
                let theta = (T::PI() + T::PI()) * T::from_usize(j).unwrap() / T::from_usize(ANGLES).unwrap();
                let z = *z0 + Complex::from_polar(rho, theta);
                match evaluator.potential_gap(z) {
                    Ok(g) => {
                        let v = (g + evaluator.log_weight(z)).to_f64().unwrap();
                        if v.is_nan() {
                            inconclusive = true;
                        } else {
                            max = max.max(v);
                            samples += 1;
                        }
                    }
                    Err(Error::PointInSupport(_)) => inconclusive = true,
                    Err(_) => inconclusive = true,
                }
            }
        }
    }
    let verdict = if inconclusive {
        Verdict::Inconclusive
    } else if max <= 0.0 {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    NeighborhoodCheck { verdict, max_value: if samples == 0 { f64::NAN } else { max }, samples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::TwoFactorParams;

    #[test]
    fn small_disks_hold() {
        let eq = TwoFactorEquilibrium::new(TwoFactorParams::new(0.290447, 0.09).unwrap()).unwrap();
        let c = neighborhood_invariance_check(1e-3, &eq);
        assert_eq!(c.verdict, Verdict::Holds);
        assert!(c.max_value < 0.0);
        assert_eq!(c.samples, 2 * RADII * ANGLES);
    }

    #[test]
    fn disks_meeting_support_are_inconclusive() {
        let eq = TwoFactorEquilibrium::new(TwoFactorParams::new(0.290447, 0.09).unwrap()).unwrap();
        let c = neighborhood_invariance_check(0.1, &eq);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.max_value.is_finite());
    }
}
