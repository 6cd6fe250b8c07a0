//! Closed-form equilibrium for the weight `|z|^{2 a1} |4z - 1|^{a2}` on `[0, 1/4]`.
//!
//! The support is an interval `[a, b]` inside `(0, 1/4)`, the density is an
//! explicit Jacobi-type function and the potential follows from Green
//! functions of the complement of `[a, b]` with poles at infinity, 0 and 1/4,
//! all obtained from the Joukowski map.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain_err, Result};
use crate::polycore::{FactorWeight, IntPoly, IntervalUnion};
use crate::quadrature::{integrate, Quadrature};
use crate::scalar::{real, Real};

/// Exponent pair in the triangle `a1, a2 >= 0`, `2 a1 + a2 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoFactorParams<T> {
    pub alpha1: T,
    pub alpha2: T,
}

impl<T: Real> TwoFactorParams<T> {
    pub fn new(alpha1: T, alpha2: T) -> Result<Self> {
        let p = TwoFactorParams { alpha1, alpha2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let two = T::one() + T::one();
        if !(self.alpha1 >= T::zero() && self.alpha2 >= T::zero() && two * self.alpha1 + self.alpha2 < T::one()) {
            return domain_err(format!(
                "(alpha1, alpha2) = ({}, {}) is outside the triangle 2 alpha1 + alpha2 < 1",
                self.alpha1, self.alpha2
            ));
        }
        Ok(())
    }

    /// Total exponent `2 a1 + a2`.
    pub fn alpha_total(&self) -> T {
        self.alpha1 + self.alpha1 + self.alpha2
    }

    /// `1 - 2 a1 - a2`.
    pub fn normaliser(&self) -> T {
        T::one() - self.alpha_total()
    }

    /// The same weight as a general factor weight (zero exponents dropped).
    pub fn weight(&self) -> FactorWeight<T> {
        let mut f = Vec::new();
        if self.alpha1 > T::zero() {
            f.push((IntPoly::identity(), self.alpha1 + self.alpha1));
        }
        if self.alpha2 > T::zero() {
            f.push((IntPoly::from_i64s(&[-1, 4]), self.alpha2));
        }
        FactorWeight::new(f).expect("triangle parameters give a valid weight")
    }
}

/// `[a, b]` together with the discriminant it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportInterval<T> {
    pub a: T,
    pub b: T,
    pub delta: T,
}

impl<T: Real> SupportInterval<T> {
    pub fn as_union(&self) -> IntervalUnion<T> {
        IntervalUnion::interval(self.a, self.b).expect("ordered endpoints")
    }

    /// `(b - a) / 4`.
    pub fn capacity(&self) -> T {
        (self.b - self.a) / real(4.0)
    }
}

/// `Delta(a1, a2) = (1 - (2a1 + a2)^2)(1 - (2a1 - a2)^2)`.
pub fn discriminant<T: Real>(alpha1: T, alpha2: T) -> T {
    let two = T::one() + T::one();
    let s = two * alpha1 + alpha2;
    let d = two * alpha1 - alpha2;
    (T::one() - s * s) * (T::one() - d * d)
}

pub fn support_endpoints<T: Real>(p: &TwoFactorParams<T>) -> Result<SupportInterval<T>> {
    p.validate()?;
    let delta = discriminant(p.alpha1, p.alpha2);
    let root = delta.max(T::zero()).sqrt();
    let base = real::<T>(4.0) * p.alpha1 * p.alpha1 - p.alpha2 * p.alpha2 + T::one();
    let eight: T = real(8.0);
    let a = ((base - root) / eight).max(T::zero());
    let b = ((base + root) / eight).min(real(0.25));
    Ok(SupportInterval { a, b, delta })
}

/// Where a Green function has its logarithmic pole.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Pole<T> {
    Infinity,
    At(T),
}

/// Green function of the complement of `[a, b]` with one pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenEvaluator<T> {
    pub a: T,
    pub b: T,
    pub pole: Pole<T>,
}

/// `max |u +- sqrt(u^2 - d^2)|`, the exterior branch of the Joukowski inverse.
fn exterior_modulus<T: Real>(u: Complex<T>, d: Complex<T>) -> T {
    let r = (u * u - d * d).sqrt();
    (u + r).norm().max((u - r).norm())
}

impl<T: Real> GreenEvaluator<T> {
    pub fn new(a: T, b: T, pole: Pole<T>) -> Result<Self> {
        if !(a < b) {
            return domain_err(format!("degenerate support [{a}, {b}]"));
        }
        if let Pole::At(p) = pole {
            if a <= p && p <= b {
                return domain_err(format!("pole {p} lies on the support [{a}, {b}]"));
            }
        }
        Ok(GreenEvaluator { a, b, pole })
    }

    /// `log |z - p| + g(z, p)` for a finite pole, `g(z, inf)` otherwise.
    /// Finite at the pole itself.
    pub fn regularised(&self, z: Complex<T>) -> T {
        let two = T::one() + T::one();
        match self.pole {
            Pole::Infinity => {
                let s = (z * two - Complex::from(self.a + self.b)) / (self.b - self.a);
                exterior_modulus(s, Complex::from(T::one())).ln()
            }
            Pole::At(p) => {
                // Under t = 1/(z - p) the support maps to [lo, hi].
                let (x1, x2) = ((self.a - p).recip(), (self.b - p).recip());
                let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
                let d = z - Complex::from(p);
                let u = (Complex::from(two) - d * (lo + hi)) / (hi - lo);
                exterior_modulus(u, d).ln()
            }
        }
    }

    /// `g(z, pole)`; zero on `[a, b]`, `+inf` at the pole.
    pub fn green(&self, z: Complex<T>) -> T {
        match self.pole {
            Pole::Infinity => self.regularised(z).max(T::zero()),
            Pole::At(p) => {
                let d = (z - Complex::from(p)).norm();
                if d == T::zero() {
                    return T::infinity();
                }
                (self.regularised(z) - d.ln()).max(T::zero())
            }
        }
    }

    /// `|Phi(z)|` of the exterior conformal map sending the pole to infinity.
    pub fn map_modulus(&self, z: Complex<T>) -> T {
        self.green(z).exp()
    }
}

/// All closed-form data for one parameter pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFactorEquilibrium<T: Real> {
    params: TwoFactorParams<T>,
    support: SupportInterval<T>,
    robin: T,
    g_inf: GreenEvaluator<T>,
    g_zero: Option<GreenEvaluator<T>>,
    g_quarter: Option<GreenEvaluator<T>>,
}

const QUAD_TOL: f64 = 1e-13;

/// Quadrature tolerance attainable in `T`.
fn quad_tol<T: Real>() -> T {
    real::<T>(QUAD_TOL).max(T::epsilon() * real(64.0))
}

impl<T: Real> TwoFactorEquilibrium<T> {
    pub fn new(params: TwoFactorParams<T>) -> Result<Self> {
        let support = support_endpoints(&params)?;
        let robin = robin_from_support(&params, &support);
        let (a, b) = (support.a, support.b);
        let g_inf = GreenEvaluator::new(a, b, Pole::Infinity)?;
        let g_zero = if params.alpha1 > T::zero() { Some(GreenEvaluator::new(a, b, Pole::At(T::zero()))?) } else { None };
        let g_quarter =
            if params.alpha2 > T::zero() { Some(GreenEvaluator::new(a, b, Pole::At(real(0.25)))?) } else { None };
        Ok(TwoFactorEquilibrium { params, support, robin, g_inf, g_zero, g_quarter })
    }

    pub fn params(&self) -> &TwoFactorParams<T> {
        &self.params
    }

    pub fn support(&self) -> &SupportInterval<T> {
        &self.support
    }

    /// Modified Robin constant `F_w`.
    pub fn robin(&self) -> T {
        self.robin
    }

    pub fn green_infinity(&self) -> &GreenEvaluator<T> {
        &self.g_inf
    }

    /// `log w(x) = (2 a1 log|x| + a2 log|4x - 1|) / (1 - 2 a1 - a2)`.
    pub fn log_weight(&self, z: Complex<T>) -> T {
        let p = &self.params;
        let mut acc = T::zero();
        if p.alpha1 > T::zero() {
            acc = acc + (p.alpha1 + p.alpha1) * z.norm().ln();
        }
        if p.alpha2 > T::zero() {
            acc = acc + p.alpha2 * (z * real::<T>(4.0) - Complex::from(T::one())).norm().ln();
        }
        acc / p.normaliser()
    }

    /// Equilibrium density; zero outside `(a, b)`.
    pub fn density(&self, x: T) -> T {
        let SupportInterval { a, b, .. } = self.support;
        if !(x > a && x < b) {
            return T::zero();
        }
        ((x - a) * (b - x)).sqrt() / (T::PI() * self.params.normaliser() * x * (real::<T>(0.25) - x))
    }

    /// Density in the variable `x = a + (b - a) sin^2 t`, `t` in `[0, pi/2]`.
    fn density_theta(&self, t: T) -> T {
        let SupportInterval { a, b, .. } = self.support;
        let (s, c) = t.sin_cos();
        let w = b - a;
        let x = a + w * s * s;
        // 1/4 - x without cancellation when b = 1/4
        let y = (real::<T>(0.25) - b) + w * c * c;
        w * w * (T::one() + T::one()) * s * s * c * c / (T::PI() * self.params.normaliser() * x * y)
    }

    fn x_of_theta(&self, t: T) -> T {
        let s = t.sin();
        self.support.a + (self.support.b - self.support.a) * s * s
    }

    fn theta_of_x(&self, x: T) -> T {
        let SupportInterval { a, b, .. } = self.support;
        let r = ((x - a) / (b - a)).max(T::zero()).min(T::one());
        r.sqrt().asin()
    }

    /// `mu_w([a, x])`.
    pub fn cdf(&self, x: T) -> T {
        if x <= self.support.a {
            return T::zero();
        }
        if x >= self.support.b {
            return T::one();
        }
        integrate(|t| self.density_theta(t), T::zero(), self.theta_of_x(x), quad_tol()).value
    }

    /// `mu_w([x0, x1])` for `x0 <= x1`.
    pub fn mass_between(&self, x0: T, x1: T) -> T {
        let t0 = self.theta_of_x(x0);
        let t1 = self.theta_of_x(x1);
        integrate(|t| self.density_theta(t), t0, t1, quad_tol()).value
    }

    /// Total mass of the density (one up to quadrature error).
    pub fn total_mass(&self) -> Quadrature<T> {
        integrate(|t| self.density_theta(t), T::zero(), T::FRAC_PI_2(), quad_tol())
    }

    /// `integral log w d mu_w`.
    pub fn mean_log_weight(&self) -> Quadrature<T> {
        integrate(
            |t| self.log_weight(Complex::from(self.x_of_theta(t))) * self.density_theta(t),
            T::zero(),
            T::FRAC_PI_2(),
            quad_tol(),
        )
    }

    /// `integral log w d omega`, `omega` the arcsine distribution of `[a, b]`.
    pub fn mean_log_weight_arcsine(&self) -> Quadrature<T> {
        let two_over_pi = T::FRAC_2_PI();
        integrate(
            |t| self.log_weight(Complex::from(self.x_of_theta(t))) * two_over_pi,
            T::zero(),
            T::FRAC_PI_2(),
            quad_tol(),
        )
    }

    /// `log cap(E, w) = integral log w d mu_w - F_w`.
    pub fn log_capacity(&self) -> Quadrature<T> {
        let q = self.mean_log_weight();
        Quadrature { value: q.value - self.robin, error: q.error }
    }

    /// `log cap(E, w) = log cap(S_w) + integral log w d(omega + mu_w)`.
    pub fn log_capacity_harmonic(&self) -> Quadrature<T> {
        let q1 = self.mean_log_weight();
        let q2 = self.mean_log_weight_arcsine();
        Quadrature { value: self.support.capacity().ln() + q1.value + q2.value, error: q1.error + q2.error }
    }

    /// `log( cap(S_w) 4^{a2} exp(2 a1 g(0, inf) + a2 g(1/4, inf)) )`, the
    /// Green-function form of the Robin lower bound on the real line.
    pub fn log_lower_product_form(&self) -> T {
        let p = &self.params;
        let mut acc = self.support.capacity().ln();
        if p.alpha1 > T::zero() {
            acc = acc + (p.alpha1 + p.alpha1) * self.g_inf.green(Complex::from(T::zero()));
        }
        if p.alpha2 > T::zero() {
            acc = acc + p.alpha2 * (real::<T>(4.0).ln() + self.g_inf.green(Complex::from(real::<T>(0.25))));
        }
        acc
    }

    /// `F_w - U^{mu_w}(z)`, continuous on the plane.
    pub fn potential_gap(&self, z: Complex<T>) -> T {
        let p = &self.params;
        let mut acc = self.g_inf.green(z);
        if let Some(g0) = &self.g_zero {
            acc = acc - (p.alpha1 + p.alpha1) * g0.regularised(z);
        }
        if let Some(gq) = &self.g_quarter {
            // log|4z - 1| = log 4 + log|z - 1/4|
            acc = acc - p.alpha2 * (real::<T>(4.0).ln() + gq.regularised(z));
        }
        acc / p.normaliser()
    }
}

fn robin_from_support<T: Real>(p: &TwoFactorParams<T>, s: &SupportInterval<T>) -> T {
    let n = p.normaliser();
    let four: T = real(4.0);
    let quarter: T = real(0.25);
    let mut f = (T::one() - p.alpha2) / n * four.ln() - (s.b - s.a).ln();
    if p.alpha1 > T::zero() {
        f = f - four * p.alpha1 / n * (s.a.sqrt() + s.b.sqrt()).ln();
    }
    if p.alpha2 > T::zero() {
        let two = T::one() + T::one();
        f = f - two * p.alpha2 / n * ((quarter - s.a).sqrt() + (quarter - s.b).sqrt()).ln();
    }
    f
}

/// `F_w` for the pair.
pub fn robin_constant<T: Real>(p: &TwoFactorParams<T>) -> Result<T> {
    let s = support_endpoints(p)?;
    Ok(robin_from_support(p, &s))
}

/// Equilibrium density at `x`; `x` must lie in the support.
pub fn density_at<T: Real>(p: &TwoFactorParams<T>, x: T) -> Result<T> {
    let eq = TwoFactorEquilibrium::new(*p)?;
    let s = eq.support();
    if !(x >= s.a && x <= s.b) {
        return domain_err(format!("{x} lies outside the support [{}, {}]", s.a, s.b));
    }
    Ok(eq.density(x))
}

/// `F_w - U^{mu_w}(z)`.
pub fn potential_gap<T: Real>(p: &TwoFactorParams<T>, z: Complex<T>) -> Result<T> {
    Ok(TwoFactorEquilibrium::new(*p)?.potential_gap(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eq(a1: f64, a2: f64) -> TwoFactorEquilibrium<f64> {
        TwoFactorEquilibrium::new(TwoFactorParams::new(a1, a2).unwrap()).unwrap()
    }

    #[test]
    fn unweighted_corner() {
        let s = support_endpoints(&TwoFactorParams::new(0.0, 0.0).unwrap()).unwrap();
        assert_eq!((s.a, s.b, s.delta), (0.0, 0.25, 1.0));
        assert_relative_eq!(robin_constant(&TwoFactorParams::new(0.0, 0.0).unwrap()).unwrap(), 16f64.ln());
    }

    #[test]
    fn quarter_zero_hand_values() {
        let s = support_endpoints(&TwoFactorParams::new(0.25, 0.0).unwrap()).unwrap();
        assert_relative_eq!(s.a, 1.0 / 16.0, epsilon = 1e-16);
        assert_relative_eq!(s.b, 0.25, epsilon = 1e-16);
        assert_relative_eq!(s.delta, 9.0 / 16.0, epsilon = 1e-16);
        let f = robin_constant(&TwoFactorParams::new(0.25, 0.0).unwrap()).unwrap();
        assert_relative_eq!(f, (4096.0f64 / 27.0).ln(), epsilon = 1e-14);
    }

    #[test]
    fn rejects_outside_triangle() {
        assert!(TwoFactorParams::new(0.4, 0.3).is_err());
        assert!(TwoFactorParams::new(-0.1, 0.3).is_err());
    }

    #[test]
    fn optimiser_support_is_interior() {
        let s = support_endpoints(&TwoFactorParams::new(0.290447, 0.09).unwrap()).unwrap();
        assert!(0.0 < s.a && s.a < s.b && s.b < 0.25);
    }

    #[test]
    fn arcsine_limit() {
        let e = eq(0.0, 0.0);
        let x = 0.1;
        assert_relative_eq!(e.density(x), 1.0 / (std::f64::consts::PI * (x * (0.25 - x)).sqrt()), epsilon = 1e-14);
        assert_eq!(e.density(0.0), 0.0);
    }

    #[test]
    fn density_rejects_outside_support() {
        let p = TwoFactorParams::new(0.25, 0.0).unwrap();
        assert!(density_at(&p, 0.01).is_err());
        assert_eq!(density_at(&p, 1.0 / 16.0).unwrap(), 0.0);
    }

    #[test]
    fn unit_mass() {
        assert_relative_eq!(eq(0.290447, 0.09).total_mass().value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn gap_matches_weight_on_support() {
        let e = eq(0.3, 0.12);
        let s = *e.support();
        for k in 1..20 {
            let x = s.a + (s.b - s.a) * k as f64 / 20.0;
            let z = Complex::from(x);
            assert!((e.potential_gap(z) + e.log_weight(z)).abs() < 1e-10);
        }
    }

    #[test]
    fn regularised_green_limits() {
        let e = eq(0.3, 0.12);
        let SupportInterval { a, b, .. } = *e.support();
        let g0 = GreenEvaluator::new(a, b, Pole::At(0.0)).unwrap();
        assert_relative_eq!(g0.regularised(Complex::from(0.0)), (4.0 * a * b / (b - a)).ln(), epsilon = 1e-13);
        let gq = GreenEvaluator::new(a, b, Pole::At(0.25)).unwrap();
        let lim = (16.0 * (0.25 - a) * (0.25 - b) / (b - a)).ln() - 4f64.ln();
        assert_relative_eq!(gq.regularised(Complex::from(0.25)), lim, epsilon = 1e-13);
        let near = Complex::new(1e-7, 0.0);
        assert!((g0.regularised(near) - g0.regularised(Complex::from(0.0))).abs() < 1e-5);
    }

    #[test]
    fn capacity_forms_agree() {
        let e = eq(0.290447, 0.09);
        let l1 = e.log_capacity().value;
        let l2 = e.log_capacity_harmonic().value;
        assert!((l1 - l2).abs() < 1e-10);
        let upper = (l1 * e.params().normaliser() / 2.0).exp();
        assert!((upper - 0.18043338).abs() < 2e-7);
    }
}
