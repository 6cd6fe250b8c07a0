//! Grid estimate of `sup_E |p|` with refinement at the discrete maxima.

use super::domain::IntervalUnion;
use super::poly::IntPoly;
use crate::optimize::golden_max;
use crate::scalar::Real;

const REFINE_ITERS: usize = 80;

/// `max |p(x)|` over a grid of `grid_density` points per unit length, each
/// discrete local maximum refined by golden section on its neighbouring cells.
///
/// Never exceeds the true sup norm beyond rounding.
pub fn sup_norm_on_grid<T: Real>(p: &IntPoly, domain: &IntervalUnion<T>, grid_density: usize) -> T {
    let coeffs = p.to_real_coeffs::<T>();
    let f = |x: T| super::poly::horner(&coeffs, x).abs();
    let mut best = T::zero();
    for iv in domain.intervals() {
        let piece = IntervalUnion::interval(iv[0], iv[1]).expect("valid piece");
        let xs = piece.grid(grid_density);
        let vs: Vec<T> = xs.iter().map(|&x| f(x)).collect();
        for (i, &v) in vs.iter().enumerate() {
            best = best.max(v);
            let left = if i == 0 { T::neg_infinity() } else { vs[i - 1] };
            let right = vs.get(i + 1).copied().unwrap_or(T::neg_infinity());
            if v >= left && v >= right && xs.len() > 1 {
                let lo = xs[i.saturating_sub(1)];
                let hi = xs[(i + 1).min(xs.len() - 1)];
                let (_, r) = golden_max(f, lo, hi, REFINE_ITERS);
                best = best.max(r);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> IntervalUnion<f64> {
        IntervalUnion::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn parabola() {
        let v = sup_norm_on_grid(&"x^2-x".parse().unwrap(), &unit(), 1000);
        assert_relative_eq!(v, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn endpoint_maximum() {
        assert_eq!(sup_norm_on_grid(&"2x-1".parse().unwrap(), &unit(), 10), 1.0);
    }

    #[test]
    fn cubic_interior_maximum() {
        // x(1-x)(2x-1) = -u(u^2-1)/4 with u = 2x-1, maximal at u = 1/sqrt 3
        let v = sup_norm_on_grid(&"-2x^3+3x^2-x".parse().unwrap(), &unit(), 997);
        assert_relative_eq!(v, 1.0 / (6.0 * 3f64.sqrt()), epsilon = 1e-14);
    }
}
