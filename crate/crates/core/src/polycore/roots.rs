//! Complex roots of integer polynomials.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::poly::{horner_complex, IntPoly};
use crate::error::{domain_err, Error, Result};
use crate::scalar::{real, Real};

/// A root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root<T> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

const MAX_ITER: usize = 500;

/// All roots of `p`, multiplicities from an exact squarefree split.
///
/// Roots are sorted by real part then imaginary part; real roots have an exactly
/// zero imaginary part and nonreal ones come in conjugate pairs.
pub fn poly_roots<T: Real>(p: &IntPoly, tol: T) -> Result<Vec<Root<T>>> {
    let deg = match p.degree() {
        None | Some(0) => return domain_err("root extraction needs a polynomial of degree at least 1"),
        Some(d) => d,
    };
    let (_, parts) = p.squarefree_decomposition();
    let mut out = Vec::with_capacity(deg);
    for (g, m) in parts {
        for z in squarefree_roots(&g, tol)? {
            out.push(Root { value: z, multiplicity: m });
        }
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(out)
}

/// Real roots only, each listed once.
pub fn real_roots<T: Real>(p: &IntPoly, tol: T) -> Result<Vec<T>> {
    Ok(poly_roots(p, tol)?
        .into_iter()
        .filter(|r| r.value.im == T::zero())
        .map(|r| r.value.re)
        .collect())
}

fn squarefree_roots<T: Real>(g: &IntPoly, tol: T) -> Result<Vec<Complex<T>>> {
    let n = g.degree().unwrap_or(0);
    let c: Vec<T> = g.to_real_coeffs();
    if n == 1 {
        return Ok(vec![Complex::new(-c[0] / c[1], T::zero())]);
    }
    let dc: Vec<T> = g.derivative().to_real_coeffs();
    let zero = T::zero();

    // Initial guesses on a circle of the Cauchy radius, rotated off the real axis.
    let lead = c[n].abs();
    let radius = c[..n].iter().map(|ci| ci.abs() / lead).fold(zero, T::max) + T::one();
    let radius = radius.min(real(1e3)).max(real(1e-3));
    let tau = T::PI() + T::PI();
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let theta = tau * T::from_usize(k).unwrap() / T::from_usize(n).unwrap() + real(0.4);
            Complex::from_polar(radius * real(0.5), theta)
        })
        .collect();

    for _ in 0..MAX_ITER {
        let mut max_step = zero;
        for i in 0..n {
            let pz = horner_complex(&c, z[i]);
            let dpz = horner_complex(&dc, z[i]);
            if pz.norm() == zero {
                continue;
            }
            let ratio = pz / dpz;
            let mut repulsion = Complex::new(zero, zero);
            for j in 0..n {
                if j != i {
                    repulsion = repulsion + (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex::new(T::one(), zero) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = z[i] - step;
                max_step = max_step.max(step.norm() / (T::one() + z[i].norm()));
            }
        }
        if max_step < T::epsilon() * real(16.0) {
            break;
        }
    }

    // Newton polish, then snap near-real roots onto the axis in conjugate pairs.
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let d = horner_complex(&dc, *zi);
            if d.norm() == zero {
                break;
            }
            let step = horner_complex(&c, *zi) / d;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            *zi = *zi - step;
        }
    }
    let mut residual_ok = true;
    for zi in &z {
        // Error estimate |p/p'| at a simple root.
        let d = horner_complex(&dc, *zi);
        let err = horner_complex(&c, *zi).norm() / d.norm();
        if !(err <= tol) {
            residual_ok = false;
        }
    }
    // Aberth may stall short of its step criterion while the polished roots are fine.
    if !residual_ok {
        return Err(Error::NonConvergence { degree: n, tol: tol.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(pair_conjugates(z, tol))
}

/// Real polynomials have conjugate-symmetric root sets; enforce it exactly.
fn pair_conjugates<T: Real>(mut z: Vec<Complex<T>>, tol: T) -> Vec<Complex<T>> {
    let zero = T::zero();
    let snap = tol.max(T::epsilon().sqrt());
    for zi in z.iter_mut() {
        if zi.im.abs() <= snap * (T::one() + zi.re.abs()) {
            zi.im = zero;
        }
    }
    let mut out = Vec::with_capacity(z.len());
    let mut upper: Vec<Complex<T>> = z.iter().copied().filter(|w| w.im > zero).collect();
    let lower: Vec<Complex<T>> = z.iter().copied().filter(|w| w.im < zero).collect();
    out.extend(z.iter().copied().filter(|w| w.im == zero));
    if upper.len() == lower.len() {
        for u in upper.drain(..) {
            // Average with the nearest conjugate partner.
            let partner = lower
                .iter()
                .copied()
                .min_by(|a, b| (a.conj() - u).norm().partial_cmp(&(b.conj() - u).norm()).unwrap())
                .unwrap();
            let two = T::one() + T::one();
            let avg = Complex::new((u.re + partner.re) / two, (u.im - partner.im) / two);
            out.push(avg);
            out.push(avg.conj());
        }
    } else {
        out.extend(upper);
        out.extend(lower);
    }
    out
}

/// Monic polynomial with the given roots, real coefficients ascending.
pub fn monic_from_roots<T: Real>(roots: &[Root<T>]) -> Vec<T> {
    let mut acc = vec![Complex::new(T::one(), T::zero())];
    for r in roots {
        for _ in 0..r.multiplicity {
            let mut next = vec![Complex::new(T::zero(), T::zero()); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k + 1] = next[k + 1] + *a;
                next[k] = next[k] - *a * r.value;
            }
            acc = next;
        }
    }
    acc.into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn linear_root() {
        let r = poly_roots::<f64>(&p("4z-1"), 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].value, Complex::new(0.25, 0.0));
    }

    #[test]
    fn quadratic_factor() {
        let r = real_roots::<f64>(&p("5z^2-5z+1"), 1e-12).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r[0] - (5.0 - s5) / 10.0).abs() < 1e-14);
        assert!((r[1] - (5.0 + s5) / 10.0).abs() < 1e-14);
    }

    #[test]
    fn conjugate_pair() {
        let r = poly_roots::<f64>(&p("z^2+1"), 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - Complex::new(0.0, -1.0)).norm() < 1e-14);
        assert_eq!(r[0].value, r[1].value.conj());
    }

    #[test]
    fn multiplicities() {
        let q = &p("2z-1").pow(3) * &p("z^2-2");
        let r = poly_roots::<f64>(&q, 1e-10).unwrap();
        let total: usize = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 5);
        let half = r.iter().find(|x| (x.value.re - 0.5).abs() < 1e-12).unwrap();
        assert_eq!(half.multiplicity, 3);
    }

    #[test]
    fn degree_ten_table_factor() {
        let a8 = p("4921x^10-24605x^9+53804x^8-67586x^7+53866x^6-28388x^5+9995x^4-2317x^3+338x^2-28x+1");
        let r = poly_roots::<f64>(&a8, 1e-9).unwrap();
        assert_eq!(r.len(), 10);
        let nonreal = r.iter().filter(|x| x.value.im != 0.0).count();
        assert_eq!(nonreal, 4);
    }

    #[test]
    fn rejects_constants() {
        assert!(poly_roots::<f64>(&IntPoly::constant(3), 1e-12).is_err());
    }
}
