//! One-dimensional maximisation helpers.

use crate::scalar::{real, Real};

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns the best abscissa seen, including the bracket ends, with its value.
pub fn golden_max<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, iters: usize) -> (T, T) {
    let inv_phi: T = real(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut best = (lo, f(lo));
    let fb = f(hi);
    if fb > best.1 {
        best = (hi, fb);
    }
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        if !(b - a > T::zero()) {
            break;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let (x, v) = golden_max(|x: f64| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 100);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(v <= 0.0 && v > -1e-14);
    }

    #[test]
    fn keeps_endpoint_maximum() {
        let (x, _) = golden_max(|x: f64| x, 0.0, 1.0, 60);
        assert_eq!(x, 1.0);
    }
}
