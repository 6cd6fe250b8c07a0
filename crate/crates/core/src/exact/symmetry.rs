//! Passing between `[0, 1]` and `[0, 1/4]` through `z = x(1 - x)`.

use serde::{Deserialize, Serialize};

use crate::polycore::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "parity", content = "q")]
pub enum Symmetry {
    /// `p(x) = q(x(1 - x))`.
    Even(IntPoly),
    /// `p(x) = (1 - 2x) q(x(1 - x))`.
    Odd(IntPoly),
    NotSymmetric,
}

/// `q` with `p(x) = q(x - x^2)`, if one exists.
fn reduce_even(p: &IntPoly) -> Option<IntPoly> {
    let z = IntPoly::from_i64s(&[0, 1, -1]);
    let mut rest = p.clone();
    let mut q = vec![num_bigint::BigInt::from(0); p.degree().unwrap_or(0) / 2 + 1];
    while let Some(d) = rest.degree() {
        if d % 2 == 1 {
            return None;
        }
        // z^{d/2} has leading coefficient (-1)^{d/2}.
        let mut c = rest.leading().unwrap().clone();
        if (d / 2) % 2 == 1 {
            c = -c;
        }
        rest = &rest - &z.pow((d / 2) as u32).scale(&c);
        q[d / 2] = c;
    }
    Some(IntPoly::new(q))
}

pub fn symmetry_reduce(p: &IntPoly) -> Symmetry {
    if let Some(q) = reduce_even(p) {
        return Symmetry::Even(q);
    }
    let odd = IntPoly::from_i64s(&[1, -2]);
    match p.div_exact(&odd).and_then(|r| reduce_even(&r)) {
        Some(q) => Symmetry::Odd(q),
        None => Symmetry::NotSymmetric,
    }
}

/// Inverse of [`symmetry_reduce`].
pub fn symmetry_lift(s: &Symmetry) -> Option<IntPoly> {
    let z = IntPoly::from_i64s(&[0, 1, -1]);
    match s {
        Symmetry::Even(q) => Some(q.compose(&z)),
        Symmetry::Odd(q) => Some(&IntPoly::from_i64s(&[1, -2]) * &q.compose(&z)),
        Symmetry::NotSymmetric => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(symmetry_reduce(&p("x^2-x")), Symmetry::Even(p("-z")));
        // (2x - 1)(x^2 - x) = (1 - 2x)(x - x^2).
        assert_eq!(symmetry_reduce(&(&p("2x-1") * &p("x^2-x"))), Symmetry::Odd(p("z")));
        assert_eq!(symmetry_reduce(&p("x^3")), Symmetry::NotSymmetric);
        assert_eq!(symmetry_reduce(&p("3")), Symmetry::Even(p("3")));
    }

    #[test]
    fn lift_round_trip() {
        for q in ["z", "4z-1", "29z^2-11z+1", "z^3-2"] {
            let q = p(q);
            for s in [Symmetry::Even(q.clone()), Symmetry::Odd(q.clone())] {
                assert_eq!(symmetry_reduce(&symmetry_lift(&s).unwrap()), s);
            }
        }
    }
}
