//! Integral LLL reduction (exact arithmetic on Gram determinants).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `round(a / b)` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Reduces `basis` (independent integer rows) with parameter `delta = p/q`.
/// Returns the reduced rows and the unimodular transform `H` with
/// `reduced[i] = sum_j H[i][j] basis[j]`.
pub fn lll_reduce(basis: Vec<Vec<BigInt>>, delta: (u32, u32)) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let n = basis.len();
    let mut b = basis;
    let mut h: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    if n <= 1 {
        return Ok((b, h));
    }
    let (p, q) = (BigInt::from(delta.0), BigInt::from(delta.1));
    // 1-based d and lambda as in the textbook formulation; d[0] = 1.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::Domain("lattice basis is dependent".into()));
    }
    let (mut k, mut kmax) = (2usize, 1usize);

    let red = |k: usize, l: usize, b: &mut Vec<Vec<BigInt>>, h: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt]| {
        if (&lam[k][l] * BigInt::from(2)).abs() > d[l] {
            let r = round_div(&lam[k][l], &d[l]);
            for t in 0..b[k - 1].len() {
                let v = &r * &b[l - 1][t];
                b[k - 1][t] -= v;
            }
            for t in 0..n {
                let v = &r * &h[l - 1][t];
                h[k - 1][t] -= v;
            }
            let v = &r * &d[l];
            lam[k][l] -= v;
            for i in 1..l {
                let v = &r * &lam[l][i];
                lam[k][i] -= v;
            }
        }
    };

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Domain("lattice basis is dependent".into()));
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &mut h, &mut lam, &d);
            let lhs = &q * &d[k] * &d[k - 2];
            let rhs = &p * &d[k - 1] * &d[k - 1] - &q * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                // Swap b_k and b_{k-1}.
                b.swap(k - 1, k - 2);
                h.swap(k - 1, k - 2);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                if k > 2 {
                    k -= 1;
                }
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut b, &mut h, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    Ok((b, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn textbook_example() {
        let basis = vec![v(&[1, 1, 1]), v(&[-1, 0, 2]), v(&[3, 5, 6])];
        let (r, h) = lll_reduce(basis.clone(), (3, 4)).unwrap();
        assert_eq!(r, vec![v(&[0, 1, 0]), v(&[1, 0, 1]), v(&[-1, 0, 2])]);
        for i in 0..3 {
            let row: Vec<BigInt> = (0..3).map(|t| (0..3).map(|j| &h[i][j] * &basis[j][t]).sum()).collect();
            assert_eq!(row, r[i]);
        }
    }

    #[test]
    fn dependent_basis_is_rejected() {
        assert!(lll_reduce(vec![v(&[1, 2]), v(&[2, 4])], (3, 4)).is_err());
    }
}
