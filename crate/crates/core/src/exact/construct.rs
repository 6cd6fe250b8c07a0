//! Small integer polynomials from weighted interpolation nodes.
//!
//! For nodes `zeta_0..zeta_n` the linear forms `l_i(P) = w(zeta_i)^n P(zeta_i)`
//! map integer coefficient vectors onto a full-rank lattice. A reduced basis
//! of that lattice yields a nonzero `P` with all forms small, and
//! `||w^n P||_E <= sum_i |l_i| <= (n + 1) max_i |l_i|` when the nodes are
//! weighted Fekete points.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::lll::lll_reduce;
use crate::error::{domain_err, Error, Result};
use crate::leja::{LejaConfig, LejaSequence};
use crate::polycore::poly::dyadic;
use crate::polycore::{FactorWeight, IntPoly, IntervalUnion};

/// LLL parameter.
const DELTA: (u32, u32) = (99, 100);
/// Reduced vectors combined pairwise when looking for the best candidate.
const PAIR_POOL: usize = 6;
/// Grid points per unit length for the diagnostics (at least this many per node).
const DIAGNOSTIC_GRID: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub polynomial: IntPoly,
    /// `(n + 1) max_i |l_i|`.
    pub certified_bound: f64,
    pub forms: Vec<f64>,
    /// Grid estimate of the Lebesgue constant of the weighted nodes; the
    /// certificate presumes it is at most `n + 1`.
    pub lebesgue_constant: f64,
    /// Grid estimate of `||w^n P||_E`.
    pub grid_norm: f64,
    pub scale_bits: u64,
}

/// `round(2^s v z^j)` for dyadic `v` and `z`, exactly.
fn scaled_entry(v: f64, z: f64, j: usize, s: u64) -> BigInt {
    let (vm, ve) = dyadic(v);
    let (zm, ze) = dyadic(z);
    let num = vm * num_traits::pow(zm, j);
    let den_bits = ve + ze * j as u64;
    if s >= den_bits {
        num << (s - den_bits)
    } else {
        let sh = den_bits - s;
        // Round half up.
        ((num >> (sh - 1)) + 1) >> 1
    }
}

fn log_lagrange_denominators(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| (0..nodes.len()).filter(|&j| j != i).map(|j| (nodes[i] - nodes[j]).abs().ln()).sum())
        .collect()
}

/// Nonzero integer `P` of degree at most `n` with small weighted values at `nodes`.
pub fn hilbert_fekete_construct(
    e: &IntervalUnion<f64>,
    w: &FactorWeight<f64>,
    n: usize,
    nodes: &[f64],
) -> Result<Construction> {
    if nodes.len() != n + 1 {
        return Err(Error::LengthMismatch { left: nodes.len(), right: n + 1 });
    }
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&i, &j| nodes[i].total_cmp(&nodes[j]));
    for p in order.windows(2) {
        if nodes[p[0]] == nodes[p[1]] {
            return Err(Error::SingularNodes(p[0].min(p[1]), p[0].max(p[1])));
        }
    }
    let nf = n as f64;
    let mut lw = Vec::with_capacity(n + 1);
    for &z in nodes {
        if !z.is_finite() || !e.contains(z) {
            return domain_err(format!("node {z} lies outside the domain"));
        }
        let l = nf * w.log_abs(z);
        if !l.is_finite() {
            return domain_err(format!("node {z} is a zero of the weight"));
        }
        lw.push(l);
    }
    let denoms = log_lagrange_denominators(nodes);
    // Minkowski scale of the lattice: |det|^{1/(n+1)}.
    let log_det = lw.iter().sum::<f64>() + denoms.iter().sum::<f64>() / 2.0;
    let target = log_det / (nf + 1.0) / std::f64::consts::LN_2;
    let scale_bits = ((-target).max(0.0).ceil() as u64) + 2 * n as u64 + 40;

    // Row j: values of x^j at the nodes, scaled, then the coordinate vector e_j.
    let basis: Vec<Vec<BigInt>> = (0..=n)
        .map(|j| {
            let mut row: Vec<BigInt> = nodes.iter().zip(&lw).map(|(&z, &l)| scaled_entry(l.exp(), z, j, scale_bits)).collect();
            row.extend((0..=n).map(|t| BigInt::from((t == j) as i64)));
            row
        })
        .collect();
    let (_, h) = lll_reduce(basis, DELTA)?;

    let forms_of = |p: &IntPoly| -> Vec<f64> { nodes.iter().zip(&lw).map(|(&z, &l)| (l + p.log_abs_exact(z)).exp()).collect() };
    let mut cands: Vec<IntPoly> = h.iter().map(|r| IntPoly::new(r.clone())).collect();
    let m = cands.len().min(PAIR_POOL);
    for i in 0..m {
        for j in i + 1..m {
            cands.push(&cands[i] + &cands[j]);
            cands.push(&cands[i] - &cands[j]);
        }
    }
    let mut best: Option<(f64, IntPoly, Vec<f64>)> = None;
    for mut p in cands.into_iter().filter(|p| !p.is_zero()) {
        if p.leading().is_some_and(|c| c.sign() == num_bigint::Sign::Minus) {
            p = -&p;
        }
        let f = forms_of(&p);
        let mx = f.iter().copied().fold(0.0, f64::max);
        let better = match &best {
            None => true,
            Some((bm, bp, _)) => mx < *bm || (mx == *bm && p.coeffs().iter().rev().lt(bp.coeffs().iter().rev())),
        };
        if better {
            best = Some((mx, p, f));
        }
    }
    let (mx, polynomial, forms) = best.expect("reduced basis has nonzero rows");

    let density = DIAGNOSTIC_GRID.max((40.0 * (nf + 1.0) / e.measure().max(1e-300)) as usize);
    let grid = e.grid(density);
    let mut lebesgue: f64 = 0.0;
    let mut grid_norm: f64 = 0.0;
    for &x in &grid {
        let lwx = nf * w.log_abs(x);
        if lwx == f64::NEG_INFINITY {
            continue;
        }
        grid_norm = grid_norm.max((lwx + polynomial.log_abs_exact(x)).exp());
        let mut s = 0.0;
        for i in 0..=n {
            if x == nodes[i] {
                s += 1.0;
                continue;
            }
            let num: f64 = (0..=n).filter(|&j| j != i).map(|j| (x - nodes[j]).abs().ln()).sum();
            s += (lwx - lw[i] + num - denoms[i]).exp();
        }
        lebesgue = lebesgue.max(s);
    }

    Ok(Construction {
        polynomial,
        certified_bound: (nf + 1.0) * mx,
        forms,
        lebesgue_constant: lebesgue,
        grid_norm,
        scale_bits,
    })
}

/// Weighted Leja points `a_0..a_n`, the practical node choice.
pub fn leja_nodes(e: &IntervalUnion<f64>, w: &FactorWeight<f64>, n: usize) -> Result<Vec<f64>> {
    Ok(LejaSequence::generate(e.clone(), w.clone(), n, LejaConfig::default())?.points().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_on_unit_interval() {
        let e = IntervalUnion::interval(0.0, 1.0).unwrap();
        let w = FactorWeight::unit();
        let nodes = leja_nodes(&e, &w, 2).unwrap();
        let c = hilbert_fekete_construct(&e, &w, 2, &nodes).unwrap();
        assert_eq!(c.polynomial, IntPoly::from_i64s(&[0, -1, 1]));
        assert!(c.certified_bound >= 0.25);
        assert!((c.grid_norm - 0.25).abs() < 1e-12);
    }

    #[test]
    fn coincident_nodes() {
        let e = IntervalUnion::interval(0.0, 1.0).unwrap();
        let r = hilbert_fekete_construct(&e, &FactorWeight::unit(), 2, &[0.0, 0.5, 0.5]);
        assert!(matches!(r, Err(Error::SingularNodes(1, 2))));
    }
}
