//! Branch and bound for integer polynomials of least sup norm on an interval.
//!
//! A polynomial `p = sum k_i x^i` on `[a, b]` is written `sum c_j T_j(t)` with
//! `x = m + h t`. The map `k -> c` is upper triangular, so fixing the
//! coefficients from the top down fixes the Chebyshev coefficients from the
//! top down. Since `||p||^2 >= c_0^2 + (1/2) sum_{j >= 1} c_j^2` (the mean of
//! `p^2` against the arcsine measure), a partial assignment whose fixed
//! Chebyshev coefficients already exceed the incumbent in this sense is pruned.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::FactorizationRecord;
use crate::error::{domain_err, Error, Result};
use crate::polycore::{real_roots, sup_norm_on_grid, IntPoly, IntervalUnion};

/// Degree cap for exhaustive search.
pub const DEFAULT_MAX_DEGREE: usize = 10;
/// Norms within this relative distance of the optimum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Chebyshev coefficients of the monomials on `[a, b]`: `cheb[j][i]` is the
/// coefficient of `T_j` in `x^i`, zero for `j > i`.
pub fn chebyshev_matrix(a: f64, b: f64, n: usize) -> Vec<Vec<f64>> {
    let two = BigRational::from_integer(2.into());
    let to_rat = |v: f64| BigRational::from_float(v).expect("finite endpoint");
    let m = (to_rat(a) + to_rat(b)) / &two;
    let h = (to_rat(b) - to_rat(a)) / &two;
    // tpow[l][j]: coefficient of T_j in t^l.
    let mut tpow: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for l in 1..=n {
        // t T_0 = T_1, t T_j = (T_{j-1} + T_{j+1}) / 2.
        let prev = &tpow[l - 1];
        let mut next = vec![BigRational::zero(); l + 1];
        for (j, c) in prev.iter().enumerate() {
            if j == 0 {
                next[1] += c;
            } else {
                next[j - 1] += c / &two;
                next[j + 1] += c / &two;
            }
        }
        tpow.push(next);
    }
    let binom = |i: usize, l: usize| -> BigRational {
        let mut r = BigInt::one();
        for s in 0..l {
            r = r * (i - s) / (s + 1);
        }
        BigRational::from_integer(r)
    };
    let pow = |x: &BigRational, e: usize| (0..e).fold(BigRational::one(), |acc, _| acc * x);
    let mut out = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        let mut col = vec![BigRational::zero(); i + 1];
        for l in 0..=i {
            let w = binom(i, l) * pow(&m, i - l) * pow(&h, l);
            for (j, c) in tpow[l].iter().enumerate() {
                col[j] += &w * c;
            }
        }
        for (j, c) in col.iter().enumerate() {
            out[j][i] = c.to_f64().unwrap();
        }
    }
    out
}

/// `max_{[a,b]} |p|` from the endpoints and the real critical points.
pub fn sup_norm_critical(p: &IntPoly, a: f64, b: f64) -> Result<f64> {
    let mut best = p.eval_exact(a).abs().max(p.eval_exact(b).abs());
    let d = p.derivative();
    if d.degree().unwrap_or(0) >= 1 {
        for x in real_roots::<f64>(&d, 1e-10)? {
            if x > a && x < b {
                best = best.max(p.eval_exact(x).abs());
            }
        }
    }
    Ok(best)
}

/// Outcome of one search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub record: FactorizationRecord,
    /// Every optimal polynomial up to sign, in tie-break order.
    pub ties: Vec<IntPoly>,
    pub nodes: u64,
}

/// Tie-break key: coefficients from the top degree down, padded to `n + 1`.
fn tie_key(k: &[i64]) -> Vec<i64> {
    k.iter().rev().copied().collect()
}

struct Problem {
    n: usize,
    a: f64,
    b: f64,
    cheb: Vec<Vec<f64>>,
    probes: Vec<f64>,
}

impl Problem {
    fn new(a: f64, b: f64, n: usize) -> Self {
        let probes = (0..=2 * n + 2)
            .map(|i| {
                let t = (std::f64::consts::PI * i as f64 / (2 * n + 2) as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * t
            })
            .collect();
        Problem { n, a, b, cheb: chebyshev_matrix(a, b, n), probes }
    }

    /// Admissible integer range for `k_j` given the higher coefficients.
    fn range(&self, j: usize, k: &[i64], spent: f64, bound: f64) -> Option<(i64, i64)> {
        let s: f64 = (j + 1..=self.n).map(|i| self.cheb[j][i] * k[i] as f64).sum();
        let room = bound * bound - spent;
        if room < 0.0 {
            return None;
        }
        let r = if j == 0 { room.sqrt() } else { (2.0 * room).sqrt() } * (1.0 + 1e-12);
        let d = self.cheb[j][j];
        let lo = ((-r - s) / d).ceil();
        let hi = ((r - s) / d).floor();
        (lo <= hi).then(|| (lo as i64, hi as i64))
    }

    fn energy(&self, j: usize, k: &[i64]) -> f64 {
        let c: f64 = (j..=self.n).map(|i| self.cheb[j][i] * k[i] as f64).sum();
        if j == 0 {
            c * c
        } else {
            0.5 * c * c
        }
    }
}

fn load(x: &AtomicU64) -> f64 {
    f64::from_bits(x.load(Ordering::Relaxed))
}

fn lower_to(x: &AtomicU64, v: f64) {
    let mut cur = x.load(Ordering::Relaxed);
    while v < f64::from_bits(cur) {
        match x.compare_exchange(cur, v.to_bits(), Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => return,
            Err(c) => cur = c,
        }
    }
}

struct Shared {
    best: AtomicU64,
    nodes: AtomicU64,
    found: Mutex<Vec<(f64, Vec<i64>)>>,
}

fn descend(pb: &Problem, sh: &Shared, j: usize, k: &mut Vec<i64>, spent: f64, all_zero: bool) -> Result<()> {
    sh.nodes.fetch_add(1, Ordering::Relaxed);
    let bound = load(&sh.best) * (1.0 + TIE_TOLERANCE);
    let Some((mut lo, hi)) = pb.range(j, k, spent, bound) else {
        return Ok(());
    };
    if all_zero {
        lo = lo.max(if j == 0 { 1 } else { 0 });
    }
    for v in lo..=hi {
        k[j] = v;
        let e = spent + pb.energy(j, k);
        let bound = load(&sh.best) * (1.0 + TIE_TOLERANCE);
        if e > bound * bound * (1.0 + 1e-12) {
            continue;
        }
        if j > 0 {
            descend(pb, sh, j - 1, k, e, all_zero && v == 0)?;
        } else {
            leaf(pb, sh, k)?;
        }
    }
    k[j] = 0;
    Ok(())
}

fn leaf(pb: &Problem, sh: &Shared, k: &[i64]) -> Result<()> {
    let p = IntPoly::from_i64s(k);
    let bound = load(&sh.best) * (1.0 + TIE_TOLERANCE);
    let coeffs = p.to_real_coeffs::<f64>();
    let probe = pb.probes.iter().map(|&x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c).abs()).fold(0.0, f64::max);
    if probe > bound * (1.0 + 1e-9) {
        return Ok(());
    }
    let norm = sup_norm_critical(&p, pb.a, pb.b)?;
    if norm <= bound {
        lower_to(&sh.best, norm);
        sh.found.lock().unwrap().push((norm, k.to_vec()));
    }
    Ok(())
}

fn single_interval(e: &IntervalUnion<f64>) -> Result<[f64; 2]> {
    match e.intervals() {
        [iv] if iv[1] > iv[0] => Ok(*iv),
        [_] => domain_err("exact search needs an interval of positive length"),
        _ => domain_err("exact search needs a single interval"),
    }
}

/// All optimal polynomials of degree at most `n` with norm at most `budget`.
pub fn search_with_ties(e: &IntervalUnion<f64>, n: usize, budget: f64, max_degree: usize) -> Result<SearchOutcome> {
    if n > max_degree {
        return domain_err(format!("degree {n} exceeds the search cap {max_degree}"));
    }
    if !(budget > 0.0 && budget.is_finite()) {
        return domain_err(format!("norm budget {budget} must be positive and finite"));
    }
    let [a, b] = single_interval(e)?;
    let pb = Problem::new(a, b, n);
    let sh = Shared { best: AtomicU64::new(budget.to_bits()), nodes: AtomicU64::new(0), found: Mutex::new(Vec::new()) };
    // Top level: the leading coefficient is nonnegative; subtrees run in parallel.
    let (lo, hi) = pb.range(n, &vec![0; n + 1], 0.0, budget * (1.0 + TIE_TOLERANCE)).unwrap_or((0, -1));
    let tops: Vec<i64> = (lo.max(0)..=hi).collect();
    tops.par_iter().try_for_each(|&v| -> Result<()> {
        let mut k = vec![0; n + 1];
        k[n] = v;
        let e = pb.energy(n, &k);
        if n == 0 {
            if v > 0 {
                leaf(&pb, &sh, &k)?;
            }
            return Ok(());
        }
        descend(&pb, &sh, n - 1, &mut k, e, v == 0)
    })?;
    let best = load(&sh.best);
    let mut found = sh.found.into_inner().unwrap();
    found.retain(|(v, _)| *v <= best * (1.0 + TIE_TOLERANCE));
    if found.is_empty() {
        return Err(Error::BudgetTooSmall(budget));
    }
    found.sort_by(|x, y| tie_key(&x.1).cmp(&tie_key(&y.1)));
    found.dedup_by(|x, y| x.1 == y.1);
    let (norm, k) = found[0].clone();
    let ties = found.iter().map(|(_, k)| IntPoly::from_i64s(k)).collect();
    Ok(SearchOutcome {
        record: FactorizationRecord::unfactored(e.clone(), n, IntPoly::from_i64s(&k), norm),
        ties,
        nodes: sh.nodes.load(Ordering::Relaxed),
    })
}

/// Global minimiser of the sup norm on `E` over nonzero integer polynomials
/// of degree at most `n`, given an upper bound `budget` on the optimum.
pub fn search_integer_chebyshev(e: &IntervalUnion<f64>, n: usize, budget: f64) -> Result<FactorizationRecord> {
    Ok(search_with_ties(e, n, budget, DEFAULT_MAX_DEGREE)?.record)
}

/// Optima for degrees `1..=max_n`, each search budgeted by the previous optimum.
pub fn search_degrees(e: &IntervalUnion<f64>, max_n: usize, max_degree: usize) -> Result<Vec<SearchOutcome>> {
    single_interval(e)?;
    // The constant 1 has norm 1.
    let mut budget = 1.0;
    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let r = search_with_ties(e, n, budget, max_degree)?;
        budget = r.record.norm;
        out.push(r);
    }
    Ok(out)
}

/// Independent check: every integer vector in the box `|c_j| <= 2B`,
/// `|c_0| <= B`, normed on a fine grid. Returns the least norm and its
/// minimisers (sign-normalised). Meant for small boxes only.
pub fn brute_force_minimum(e: &IntervalUnion<f64>, n: usize, budget: f64, grid_density: usize) -> Result<(f64, Vec<IntPoly>, u64)> {
    let [a, b] = single_interval(e)?;
    let cheb = chebyshev_matrix(a, b, n);
    let mut k = vec![0i64; n + 1];
    let mut leaves: Vec<Vec<i64>> = Vec::new();
    fn rec(cheb: &[Vec<f64>], n: usize, j: usize, k: &mut Vec<i64>, budget: f64, out: &mut Vec<Vec<i64>>) {
        let s: f64 = (j + 1..=n).map(|i| cheb[j][i] * k[i] as f64).sum();
        let r = if j == 0 { budget } else { 2.0 * budget } * (1.0 + 1e-9);
        let lo = ((-r - s) / cheb[j][j]).ceil() as i64;
        let hi = ((r - s) / cheb[j][j]).floor() as i64;
        for v in lo..=hi {
            k[j] = v;
            if j == 0 {
                out.push(k.clone());
            } else {
                rec(cheb, n, j - 1, k, budget, out);
            }
        }
        k[j] = 0;
    }
    rec(&cheb, n, n, &mut k, budget, &mut leaves);
    let count = leaves.len() as u64;
    let normed: Vec<(f64, Vec<i64>)> = leaves
        .into_par_iter()
        .filter(|k| k.iter().any(|&c| c != 0))
        .map(|mut k| {
            if k.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                k.iter_mut().for_each(|c| *c = -*c);
            }
            (sup_norm_on_grid(&IntPoly::from_i64s(&k), e, grid_density), k)
        })
        .collect();
    let best = normed.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    if !best.is_finite() || best > budget * (1.0 + 1e-9) {
        return Err(Error::BudgetTooSmall(budget));
    }
    let mut mins: Vec<Vec<i64>> = normed.into_iter().filter(|x| x.0 <= best * (1.0 + 1e-7)).map(|x| x.1).collect();
    mins.sort_by_key(|k| tie_key(k));
    mins.dedup();
    Ok((best, mins.into_iter().map(|k| IntPoly::from_i64s(&k)).collect(), count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> IntervalUnion<f64> {
        IntervalUnion::interval(0.0, 1.0).unwrap()
    }

    #[test]
    fn chebyshev_matrix_unit_interval() {
        // x^2 = (3/8) T_0 + (1/2) T_1 + (1/8) T_2 on [0, 1].
        let c = chebyshev_matrix(0.0, 1.0, 2);
        assert_eq!([c[0][2], c[1][2], c[2][2]], [0.375, 0.5, 0.125]);
        assert_eq!(c[2][1], 0.0);
    }

    #[test]
    fn low_degrees_on_unit_interval() {
        let r1 = search_integer_chebyshev(&unit(), 1, 1.0).unwrap();
        assert_eq!(r1.norm, 1.0);
        let r2 = search_integer_chebyshev(&unit(), 2, 1.0).unwrap();
        assert_eq!(r2.norm, 0.25);
        assert_eq!(r2.polynomial, IntPoly::from_i64s(&[0, -1, 1]));
        let r3 = search_integer_chebyshev(&unit(), 3, 0.25).unwrap();
        assert!((r3.norm - 1.0 / (6.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn budget_below_optimum() {
        assert!(matches!(search_integer_chebyshev(&unit(), 2, 0.2), Err(Error::BudgetTooSmall(_))));
    }

    #[test]
    fn ties_at_degree_one() {
        let r = search_with_ties(&unit(), 1, 1.0, DEFAULT_MAX_DEGREE).unwrap();
        assert!(r.ties.contains(&IntPoly::from_i64s(&[-1, 2])));
        assert!(r.ties.contains(&IntPoly::constant(1)));
    }

    #[test]
    fn brute_force_agrees_at_degree_three() {
        let (v, mins, _) = brute_force_minimum(&unit(), 3, 0.25, 20_000).unwrap();
        let r = search_with_ties(&unit(), 3, 0.25, DEFAULT_MAX_DEGREE).unwrap();
        assert!((v - r.record.norm).abs() < 1e-9);
        assert_eq!(mins, r.ties);
    }
}
