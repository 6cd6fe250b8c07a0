//! Weighted Leja points and the estimators built from them.
//!
//! `a_0` maximises `|z| w(z)` and `a_k` maximises `w(z)^k |L_k(z)|` with
//! `L_k(z) = prod_{i<k} (z - a_i)`, both over a uniform grid followed by a
//! golden-section refinement inside the bracketing cells.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain_err, Error, Result};
use crate::fmt::csv_float;
use crate::optimize::golden_max;
use crate::polycore::{FactorWeight, IntervalUnion};
use crate::scalar::{real, Real};

/// Grid points per unit length used when nothing else is requested.
pub const DEFAULT_GRID_DENSITY: usize = 200_000;

const REFINE_ITERS: usize = 40;
/// Leja points closer than this many grid cells to `zeta` make the gap estimate unreliable.
const SUPPORT_MARGIN_CELLS: f64 = 10.0;

/// Grid and refinement settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LejaConfig {
    pub grid_density: usize,
    pub refine: bool,
}

impl Default for LejaConfig {
    fn default() -> Self {
        LejaConfig { grid_density: DEFAULT_GRID_DENSITY, refine: true }
    }
}

/// An estimate with the spread of its running value over the last tenth of the steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate<T> {
    pub value: T,
    pub spread: T,
}

/// Equilibrium quantities read off a Leja sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + Real", deserialize = "T: Deserialize<'de> + Real"))]
pub struct EquilibriumData<T: Real> {
    pub support_estimate: IntervalUnion<T>,
    pub robin_constant: Estimate<T>,
    pub weighted_capacity: Estimate<T>,
    pub source_length: usize,
}

/// Scan state kept so a sequence can be extended point by point.
#[derive(Clone, Debug)]
struct Grid<T> {
    xs: Vec<T>,
    /// `w(x_g)`, zero on excluded points.
    w: Vec<T>,
    /// `w(x_g)^k |L_k(x_g)|` divided by a running scale.
    v: Vec<T>,
    /// Number of `sqrt(min_positive)` factors divided out of `v[g]` to avoid underflow.
    under: Vec<i32>,
    /// Neighbouring grid indices that bracket each point inside its own interval.
    left: Vec<usize>,
    right: Vec<usize>,
    inv_max: T,
    argmax: Option<usize>,
}

/// Ordered weighted Leja points with running data.
#[derive(Clone, Debug)]
pub struct LejaSequence<T: Real> {
    points: Vec<T>,
    log_products: Vec<T>,
    weight_logs: Vec<T>,
    domain: IntervalUnion<T>,
    weight: FactorWeight<T>,
    config: LejaConfig,
    cell: T,
    grid: Grid<T>,
}

/// `sum_i log|z - a_i|` with products renormalised instead of one log per term.
pub fn log_abs_product<T: Real>(z: Complex<T>, points: &[T]) -> T {
    let tiny = T::min_positive_value().sqrt();
    let huge = tiny.recip();
    let mut acc = T::zero();
    let mut prod = T::one();
    for &a in points {
        let d = if z.im == T::zero() { (z.re - a).abs() } else { (z - Complex::from(a)).norm() };
        prod = prod * d;
        if prod < tiny || prod > huge {
            if prod == T::zero() {
                return T::neg_infinity();
            }
            acc = acc + prod.ln();
            prod = T::one();
        }
    }
    acc + prod.ln()
}

impl<T: Real> LejaSequence<T> {
    /// Starts a sequence: builds the grid and places `a_0`.
    pub fn start(domain: IntervalUnion<T>, weight: FactorWeight<T>, config: LejaConfig) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        if config.grid_density == 0 {
            return domain_err("grid density must be positive");
        }
        let cell = T::from_usize(config.grid_density).unwrap().recip();
        let mut xs = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for iv in domain.intervals() {
            let piece = IntervalUnion::interval(iv[0], iv[1])?.grid(config.grid_density);
            let base = xs.len();
            let last = base + piece.len() - 1;
            for i in 0..piece.len() {
                left.push(if i > 0 { base + i - 1 } else { base });
                right.push((base + i + 1).min(last));
            }
            xs.extend(piece);
        }
        let zeros = weight.real_zeros();
        let w: Vec<T> = xs
            .iter()
            .map(|&x| {
                // Exclude grid points within one cell of a factor zero.
                if zeros.iter().any(|&z| (x - z).abs() < cell) {
                    return T::zero();
                }
                weight.log_abs(x).exp()
            })
            .collect();
        let n = xs.len();
        let grid = Grid { xs, w, v: vec![T::zero(); n], under: vec![0; n], left, right, inv_max: T::one(), argmax: None };
        let mut seq = LejaSequence {
            points: Vec::new(),
            log_products: Vec::new(),
            weight_logs: Vec::new(),
            domain,
            weight,
            config,
            cell,
            grid,
        };
        seq.place_first()?;
        Ok(seq)
    }

    /// `a_0, ..., a_n`: `n + 1` points in total.
    pub fn generate(domain: IntervalUnion<T>, weight: FactorWeight<T>, n: usize, config: LejaConfig) -> Result<Self> {
        let mut seq = Self::start(domain, weight, config)?;
        seq.points.reserve(n);
        while seq.points.len() < n + 1 {
            seq.next_point()?;
        }
        Ok(seq)
    }

    fn place_first(&mut self) -> Result<()> {
        let g = &self.grid;
        let mut best = None::<(usize, T)>;
        for i in 0..g.xs.len() {
            let v = g.xs[i].abs() * g.w[i];
            if v > T::zero() && best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        let (idx, _) = best.ok_or(Error::EmptyDomain)?;
        let log_obj = |x: T| x.abs().ln() + self.weight.log_abs(x);
        let x = self.refine(idx, log_obj);
        self.push_point(x, T::zero());
        // V_1(x) = w(x) |x - a_0|
        let g = &mut self.grid;
        let mut max = T::zero();
        for i in 0..g.xs.len() {
            let v = g.w[i] * (g.xs[i] - x).abs();
            g.v[i] = v;
            if v > max {
                max = v;
                g.argmax = Some(i);
            }
        }
        if max == T::zero() {
            return Err(Error::EmptyDomain);
        }
        g.inv_max = max.recip();
        Ok(())
    }

    /// Golden-section refinement around grid point `idx`; the grid point is kept
    /// unless a strictly better abscissa is found.
    fn refine(&self, idx: usize, objective: impl Fn(T) -> T) -> T {
        let g = &self.grid;
        let x = g.xs[idx];
        if !self.config.refine {
            return x;
        }
        let lo_i = if g.w[g.left[idx]] > T::zero() { g.left[idx] } else { idx };
        let hi_i = if g.w[g.right[idx]] > T::zero() { g.right[idx] } else { idx };
        let (lo, hi) = (g.xs[lo_i], g.xs[hi_i]);
        if !(hi > lo) {
            return x;
        }
        let at_grid = objective(x);
        let (xr, vr) = golden_max(&objective, lo, hi, REFINE_ITERS);
        if vr > at_grid {
            xr
        } else {
            x
        }
    }

    fn push_point(&mut self, x: T, log_product: T) {
        self.points.push(x);
        self.log_products.push(log_product);
        self.weight_logs.push(self.weight.log_abs(x));
    }

    /// Appends `a_k`, `k` the current length.
    pub fn next_point(&mut self) -> Result<T> {
        let k = self.points.len();
        let idx = self.grid.argmax.ok_or(Error::EmptyDomain)?;
        let kk = T::from_usize(k).unwrap();
        let pts = &self.points;
        let weight = &self.weight;
        let objective = |z: T| kk * weight.log_abs(z) + log_abs_product(Complex::from(z), pts);
        let x = self.refine(idx, objective);
        let lp = log_abs_product(Complex::from(x), &self.points);
        self.push_point(x, lp);
        self.update_grid(x);
        Ok(x)
    }

    /// Multiplies every scaled value by `w(x) |x - a| / max` and records the
    /// new argmax; the smallest index wins ties.
    fn update_grid(&mut self, a: T) {
        let g = &mut self.grid;
        let tiny = T::min_positive_value().sqrt();
        let big = tiny.recip();
        let inv = g.inv_max;
        let mut max = T::zero();
        let mut argmax = None;
        for i in 0..g.v.len() {
            let mut v = g.v[i] * g.w[i] * (g.xs[i] - a).abs() * inv;
            if v < tiny && v > T::zero() {
                v = v * big;
                g.under[i] += 1;
            } else if g.under[i] > 0 && v > T::one() {
                v = v * tiny;
                g.under[i] -= 1;
            }
            g.v[i] = v;
            if g.under[i] == 0 && v > max {
                max = v;
                argmax = Some(i);
            }
        }
        g.argmax = argmax;
        g.inv_max = if max > T::zero() { max.recip() } else { T::one() };
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// `log|L_k(a_k)|` for each `k` (zero for `k = 0`).
    pub fn log_products(&self) -> &[T] {
        &self.log_products
    }

    pub fn weight_logs(&self) -> &[T] {
        &self.weight_logs
    }

    pub fn domain(&self) -> &IntervalUnion<T> {
        &self.domain
    }

    pub fn weight(&self) -> &FactorWeight<T> {
        &self.weight
    }

    pub fn config(&self) -> &LejaConfig {
        &self.config
    }

    /// Nominal grid cell `1 / grid_density`.
    pub fn cell(&self) -> T {
        self.cell
    }

    /// Index of the last point.
    pub fn n(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    fn require_length(&self) -> Result<usize> {
        let n = self.n();
        if n < 2 {
            return domain_err(format!("estimators need at least 3 Leja points, have {}", self.points.len()));
        }
        Ok(n)
    }

    fn with_spread(&self, n: usize, running: impl Fn(usize) -> T) -> Estimate<T> {
        let value = running(n);
        let from = (n - n / 10).max(1);
        let (mut lo, mut hi) = (value, value);
        for k in from..=n {
            let v = running(k);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Estimate { value, spread: hi - lo }
    }

    fn robin_at(&self, k: usize) -> T {
        -self.weight_logs[k] - self.log_products[k] / T::from_usize(k).unwrap()
    }

    /// `F_w ~ -log w(a_n) - log|L_n(a_n)| / n`.
    pub fn estimate_robin(&self) -> Result<Estimate<T>> {
        let n = self.require_length()?;
        Ok(self.with_spread(n, |k| self.robin_at(k)))
    }

    /// `cap(E, w) ~ w(a_n) (|L_n(a_n)| prod_{i<n} w(a_i))^{1/n}`, as a logarithm.
    pub fn estimate_log_capacity(&self) -> Result<Estimate<T>> {
        let n = self.require_length()?;
        let prefix = prefix_sums(&self.weight_logs);
        Ok(self.with_spread(n, |k| {
            self.weight_logs[k] + (self.log_products[k] + prefix[k]) / T::from_usize(k).unwrap()
        }))
    }

    /// `cap(E, w)`.
    pub fn estimate_capacity(&self) -> Result<Estimate<T>> {
        let l = self.estimate_log_capacity()?;
        let v = l.value.exp();
        Ok(Estimate { value: v, spread: v * l.spread })
    }

    /// `F_w - U^{mu_w}(zeta) ~ -log w(a_n) + (log|L_n(zeta)| - log|L_n(a_n)|) / n`.
    pub fn estimate_potential_gap(&self, zeta: Complex<T>) -> Result<Estimate<T>> {
        let n = self.require_length()?;
        let hull = self.support_estimate();
        let margin = self.cell * real(SUPPORT_MARGIN_CELLS);
        if hull.distance(zeta) <= margin {
            return Err(Error::PointInSupport(format!("{zeta}")));
        }
        let logs: Vec<T> = self
            .points
            .iter()
            .map(|&a| if zeta.im == T::zero() { (zeta.re - a).abs().ln() } else { (zeta - Complex::from(a)).norm().ln() })
            .collect();
        let prefix = prefix_sums(&logs);
        Ok(self.with_spread(n, |k| {
            -self.weight_logs[k] + (prefix[k] - self.log_products[k]) / T::from_usize(k).unwrap()
        }))
    }

    /// Hull of the point clusters: sorted points split at gaps wider than
    /// `max(10 cells, 20 span / n)`.
    pub fn support_estimate(&self) -> IntervalUnion<T> {
        let mut s = self.points.clone();
        if s.is_empty() {
            return IntervalUnion::new(Vec::new()).unwrap();
        }
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let span = s[s.len() - 1] - s[0];
        let n = T::from_usize(s.len().max(1)).unwrap();
        let threshold = (self.cell * real(10.0)).max(span * real(20.0) / n);
        let mut out = Vec::new();
        let mut start = s[0];
        for w in s.windows(2) {
            if w[1] - w[0] > threshold {
                out.push([start, w[0]]);
                start = w[1];
            }
        }
        out.push([start, s[s.len() - 1]]);
        IntervalUnion::new(out).unwrap()
    }

    pub fn equilibrium(&self) -> Result<EquilibriumData<T>> {
        Ok(EquilibriumData {
            support_estimate: self.support_estimate(),
            robin_constant: self.estimate_robin()?,
            weighted_capacity: self.estimate_capacity()?,
            source_length: self.n(),
        })
    }

    /// Exact step-`k` objective `k log w(z) + log|L_k(z)|` (`|z| w(z)` for `k = 0`).
    pub fn objective(&self, k: usize, z: T) -> T {
        if k == 0 {
            return z.abs().ln() + self.weight.log_abs(z);
        }
        T::from_usize(k).unwrap() * self.weight.log_abs(z) + log_abs_product(Complex::from(z), &self.points[..k])
    }

    /// The grid abscissae, excluded points included.
    pub fn grid_points(&self) -> &[T] {
        &self.grid.xs
    }

    /// CSV with columns `index, point, log_weight, log_product, running_F_w`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,point,log_weight,log_product,running_F_w\n");
        for k in 0..self.points.len() {
            let f = if k == 0 { f64::NAN } else { self.robin_at(k).to_f64().unwrap() };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                k,
                csv_float(self.points[k].to_f64().unwrap()),
                csv_float(self.weight_logs[k].to_f64().unwrap()),
                csv_float(self.log_products[k].to_f64().unwrap()),
                csv_float(f)
            );
        }
        out
    }
}

fn prefix_sums<T: Real>(v: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut acc = T::zero();
    out.push(acc);
    for &x in v {
        acc = acc + x;
        out.push(acc);
    }
    out
}

/// Kolmogorov distance between the empirical distribution of `points` and `cdf`.
pub fn kolmogorov_distance<T: Real>(points: &[T], cdf: impl Fn(T) -> T) -> T {
    let mut s = points.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = T::from_usize(s.len()).unwrap();
    let mut d = T::zero();
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        let lo = T::from_usize(i).unwrap() / n;
        let hi = T::from_usize(i + 1).unwrap() / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> IntervalUnion<f64> {
        IntervalUnion::interval(a, b).unwrap()
    }

    #[test]
    fn first_two_points_on_symmetric_interval() {
        let cfg = LejaConfig { grid_density: 1000, refine: true };
        let s = LejaSequence::generate(iv(-2.0, 2.0), FactorWeight::unit(), 1, cfg).unwrap();
        assert_eq!(s.points(), &[-2.0, 2.0]);
    }

    #[test]
    fn unit_interval_capacity_small_n() {
        let cfg = LejaConfig { grid_density: 20_000, refine: true };
        let s = LejaSequence::generate(iv(0.0, 0.25), FactorWeight::unit(), 300, cfg).unwrap();
        let c = s.estimate_capacity().unwrap().value;
        assert!((c - 1.0 / 16.0).abs() < 2e-3, "{c}");
    }

    #[test]
    fn log_product_matches_direct_sum() {
        let pts: Vec<f64> = (0..500).map(|i| i as f64 / 1000.0).collect();
        let z = Complex::new(0.3337, 0.0);
        let direct: f64 = pts.iter().map(|a| (z.re - a).abs().ln()).sum();
        assert!((log_abs_product(z, &pts) - direct).abs() < 1e-9);
    }

    #[test]
    fn estimators_need_three_points() {
        let cfg = LejaConfig { grid_density: 100, refine: false };
        let s = LejaSequence::generate(iv(0.0, 1.0), FactorWeight::unit(), 1, cfg).unwrap();
        assert!(s.estimate_robin().is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let cfg = LejaConfig { grid_density: 100, refine: false };
        let s = LejaSequence::generate(iv(0.0, 1.0), FactorWeight::unit(), 4, cfg).unwrap();
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.starts_with("index,point,log_weight,log_product,running_F_w\n0,"));
    }
}
