//! Lattice optimisation of bounds over exponent vectors.

use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{BoundKind, BoundMethod, BoundReport};
use super::weighted::constraint_value;
use crate::error::{domain_err, Error, Result};
use crate::jacobi::{TwoFactorEquilibrium, TwoFactorParams};
use crate::leja::{LejaConfig, LejaSequence};
use crate::polycore::{FactorWeight, IntPoly, IntervalUnion, RationalPoint};

/// What is optimised at each lattice point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "objective")]
pub enum Objective {
    /// `cap(E, w)^{(1 - a)/2}`, minimised.
    Upper,
    /// `max_i l_i` over the rational points, minimised.
    Lower { zetas: Vec<RationalPoint> },
}

/// Which Leja length to use; closed-form models ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fidelity {
    Coarse,
    Fine,
}

/// Objective value at one exponent vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointValue {
    pub value: f64,
    /// The individual `l_i` for lower bounds; empty for upper bounds.
    pub constraints: Vec<f64>,
    /// Estimator spread or quadrature error.
    pub uncertainty: f64,
}

/// A family of weights indexed by a parameter vector.
pub trait WeightModel: Sync {
    fn dim(&self) -> usize;
    fn names(&self) -> Vec<String>;
    /// `c_i` with `a = offset + sum c_i p_i`.
    fn simplex_coefficients(&self) -> Vec<f64>;
    /// Part of the total exponent contributed by pinned factors.
    fn alpha_offset(&self) -> f64 {
        0.0
    }
    fn alpha_total(&self, params: &[f64]) -> f64 {
        self.alpha_offset() + self.simplex_coefficients().iter().zip(params).map(|(c, p)| c * p).sum::<f64>()
    }
    fn evaluate(&self, params: &[f64], objective: &Objective, fidelity: Fidelity) -> Result<PointValue>;
    fn describe(&self) -> serde_json::Value;
}

/// `|z|^{2 a1} |4z - 1|^{a2}` on `[0, 1/4]` through the closed form.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ClosedFormTwoFactor;

impl ClosedFormTwoFactor {
    pub fn equilibrium(params: &[f64]) -> Result<TwoFactorEquilibrium<f64>> {
        TwoFactorEquilibrium::new(TwoFactorParams::new(params[0], params[1])?)
    }
}

impl WeightModel for ClosedFormTwoFactor {
    fn dim(&self) -> usize {
        2
    }
    fn names(&self) -> Vec<String> {
        vec!["alpha1".into(), "alpha2".into()]
    }
    fn simplex_coefficients(&self) -> Vec<f64> {
        vec![2.0, 1.0]
    }
    fn evaluate(&self, params: &[f64], objective: &Objective, _: Fidelity) -> Result<PointValue> {
        let eq = Self::equilibrium(params)?;
        let alpha = eq.params().alpha_total();
        Ok(match objective {
            Objective::Upper => {
                let q = eq.log_capacity();
                let v = (q.value * (1.0 - alpha) / 2.0).exp();
                PointValue { value: v, constraints: Vec::new(), uncertainty: v * q.error }
            }
            Objective::Lower { zetas } => {
                let constraints: Vec<f64> = zetas
                    .iter()
                    .map(|z| constraint_value(alpha, z.q(), eq.potential_gap(z.to_complex())))
                    .collect();
                let value = constraints.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                PointValue { value, constraints, uncertainty: 0.0 }
            }
        })
    }
    fn describe(&self) -> serde_json::Value {
        json!({ "model": "closed-form", "factors": ["z", "4z-1"], "exponents": ["2*alpha1", "alpha2"] })
    }
}

/// How a swept parameter maps to a factor exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentConvention {
    /// The parameter is the exponent.
    Direct,
    /// The parameter is the multiplicity per degree of the corresponding factor
    /// of `Q(x - x^2)` on `[0, 1]`; see [`unit_interval_scale`].
    UnitInterval,
}

/// `2 / k` where `Q(x - x^2) = +-A(x)^k` with `k` maximal among powers of two.
///
/// A degree-`n` polynomial on `[0, 1]` containing `A^{a n}` corresponds to a
/// degree-`n/2` polynomial on `[0, 1/4]` containing `Q^{2 a n / k}`.
pub fn unit_interval_scale(q: &IntPoly) -> f64 {
    let sub = IntPoly::from_i64s(&[0, 1, -1]);
    let mut p = q.compose(&sub);
    if p.leading().is_some_and(|c| c.sign() == num_bigint::Sign::Minus) {
        p = -&p;
    }
    let mut k = 1.0;
    while let Some(r) = p.sqrt_exact() {
        if r.degree().unwrap_or(0) == 0 {
            break;
        }
        p = r;
        k *= 2.0;
    }
    2.0 / k
}

/// General factor weights evaluated through weighted Leja sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct LejaModel {
    pub domain: IntervalUnion<f64>,
    pub swept: Vec<IntPoly>,
    pub scales: Vec<f64>,
    pub pinned: Vec<(IntPoly, f64)>,
    pub coarse_length: usize,
    pub fine_length: usize,
    pub config: LejaConfig,
}

impl LejaModel {
    pub fn new(
        domain: IntervalUnion<f64>,
        swept: Vec<IntPoly>,
        pinned: Vec<(IntPoly, f64)>,
        convention: ExponentConvention,
        fine_length: usize,
    ) -> Result<Self> {
        if swept.iter().chain(pinned.iter().map(|(p, _)| p)).any(|p| p.degree().unwrap_or(0) == 0) {
            return domain_err("weight factors must be nonconstant");
        }
        let scales = swept
            .iter()
            .map(|p| match convention {
                ExponentConvention::Direct => 1.0,
                ExponentConvention::UnitInterval => unit_interval_scale(p),
            })
            .collect();
        Ok(LejaModel {
            domain,
            swept,
            scales,
            pinned,
            coarse_length: (fine_length / 4).max(50),
            fine_length,
            config: LejaConfig::default(),
        })
    }

    pub fn weight(&self, params: &[f64]) -> Result<FactorWeight<f64>> {
        let mut f: Vec<(IntPoly, f64)> = self.pinned.clone();
        for ((p, s), a) in self.swept.iter().zip(&self.scales).zip(params) {
            if *a > 0.0 {
                f.push((p.clone(), s * a));
            } else if *a < 0.0 {
                return domain_err(format!("negative exponent parameter {a}"));
            }
        }
        FactorWeight::new(f)
    }

    pub fn sequence(&self, params: &[f64], fidelity: Fidelity) -> Result<LejaSequence<f64>> {
        let n = match fidelity {
            Fidelity::Coarse => self.coarse_length,
            Fidelity::Fine => self.fine_length,
        };
        LejaSequence::generate(self.domain.clone(), self.weight(params)?, n, self.config)
    }
}

impl WeightModel for LejaModel {
    fn dim(&self) -> usize {
        self.swept.len()
    }
    fn names(&self) -> Vec<String> {
        self.swept.iter().map(|p| p.to_string()).collect()
    }
    fn simplex_coefficients(&self) -> Vec<f64> {
        self.swept.iter().zip(&self.scales).map(|(p, s)| s * p.degree().unwrap() as f64).collect()
    }
    fn alpha_offset(&self) -> f64 {
        self.pinned.iter().map(|(p, a)| a * p.degree().unwrap() as f64).sum()
    }
    fn evaluate(&self, params: &[f64], objective: &Objective, fidelity: Fidelity) -> Result<PointValue> {
        let seq = self.sequence(params, fidelity)?;
        let alpha = seq.weight().alpha_total();
        Ok(match objective {
            Objective::Upper => {
                let e = seq.estimate_log_capacity()?;
                let v = (e.value * (1.0 - alpha) / 2.0).exp();
                PointValue { value: v, constraints: Vec::new(), uncertainty: v * e.spread * (1.0 - alpha) / 2.0 }
            }
            Objective::Lower { zetas } => {
                let mut constraints = Vec::with_capacity(zetas.len());
                let mut spread: f64 = 0.0;
                for z in zetas {
                    let c: Complex<f64> = z.to_complex();
                    let e = seq.estimate_potential_gap(c)?;
                    let l = constraint_value(alpha, z.q(), e.value);
                    spread = spread.max(l * (1.0 - alpha) * e.spread);
                    constraints.push(l);
                }
                let value = constraints.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                PointValue { value, constraints, uncertainty: spread }
            }
        })
    }
    fn describe(&self) -> serde_json::Value {
        json!({
            "model": "leja",
            "domain": self.domain.intervals(),
            "factors": self.swept.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "exponent_scales": self.scales,
            "pinned": self.pinned.iter().map(|(p, a)| json!({"poly": p.to_string(), "exponent": a})).collect::<Vec<_>>(),
            "leja_length": self.fine_length,
            "coarse_leja_length": self.coarse_length,
            "grid_density": self.config.grid_density,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
pub enum SweepStrategy {
    /// Every lattice point at the final step.
    Exhaustive,
    /// A coarse lattice at `coarse_step` and coarse fidelity, then lattice
    /// descent at halved steps down to the final step.
    Multiscale { coarse_step: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub step: f64,
    pub strategy: SweepStrategy,
    /// Coordinate-descent rounds after the lattice search; round `r` uses `step / 2^r`.
    pub refine_rounds: usize,
}

impl SweepConfig {
    pub fn exhaustive(step: f64) -> Self {
        SweepConfig { step, strategy: SweepStrategy::Exhaustive, refine_rounds: 3 }
    }

    pub fn multiscale(step: f64, coarse_step: f64) -> Self {
        SweepConfig { step, strategy: SweepStrategy::Multiscale { coarse_step }, refine_rounds: 3 }
    }
}

/// Best point found by a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub constraints: Vec<f64>,
    pub uncertainty: f64,
    /// Best value on the final lattice, before coordinate descent.
    pub lattice_value: f64,
    pub lattice_argmin: Vec<f64>,
    pub evaluations: usize,
    pub failures: usize,
}

/// Integer points `k >= 1` with `offset + step sum c_i k_i <= 1 - step/2`.
pub fn simplex_lattice(coeffs: &[f64], offset: f64, step: f64) -> Vec<Vec<i64>> {
    let limit = 1.0 - offset - step / 2.0;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(coeffs.len());
    fn rec(coeffs: &[f64], step: f64, budget: f64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len();
        if i == coeffs.len() {
            out.push(cur.clone());
            return;
        }
        let rest: f64 = coeffs[i + 1..].iter().sum::<f64>() * step;
        let mut k = 1;
        while coeffs[i] * step * k as f64 + rest <= budget + 1e-12 {
            cur.push(k);
            rec(coeffs, step, budget - coeffs[i] * step * k as f64, cur, out);
            cur.pop();
            k += 1;
        }
    }
    rec(coeffs, step, limit, &mut cur, &mut out);
    out
}

fn in_open_simplex(model: &dyn WeightModel, params: &[f64], margin: f64) -> bool {
    params.iter().all(|&p| p > 0.0) && model.alpha_total(params) <= 1.0 - margin + 1e-12
}

/// `a` strictly better than `b`: smaller value, ties broken by lexicographic parameters.
fn better(a: (f64, &[f64]), b: (f64, &[f64])) -> bool {
    if a.0 != b.0 {
        return a.0 < b.0;
    }
    a.1.iter().zip(b.1).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
}

struct Searcher<'a> {
    model: &'a dyn WeightModel,
    objective: &'a Objective,
    step: f64,
    cache: HashMap<Vec<i64>, Option<PointValue>>,
    evaluations: usize,
    failures: usize,
}

impl<'a> Searcher<'a> {
    fn params(&self, k: &[i64]) -> Vec<f64> {
        k.iter().map(|&i| i as f64 * self.step).collect()
    }

    /// Evaluates the missing points in parallel; order-independent results.
    fn evaluate_many(&mut self, pts: &[Vec<i64>], fidelity: Fidelity) {
        let todo: Vec<Vec<i64>> = pts.iter().filter(|k| !self.cache.contains_key(*k)).cloned().collect();
        let (model, objective, step) = (self.model, self.objective, self.step);
        let results: Vec<Option<PointValue>> = todo
            .par_iter()
            .map(|k| {
                let p: Vec<f64> = k.iter().map(|&i| i as f64 * step).collect();
                model.evaluate(&p, objective, fidelity).ok().filter(|v| v.value.is_finite())
            })
            .collect();
        for (k, r) in todo.into_iter().zip(results) {
            self.evaluations += 1;
            if r.is_none() {
                self.failures += 1;
            }
            self.cache.insert(k, r);
        }
    }

    fn best_of(&self, pts: &[Vec<i64>]) -> Option<(Vec<i64>, PointValue)> {
        let mut best: Option<(Vec<i64>, PointValue)> = None;
        for k in pts {
            if let Some(Some(v)) = self.cache.get(k) {
                let pk = self.params(k);
                let replace = match &best {
                    None => true,
                    Some((bk, bv)) => better((v.value, &pk), (bv.value, &self.params(bk))),
                };
                if replace {
                    best = Some((k.clone(), v.clone()));
                }
            }
        }
        best
    }

    /// Moves to the best neighbour in `{-1, 0, 1}^d * stride` until none improves.
    fn lattice_descent(&mut self, start: Vec<i64>, stride: i64, margin: f64) -> Option<(Vec<i64>, PointValue)> {
        let d = self.model.dim();
        let offsets: Vec<Vec<i64>> = (0..3usize.pow(d as u32))
            .map(|mut c| {
                (0..d)
                    .map(|_| {
                        let o = (c % 3) as i64 - 1;
                        c /= 3;
                        o * stride
                    })
                    .collect::<Vec<i64>>()
            })
            .collect();
        let mut cur = start;
        loop {
            let cand: Vec<Vec<i64>> = offsets
                .iter()
                .map(|o| cur.iter().zip(o).map(|(a, b)| a + b).collect::<Vec<i64>>())
                .filter(|k| in_open_simplex(self.model, &self.params(k), margin))
                .collect();
            self.evaluate_many(&cand, Fidelity::Fine);
            let best = self.best_of(&cand)?;
            if best.0 == cur {
                return Some(best);
            }
            cur = best.0;
        }
    }
}

/// Minimises the objective over the open simplex lattice, then refines by
/// coordinate descent with halved steps.
pub fn sweep(model: &dyn WeightModel, objective: &Objective, config: &SweepConfig) -> Result<SweepResult> {
    let step = config.step;
    if !(step > 0.0 && step < 1.0) {
        return domain_err(format!("lattice step {step} must lie in (0, 1)"));
    }
    let coeffs = model.simplex_coefficients();
    let offset = model.alpha_offset();
    let margin = step / 2.0;
    let mut s = Searcher { model, objective, step, cache: HashMap::new(), evaluations: 0, failures: 0 };

    let (lattice_k, lattice_v) = match config.strategy {
        SweepStrategy::Exhaustive => {
            let pts = simplex_lattice(&coeffs, offset, step);
            s.evaluate_many(&pts, Fidelity::Fine);
            s.best_of(&pts).ok_or_else(|| Error::Domain("no lattice point could be evaluated".into()))?
        }
        SweepStrategy::Multiscale { coarse_step } => {
            let levels = (coarse_step / step).log2().round().max(0.0) as u32;
            let stride0 = 1i64 << levels;
            let coarse: Vec<Vec<i64>> = simplex_lattice(&coeffs, offset, step * stride0 as f64)
                .into_iter()
                .map(|k| k.into_iter().map(|i| i * stride0).collect())
                .collect();
            // Coarse fidelity values live outside the cache, which holds fine values only.
            let coarse_vals: Vec<Option<f64>> = coarse
                .par_iter()
                .map(|k| {
                    let p: Vec<f64> = k.iter().map(|&i| i as f64 * step).collect();
                    model.evaluate(&p, objective, Fidelity::Coarse).ok().map(|v| v.value).filter(|v| v.is_finite())
                })
                .collect();
            s.evaluations += coarse.len();
            s.failures += coarse_vals.iter().filter(|v| v.is_none()).count();
            let mut start: Option<(usize, f64)> = None;
            for (i, v) in coarse_vals.iter().enumerate() {
                if let Some(v) = v {
                    let ok = match start {
                        None => true,
                        Some((j, bv)) => better((*v, &s.params(&coarse[i])), (bv, &s.params(&coarse[j]))),
                    };
                    if ok {
                        start = Some((i, *v));
                    }
                }
            }
            let (i0, _) = start.ok_or_else(|| Error::Domain("no coarse lattice point could be evaluated".into()))?;
            let mut cur = coarse[i0].clone();
            let mut best = None;
            for level in (0..=levels).rev() {
                let r = s
                    .lattice_descent(cur.clone(), 1i64 << level, margin)
                    .ok_or_else(|| Error::Domain("lattice descent found no valid neighbour".into()))?;
                cur = r.0.clone();
                best = Some(r);
            }
            best.unwrap()
        }
    };

    // Coordinate descent off the lattice.
    let lattice_p = s.params(&lattice_k);
    let mut p = lattice_p.clone();
    let mut v = lattice_v.clone();
    let mut h = step;
    for _ in 0..config.refine_rounds {
        h /= 2.0;
        for i in 0..model.dim() {
            for dir in [-1.0, 1.0] {
                let mut q = p.clone();
                q[i] += dir * h;
                if !in_open_simplex(model, &q, margin.min(h)) {
                    continue;
                }
                s.evaluations += 1;
                match model.evaluate(&q, objective, Fidelity::Fine) {
                    Ok(w) if w.value.is_finite() && w.value < v.value => {
                        p = q;
                        v = w;
                    }
                    Ok(_) => {}
                    Err(_) => s.failures += 1,
                }
            }
        }
    }

    Ok(SweepResult {
        value: v.value,
        argmin: p,
        constraints: v.constraints,
        uncertainty: v.uncertainty,
        lattice_value: lattice_v.value,
        lattice_argmin: lattice_p,
        evaluations: s.evaluations,
        failures: s.failures,
    })
}

/// Sweep result as a bound report.
pub fn sweep_report(
    model: &dyn WeightModel,
    objective: &Objective,
    config: &SweepConfig,
    quarter_interval: bool,
) -> Result<BoundReport> {
    let r = sweep(model, objective, config)?;
    let (kind, method) = match objective {
        Objective::Upper => (BoundKind::Upper, BoundMethod::WeightedCapacity),
        Objective::Lower { .. } => (BoundKind::Lower, BoundMethod::RationalPoint),
    };
    let mut params = json!({
        "model": model.describe(),
        "names": model.names(),
        "argmin": r.argmin,
        "lattice_argmin": r.lattice_argmin,
        "sweep": config,
        "objective": objective,
    });
    if !r.constraints.is_empty() {
        params["constraints"] = json!(r.constraints);
    }
    let mut rep = BoundReport::new(kind, method, r.value, params)
        .with_diagnostic("lattice_value", r.lattice_value)
        .with_diagnostic("uncertainty", r.uncertainty)
        .with_diagnostic("evaluations", r.evaluations as f64)
        .with_diagnostic("failures", r.failures as f64)
        .with_diagnostic("alpha_total", model.alpha_total(&r.argmin));
    if quarter_interval {
        rep = rep.with_unit_interval_image();
    }
    Ok(rep)
}

/// Lattice infimum of `max_i l_i` over exponents of `factors` on `domain`.
pub fn sweep_lower_bound(
    domain: &IntervalUnion<f64>,
    factors: &[IntPoly],
    zetas: &[RationalPoint],
    step: f64,
    leja_length: usize,
    convention: ExponentConvention,
) -> Result<BoundReport> {
    let model = LejaModel::new(domain.clone(), factors.to_vec(), Vec::new(), convention, leja_length)?;
    let quarter = matches!(domain.intervals(), [iv] if iv[0] == 0.0 && iv[1] == 0.25);
    sweep_report(&model, &Objective::Lower { zetas: zetas.to_vec() }, &SweepConfig::exhaustive(step), quarter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_respects_margin() {
        let pts = simplex_lattice(&[2.0, 1.0], 0.0, 0.1);
        assert!(pts.iter().all(|k| 0.2 * k[0] as f64 + 0.1 * k[1] as f64 <= 0.95 + 1e-12));
        assert!(pts.iter().all(|k| k.iter().all(|&i| i >= 1)));
        assert!(pts.contains(&vec![4, 1]));
        assert!(!pts.contains(&vec![5, 1]));
    }

    #[test]
    fn scales_from_unit_interval() {
        assert_eq!(unit_interval_scale(&"z".parse().unwrap()), 2.0);
        assert_eq!(unit_interval_scale(&"4z-1".parse().unwrap()), 1.0);
        assert_eq!(unit_interval_scale(&"5z-1".parse().unwrap()), 2.0);
        assert_eq!(unit_interval_scale(&"29z^2-11z+1".parse().unwrap()), 2.0);
    }

    #[test]
    fn ties_prefer_lexicographic_params() {
        assert!(better((1.0, &[0.1, 0.2]), (1.0, &[0.1, 0.3])));
        assert!(!better((1.0, &[0.2, 0.0]), (1.0, &[0.1, 0.3])));
    }

    #[test]
    fn coarse_closed_form_upper() {
        let r = sweep(&ClosedFormTwoFactor, &Objective::Upper, &SweepConfig::exhaustive(0.01)).unwrap();
        assert!((r.value - 0.18043338).abs() < 2e-4, "{}", r.value);
        assert!(r.value <= r.lattice_value);
    }
}
