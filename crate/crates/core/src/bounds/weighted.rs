//! Weighted upper bound and the Robin / rational-point lower bounds.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{BoundKind, BoundMethod, BoundReport};
use crate::error::{Error, Result};
use crate::jacobi::{TwoFactorEquilibrium, TwoFactorParams};
use crate::leja::{LejaConfig, LejaSequence};
use crate::polycore::{FactorWeight, IntPoly, IntervalUnion, RationalPoint};
use crate::scalar::{real, Real};

/// How the weighted capacity is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CapacityMode {
    /// Closed form; only for `|z|^{2 a1} |4z - 1|^{a2}` on `[0, 1/4]`.
    ClosedForm,
    Leja { length: usize, config: LejaConfig },
}

/// Largest discrepancy tolerated between two closed-form expressions of one quantity.
pub const FORMULA_AGREEMENT_TOL: f64 = 1e-6;

fn is_quarter_interval<T: Real>(e: &IntervalUnion<T>) -> bool {
    matches!(e.intervals(), [iv] if iv[0] == T::zero() && iv[1] == real::<T>(0.25))
}

/// Recognises the two-factor weight on `[0, 1/4]`, returning its parameters.
pub fn as_two_factor<T: Real>(e: &IntervalUnion<T>, w: &FactorWeight<T>) -> Option<TwoFactorParams<T>> {
    if !is_quarter_interval(e) {
        return None;
    }
    let z = IntPoly::identity();
    let q = IntPoly::from_i64s(&[-1, 4]);
    let (mut a1, mut a2) = (None, None);
    for f in w.factors() {
        let prim = f.poly().primitive_part();
        let slot = if prim == z && f.poly().content() == 1.into() {
            &mut a1
        } else if prim == q && f.poly().content() == 1.into() {
            &mut a2
        } else {
            return None;
        };
        if slot.is_some() {
            return None;
        }
        *slot = Some(f.exponent());
    }
    let two = T::one() + T::one();
    TwoFactorParams::new(a1.map_or(T::zero(), |e| e / two), a2.unwrap_or(T::zero())).ok()
}

fn weight_json<T: Real>(w: &FactorWeight<T>) -> serde_json::Value {
    json!(w
        .factors()
        .iter()
        .map(|f| json!({ "poly": f.poly(), "exponent": f.exponent().to_f64().unwrap() }))
        .collect::<Vec<_>>())
}

fn domain_json<T: Real>(e: &IntervalUnion<T>) -> serde_json::Value {
    json!(e.intervals().iter().map(|iv| [iv[0].to_f64().unwrap(), iv[1].to_f64().unwrap()]).collect::<Vec<_>>())
}

/// `t_Z(E) <= cap(E, w)^{(1 - a)/2}`.
pub fn weighted_upper<T: Real>(e: &IntervalUnion<T>, w: &FactorWeight<T>, mode: CapacityMode) -> Result<BoundReport> {
    let alpha = w.alpha_total().to_f64().unwrap();
    let (log_cap, err, mode_name) = match mode {
        CapacityMode::ClosedForm => {
            let p = as_two_factor(e, w).ok_or_else(|| {
                Error::ModeUnavailable("closed form needs factors among z, 4z-1 on [0, 1/4]".into())
            })?;
            let q = TwoFactorEquilibrium::new(p)?.log_capacity();
            (q.value.to_f64().unwrap(), q.error.to_f64().unwrap(), "closed-form")
        }
        CapacityMode::Leja { length, config } => {
            let seq = LejaSequence::generate(e.clone(), w.clone(), length, config)?;
            let est = seq.estimate_log_capacity()?;
            (est.value.to_f64().unwrap(), est.spread.to_f64().unwrap(), "leja")
        }
    };
    let value = (log_cap * (1.0 - alpha) / 2.0).exp();
    let mut params = json!({ "domain": domain_json(e), "weight": weight_json(w), "mode": mode_name });
    if let CapacityMode::Leja { length, config } = mode {
        params["leja_length"] = json!(length);
        params["grid_density"] = json!(config.grid_density);
    }
    let mut r = BoundReport::new(BoundKind::Upper, BoundMethod::WeightedCapacity, value, params)
        .with_diagnostic("log_capacity", log_cap)
        .with_diagnostic("alpha_total", alpha)
        .with_diagnostic(if mode_name == "leja" { "log_capacity_spread" } else { "quadrature_error" }, err)
        .with_diagnostic("value_uncertainty", value * err * (1.0 - alpha) / 2.0);
    if is_quarter_interval(e) {
        r = r.with_unit_interval_image();
    }
    Ok(r)
}

/// `t_Z(E) >= exp((a - 1) F_w)`.
pub fn robin_lower<T: Real>(w: &FactorWeight<T>, f_w: T) -> BoundReport {
    let alpha = w.alpha_total().to_f64().unwrap();
    let f = f_w.to_f64().unwrap();
    BoundReport::new(
        BoundKind::Lower,
        BoundMethod::Robin,
        ((alpha - 1.0) * f).exp(),
        json!({ "weight": weight_json(w), "robin_constant": f }),
    )
    .with_diagnostic("alpha_total", alpha)
}

/// Robin lower bound from the closed form, cross-checked against the
/// Green-function product `cap(S_w) 4^{a2} exp(2 a1 g(0, inf) + a2 g(1/4, inf))`.
pub fn robin_lower_closed_form<T: Real>(eq: &TwoFactorEquilibrium<T>) -> Result<BoundReport> {
    let r = robin_lower(&eq.params().weight(), eq.robin());
    let product = eq.log_lower_product_form().to_f64().unwrap().exp();
    let gap = (product - r.value).abs();
    if gap > FORMULA_AGREEMENT_TOL {
        return Err(Error::Inconsistent(format!(
            "Robin bound {} and Green product {} differ by {gap:e}",
            r.value, product
        )));
    }
    Ok(r.with_diagnostic("product_form", product)
        .with_diagnostic("product_form_discrepancy", gap)
        .with_unit_interval_image())
}

/// One rational-point constraint `q^{a - 1} exp((a - 1) gap)`.
pub fn constraint_value(alpha_total: f64, q: i64, gap: f64) -> f64 {
    (q as f64).powf(alpha_total - 1.0) * ((alpha_total - 1.0) * gap).exp()
}

/// `t_Z(E) >= max_i q_i^{a-1} exp((a - 1)(F_w - U^{mu_w}(zeta_i)))`.
pub fn rational_point_lower<T: Real>(
    w: &FactorWeight<T>,
    zetas: &[RationalPoint],
    gaps: &[T],
) -> Result<BoundReport> {
    rational_point_lower_alpha(w.alpha_total().to_f64().unwrap(), zetas, gaps)
        .map(|r| {
            let mut r = r;
            r.parameters["weight"] = weight_json(w);
            r
        })
}

/// As [`rational_point_lower`] with only the total exponent given.
pub fn rational_point_lower_alpha<T: Real>(alpha: f64, zetas: &[RationalPoint], gaps: &[T]) -> Result<BoundReport> {
    if zetas.len() != gaps.len() {
        return Err(Error::LengthMismatch { left: zetas.len(), right: gaps.len() });
    }
    if zetas.is_empty() {
        return Err(Error::Domain("at least one rational point is needed".into()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut diags = Vec::new();
    for (i, (z, g)) in zetas.iter().zip(gaps).enumerate() {
        let g = g.to_f64().unwrap();
        let l = constraint_value(alpha, z.q(), g);
        best = best.max(l);
        diags.push((format!("l_{}", i + 1), l));
        diags.push((format!("gap_{}", i + 1), g));
    }
    let mut r = BoundReport::new(
        BoundKind::Lower,
        BoundMethod::RationalPoint,
        best,
        json!({ "alpha_total": alpha, "zetas": zetas.iter().map(|z| z.to_string()).collect::<Vec<_>>() }),
    );
    for (k, v) in diags {
        r = r.with_diagnostic(&k, v);
    }
    Ok(r)
}

/// Rational-point lower bound with the gaps taken from the closed form.
pub fn rational_point_lower_closed_form<T: Real>(
    eq: &TwoFactorEquilibrium<T>,
    zetas: &[RationalPoint],
) -> Result<BoundReport> {
    let gaps: Vec<T> = zetas.iter().map(|z| eq.potential_gap(z.to_complex())).collect();
    Ok(rational_point_lower(&eq.params().weight(), zetas, &gaps)?.with_unit_interval_image())
}

/// Rational-point lower bound with the gaps estimated from a Leja sequence.
pub fn rational_point_lower_leja<T: Real>(seq: &LejaSequence<T>, zetas: &[RationalPoint]) -> Result<BoundReport> {
    let mut gaps = Vec::with_capacity(zetas.len());
    let mut spread = T::zero();
    for z in zetas {
        let c: Complex<T> = z.to_complex();
        let e = seq.estimate_potential_gap(c)?;
        gaps.push(e.value);
        spread = spread.max(e.spread);
    }
    let mut r = rational_point_lower(seq.weight(), zetas, &gaps)?.with_diagnostic("gap_spread", spread.to_f64().unwrap());
    r.parameters["leja_length"] = json!(seq.n());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter() -> IntervalUnion<f64> {
        IntervalUnion::interval(0.0, 0.25).unwrap()
    }

    #[test]
    fn closed_form_upper_value() {
        let w = TwoFactorParams::new(0.290447, 0.09).unwrap().weight();
        let r = weighted_upper(&quarter(), &w, CapacityMode::ClosedForm).unwrap();
        assert!((r.value - 0.18043338).abs() < 2e-7, "{}", r.value);
        assert!((r.diagnostics["unit_interval_value"] - r.value.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unit_weight_reduces_to_fekete() {
        let r = weighted_upper(&quarter(), &FactorWeight::unit(), CapacityMode::ClosedForm).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn closed_form_rejects_other_weights() {
        let w = FactorWeight::new(vec![("5z-1".parse().unwrap(), 0.1)]).unwrap();
        assert!(matches!(weighted_upper(&quarter(), &w, CapacityMode::ClosedForm), Err(Error::ModeUnavailable(_))));
    }

    #[test]
    fn robin_hand_value() {
        let eq = TwoFactorEquilibrium::new(TwoFactorParams::new(0.25, 0.0).unwrap()).unwrap();
        let r = robin_lower_closed_form(&eq).unwrap();
        assert!((r.value - (27.0f64 / 4096.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rational_point_formula() {
        let z = [RationalPoint::zero(), "1/4".parse().unwrap()];
        let r = rational_point_lower_alpha(0.7, &z, &[1.0, 2.0]).unwrap();
        let l1 = (-0.3f64).exp();
        let l2 = 4f64.powf(-0.3) * (-0.6f64).exp();
        assert_eq!(r.value, l1.max(l2));
        assert!(matches!(rational_point_lower_alpha(0.7, &z, &[1.0]), Err(Error::LengthMismatch { .. })));
    }
}
