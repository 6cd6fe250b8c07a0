//! Unweighted bounds: capacity, the Trigub interval family and lemniscates.

use serde_json::json;

use super::report::{BoundKind, BoundMethod, BoundReport};
use crate::error::{domain_err, Result};
use crate::leja::{LejaConfig, LejaSequence};
use crate::polycore::{FactorWeight, IntPoly, IntervalUnion};
use crate::scalar::Real;

/// Leja length used for the capacity of a union of several intervals.
pub const UNION_CAPACITY_LEJA_LENGTH: usize = 2000;

fn domain_json<T: Real>(e: &IntervalUnion<T>) -> serde_json::Value {
    json!(e.intervals().iter().map(|iv| [iv[0].to_f64().unwrap(), iv[1].to_f64().unwrap()]).collect::<Vec<_>>())
}

/// `t_Z(E) <= sqrt(cap E)`, clamped to 1.
///
/// One interval uses `cap [a, b] = (b - a) / 4`; a union goes through an
/// unweighted Leja estimate.
pub fn fekete_upper<T: Real>(e: &IntervalUnion<T>) -> Result<BoundReport> {
    let (cap, spread) = match e.intervals() {
        [] => return domain_err("empty domain"),
        [iv] => ((iv[1] - iv[0]).to_f64().unwrap() / 4.0, 0.0),
        _ => {
            let seq =
                LejaSequence::generate(e.clone(), FactorWeight::unit(), UNION_CAPACITY_LEJA_LENGTH, LejaConfig::default())?;
            let c = seq.estimate_capacity()?;
            (c.value.to_f64().unwrap(), c.spread.to_f64().unwrap())
        }
    };
    let root = cap.sqrt();
    let mut r = BoundReport::new(BoundKind::Upper, BoundMethod::Fekete, root.min(1.0), json!({ "domain": domain_json(e) }))
        .with_diagnostic("capacity", cap);
    if spread > 0.0 {
        r = r.with_diagnostic("capacity_spread", spread);
    }
    Ok(r)
}

/// Lower bound for `I_m = [1/(m+4), 1/m]`: `2 / (m + 2 + sqrt((m+2)^2 - 4))`.
pub fn trigub_lower(m: u32) -> Result<BoundReport> {
    if m == 0 {
        return domain_err("m must be at least 1");
    }
    let k = m as f64 + 2.0;
    let v = 2.0 / (k + (k * k - 4.0).sqrt());
    Ok(BoundReport::new(
        BoundKind::Lower,
        BoundMethod::Trigub,
        v,
        json!({ "m": m, "domain": [[1.0 / (m as f64 + 4.0), 1.0 / m as f64]] }),
    )
    .with_diagnostic("reciprocal_bound", 1.0 / k))
}

/// `r^{1/m}` with correctly rounded square roots for `m = 2`.
fn root_m(r: f64, m: usize) -> f64 {
    match m {
        1 => r,
        2 => r.sqrt(),
        _ => r.powf(1.0 / m as f64),
    }
}

/// Integer Chebyshev constant of the lemniscate `{ |V(z)| = r }`.
///
/// Monic `V`, or irreducible `V` with `r <= 1/|a_m|`, give the exact value
/// `r^{1/m}`; otherwise the pair `[(r/|a_m|)^{1/m}, r^{1/m}]` brackets it.
/// Returns one exact report or a lower and an upper report.
pub fn lemniscate_tz(v: &IntPoly, r: f64, irreducible: bool) -> Result<Vec<BoundReport>> {
    let m = match v.degree() {
        Some(m) if m >= 1 => m,
        _ => return domain_err("the lemniscate polynomial must be nonconstant"),
    };
    if !(r >= 0.0 && r < 1.0) {
        return domain_err(format!("level r = {r} must lie in [0, 1)"));
    }
    let lead = v.leading().unwrap().magnitude().clone();
    let lead_f = num_traits::ToPrimitive::to_f64(&lead).unwrap_or(f64::INFINITY);
    let params = json!({ "poly": v, "r": r, "irreducible": irreducible, "degree": m });
    let upper = root_m(r, m);
    let monic = num_traits::One::is_one(&lead);
    if irreducible && !monic && r * lead_f > 1.0 {
        return domain_err(format!("irreducible branch needs r <= 1/|a_m| = {}", 1.0 / lead_f));
    }
    if monic || irreducible {
        let reason = if monic { 1.0 } else { 0.0 };
        return Ok(vec![BoundReport::new(BoundKind::Exact, BoundMethod::Lemniscate, upper, params)
            .with_diagnostic("monic", reason)
            .with_diagnostic("leading_coefficient", lead_f)]);
    }
    let lower = root_m(r / lead_f, m);
    Ok(vec![
        BoundReport::new(BoundKind::Lower, BoundMethod::Lemniscate, lower, params.clone())
            .with_diagnostic("leading_coefficient", lead_f),
        BoundReport::new(BoundKind::Upper, BoundMethod::Lemniscate, upper, params)
            .with_diagnostic("leading_coefficient", lead_f),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn fekete_values() {
        assert_eq!(fekete_upper(&IntervalUnion::interval(0.0, 1.0).unwrap()).unwrap().value, 0.5);
        assert_eq!(fekete_upper(&IntervalUnion::interval(0.0, 4.0).unwrap()).unwrap().value, 1.0);
        assert_eq!(fekete_upper(&IntervalUnion::interval(0.0, 0.25).unwrap()).unwrap().value, 0.25);
        assert_eq!(fekete_upper(&IntervalUnion::interval(0.0, 9.0).unwrap()).unwrap().value, 1.0);
    }

    #[test]
    fn trigub_values() {
        assert!((trigub_lower(1).unwrap().value - 2.0 / (3.0 + 5f64.sqrt())).abs() < 1e-15);
        assert!((trigub_lower(2).unwrap().value - 2.0 / (4.0 + 12f64.sqrt())).abs() < 1e-15);
        for m in 1..200 {
            assert!(trigub_lower(m).unwrap().value > 1.0 / (m as f64 + 2.0));
        }
        assert!(trigub_lower(0).is_err());
    }

    #[test]
    fn lemniscates() {
        let r = lemniscate_tz(&p("z"), 0.5, false).unwrap();
        assert_eq!((r.len(), r[0].kind, r[0].value), (1, BoundKind::Exact, 0.5));
        let r = lemniscate_tz(&p("2z-1"), 0.5, true).unwrap();
        assert_eq!((r.len(), r[0].value), (1, 0.5));
        let r = lemniscate_tz(&p("z^2-2"), 0.81, false).unwrap();
        assert_eq!((r.len(), r[0].value), (1, 0.9));
        let r = lemniscate_tz(&p("3z^2-1"), 0.81, false).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].value < r[1].value);
        assert!(lemniscate_tz(&p("z"), 1.0, false).is_err());
        assert!(lemniscate_tz(&p("2z-1"), 0.6, true).is_err());
    }
}
