//! Execution of a resolved [`RunConfig`].

use intcheb::bounds::*;
use intcheb::exact::*;
use intcheb::fmt::csv_float;
use intcheb::jacobi::{TwoFactorEquilibrium, TwoFactorParams};
use intcheb::leja::{LejaConfig, LejaSequence};
use intcheb::{Error, FactorWeight, IntPoly, IntervalUnion};
use serde_json::{json, Value};

use crate::config::{Command, Mode, ObjectiveKind, RunConfig};

/// A failed run and its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit code 2.
    Invalid(String),
    /// A computation did not produce a result: exit code 3.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::LengthMismatch { .. } | Error::ModeUnavailable(_) => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

/// Result payload, an optional CSV table, and human-readable summary lines.
pub struct Output {
    pub result: Value,
    pub csv: String,
    pub summary: Vec<String>,
}

type Run = Result<Output, Failure>;

pub fn execute(cfg: &RunConfig) -> Run {
    match cfg.command {
        Command::Equilibrium => equilibrium(cfg),
        Command::Leja => leja(cfg),
        Command::BoundUpper => bound(cfg, ObjectiveKind::Upper),
        Command::BoundLower => bound(cfg, ObjectiveKind::Lower),
        Command::Sweep => sweep_cmd(cfg),
        Command::Region => region(cfg),
        Command::Exact => exact(cfg),
        Command::Lemniscate => lemniscate(cfg),
        Command::Construct => construct(cfg),
    }
}

fn leja_config(cfg: &RunConfig) -> LejaConfig {
    LejaConfig { grid_density: cfg.grid_density, ..LejaConfig::default() }
}

fn fixed_weight(cfg: &RunConfig) -> Result<FactorWeight<f64>, Failure> {
    Ok(FactorWeight::new(cfg.pinned())?)
}

fn is_quarter(e: &IntervalUnion<f64>) -> bool {
    matches!(e.intervals(), [iv] if iv[0] == 0.0 && iv[1] == 0.25)
}

fn reports_csv(rs: &[BoundReport]) -> String {
    let mut s = String::from("kind,method,value,unit_interval_value\n");
    for r in rs {
        let u = r.diagnostics.get("unit_interval_value").map_or(String::new(), |&v| csv_float(v));
        s.push_str(&format!("{},{},{},{}\n", r.kind, r.method, csv_float(r.value), u));
    }
    s
}

fn kv_csv(rows: &[(&str, f64)]) -> String {
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{}\n", csv_float(*v)));
    }
    s
}

fn equilibrium(cfg: &RunConfig) -> Run {
    let p = TwoFactorParams::new(cfg.alpha1.unwrap(), cfg.alpha2.unwrap())?;
    let eq = TwoFactorEquilibrium::new(p)?;
    let s = eq.support();
    let lc = eq.log_capacity();
    let lch = eq.log_capacity_harmonic();
    let upper = weighted_upper(&IntervalUnion::interval(0.0, 0.25)?, &p.weight(), CapacityMode::ClosedForm)?;
    let robin = robin_lower_closed_form(&eq)?;
    let rp = rational_point_lower_closed_form(&eq, &cfg.zetas)?;
    let gaps: Vec<Value> = cfg
        .zetas
        .iter()
        .map(|z| json!({ "zeta": z.to_string(), "gap": eq.potential_gap(z.to_complex()) }))
        .collect();
    let rows = [
        ("a", s.a),
        ("b", s.b),
        ("F_w", eq.robin()),
        ("log_capacity", lc.value),
        ("log_capacity_harmonic", lch.value),
        ("alpha_total", p.alpha_total()),
        ("upper_bound", upper.value),
        ("robin_lower_bound", robin.value),
        ("rational_point_lower_bound", rp.value),
    ];
    Ok(Output {
        result: json!({
            "a": s.a,
            "b": s.b,
            "F_w": eq.robin(),
            "capacity": lc.value.exp(),
            "log_capacity": lc.value,
            "log_capacity_error": lc.error,
            "log_capacity_harmonic": lch.value,
            "alpha_total": p.alpha_total(),
            "gaps": gaps,
            "bounds": [upper, robin, rp],
        }),
        csv: kv_csv(&rows),
        summary: vec![
            format!("support [{}, {}], F_w = {}", csv_float(s.a), csv_float(s.b), csv_float(eq.robin())),
            format!("{upper}"),
            format!("{robin}"),
            format!("{rp}"),
        ],
    })
}

fn leja(cfg: &RunConfig) -> Run {
    let seq = LejaSequence::generate(cfg.domain.clone(), fixed_weight(cfg)?, cfg.leja_length, leja_config(cfg))?;
    let eqd = seq.equilibrium()?;
    let gaps: Vec<Value> = cfg
        .zetas
        .iter()
        .map(|z| match seq.estimate_potential_gap(z.to_complex()) {
            Ok(e) => json!({ "zeta": z.to_string(), "gap": e.value, "spread": e.spread }),
            Err(err) => json!({ "zeta": z.to_string(), "error": err.to_string() }),
        })
        .collect();
    Ok(Output {
        summary: vec![
            format!("{} Leja points on {}", seq.points().len(), cfg.domain),
            format!(
                "F_w ~ {} (spread {}), cap(E, w) ~ {}",
                csv_float(eqd.robin_constant.value),
                csv_float(eqd.robin_constant.spread),
                csv_float(eqd.weighted_capacity.value)
            ),
            format!("support estimate {}", eqd.support_estimate),
        ],
        result: json!({ "equilibrium": eqd, "gaps": gaps, "points": seq.points() }),
        csv: seq.to_csv(),
    })
}

/// The closed-form model when the swept factors are exactly `z, 4z-1` on
/// `[0, 1/4]` with multiplicity parameters; a Leja model otherwise.
fn model(cfg: &RunConfig) -> Result<Box<dyn WeightModel>, Failure> {
    let swept = cfg.swept();
    let closed = is_quarter(&cfg.domain)
        && cfg.pinned().is_empty()
        && cfg.convention == ExponentConvention::UnitInterval
        && swept == [IntPoly::identity(), IntPoly::from_i64s(&[-1, 4])];
    match (cfg.mode, closed) {
        (Mode::Auto | Mode::ClosedForm, true) => Ok(Box::new(ClosedFormTwoFactor)),
        (Mode::ClosedForm, false) => Err(Failure::Invalid(
            "--mode closed-form needs factors exactly z:*,4z-1:* on [0, 1/4]".into(),
        )),
        _ => {
            let mut m = LejaModel::new(cfg.domain.clone(), swept, cfg.pinned(), cfg.convention, cfg.leja_length)?;
            m.config = leja_config(cfg);
            Ok(Box::new(m))
        }
    }
}

fn sweep_config(cfg: &RunConfig) -> SweepConfig {
    match cfg.coarse_step {
        Some(c) => SweepConfig::multiscale(cfg.step, c),
        None => SweepConfig::exhaustive(cfg.step),
    }
}

fn objective(cfg: &RunConfig, kind: ObjectiveKind) -> Objective {
    match kind {
        ObjectiveKind::Upper => Objective::Upper,
        ObjectiveKind::Lower => Objective::Lower { zetas: cfg.zetas.clone() },
    }
}

fn swept_report(cfg: &RunConfig, kind: ObjectiveKind) -> Result<BoundReport, Failure> {
    let m = model(cfg)?;
    Ok(sweep_report(m.as_ref(), &objective(cfg, kind), &sweep_config(cfg), is_quarter(&cfg.domain))?)
}

fn bound(cfg: &RunConfig, kind: ObjectiveKind) -> Run {
    let reports = if !cfg.swept().is_empty() {
        vec![swept_report(cfg, kind)?]
    } else {
        let w = fixed_weight(cfg)?;
        let closed = match cfg.mode {
            Mode::Leja => None,
            Mode::Auto => as_two_factor(&cfg.domain, &w),
            Mode::ClosedForm => Some(as_two_factor(&cfg.domain, &w).ok_or_else(|| {
                Failure::Invalid("--mode closed-form needs factors among z, 4z-1 on [0, 1/4]".into())
            })?),
        };
        match (kind, closed) {
            (ObjectiveKind::Upper, c) => {
                let mode = match c {
                    Some(_) => CapacityMode::ClosedForm,
                    None => CapacityMode::Leja { length: cfg.leja_length, config: leja_config(cfg) },
                };
                vec![weighted_upper(&cfg.domain, &w, mode)?, fekete_upper(&cfg.domain)?]
            }
            (ObjectiveKind::Lower, Some(p)) => {
                let eq = TwoFactorEquilibrium::new(p)?;
                vec![rational_point_lower_closed_form(&eq, &cfg.zetas)?, robin_lower_closed_form(&eq)?]
            }
            (ObjectiveKind::Lower, None) => {
                let seq = LejaSequence::generate(cfg.domain.clone(), w.clone(), cfg.leja_length, leja_config(cfg))?;
                let f = seq.estimate_robin()?;
                vec![
                    rational_point_lower_leja(&seq, &cfg.zetas)?,
                    robin_lower(&w, f.value).with_diagnostic("robin_spread", f.spread),
                ]
            }
        }
    };
    let best = match kind {
        ObjectiveKind::Upper => reports.iter().map(|r| r.value).fold(f64::INFINITY, f64::min),
        ObjectiveKind::Lower => reports.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(Output {
        summary: reports.iter().map(|r| r.to_string()).collect(),
        csv: reports_csv(&reports),
        result: json!({ "best": best, "reports": reports }),
    })
}

fn sweep_cmd(cfg: &RunConfig) -> Run {
    let r = swept_report(cfg, cfg.objective)?;
    let names: Vec<String> = serde_json::from_value(r.parameters["names"].clone()).unwrap_or_default();
    let argmin: Vec<f64> = serde_json::from_value(r.parameters["argmin"].clone()).unwrap_or_default();
    let mut csv = names.join(",");
    csv.push_str(",value\n");
    for a in &argmin {
        csv.push_str(&csv_float(*a));
        csv.push(',');
    }
    csv.push_str(&csv_float(r.value));
    csv.push('\n');
    let args: Vec<String> = names.iter().zip(&argmin).map(|(n, a)| format!("{n} = {}", csv_float(*a))).collect();
    Ok(Output {
        summary: vec![format!("{r}"), format!("at {}", args.join(", "))],
        csv,
        result: json!(r),
    })
}

fn region(cfg: &RunConfig) -> Run {
    let m = model(cfg)?;
    let spec = RegionSpec {
        alpha_names: m.names(),
        lattice_step: cfg.step,
        threshold: cfg.m,
        constraints: cfg.zetas.clone(),
    };
    let strategy = match &cfg.seed {
        Some(s) => RegionStrategy::FloodFill { seed: s.clone() },
        None => RegionStrategy::Exhaustive,
    };
    let r = feasible_region(m.as_ref(), &spec, &strategy)?;
    let bbox = r.bounding_box();
    let mut summary = vec![format!("{} of {} lattice points feasible at M = {}", r.feasible_count(), r.points.len(), cfg.m)];
    match &bbox {
        Some(b) => {
            for (n, iv) in spec.alpha_names.iter().zip(b) {
                summary.push(format!("{n} in [{}, {}]", csv_float(iv[0]), csv_float(iv[1])));
            }
        }
        None => summary.push("feasible region is empty".into()),
    }
    if r.failures > 0 {
        summary.push(format!("{} lattice points could not be evaluated", r.failures));
    }
    Ok(Output {
        result: json!({ "bounding_box": bbox, "feasible_count": r.feasible_count(), "region": r }),
        csv: r.to_csv(),
        summary,
    })
}

fn exact(cfg: &RunConfig) -> Run {
    let n = cfg.degree.unwrap();
    let outcomes = search_degrees(&cfg.domain, n, cfg.max_degree)?;
    let mut rows = Vec::new();
    let mut csv = String::from("n,norm,root_norm,polynomial\n");
    let mut summary = Vec::new();
    for o in &outcomes {
        let rec = &o.record;
        let (table, factored) = factor_analyze(rec, &default_factors(rec));
        csv.push_str(&format!(
            "{},{},{},\"{}\"\n",
            rec.degree,
            csv_float(rec.norm),
            csv_float(rec.root_norm()),
            rec.polynomial
        ));
        summary.push(format!(
            "n = {}: norm {}, root {}, {}",
            rec.degree,
            csv_float(rec.norm),
            csv_float(rec.root_norm()),
            rec.polynomial
        ));
        rows.push(json!({
            "record": factored,
            "multiplicities": table,
            "ties": o.ties,
            "symmetry": symmetry_reduce(&rec.polynomial),
            "nodes": o.nodes,
        }));
    }
    Ok(Output { result: json!(rows), csv, summary })
}

fn lemniscate(cfg: &RunConfig) -> Run {
    let reports = lemniscate_tz(cfg.poly.as_ref().unwrap(), cfg.r.unwrap(), cfg.irreducible)?;
    Ok(Output {
        summary: reports.iter().map(|r| r.to_string()).collect(),
        csv: reports_csv(&reports),
        result: json!(reports),
    })
}

fn construct(cfg: &RunConfig) -> Run {
    let n = cfg.degree.unwrap();
    let w = fixed_weight(cfg)?;
    let nodes = leja_nodes(&cfg.domain, &w, n)?;
    let c = hilbert_fekete_construct(&cfg.domain, &w, n, &nodes)?;
    let mut csv = String::from("power,coefficient\n");
    for (k, a) in c.polynomial.coeffs().iter().enumerate() {
        csv.push_str(&format!("{k},{a}\n"));
    }
    let deg = c.polynomial.degree().unwrap_or(0);
    Ok(Output {
        summary: vec![
            format!("P = {}", c.polynomial),
            format!(
                "||w^n P|| <= {} (n-th root {}), grid estimate {}",
                csv_float(c.certified_bound),
                csv_float(c.certified_bound.powf(1.0 / n as f64)),
                csv_float(c.grid_norm)
            ),
            format!("degree {deg}, Lebesgue constant ~ {}", csv_float(c.lebesgue_constant)),
        ],
        result: json!({ "construction": c, "nodes": nodes }),
        csv,
    })
}
