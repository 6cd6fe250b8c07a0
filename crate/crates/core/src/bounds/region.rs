//! Exponent vectors compatible with a hypothetical polynomial of norm below `M`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::{simplex_lattice, Fidelity, Objective, WeightModel};
use crate::error::{domain_err, Result};
use crate::fmt::csv_float;
use crate::polycore::RationalPoint;

/// Default threshold `M`.
pub const DEFAULT_THRESHOLD: f64 = 0.179335;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub alpha_names: Vec<String>,
    pub lattice_step: f64,
    #[serde(rename = "M")]
    pub threshold: f64,
    pub constraints: Vec<RationalPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
pub enum RegionStrategy {
    /// Every point of the open simplex lattice.
    Exhaustive,
    /// Face-neighbour flood fill from the given parameter vector; assumes the
    /// feasible set is connected and contains the seed.
    FloodFill { seed: Vec<f64> },
}

/// One evaluated lattice point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub alpha: Vec<f64>,
    pub constraints: Vec<f64>,
    pub feasible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub spec: RegionSpec,
    /// Evaluated points in lexicographic lattice order.
    pub points: Vec<RegionPoint>,
    pub failures: usize,
}

impl Region {
    pub fn feasible(&self) -> impl Iterator<Item = &RegionPoint> {
        self.points.iter().filter(|p| p.feasible)
    }

    pub fn feasible_count(&self) -> usize {
        self.feasible().count()
    }

    /// Per-coordinate `[min, max]` over feasible points; `None` if there are none.
    pub fn bounding_box(&self) -> Option<Vec<[f64; 2]>> {
        let mut it = self.feasible();
        let first = it.next()?;
        let mut b: Vec<[f64; 2]> = first.alpha.iter().map(|&a| [a, a]).collect();
        for p in it {
            for (bi, &a) in b.iter_mut().zip(&p.alpha) {
                bi[0] = bi[0].min(a);
                bi[1] = bi[1].max(a);
            }
        }
        Some(b)
    }

    /// Same region at a larger threshold, reusing the constraint values.
    pub fn with_threshold(&self, threshold: f64) -> Region {
        let mut r = self.clone();
        r.spec.threshold = threshold;
        for p in &mut r.points {
            p.feasible = is_feasible(&p.constraints, threshold);
        }
        r
    }

    /// Rows `alpha..., l_1..., feasible` with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let mut head: Vec<String> = self.spec.alpha_names.clone();
        head.extend((1..=self.spec.constraints.len()).map(|i| format!("l_{i}")));
        head.push("feasible".into());
        s.push_str(&head.join(","));
        s.push('\n');
        for p in &self.points {
            let mut row: Vec<String> = p.alpha.iter().chain(&p.constraints).map(|&v| csv_float(v)).collect();
            row.push(if p.feasible { "1" } else { "0" }.into());
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

fn is_feasible(constraints: &[f64], threshold: f64) -> bool {
    !constraints.is_empty() && constraints.iter().all(|&l| l.is_finite() && l < threshold)
}

/// Lattice points where every rational-point constraint stays below `M`.
pub fn feasible_region(model: &dyn WeightModel, spec: &RegionSpec, strategy: &RegionStrategy) -> Result<Region> {
    let step = spec.lattice_step;
    if !(step > 0.0 && step < 1.0) {
        return domain_err(format!("lattice step {step} must lie in (0, 1)"));
    }
    if spec.constraints.is_empty() {
        return domain_err("a region needs at least one constraint point");
    }
    if spec.alpha_names.len() != model.dim() {
        return Err(crate::Error::LengthMismatch { left: spec.alpha_names.len(), right: model.dim() });
    }
    let objective = Objective::Lower { zetas: spec.constraints.clone() };
    let lattice: BTreeSet<Vec<i64>> =
        simplex_lattice(&model.simplex_coefficients(), model.alpha_offset(), step).into_iter().collect();
    let eval = |ks: &[Vec<i64>]| -> Vec<Option<Vec<f64>>> {
        ks.par_iter()
            .map(|k| {
                let a: Vec<f64> = k.iter().map(|&i| i as f64 * step).collect();
                model.evaluate(&a, &objective, Fidelity::Fine).ok().map(|v| v.constraints)
            })
            .collect()
    };

    let mut done: BTreeMap<Vec<i64>, Option<Vec<f64>>> = BTreeMap::new();
    match strategy {
        RegionStrategy::Exhaustive => {
            let ks: Vec<Vec<i64>> = lattice.iter().cloned().collect();
            for (k, v) in ks.iter().cloned().zip(eval(&ks)) {
                done.insert(k, v);
            }
        }
        RegionStrategy::FloodFill { seed } => {
            if seed.len() != model.dim() {
                return Err(crate::Error::LengthMismatch { left: seed.len(), right: model.dim() });
            }
            let k0: Vec<i64> = seed.iter().map(|&a| (a / step).round() as i64).collect();
            if !lattice.contains(&k0) {
                return domain_err("flood-fill seed lies outside the lattice");
            }
            let mut frontier: VecDeque<Vec<i64>> = VecDeque::from([k0]);
            let mut queued: BTreeSet<Vec<i64>> = frontier.iter().cloned().collect();
            while !frontier.is_empty() {
                let batch: Vec<Vec<i64>> = frontier.drain(..).collect();
                let vals = eval(&batch);
                for (k, v) in batch.into_iter().zip(vals) {
                    let open = v.as_deref().is_some_and(|c| is_feasible(c, spec.threshold));
                    if open {
                        for i in 0..k.len() {
                            for d in [-1, 1] {
                                let mut n = k.clone();
                                n[i] += d;
                                if lattice.contains(&n) && queued.insert(n.clone()) {
                                    frontier.push_back(n);
                                }
                            }
                        }
                    }
                    done.insert(k, v);
                }
            }
        }
    }

    let mut failures = 0;
    let points = done
        .into_iter()
        .map(|(k, v)| {
            let alpha: Vec<f64> = k.iter().map(|&i| i as f64 * step).collect();
            let constraints = v.unwrap_or_else(|| {
                failures += 1;
                vec![f64::NAN; spec.constraints.len()]
            });
            let feasible = is_feasible(&constraints, spec.threshold);
            RegionPoint { alpha, constraints, feasible }
        })
        .collect();
    Ok(Region { spec: spec.clone(), points, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::sweep::ClosedFormTwoFactor;

    fn spec(step: f64, m: f64) -> RegionSpec {
        RegionSpec {
            alpha_names: vec!["alpha1".into(), "alpha2".into()],
            lattice_step: step,
            threshold: m,
            constraints: vec![RationalPoint::zero(), "1/4".parse().unwrap()],
        }
    }

    #[test]
    fn coarse_two_factor_region() {
        let r = feasible_region(&ClosedFormTwoFactor, &spec(0.01, DEFAULT_THRESHOLD), &RegionStrategy::Exhaustive).unwrap();
        let b = r.bounding_box().unwrap();
        assert!(b[0][0] > 0.28 && b[0][1] < 0.38, "{b:?}");
        assert!(b[1][0] > 0.08 && b[1][1] < 0.19, "{b:?}");
        let f = feasible_region(
            &ClosedFormTwoFactor,
            &spec(0.01, DEFAULT_THRESHOLD),
            &RegionStrategy::FloodFill { seed: vec![0.33, 0.13] },
        )
        .unwrap();
        let a: Vec<_> = r.feasible().map(|p| p.alpha.clone()).collect();
        let c: Vec<_> = f.feasible().map(|p| p.alpha.clone()).collect();
        assert_eq!(a, c);
    }

    #[test]
    fn csv_header() {
        let r = feasible_region(&ClosedFormTwoFactor, &spec(0.1, 0.2), &RegionStrategy::Exhaustive).unwrap();
        assert!(r.to_csv().starts_with("alpha1,alpha2,l_1,l_2,feasible\n"));
    }
}
