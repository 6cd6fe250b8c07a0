use intcheb::bounds::*;
use intcheb::exact::*;
use intcheb::jacobi::*;
use intcheb::leja::*;
use intcheb::polycore::*;
use num_complex::Complex;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (f64, f64)> {
    (0.02f64..0.98, 0.02f64..0.98).prop_map(|(u, v)| {
        let a1 = 0.5 * 0.95 * u;
        (a1, (1.0 - 2.0 * a1) * 0.95 * v)
    })
}

fn small_poly(max_deg: usize, c: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-c..=c, 2..=max_deg + 1)
        .prop_filter("nonconstant", |v| v.iter().skip(1).any(|&x| x != 0))
        .prop_map(|v| IntPoly::from_i64s(&v))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn interval_union_normalisation_is_idempotent(raw in prop::collection::vec((-5.0f64..5.0, 0.0f64..2.0), 1..6)) {
        let ivs: Vec<[f64; 2]> = raw.iter().map(|&(lo, len)| [lo, lo + len]).collect();
        let u = IntervalUnion::new(ivs).unwrap();
        let again = IntervalUnion::new(u.intervals().to_vec()).unwrap();
        prop_assert_eq!(&u, &again);
        for w in u.intervals().windows(2) {
            prop_assert!(w[0][1] < w[1][0]);
        }
    }

    #[test]
    fn rational_points_are_reduced(p1 in -50i64..50, p2 in -50i64..50, q in 1i64..50) {
        let z = RationalPoint::new(p1, p2, q).unwrap();
        let g = num_integer::gcd(num_integer::gcd(z.p1(), z.p2()), z.q());
        prop_assert_eq!(g, 1);
        prop_assert!(z.q() > 0);
        let c: Complex<f64> = z.to_complex();
        prop_assert!((c.re - p1 as f64 / q as f64).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_nondecreasing_in_density(p in small_poly(5, 6), lo in -1.0f64..1.0, len in 0.1f64..2.0, d in 50usize..400) {
        let e = IntervalUnion::interval(lo, lo + len).unwrap();
        let coarse = sup_norm_on_grid(&p, &e, d);
        let fine = sup_norm_on_grid(&p, &e, 4 * d);
        prop_assert!(fine >= coarse * (1.0 - 1e-12), "{} < {}", fine, coarse);
    }

    #[test]
    fn sup_norm_reflection_invariant(p in small_poly(5, 6), twice_c in -2i64..=2, r1 in 0.0f64..0.5, len in 0.1f64..1.0) {
        let c = twice_c as f64 / 2.0;
        let e = if r1 < 0.25 {
            IntervalUnion::interval(c - len, c + len).unwrap()
        } else {
            IntervalUnion::new(vec![[c - r1 - len, c - r1], [c + r1, c + r1 + len]]).unwrap()
        };
        let q = p.reflect(twice_c);
        let a = sup_norm_on_grid(&p, &e, 2000);
        let b = sup_norm_on_grid(&q, &e, 2000);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn roots_reconstruct_polynomial(p in small_poly(6, 20)) {
        let roots = poly_roots::<f64>(&p, 1e-9).unwrap();
        let m: usize = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(m, p.degree().unwrap());
        let monic = monic_from_roots(&roots);
        let lead = p.leading().unwrap().to_string().parse::<f64>().unwrap();
        let scale: f64 = p.to_real_coeffs::<f64>().iter().map(|c| (c / lead).abs()).fold(1.0, f64::max);
        for (c, r) in p.to_real_coeffs::<f64>().iter().zip(&monic) {
            prop_assert!((c / lead - r).abs() <= 1e-6 * scale * m as f64, "{} vs {}", c / lead, r);
        }
        for r in roots.iter().filter(|r| r.value.im != 0.0) {
            prop_assert!(roots.iter().any(|s| (s.value - r.value.conj()).norm() < 1e-9));
        }
    }

    #[test]
    fn log_weight_infinite_only_at_zeros(f in small_poly(3, 6), a in 0.05f64..0.3, x in -2.0f64..2.0) {
        let deg = f.degree().unwrap() as f64;
        let w = FactorWeight::new(vec![(f.clone(), a / deg)]).unwrap();
        let v = w.log_abs(x);
        if f.eval::<f64>(x) == 0.0 {
            prop_assert_eq!(v, f64::NEG_INFINITY);
        } else {
            prop_assert!(v.is_finite());
        }
        prop_assert_eq!(w.log_abs(w.real_zeros().first().copied().unwrap_or(f64::NAN)).is_finite(), false);
    }

    #[test]
    fn discriminant_even_in_alpha2((a1, a2) in params()) {
        prop_assert_eq!(discriminant(a1, a2), discriminant(a1, -a2));
    }

    #[test]
    fn exterior_maps_have_unit_modulus_on_support((a1, a2) in params(), t in 0.0f64..1.0, y in 1e-3f64..1.0) {
        let eq = TwoFactorEquilibrium::new(TwoFactorParams::new(a1, a2).unwrap()).unwrap();
        let s = *eq.support();
        let x = s.a + t * (s.b - s.a);
        let mut maps = vec![GreenEvaluator::new(s.a, s.b, Pole::Infinity).unwrap()];
        if s.a > 0.0 {
            maps.push(GreenEvaluator::new(s.a, s.b, Pole::At(0.0)).unwrap());
        }
        if s.b < 0.25 {
            maps.push(GreenEvaluator::new(s.a, s.b, Pole::At(0.25)).unwrap());
        }
        for g in maps {
            prop_assert!((g.map_modulus(Complex::new(x, 0.0)) - 1.0).abs() < 1e-10);
            prop_assert!(g.map_modulus(Complex::new(x, y)) > 1.0);
            prop_assert!(g.map_modulus(Complex::new(s.b + y, 0.0)) > 1.0);
        }
    }

    #[test]
    fn gap_cancels_weight_on_support((a1, a2) in params(), t in 0.001f64..0.999) {
        let p = TwoFactorParams::new(a1, a2).unwrap();
        let eq = TwoFactorEquilibrium::new(p).unwrap();
        let s = *eq.support();
        let x = Complex::new(s.a + t * (s.b - s.a), 0.0);
        prop_assert!((eq.potential_gap(x) + eq.log_weight(x)).abs() < 1e-8);
    }

    #[test]
    fn capacity_expressions_agree((a1, a2) in params()) {
        let eq = TwoFactorEquilibrium::new(TwoFactorParams::new(a1, a2).unwrap()).unwrap();
        prop_assert!((eq.log_capacity().value - eq.log_capacity_harmonic().value).abs() < 1e-6);
    }

    #[test]
    fn gap_grows_like_log_at_infinity((a1, a2) in params()) {
        let eq = TwoFactorEquilibrium::new(TwoFactorParams::new(a1, a2).unwrap()).unwrap();
        let g1 = eq.potential_gap(Complex::new(1e6, 0.0));
        let g2 = eq.potential_gap(Complex::new(2e6, 0.0));
        let g3 = eq.potential_gap(Complex::new(0.0, 1e6));
        // U^mu(z) = -log|z| + O(1/|z|), so the gap is log|z| plus a constant.
        let slope = (g2 - g1) / 2f64.ln();
        prop_assert!((slope - 1.0).abs() < 1e-5, "{}", slope);
        prop_assert!((g3 - g1).abs() < 1e-5);
    }

    #[test]
    fn formula_fidelity(alpha in 0.05f64..0.95, gaps in prop::collection::vec(0.0f64..10.0, 3)) {
        let zetas = vec![RationalPoint::zero(), "1/4".parse().unwrap(), "1/5".parse().unwrap()];
        let r = rational_point_lower_alpha(alpha, &zetas, &gaps).unwrap();
        let expect = zetas.iter().zip(&gaps)
            .map(|(z, g)| (z.q() as f64).powf(alpha - 1.0) * ((alpha - 1.0) * g).exp())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((r.value - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn lattice_lower_bound_below_every_upper_bound(q in params()) {
        let z = vec![RationalPoint::zero(), "1/4".parse().unwrap()];
        let lower = sweep_report(&ClosedFormTwoFactor, &Objective::Lower { zetas: z }, &SweepConfig::exhaustive(0.02), true).unwrap();
        let e = IntervalUnion::interval(0.0, 0.25).unwrap();
        let upper = weighted_upper(&e, &TwoFactorParams::new(q.0, q.1).unwrap().weight(), CapacityMode::ClosedForm).unwrap();
        prop_assert!(lower.is_consistent_with(&upper), "{} > {}", lower.value, upper.value);
        prop_assert!(lower.is_consistent_with(&fekete_upper(&e).unwrap()));
    }

    #[test]
    fn lemniscate_bracket_collapses_iff_monic(p in small_poly(4, 5), r in 0.05f64..0.95) {
        let reports = lemniscate_tz(&p, r, false).unwrap();
        let monic = p.leading().unwrap().magnitude() == &num_bigint::BigUint::from(1u32);
        prop_assert_eq!(reports.len() == 1, monic);
        if !monic {
            prop_assert!(reports[0].value < reports[1].value);
        }
    }

    #[test]
    fn symmetry_lift_inverts_reduce(q in small_poly(4, 9), odd in any::<bool>()) {
        let s = if odd { Symmetry::Odd(q) } else { Symmetry::Even(q) };
        let p = symmetry_lift(&s).unwrap();
        prop_assert_eq!(symmetry_reduce(&p), s);
    }

    #[test]
    fn factor_analysis_reassembles(ls in prop::collection::vec(0usize..3, 4), r in small_poly(2, 3)) {
        let table = unit_interval_factors();
        let mut p = r.clone();
        for (f, &l) in table.iter().zip(&ls) {
            p = &p * &f.pow(l as u32);
        }
        let n = p.degree().unwrap();
        let rec = FactorizationRecord::unfactored(IntervalUnion::interval(0.0, 1.0).unwrap(), n, p, 0.0);
        let (t, out) = factor_analyze(&rec, &table);
        prop_assert!(out.is_consistent());
        for (e, &l) in t.entries.iter().zip(&ls) {
            prop_assert!(e.multiplicity >= l);
        }
        prop_assert!(t.residual.leading().unwrap().magnitude() >= &num_bigint::BigUint::from(1u32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn leja_points_attain_grid_maximum((a1, a2) in params()) {
        let e = IntervalUnion::interval(0.0, 0.25).unwrap();
        let cfg = LejaConfig { grid_density: 20_000, refine: true };
        let s = LejaSequence::generate(e, TwoFactorParams::new(a1, a2).unwrap().weight(), 40, cfg).unwrap();
        for k in 0..=s.n() {
            let at = s.objective(k, s.points()[k]);
            let grid_max = s.grid_points().iter().map(|&x| s.objective(k, x)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(at >= grid_max - 1e-9 * grid_max.abs().max(1.0), "step {}: {} < {}", k, at, grid_max);
        }
        for &a in s.points() {
            for z in s.weight().real_zeros() {
                prop_assert!((a - z).abs() >= s.cell() * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn leja_estimators_are_consistent((a1, a2) in params()) {
        let e = IntervalUnion::interval(0.0, 0.25).unwrap();
        let s = LejaSequence::generate(e, TwoFactorParams::new(a1, a2).unwrap().weight(), 1000, LejaConfig::default()).unwrap();
        let mean: f64 = s.weight_logs().iter().sum::<f64>() / s.points().len() as f64;
        let d = s.estimate_log_capacity().unwrap().value + s.estimate_robin().unwrap().value - mean;
        prop_assert!(d.abs() < 0.01, "{}", d);
    }

    #[test]
    fn bernstein_walsh_domination(coeffs in prop::collection::vec(-9i64..=9, 3..8), x in 0.0f64..0.25, y in -0.2f64..0.2) {
        let p = IntPoly::from_i64s(&coeffs);
        prop_assume!(!p.is_zero());
        let n = coeffs.len() - 1;
        let e = IntervalUnion::interval(0.0, 0.25).unwrap();
        let w = TwoFactorParams::new(0.3, 0.1).unwrap().weight();
        let s = LejaSequence::generate(e, w.clone(), 1000, LejaConfig::default()).unwrap();
        let z = Complex::new(x, y);
        let Ok(gap) = s.estimate_potential_gap(z) else { return Ok(()); };
        let nf = n as f64;
        let sup = s.support_estimate().grid(200_000).iter()
            .map(|&t| nf * w.log_abs(t) + p.log_abs_exact(t))
            .fold(f64::NEG_INFINITY, f64::max);
        let lhs = nf * w.log_abs_complex(z) + p.eval_complex(z).norm().ln();
        let rhs = sup + nf * (gap.value + w.log_abs_complex(z));
        prop_assert!(lhs <= rhs + nf * 0.01, "{} > {}", lhs, rhs);
    }
}

#[test]
fn density_has_unit_mass_across_parameter_lattice() {
    let mut count = 0;
    for i in 0..6 {
        for j in 0..6 {
            let a1 = 0.02 + 0.075 * i as f64;
            let a2 = (1.0 - 2.0 * a1) * (0.02 + 0.15 * j as f64);
            let Ok(p) = TwoFactorParams::new(a1, a2) else { continue };
            let m = TwoFactorEquilibrium::new(p).unwrap().total_mass();
            assert!((m.value - 1.0).abs() < 1e-8, "({a1}, {a2}): {}", m.value);
            count += 1;
        }
    }
    assert!(count >= 20);
}

#[test]
fn region_grows_with_threshold() {
    let spec = |m: f64| RegionSpec {
        alpha_names: vec!["alpha1".into(), "alpha2".into()],
        lattice_step: 0.01,
        threshold: m,
        constraints: vec![RationalPoint::zero(), "1/4".parse().unwrap()],
    };
    let mut prev: Option<Vec<Vec<f64>>> = None;
    for m in [0.177, 0.178, DEFAULT_THRESHOLD, 0.181, 0.19] {
        let r = feasible_region(&ClosedFormTwoFactor, &spec(m), &RegionStrategy::Exhaustive).unwrap();
        let cur: Vec<Vec<f64>> = r.feasible().map(|p| p.alpha.clone()).collect();
        if let Some(p) = &prev {
            assert!(p.iter().all(|a| cur.contains(a)));
            assert!(cur.len() >= p.len());
        }
        prev = Some(cur);
    }
}

#[test]
fn exact_optimum_beats_factor_products() {
    let e = IntervalUnion::interval(0.0, 1.0).unwrap();
    let table = unit_interval_factors();
    let optima = search_degrees(&e, 7, DEFAULT_MAX_DEGREE).unwrap();
    for (i, r) in optima.iter().enumerate() {
        let n = i + 1;
        // Every product of table factors with total degree exactly n.
        fn rec(t: &[IntPoly], from: usize, left: usize, acc: IntPoly, out: &mut Vec<IntPoly>) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for k in from..t.len() {
                let d = t[k].degree().unwrap();
                if d <= left {
                    rec(t, k, left - d, &acc * &t[k], out);
                }
            }
        }
        let mut prods = Vec::new();
        rec(&table, 0, n, IntPoly::constant(1), &mut prods);
        for p in prods {
            let v = sup_norm_critical(&p, 0.0, 1.0).unwrap();
            assert!(r.record.norm <= v * (1.0 + 1e-12), "degree {n}: {} > {} for {p}", r.record.norm, v);
        }
        if n > 1 {
            assert!(r.record.norm <= optima[i - 1].record.norm);
        }
    }
}

#[test]
fn single_precision_paths_run() {
    let p32 = TwoFactorParams::<f32>::new(0.3, 0.1).unwrap();
    let p64 = TwoFactorParams::<f64>::new(0.3, 0.1).unwrap();
    let f32v = TwoFactorEquilibrium::new(p32).unwrap().robin();
    let f64v = TwoFactorEquilibrium::new(p64).unwrap().robin();
    assert!((f32v as f64 - f64v).abs() < 1e-4 * f64v);
    let e = IntervalUnion::<f32>::interval(0.0, 0.25).unwrap();
    let s = LejaSequence::generate(e, p32.weight(), 300, LejaConfig { grid_density: 20_000, refine: true }).unwrap();
    assert!((s.estimate_robin().unwrap().value as f64 - f64v).abs() < 0.05);
}
