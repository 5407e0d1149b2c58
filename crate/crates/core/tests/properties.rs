use planefield::dists::{
    fprf_pmf, ml1_neg, prf_pmf, sfprf_pmf, stfprf_pmf, CountFamily, CountLaw, FieldParams,
};
use planefield::fields::{inverse_stable_draw, sample_stable_sheet, stream_rng, GridSpec};
use planefield::specfun::{caputo_l1, frac_binom_coeffs, SeriesControl};
use planefield::verify::{empirical_pmf_counts, tv_distance};
use planefield::ComparisonReport;
use proptest::prelude::*;

fn c() -> SeriesControl {
    SeriesControl::default()
}

fn order() -> impl Strategy<Value = f64> {
    0.5f64..=1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn count_laws_are_distributions(
        fam in prop_oneof![Just(CountFamily::Prf), Just(CountFamily::Tfprf), Just(CountFamily::Sfprf), Just(CountFamily::Stfprf)],
        a1 in order(), a2 in order(), b in order(),
        lambda in 0.2f64..2.0, t1 in 0.2f64..1.5, t2 in 0.2f64..1.5,
    ) {
        let p = FieldParams::new(lambda, a1, a2, b).unwrap();
        let law = CountLaw::auto(fam, t1, t2, &p, 1e-9, &c()).unwrap();
        prop_assert!(law.pmf.iter().all(|q| (-1e-12..=1.0 + 1e-12).contains(q)));
        prop_assert!(law.overflow >= 0.0);
        prop_assert!((law.total() - 1.0).abs() < 1e-6, "total {}", law.total());
    }

    #[test]
    fn unit_orders_reduce_to_poisson(n in 0u64..10, lambda in 0.1f64..2.0, t1 in 0.1f64..1.4, t2 in 0.1f64..1.4) {
        prop_assume!(lambda * t1 * t2 <= 2.0);
        let want = prf_pmf(n, t1, t2, lambda);
        let one = FieldParams::poisson(lambda).unwrap();
        prop_assert!((fprf_pmf(n, t1, t2, &one, &c()).unwrap() - want).abs() < 1e-8);
        prop_assert!((sfprf_pmf(n, t1, t2, 1.0, lambda, &c()).unwrap() - want).abs() < 1e-8);
        prop_assert!((stfprf_pmf(n, t1, t2, &one, &c()).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn space_order_one_is_time_fractional(n in 0u64..8, a1 in order(), a2 in order(), t in 0.2f64..1.2) {
        let p = FieldParams::time_fractional(1.0, a1, a2).unwrap();
        match (stfprf_pmf(n, t, t, &p, &c()), fprf_pmf(n, t, t, &p, &c())) {
            (Ok(x), Ok(y)) => prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}"),
            (Err(e), _) | (_, Err(e)) => prop_assert!(e.is_numerical_limit(), "{e:?}"),
        }
    }

    #[test]
    fn inverse_stable_monotone_in_time(alpha in 0.05f64..1.0, s in 0.0f64..5.0, ds in 0.0f64..5.0, seed in any::<u64>()) {
        let a = inverse_stable_draw(alpha, s, &mut stream_rng(seed, 0));
        let b = inverse_stable_draw(alpha, s + ds, &mut stream_rng(seed, 0));
        prop_assert!(a.is_finite() && a >= 0.0 && a <= b);
    }

    #[test]
    fn stable_sheet_is_monotone(alpha in 0.2f64..1.0, seed in any::<u64>()) {
        let g = GridSpec::new(1.0, 1.0, 6, 5).unwrap();
        let s = sample_stable_sheet(alpha, &g, seed).unwrap();
        prop_assert!(s.is_monotone());
        prop_assert_eq!(s.get(0, 3), 0.0);
    }

    #[test]
    fn caputo_is_linear(alpha in 0.1f64..1.0, k in 0.5f64..3.0) {
        let h = 1.0 / 32.0;
        let f: Vec<f64> = (0..=32).map(|i| (i as f64 * h).powf(1.5)).collect();
        let g: Vec<f64> = (0..=32).map(|i| (i as f64 * h).sin()).collect();
        let mix: Vec<f64> = f.iter().zip(&g).map(|(a, b)| k * a + b).collect();
        let (df, dg, dm) = (caputo_l1(&f, alpha, h).unwrap(), caputo_l1(&g, alpha, h).unwrap(), caputo_l1(&mix, alpha, h).unwrap());
        for i in 0..=32 {
            prop_assert!((dm[i] - (k * df[i] + dg[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn frac_binom_coeffs_telescope(alpha in 0.05f64..1.0) {
        // (1 − z)^α (1 − z)^{1−α} = 1 − z.
        let a = frac_binom_coeffs(alpha, 12);
        let b = frac_binom_coeffs(1.0 - alpha, 12);
        for n in 0..=12 {
            let conv: f64 = (0..=n).map(|k| a[k] * b[n - k]).sum();
            let want = match n { 0 => 1.0, 1 => -1.0, _ => 0.0 };
            prop_assert!((conv - want).abs() < 1e-13);
        }
    }

    #[test]
    fn mittag_leffler_decreases_on_negative_axis(alpha in 0.3f64..1.0, x in 0.0f64..3.0, dx in 0.01f64..1.0) {
        let a = ml1_neg(alpha, x, &c()).unwrap();
        let b = ml1_neg(alpha, x + dx, &c()).unwrap();
        prop_assert!(b < a && b > 0.0);
    }

    #[test]
    fn tv_is_a_metric(p in prop::collection::vec(0.0f64..1.0, 1..8), q in prop::collection::vec(0.0f64..1.0, 1..8)) {
        let norm = |v: &[f64]| { let s: f64 = v.iter().sum::<f64>().max(1e-9); v.iter().map(|x| x / s).collect::<Vec<_>>() };
        let (p, q) = (norm(&p), norm(&q));
        let d = tv_distance(&p, &q);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - tv_distance(&q, &p)).abs() < 1e-15);
        prop_assert_eq!(tv_distance(&p, &p), 0.0);
    }

    #[test]
    fn empirical_pmf_sums_to_one(xs in prop::collection::vec(0u64..20, 1..200), cut in 0usize..25) {
        let e = empirical_pmf_counts(&xs);
        let s: f64 = e.binned(cut).iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_json_round_trips(v in -1e3f64..1e3, t in 0.0f64..1e3, seed in any::<u64>()) {
        let r = ComparisonReport::upper("x", "stat", v, t).with_seed(seed).detail("k", [1.0, 2.0]);
        let back: ComparisonReport = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }
}
