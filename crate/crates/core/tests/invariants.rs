//! Property-based checks of the geometric and statistical invariants:
//! rotation invariance, representative independence, chart round trips,
//! moment monotonicity, and bound round trips over randomized inputs.

mod common;

use grasstat::bounds::{gv_min_cardinality, gv_min_product};
use grasstat::density::{cdf_eval, invert_cdf, pdf_eval};
use grasstat::grassmann::{
    chordal_product, code_energy, min_pairwise_product, principal_angles, Code, GrassmannPoint,
};
use grasstat::moments::{beta_moment, beta_product_params, chordal_moment, MomentQuery};
use grasstat::rng::{complex_gaussian_matrix, shard_rng};
use grasstat::sampling::{sample_uniform, to_affine_chart};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![
        Just((2usize, 1usize)),
        Just((4, 1)),
        Just((4, 2)),
        Just((5, 2)),
        Just((6, 3)),
        Just((9, 3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chordal_product_is_rotation_invariant((t, m) in dims(), seed in any::<u64>()) {
        let mut rng = shard_rng(seed, 0);
        let a = sample_uniform(t, m, &mut rng).unwrap();
        let b = sample_uniform(t, m, &mut rng).unwrap();
        let u = complex_gaussian_matrix(t, t, &mut rng).qr().q();
        let ua = GrassmannPoint::new(&u * a.basis()).unwrap();
        let ub = GrassmannPoint::new(&u * b.basis()).unwrap();
        let before = chordal_product(&a, &b).unwrap();
        let after = chordal_product(&ua, &ub).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);
    }

    #[test]
    fn chordal_product_ignores_the_representative((t, m) in dims(), seed in any::<u64>()) {
        let mut rng = shard_rng(seed, 1);
        let a = sample_uniform(t, m, &mut rng).unwrap();
        let b = sample_uniform(t, m, &mut rng).unwrap();
        let v = complex_gaussian_matrix(m, m, &mut rng).qr().q();
        let same_span = GrassmannPoint::new(a.basis() * v).unwrap();
        let before = chordal_product(&a, &b).unwrap();
        let after = chordal_product(&same_span, &b).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);
        prop_assert!(principal_angles(&a, &same_span).unwrap().squared_chordal_distance() <= 1e-10);
    }

    #[test]
    fn chart_round_trip_preserves_the_span((t, m) in dims(), seed in any::<u64>()) {
        let mut rng = shard_rng(seed, 2);
        let point = sample_uniform(t, m, &mut rng).unwrap();
        // the chart misses only a measure-zero set; skip those draws
        if let Ok(chart) = to_affine_chart(&point) {
            let back = chart.embed();
            let gap = principal_angles(&point, &back).unwrap().squared_chordal_distance();
            prop_assert!(gap <= 1e-10, "round trip moved the span by {gap}");
        }
    }

    #[test]
    fn small_codes_have_consistent_energy(seed in any::<u64>(), k in 2usize..5, n in 1u32..3) {
        let mut rng = shard_rng(seed, 3);
        let points: Vec<GrassmannPoint> =
            (0..k).map(|_| sample_uniform(5, 2, &mut rng).unwrap()).collect();
        let code = Code::new(points.clone()).unwrap();
        let energy = code_energy(&code, n);
        prop_assert!(energy.is_finite());
        let mut manual = 0.0;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    manual += chordal_product(&points[i], &points[j]).unwrap().powi(-(n as i32));
                }
            }
        }
        prop_assert!(((energy.as_f64() - manual) / manual).abs() <= 1e-12);
        let (min, (i, j)) = min_pairwise_product(&code);
        prop_assert!(min > 0.0 && min <= 1.0);
        prop_assert!(i < j && j < k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moments_decrease_in_the_exponent((t, m) in dims(), raw in 0.0f64..6.0) {
        let boundary = 2.0 * m as f64 - t as f64 - 1.0;
        let low = boundary + 0.25 + raw;
        let high = low + 0.5;
        let lower = chordal_moment(&MomentQuery::new(t, m, low).unwrap());
        let upper = chordal_moment(&MomentQuery::new(t, m, high).unwrap());
        prop_assert!(lower > 0.0 && upper > 0.0);
        prop_assert!(upper <= lower * (1.0 + 1e-12));
        let unit = chordal_moment(&MomentQuery::new(t, m, 0.0).unwrap());
        prop_assert!((unit - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn moments_factor_into_beta_moments((t, m) in dims(), raw in 0.0f64..6.0) {
        let p = 2.0 * m as f64 - t as f64 - 0.75 + raw;
        let joint = chordal_moment(&MomentQuery::new(t, m, p).unwrap());
        let factored: f64 = beta_product_params(t, m)
            .unwrap()
            .iter()
            .map(|factor| beta_moment(factor, p).unwrap())
            .product();
        prop_assert!(((joint - factored) / factored).abs() <= 1e-10);
    }

    #[test]
    fn gv_conversions_round_trip((t, m) in dims(), k in 2u64..4096) {
        let delta = gv_min_product(t, m, k).unwrap();
        prop_assert!(delta > 0.0 && delta < 1.0);
        let back = gv_min_cardinality(t, m, delta).unwrap();
        prop_assert!(back >= k - 1 && back <= k + 1, "K = {k} came back as {back}");
    }

    #[test]
    fn cdf_inversion_round_trips((t, m) in dims(), q in 1e-9f64..1.0) {
        let x = invert_cdf(m, t, q).unwrap();
        let mass = cdf_eval(m, t, x).unwrap();
        // the inverter resolves x to 1e-12, which floors the recoverable mass
        // at pdf(x)·1e-12 in absolute terms
        prop_assert!((mass - q).abs() <= 1e-9 * q + 1e-11);
    }

    #[test]
    fn densities_are_nonnegative_and_masses_monotone((t, m) in dims(), a in 0.01f64..1.0, b in 0.01f64..1.0) {
        prop_assert!(pdf_eval(m, t, a).unwrap() >= 0.0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mass_lo = cdf_eval(m, t, lo).unwrap();
        let mass_hi = cdf_eval(m, t, hi).unwrap();
        prop_assert!((0.0..=1.0).contains(&mass_lo));
        prop_assert!(mass_hi >= mass_lo - 1e-14);
    }
}
