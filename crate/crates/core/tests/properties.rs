use covdepth_core::analytic::{expected, lower_bound_harmonic, lower_bound_multi, lower_bound_simple};
use covdepth_core::combinatorics::{
    binomial, harmonic, harmonic_diff, hypergeometric_ratio, hypergeometric_ratio_f64, hypergeometric_ratio_ln,
    ExactValue,
};
use covdepth_core::schemes::{decodable, enumerate_states, CollectionState, Scheme, SystemParams};
use proptest::prelude::*;

fn binomial_arg(max_n: u64) -> impl Strategy<Value = (u64, i64)> {
    (0..=max_n).prop_flat_map(|n| (Just(n), 0..=n as i64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn log_path_matches_exact(
        num in prop::collection::vec(binomial_arg(200), 0..4),
        den in prop::collection::vec(binomial_arg(200), 1..3),
    ) {
        let exact = hypergeometric_ratio(&num, &den).unwrap().to_f64();
        let logged = libm::exp(hypergeometric_ratio_ln(&num, &den).unwrap());
        prop_assert!((logged - exact).abs() <= 1e-12 * exact, "{logged} vs {exact}");
        let routed = hypergeometric_ratio_f64(&num, &den, 0).unwrap();
        prop_assert_eq!(routed, logged);
    }
}

proptest! {
    #[test]
    fn harmonic_diff_is_difference(n in 0u64..300, b in 0u64..300) {
        prop_assume!(b <= n);
        prop_assert_eq!(harmonic_diff(n, b).unwrap(), harmonic(n) - harmonic(n - b));
    }

    #[test]
    fn level_normalization(k in 1u64..20, rest in 0u64..20, t in 0u64..40) {
        prop_assume!(t <= k + rest);
        let total: ExactValue = (0..=t)
            .map(|i| hypergeometric_ratio(&[(k, i as i64), (rest, (t - i) as i64)], &[(k + rest, t as i64)]).unwrap())
            .sum();
        prop_assert_eq!(total, ExactValue::one());
    }

    #[test]
    fn vandermonde(n in 0u64..40, r in 0u64..40, k in 0i64..40) {
        let lhs: num_bigint::BigUint = (0..=k).map(|i| binomial(n, i) * binomial(r, k - i)).sum();
        prop_assert_eq!(lhs, binomial(n + r, k));
    }

    #[test]
    fn decodable_is_monotone(n in 1u32..7, k in 1u32..7, m in 1u32..4, a in 1u32..4, s in 0u32..4) {
        prop_assume!(k <= n && a <= m);
        let params = SystemParams::new(n, k, m, a).unwrap();
        let mut schemes = vec![Scheme::LocalMds, Scheme::GlobalMds];
        if m == 2 && a == 1 && s <= k.min(n - k) {
            schemes.push(Scheme::Pmds { s });
        }
        for scheme in schemes {
            let caps = scheme.capacities(&params);
            for state in enumerate_states(&scheme, &params, 1 << 16).unwrap() {
                if !decodable(&scheme, &params, &state).unwrap() {
                    continue;
                }
                for c in 0..caps.len() {
                    let mut next = state.0.clone();
                    if next[c] < caps[c] {
                        next[c] += 1;
                        prop_assert!(decodable(&scheme, &params, &CollectionState(next)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn bounds_never_exceed_expectations(n in 1u32..16, k in 1u32..16, m in 1u32..4, a in 1u32..4) {
        prop_assume!(k <= n && a <= m);
        let params = SystemParams::new(n, k, m, a).unwrap();
        let global = expected(&Scheme::GlobalMds, &params, 1 << 20).unwrap();
        let local = expected(&Scheme::LocalMds, &params, 1 << 20).unwrap();
        let multi = lower_bound_multi(&params).unwrap();
        prop_assert!(multi <= global && multi <= local);
        if a == 1 {
            let harm = lower_bound_harmonic(&params).unwrap();
            prop_assert!(lower_bound_simple(&params) <= harm);
            prop_assert!(harm <= global && harm <= local);
        }
    }

    #[test]
    fn global_multi_nondecreasing_in_files(n in 1u32..20, k in 1u32..20, m in 1u32..5) {
        prop_assume!(k <= n);
        let mut prev = ExactValue::zero();
        for a in 1..=m {
            let v = expected(&Scheme::GlobalMds, &SystemParams::new(n, k, m, a).unwrap(), 0).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }
}
