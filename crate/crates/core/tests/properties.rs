use bumpforge::analysis::{fit_exp_law, fit_power_law};
use bumpforge::fmt::g17;
use bumpforge::{build_f, build_g, solve_moment_system, verify_moments, NodeScheme, QuadConfig};
use proptest::prelude::*;

fn scheme(k: u8) -> NodeScheme {
    match k % 3 {
        0 => NodeScheme::Optimal { lo: 0.0 },
        1 => NodeScheme::Equidistant { lo: 0.0 },
        _ => NodeScheme::Chebyshev,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn doubling_quadrature_is_stable(n in 1usize..=15, k in 0u8..3, r in 0.0f64..1.3) {
        let m = solve_moment_system(&scheme(k).nodes(n).unwrap()).unwrap();
        let b = build_f(build_g(m));
        let fine = b.clone().with_quad(QuadConfig::default().doubled());
        prop_assert!((b.eval_f(r) - fine.eval_f(r)).abs() < 1e-8);
        prop_assert!((b.eval_f_prime(r) - fine.eval_f_prime(r)).abs() < 1e-8);
    }

    #[test]
    fn evaluation_is_deterministic(n in 1usize..=10, r in 0.0f64..1.0) {
        let make = || build_f(build_g(solve_moment_system(&NodeScheme::Optimal { lo: 0.0 }.nodes(n).unwrap()).unwrap()));
        prop_assert_eq!(make().eval_f(r).to_bits(), make().eval_f(r).to_bits());
    }

    #[test]
    fn profile_is_even_and_vanishes_outside(n in 1usize..=12, s in 0.0f64..2.0) {
        let g = build_g(solve_moment_system(&NodeScheme::Chebyshev.nodes(n).unwrap()).unwrap());
        prop_assert_eq!(g.eval(s), g.eval(-s));
        if s >= 1.0 {
            prop_assert_eq!(g.eval(s), 0.0);
        }
    }

    #[test]
    fn moments_of_random_nodes_cancel(mut pts in prop::collection::vec(0.01f64..0.99, 1..6)) {
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        pts.insert(0, 0.0);
        pts.push(1.0);
        let nodes = bumpforge::NodeSet::new(NodeScheme::Custom, pts).unwrap();
        let m = solve_moment_system(&nodes).unwrap();
        let res = verify_moments(&m).iter().fold(0.0f64, |a, r| a.max(r.abs()));
        prop_assert!(res <= 1e-8 * m.gamma(), "residual {} gamma {}", res, m.gamma());
    }

    #[test]
    fn power_law_recovered(c in 0.1f64..10.0, p in -2.0f64..2.0) {
        let xs = [1.0f64, 2.0, 3.5, 7.0, 11.0];
        let ys: Vec<f64> = xs.iter().map(|x| c * x.powf(p)).collect();
        let law = fit_power_law(&xs, &ys).unwrap();
        prop_assert!((law.exponent - p).abs() < 1e-10 && (law.coeff - c).abs() < 1e-9 * c);
    }

    #[test]
    fn exp_law_recovered(a in -5.0f64..5.0, b in -1.0f64..1.0) {
        let xs = [3.0f64, 5.0, 7.0, 9.0, 11.0];
        let ys: Vec<f64> = xs.iter().map(|x| (a + b * x).exp()).collect();
        let law = fit_exp_law(&xs, &ys).unwrap();
        prop_assert!((law.slope - b).abs() < 1e-10 && (law.intercept - a).abs() < 1e-9);
    }

    #[test]
    fn g17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(g17(x).parse::<f64>().unwrap(), x);
    }
}
