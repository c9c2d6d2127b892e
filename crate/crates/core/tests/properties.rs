mod support;

use mvweibull::latent::{from_latent, to_latent, MixtureWeights};
use mvweibull::moments::correlation;
use mvweibull::ModelParams;
use proptest::prelude::*;

fn params(max_dim: usize) -> impl Strategy<Value = ModelParams> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            0.05f64..=1.0,
            prop::collection::vec(0.2f64..5.0, n),
            prop::collection::vec(0.3f64..4.0, n),
        )
            .prop_map(|(a, l, g)| ModelParams::new(a, l, g).unwrap())
    })
}

fn params_and_point(max_dim: usize) -> impl Strategy<Value = (ModelParams, Vec<f64>)> {
    params(max_dim).prop_flat_map(|p| {
        let n = p.dim();
        (Just(p), prop::collection::vec(0.05f64..3.0, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn survival_is_a_probability_and_decreasing((p, x) in params_and_point(5), bump in 0.01f64..1.0, k in 0usize..5) {
        let s = p.survival(&x).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        let mut y = x.clone();
        let k = k % p.dim();
        y[k] += bump;
        prop_assert!(p.survival(&y).unwrap() <= s);
    }

    #[test]
    fn survival_agrees_with_direct_formula((p, x) in params_and_point(5)) {
        let s = p.survival(&x).unwrap();
        let d = support::survival_direct(&p, &x);
        prop_assert!((s - d).abs() <= 1e-12 * d.max(1e-300) + 1e-300, "{s} vs {d}");
    }

    #[test]
    fn margins_are_weibull((p, x) in params_and_point(4), k in 0usize..4) {
        let k = k % p.dim();
        let mut y = vec![0.0; p.dim()];
        y[k] = x[k];
        let s = p.survival(&y).unwrap();
        let want = (-(x[k] / p.scales()[k]).powf(p.shapes()[k])).exp();
        prop_assert!((s - want).abs() <= 1e-13);
    }

    #[test]
    fn mixed_partials_are_nonnegative((p, x) in params_and_point(4), mask in 1u32..16) {
        let obs: Vec<usize> = (0..p.dim()).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!obs.is_empty());
        let v = p.mixed_partial_survival(&x, &obs).unwrap();
        prop_assert!(v >= 0.0 && v.is_finite());
    }

    #[test]
    fn log_pdf_is_log_of_pdf((p, x) in params_and_point(5)) {
        let lp = p.log_pdf(&x).unwrap();
        let f = p.pdf(&x).unwrap();
        prop_assert!(lp.is_finite());
        if f > 1e-300 {
            prop_assert!((f.ln() - lp).abs() <= 1e-10 * lp.abs().max(1.0));
        }
    }

    #[test]
    fn independence_factorizes((p, x) in params_and_point(4)) {
        let p = ModelParams::new(1.0, p.scales().to_vec(), p.shapes().to_vec()).unwrap();
        let product: f64 = (0..p.dim()).map(|i| p.marginal_pdf(i, x[i]).unwrap()).product();
        let f = p.pdf(&x).unwrap();
        prop_assert!((f - product).abs() <= 1e-10 * product.max(1e-300));
    }

    #[test]
    fn latent_round_trip((p, x) in params_and_point(6)) {
        let y = to_latent(&p, &x).unwrap();
        let sum: f64 = y.simplex().iter().sum();
        prop_assert!(y.residual() > 0.0);
        prop_assert!((y.residual() - (1.0 - sum)).abs() < 1e-12);
        let back = from_latent(&p, &y).unwrap();
        for (a, b) in back.iter().zip(&x) {
            prop_assert!((a - b).abs() <= 1e-9 * b);
        }
    }

    #[test]
    fn rescaling_moves_the_distribution((p, x) in params_and_point(4), c in 0.1f64..10.0) {
        let q = p.rescaled(&vec![c; p.dim()]).unwrap();
        let cx: Vec<f64> = x.iter().map(|v| v * c).collect();
        let a = p.survival(&x).unwrap();
        let b = q.survival(&cx).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        let fa = p.log_pdf(&x).unwrap();
        let fb = q.log_pdf(&cx).unwrap() + p.dim() as f64 * c.ln();
        prop_assert!((fa - fb).abs() <= 1e-9 * fa.abs().max(1.0));
    }

    #[test]
    fn correlation_is_scale_free_and_nonnegative(p in params(4), c in 0.1f64..10.0) {
        prop_assume!(p.dim() >= 2);
        let q = p.rescaled(&vec![c; p.dim()]).unwrap();
        let r = correlation(&p, 0, 1).unwrap();
        prop_assert!((-1e-12..=1.0).contains(&r));
        prop_assert!((r - correlation(&q, 0, 1).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn weights_form_a_distribution(n in 1usize..=20, alpha in 0.01f64..=1.0) {
        let w = MixtureWeights::new(n, alpha).unwrap();
        let sum: f64 = w.weights().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(w.weights().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn params_json_round_trip(p in params(6)) {
        let text = serde_json::to_string(&p).unwrap();
        let q: ModelParams = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(p, q);
    }
}
