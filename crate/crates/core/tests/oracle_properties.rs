use fracint::exact::{exact_power_integral, rl_integral_oracle};
use fracint::quadrature::{trapezoid, QuadratureOptions};
use fracint::{FracOrder, FunctionSpec};
use proptest::prelude::*;

fn ord(a: f64) -> FracOrder<f64> {
    FracOrder::new(a).unwrap()
}

#[test]
fn power_rule_grid() {
    let opts = QuadratureOptions::default();
    for g in [1.0f64, 2.0, 3.0, 10.0] {
        let x = FunctionSpec::power(g);
        for alpha in [0.25, 0.5, 0.75] {
            for t in [0.25, 0.5, 1.0] {
                let exact = exact_power_integral(g, ord(alpha), t).unwrap();
                let got = rl_integral_oracle(&x, ord(alpha), 0.0, t, &opts).unwrap();
                assert!(
                    ((got - exact) / exact).abs() < 1e-7,
                    "γ={g} α={alpha} t={t}"
                );
            }
        }
    }
}

#[test]
fn order_two_is_iterated_integration() {
    // ∫_0^t ∫_0^s sin, by two trapezoid passes on a fine grid
    let opts = QuadratureOptions::default();
    let n = 20_001;
    let t: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let mut first = vec![0.0; n];
    for k in 1..n {
        first[k] = first[k - 1] + 0.5 * (t[k] - t[k - 1]) * (t[k].sin() + t[k - 1].sin());
    }
    let twice = trapezoid(&t, &first);
    let got = rl_integral_oracle(&FunctionSpec::sin(), ord(2.0), 0.0, 1.0, &opts).unwrap();
    assert!((got - twice).abs() < 1e-6, "{got} vs {twice}");
    assert!((got - (1.0 - 1f64.sin())).abs() < 1e-10);
}

#[test]
fn shifted_interval_matches_closed_form() {
    let opts = QuadratureOptions::default();
    for a in [-0.5, 0.25] {
        let got = rl_integral_oracle(&FunctionSpec::exp(), ord(0.4), a, a + 0.9, &opts).unwrap();
        let want = FunctionSpec::exp()
            .exact_left_integral(ord(0.4), a, a + 0.9)
            .unwrap()
            .unwrap();
        assert!((got - want).abs() < 1e-9 * want.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn oracle_is_linear(c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, alpha in 0.1f64..2.5, t in 0.1f64..1.5) {
        let opts = QuadratureOptions::default();
        let x = FunctionSpec::exp();
        let y = FunctionSpec::sin();
        let combo = FunctionSpec::custom(move |s: f64| c1 * s.exp() + c2 * s.sin(), 0, 1.0);
        let lhs = rl_integral_oracle(&combo, ord(alpha), 0.0, t, &opts).unwrap();
        let rhs = c1 * rl_integral_oracle(&x, ord(alpha), 0.0, t, &opts).unwrap()
            + c2 * rl_integral_oracle(&y, ord(alpha), 0.0, t, &opts).unwrap();
        let scale = (c1.abs() + c2.abs()) * rl_integral_oracle(&x, ord(alpha), 0.0, t, &opts).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * scale.max(1e-300));
    }
}
