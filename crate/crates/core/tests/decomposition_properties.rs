use fracint::decomposition::{
    approx_analytic_series, approx_left, binomial_truncated_form, coeff_a, tail_a, tail_b,
    truncation_bound, CoefficientSet, ExpansionParams,
};
use fracint::exact::{exact_power_integral, rl_integral_oracle};
use fracint::quadrature::QuadratureOptions;
use fracint::{FracOrder, FunctionSpec};

fn ord(a: f64) -> FracOrder<f64> {
    FracOrder::new(a).unwrap()
}

#[test]
fn tails_depend_on_the_gap_only() {
    for gap in 0..5 {
        for i in 0..3 {
            let reference = tail_a(ord(0.5), ExpansionParams::new(3, 3 + gap).unwrap(), i).unwrap();
            for n in 3..7 {
                let p = ExpansionParams::new(n, n + gap).unwrap();
                assert_eq!(tail_a(ord(0.5), p, i).unwrap(), reference);
                assert!((coeff_a(ord(0.5), p, i).unwrap() + reference).abs() < 1e-12);
            }
        }
        let b = tail_b(ord(0.5), ExpansionParams::new(2, 2 + gap).unwrap()).unwrap();
        assert_eq!(
            b,
            tail_b(ord(0.5), ExpansionParams::new(5, 5 + gap).unwrap()).unwrap()
        );
    }
}

#[test]
fn error_within_tail_envelope() {
    // I^α x - approx = Σ tail_A_i τ^{α+i} x^(i)(t) + (dropped B terms), and the
    // dropped moments are bounded by max|x|
    let opts = QuadratureOptions::default();
    for x in [
        FunctionSpec::power(3.0),
        FunctionSpec::exp(),
        FunctionSpec::sin(),
    ] {
        for alpha in [0.3, 0.5, 0.7] {
            for n in 1..=3 {
                for big in n..=n + 5 {
                    let p = ExpansionParams::new(n, big).unwrap();
                    let set = CoefficientSet::left(ord(alpha), p).unwrap();
                    for t in [0.5, 1.0] {
                        let oracle = rl_integral_oracle(&x, ord(alpha), 0.0, t, &opts).unwrap();
                        let err = (oracle - approx_left(&x, &set, 0.0, t).unwrap()).abs();
                        let mut envelope = tail_b(ord(alpha), p).unwrap().abs()
                            * t.powf(alpha)
                            * x.max_abs_derivative(0, 0.0, t).unwrap();
                        for i in 0..n {
                            envelope += tail_a(ord(alpha), p, i).unwrap().abs()
                                * t.powf(alpha + i as f64)
                                * x.derivative(i, t).unwrap().abs();
                        }
                        assert!(
                            err <= envelope + 1e-9,
                            "{x:?} α={alpha} n={n} N={big} t={t}: {err} > {envelope}"
                        );

                        let form =
                            binomial_truncated_form(&x, ord(alpha), p, 0.0, t, &opts).unwrap();
                        let bound = truncation_bound(&x, ord(alpha), p, 0.0, t).unwrap();
                        assert!((oracle - form).abs() <= bound + 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn analytic_series_exact_for_polynomials() {
    for g in [0.0f64, 1.0, 2.0, 3.0, 5.0] {
        let x = FunctionSpec::power(g);
        for terms in g as usize..=g as usize + 2 {
            for t in [0.3, 1.0, 1.7] {
                let got = approx_analytic_series(&x, ord(0.5), terms, 0.0, t).unwrap();
                let want = exact_power_integral(g, ord(0.5), t).unwrap();
                assert!(((got - want) / want).abs() < 1e-12, "γ={g} N={terms} t={t}");
            }
        }
    }
}

#[test]
fn constant_with_one_derivative_is_bounded_by_b_tail() {
    // n = 1 and x constant: the bound is zero and the only error is the B tail
    let x = FunctionSpec::power(0.0).scaled(2.0);
    let p = ExpansionParams::new(1, 4).unwrap();
    assert_eq!(truncation_bound(&x, ord(0.5), p, 0.0, 1.0).unwrap(), 0.0);
    let opts = QuadratureOptions::default();
    let form = binomial_truncated_form(&x, ord(0.5), p, 0.0, 1.0, &opts).unwrap();
    let oracle = rl_integral_oracle(&x, ord(0.5), 0.0, 1.0, &opts).unwrap();
    assert!((form - oracle).abs() < 1e-12);
}
