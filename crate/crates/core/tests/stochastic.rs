use proptest::prelude::*;
use tline_core::simulator::RunConfig;
use tline_core::stochastic::*;

fn grid(k: usize, n: usize, means: &[f64], f: f64) -> CollocationGrid<f64> {
    let dims = (0..k)
        .map(|j| RandomParam::new(ParamId::ALL[j], means[j % means.len()], f).unwrap())
        .collect();
    CollocationGrid::new(dims, n).unwrap()
}

fn eval(g: &CollocationGrid<f64>, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    (0..g.len()).map(|r| f(&g.point(r))).collect()
}

/// `∫_a^b x^p dx / (b - a)`.
fn uniform_moment(a: f64, b: f64, p: i32) -> f64 {
    (b.powi(p + 1) - a.powi(p + 1)) / ((p + 1) as f64 * (b - a))
}

proptest! {
    #[test]
    fn weights_normalize(k in 1usize..=6, n in 1usize..=4, m in 0.5f64..10.0, f in 0.01f64..0.9) {
        let g = grid(k, n, &[m], f);
        let total: f64 = (0..g.len()).map(|r| g.weight(r)).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!((expectation(&g, &vec![1.0; g.len()]).unwrap() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn polynomial_moments_exact(n in 1usize..=6, m in 0.5f64..3.0, f in 0.05f64..0.9, c in -2.0f64..2.0) {
        let g = grid(2, n, &[m, 1.5 * m], f);
        let (a0, b0) = g.dims()[0].bounds();
        let (a1, b1) = g.dims()[1].bounds();
        let p = (2 * n - 1) as i32;
        // separable product, degree 2n-1 in each dimension
        let q = eval(&g, |x| x[0].powi(p) * (c + x[1].powi(p)));
        let exact = uniform_moment(a0, b0, p) * (c + uniform_moment(a1, b1, p));
        let e = expectation(&g, &q).unwrap();
        prop_assert!((e - exact).abs() <= 1e-12 * exact.abs().max(1.0));
        // second moment of a degree n-1 polynomial stays within 2n-1
        let d = (n as i32 - 1).max(0);
        let q = eval(&g, |x| x[0].powi(d) + c);
        let mean = uniform_moment(a0, b0, d) + c;
        let var = uniform_moment(a0, b0, 2 * d) - uniform_moment(a0, b0, d).powi(2);
        prop_assert!((expectation(&g, &q).unwrap() - mean).abs() <= 1e-12 * mean.abs().max(1.0));
        prop_assert!((variance(&g, &q, mean).unwrap() - var).abs() <= 1e-12 * var.abs().max(1.0));
    }

    #[test]
    fn sobol_indices_bounded(
        k in 1usize..=3,
        coef in prop::collection::vec(-3.0f64..3.0, 6),
    ) {
        let g = grid(k, 4, &[1.0, 2.0, 3.0], 0.3);
        let q = eval(&g, |x| {
            let mut v = 0.0;
            for (j, xj) in x.iter().enumerate() {
                v += coef[j] * xj * xj + coef[j + 3] * xj;
            }
            v + coef[0] * x.iter().product::<f64>()
        });
        let s = sobol_first_order(&g, &q).unwrap();
        if s.iter().all(Option::is_some) {
            let s: Vec<f64> = s.into_iter().map(Option::unwrap).collect();
            prop_assert!(s.iter().all(|&v| (0.0..=1.0 + 1e-10).contains(&v)));
            prop_assert!(s.iter().sum::<f64>() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn pf_monotone_and_bounded(fail_steps in prop::collection::vec(prop::option::of(0usize..20), 9)) {
        let g = grid(2, 3, &[1.0], 0.1);
        let h: Vec<Vec<u8>> = fail_steps
            .iter()
            .map(|f| (0..20).map(|t| u8::from(f.is_some_and(|k| t >= k))).collect())
            .collect();
        let pf = probability_of_failure::<f64, _>(&g, &h).unwrap();
        prop_assert!(pf.iter().all(|p| (0.0..=1.0).contains(p)));
        prop_assert!(pf.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn relative_error_matches_direct_norm(
        v in prop::collection::vec(-10.0f64..10.0, 1..30),
        noise in prop::collection::vec(-1.0f64..1.0, 30),
    ) {
        prop_assume!(v.iter().any(|x| x.abs() > 1e-3));
        let w: Vec<f64> = v.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let num: f64 = noise[..v.len()].iter().map(|b| b * b).sum::<f64>().sqrt();
        let den: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let eps = relative_error(&w, &v).unwrap();
        prop_assert!((eps - num / den).abs() <= 1e-12 * (1.0 + num / den));
    }
}

#[test]
fn step_function_pf_matches_quantile() {
    // fails iff ξ > c, ξ uniform on [90, 110]
    let c = 103.0;
    let exact = (110.0 - c) / 20.0;
    for n in [5, 10, 20, 40, 80] {
        let g = grid(1, n, &[100.0], 0.1);
        let h: Vec<Vec<u8>> = (0..n).map(|r| vec![u8::from(g.point(r)[0] > c)]).collect();
        let pf = probability_of_failure::<f64, _>(&g, &h).unwrap()[0];
        let err = (pf - exact).abs();
        if n == 5 {
            assert!(err <= 0.05, "n=5: {pf} vs {exact}");
        }
        // a step integrand is off by at most the mass of the node it cuts
        let bound = (0..n).map(|i| g.node_mass(i)).fold(0.0, f64::max);
        assert!(err <= bound, "n={n}: {err} > {bound}");
    }
}

#[test]
fn collocation_ensemble_on_desk_model() {
    let mut base = RunConfig::<f64>::desk();
    base.n_steps = 300;
    let dims = vec![
        RandomParam::around(ParamId::CurrentBase, &base).unwrap(),
        RandomParam::around(ParamId::WindBase, &base).unwrap(),
    ];
    let e = StochasticConfig::pcm(dims, 3).run(&base, 2).unwrap();
    assert_eq!(e.len(), 9);
    let min_fail = e.min_failure_time();
    match min_fail {
        Some(t) => assert!((e.horizon_time() - t).abs() < 1e-12),
        None => assert_eq!(e.horizon, 300),
    }
    assert_eq!(e.times.len(), e.horizon);
    assert_eq!(e.pf.len(), 300);
    assert!(e.pf.windows(2).all(|w| w[1] >= w[0]));
    let sobol = e.sobol.as_ref().unwrap();
    for t in 0..e.horizon {
        let s: f64 = sobol.iter().map(|s| s[t].unwrap()).sum();
        assert!(s <= 1.0 + 1e-10);
    }
    // base current drives the temperature variance
    let last = e.horizon - 1;
    assert!(sobol[0][last].unwrap() > sobol[1][last].unwrap());
    for f in &e.fields {
        assert!(f.step <= e.horizon);
        assert_eq!(f.mean_theta.len(), e.x.len());
    }
    // worker count does not change any bit of the result
    let again = StochasticConfig::pcm(e.params.clone(), 3).run(&base, 1).unwrap();
    assert_eq!(again, e);
}

#[test]
fn pcm_agrees_with_monte_carlo_on_desk_model() {
    let mut base = RunConfig::<f64>::desk();
    base.n_steps = 50;
    base.snapshot_every = 0;
    let dims = vec![
        RandomParam::around(ParamId::CurrentBase, &base).unwrap(),
        RandomParam::around(ParamId::WindBase, &base).unwrap(),
    ];
    let pcm = StochasticConfig::pcm(dims.clone(), 5).run(&base, 0).unwrap();
    let mc = StochasticConfig::monte_carlo(dims, 10_000, 2024).run(&base, 0).unwrap();
    assert_eq!(pcm.horizon, 50);
    assert_eq!(mc.horizon, 50);
    let k = 49;
    let se = mc.std_theta_max[k] / (mc.len() as f64).sqrt();
    let diff = (pcm.mean_theta_max[k] - mc.mean_theta_max[k]).abs();
    assert!(diff <= 3.0 * se, "PCM {} vs MC {} (se {se})", pcm.mean_theta_max[k], mc.mean_theta_max[k]);
}

#[test]
fn scenario_parameters_need_their_scenario() {
    let base = RunConfig::<f64>::desk();
    assert!(RandomParam::around(ParamId::WindMax, &base).is_err());
    let s2 = RunConfig::<f64>::desk_scenario(2).unwrap();
    let p = RandomParam::around(ParamId::WindMax, &s2).unwrap();
    assert_eq!(p.mean, 100.0);
}
