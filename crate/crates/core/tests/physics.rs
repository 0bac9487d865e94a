use proptest::prelude::*;
use tline_core::environment::{LoadParams, LoadSchedule, SagChain, Scenario};
use tline_core::mesh::Mesh1D;
use tline_core::physics::{build_thermal, build_voltage, element_current, MaterialParams};

fn chain() -> SagChain<f64> {
    let area = std::f64::consts::PI * 0.04 * 0.04 / 4.0;
    SagChain::new(200.0, 40e3, 2700.0 * 9.80665 * area, 23e-6, 288.0, 0.04)
}

proptest! {
    #[test]
    fn hotter_conductor_sags_and_slackens(t in 260.0f64..380.0, dt in 0.5f64..40.0, wind in 0.5f64..30.0) {
        let c = chain();
        prop_assert!(c.sag_at(t + dt).unwrap() > c.sag_at(t).unwrap());
        prop_assert!(c.tension_at(t + dt, wind).unwrap() < c.tension_at(t, wind).unwrap());
        prop_assert!(c.tension_at(t, wind * 1.5).unwrap() >= c.tension_at(t, wind).unwrap());
    }

    #[test]
    fn normal_loads_repeat_every_year(step in 0usize..2000, years in 1usize..5) {
        let s = LoadSchedule::new(LoadParams::<f64>::reference(), Scenario::Normal, 0.01);
        let a = s.at_step(step);
        let b = s.at_step(step + years * s.steps_per_year());
        prop_assert_eq!(a.theta_air, b.theta_air);
        prop_assert_eq!(a.wind_speed, b.wind_speed);
        prop_assert_eq!(a.current, b.current);
        prop_assert!(a.current < 0.0);
    }

    #[test]
    fn area_reduction_is_symmetric_and_deepest_at_midspan(n in 1usize..100, a_sigma in 0.6f64..50.0) {
        let mesh = Mesh1D::build(200.0, 2 * n, 1.2566e-3, a_sigma).unwrap();
        let mid = mesh.mid_node();
        prop_assert!(mesh.area.iter().all(|&a| a > 0.0 && a <= 1.2566e-3));
        for i in 0..mesh.n_nodes() {
            let j = mesh.n_nodes() - 1 - i;
            prop_assert!((mesh.area[i] - mesh.area[j]).abs() <= 1e-15);
            prop_assert!(mesh.area[mid] <= mesh.area[i]);
        }
    }

    /// Linear elements with a consistent cooling term keep the discrete
    /// maximum principle while `h² c s / (k A) <= 6`.
    #[test]
    fn joule_heating_never_cools_below_air(
        slope in prop::collection::vec(0.0f64..0.05, 40),
        cooling in 1.0f64..40.0,
        air in 250.0f64..320.0,
    ) {
        let n_el = 400;
        let mesh = Mesh1D::uniform(200.0, n_el, 1.2566e-3).unwrap();
        let p = MaterialParams::<f64>::aluminium();
        let h = mesh.element_len(0);
        let ratio = h * h * cooling * mesh.surf_per_len[0] / (p.thermal_conductivity * mesh.area[0]);
        prop_assert!(ratio <= 6.0);
        let n = mesh.n_nodes();
        let mut v = vec![0.0; n];
        for e in 0..n_el {
            v[e + 1] = v[e] + slope[e / 10] * h;
        }
        let theta = build_thermal(&mesh, &vec![0.0; n], &v, &vec![air; n], cooling, air, &p)
            .unwrap()
            .solve()
            .unwrap();
        let lo = theta.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert!(lo >= air - 1e-9 * air, "min {} vs air {}", lo, air);
    }

    #[test]
    fn current_is_conserved(
        phi in prop::collection::vec(0.0f64..0.9, 31),
        current in 10.0f64..3000.0,
        warm in 0.0f64..60.0,
    ) {
        let mesh = Mesh1D::build(200.0, 30, 1.2566e-3, 3.0).unwrap();
        let p = MaterialParams::<f64>::aluminium();
        let theta: Vec<f64> = mesh.node_x.iter().map(|x| 290.0 + warm * x / 200.0).collect();
        let v = build_voltage(&mesh, &phi, &theta, -current, &p).unwrap().solve().unwrap();
        for j in element_current(&mesh, &phi, &theta, &v, &p).unwrap() {
            prop_assert!((j - current).abs() <= 1e-8 * current);
        }
    }
}
