use num_complex::Complex;
use relaybeam::model::{secrecy_rate, Diagnostics};
use relaybeam::{solve, Budget, Instance, Instance32, Params, Scenario, Tolerances};

fn scenario(budget: Budget<f64>) -> Scenario<f64> {
    let instance = Instance::new(
        Complex::new(0.4, 0.1),
        vec![Complex::new(1.0, -0.3), Complex::new(0.2, 0.8), Complex::new(-0.6, -0.6)],
        vec![Complex::new(0.5, 0.5), Complex::new(-1.1, 0.2), Complex::new(0.3, -0.9)],
        1.0,
    )
    .unwrap();
    Scenario { instance, params: Params { p1: 3.0, gamma: 0.8, budget } }
}

#[test]
fn dispatch_follows_budget_kind() {
    let tol = Tolerances::default();
    let t = solve(&scenario(Budget::Total { p_tot: 5.3 }), &tol).unwrap();
    assert!(matches!(t.diagnostics, Diagnostics::Total(_)));
    assert!((t.second_phase_power - 5.3).abs() < 1e-9);
    let i = solve(&scenario(Budget::Individual { p_s: 5.0, p_i: vec![0.1; 3] }), &tol).unwrap();
    assert!(matches!(i.diagnostics, Diagnostics::Individual(_)));
    assert!(t.c_d >= i.c_d - 1e-9);
    assert_eq!(t.alpha, i.alpha);
}

#[test]
fn scenario_json_round_trip_solves_identically() {
    let s = scenario(Budget::Individual { p_s: 5.0, p_i: vec![0.2, 0.05, 0.1] });
    let back = Scenario::<f64>::from_json(&s.to_json().unwrap()).unwrap();
    assert_eq!(back, s);
    let tol = Tolerances::default();
    assert_eq!(solve(&s, &tol).unwrap(), solve(&back, &tol).unwrap());
}

#[test]
fn single_precision_tracks_double() {
    let s = scenario(Budget::Total { p_tot: 5.3 });
    let s32 = Scenario { instance: s.instance.cast::<f32>(), params: relaybeam::Params32 { p1: 3.0, gamma: 0.8, budget: Budget::Total { p_tot: 5.3 } } };
    let _: &Instance32 = &s32.instance;
    let a = solve(&s, &Tolerances::default()).unwrap();
    let b = solve(&s32, &Tolerances::single_precision()).unwrap();
    assert!((a.c_d - b.c_d as f64).abs() < 1e-5);
}

#[test]
fn threshold_keeps_relays_below_gamma() {
    let s = scenario(Budget::Total { p_tot: 5.3 });
    let sol = solve(&s, &Tolerances::default()).unwrap();
    let sr = secrecy_rate(&s.instance, s.params.p1, sol.alpha, &sol.w).unwrap();
    let cap_relay = 0.5 * (1.0 + s.params.gamma).log2();
    assert!((sr - (sol.c_d - cap_relay)).abs() < 1e-12, "{sr}");
}
