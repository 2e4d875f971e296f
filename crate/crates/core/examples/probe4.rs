use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use stirap_core::propagator::{linspace, IntegratorConfig};
use stirap_core::protocols::*;

fn main() {
    let cfg = IntegratorConfig::default();

    // fractional at theta = pi/4
    let r = run_fractional(50.0, 1.0, 1.1, FRAC_PI_4, &cfg).unwrap();
    println!("fractional: p1 {:?} p3 {:?} phase_dev {:?}",
        r.scalar("p1"), r.scalar("p3"), r.scalar("phase_deviation"));

    // broken two-photon resonance
    let mut params = StirapParams::ideal(50.0, 1.0, 1.1).with_gamma2(1.0);
    params.delta_two = 5.0;
    let r = run_stirap(&params, &cfg).unwrap();
    println!("delta_two=5, gamma2=1: eff {:?}", r.scalar("efficiency"));
    params.gamma2 = 0.0;
    let r = run_stirap(&params, &cfg).unwrap();
    println!("delta_two=5, gamma2=0: eff {:?}", r.scalar("efficiency"));

    // bstirap
    let params = StirapParams { delta: 2.0, gamma2: 20.0, ..StirapParams::ideal(50.0, 1.0, 1.1) };
    let r = run_bstirap(&params, &cfg).unwrap();
    println!("bstirap delta=2: undamped {:?} damped {:?}",
        r.scalar("efficiency_undamped"), r.scalar("efficiency"));
    let params0 = StirapParams { delta: 0.0, ..params };
    let r = run_bstirap(&params0, &cfg).unwrap();
    println!("bstirap delta=0: undamped {:?} damped {:?}",
        r.scalar("efficiency_undamped"), r.scalar("efficiency"));

    // composite residuals
    for n in [1usize, 2, 3] {
        let phases = vec![(0.0, 0.0); n];
        let r = run_composite(50.0, 1.0, 1.1, &phases, None, &cfg).unwrap();
        println!("composite n={n}: p1 {:.6} p3 {:.6} p2 {:?} residual {:.2e}",
            r.scalar("p1_final").unwrap(), r.scalar("p3_final").unwrap(),
            r.trajectory.as_ref().map(|t| t.final_populations()[1]),
            r.scalar("parity_residual").unwrap());
    }
    // composite with tighter tolerance to see if it's integration error
    let tight = IntegratorConfig { rel_tol: 1e-12, abs_tol: 1e-14, ..cfg };
    let r = run_composite(50.0, 1.0, 1.1, &vec![(0.0, 0.0); 3], None, &tight).unwrap();
    println!("composite n=3 tight: residual {:.2e}", r.scalar("parity_residual").unwrap());
    // wider spacing
    let r = run_composite(50.0, 1.0, 1.1, &vec![(0.0, 0.0); 3], Some(16.0), &cfg).unwrap();
    println!("composite n=3 wide spacing: residual {:.2e}", r.scalar("parity_residual").unwrap());
    // single pair residual breakdown
    let r = run_composite(50.0, 1.0, 1.1, &[(0.0, 0.0)], None, &cfg).unwrap();
    let t = r.trajectory.as_ref().unwrap();
    println!("single pair finals: {:?}", t.final_populations());

    // intensity map row0 (scale 2 => omega tau = 2)
    let base = StirapParams::ideal(1.0, 1.0, 1.1);
    let delays = linspace(-2.0, 3.0, 21);
    let map = delay_intensity_map(&base, &delays, &[2.0, 100.0], &cfg).unwrap();
    let row0: Vec<f64> = map.row(0).to_vec();
    println!("row0 (Ωτ=2) max {:.4}", row0.iter().copied().fold(0.0, f64::max));
    println!("row0: {:?}", row0.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    let high = plateau_width(&delays, map.row(1), 0.9);
    println!("row1 (Ωτ=100) plateau(0.9) {high:.2}");

    // rotation gate leakage vs peak
    for peak in [60.0, 100.0, 140.0] {
        for alpha in [FRAC_PI_8, FRAC_PI_4] {
            let p = RotationGateParams { alpha, peak, tau: 1.0, delay: 1.2, relative_phase: 0.0 };
            let r = run_rotation_gate(&p, &cfg).unwrap();
            println!(
                "rot gate peak={peak} α={alpha:.3}: angle_dev {:.2e} unit_dev {:.2e} leak {:.2e} quanta {}",
                r.scalar("angle_deviation").unwrap(),
                r.scalar("unitarity_deviation").unwrap(),
                r.scalar("leakage").unwrap(),
                r.scalar("area_quanta").unwrap()
            );
        }
    }

    // tripod after the fix
    let p = TripodGateParams { peak: 60.0, tau: 1.0, delay: 1.2, ratio_angle: FRAC_PI_4, control_phase: std::f64::consts::PI };
    let r = run_tripod_gate(&p, &cfg).unwrap();
    println!("tripod: {:?}", r.scalars);
}
