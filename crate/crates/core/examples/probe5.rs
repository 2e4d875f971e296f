use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use stirap_core::propagator::{linspace, IntegratorConfig};
use stirap_core::protocols::*;

fn main() {
    let cfg = IntegratorConfig::default();

    println!("fractional grid (deviation of p1 from 0.5):");
    for omega in [100.0, 150.0, 200.0] {
        for delay in [0.6, 0.8, 1.0, 1.1] {
            let r = run_fractional(omega, 1.0, delay, FRAC_PI_4, &cfg).unwrap();
            let dev = (r.scalar("p1").unwrap() - 0.5).abs();
            let ph = r.scalar("phase_deviation").unwrap();
            println!("  Ωτ={omega:5.0} d={delay:3.1}: |p1-0.5|={dev:.2e} phase_dev={ph:.2e}");
        }
    }

    println!("two-photon break (γ₂=1):");
    for d2 in [5.0, 10.0, 20.0, 30.0] {
        let mut params = StirapParams::ideal(50.0, 1.0, 1.1).with_gamma2(1.0);
        params.delta_two = d2;
        let r = run_stirap(&params, &cfg).unwrap();
        println!("  δτ={d2:4.0}: eff {:.4}", r.scalar("efficiency").unwrap());
    }

    println!("composite at Ωτ=100:");
    for n in [1usize, 2, 3] {
        let phases = vec![(0.0, 0.0); n];
        let r = run_composite(100.0, 1.0, 1.1, &phases, None, &cfg).unwrap();
        println!("  n={n}: residual {:.2e}", r.scalar("parity_residual").unwrap());
    }

    println!("low-intensity delay rows (max over delays in [-2,3]):");
    let delays = linspace(-2.0, 3.0, 21);
    for omega in [0.5, 1.0, 1.5, 2.0] {
        let base = StirapParams::ideal(omega, 1.0, 1.1);
        let map = delay_intensity_map(&base, &delays, &[1.0], &cfg).unwrap();
        let max = map.grid.iter().copied().fold(0.0, f64::max);
        println!("  Ωτ={omega:3.1}: max {max:.4}");
    }

    println!("tripod at peak 120:");
    let p = TripodGateParams {
        peak: 120.0,
        tau: 1.0,
        delay: 1.2,
        ratio_angle: FRAC_PI_4,
        control_phase: PI,
    };
    let r = run_tripod_gate(&p, &cfg).unwrap();
    println!("  {:?}", r.scalars);
    for phi in [0.0, 0.5 * PI, PI] {
        let p = TripodGateParams { control_phase: phi, ratio_angle: FRAC_PI_4, ..p };
        let r = run_tripod_gate(&p, &cfg).unwrap();
        let p1 = r.trajectory.as_ref().unwrap().final_populations()[0];
        println!("  φ={phi:.3}: P1={p1:.5} predict={:.5} leak={:.1e}", (phi / 2.0).cos().powi(2), r.scalar("leakage").unwrap());
    }
    let skew = TripodGateParams { ratio_angle: 0.6, control_phase: 1.1, ..p };
    let r = run_tripod_gate(&skew, &cfg).unwrap();
    println!("  skew: angle_dev {:.2e} unit {:.2e}", r.scalar("angle_deviation").unwrap(), r.scalar("unitarity_deviation").unwrap());

    println!("rotation gate at peak 140, continuity:");
    for alpha in [FRAC_PI_8, FRAC_PI_4 - 0.05, FRAC_PI_4, FRAC_PI_4 + 0.05, 1.2] {
        let p = RotationGateParams { alpha, peak: 140.0, tau: 1.0, delay: 1.2, relative_phase: 0.0 };
        let r = run_rotation_gate(&p, &cfg).unwrap();
        println!(
            "  α={alpha:.3}: angle_dev {:.2e} unit {:.2e} leak {:.2e}",
            r.scalar("angle_deviation").unwrap(),
            r.scalar("unitarity_deviation").unwrap(),
            r.scalar("leakage").unwrap()
        );
    }
}
