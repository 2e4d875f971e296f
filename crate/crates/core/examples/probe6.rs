use std::f64::consts::{FRAC_PI_4, PI};
use stirap_core::propagator::IntegratorConfig;
use stirap_core::protocols::*;

fn main() {
    let cfg = IntegratorConfig::default();
    let p = TripodGateParams {
        peak: 120.0,
        tau: 1.0,
        delay: 1.2,
        ratio_angle: FRAC_PI_4,
        control_phase: PI / 2.0,
    };
    let r = run_tripod_gate(&p, &cfg).unwrap();
    let traj = r.trajectory.as_ref().unwrap();
    println!("finals: {:?}", traj.final_populations());
    println!("populations along the way (t, P1, P2, P3, P4):");
    let n = traj.times.len();
    for i in (0..n).step_by(n / 25) {
        let t = traj.times[i];
        let p = &traj.populations[i];
        println!("  {t:7.2}  {:.4}  {:.4}  {:.4}  {:.4}", p[0], p[1], p[2], p[3]);
    }
}
