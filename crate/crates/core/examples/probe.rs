use num_complex::Complex64 as C64;
use stirap_core::linkage::lambda_scheme;
use stirap_core::propagator::{propagate, transfer_efficiency, IntegratorConfig, Method};
use stirap_core::pulses::{counterintuitive_pair, PulseSchedule};

fn run(omega_tau: f64, delay: f64, gamma: f64, tight: bool) -> (f64, f64, f64) {
    let tau = 1.0;
    let scheme = lambda_scheme(0.0, 0.0, gamma).unwrap();
    let (p, s) = counterintuitive_pair(omega_tau, omega_tau, tau, delay).unwrap();
    let mut schedule = PulseSchedule::new();
    schedule.insert("P", p);
    schedule.insert("S", s);
    let half = delay / 2.0 + 6.0 * tau;
    let config = if tight {
        IntegratorConfig { rel_tol: 1e-13, abs_tol: 1e-15, ..Default::default() }
    } else {
        IntegratorConfig::default()
    };
    let psi0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let traj = propagate(&scheme, &schedule, -half, half, &psi0, &config).unwrap();
    (
        transfer_efficiency(&traj, 2),
        traj.peak_population(1),
        traj.final_loss().iter().sum(),
    )
}

fn main() {
    println!("gamma=1, omega_tau=50, scan delay:");
    for delay in [0.6, 0.8, 1.0, 1.1, 1.2, 1.5, 1.8, 2.2, 2.6, 3.0] {
        let (eff, p2, loss) = run(50.0, delay, 1.0, false);
        println!("  delay {delay:4.2}: eff {eff:.6}  peakP2 {p2:.3e}  loss {loss:.3e}");
    }
    println!("default vs tight tolerance at delay 1.1:");
    let a = run(50.0, 1.1, 1.0, false);
    let b = run(50.0, 1.1, 1.0, true);
    println!("  default: {a:?}");
    println!("  tight  : {b:?}");
    println!("gamma=0 (pure nonadiabatic residue):");
    let c = run(50.0, 1.1, 0.0, false);
    println!("  {c:?}");
    println!("omega_tau scan at delay 1.1, gamma=1:");
    for w in [30.0, 50.0, 80.0, 100.0, 150.0] {
        let (eff, p2, loss) = run(w, 1.1, 1.0, false);
        println!("  Ωτ {w:5.1}: eff {eff:.6}  peakP2 {p2:.3e}  loss {loss:.3e}");
    }
    // fixed-step cross-check
    let scheme = lambda_scheme(0.0, 0.0, 1.0).unwrap();
    let (p, s) = counterintuitive_pair(50.0, 50.0, 1.0, 1.1).unwrap();
    let mut schedule = PulseSchedule::new();
    schedule.insert("P", p);
    schedule.insert("S", s);
    let psi0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let traj = propagate(
        &scheme,
        &schedule,
        -6.55,
        6.55,
        &psi0,
        &IntegratorConfig { method: Method::FixedRk4 { step: 1e-4 }, ..Default::default() },
    )
    .unwrap();
    println!("fixed-step 1e-4: eff {:.8}", transfer_efficiency(&traj, 2));
}
