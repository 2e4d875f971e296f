use num_complex::Complex64 as C64;
use stirap_core::linkage::lambda_scheme;
use stirap_core::propagator::{propagate, transfer_efficiency, IntegratorConfig};
use stirap_core::pulses::{PulseSchedule, PulseShape};

#[derive(Clone, Copy)]
struct Convention {
    width_factor: f64, // gaussian width = width_factor * tau
    rabi_factor: f64,  // envelope peak = rabi_factor * omega_tau / tau
    gamma_factor: f64, // amplitude decay = gamma_factor * gamma_tau / tau
}

fn run(c: Convention, omega_tau: f64, delay_tau: f64, gamma_tau: f64, intuitive: bool) -> (f64, f64) {
    let tau = 1.0;
    let w = c.width_factor * tau;
    let peak = c.rabi_factor * omega_tau / tau;
    let gamma = c.gamma_factor * gamma_tau / tau;
    let delay = delay_tau * tau;
    let scheme = lambda_scheme(0.0, 0.0, gamma).unwrap();
    let mut schedule = PulseSchedule::new();
    let sgn = if intuitive { -1.0 } else { 1.0 };
    schedule.insert("P", PulseShape::gaussian(peak, sgn * delay / 2.0, w));
    schedule.insert("S", PulseShape::gaussian(peak, -sgn * delay / 2.0, w));
    let half = delay / 2.0 + 6.0 * w;
    let psi0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let traj =
        propagate(&scheme, &schedule, -half, half, &psi0, &IntegratorConfig::default()).unwrap();
    (transfer_efficiency(&traj, 2), traj.peak_population(1))
}

fn plateau(c: Convention, omega_tau: f64, gamma_tau: f64) -> f64 {
    let mut lo = f64::NAN;
    let mut hi = f64::NAN;
    let mut best = 0.0_f64;
    let mut inside = false;
    for i in 0..=90 {
        let d = 0.1 + 3.4 * i as f64 / 90.0;
        let (eff, _) = run(c, omega_tau, d, gamma_tau, false);
        if eff >= 0.99 {
            if !inside {
                lo = d;
                inside = true;
            }
            hi = d;
            best = best.max(hi - lo);
        } else {
            inside = false;
        }
    }
    best
}

fn main() {
    let mut combos = Vec::new();
    for &wf in &[1.0, std::f64::consts::SQRT_2] {
        for &rf in &[1.0, 2.0] {
            for &gf in &[1.0, 0.5] {
                combos.push(Convention { width_factor: wf, rabi_factor: rf, gamma_factor: gf });
            }
        }
    }
    println!("w/τ  Ω×   γ×   | c4: η(50,1.1,γ1)  P2      plateau | c5: η_ci(γ20) η_int(γ20) | c7: η(2)");
    for c in combos {
        let (e4, p4) = run(c, 50.0, 1.1, 1.0, false);
        let pl = plateau(c, 50.0, 1.0);
        let (e5c, _) = run(c, 50.0, 1.1, 20.0, false);
        let (e5i, _) = run(c, 50.0, 1.1, 20.0, true);
        let (e7, _) = run(c, 2.0, 1.1, 0.0, false);
        let ok4 = e4 >= 0.999 && p4 <= 1e-3 && pl >= 1.0;
        let ok5 = e5c >= 0.9 && e5i <= 0.2;
        let ok7 = e7 < 0.9;
        println!(
            "{:.2} {:.0}  {:.1}  |    {:.5}     {:.2e}  {:.2}    |     {:.4}     {:.4}    |  {:.4}   {}{}{}",
            c.width_factor, c.rabi_factor, c.gamma_factor, e4, p4, pl, e5c, e5i, e7,
            if ok4 { "C4" } else { "--" },
            if ok5 { "C5" } else { "--" },
            if ok7 { "C7" } else { "--" },
        );
    }
}
