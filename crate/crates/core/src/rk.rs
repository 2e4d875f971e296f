//! Runge-Kutta integrators over complex state vectors: the adaptive embedded
//! Dormand-Prince 5(4) pair with dense output, and a fixed-step classical RK4
//! retained as a cross-check oracle.

use num_complex::Complex64 as C64;

/// Dormand-Prince tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
/// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
/// Dense-output weights.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Clone, Copy, Debug, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug)]
pub enum RkError<E> {
    /// The controller drove the step size below representable resolution;
    /// carries the time at which it happened.
    StepUnderflow { t: f64 },
    Rhs(E),
}

fn axpy(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &[C64])]) {
    for i in 0..y.len() {
        let mut acc = y[i];
        for (w, k) in terms {
            acc += *w * h * k[i];
        }
        out[i] = acc;
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1`, delivering dense-output samples
/// at the (sorted, within [t0, t1]) `sample_times` through `on_sample`.
#[allow(clippy::too_many_arguments)]
pub fn dopri5<E>(
    mut rhs: impl FnMut(f64, &[C64], &mut [C64]) -> Result<(), E>,
    t0: f64,
    t1: f64,
    y0: &[C64],
    rtol: f64,
    atol: f64,
    max_step: f64,
    sample_times: &[f64],
    mut on_sample: impl FnMut(usize, f64, &[C64]),
) -> Result<StepStats, RkError<E>> {
    let n = y0.len();
    let span = t1 - t0;
    let mut stats = StepStats::default();

    let mut y = y0.to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut k5 = k1.clone();
    let mut k6 = k1.clone();
    let mut k7 = k1.clone();
    let mut ytmp = k1.clone();
    let mut ynew = k1.clone();
    let mut interp = k1.clone();

    let mut next_sample = 0;
    while next_sample < sample_times.len() && sample_times[next_sample] <= t0 {
        on_sample(next_sample, t0, &y);
        next_sample += 1;
    }

    let mut t = t0;
    let mut h = (span * 1e-3).min(max_step);
    // FSAL: k1 always holds f(t, y) — seeded here, then recycled from k7 on
    // acceptance and untouched on rejection
    rhs(t, &y, &mut k1).map_err(RkError::Rhs)?;

    while t < t1 {
        h = h.min(t1 - t).min(max_step);
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(RkError::StepUnderflow { t });
        }

        axpy(&mut ytmp, &y, h, &[(A21, &k1)]);
        rhs(t + h / 5.0, &ytmp, &mut k2).map_err(RkError::Rhs)?;
        axpy(&mut ytmp, &y, h, &[(A31, &k1), (A32, &k2)]);
        rhs(t + 3.0 * h / 10.0, &ytmp, &mut k3).map_err(RkError::Rhs)?;
        axpy(&mut ytmp, &y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        rhs(t + 4.0 * h / 5.0, &ytmp, &mut k4).map_err(RkError::Rhs)?;
        axpy(&mut ytmp, &y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        rhs(t + 8.0 * h / 9.0, &ytmp, &mut k5).map_err(RkError::Rhs)?;
        axpy(&mut ytmp, &y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        rhs(t + h, &ytmp, &mut k6).map_err(RkError::Rhs)?;
        axpy(&mut ynew, &y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        rhs(t + h, &ynew, &mut k7).map_err(RkError::Rhs)?;

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = atol + rtol * y[i].norm().max(ynew[i].norm());
            let r = e.norm() / scale;
            err_sq += r * r;
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            stats.accepted += 1;
            while next_sample < sample_times.len() && sample_times[next_sample] <= t + h {
                let ts = sample_times[next_sample];
                let theta = ((ts - t) / h).clamp(0.0, 1.0);
                dense_eval(&y, &ynew, &k1, &k3, &k4, &k5, &k6, &k7, h, theta, &mut interp);
                on_sample(next_sample, ts, &interp);
                next_sample += 1;
            }
            t += h;
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7);
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }

    // flush any samples pinned to t1 by roundoff
    while next_sample < sample_times.len() {
        on_sample(next_sample, t1, &y);
        next_sample += 1;
    }
    Ok(stats)
}

/// Dense interpolation inside an accepted step, per the standard continuous
/// extension of the Dormand-Prince pair.
#[allow(clippy::too_many_arguments)]
fn dense_eval(
    y0: &[C64],
    y1: &[C64],
    k1: &[C64],
    k3: &[C64],
    k4: &[C64],
    k5: &[C64],
    k6: &[C64],
    k7: &[C64],
    h: f64,
    theta: f64,
    out: &mut [C64],
) {
    for i in 0..y0.len() {
        let ydiff = y1[i] - y0[i];
        let bspl = h * k1[i] - ydiff;
        let rcont4 = ydiff - h * k7[i] - bspl;
        let rcont5 = h
            * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        out[i] = y0[i]
            + theta
                * (ydiff + (1.0 - theta) * (bspl + theta * (rcont4 + (1.0 - theta) * rcont5)));
    }
}

/// Classical fixed-step RK4, landing exactly on every sample time. The step
/// within each sampling interval is the largest uniform step not exceeding
/// `step`.
pub fn rk4_fixed<E>(
    mut rhs: impl FnMut(f64, &[C64], &mut [C64]) -> Result<(), E>,
    y0: &[C64],
    step: f64,
    sample_times: &[f64],
    mut on_sample: impl FnMut(usize, f64, &[C64]),
) -> Result<StepStats, RkError<E>> {
    let n = y0.len();
    let mut stats = StepStats::default();
    let mut y = y0.to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut ytmp = k1.clone();

    on_sample(0, sample_times[0], &y);
    for s in 1..sample_times.len() {
        let ta = sample_times[s - 1];
        let tb = sample_times[s];
        let interval = tb - ta;
        let substeps = (interval / step).ceil().max(1.0) as usize;
        let h = interval / substeps as f64;
        let mut t = ta;
        for _ in 0..substeps {
            rhs(t, &y, &mut k1).map_err(RkError::Rhs)?;
            axpy(&mut ytmp, &y, h, &[(0.5, &k1)]);
            rhs(t + h / 2.0, &ytmp, &mut k2).map_err(RkError::Rhs)?;
            axpy(&mut ytmp, &y, h, &[(0.5, &k2)]);
            rhs(t + h / 2.0, &ytmp, &mut k3).map_err(RkError::Rhs)?;
            axpy(&mut ytmp, &y, h, &[(1.0, &k3)]);
            rhs(t + h, &ytmp, &mut k4).map_err(RkError::Rhs)?;
            for i in 0..n {
                y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
            }
            t += h;
            stats.accepted += 1;
        }
        on_sample(s, tb, &y);
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// y' = −iωy has the exact solution e^{−iωt}.
    fn phase_rhs(omega: f64) -> impl FnMut(f64, &[C64], &mut [C64]) -> Result<(), ()> {
        move |_t, y, dy| {
            dy[0] = -C64::i() * omega * y[0];
            Ok(())
        }
    }

    #[test]
    fn dopri5_phase_evolution() {
        let omega = 3.0;
        let samples: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let mut got = vec![C64::new(0.0, 0.0); samples.len()];
        let stats = dopri5(
            phase_rhs(omega),
            0.0,
            10.0,
            &[C64::new(1.0, 0.0)],
            1e-12,
            1e-14,
            0.1,
            &samples,
            |i, _t, y| got[i] = y[0],
        )
        .unwrap();
        assert!(stats.accepted > 0);
        for (i, &t) in samples.iter().enumerate() {
            let exact = C64::from_polar(1.0, -omega * t);
            assert!((got[i] - exact).norm() < 1e-9, "t={t}: {:?}", got[i]);
        }
    }

    #[test]
    fn dense_output_matches_exact_solution_between_steps() {
        // large max_step so several samples land inside each accepted step
        let omega = 2.0;
        let samples: Vec<f64> = (0..=400).map(|i| i as f64 * 0.025).collect();
        let mut got = vec![C64::new(0.0, 0.0); samples.len()];
        dopri5(
            phase_rhs(omega),
            0.0,
            10.0,
            &[C64::new(1.0, 0.0)],
            1e-10,
            1e-12,
            1.0,
            &samples,
            |i, _t, y| got[i] = y[0],
        )
        .unwrap();
        for (i, &t) in samples.iter().enumerate() {
            let exact = C64::from_polar(1.0, -omega * t);
            assert!((got[i] - exact).norm() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn rk4_converges_with_step_halving() {
        let run = |step: f64| {
            let samples = [0.0, 5.0];
            let mut last = C64::new(0.0, 0.0);
            rk4_fixed(phase_rhs(1.7), &[C64::new(1.0, 0.0)], step, &samples, |_, _, y| {
                last = y[0]
            })
            .unwrap();
            last
        };
        let exact = C64::from_polar(1.0, -1.7 * 5.0);
        let e1 = (run(0.01) - exact).norm();
        let e2 = (run(0.005) - exact).norm();
        assert!(e1 < 1e-7);
        // fourth order: halving the step gains ~16×
        assert!(e2 < e1 / 10.0, "e1={e1:.3e} e2={e2:.3e}");
    }

    #[test]
    fn rhs_error_propagates() {
        let r = dopri5(
            |_t, _y, _dy| Err("boom"),
            0.0,
            1.0,
            &[C64::new(1.0, 0.0)],
            1e-8,
            1e-10,
            0.1,
            &[0.0, 1.0],
            |_, _, _| {},
        );
        assert!(matches!(r, Err(RkError::Rhs("boom"))));
    }
}
