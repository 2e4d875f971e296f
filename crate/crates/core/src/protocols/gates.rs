//! Qubit gates on the {ψ1, ψ3} pair: the double-fractional rotation gate on
//! the Λ linkage and the two-process tripod gate.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::linkage::{lambda_scheme, tripod_scheme};
use crate::propagator::{propagate, IntegratorConfig, Trajectory};
use crate::pulses::{PulseSchedule, PulseShape};

use super::{basis_state, wrap_angle, ProtocolError, ProtocolResult, WINDOW_SIGMAS};

/// Rotation gate of angle 2α from two fractional-STIRAP processes.
///
/// The first (inverted) half sweeps the mixing angle from π/4 + α down to 0,
/// the second (regular) half from 0 up to |π/4 − α|; for α > π/4 the second
/// half's pump carries a π phase so the sweep continues past zero. The net
/// map on span{ψ1, ψ3} is then a rotation by 2α. The total pulse area is
/// calibrated to the nearest multiple of 4π so the bright component returns
/// in phase.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RotationGateParams {
    /// Half the rotation angle, in (0, π/2).
    pub alpha: f64,
    /// Requested peak Rabi frequency; rescaled by the area calibration.
    pub peak: f64,
    pub tau: f64,
    pub delay: f64,
    /// Common phase applied to both pulses of the second half.
    #[serde(default)]
    pub relative_phase: f64,
}

/// Fractional pair with the ratio locked at tan(theta_lock) on the trailing
/// (regular) or leading (inverted) side. Unlike the public builder this
/// accepts theta_lock = 0, which degenerates to a Stokes-only stretch.
fn lock_pair(
    peak: f64,
    tau: f64,
    delay: f64,
    theta_lock: f64,
    inverted: bool,
) -> (PulseShape, PulseShape) {
    let side = if inverted { -1.0 } else { 1.0 };
    let p = PulseShape::gaussian(peak * theta_lock.sin(), side * delay / 2.0, tau);
    let s = PulseShape::Sum {
        components: vec![
            PulseShape::gaussian(peak, -side * delay / 2.0, tau),
            PulseShape::gaussian(peak * theta_lock.cos(), side * delay / 2.0, tau),
        ],
    };
    (p, s)
}

fn rotation_schedule(
    params: &RotationGateParams,
    peak: f64,
) -> (PulseSchedule, f64, f64) {
    let spacing = params.delay + 10.0 * params.tau;
    let (c1, c2) = (-spacing / 2.0, spacing / 2.0);
    let theta1 = FRAC_PI_4 + params.alpha;
    let theta2 = (FRAC_PI_4 - params.alpha).abs();
    let flip = params.alpha > FRAC_PI_4;

    let (p1, s1) = lock_pair(peak, params.tau, params.delay, theta1, true);
    let (mut p2, mut s2) = lock_pair(peak, params.tau, params.delay, theta2, false);
    if flip {
        p2 = p2.with_phase(PI);
    }
    if params.relative_phase != 0.0 {
        p2 = p2.with_phase(params.relative_phase);
        s2 = s2.with_phase(params.relative_phase);
    }
    let mut schedule = PulseSchedule::new();
    schedule.insert(
        "P",
        PulseShape::Sum { components: vec![p1.shifted(c1), p2.shifted(c2)] },
    );
    schedule.insert(
        "S",
        PulseShape::Sum { components: vec![s1.shifted(c1), s2.shifted(c2)] },
    );
    let half = spacing / 2.0 + params.delay / 2.0 + WINDOW_SIGMAS * params.tau;
    (schedule, -half, half)
}

fn rms_area(schedule: &PulseSchedule, t0: f64, t1: f64) -> f64 {
    let n = 20_001;
    let dt = (t1 - t0) / (n - 1) as f64;
    let mut area = 0.0;
    let mut prev = 0.0;
    for i in 0..n {
        let t = t0 + i as f64 * dt;
        let p = schedule.eval("P", t).map(|v| v.norm()).unwrap_or(0.0);
        let s = schedule.eval("S", t).map(|v| v.norm()).unwrap_or(0.0);
        let rms = p.hypot(s);
        if i > 0 {
            area += 0.5 * dt * (prev + rms);
        }
        prev = rms;
    }
    area
}

/// Extract the induced 2×2 map on {ψ1, ψ3} (levels 0 and 2) from two basis
/// propagations.
fn induced_map(out1: &Trajectory, out3: &Trajectory) -> [[C64; 2]; 2] {
    let a = out1.final_amplitudes();
    let b = out3.final_amplitudes();
    [[a[0], b[0]], [a[2], b[2]]]
}

fn frobenius(m: &[[C64; 2]; 2]) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn unitarity_deviation(m: &[[C64; 2]; 2]) -> f64 {
    // ‖M†M − I‖_F
    let mut g = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                g[i][j] += m[k][i].conj() * m[k][j];
            }
            if i == j {
                g[i][j] -= 1.0;
            }
        }
    }
    frobenius(&g)
}

/// Strip the global phase via the determinant, with the residual ± sign fixed
/// against a reference map.
fn normalize_phase(m: &[[C64; 2]; 2], reference: &[[f64; 2]; 2]) -> [[C64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let gp = det.sqrt();
    let mut out = *m;
    if gp.norm() > 0.0 {
        for row in &mut out {
            for z in row {
                *z /= gp;
            }
        }
    }
    let overlap: f64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (out[i][j] * reference[i][j]).re)
        .sum();
    if overlap < 0.0 {
        for row in &mut out {
            for z in row {
                *z = -*z;
            }
        }
    }
    out
}

fn rotation_matrix(angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

pub fn run_rotation_gate(
    params: &RotationGateParams,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    if !(params.alpha > 0.0 && params.alpha < FRAC_PI_2) {
        return Err(ProtocolError::BadParameter(format!(
            "rotation half-angle must lie in (0, π/2), got {}",
            params.alpha
        )));
    }
    if params.tau <= 0.0 || params.delay <= 0.0 || params.peak <= 0.0 {
        return Err(ProtocolError::BadParameter("peak, tau and delay must be positive".into()));
    }

    // calibrate the total rms area to the nearest multiple of 4π
    let (probe, t0, t1) = rotation_schedule(params, params.peak);
    let raw_area = rms_area(&probe, t0, t1);
    let quanta = (raw_area / (4.0 * PI)).round().max(1.0);
    let peak = params.peak * 4.0 * PI * quanta / raw_area;
    let (schedule, t0, t1) = rotation_schedule(params, peak);

    let scheme = lambda_scheme(0.0, 0.0, 0.0)?;
    let out1 = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?;
    let out3 = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 2), config)?;

    let m = induced_map(&out1, &out3);
    let target = rotation_matrix(2.0 * params.alpha);
    let normalized = normalize_phase(&m, &target);
    let rotation_angle = (normalized[1][0] - normalized[0][1]).re
        .atan2((normalized[0][0] + normalized[1][1]).re);
    let mut diff = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            diff[i][j] = normalized[i][j] - target[i][j];
        }
    }
    let leakage = out1.final_populations()[1].max(out3.final_populations()[1]);

    let mut result = ProtocolResult::new("rotation-gate");
    result
        .set("rotation_angle", rotation_angle)
        .set("target_angle", 2.0 * params.alpha)
        .set("angle_deviation", wrap_angle(rotation_angle - 2.0 * params.alpha).abs())
        .set("deviation_from_ideal", frobenius(&diff))
        .set("unitarity_deviation", unitarity_deviation(&m))
        .set("leakage", leakage)
        .set("leakage_flagged", if leakage > 1e-2 { 1.0 } else { 0.0 })
        .set("area_quanta", quanta)
        .set("calibrated_peak", peak);
    result.notes = format!(
        "double fractional-STIRAP, mixing angle (π/4+α) → 0 → |π/4−α| with α={:.4}; area calibrated to {quanta}·4π",
        params.alpha
    );
    result.gate = Some(normalized);
    result.trajectory = Some(out1);
    Ok(result)
}

/// Two tripod-STIRAP processes: the coupled qubit combination is carried to
/// the ancilla and back, returning with the control phase, while the
/// orthogonal (dark) combination never moves.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TripodGateParams {
    pub peak: f64,
    pub tau: f64,
    pub delay: f64,
    /// Mixing ratio of the qubit pulses: Ω_P = peak·cos χ, Ω_S = peak·sin χ;
    /// the rotation axis is q = cos χ·ψ1 + sin χ·ψ3.
    pub ratio_angle: f64,
    /// Phase applied to the second process's qubit pulses; the Bloch rotation
    /// angle about q.
    pub control_phase: f64,
}

pub fn run_tripod_gate(
    params: &TripodGateParams,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    if params.tau <= 0.0 || params.delay <= 0.0 || params.peak <= 0.0 {
        return Err(ProtocolError::BadParameter("peak, tau and delay must be positive".into()));
    }
    let spacing = params.delay + 10.0 * params.tau;
    let (c1, c2) = (-spacing / 2.0, spacing / 2.0);
    let d = params.delay;
    let tau = params.tau;
    let (cos_chi, sin_chi) = (params.ratio_angle.cos(), params.ratio_angle.sin());
    let phi = params.control_phase;

    // process 1: C leads, qubit pair trails → q is carried to the ancilla
    // process 2: qubit pair (phased) leads, C trails → carried back with e^{iφ}
    let p_shape = PulseShape::Sum {
        components: vec![
            PulseShape::gaussian(params.peak * cos_chi, c1 + d / 2.0, tau),
            PulseShape::gaussian(params.peak * cos_chi, c2 - d / 2.0, tau).with_phase(phi),
        ],
    };
    let s_shape = PulseShape::Sum {
        components: vec![
            PulseShape::gaussian(params.peak * sin_chi, c1 + d / 2.0, tau),
            PulseShape::gaussian(params.peak * sin_chi, c2 - d / 2.0, tau).with_phase(phi),
        ],
    };
    let c_shape = PulseShape::Sum {
        components: vec![
            PulseShape::gaussian(params.peak, c1 - d / 2.0, tau),
            PulseShape::gaussian(params.peak, c2 + d / 2.0, tau),
        ],
    };
    let mut schedule = PulseSchedule::new();
    schedule.insert("P", p_shape);
    schedule.insert("S", s_shape);
    schedule.insert("C", c_shape);

    let scheme = tripod_scheme([0.0; 4], [0.0; 4])?;
    let half = spacing / 2.0 + d / 2.0 + WINDOW_SIGMAS * tau;
    let out1 = propagate(&scheme, &schedule, -half, half, &basis_state(4, 0), config)?;
    let out3 = propagate(&scheme, &schedule, -half, half, &basis_state(4, 2), config)?;

    let m = induced_map(&out1, &out3);
    // ideal map: I + (e^{iφ} − 1)|q⟩⟨q|
    let q = [cos_chi, sin_chi];
    let phase = C64::from_polar(1.0, phi) - 1.0;
    let mut ideal = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            ideal[i][j] = phase * q[i] * q[j];
            if i == j {
                ideal[i][j] += 1.0;
            }
        }
    }
    let fidelity = {
        // |tr(M† U_ideal)| / 2
        let mut tr = C64::new(0.0, 0.0);
        for i in 0..2 {
            for k in 0..2 {
                tr += m[k][i].conj() * ideal[k][i];
            }
        }
        tr.norm() / 2.0
    };
    // Bloch rotation angle from the det-normalized trace
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let gp = det.sqrt();
    let tr_norm = if gp.norm() > 0.0 { ((m[0][0] + m[1][1]) / gp).norm() / 2.0 } else { 0.0 };
    let rotation_angle = 2.0 * tr_norm.clamp(0.0, 1.0).acos();

    let leakage = out1.final_populations()[1].max(out3.final_populations()[1]);
    let ancilla = out1.final_populations()[3].max(out3.final_populations()[3]);
    let peak_p2 = out1.peak_population(1).max(out3.peak_population(1));

    let mut result = ProtocolResult::new("tripod-gate");
    result
        .set("unitarity_deviation", unitarity_deviation(&m))
        .set("gate_fidelity", fidelity)
        .set("rotation_angle", rotation_angle)
        .set("angle_deviation", (rotation_angle - wrap_angle(phi).abs()).abs())
        .set("leakage", leakage)
        .set("ancilla_residual", ancilla)
        .set("peak_intermediate_population", peak_p2);
    result.notes = format!(
        "two tripod-STIRAP processes, ratio angle χ={:.4}, control phase φ={:.4}",
        params.ratio_angle, phi
    );
    result.gate = Some(m);
    result.trajectory = Some(out1);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_8;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn rotation_gate_angles() {
        for alpha in [FRAC_PI_8, FRAC_PI_4] {
            let params = RotationGateParams {
                alpha,
                peak: 60.0,
                tau: 1.0,
                delay: 1.2,
                relative_phase: 0.0,
            };
            let r = run_rotation_gate(&params, &cfg()).unwrap();
            assert!(
                r.scalar("angle_deviation").unwrap() < 1e-2,
                "α={alpha}: {:?}",
                r.scalars
            );
            assert!(r.scalar("unitarity_deviation").unwrap() < 1e-3, "α={alpha}: {:?}", r.scalars);
            assert!(r.scalar("leakage").unwrap() < 1e-4, "α={alpha}: {:?}", r.scalars);
            assert_eq!(r.scalar("leakage_flagged").unwrap(), 0.0);
        }
    }

    #[test]
    fn rotation_gate_matches_rotation_oracle_on_basis_input() {
        let alpha = FRAC_PI_8;
        let params =
            RotationGateParams { alpha, peak: 60.0, tau: 1.0, delay: 1.2, relative_phase: 0.0 };
        let r = run_rotation_gate(&params, &cfg()).unwrap();
        let m = r.gate.unwrap();
        let target = rotation_matrix(2.0 * alpha);
        // overlap of M·ψ1 with R(2α)·ψ1
        let overlap = (m[0][0] * target[0][0] + m[1][0] * target[1][0]).norm();
        assert!(overlap >= 0.999, "overlap {overlap}");
    }

    #[test]
    fn rotation_gate_continuity_towards_large_alpha() {
        // past π/4 the construction flips the second half's pump phase; the
        // realized angle must keep tracking 2α
        for alpha in [FRAC_PI_4 - 0.05, FRAC_PI_4 + 0.05, 1.2] {
            let params = RotationGateParams {
                alpha,
                peak: 60.0,
                tau: 1.0,
                delay: 1.2,
                relative_phase: 0.0,
            };
            let r = run_rotation_gate(&params, &cfg()).unwrap();
            assert!(
                r.scalar("angle_deviation").unwrap() < 2e-2,
                "α={alpha}: {:?}",
                r.scalars
            );
        }
    }

    #[test]
    fn rotation_gate_rejects_bad_alpha() {
        let params =
            RotationGateParams { alpha: 0.0, peak: 50.0, tau: 1.0, delay: 1.1, relative_phase: 0.0 };
        assert!(run_rotation_gate(&params, &cfg()).is_err());
    }

    #[test]
    fn tripod_gate_is_a_phase_rotation_about_q() {
        let base = TripodGateParams {
            peak: 60.0,
            tau: 1.0,
            delay: 1.2,
            ratio_angle: FRAC_PI_4,
            control_phase: PI,
        };
        let r = run_tripod_gate(&base, &cfg()).unwrap();
        assert!(r.scalar("unitarity_deviation").unwrap() < 1e-3, "{:?}", r.scalars);
        assert!(r.scalar("leakage").unwrap() < 1e-4);
        assert!(r.scalar("ancilla_residual").unwrap() < 1e-3);
        assert!(r.scalar("gate_fidelity").unwrap() > 0.999, "{:?}", r.scalars);
        // φ = π about q = (ψ1+ψ3)/√2 swaps ψ1 ↔ −ψ3 in populations
        let traj = r.trajectory.as_ref().unwrap();
        assert!(traj.final_populations()[2] > 0.999);
        // the intermediate level stays dark throughout
        assert!(r.scalar("peak_intermediate_population").unwrap() < 1e-3);
    }

    #[test]
    fn tripod_populations_oscillate_with_control_phase() {
        let mut p1_by_phase = Vec::new();
        for phi in [0.0, FRAC_PI_2, PI] {
            let params = TripodGateParams {
                peak: 60.0,
                tau: 1.0,
                delay: 1.2,
                ratio_angle: FRAC_PI_4,
                control_phase: phi,
            };
            let r = run_tripod_gate(&params, &cfg()).unwrap();
            let p1 = r.trajectory.as_ref().unwrap().final_populations()[0];
            let predicted = (phi / 2.0).cos().powi(2);
            assert!((p1 - predicted).abs() < 1e-3, "φ={phi}: P1={p1} vs {predicted}");
            p1_by_phase.push(p1);
        }
        assert!(p1_by_phase[0] > p1_by_phase[1] && p1_by_phase[1] > p1_by_phase[2]);
    }

    #[test]
    fn tripod_angle_matches_control_phase() {
        let params = TripodGateParams {
            peak: 60.0,
            tau: 1.0,
            delay: 1.2,
            ratio_angle: 0.6,
            control_phase: 1.1,
        };
        let r = run_tripod_gate(&params, &cfg()).unwrap();
        assert!(r.scalar("angle_deviation").unwrap() < 1e-2, "{:?}", r.scalars);
    }
}
