//! Dressed-state analysis of the three-level system: mixing angles,
//! eigenvalues, adiabatic eigenvectors, dark-state projection, and the
//! local/global adiabaticity metrics.
//!
//! Closed forms assume two-photon resonance (δ = 0); the general case goes
//! through the numeric Hermitian eigensolve in [`crate::linalg`], which also
//! serves as the test oracle for the analytics.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg;
use crate::linkage::{Coupling, LevelScheme};
use crate::pulses::{theta_rate_scaled, PulseSchedule};

#[derive(Debug, Error)]
pub enum AdiabaticError {
    #[error("mixing angle undefined: both envelopes are zero")]
    UndefinedAngle,
    #[error("analysis requires a three-level Λ linkage (couplings 1↔2 and 2↔3)")]
    UnsupportedScheme,
    #[error("pulse id `{0}` missing from the schedule")]
    MissingPulse(String),
}

/// Snapshot of the adiabatic frame at one instant.
///
/// The dressed vectors are real 3-vectors of coefficients over (ψ1, ψ2, ψ3);
/// `phi_zero` has a structurally exact zero second component.
#[derive(Clone, Copy, Debug)]
pub struct AdiabaticFrame {
    pub theta: f64,
    pub phi: f64,
    pub eps_plus: f64,
    pub eps_zero: f64,
    pub eps_minus: f64,
    pub phi_plus: [f64; 3],
    pub phi_zero: [f64; 3],
    pub phi_minus: [f64; 3],
    pub omega_rms: f64,
}

/// Mixing angles (ϑ, φ) from the envelope magnitudes and the single-photon
/// detuning: tan ϑ = Ω_P/Ω_S with ϑ ∈ [0, π/2], tan 2φ = Ω_rms/Δ with
/// φ ∈ (0, π/2).
pub fn mixing_angles(omega_p: f64, omega_s: f64, delta: f64) -> Result<(f64, f64), AdiabaticError> {
    if omega_p == 0.0 && omega_s == 0.0 {
        return Err(AdiabaticError::UndefinedAngle);
    }
    let theta = omega_p.atan2(omega_s);
    let omega_rms = omega_p.hypot(omega_s);
    let phi = 0.5 * omega_rms.atan2(delta);
    Ok((theta, phi))
}

/// Eigenvalues for δ = 0: ε± = ½[Δ ± √(Δ² + Ω_rms²)], ε0 = 0.
pub fn eigenvalues(omega_p: f64, omega_s: f64, delta: f64) -> (f64, f64, f64) {
    let omega_rms = omega_p.hypot(omega_s);
    let root = delta.hypot(omega_rms);
    (0.5 * (delta + root), 0.0, 0.5 * (delta - root))
}

/// Adiabatic eigenvectors (Φ+, Φ0, Φ−) for δ = 0.
///
/// Φ0 = ψ1 cos ϑ − ψ3 sin ϑ is the dark state: no component on the leaky
/// intermediate level.
pub fn dressed_states(
    omega_p: f64,
    omega_s: f64,
    delta: f64,
) -> Result<([f64; 3], [f64; 3], [f64; 3]), AdiabaticError> {
    let (theta, phi) = mixing_angles(omega_p, omega_s, delta)?;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Ok((
        [st * sp, cp, ct * sp],
        [ct, 0.0, -st],
        [st * cp, -sp, ct * cp],
    ))
}

/// Full frame snapshot from the envelope magnitudes.
pub fn frame(omega_p: f64, omega_s: f64, delta: f64) -> Result<AdiabaticFrame, AdiabaticError> {
    let (theta, phi) = mixing_angles(omega_p, omega_s, delta)?;
    let (eps_plus, eps_zero, eps_minus) = eigenvalues(omega_p, omega_s, delta);
    let (phi_plus, phi_zero, phi_minus) = dressed_states(omega_p, omega_s, delta)?;
    Ok(AdiabaticFrame {
        theta,
        phi,
        eps_plus,
        eps_zero,
        eps_minus,
        phi_plus,
        phi_zero,
        phi_minus,
        omega_rms: omega_p.hypot(omega_s),
    })
}

/// Dressed states for arbitrary δ via a numeric Hermitian eigensolve of the
/// assembled H; eigenvector phases are fixed so the largest-magnitude
/// component is real positive. Valid for γ = 0.
pub fn dressed_states_numeric(h: &Array2<C64>) -> linalg::Eigh {
    linalg::eigh(h)
}

/// A Λ linkage found inside a scheme: couplings (1↔2) and (2↔3) in a
/// three-level system.
#[derive(Clone, Debug)]
pub struct LambdaLayout {
    pump: Coupling,
    stokes: Coupling,
}

impl LambdaLayout {
    /// Structural detection: exactly three levels with couplings (1,2) and
    /// (2,3), regardless of pulse ids.
    pub fn detect(scheme: &LevelScheme) -> Option<Self> {
        if scheme.dim() != 3 || scheme.couplings.len() != 2 {
            return None;
        }
        let pump = scheme.couplings.iter().find(|c| c.from == 0 && c.to == 1)?;
        let stokes = scheme.couplings.iter().find(|c| c.from == 1 && c.to == 2)?;
        Some(Self { pump: pump.clone(), stokes: stokes.clone() })
    }

    /// Effective pump Rabi magnitude |scale·Ω(t)|.
    pub fn omega_p(&self, schedule: &PulseSchedule, t: f64) -> Result<f64, AdiabaticError> {
        schedule
            .eval(&self.pump.pulse_id, t)
            .map(|v| self.pump.strength_scale.abs() * v.norm())
            .ok_or_else(|| AdiabaticError::MissingPulse(self.pump.pulse_id.clone()))
    }

    /// Effective Stokes Rabi magnitude |scale·Ω(t)|.
    pub fn omega_s(&self, schedule: &PulseSchedule, t: f64) -> Result<f64, AdiabaticError> {
        schedule
            .eval(&self.stokes.pulse_id, t)
            .map(|v| self.stokes.strength_scale.abs() * v.norm())
            .ok_or_else(|| AdiabaticError::MissingPulse(self.stokes.pulse_id.clone()))
    }

    /// dϑ/dt at time `t`; `window` sets the finite-difference step for shapes
    /// without a closed-form derivative.
    pub fn theta_rate(
        &self,
        schedule: &PulseSchedule,
        t: f64,
        window: f64,
    ) -> Result<f64, AdiabaticError> {
        let p = schedule
            .get(&self.pump.pulse_id)
            .ok_or_else(|| AdiabaticError::MissingPulse(self.pump.pulse_id.clone()))?;
        let s = schedule
            .get(&self.stokes.pulse_id)
            .ok_or_else(|| AdiabaticError::MissingPulse(self.stokes.pulse_id.clone()))?;
        Ok(theta_rate_scaled(
            p,
            self.pump.strength_scale,
            s,
            self.stokes.strength_scale,
            t - schedule.time_origin,
            window,
        ))
    }
}

/// Local adiabaticity ratio Ω_rms(t) / |dϑ/dt|.
///
/// The quotient-rule rate carries no absolute value in the usual statement of
/// the condition; the magnitude is what matters, so |dϑ/dt| is used here.
/// Returns +∞ when dϑ/dt = 0.
pub fn local_adiabaticity(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    t: f64,
    window: f64,
) -> Result<f64, AdiabaticError> {
    let layout = LambdaLayout::detect(scheme).ok_or(AdiabaticError::UnsupportedScheme)?;
    let omega_rms = layout.omega_p(schedule, t)?.hypot(layout.omega_s(schedule, t)?);
    let rate = layout.theta_rate(schedule, t, window)?.abs();
    if rate == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(omega_rms / rate)
    }
}

/// Global adiabaticity figure: the pulse area ∫ Ω_rms dt over the overlap
/// window where both envelopes exceed 10⁻⁶ of the larger peak.
#[derive(Clone, Copy, Debug)]
pub struct GlobalAdiabaticity {
    pub pulse_area: f64,
    /// Set when the overlap window is empty; the area is then 0.
    pub empty_overlap: bool,
}

pub fn global_adiabaticity(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    t0: f64,
    t1: f64,
) -> Result<GlobalAdiabaticity, AdiabaticError> {
    let layout = LambdaLayout::detect(scheme).ok_or(AdiabaticError::UnsupportedScheme)?;
    let n = 20_001;
    let dt = (t1 - t0) / (n - 1) as f64;
    let mut p = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        let t = t0 + i as f64 * dt;
        p.push(layout.omega_p(schedule, t)?);
        s.push(layout.omega_s(schedule, t)?);
    }
    let peak = p.iter().chain(s.iter()).fold(0.0_f64, |a, &b| a.max(b));
    let eps = 1e-6 * peak;
    let qualifies = |i: usize| p[i] > eps && s[i] > eps;
    let mut area = 0.0;
    let mut any = false;
    for i in 0..n - 1 {
        if qualifies(i) && qualifies(i + 1) {
            any = true;
            let rms_a = p[i].hypot(s[i]);
            let rms_b = p[i + 1].hypot(s[i + 1]);
            area += 0.5 * dt * (rms_a + rms_b);
        }
    }
    Ok(GlobalAdiabaticity { pulse_area: area, empty_overlap: !any })
}

/// Population of the dark state: |⟨Φ0|ψ⟩|², with no renormalization of a
/// decaying ψ.
pub fn dark_overlap(state: &[C64], frame: &AdiabaticFrame) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for (coeff, amp) in frame.phi_zero.iter().zip(state) {
        acc += amp * *coeff;
    }
    acc.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::{assemble_hamiltonian, lambda_scheme};
    use crate::pulses::{counterintuitive_pair, NumericPulse, Pulse, PulseShape};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn mixing_angle_limits() {
        let (theta, _) = mixing_angles(0.0, 1.0, 0.0).unwrap();
        assert_eq!(theta, 0.0);
        let (theta, _) = mixing_angles(1.0, 0.0, 0.0).unwrap();
        assert!((theta - FRAC_PI_2).abs() < 1e-15);
        let (theta, phi) = mixing_angles(2.0, 2.0, 0.0).unwrap();
        assert!((theta - FRAC_PI_4).abs() < 1e-15);
        assert!((phi - FRAC_PI_4).abs() < 1e-15);
        assert!(matches!(mixing_angles(0.0, 0.0, 1.0), Err(AdiabaticError::UndefinedAngle)));
    }

    #[test]
    fn eigenvalue_substitutions() {
        let w = 3.0;
        let (ep, e0, em) = eigenvalues(w, w, 0.0);
        assert!((ep - w / 2.0_f64.sqrt()).abs() < 1e-14);
        assert_eq!(e0, 0.0);
        assert!((em + w / 2.0_f64.sqrt()).abs() < 1e-14);

        let (ep, e0, em) = eigenvalues(0.0, 0.0, 2.5);
        assert!((ep - 2.5).abs() < 1e-15);
        assert_eq!(e0, 0.0);
        assert!(em.abs() < 1e-15);

        // Δ = 3, Ω_rms = 4 → (4, 0, −1)
        let (ep, e0, em) = eigenvalues(4.0, 0.0, 3.0);
        assert!((ep - 4.0).abs() < 1e-14);
        assert_eq!(e0, 0.0);
        assert!((em + 1.0).abs() < 1e-14);
    }

    #[test]
    fn dark_state_endpoints() {
        let (_, d, _) = dressed_states(0.0, 1.0, 0.0).unwrap();
        assert_eq!(d, [1.0, 0.0, 0.0]);
        let (_, d, _) = dressed_states(1.0, 0.0, 0.0).unwrap();
        assert!((d[2] + 1.0).abs() < 1e-15);
        assert!(d[0].abs() < 1e-15);
        assert_eq!(d[1], 0.0);
        let (_, d, _) = dressed_states(1.0, 1.0, 0.0).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert!((d[0] - r).abs() < 1e-15);
        assert!((d[2] + r).abs() < 1e-15);
    }

    #[test]
    fn dressed_states_are_orthonormal_and_diagonalize_h() {
        let cases = [(1.3, 0.4, 0.0), (0.2, 2.0, 1.5), (3.0, 3.0, -2.0)];
        for &(wp, ws, delta) in &cases {
            let (plus, zero, minus) = dressed_states(wp, ws, delta).unwrap();
            let vecs = [plus, zero, minus];
            for a in 0..3 {
                for b in 0..3 {
                    let dot: f64 = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| x * y).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12, "({wp},{ws},{delta}) {a}{b}: {dot}");
                }
            }
            // H Φj = εj Φj against the assembled matrix
            let scheme = lambda_scheme(delta, 0.0, 0.0).unwrap();
            let mut schedule = PulseSchedule::new();
            schedule.insert("P", PulseShape::Constant { peak: wp, phase: 0.0 });
            schedule.insert("S", PulseShape::Constant { peak: ws, phase: 0.0 });
            let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
            let (ep, e0, em) = eigenvalues(wp, ws, delta);
            for (vec, eps) in vecs.iter().zip([ep, e0, em]) {
                for i in 0..3 {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..3 {
                        acc += h[(i, k)] * vec[k];
                    }
                    acc -= C64::new(eps * vec[i], 0.0);
                    assert!(acc.norm() < 1e-12, "residual {}", acc.norm());
                }
            }
        }
    }

    #[test]
    fn lambda_layout_detection() {
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        assert!(LambdaLayout::detect(&scheme).is_some());
        let tripod = crate::linkage::tripod_scheme([0.0; 4], [0.0; 4]).unwrap();
        assert!(LambdaLayout::detect(&tripod).is_none());
    }

    #[test]
    fn local_ratio_constant_for_rotation_pair() {
        // P = A sin(ct), S = A cos(ct): ϑ = ct, Ω_rms = A → ratio = A/c
        let a = 2.0;
        let c = 0.25;
        let n = 4001;
        let times: Vec<f64> = (0..n).map(|i| i as f64 * (4.0 / (n - 1) as f64)).collect();
        let p_vals: Vec<C64> = times.iter().map(|&t| C64::new(a * (c * t).sin(), 0.0)).collect();
        let s_vals: Vec<C64> = times.iter().map(|&t| C64::new(a * (c * t).cos(), 0.0)).collect();
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let mut schedule = PulseSchedule::new();
        schedule.insert("P", Pulse::Numeric(NumericPulse::new(times.clone(), p_vals).unwrap()));
        schedule.insert("S", Pulse::Numeric(NumericPulse::new(times, s_vals).unwrap()));
        for &t in &[0.5, 1.0, 2.0, 3.5] {
            let ratio = local_adiabaticity(&scheme, &schedule, t, 4.0).unwrap();
            assert!((ratio - a / c).abs() < 1e-3, "t={t}: {ratio}");
        }
    }

    #[test]
    fn local_ratio_infinite_when_pump_off() {
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let mut schedule = PulseSchedule::new();
        schedule.insert("P", PulseShape::gaussian(0.0, 0.0, 1.0));
        schedule.insert("S", PulseShape::gaussian(1.0, 0.0, 1.0));
        let ratio = local_adiabaticity(&scheme, &schedule, 0.3, 10.0).unwrap();
        assert!(ratio.is_infinite());
    }

    #[test]
    fn local_ratio_rejects_non_lambda() {
        let tripod = crate::linkage::tripod_scheme([0.0; 4], [0.0; 4]).unwrap();
        let schedule = PulseSchedule::new();
        assert!(matches!(
            local_adiabaticity(&tripod, &schedule, 0.0, 1.0),
            Err(AdiabaticError::UnsupportedScheme)
        ));
    }

    #[test]
    fn strong_gaussian_pair_is_locally_adiabatic() {
        // matrix elements peaking at 50/τ (envelopes 100/τ), Δt = 1.1τ: the
        // minimum ratio over the transfer region must be far above 1;
        // cross-checked against a finite-difference ϑ. Outside the transfer
        // region the ratio always collapses (Gaussian envelopes die faster
        // than the angle rate), with no population moving there.
        let tau = 1.0;
        let (p, s) = counterintuitive_pair(100.0, 100.0, tau, 1.1 * tau).unwrap();
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let mut schedule = PulseSchedule::new();
        schedule.insert("P", p.clone());
        schedule.insert("S", s.clone());
        let mut min_ratio = f64::INFINITY;
        for i in 0..2001 {
            let t = -3.0 + 6.0 * i as f64 / 2000.0;
            let ratio = local_adiabaticity(&scheme, &schedule, t, 13.0).unwrap();
            min_ratio = min_ratio.min(ratio);
            // finite-difference cross-check of the analytic rate
            let h = 1e-5;
            let th = |t: f64| p.magnitude(t).atan2(s.magnitude(t));
            let fd = ((th(t + h) - th(t - h)) / (2.0 * h)).abs();
            let analytic = crate::pulses::theta_rate(&p, &s, t, 13.0).abs();
            assert!((fd - analytic).abs() < 1e-5, "t={t}");
        }
        assert!(min_ratio > 10.0, "min ratio {min_ratio}");
    }

    #[test]
    fn global_area_for_constant_drive() {
        // both legs at Ω/√2 over T → Ω̄_rms·T = Ω·T exactly (trapezoid exact
        // for a constant)
        let omega = 4.0;
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let mut schedule = PulseSchedule::new();
        let leg = omega / 2.0_f64.sqrt();
        schedule.insert("P", PulseShape::Constant { peak: leg, phase: 0.0 });
        schedule.insert("S", PulseShape::Constant { peak: leg, phase: 0.0 });
        let g = global_adiabaticity(&scheme, &schedule, 0.0, 3.0).unwrap();
        assert!(!g.empty_overlap);
        assert!((g.pulse_area - omega * 3.0).abs() < 1e-9, "{}", g.pulse_area);
    }

    #[test]
    fn global_area_flags_empty_overlap() {
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let (p, s) = counterintuitive_pair(1.0, 1.0, 0.1, 40.0).unwrap();
        let mut schedule = PulseSchedule::new();
        schedule.insert("P", p);
        schedule.insert("S", s);
        let g = global_adiabaticity(&scheme, &schedule, -25.0, 25.0).unwrap();
        assert!(g.empty_overlap);
        assert_eq!(g.pulse_area, 0.0);
    }

    #[test]
    fn global_area_strong_pair_exceeds_threshold() {
        let tau = 1.0;
        let (p, s) = counterintuitive_pair(50.0, 50.0, tau, tau).unwrap();
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let mut schedule = PulseSchedule::new();
        schedule.insert("P", p);
        schedule.insert("S", s);
        let g = global_adiabaticity(&scheme, &schedule, -7.0, 7.0).unwrap();
        assert!(g.pulse_area > 10.0, "area {}", g.pulse_area);
    }

    #[test]
    fn dark_overlap_cases() {
        let f = frame(1.0, 1.0, 0.0).unwrap();
        let dark: Vec<C64> = f.phi_zero.iter().map(|&x| C64::new(x, 0.0)).collect();
        assert!((dark_overlap(&dark, &f) - 1.0).abs() < 1e-14);

        let psi2 = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!(dark_overlap(&psi2, &f) < 1e-30);

        // (ψ1+ψ3)/√2 at ϑ = π/4 is orthogonal to Φ0 = (1,0,−1)/√2
        let r = 1.0 / 2.0_f64.sqrt();
        let sym = vec![C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)];
        assert!(dark_overlap(&sym, &f) < 1e-28);
    }
}
