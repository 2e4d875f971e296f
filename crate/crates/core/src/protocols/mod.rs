//! Canned experiments: schemes, pulses, propagation and reductions packaged
//! into named transfer protocols and parameter sweeps.

mod gates;
mod spatial;

pub use gates::{run_rotation_gate, run_tripod_gate, RotationGateParams, TripodGateParams};
pub use spatial::{run_nonreciprocity, three_guide_transfer, NonreciprocityParams};

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adiabatic::{global_adiabaticity, AdiabaticError};
use crate::linkage::{cavity_lambda_scheme, lambda_scheme, Coupling, SchemeError};
use crate::propagator::{
    photon_emission_probability, propagate, transfer_efficiency, IntegratorConfig,
    PropagateError, Trajectory,
};
use crate::pulses::{
    composite_sequence, composite_window, counterdiabatic, counterintuitive_pair,
    fractional_pair, intuitive_pair, PulseError, PulseSchedule, PulseShape, StirapPairSpec,
};

/// Pads every protocol window: envelopes are below e^{−36} of peak beyond
/// six Gaussian widths.
pub(crate) const WINDOW_SIGMAS: f64 = 6.0;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Pulse(#[from] PulseError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Propagate(#[from] PropagateError),
    #[error(transparent)]
    Adiabatic(#[from] AdiabaticError),
    #[error("bad protocol parameter: {0}")]
    BadParameter(String),
}

/// Outcome of one protocol run: named scalar reductions, the (optional)
/// trajectory behind them, and a note recording where the parameters came
/// from.
#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub label: String,
    pub scalars: BTreeMap<String, f64>,
    pub trajectory: Option<Trajectory>,
    /// Induced map on the {ψ1, ψ3} qubit, for the gate protocols.
    pub gate: Option<[[C64; 2]; 2]>,
    pub notes: String,
}

impl ProtocolResult {
    fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            scalars: BTreeMap::new(),
            trajectory: None,
            gate: None,
            notes: String::new(),
        }
    }

    fn set(&mut self, key: &str, value: f64) -> &mut Self {
        self.scalars.insert(key.to_string(), value);
        self
    }

    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).copied()
    }
}

/// One axis of a parameter sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepAxis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Scalar observable over a 1D or 2D parameter grid. The grid is stored
/// row-major with axis1 contiguous: `grid[i2 * n1 + i1]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub observable: String,
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    pub grid: Vec<f64>,
}

impl SweepResult {
    pub fn value(&self, i1: usize, i2: usize) -> f64 {
        self.grid[i2 * self.axis1.values.len() + i1]
    }

    pub fn row(&self, i2: usize) -> &[f64] {
        let n1 = self.axis1.values.len();
        &self.grid[i2 * n1..(i2 + 1) * n1]
    }
}

/// Widest contiguous span of `axis` values whose observable stays at or above
/// `threshold`.
pub fn plateau_width(axis: &[f64], values: &[f64], threshold: f64) -> f64 {
    let mut best = 0.0_f64;
    let mut start: Option<usize> = None;
    for i in 0..axis.len() {
        if values[i] >= threshold {
            if start.is_none() {
                start = Some(i);
            }
            best = best.max(axis[i] - axis[start.unwrap()]);
        } else {
            start = None;
        }
    }
    best
}

/// Parameters of a resonantly driven Λ transfer.
///
/// `omega_p`/`omega_s` are the peak coupling matrix elements: the assembled
/// off-diagonal |H₁₂| peaks at Ω₀, so the pulse envelopes run at 2Ω₀ (the
/// same construction as the cavity leg, where a 2g envelope yields the
/// matrix element g). `gamma2` is the population decay rate of the
/// intermediate level; the level's amplitude rate is γ₂/2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StirapParams {
    pub omega_p: f64,
    pub omega_s: f64,
    /// Gaussian 1/e half-width of the envelopes.
    pub tau: f64,
    /// Stokes-to-pump center separation; positive is counterintuitive.
    pub delay: f64,
    /// Single-photon detuning Δ on the intermediate level.
    #[serde(default)]
    pub delta: f64,
    /// Two-photon detuning δ on the target level.
    #[serde(default)]
    pub delta_two: f64,
    /// Population decay rate of the intermediate level.
    #[serde(default)]
    pub gamma2: f64,
}

impl StirapParams {
    /// Symmetric-peak counterintuitive setup with Ω₀τ as the adiabaticity
    /// knob, on resonance.
    pub fn ideal(omega_tau: f64, tau: f64, delay: f64) -> Self {
        Self {
            omega_p: omega_tau / tau,
            omega_s: omega_tau / tau,
            tau,
            delay,
            delta: 0.0,
            delta_two: 0.0,
            gamma2: 0.0,
        }
    }

    pub fn with_gamma2(mut self, gamma2: f64) -> Self {
        self.gamma2 = gamma2;
        self
    }

    /// Envelope peaks (twice the coupling matrix elements).
    pub fn envelope_peaks(&self) -> (f64, f64) {
        (2.0 * self.omega_p, 2.0 * self.omega_s)
    }

    /// Amplitude-decay rate placed on the intermediate level.
    pub fn amplitude_rate(&self) -> f64 {
        self.gamma2 / 2.0
    }

    /// Integration window covering the pair.
    pub fn window(&self) -> (f64, f64) {
        let half = self.delay.abs() / 2.0 + WINDOW_SIGMAS * self.tau;
        (-half, half)
    }

    fn check(&self) -> Result<(), ProtocolError> {
        if self.tau <= 0.0 {
            return Err(ProtocolError::BadParameter(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }
}

/// Gaussian pair at centers ∓delay/2 regardless of sign: delay > 0 is the
/// counterintuitive order, delay < 0 intuitive, delay = 0 coincident.
pub(crate) fn signed_delay_pair(params: &StirapParams) -> (PulseShape, PulseShape) {
    let (peak_p, peak_s) = params.envelope_peaks();
    let p = PulseShape::gaussian(peak_p, params.delay / 2.0, params.tau);
    let s = PulseShape::gaussian(peak_s, -params.delay / 2.0, params.tau);
    (p, s)
}

pub(crate) fn pair_schedule(p: PulseShape, s: PulseShape) -> PulseSchedule {
    let mut schedule = PulseSchedule::new();
    schedule.insert("P", p);
    schedule.insert("S", s);
    schedule
}

pub(crate) fn basis_state(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[k] = C64::new(1.0, 0.0);
    v
}

fn min_finite_or_inf(trace: Option<f64>) -> f64 {
    trace.unwrap_or(f64::INFINITY)
}

/// Counterintuitive Λ transfer 1→3 riding the dark state.
pub fn run_stirap(
    params: &StirapParams,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    params.check()?;
    if params.delay <= 0.0 {
        return Err(ProtocolError::Pulse(PulseError::NonPositiveDelay(params.delay)));
    }
    let scheme = lambda_scheme(params.delta, params.delta_two, params.amplitude_rate())?;
    let (peak_p, peak_s) = params.envelope_peaks();
    let (p, s) = counterintuitive_pair(peak_p, peak_s, params.tau, params.delay)?;
    let schedule = pair_schedule(p, s);
    let (t0, t1) = params.window();
    let traj = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?;
    let area = global_adiabaticity(&scheme, &schedule, t0, t1)?;

    let mut result = ProtocolResult::new("stirap");
    result
        .set("efficiency", transfer_efficiency(&traj, 2))
        .set("peak_intermediate_population", traj.peak_population(1))
        .set("min_adiabaticity_ratio", min_finite_or_inf(traj.min_adiabaticity_ratio()))
        .set("min_dark_overlap", min_finite_or_inf(traj.min_dark_overlap()))
        .set("final_norm_sq", traj.final_norm_sq())
        .set("loss_total", traj.final_loss().iter().sum())
        .set("pulse_area", area.pulse_area);
    result.notes = format!(
        "counterintuitive Gaussian pair, Ω_Pτ={:.3}, Ω_Sτ={:.3}, Δt/τ={:.3}, Δ={:.3}, δ={:.3}, γ₂={:.3}",
        params.omega_p * params.tau,
        params.omega_s * params.tau,
        params.delay / params.tau,
        params.delta,
        params.delta_two,
        params.gamma2
    );
    result.trajectory = Some(traj);
    Ok(result)
}

/// Fractional STIRAP: halt the mixing-angle sweep at `theta_fs`, preparing
/// cos ϑ·ψ1 − sin ϑ·ψ3. `omega` is the peak coupling matrix element.
pub fn run_fractional(
    omega: f64,
    tau: f64,
    delay: f64,
    theta_fs: f64,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    let scheme = lambda_scheme(0.0, 0.0, 0.0)?;
    let (p, s) = fractional_pair(2.0 * omega, tau, delay, theta_fs)?;
    let schedule = pair_schedule(p, s);
    let half = delay / 2.0 + WINDOW_SIGMAS * tau;
    let traj = propagate(&scheme, &schedule, -half, half, &basis_state(3, 0), config)?;

    let fin = traj.final_amplitudes();
    let (p1, p3) = (fin[0].norm_sqr(), fin[2].norm_sqr());
    // the dark-state prediction carries a relative phase of π between c3 and c1
    let relative_phase = (fin[2] * fin[0].conj()).arg();
    let mut result = ProtocolResult::new("fractional-stirap");
    result
        .set("p1", p1)
        .set("p3", p3)
        .set("p2", fin[1].norm_sqr())
        .set("efficiency", transfer_efficiency(&traj, 2))
        .set("predicted_p1", theta_fs.cos().powi(2))
        .set("predicted_p3", theta_fs.sin().powi(2))
        .set("relative_phase", relative_phase)
        .set("phase_deviation", wrap_angle(relative_phase - std::f64::consts::PI).abs());
    result.notes = format!("fractional pair, ϑ_fs={theta_fs:.4} rad, Ω₀τ={:.3}", omega * tau);
    result.trajectory = Some(traj);
    Ok(result)
}

/// Intuitive-order adiabatic passage via a bright state. Sensitive to the
/// intermediate-state lifetime, so the result carries the efficiency both at
/// the supplied γ₂ and at γ₂ = 0.
pub fn run_bstirap(
    params: &StirapParams,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    params.check()?;
    if params.delay <= 0.0 {
        return Err(ProtocolError::Pulse(PulseError::NonPositiveDelay(params.delay)));
    }
    let (peak_p, peak_s) = params.envelope_peaks();
    let (p, s) = intuitive_pair(peak_p, peak_s, params.tau, params.delay)?;
    let schedule = pair_schedule(p, s);
    let (t0, t1) = params.window();

    let run = |amplitude_rate: f64| -> Result<Trajectory, ProtocolError> {
        let scheme = lambda_scheme(params.delta, params.delta_two, amplitude_rate)?;
        Ok(propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?)
    };
    let damped = run(params.amplitude_rate())?;
    let undamped = run(0.0)?;

    let mut result = ProtocolResult::new("b-stirap");
    result
        .set("efficiency", transfer_efficiency(&damped, 2))
        .set("efficiency_undamped", transfer_efficiency(&undamped, 2))
        .set("peak_intermediate_population", damped.peak_population(1))
        .set("final_norm_sq", damped.final_norm_sq());
    result.notes = format!(
        "intuitive-order pair (bright-state passage), Ω₀τ={:.3}, Δτ={:.3}, γ₂τ={:.3}",
        params.omega_p * params.tau,
        params.delta * params.tau,
        params.gamma2 * params.tau
    );
    result.trajectory = Some(damped);
    Ok(result)
}

/// Superadiabatic STIRAP: the counterintuitive pair plus, optionally, the
/// quadrature-phase counterdiabatic drive on the 1↔3 leg. Always reports
/// both branch efficiencies. `omega` is the peak coupling matrix element.
pub fn run_sastirap(
    omega: f64,
    tau: f64,
    delay: f64,
    with_cd: bool,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    let (p, s) = counterintuitive_pair(2.0 * omega, 2.0 * omega, tau, delay)?;
    let half = delay / 2.0 + WINDOW_SIGMAS * tau;
    let (t0, t1) = (-half, half);

    let plain_scheme = lambda_scheme(0.0, 0.0, 0.0)?;
    let plain_schedule = pair_schedule(p.clone(), s.clone());
    let plain = propagate(&plain_scheme, &plain_schedule, t0, t1, &basis_state(3, 0), config)?;

    let mut cd_scheme = plain_scheme.clone();
    cd_scheme.couplings.push(Coupling::new(0, 2, "CD"));
    cd_scheme.validate()?;
    let mut cd_schedule = pair_schedule(p.clone(), s.clone());
    let cd_pulse = counterdiabatic(&p, &s, t0, t1)?;
    let cd_peak = cd_pulse.samples().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    cd_schedule.insert("CD", cd_pulse);
    let driven = propagate(&cd_scheme, &cd_schedule, t0, t1, &basis_state(3, 0), config)?;

    let eff_plain = transfer_efficiency(&plain, 2);
    let eff_cd = transfer_efficiency(&driven, 2);
    let mut result = ProtocolResult::new("sa-stirap");
    result
        .set("efficiency_plain", eff_plain)
        .set("efficiency_cd", eff_cd)
        .set("efficiency", if with_cd { eff_cd } else { eff_plain })
        .set("cd_peak", cd_peak)
        .set(
            "peak_intermediate_population",
            if with_cd { driven.peak_population(1) } else { plain.peak_population(1) },
        );
    result.notes = format!("Ω₀τ={:.3}, Δt/τ={:.3}, counterdiabatic branch {}", omega * tau, delay / tau, if with_cd { "on" } else { "off" });
    result.trajectory = Some(if with_cd { driven } else { plain });
    Ok(result)
}

/// Composite STIRAP: a phased sequence of pairs with alternating transfer
/// direction. Odd pair counts end in state 3, even counts back in state 1.
/// `omega` is the peak coupling matrix element of every pair.
pub fn run_composite(
    omega: f64,
    tau: f64,
    delay: f64,
    phases: &[(f64, f64)],
    spacing: Option<f64>,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    let pair =
        StirapPairSpec { peak_p: 2.0 * omega, peak_s: 2.0 * omega, tau, delay };
    let schedule = composite_sequence(&pair, phases, spacing)?;
    let (t0, t1) = composite_window(&pair, phases.len(), spacing);
    let scheme = lambda_scheme(0.0, 0.0, 0.0)?;
    let traj = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?;

    let expected_level = if phases.len() % 2 == 1 { 2 } else { 0 };
    let fin = traj.final_populations();
    let mut result = ProtocolResult::new("composite-stirap");
    result
        .set("efficiency", transfer_efficiency(&traj, 2))
        .set("p1_final", fin[0])
        .set("p3_final", fin[2])
        .set("expected_final_level", (expected_level + 1) as f64)
        .set("parity_residual", 1.0 - fin[expected_level])
        .set("pairs", phases.len() as f64);
    result.notes = format!("{} pairs, spacing {:?}", phases.len(), spacing);
    result.trajectory = Some(traj);
    Ok(result)
}

/// Vacuum-STIRAP single-photon generation on the cavity Λ system: drive
/// Ω_D(t) against the constant cavity coupling 2g; photon leakage at 2κ
/// completes the emission.
pub fn run_vstirap(
    g: f64,
    kappa: f64,
    gamma: f64,
    drive: PulseShape,
    t0: f64,
    t1: f64,
    config: &IntegratorConfig,
) -> Result<ProtocolResult, ProtocolError> {
    let (scheme, mut schedule) = cavity_lambda_scheme(g, kappa, gamma, 0.0, 0.0)?;
    schedule.insert("D", drive);
    let traj = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?;

    let emission = photon_emission_probability(&traj, kappa)?;
    let gamma_loss = traj.final_loss()[1];
    let residual = traj.final_norm_sq();
    let mut result = ProtocolResult::new("v-stirap");
    result
        .set("emission_probability", emission)
        .set("gamma_loss", gamma_loss)
        .set("residual_norm_sq", residual)
        .set("bookkeeping_defect", (emission + gamma_loss + residual - traj.initial_norm_sq()).abs())
        .set("min_dark_overlap", min_finite_or_inf(traj.min_dark_overlap()))
        .set("peak_intermediate_population", traj.peak_population(1));
    result.notes = format!("g/κ={:.3}, g/γ={:.3}", g / kappa.max(f64::MIN_POSITIVE), g / gamma.max(f64::MIN_POSITIVE));
    result.trajectory = Some(traj);
    Ok(result)
}

/// Transfer efficiency versus pulse delay. Negative delays run the intuitive
/// order; delay 0 is the coincident (fractional-like) limit.
pub fn delay_sweep(
    params: &StirapParams,
    delays: &[f64],
    config: &IntegratorConfig,
) -> Result<SweepResult, ProtocolError> {
    params.check()?;
    let grid: Result<Vec<f64>, ProtocolError> = delays
        .par_iter()
        .map(|&d| {
            let point = StirapParams { delay: d, ..*params };
            let (p, s) = signed_delay_pair(&point);
            let scheme = lambda_scheme(point.delta, point.delta_two, point.amplitude_rate())?;
            let schedule = pair_schedule(p, s);
            let (t0, t1) = point.window();
            let traj = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?;
            Ok(transfer_efficiency(&traj, 2))
        })
        .collect();
    Ok(SweepResult {
        observable: "efficiency".into(),
        axis1: SweepAxis { name: "delay".into(), values: delays.to_vec() },
        axis2: None,
        grid: grid?,
    })
}

/// Transfer efficiency over a (delay, peak-scale) grid: the delay-intensity
/// map whose high-efficiency plateau broadens with intensity.
pub fn delay_intensity_map(
    params: &StirapParams,
    delays: &[f64],
    peak_scales: &[f64],
    config: &IntegratorConfig,
) -> Result<SweepResult, ProtocolError> {
    params.check()?;
    let n1 = delays.len();
    let points: Vec<(usize, usize)> =
        (0..peak_scales.len()).flat_map(|i2| (0..n1).map(move |i1| (i1, i2))).collect();
    let grid: Result<Vec<f64>, ProtocolError> = points
        .par_iter()
        .map(|&(i1, i2)| {
            let point = StirapParams {
                delay: delays[i1],
                omega_p: params.omega_p * peak_scales[i2],
                omega_s: params.omega_s * peak_scales[i2],
                ..*params
            };
            if point.omega_p == 0.0 && point.omega_s == 0.0 {
                return Ok(0.0);
            }
            let (p, s) = signed_delay_pair(&point);
            let scheme = lambda_scheme(point.delta, point.delta_two, point.amplitude_rate())?;
            let schedule = pair_schedule(p, s);
            let (t0, t1) = point.window();
            let traj = propagate(&scheme, &schedule, t0, t1, &basis_state(3, 0), config)?;
            Ok(transfer_efficiency(&traj, 2))
        })
        .collect();
    Ok(SweepResult {
        observable: "efficiency".into(),
        axis1: SweepAxis { name: "delay".into(), values: delays.to_vec() },
        axis2: Some(SweepAxis { name: "peak_scale".into(), values: peak_scales.to_vec() }),
        grid: grid?,
    })
}

pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut a = x % std::f64::consts::TAU;
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    } else if a < -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}
