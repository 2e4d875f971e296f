//! Time-dependent complex pulse envelopes and the pulse-pair builders used by
//! the transfer protocols.
//!
//! Shapes evaluate to `Ω(t)·e^{iφ}` with a nonnegative magnitude Ω and a
//! constant phase φ per component; anything richer (counterdiabatic drives,
//! composite outputs) is carried by [`NumericPulse`], a cubic-spline sampled
//! envelope.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PulseError {
    #[error("pulse delay must be positive (got {0}); negate via the ordering flag instead")]
    NonPositiveDelay(f64),
    #[error("pulse width must be positive (got {0})")]
    NonPositiveWidth(f64),
    #[error("pulse peak must be nonnegative (got {0})")]
    NegativePeak(f64),
    #[error("fractional mixing angle must lie in (0, π/2], got {0}")]
    ThetaOutOfRange(f64),
    #[error("numeric pulse needs at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("numeric pulse sample times must be strictly increasing")]
    NonMonotonicSamples,
    #[error("composite sequence needs at least one phase pair")]
    EmptyPhases,
    #[error("composite pair spacing {spacing} overlaps windows (need at least {min})")]
    OverlappingWindows { spacing: f64, min: f64 },
    #[error("counterdiabatic synthesis requires nonnegative real envelopes")]
    NonRealEnvelope,
    #[error("invalid analysis window [{0}, {1}]")]
    InvalidWindow(f64, f64),
}

/// A closed-form pulse envelope.
///
/// `width` is the 1/e half-width of the amplitude for `Gaussian`, the full
/// base for `SinSquared`, and the duration for `Square`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseShape {
    Gaussian { peak: f64, center: f64, width: f64, #[serde(default)] phase: f64 },
    SinSquared { peak: f64, center: f64, width: f64, #[serde(default)] phase: f64 },
    Constant { peak: f64, #[serde(default)] phase: f64 },
    Square { peak: f64, center: f64, width: f64, #[serde(default)] phase: f64 },
    Sum { components: Vec<PulseShape> },
}

impl PulseShape {
    pub fn gaussian(peak: f64, center: f64, width: f64) -> Self {
        Self::Gaussian { peak, center, width, phase: 0.0 }
    }

    /// Complex amplitude `Ω(t)·e^{iφ}`.
    pub fn eval(&self, t: f64) -> C64 {
        match self {
            Self::Gaussian { peak, center, width, phase } => {
                let x = (t - center) / width;
                C64::from_polar(peak * (-x * x).exp(), *phase)
            }
            Self::SinSquared { peak, center, width, phase } => {
                let x = t - center;
                if x.abs() <= width / 2.0 {
                    let s = (std::f64::consts::PI * (x + width / 2.0) / width).sin();
                    C64::from_polar(peak * s * s, *phase)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            Self::Constant { peak, phase } => C64::from_polar(*peak, *phase),
            Self::Square { peak, center, width, phase } => {
                if (t - center).abs() <= width / 2.0 {
                    C64::from_polar(*peak, *phase)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            Self::Sum { components } => components.iter().map(|c| c.eval(t)).sum(),
        }
    }

    /// Envelope magnitude `|Ω(t)|`.
    pub fn magnitude(&self, t: f64) -> f64 {
        self.eval(t).norm()
    }

    /// Copy shifted later in time by `dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        let mut out = self.clone();
        out.shift_in_place(dt);
        out
    }

    fn shift_in_place(&mut self, dt: f64) {
        match self {
            Self::Gaussian { center, .. }
            | Self::SinSquared { center, .. }
            | Self::Square { center, .. } => *center += dt,
            Self::Constant { .. } => {}
            Self::Sum { components } => {
                components.iter_mut().for_each(|c| c.shift_in_place(dt));
            }
        }
    }

    /// Copy with `extra` radians added to every component phase.
    pub fn with_phase(&self, extra: f64) -> Self {
        let mut out = self.clone();
        out.add_phase(extra);
        out
    }

    fn add_phase(&mut self, extra: f64) {
        match self {
            Self::Gaussian { phase, .. }
            | Self::SinSquared { phase, .. }
            | Self::Constant { phase, .. }
            | Self::Square { phase, .. } => *phase += extra,
            Self::Sum { components } => components.iter_mut().for_each(|c| c.add_phase(extra)),
        }
    }

    /// True when every component has zero phase (a nonnegative real envelope).
    pub fn is_real_envelope(&self) -> bool {
        match self {
            Self::Gaussian { phase, .. }
            | Self::SinSquared { phase, .. }
            | Self::Constant { phase, .. }
            | Self::Square { phase, .. } => *phase == 0.0,
            Self::Sum { components } => components.iter().all(|c| c.is_real_envelope()),
        }
    }

    pub fn validate(&self) -> Result<(), PulseError> {
        match self {
            Self::Gaussian { peak, width, .. }
            | Self::SinSquared { peak, width, .. }
            | Self::Square { peak, width, .. } => {
                if *peak < 0.0 {
                    return Err(PulseError::NegativePeak(*peak));
                }
                if *width <= 0.0 {
                    return Err(PulseError::NonPositiveWidth(*width));
                }
                Ok(())
            }
            Self::Constant { peak, .. } => {
                if *peak < 0.0 {
                    return Err(PulseError::NegativePeak(*peak));
                }
                Ok(())
            }
            Self::Sum { components } => components.iter().try_for_each(|c| c.validate()),
        }
    }
}

/// A sampled complex envelope with natural cubic-spline interpolation.
///
/// Evaluates to zero outside the sampled window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericPulse {
    times: Vec<f64>,
    values: Vec<C64>,
    #[serde(skip)]
    second_derivs: Vec<C64>,
}

impl NumericPulse {
    pub fn new(times: Vec<f64>, values: Vec<C64>) -> Result<Self, PulseError> {
        if times.len() < 4 {
            return Err(PulseError::TooFewSamples(times.len()));
        }
        if times.len() != values.len() {
            return Err(PulseError::NonMonotonicSamples);
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PulseError::NonMonotonicSamples);
        }
        let second_derivs = spline_second_derivs(&times, &values);
        Ok(Self { times, values, second_derivs })
    }

    pub fn eval(&self, t: f64) -> C64 {
        let n = self.times.len();
        if t < self.times[0] || t > self.times[n - 1] {
            return C64::new(0.0, 0.0);
        }
        let i = match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(k) => k.min(n - 2),
            Err(k) => k.saturating_sub(1).min(n - 2),
        };
        let h = self.times[i + 1] - self.times[i];
        let a = (self.times[i + 1] - t) / h;
        let b = (t - self.times[i]) / h;
        self.values[i] * a
            + self.values[i + 1] * b
            + (self.second_derivs[i] * (a * a * a - a)
                + self.second_derivs[i + 1] * (b * b * b - b))
                * (h * h / 6.0)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// Trapezoid quadrature of `f(value)` over the sample grid.
    pub fn integrate_samples(&self, f: impl Fn(C64) -> f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.times.len() - 1 {
            let dt = self.times[i + 1] - self.times[i];
            acc += 0.5 * dt * (f(self.values[i]) + f(self.values[i + 1]));
        }
        acc
    }

    fn rebuild_spline(&mut self) {
        self.second_derivs = spline_second_derivs(&self.times, &self.values);
    }
}

/// Natural cubic spline second derivatives (Thomas algorithm).
fn spline_second_derivs(x: &[f64], y: &[C64]) -> Vec<C64> {
    let n = x.len();
    let mut m = vec![C64::new(0.0, 0.0); n];
    if n < 3 {
        return m;
    }
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    // forward sweep on the interior block, natural boundary m[0]=m[n-1]=0
    for i in 2..n - 1 {
        let lower = (x[i] - x[i - 1]) / 6.0;
        let w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] = rhs[i] - rhs[i - 1] * w;
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - m[i + 1] * upper[i]) / diag[i];
    }
    m
}

/// Either a closed-form shape or a sampled envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pulse {
    Shaped(PulseShape),
    Numeric(NumericPulse),
}

impl Pulse {
    pub fn eval(&self, t: f64) -> C64 {
        match self {
            Self::Shaped(s) => s.eval(t),
            Self::Numeric(n) => n.eval(t),
        }
    }

    pub fn magnitude(&self, t: f64) -> f64 {
        self.eval(t).norm()
    }
}

impl From<PulseShape> for Pulse {
    fn from(s: PulseShape) -> Self {
        Self::Shaped(s)
    }
}

impl From<NumericPulse> for Pulse {
    fn from(n: NumericPulse) -> Self {
        Self::Numeric(n)
    }
}

/// Named pulse envelopes consumed by couplings at assembly time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub entries: BTreeMap<String, Pulse>,
    #[serde(default)]
    pub time_origin: f64,
}

impl PulseSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, pulse: impl Into<Pulse>) -> &mut Self {
        self.entries.insert(id.into(), pulse.into());
        self
    }

    pub fn get(&self, id: &str) -> Option<&Pulse> {
        self.entries.get(id)
    }

    /// Evaluate pulse `id` at absolute time `t` (the schedule's origin shift
    /// applied). `None` when the id is unknown.
    pub fn eval(&self, id: &str, t: f64) -> Option<C64> {
        self.entries.get(id).map(|p| p.eval(t - self.time_origin))
    }

    /// Rebuild spline coefficients on numeric entries. Needed after
    /// deserializing a schedule that carries `NumericPulse` data.
    pub fn rebuild_numeric(&mut self) {
        for pulse in self.entries.values_mut() {
            if let Pulse::Numeric(n) = pulse {
                n.rebuild_spline();
            }
        }
    }
}

/// Counterintuitively ordered Gaussian pair: the Stokes envelope precedes the
/// pump so the mixing angle sweeps 0 → π/2.
///
/// The pair is centered on t = 0: S peaks at −delay/2, P at +delay/2. Shift
/// with [`PulseShape::shifted`] to place it elsewhere. Callers wanting the
/// intuitive order use [`intuitive_pair`] instead of negating the delay.
pub fn counterintuitive_pair(
    peak_p: f64,
    peak_s: f64,
    tau: f64,
    delay: f64,
) -> Result<(PulseShape, PulseShape), PulseError> {
    if delay <= 0.0 {
        return Err(PulseError::NonPositiveDelay(delay));
    }
    if tau <= 0.0 {
        return Err(PulseError::NonPositiveWidth(tau));
    }
    if peak_p < 0.0 {
        return Err(PulseError::NegativePeak(peak_p));
    }
    if peak_s < 0.0 {
        return Err(PulseError::NegativePeak(peak_s));
    }
    let p = PulseShape::gaussian(peak_p, delay / 2.0, tau);
    let s = PulseShape::gaussian(peak_s, -delay / 2.0, tau);
    Ok((p, s))
}

/// Intuitively ordered Gaussian pair (pump precedes Stokes): the b-STIRAP
/// ordering.
pub fn intuitive_pair(
    peak_p: f64,
    peak_s: f64,
    tau: f64,
    delay: f64,
) -> Result<(PulseShape, PulseShape), PulseError> {
    let (p, s) = counterintuitive_pair(peak_s, peak_p, tau, delay)?;
    // swap roles: the pump takes the early slot
    Ok((s, p))
}

/// Fractional-STIRAP pair halting the mixing-angle sweep at `theta_fs`.
///
/// `P(t) = Ω₀ sin θ · G(t − Δt/2)` and
/// `S(t) = Ω₀ [G(t + Δt/2) + cos θ · G(t − Δt/2)]` with `G` a unit Gaussian of
/// width τ, so that ϑ(t → −∞) = 0 and ϑ(t → +∞) = θ_fs. At θ_fs = π/2 this
/// reduces exactly to [`counterintuitive_pair`].
pub fn fractional_pair(
    peak: f64,
    tau: f64,
    delay: f64,
    theta_fs: f64,
) -> Result<(PulseShape, PulseShape), PulseError> {
    if !(theta_fs > 0.0 && theta_fs <= FRAC_PI_2) {
        return Err(PulseError::ThetaOutOfRange(theta_fs));
    }
    if theta_fs == FRAC_PI_2 {
        return counterintuitive_pair(peak, peak, tau, delay);
    }
    if delay <= 0.0 {
        return Err(PulseError::NonPositiveDelay(delay));
    }
    if tau <= 0.0 {
        return Err(PulseError::NonPositiveWidth(tau));
    }
    if peak < 0.0 {
        return Err(PulseError::NegativePeak(peak));
    }
    let p = PulseShape::gaussian(peak * theta_fs.sin(), delay / 2.0, tau);
    let s = PulseShape::Sum {
        components: vec![
            PulseShape::gaussian(peak, -delay / 2.0, tau),
            PulseShape::gaussian(peak * theta_fs.cos(), delay / 2.0, tau),
        ],
    };
    Ok((p, s))
}

/// Time-reverse of [`fractional_pair`] about t = 0: the ratio starts locked at
/// tan θ_lock and the mixing angle sweeps θ_lock → 0.
pub fn inverted_fractional_pair(
    peak: f64,
    tau: f64,
    delay: f64,
    theta_lock: f64,
) -> Result<(PulseShape, PulseShape), PulseError> {
    let (p, s) = fractional_pair(peak, tau, delay, theta_lock)?;
    Ok((mirror(&p), mirror(&s)))
}

/// Reflect a shape about t = 0.
fn mirror(shape: &PulseShape) -> PulseShape {
    let mut out = shape.clone();
    mirror_in_place(&mut out);
    out
}

fn mirror_in_place(shape: &mut PulseShape) {
    match shape {
        PulseShape::Gaussian { center, .. }
        | PulseShape::SinSquared { center, .. }
        | PulseShape::Square { center, .. } => *center = -*center,
        PulseShape::Constant { .. } => {}
        PulseShape::Sum { components } => components.iter_mut().for_each(mirror_in_place),
    }
}

/// Mixing-angle rate dϑ/dt for the envelope pair (P, S), with
/// tan ϑ = |P|/|S|.
///
/// Closed form when both shapes are single Gaussians; otherwise a 5-point
/// central difference with step `window / 10⁶`. Defined as 0 wherever both
/// envelopes vanish.
pub fn theta_rate(p: &PulseShape, s: &PulseShape, t: f64, window: f64) -> f64 {
    if let Some(rate) = theta_rate_gaussian(p, 1.0, s, 1.0, t) {
        return rate;
    }
    theta_rate_difference(|t| p.magnitude(t), |t| s.magnitude(t), t, window)
}

/// [`theta_rate`] for schedule entries with coupling strength scales applied,
/// i.e. tan ϑ = scale_p·|P| / (scale_s·|S|).
pub fn theta_rate_scaled(
    p: &Pulse,
    scale_p: f64,
    s: &Pulse,
    scale_s: f64,
    t: f64,
    window: f64,
) -> f64 {
    if let (Pulse::Shaped(ps), Pulse::Shaped(ss)) = (p, s) {
        if let Some(rate) = theta_rate_gaussian(ps, scale_p.abs(), ss, scale_s.abs(), t) {
            return rate;
        }
    }
    theta_rate_difference(
        |t| scale_p.abs() * p.magnitude(t),
        |t| scale_s.abs() * s.magnitude(t),
        t,
        window,
    )
}

fn theta_rate_gaussian(
    p: &PulseShape,
    scale_p: f64,
    s: &PulseShape,
    scale_s: f64,
    t: f64,
) -> Option<f64> {
    if let (
        PulseShape::Gaussian { peak: ap, center: cp, width: wp, .. },
        PulseShape::Gaussian { peak: as_, center: cs, width: ws, .. },
    ) = (p, s)
    {
        let ap = scale_p * ap;
        let as_ = scale_s * as_;
        if ap == 0.0 || as_ == 0.0 {
            return Some(0.0);
        }
        // r = |P|/|S|; dϑ/dt = r'/(1+r²), with r'/r the log-derivative of the
        // Gaussian ratio
        let xp = (t - cp) / wp;
        let xs = (t - cs) / ws;
        let log_r = (ap / as_).ln() - xp * xp + xs * xs;
        let dlog_r = -2.0 * xp / wp + 2.0 * xs / ws;
        // r/(1+r²) = 1/(2 cosh(log r)), numerically safe for large |log r|
        Some(dlog_r / (2.0 * log_r.cosh()))
    } else {
        None
    }
}

fn theta_rate_difference(
    p_mag: impl Fn(f64) -> f64,
    s_mag: impl Fn(f64) -> f64,
    t: f64,
    window: f64,
) -> f64 {
    let h = window / 1e6;
    let th = |t: f64| {
        let pm = p_mag(t);
        let sm = s_mag(t);
        if pm == 0.0 && sm == 0.0 {
            f64::NAN
        } else {
            pm.atan2(sm)
        }
    };
    let stencil = [th(t - 2.0 * h), th(t - h), th(t + h), th(t + 2.0 * h)];
    if stencil.iter().any(|v| v.is_nan()) {
        return 0.0;
    }
    (stencil[0] - 8.0 * stencil[1] + 8.0 * stencil[2] - stencil[3]) / (12.0 * h)
}

/// Counterdiabatic drive for the 1↔3 leg: magnitude 2·dϑ/dt at quadrature
/// phase +π/2, sampled on a dense grid over `[t0, t1]`.
///
/// Applied as a coupling with unit strength scale, assembly's ½ factor puts
/// ±i·dϑ/dt on the (1,3)/(3,1) off-diagonals, cancelling the dark↔bright
/// nonadiabatic coupling. dϑ/dt is defined as 0 where both envelopes vanish.
pub fn counterdiabatic(
    p: &PulseShape,
    s: &PulseShape,
    t0: f64,
    t1: f64,
) -> Result<NumericPulse, PulseError> {
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(PulseError::InvalidWindow(t0, t1));
    }
    if !p.is_real_envelope() || !s.is_real_envelope() {
        return Err(PulseError::NonRealEnvelope);
    }
    let n = 20_001;
    let window = t1 - t0;
    let dt = window / (n - 1) as f64;
    let mut times = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let t = t0 + i as f64 * dt;
        let rate = theta_rate(p, s, t, window);
        times.push(t);
        values.push(C64::new(0.0, 2.0 * rate));
    }
    NumericPulse::new(times, values)
}

/// Geometry of one STIRAP pulse pair, reused across composite sequences.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StirapPairSpec {
    pub peak_p: f64,
    pub peak_s: f64,
    pub tau: f64,
    pub delay: f64,
}

/// Concatenate `phases.len()` non-overlapping STIRAP pairs into one schedule
/// with pulse ids "P" and "S".
///
/// Odd pairs (first, third, ...) drive 1→3 with the Stokes leading; even
/// pairs swap the lead pulse and drive 3→1. Pair k's envelopes are multiplied
/// by `e^{iφ}` with `(φ_P, φ_S) = phases[k]`. Pairs are placed `spacing`
/// apart, centered about t = 0; the default spacing is `delay + 10τ`.
pub fn composite_sequence(
    pair: &StirapPairSpec,
    phases: &[(f64, f64)],
    spacing: Option<f64>,
) -> Result<PulseSchedule, PulseError> {
    if phases.is_empty() {
        return Err(PulseError::EmptyPhases);
    }
    let min_spacing = pair.delay + 8.0 * pair.tau;
    let spacing = spacing.unwrap_or(pair.delay + 10.0 * pair.tau);
    if phases.len() > 1 && spacing < min_spacing {
        return Err(PulseError::OverlappingWindows { spacing, min: min_spacing });
    }
    let n = phases.len();
    let mut pumps = Vec::with_capacity(n);
    let mut stokes = Vec::with_capacity(n);
    for (k, &(phase_p, phase_s)) in phases.iter().enumerate() {
        let center = (k as f64 - (n - 1) as f64 / 2.0) * spacing;
        let (p, s) = if k % 2 == 0 {
            counterintuitive_pair(pair.peak_p, pair.peak_s, pair.tau, pair.delay)?
        } else {
            intuitive_pair(pair.peak_p, pair.peak_s, pair.tau, pair.delay)?
        };
        pumps.push(p.shifted(center).with_phase(phase_p));
        stokes.push(s.shifted(center).with_phase(phase_s));
    }
    let mut schedule = PulseSchedule::new();
    schedule.insert("P", PulseShape::Sum { components: pumps });
    schedule.insert("S", PulseShape::Sum { components: stokes });
    Ok(schedule)
}

/// Window (start, end) that covers an n-pair composite sequence with the
/// default-or-given spacing.
pub fn composite_window(pair: &StirapPairSpec, n_pairs: usize, spacing: Option<f64>) -> (f64, f64) {
    let spacing = spacing.unwrap_or(pair.delay + 10.0 * pair.tau);
    let half = (n_pairs.saturating_sub(1)) as f64 / 2.0 * spacing
        + pair.delay / 2.0
        + 6.0 * pair.tau;
    (-half, half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn gaussian_eval() {
        let g = PulseShape::gaussian(1.0, 0.0, 1.0);
        assert!((g.eval(0.0).re - 1.0).abs() < 1e-15);
        assert!((g.eval(1.0).re - (-1.0_f64).exp()).abs() < 1e-15);
        assert_eq!(g.eval(0.5).im, 0.0);
    }

    #[test]
    fn constant_with_pi_phase_is_negative() {
        let c = PulseShape::Constant { peak: 2.0, phase: PI };
        let v = c.eval(123.4);
        assert!((v.re + 2.0).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn sum_is_exact_superposition() {
        let a = PulseShape::gaussian(1.0, -1.0, 0.7);
        let b = PulseShape::Constant { peak: 0.5, phase: FRAC_PI_2 };
        let sum = PulseShape::Sum { components: vec![a.clone(), b.clone()] };
        for &t in &[-2.0, 0.0, 0.3, 5.0] {
            assert_eq!(sum.eval(t), a.eval(t) + b.eval(t));
        }
    }

    #[test]
    fn counterintuitive_pair_crosses_at_center() {
        let tau = 1.0;
        let (p, s) = counterintuitive_pair(1.0, 1.0, tau, 2.0 * tau).unwrap();
        // equal envelopes at the crossing → ϑ = 45°
        let theta = p.magnitude(0.0).atan2(s.magnitude(0.0));
        assert!((theta - FRAC_PI_4).abs() < 1e-14);
        // S precedes P
        assert!(s.magnitude(-1.0) > p.magnitude(-1.0));
        assert!(p.magnitude(1.0) > s.magnitude(1.0));
    }

    #[test]
    fn counterintuitive_pair_rejects_bad_delay() {
        assert!(matches!(
            counterintuitive_pair(1.0, 1.0, 1.0, 0.0),
            Err(PulseError::NonPositiveDelay(_))
        ));
        assert!(matches!(
            counterintuitive_pair(1.0, 1.0, 1.0, -2.0),
            Err(PulseError::NonPositiveDelay(_))
        ));
    }

    #[test]
    fn fractional_pair_limits() {
        let (p, s) = fractional_pair(1.0, 1.0, 1.2, FRAC_PI_4).unwrap();
        // asymptotic ratio tan(π/4) = 1
        let t = 8.0;
        let ratio = p.magnitude(t) / s.magnitude(t);
        assert!((ratio - 1.0).abs() < 1e-10, "ratio {ratio}");
        // early times: S dominates
        assert!(p.magnitude(-8.0) / s.magnitude(-8.0) < 1e-10);
    }

    #[test]
    fn fractional_at_pi_half_is_counterintuitive_pair() {
        let a = fractional_pair(2.0, 1.0, 1.5, FRAC_PI_2).unwrap();
        let b = counterintuitive_pair(2.0, 2.0, 1.0, 1.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn theta_rate_matches_finite_difference_for_gaussians() {
        let (p, s) = counterintuitive_pair(3.0, 3.0, 1.0, 1.1).unwrap();
        let window = 13.0;
        let h = 1e-6;
        for &t in &[-2.0, -0.5, 0.0, 0.4, 2.0] {
            let analytic = theta_rate(&p, &s, t, window);
            let th = |t: f64| p.magnitude(t).atan2(s.magnitude(t));
            let numeric = (th(t + h) - th(t - h)) / (2.0 * h);
            assert!((analytic - numeric).abs() < 1e-7, "t={t}: {analytic} vs {numeric}");
        }
    }

    #[test]
    fn counterdiabatic_quadrature_matches_angle_swing() {
        // Ω₀τ = 2 pair: ∫ (magnitude/2) dt must equal ϑ(t1) − ϑ(t0)
        let (p, s) = counterintuitive_pair(2.0, 2.0, 1.0, 1.1).unwrap();
        let (t0, t1) = (-6.55, 6.55);
        let cd = counterdiabatic(&p, &s, t0, t1).unwrap();
        let swing = cd.integrate_samples(|v| v.norm() / 2.0);
        let th = |t: f64| p.magnitude(t).atan2(s.magnitude(t));
        let expected = th(t1) - th(t0);
        assert!((swing - expected).abs() < 1e-6, "swing {swing} vs {expected}");
    }

    #[test]
    fn counterdiabatic_of_zero_pump_is_zero() {
        let p = PulseShape::gaussian(0.0, 0.5, 1.0);
        let s = PulseShape::gaussian(1.0, -0.5, 1.0);
        let cd = counterdiabatic(&p, &s, -5.0, 5.0).unwrap();
        assert!(cd.samples().all(|(_, v)| v.norm() == 0.0));
    }

    #[test]
    fn counterdiabatic_constant_rate_pair() {
        // P = A sin(ct), S = A cos(ct) on a quarter period → ϑ = ct exactly,
        // so the drive magnitude is 2c. Closed-form shapes cannot express
        // sin/cos envelopes; emulate via a NumericPulse check against
        // theta_rate's finite-difference path using Sum-wrapped Gaussians is
        // weaker, so check the analytic identity directly on samples.
        let c = 0.7;
        let a = 1.3;
        let n = 101;
        let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let p_vals: Vec<C64> = times.iter().map(|&t| C64::new(a * (c * t).sin(), 0.0)).collect();
        let s_vals: Vec<C64> = times.iter().map(|&t| C64::new(a * (c * t).cos(), 0.0)).collect();
        let p = NumericPulse::new(times.clone(), p_vals).unwrap();
        let s = NumericPulse::new(times.clone(), s_vals).unwrap();
        for &t in &[0.2, 0.5, 0.8] {
            let theta = p.eval(t).norm().atan2(s.eval(t).norm());
            assert!((theta - c * t).abs() < 1e-6);
        }
    }

    #[test]
    fn numeric_pulse_spline_accuracy() {
        let n = 200;
        let times: Vec<f64> = (0..n).map(|i| -3.0 + 6.0 * i as f64 / (n - 1) as f64).collect();
        let values: Vec<C64> =
            times.iter().map(|&t| C64::new((-t * t).exp(), 0.5 * t.sin())).collect();
        let pulse = NumericPulse::new(times, values).unwrap();
        for i in 0..50 {
            let t = -2.9 + 5.8 * i as f64 / 49.0;
            let exact = C64::new((-t * t).exp(), 0.5 * t.sin());
            assert!((pulse.eval(t) - exact).norm() < 1e-5);
        }
        assert_eq!(pulse.eval(100.0), C64::new(0.0, 0.0));
    }

    #[test]
    fn numeric_pulse_validation() {
        let t = vec![0.0, 1.0, 2.0];
        let v = vec![C64::new(0.0, 0.0); 3];
        assert!(matches!(NumericPulse::new(t, v), Err(PulseError::TooFewSamples(3))));
        let t = vec![0.0, 1.0, 1.0, 2.0];
        let v = vec![C64::new(0.0, 0.0); 4];
        assert!(matches!(NumericPulse::new(t, v), Err(PulseError::NonMonotonicSamples)));
    }

    #[test]
    fn composite_sequence_alternates_lead_pulse() {
        let pair = StirapPairSpec { peak_p: 1.0, peak_s: 1.0, tau: 1.0, delay: 1.0 };
        let schedule = composite_sequence(&pair, &[(0.0, 0.0), (0.0, 0.0)], None).unwrap();
        let spacing = 1.0 + 10.0;
        let c0 = -spacing / 2.0;
        let c1 = spacing / 2.0;
        let p = schedule.get("P").unwrap();
        let s = schedule.get("S").unwrap();
        // pair 1: S leads; pair 2: P leads
        assert!(s.magnitude(c0 - 0.5) > p.magnitude(c0 - 0.5));
        assert!(p.magnitude(c1 - 0.5) > s.magnitude(c1 - 0.5));
    }

    #[test]
    fn composite_sequence_rejects_overlap_and_empty() {
        let pair = StirapPairSpec { peak_p: 1.0, peak_s: 1.0, tau: 1.0, delay: 1.0 };
        assert!(matches!(
            composite_sequence(&pair, &[], None),
            Err(PulseError::EmptyPhases)
        ));
        assert!(matches!(
            composite_sequence(&pair, &[(0.0, 0.0), (0.0, 0.0)], Some(2.0)),
            Err(PulseError::OverlappingWindows { .. })
        ));
    }
}
