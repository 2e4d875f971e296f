//! Integration of `i dψ/dt = H(t) ψ` for the (generally non-Hermitian)
//! assembled Hamiltonian, over a time or propagation-distance grid.
//!
//! Norm is never renormalized: decay is physical signal. Per-level occupation
//! integrals `∫|c_k|² dt` ride along as extra quadrature components of the
//! integrated state, so the loss bookkeeping
//! `norm²(t1) + Σ_k 2γ_k ∫|c_k|² dt = norm²(t0)` holds to integrator
//! accuracy rather than to sample-grid accuracy.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adiabatic::LambdaLayout;
use crate::linalg;
use crate::linkage::{assemble_into, AssembleError, LevelScheme};
use crate::pulses::PulseSchedule;
use crate::rk;

#[derive(Debug, Error)]
pub enum PropagateError {
    #[error("invalid integration window [{t0}, {t1}]")]
    InvalidWindow { t0: f64, t1: f64 },
    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error("step size underflow near t = {t}: the problem looks stiff at this tolerance")]
    StepSizeUnderflow { t: f64 },
    #[error("diagonal-ensemble evolution requires a unitary scheme (all decay rates zero)")]
    DecayingEnsemble,
    #[error("trajectory was produced on scheme `{found}`, expected `{expected}`")]
    WrongScheme { expected: String, found: String },
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("ensemble weight must be nonnegative, got {0}")]
    NegativeWeight(f64),
    #[error("ensemble weights must sum to 1, got {0}")]
    NotNormalized(f64),
    #[error("ensemble dimension mismatch: {got} weights for {want} levels")]
    DimensionMismatch { got: usize, want: usize },
}

/// Integration method selection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// Adaptive embedded Runge-Kutta 5(4) with dense output (the default).
    AdaptiveRk54,
    /// Classical fixed-step RK4; the cross-check oracle.
    FixedRk4 { step: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    #[serde(flatten)]
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the internal step; defaults to (t1 − t0)/100 so the controller
    /// cannot stride over pulse structure.
    pub max_step: Option<f64>,
    pub sample_count: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::AdaptiveRk54,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: None,
            sample_count: 1000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), PropagateError> {
        if self.rel_tol <= 0.0 || self.abs_tol <= 0.0 {
            return Err(PropagateError::InvalidInitialState(
                "integrator tolerances must be positive".into(),
            ));
        }
        if self.sample_count < 2 {
            return Err(PropagateError::InvalidInitialState(
                "sample_count must be at least 2".into(),
            ));
        }
        if let Method::FixedRk4 { step } = self.method {
            if step <= 0.0 {
                return Err(PropagateError::InvalidInitialState(
                    "fixed step must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Whether the evolution parameter is time or a propagation coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinate {
    Time,
    Propagation,
}

impl Coordinate {
    pub fn column_name(self) -> &'static str {
        match self {
            Self::Time => "t",
            Self::Propagation => "z",
        }
    }
}

/// Sampled solution of the Schrödinger equation plus derived diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub coordinate: Coordinate,
    pub scheme_label: String,
    pub decay_rates: Vec<f64>,
    pub times: Vec<f64>,
    /// Complex amplitudes, one N-vector per sample.
    pub amplitudes: Vec<Vec<C64>>,
    /// |c_k|² per level, per sample.
    pub populations: Vec<Vec<f64>>,
    pub norm_sq: Vec<f64>,
    /// Cumulative ∫|c_k|² dt per level, per sample.
    pub occupation_integrals: Vec<Vec<f64>>,
    /// Cumulative 2γ_k ∫|c_k|² dt per level, per sample.
    pub loss_per_level: Vec<Vec<f64>>,
    /// Mixing angle ϑ(t); Λ linkages only, holding the previous value where
    /// both envelopes vanish.
    pub theta_trace: Option<Vec<f64>>,
    /// |⟨Φ0|ψ⟩|²; Λ linkages only.
    pub dark_overlap_trace: Option<Vec<f64>>,
    /// Ω_rms/|dϑ/dt| with +∞ where dϑ/dt = 0; Λ linkages only.
    pub adiabaticity_trace: Option<Vec<f64>>,
    /// |dϑ/dt| per sample; Λ linkages only.
    pub theta_rate_trace: Option<Vec<f64>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.decay_rates.len()
    }

    pub fn final_amplitudes(&self) -> &[C64] {
        self.amplitudes.last().expect("trajectory has samples")
    }

    pub fn final_populations(&self) -> &[f64] {
        self.populations.last().expect("trajectory has samples")
    }

    pub fn final_loss(&self) -> &[f64] {
        self.loss_per_level.last().expect("trajectory has samples")
    }

    pub fn initial_norm_sq(&self) -> f64 {
        self.norm_sq[0]
    }

    pub fn final_norm_sq(&self) -> f64 {
        *self.norm_sq.last().expect("trajectory has samples")
    }

    pub fn peak_population(&self, level: usize) -> f64 {
        self.populations.iter().map(|p| p[level]).fold(0.0, f64::max)
    }

    pub fn min_dark_overlap(&self) -> Option<f64> {
        self.dark_overlap_trace
            .as_ref()
            .map(|tr| tr.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Minimum adiabaticity ratio over the transfer region, i.e. over
    /// samples where |dϑ/dt| is at least 10⁻³ of its maximum. In the far
    /// pulse tails the ratio always collapses (a Gaussian decays faster than
    /// the angle rate), but no population moves there.
    pub fn min_adiabaticity_ratio(&self) -> Option<f64> {
        let ratios = self.adiabaticity_trace.as_ref()?;
        let rates = self.theta_rate_trace.as_ref()?;
        let max_rate = rates.iter().copied().fold(0.0, f64::max);
        let floor = 1e-3 * max_rate;
        let min = ratios
            .iter()
            .zip(rates)
            .filter(|(_, &rate)| rate >= floor && rate > 0.0)
            .map(|(&r, _)| r)
            .fold(f64::INFINITY, f64::min);
        Some(min)
    }

    /// |norm²(t1) + Σ_k loss_k − norm²(t0)|: zero up to integrator accuracy.
    pub fn loss_closure_defect(&self) -> f64 {
        let lost: f64 = self.final_loss().iter().sum();
        (self.final_norm_sq() + lost - self.initial_norm_sq()).abs()
    }
}

/// Solve `i ψ' = H(t) ψ` over `[t0, t1]` from `psi0`, sampling
/// `config.sample_count` equally spaced points.
pub fn propagate(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    t0: f64,
    t1: f64,
    psi0: &[C64],
    config: &IntegratorConfig,
) -> Result<Trajectory, PropagateError> {
    propagate_impl(scheme, schedule, t0, t1, psi0, config, Coordinate::Time)
}

/// Spatial analog: identical mathematics with the coordinate z as evolution
/// parameter and couplings read as position-dependent profiles.
pub fn propagate_spatial(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    z0: f64,
    z1: f64,
    a0: &[C64],
    config: &IntegratorConfig,
) -> Result<Trajectory, PropagateError> {
    propagate_impl(scheme, schedule, z0, z1, a0, config, Coordinate::Propagation)
}

fn propagate_impl(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    t0: f64,
    t1: f64,
    psi0: &[C64],
    config: &IntegratorConfig,
    coordinate: Coordinate,
) -> Result<Trajectory, PropagateError> {
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(PropagateError::InvalidWindow { t0, t1 });
    }
    config.validate()?;
    let n = scheme.dim();
    if psi0.len() != n {
        return Err(PropagateError::InvalidInitialState(format!(
            "state has {} amplitudes for {} levels",
            psi0.len(),
            n
        )));
    }
    let norm0: f64 = psi0.iter().map(|c| c.norm_sqr()).sum();
    if norm0 == 0.0 {
        return Err(PropagateError::InvalidInitialState("zero initial state".into()));
    }
    if norm0 > 1.0 + 1e-9 {
        return Err(PropagateError::InvalidInitialState(format!(
            "initial norm² = {norm0} exceeds 1"
        )));
    }
    scheme.check_resolves(schedule)?;

    let max_step = config.max_step.unwrap_or((t1 - t0) / 100.0);
    let samples: Vec<f64> = linspace(t0, t1, config.sample_count);

    // state layout: N amplitudes followed by N occupation quadratures
    let mut y0 = vec![C64::new(0.0, 0.0); 2 * n];
    y0[..n].copy_from_slice(psi0);

    let mut h = Array2::<C64>::zeros((n, n));
    let mut rhs_error: Option<AssembleError> = None;
    let mut rhs = |t: f64, y: &[C64], dy: &mut [C64]| -> Result<(), ()> {
        if let Err(e) = assemble_into(scheme, schedule, t, &mut h) {
            rhs_error = Some(e);
            return Err(());
        }
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += h[(i, k)] * y[k];
            }
            dy[i] = -C64::i() * acc;
            dy[n + i] = C64::new(y[i].norm_sqr(), 0.0);
        }
        Ok(())
    };

    let mut amplitudes: Vec<Vec<C64>> = vec![Vec::new(); samples.len()];
    let mut occupations: Vec<Vec<f64>> = vec![Vec::new(); samples.len()];
    let collect = |idx: usize, _t: f64, y: &[C64], amps: &mut Vec<Vec<C64>>, occ: &mut Vec<Vec<f64>>| {
        amps[idx] = y[..n].to_vec();
        occ[idx] = y[n..].iter().map(|c| c.re).collect();
    };

    let stats = match config.method {
        Method::AdaptiveRk54 => rk::dopri5(
            &mut rhs,
            t0,
            t1,
            &y0,
            config.rel_tol,
            config.abs_tol,
            max_step,
            &samples,
            |i, t, y| collect(i, t, y, &mut amplitudes, &mut occupations),
        ),
        Method::FixedRk4 { step } => rk::rk4_fixed(&mut rhs, &y0, step, &samples, |i, t, y| {
            collect(i, t, y, &mut amplitudes, &mut occupations)
        }),
    };
    let stats = match stats {
        Ok(s) => s,
        Err(rk::RkError::StepUnderflow { t }) => {
            return Err(PropagateError::StepSizeUnderflow { t })
        }
        Err(rk::RkError::Rhs(())) => {
            return Err(rhs_error.expect("rhs flagged an assembly error").into())
        }
    };

    let decay_rates = scheme.decay_rates();
    let populations: Vec<Vec<f64>> =
        amplitudes.iter().map(|a| a.iter().map(|c| c.norm_sqr()).collect()).collect();
    let norm_sq: Vec<f64> = populations.iter().map(|p| p.iter().sum()).collect();
    let loss_per_level: Vec<Vec<f64>> = occupations
        .iter()
        .map(|o| o.iter().zip(&decay_rates).map(|(oi, g)| 2.0 * g * oi).collect())
        .collect();

    let mut theta_trace = None;
    let mut dark_trace = None;
    let mut ratio_trace = None;
    let mut rate_trace = None;
    if let Some(layout) = LambdaLayout::detect(scheme) {
        let window = t1 - t0;
        let mut thetas = Vec::with_capacity(samples.len());
        let mut darks = Vec::with_capacity(samples.len());
        let mut ratios = Vec::with_capacity(samples.len());
        let mut rates = Vec::with_capacity(samples.len());
        let mut prev_theta = 0.0;
        for (i, &t) in samples.iter().enumerate() {
            let wp = layout.omega_p(schedule, t).expect("pulse resolved above");
            let ws = layout.omega_s(schedule, t).expect("pulse resolved above");
            let theta =
                if wp == 0.0 && ws == 0.0 { prev_theta } else { wp.atan2(ws) };
            prev_theta = theta;
            thetas.push(theta);
            let dark = [theta.cos(), 0.0, -theta.sin()];
            let amp = &amplitudes[i];
            let overlap = amp[0] * dark[0] + amp[2] * dark[2];
            darks.push(overlap.norm_sqr());
            let rate = layout
                .theta_rate(schedule, t, window)
                .expect("pulse resolved above")
                .abs();
            rates.push(rate);
            ratios.push(if rate == 0.0 { f64::INFINITY } else { wp.hypot(ws) / rate });
        }
        theta_trace = Some(thetas);
        dark_trace = Some(darks);
        ratio_trace = Some(ratios);
        rate_trace = Some(rates);
    }

    Ok(Trajectory {
        coordinate,
        scheme_label: scheme.label.clone(),
        decay_rates,
        times: samples,
        amplitudes,
        populations,
        norm_sq,
        occupation_integrals: occupations,
        loss_per_level,
        theta_trace,
        dark_overlap_trace: dark_trace,
        adiabaticity_trace: ratio_trace,
        theta_rate_trace: rate_trace,
        accepted_steps: stats.accepted,
        rejected_steps: stats.rejected,
    })
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * step }).collect()
}

/// Final population of `target_level`, normalized by the initial norm².
pub fn transfer_efficiency(traj: &Trajectory, target_level: usize) -> f64 {
    traj.final_populations()[target_level] / traj.initial_norm_sq()
}

/// Probability that a photon left the cavity: 2κ·∫|c_{g1}|² dt, the
/// accumulated loss of the |g,1⟩ level of a cavity-Λ trajectory.
pub fn photon_emission_probability(traj: &Trajectory, kappa: f64) -> Result<f64, PropagateError> {
    if traj.scheme_label != "cavity-lambda" {
        return Err(PropagateError::WrongScheme {
            expected: "cavity-lambda".into(),
            found: traj.scheme_label.clone(),
        });
    }
    let g1 = traj.dim() - 1;
    Ok(2.0 * kappa * traj.occupation_integrals.last().expect("samples")[g1])
}

/// Sample-grid trapezoid estimate of 2κ·∫|c_level|² dt; the coarse
/// cross-check for [`photon_emission_probability`].
pub fn emission_trapezoid(traj: &Trajectory, level: usize, kappa: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..traj.times.len() - 1 {
        let dt = traj.times[i + 1] - traj.times[i];
        acc += 0.5 * dt * (traj.populations[i][level] + traj.populations[i + 1][level]);
    }
    2.0 * kappa * acc
}

/// An incoherent mixture of basis levels: probabilities on the simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalEnsemble {
    weights: Vec<f64>,
}

impl DiagonalEnsemble {
    pub fn new(weights: Vec<f64>) -> Result<Self, EnsembleError> {
        for &w in &weights {
            if w < 0.0 {
                return Err(EnsembleError::NegativeWeight(w));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(EnsembleError::NotNormalized(total));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// −Σ λ ln λ with 0·ln 0 = 0. Rejects negative weights.
pub fn von_neumann_entropy(weights: &[f64]) -> Result<f64, EnsembleError> {
    let mut s = 0.0;
    for &w in weights {
        if w < 0.0 {
            return Err(EnsembleError::NegativeWeight(w));
        }
        if w > 0.0 {
            s -= w * w.ln();
        }
    }
    Ok(s)
}

/// Outcome of evolving a diagonal ensemble under a unitary schedule.
#[derive(Clone, Debug)]
pub struct EnsembleEvolution {
    /// Initial weights, sorted descending.
    pub initial_spectrum: Vec<f64>,
    /// Eigenvalues of the final density matrix, sorted descending.
    pub final_spectrum: Vec<f64>,
    pub entropy_before: f64,
    pub entropy_after: f64,
    /// Diagonal of the final density matrix (level populations).
    pub final_populations: Vec<f64>,
}

/// Propagate each basis level, form ρ = Σ w_i |ψ_i⟩⟨ψ_i| at t1 and
/// diagonalize. Unitary evolution only: any nonzero decay rate is rejected,
/// since the spectrum-preservation statement holds for unitary maps.
pub fn evolve_diagonal_ensemble(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    ensemble: &DiagonalEnsemble,
    t0: f64,
    t1: f64,
    config: &IntegratorConfig,
) -> Result<EnsembleEvolution, PropagateError> {
    if scheme.levels.iter().any(|l| l.decay_rate != 0.0) {
        return Err(PropagateError::DecayingEnsemble);
    }
    let n = scheme.dim();
    if ensemble.weights().len() != n {
        return Err(EnsembleError::DimensionMismatch {
            got: ensemble.weights().len(),
            want: n,
        }
        .into());
    }
    let mut rho = Array2::<C64>::zeros((n, n));
    for (i, &w) in ensemble.weights().iter().enumerate() {
        let mut psi0 = vec![C64::new(0.0, 0.0); n];
        psi0[i] = C64::new(1.0, 0.0);
        let traj = propagate(scheme, schedule, t0, t1, &psi0, config)?;
        let fin = traj.final_amplitudes();
        for a in 0..n {
            for b in 0..n {
                rho[(a, b)] += w * fin[a] * fin[b].conj();
            }
        }
    }
    let eig = linalg::eigh(&rho);
    let mut final_spectrum: Vec<f64> =
        eig.values.iter().map(|&v| v.max(0.0)).collect();
    final_spectrum.sort_by(|a, b| b.total_cmp(a));
    let mut initial_spectrum = ensemble.weights().to_vec();
    initial_spectrum.sort_by(|a, b| b.total_cmp(a));
    let entropy_before = von_neumann_entropy(ensemble.weights())?;
    let entropy_after = von_neumann_entropy(&final_spectrum)?;
    let final_populations = (0..n).map(|k| rho[(k, k)].re).collect();
    Ok(EnsembleEvolution {
        initial_spectrum,
        final_spectrum,
        entropy_before,
        entropy_after,
        final_populations,
    })
}
