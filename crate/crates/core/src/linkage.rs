//! Level schemes and assembly of the instantaneous rotating-wave Hamiltonian.
//!
//! A scheme is a list of levels (diagonal detunings plus amplitude-decay
//! rates) and pulsed couplings between them. Assembly writes
//! `H[k][k] = Δ_k − iγ_k` and, for each coupling (j, k) with j < k,
//! `H[j][k] = ½·scale·Ω(t)·e^{i(φ_static + φ_pulse)}` together with its
//! conjugate at (k, j). Decay is phenomenological non-Hermitian: lost norm is
//! accounted, never redistributed.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pulses::PulseSchedule;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("a scheme needs at least 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error("duplicate level index {0}")]
    DuplicateLevel(usize),
    #[error("level decay rate must be nonnegative, got {0}")]
    NegativeDecay(f64),
    #[error("coupling ({from}, {to}) references a missing level")]
    UnknownLevel { from: usize, to: usize },
    #[error("coupling ({from}, {to}) must satisfy from < to")]
    NotCanonical { from: usize, to: usize },
    #[error("duplicate coupling ({from}, {to})")]
    DuplicateCoupling { from: usize, to: usize },
    #[error("cavity coupling g must be positive, got {0}")]
    NonPositiveCavityCoupling(f64),
}

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("coupling ({from}, {to}) references unknown pulse id `{pulse}`")]
    UnresolvedPulse { from: usize, to: usize, pulse: String },
    #[error("pulse `{pulse}` evaluated to a non-finite amplitude at t = {t}")]
    NonFiniteEnvelope { pulse: String, t: f64 },
    #[error("evaluation time is not finite")]
    NonFiniteTime,
}

/// One bare level: a diagonal detuning and an amplitude-decay rate, both in
/// rad per unit time (ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    #[serde(default)]
    pub detuning: f64,
    #[serde(default)]
    pub decay_rate: f64,
}

impl Level {
    pub fn new(detuning: f64, decay_rate: f64) -> Self {
        Self { detuning, decay_rate }
    }

    pub fn bare() -> Self {
        Self { detuning: 0.0, decay_rate: 0.0 }
    }
}

/// A pulsed coupling between two levels, stored canonically with from < to.
///
/// `strength_scale` carries dimensionless factors such as √n on a
/// Jaynes-Cummings ladder; the Hermitian partner entry is implied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub from: usize,
    pub to: usize,
    pub pulse_id: String,
    #[serde(default)]
    pub static_phase: f64,
    #[serde(default = "one")]
    pub strength_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Coupling {
    pub fn new(from: usize, to: usize, pulse_id: impl Into<String>) -> Self {
        Self { from, to, pulse_id: pulse_id.into(), static_phase: 0.0, strength_scale: 1.0 }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.strength_scale = scale;
        self
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.static_phase = phase;
        self
    }
}

/// An N-level scheme: Λ, ladder, tripod, cavity-Λ, or an arbitrary chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelScheme {
    pub levels: Vec<Level>,
    pub couplings: Vec<Coupling>,
    #[serde(default)]
    pub label: String,
}

impl LevelScheme {
    pub fn new(
        levels: Vec<Level>,
        couplings: Vec<Coupling>,
        label: impl Into<String>,
    ) -> Result<Self, SchemeError> {
        let scheme = Self { levels, couplings, label: label.into() };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        let n = self.levels.len();
        if n < 2 {
            return Err(SchemeError::TooFewLevels(n));
        }
        for level in &self.levels {
            if level.decay_rate < 0.0 {
                return Err(SchemeError::NegativeDecay(level.decay_rate));
            }
        }
        let mut seen = Vec::with_capacity(self.couplings.len());
        for c in &self.couplings {
            if c.from >= c.to {
                return Err(SchemeError::NotCanonical { from: c.from, to: c.to });
            }
            if c.to >= n {
                return Err(SchemeError::UnknownLevel { from: c.from, to: c.to });
            }
            if seen.contains(&(c.from, c.to)) {
                return Err(SchemeError::DuplicateCoupling { from: c.from, to: c.to });
            }
            seen.push((c.from, c.to));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn decay_rates(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.decay_rate).collect()
    }

    /// Check every coupling's pulse id resolves in `schedule`.
    pub fn check_resolves(&self, schedule: &PulseSchedule) -> Result<(), AssembleError> {
        for c in &self.couplings {
            if schedule.get(&c.pulse_id).is_none() {
                return Err(AssembleError::UnresolvedPulse {
                    from: c.from,
                    to: c.to,
                    pulse: c.pulse_id.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Assemble the instantaneous RWA Hamiltonian at time `t`.
///
/// Hermitian whenever every decay rate is zero.
pub fn assemble_hamiltonian(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    t: f64,
) -> Result<Array2<C64>, AssembleError> {
    let mut h = Array2::zeros((scheme.dim(), scheme.dim()));
    assemble_into(scheme, schedule, t, &mut h)?;
    Ok(h)
}

/// [`assemble_hamiltonian`] into a caller-provided matrix (the hot path for
/// propagation).
pub fn assemble_into(
    scheme: &LevelScheme,
    schedule: &PulseSchedule,
    t: f64,
    h: &mut Array2<C64>,
) -> Result<(), AssembleError> {
    if !t.is_finite() {
        return Err(AssembleError::NonFiniteTime);
    }
    h.fill(C64::new(0.0, 0.0));
    for (k, level) in scheme.levels.iter().enumerate() {
        h[(k, k)] = C64::new(level.detuning, -level.decay_rate);
    }
    for c in &scheme.couplings {
        let amp = schedule.eval(&c.pulse_id, t).ok_or_else(|| AssembleError::UnresolvedPulse {
            from: c.from,
            to: c.to,
            pulse: c.pulse_id.clone(),
        })?;
        if !amp.re.is_finite() || !amp.im.is_finite() {
            return Err(AssembleError::NonFiniteEnvelope { pulse: c.pulse_id.clone(), t });
        }
        let entry = 0.5 * c.strength_scale * amp * C64::from_polar(1.0, c.static_phase);
        h[(c.from, c.to)] += entry;
        h[(c.to, c.from)] += entry.conj();
    }
    Ok(())
}

/// Signed Rabi frequency from a transition dipole moment and field amplitude,
/// `Ω = −d·E/ħ` in natural units (ħ = 1).
pub fn rabi_from_dipole(dipole: f64, field: f64) -> f64 {
    -dipole * field
}

/// Three-level Λ scheme: pump on 1↔2 (pulse "P"), Stokes on 2↔3 ("S"),
/// diagonal (0, Δ, δ), decay γ₂ on the intermediate level.
pub fn lambda_scheme(delta_one: f64, delta_two: f64, gamma2: f64) -> Result<LevelScheme, SchemeError> {
    LevelScheme::new(
        vec![Level::bare(), Level::new(delta_one, gamma2), Level::new(delta_two, 0.0)],
        vec![Coupling::new(0, 1, "P"), Coupling::new(1, 2, "S")],
        "lambda",
    )
}

/// Four-level tripod: P on 1↔2, S on 3↔2, control C on 4↔2.
///
/// `detunings` and `gammas` are per level, index order (1, 2, 3, 4).
pub fn tripod_scheme(detunings: [f64; 4], gammas: [f64; 4]) -> Result<LevelScheme, SchemeError> {
    LevelScheme::new(
        vec![
            Level::new(detunings[0], gammas[0]),
            Level::new(detunings[1], gammas[1]),
            Level::new(detunings[2], gammas[2]),
            Level::new(detunings[3], gammas[3]),
        ],
        vec![
            Coupling::new(0, 1, "P"),
            Coupling::new(1, 2, "S"),
            Coupling::new(1, 3, "C"),
        ],
        "tripod",
    )
}

/// Cavity Λ system on the n = 1 Jaynes-Cummings manifold, basis
/// (|e,0⟩, |x,0⟩, |g,1⟩).
///
/// The driving laser Ω_D ("D") acts on leg 1↔2; the cavity leg 2↔3 carries a
/// constant coupling of amplitude 2g (assembly's ½ factor yields the matrix
/// element g). Decay: γ on |x,0⟩ and κ on |g,1⟩.
pub fn cavity_lambda_scheme(
    g: f64,
    kappa: f64,
    gamma: f64,
    delta_c: f64,
    delta_d: f64,
) -> Result<(LevelScheme, PulseSchedule), SchemeError> {
    if g <= 0.0 {
        return Err(SchemeError::NonPositiveCavityCoupling(g));
    }
    if kappa < 0.0 {
        return Err(SchemeError::NegativeDecay(kappa));
    }
    if gamma < 0.0 {
        return Err(SchemeError::NegativeDecay(gamma));
    }
    let scheme = LevelScheme::new(
        vec![
            Level::bare(),
            Level::new(delta_d, gamma),
            Level::new(delta_c, kappa),
        ],
        vec![Coupling::new(0, 1, "D"), Coupling::new(1, 2, "G")],
        "cavity-lambda",
    )?;
    let mut schedule = PulseSchedule::new();
    schedule.insert("G", crate::pulses::PulseShape::Constant { peak: 2.0 * g, phase: 0.0 });
    Ok((scheme, schedule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::PulseShape;

    fn constant_schedule(entries: &[(&str, f64)]) -> PulseSchedule {
        let mut s = PulseSchedule::new();
        for &(id, peak) in entries {
            s.insert(id, PulseShape::Constant { peak, phase: 0.0 });
        }
        s
    }

    #[test]
    fn lambda_direct_substitution() {
        // Ω_P = 2, Ω_S = 4, Δ = 1, δ = 0, γ = 0 → [[0,1,0],[1,1,2],[0,2,0]]
        let scheme = lambda_scheme(1.0, 0.0, 0.0).unwrap();
        let schedule = constant_schedule(&[("P", 2.0), ("S", 4.0)]);
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        let expected = [
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 2.0],
            [0.0, 2.0, 0.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[(i, j)] - C64::new(expected[i][j], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn couplings_off_leaves_decay_diagonal() {
        let scheme = lambda_scheme(0.0, 0.0, 3.0).unwrap();
        let schedule = constant_schedule(&[("P", 0.0), ("S", 0.0)]);
        let h = assemble_hamiltonian(&scheme, &schedule, 1.0).unwrap();
        assert_eq!(h[(1, 1)], C64::new(0.0, -3.0));
        assert_eq!(h[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(h[(2, 2)], C64::new(0.0, 0.0));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(h[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn lambda_detunings_land_on_diagonal() {
        let scheme = lambda_scheme(5.0, 0.0, 0.0).unwrap();
        let schedule = constant_schedule(&[("P", 0.0), ("S", 0.0)]);
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        assert_eq!(h[(1, 1)], C64::new(5.0, 0.0));

        let scheme = lambda_scheme(0.0, 0.3, 0.0).unwrap();
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        assert_eq!(h[(2, 2)], C64::new(0.3, 0.0));
    }

    #[test]
    fn cavity_lambda_matrix_elements() {
        let (scheme, mut schedule) = cavity_lambda_scheme(1.0, 0.2, 0.1, 0.0, 0.0).unwrap();
        schedule.insert("D", PulseShape::Constant { peak: 2.0, phase: 0.0 });
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        // off-diagonals ½Ω_D = 1 and g = 1; decay −iγ on |x,0⟩, −iκ on |g,1⟩
        assert!((h[(0, 1)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 2)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(h[(1, 1)], C64::new(0.0, -0.1));
        assert_eq!(h[(2, 2)], C64::new(0.0, -0.2));
        assert!(cavity_lambda_scheme(0.0, 0.1, 0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn cavity_eigenvalues_match_rms_mapping() {
        // g = 1, Ω_D = 2, Δ = 0 → ε± = ±√2 with Ω_S ≡ 2g
        let (scheme, mut schedule) = cavity_lambda_scheme(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        schedule.insert("D", PulseShape::Constant { peak: 2.0, phase: 0.0 });
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        let eig = crate::linalg::eigh(&h);
        assert!((eig.values[0] + std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((eig.values[1]).abs() < 1e-12);
        assert!((eig.values[2] - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn tripod_structure() {
        let scheme = tripod_scheme([0.0; 4], [0.0, 0.5, 0.0, 0.0]).unwrap();
        let schedule = constant_schedule(&[("P", 2.0), ("S", 2.0), ("C", 2.0)]);
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        assert_eq!(h.nrows(), 4);
        assert!((h[(0, 1)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 2)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 3)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(h[(0, 2)], C64::new(0.0, 0.0));
        assert_eq!(h[(0, 3)], C64::new(0.0, 0.0));
        assert_eq!(h[(2, 3)], C64::new(0.0, 0.0));
        // decay sits on level 2 only
        assert_eq!(h[(1, 1)], C64::new(0.0, -0.5));
        assert_eq!(h[(0, 0)], C64::new(0.0, 0.0));
    }

    #[test]
    fn hermitian_when_undamped() {
        let scheme = lambda_scheme(0.7, -0.3, 0.0).unwrap();
        let mut schedule = PulseSchedule::new();
        schedule.insert("P", PulseShape::gaussian(2.0, 0.4, 1.0));
        schedule.insert("S", PulseShape::Gaussian { peak: 1.5, center: -0.4, width: 1.0, phase: 0.9 });
        for i in 0..20 {
            let t = -3.0 + 0.3 * i as f64;
            let h = assemble_hamiltonian(&scheme, &schedule, t).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    assert!((h[(a, b)] - h[(b, a)].conj()).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn assembly_linear_in_each_envelope() {
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let mut s1 = PulseSchedule::new();
        s1.insert("P", PulseShape::gaussian(1.0, 0.0, 1.0));
        s1.insert("S", PulseShape::gaussian(2.0, 0.5, 1.0));
        let mut s2 = s1.clone();
        s2.insert("P", PulseShape::gaussian(2.0, 0.0, 1.0));
        let h1 = assemble_hamiltonian(&scheme, &s1, 0.3).unwrap();
        let h2 = assemble_hamiltonian(&scheme, &s2, 0.3).unwrap();
        assert!((h2[(0, 1)] - 2.0 * h1[(0, 1)]).norm() < 1e-15);
        assert!((h2[(1, 0)] - 2.0 * h1[(1, 0)]).norm() < 1e-15);
        // the Stokes pair is untouched
        assert_eq!(h2[(1, 2)], h1[(1, 2)]);
    }

    #[test]
    fn zero_pump_decouples_level_one() {
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let schedule = constant_schedule(&[("P", 0.0), ("S", 3.0)]);
        let h = assemble_hamiltonian(&scheme, &schedule, 0.0).unwrap();
        for k in 1..3 {
            assert_eq!(h[(0, k)], C64::new(0.0, 0.0));
            assert_eq!(h[(k, 0)], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn unresolved_pulse_is_a_configuration_error() {
        let scheme = lambda_scheme(0.0, 0.0, 0.0).unwrap();
        let schedule = constant_schedule(&[("P", 1.0)]);
        assert!(matches!(
            assemble_hamiltonian(&scheme, &schedule, 0.0),
            Err(AssembleError::UnresolvedPulse { .. })
        ));
        assert!(scheme.check_resolves(&schedule).is_err());
    }

    #[test]
    fn scheme_validation_errors() {
        assert!(matches!(
            LevelScheme::new(vec![Level::bare()], vec![], "x"),
            Err(SchemeError::TooFewLevels(1))
        ));
        assert!(matches!(
            LevelScheme::new(
                vec![Level::bare(), Level::new(0.0, -1.0)],
                vec![],
                "x"
            ),
            Err(SchemeError::NegativeDecay(_))
        ));
        assert!(matches!(
            LevelScheme::new(
                vec![Level::bare(), Level::bare()],
                vec![Coupling::new(1, 0, "P")],
                "x"
            ),
            Err(SchemeError::NotCanonical { .. })
        ));
        assert!(matches!(
            LevelScheme::new(
                vec![Level::bare(), Level::bare()],
                vec![Coupling::new(0, 1, "P"), Coupling::new(0, 1, "Q")],
                "x"
            ),
            Err(SchemeError::DuplicateCoupling { .. })
        ));
        assert!(matches!(
            LevelScheme::new(
                vec![Level::bare(), Level::bare()],
                vec![Coupling::new(0, 2, "P")],
                "x"
            ),
            Err(SchemeError::UnknownLevel { .. })
        ));
    }

    #[test]
    fn rabi_sign_convention() {
        assert_eq!(rabi_from_dipole(0.0, 5.0), 0.0);
        assert_eq!(rabi_from_dipole(1.0, 1.0), -1.0);
        assert_eq!(rabi_from_dipole(-2.0, 3.0), 6.0);
    }
}
