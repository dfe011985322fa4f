//! Perturbative single- and two-atom excitation probabilities.
//!
//! To second order in the coupling, the field enters only through the joint
//! mode `J = a + b e^{iΔT}` (zone I drives mode `a`, zone II drives `b`):
//!
//! ```text
//! p_e  = p̃_e ⟨J† J⟩
//! p_ee = p̃_e² ⟨J†² J²⟩
//! ```
//!
//! with the single-zone envelope `p̃_e = g² |f(τ)|²`,
//! `f(τ) = (e^{iΔτ} - 1)/(iΔ)`. The phase is exactly `ΔT`; corrections of
//! order `τ/T` are not modelled.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::fock::{normally_ordered_moment, FockError, TwoModeState};

/// Above this `g·τ` the second-order result is no longer trustworthy.
pub const PERTURBATIVE_LIMIT: f64 = 0.3;

/// Negative values down to this size are treated as rounding noise.
pub const NEGATIVE_NOISE_FLOOR: f64 = 1e-12;

/// Below this `|Δτ|` the transit amplitude uses its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RamseyError {
    #[error("invalid Ramsey configuration: {0}")]
    InvalidConfig(String),
    #[error("{quantity} = {value:.3e} is negative beyond rounding noise")]
    NegativeProbability { quantity: &'static str, value: f64 },
    #[error(transparent)]
    Fock(#[from] FockError),
}

pub type Result<T> = std::result::Result<T, RamseyError>;

/// Two-zone Ramsey geometry: coupling `g`, zone transit time `τ`, zone
/// separation `T` and detuning `Δ`. Both atoms share the coupling.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RamseyConfig {
    g: f64,
    tau: f64,
    separation: f64,
    detuning: f64,
}

impl RamseyConfig {
    pub fn new(g: f64, tau: f64, separation: f64, detuning: f64) -> Result<Self> {
        let bad = |what: &str, v: f64| Err(RamseyError::InvalidConfig(format!("{what}, got {v}")));
        if !(g.is_finite() && g > 0.0) {
            return bad("coupling g must be finite and > 0", g);
        }
        if !(tau.is_finite() && tau > 0.0) {
            return bad("transit time tau must be finite and > 0", tau);
        }
        if !(separation.is_finite() && separation >= 0.0) {
            return bad("zone separation T must be finite and >= 0", separation);
        }
        if !detuning.is_finite() {
            return bad("detuning must be finite", detuning);
        }
        Ok(Self {
            g,
            tau,
            separation,
            detuning,
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn with_detuning(&self, detuning: f64) -> Result<Self> {
        Self::new(self.g, self.tau, self.separation, detuning)
    }

    /// Fringe phase `ΔT`.
    pub fn phase(&self) -> f64 {
        self.detuning * self.separation
    }

    /// `false` when `g·τ` exceeds [`PERTURBATIVE_LIMIT`].
    pub fn is_perturbative(&self) -> bool {
        self.g * self.tau <= PERTURBATIVE_LIMIT
    }
}

/// Single-zone transit amplitude `f(τ) = (e^{iΔτ} - 1)/(iΔ)`.
pub fn transit_amplitude(cfg: &RamseyConfig) -> C64 {
    let tau = cfg.tau;
    let x = cfg.detuning * tau;
    if x.abs() < SERIES_THRESHOLD {
        // τ (1 + ix/2 - x²/6 - ix³/24)
        return C64::new(1.0 - x * x / 6.0, x / 2.0 - x * x * x / 24.0) * tau;
    }
    (C64::new(0.0, x).exp() - 1.0) / C64::new(0.0, cfg.detuning)
}

/// Transit-broadened envelope `p̃_e = g²τ² sinc²(Δτ/2)`.
pub fn envelope(cfg: &RamseyConfig) -> f64 {
    let half = 0.5 * cfg.detuning * cfg.tau;
    let sinc = if half.abs() < SERIES_THRESHOLD {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    (cfg.g * cfg.tau * sinc).powi(2)
}

/// Normally ordered moments of `J = a + b e^{iφ}` needed for `⟨J†ᵏJᵏ⟩`,
/// `k = 1, 2`, gathered once so fringes can be scanned in the phase alone.
///
/// `order_k[j][l] = ⟨a†^{k-j} a^{k-l} b†^j b^l⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointMoments {
    order_1: [[C64; 2]; 2],
    order_2: [[C64; 3]; 3],
}

const BINOMIAL_2: [f64; 3] = [1.0, 2.0, 1.0];

impl JointMoments {
    pub fn of(state: &TwoModeState) -> Self {
        let mut order_1 = [[C64::new(0.0, 0.0); 2]; 2];
        for (j, row) in order_1.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                *slot = normally_ordered_moment(state, 1 - j, 1 - l, j, l);
            }
        }
        let mut order_2 = [[C64::new(0.0, 0.0); 3]; 3];
        for (j, row) in order_2.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                *slot = normally_ordered_moment(state, 2 - j, 2 - l, j, l);
            }
        }
        Self { order_1, order_2 }
    }

    /// `⟨J†J⟩` at fringe phase `φ`; real part of a Hermitian form.
    pub fn intensity(&self, phase: f64) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..2 {
            for l in 0..2 {
                acc += self.order_1[j][l] * C64::from_polar(1.0, (l as f64 - j as f64) * phase);
            }
        }
        acc.re
    }

    /// `⟨J†²J²⟩` at fringe phase `φ`.
    pub fn pair_intensity(&self, phase: f64) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..3 {
            for l in 0..3 {
                let weight = BINOMIAL_2[j] * BINOMIAL_2[l];
                acc += self.order_2[j][l] * C64::from_polar(weight, (l as f64 - j as f64) * phase);
            }
        }
        acc.re
    }

    /// Both probabilities and their fluctuation at one configuration.
    pub fn excitation(&self, cfg: &RamseyConfig) -> Result<ExcitationResult> {
        self.excitation_at(cfg.phase(), envelope(cfg))
    }

    /// As [`JointMoments::excitation`] with the phase and envelope given
    /// directly.
    pub fn excitation_at(&self, phase: f64, env: f64) -> Result<ExcitationResult> {
        let mut clamped = 0;
        let p_e = clamp_probability("p_e", env * self.intensity(phase), &mut clamped)?;
        let p_ee = clamp_probability("p_ee", env * env * self.pair_intensity(phase), &mut clamped)?;
        Ok(ExcitationResult {
            p_e,
            p_ee,
            fluctuation: p_ee - p_e * p_e,
            envelope: env,
            clamped,
        })
    }
}

/// Excitation probabilities at one configuration.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ExcitationResult {
    pub p_e: f64,
    pub p_ee: f64,
    /// `p_ee - p_e²`, unclamped.
    pub fluctuation: f64,
    pub envelope: f64,
    /// How many of `p_e`, `p_ee` were rounding noise below zero set to 0.
    pub clamped: u32,
}

fn clamp_probability(quantity: &'static str, value: f64, clamped: &mut u32) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_NOISE_FLOOR {
        *clamped += 1;
        Ok(0.0)
    } else {
        Err(RamseyError::NegativeProbability { quantity, value })
    }
}

pub fn excitation(state: &TwoModeState, cfg: &RamseyConfig) -> Result<ExcitationResult> {
    JointMoments::of(state).excitation(cfg)
}

/// `p_e = p̃_e ⟨(a† + b† e^{-iΔT})(a + b e^{iΔT})⟩`.
pub fn single_excitation_prob(state: &TwoModeState, cfg: &RamseyConfig) -> Result<f64> {
    let raw = envelope(cfg) * JointMoments::of(state).intensity(cfg.phase());
    clamp_probability("p_e", raw, &mut 0)
}

/// `p_ee = p̃_e² ⟨(a† + b† e^{-iΔT})²(a + b e^{iΔT})²⟩`.
pub fn double_excitation_prob(state: &TwoModeState, cfg: &RamseyConfig) -> Result<f64> {
    let env = envelope(cfg);
    let raw = env * env * JointMoments::of(state).pair_intensity(cfg.phase());
    clamp_probability("p_ee", raw, &mut 0)
}

/// `p_ee - p_e²`; may be negative for classical fields.
pub fn excitation_fluctuation(state: &TwoModeState, cfg: &RamseyConfig) -> Result<f64> {
    Ok(excitation(state, cfg)?.fluctuation)
}
