//! Two-mode bosonic states on a truncated Fock basis.
//!
//! A [`TwoModeState`] stores the dense amplitude grid `c[n, m] = ⟨n, m|ψ⟩`
//! for photon numbers `n` (mode `a`) and `m` (mode `b`) below the per-mode
//! cutoff. The submodules build states in closed form ([`states`]),
//! transform them ([`beam_splitter`]), evaluate normally ordered moments and
//! photon statistics ([`moments`]) and provide a dense matrix-exponential
//! oracle ([`oracle`]) used to validate the closed forms.

pub mod beam_splitter;
pub mod expm;
pub mod moments;
pub mod oracle;
pub mod separability;
pub mod states;

use std::f64::consts::{FRAC_PI_4, TAU};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

pub use beam_splitter::apply_beam_splitter;
pub use moments::{marginal_distribution, normally_ordered_moment, photon_parity};
pub use oracle::{oracle_unitary, Generator, OracleBudget};
pub use separability::{check_separability, fitted_squeeze_phases, SeparabilityCheck};
pub use states::{
    coherent_amplitudes, coherent_cutoff, coherent_product_state, coherent_product_state_with,
    poisson_tail, product_state, single_mode_squeezed_vacuum, squeezed_cutoff,
    tmsv_truncation_deficit, two_mode_squeezed_vacuum, two_mode_squeezed_vacuum_with,
};

/// Default tolerance on `|1 - Σ|c|²|` after a unitary construction.
pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-10;

/// Default ceiling on the probability mass a closed-form construction may
/// lose above the cutoff before it is rejected.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-10;

/// Truncation deficit targeted by automatic cutoff selection.
pub const AUTO_CUTOFF_TARGET: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error(
        "cutoff {cutoff} too small: truncation deficit {deficit:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    CutoffTooSmall {
        cutoff: usize,
        deficit: f64,
        tolerance: f64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("dense oracle at cutoff {cutoff} needs ~{required} bytes, budget is {budget} bytes")]
    BudgetExceeded {
        cutoff: usize,
        required: u64,
        budget: u64,
    },
}

pub type Result<T> = std::result::Result<T, FockError>;

/// Which of the two field modes an operation refers to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

/// Squeezing parameter `ξ = r e^{iφ}`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    phi: f64,
}

impl SqueezeParams {
    /// `r` must be finite and non-negative; `phi` is wrapped into `[0, 2π)`.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(FockError::InvalidParam(format!(
                "squeeze magnitude r must be finite and >= 0, got {r}"
            )));
        }
        if !phi.is_finite() {
            return Err(FockError::InvalidParam(format!(
                "squeeze phase must be finite, got {phi}"
            )));
        }
        let phi = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        let phi = if phi >= TAU { 0.0 } else { phi };
        Ok(Self { r, phi })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn xi(&self) -> C64 {
        C64::from_polar(self.r, self.phi)
    }
}

/// Mixing angle `θ` of `U = exp[iθ(a†b + b†a)]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BeamSplitterAngle(pub f64);

impl BeamSplitterAngle {
    /// The symmetric 50/50 splitter.
    pub const BALANCED: Self = Self(FRAC_PI_4);

    pub fn theta(&self) -> f64 {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(-self.0)
    }
}

/// Pure two-mode state on an `N × N` truncated Fock grid.
///
/// Entries outside the grid are zero by construction, so two states with
/// different cutoffs can be compared by embedding the smaller grid in the
/// larger one.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    amplitudes: Array2<C64>,
}

impl TwoModeState {
    /// `|0, 0⟩` on a grid of the given cutoff.
    pub fn vacuum(cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff, 1)?;
        let mut amps = Array2::zeros((cutoff, cutoff));
        amps[[0, 0]] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps })
    }

    /// Wraps an existing square amplitude grid, row index = photons in `a`.
    pub fn from_amplitudes(amplitudes: Array2<C64>) -> Result<Self> {
        let (rows, cols) = amplitudes.dim();
        if rows != cols || rows == 0 {
            return Err(FockError::InvalidParam(format!(
                "amplitude grid must be square and non-empty, got {rows}x{cols}"
            )));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(FockError::InvalidParam("non-finite amplitude".into()));
        }
        Ok(Self { amplitudes })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn amplitudes(&self) -> &Array2<C64> {
        &self.amplitudes
    }

    /// `⟨n, m|ψ⟩`, zero outside the grid.
    pub fn amplitude(&self, n: usize, m: usize) -> C64 {
        self.amplitudes
            .get([n, m])
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(FockError::InvalidParam(
                "cannot normalize zero state".into(),
            ));
        }
        Ok(Self {
            amplitudes: self.amplitudes.mapv(|c| c / norm),
        })
    }

    /// Copy of the state on a grid of `cutoff`. Shrinking drops amplitudes
    /// outside the new grid.
    pub fn resized(&self, cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff, 1)?;
        let mut amps = Array2::zeros((cutoff, cutoff));
        let keep = cutoff.min(self.cutoff());
        amps.slice_mut(ndarray::s![..keep, ..keep])
            .assign(&self.amplitudes.slice(ndarray::s![..keep, ..keep]));
        Ok(Self { amplitudes: amps })
    }

    /// `⟨self|other⟩` over the common grid.
    pub fn inner(&self, other: &Self) -> C64 {
        let keep = self.cutoff().min(other.cutoff());
        let mut acc = C64::new(0.0, 0.0);
        for n in 0..keep {
            for m in 0..keep {
                acc += self.amplitudes[[n, m]].conj() * other.amplitudes[[n, m]];
            }
        }
        acc
    }

    /// Pure-state fidelity `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest total photon number `n + m` carrying a non-zero amplitude.
    pub fn max_total_photons(&self) -> Option<usize> {
        self.amplitudes
            .indexed_iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|((n, m), _)| n + m)
            .max()
    }

    /// Distribution of `n + m`; entry `k` is the probability of `k` photons.
    pub fn total_number_distribution(&self) -> Vec<f64> {
        let cutoff = self.cutoff();
        let mut dist = vec![0.0; 2 * cutoff - 1];
        for ((n, m), c) in self.amplitudes.indexed_iter() {
            dist[n + m] += c.norm_sqr();
        }
        dist
    }
}

pub(crate) fn check_cutoff(cutoff: usize, min: usize) -> Result<()> {
    if cutoff < min {
        return Err(FockError::InvalidParam(format!(
            "cutoff must be >= {min}, got {cutoff}"
        )));
    }
    Ok(())
}

/// `ln n!` for `n = 0..len`.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(len.max(1));
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..len {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}
