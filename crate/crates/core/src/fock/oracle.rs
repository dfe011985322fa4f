//! Dense matrix-exponential oracle.
//!
//! Builds the generator on the full `N² × N²` truncated product space from
//! truncated ladder matrices, exponentiates it and applies it to a state.
//! This is intentionally the slow, structure-blind route: it shares nothing
//! with the closed-form constructions it is used to check.
//!
//! Truncating `a` at `N` photons changes the generator near the grid edge,
//! so agreement with the untruncated closed forms requires states with
//! negligible weight there.

use ndarray::{linalg::kron, Array1, Array2};
use num_complex::Complex64 as C64;

use super::{expm::expm, FockError, Mode, Result, TwoModeState};

/// Anti-Hermitian generators `X` of the unitaries `exp(X)` the oracle knows.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Generator {
    Zero,
    /// `ξ a†b† - ξ* ab`
    TwoModeSqueeze {
        xi: C64,
    },
    /// `iθ(a†b + b†a)`
    BeamSplitter {
        theta: f64,
    },
    /// `½(ξ m†² - ξ* m²)` on one mode
    SingleModeSqueeze {
        mode: Mode,
        xi: C64,
    },
}

/// Memory ceiling for the dense oracle.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_bytes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self { max_bytes: 2 << 30 }
    }
}

impl OracleBudget {
    /// Approximate peak memory of one oracle call: the Padé evaluation
    /// keeps about a dozen dense `N² × N²` complex matrices alive.
    pub fn required_bytes(cutoff: usize) -> u64 {
        const LIVE_MATRICES: u64 = 12;
        let dim = (cutoff * cutoff) as u64;
        dim.saturating_mul(dim)
            .saturating_mul(std::mem::size_of::<C64>() as u64)
            .saturating_mul(LIVE_MATRICES)
    }

    pub fn check(&self, cutoff: usize) -> Result<()> {
        let required = Self::required_bytes(cutoff);
        if required > self.max_bytes {
            return Err(FockError::BudgetExceeded {
                cutoff,
                required,
                budget: self.max_bytes,
            });
        }
        Ok(())
    }
}

/// Truncated annihilation operator on `N` levels.
pub fn lowering(cutoff: usize) -> Array2<C64> {
    let mut a = Array2::zeros((cutoff, cutoff));
    for n in 1..cutoff {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|x| x.conj())
}

/// Dense generator matrix in the row-major basis `|n_a, n_b⟩ -> n_a·N + n_b`.
pub fn generator_matrix(generator: Generator, cutoff: usize) -> Array2<C64> {
    let dim = cutoff * cutoff;
    let eye = Array2::<C64>::eye(cutoff);
    let low = lowering(cutoff);
    let a = kron(&low, &eye);
    let b = kron(&eye, &low);
    match generator {
        Generator::Zero => Array2::zeros((dim, dim)),
        Generator::TwoModeSqueeze { xi } => {
            let ab = a.dot(&b);
            let ab_dag = dagger(&ab);
            ab_dag.mapv(|x| x * xi) - ab.mapv(|x| x * xi.conj())
        }
        Generator::BeamSplitter { theta } => {
            let hop = dagger(&a).dot(&b);
            let hop = &hop + &dagger(&hop);
            hop.mapv(|x| x * C64::new(0.0, theta))
        }
        Generator::SingleModeSqueeze { mode, xi } => {
            let m = match mode {
                Mode::A => a,
                Mode::B => b,
            };
            let m2 = m.dot(&m);
            let m2_dag = dagger(&m2);
            (m2_dag.mapv(|x| x * xi) - m2.mapv(|x| x * xi.conj())).mapv(|x| x * 0.5)
        }
    }
}

/// Dense `exp(X)` on the truncated product space.
pub fn oracle_matrix(
    generator: Generator,
    cutoff: usize,
    budget: OracleBudget,
) -> Result<Array2<C64>> {
    budget.check(cutoff)?;
    Ok(expm(&generator_matrix(generator, cutoff)))
}

/// Applies `exp(X)` to the state on its own grid.
pub fn oracle_unitary(
    generator: Generator,
    state: &TwoModeState,
    budget: OracleBudget,
) -> Result<TwoModeState> {
    let cutoff = state.cutoff();
    let unitary = oracle_matrix(generator, cutoff, budget)?;
    let flat: Array1<C64> = state.amplitudes().iter().copied().collect();
    let out = unitary.dot(&flat);
    let grid = out
        .into_shape_with_order((cutoff, cutoff))
        .expect("dimension is cutoff²");
    TwoModeState::from_amplitudes(grid)
}
