//! Normally ordered moments and photon-number statistics.

use num_complex::Complex64 as C64;

use super::{ln_factorials, Mode, TwoModeState};

/// `⟨a†ᵖ a^q b†ᵘ b^v⟩` by direct summation over the truncated grid.
///
/// Written as `⟨a^p b^u ψ | a^q b^v ψ⟩`, each lowering power is an index
/// shift with weight `√((n+k)!/n!)`, evaluated in log space. The sum is exact
/// for the truncated vector; it approximates the untruncated moment only
/// while the state carries negligible weight within `max(p, q)` (resp.
/// `max(u, v)`) photons of the cutoff.
pub fn normally_ordered_moment(
    state: &TwoModeState,
    p: usize,
    q: usize,
    u: usize,
    v: usize,
) -> C64 {
    let cutoff = state.cutoff();
    let shift_a = p.max(q);
    let shift_b = u.max(v);
    if shift_a >= cutoff || shift_b >= cutoff {
        return C64::new(0.0, 0.0);
    }
    let ln_fact = ln_factorials(cutoff);
    let weight = |n: usize, k: usize| (0.5 * (ln_fact[n + k] - ln_fact[n])).exp();
    let amps = state.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..cutoff - shift_a {
        let wa = weight(n, q) * weight(n, p);
        for m in 0..cutoff - shift_b {
            let lowered = amps[[n + q, m + v]];
            let bra = amps[[n + p, m + u]];
            if lowered.norm_sqr() == 0.0 || bra.norm_sqr() == 0.0 {
                continue;
            }
            acc += bra.conj() * lowered * (wa * weight(m, v) * weight(m, u));
        }
    }
    acc
}

/// Photon-number distribution of one mode, tracing out the other.
pub fn marginal_distribution(state: &TwoModeState, mode: Mode) -> Vec<f64> {
    let cutoff = state.cutoff();
    let amps = state.amplitudes();
    let mut dist = vec![0.0; cutoff];
    for ((n, m), c) in amps.indexed_iter() {
        let k = match mode {
            Mode::A => n,
            Mode::B => m,
        };
        dist[k] += c.norm_sqr();
    }
    dist
}

/// `⟨(-1)^n⟩` of the chosen mode.
pub fn photon_parity(state: &TwoModeState, mode: Mode) -> f64 {
    marginal_distribution(state, mode)
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
        .sum()
}

/// Total probability of an odd photon number in the chosen mode.
pub fn odd_photon_probability(state: &TwoModeState, mode: Mode) -> f64 {
    marginal_distribution(state, mode)
        .iter()
        .skip(1)
        .step_by(2)
        .sum()
}

/// Mean photon number `⟨m†m⟩` of one mode.
pub fn mean_photon_number(state: &TwoModeState, mode: Mode) -> f64 {
    let moment = match mode {
        Mode::A => normally_ordered_moment(state, 1, 1, 0, 0),
        Mode::B => normally_ordered_moment(state, 0, 0, 1, 1),
    };
    moment.re
}
