//! Beam-splitter transformation `U = exp[iθ(a†b + b†a)]`.
//!
//! `U` conserves `n_a + n_b`, so it acts block by block on the total photon
//! number `k`. On block `k` the generator `H = a†b + b†a` is tridiagonal
//! with integer spectrum `{-k, -k+2, ..., k}`, and
//!
//! ```text
//! exp(iθH) = J₀(θk) + 2 Σ_{j≥1} i^j J_j(θk) T_j(H/k)
//! ```
//!
//! is summed with the Chebyshev three-term recurrence. Every term is a
//! bounded tridiagonal product, so rounding error grows only linearly in
//! the number of terms (about `|θ|k`), unlike creation-operator recursions
//! or closed-form Wigner sums, which lose all digits at a few hundred
//! photons.
//!
//! The output grid is widened to `K_max + 1`, where `K_max` is the largest
//! occupied total photon number, so no amplitude is lost: the result is the
//! exact image of the input (read as a vector with zeros outside its grid).

use std::f64::consts::{PI, TAU};

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::{BeamSplitterAngle, TwoModeState};

pub fn apply_beam_splitter(state: &TwoModeState, angle: BeamSplitterAngle) -> TwoModeState {
    let input = state.amplitudes();
    let in_cutoff = state.cutoff();
    let Some(k_max) = state.max_total_photons() else {
        return state.clone();
    };
    let out_cutoff = in_cutoff.max(k_max + 1);
    // the spectrum is integer, so θ only matters modulo 2π
    let mut theta = angle.theta().rem_euclid(TAU);
    if theta > PI {
        theta -= TAU;
    }

    let mut out = Array2::<C64>::zeros((out_cutoff, out_cutoff));
    for k in 0..=k_max {
        let lo = k.saturating_sub(in_cutoff - 1);
        let hi = k.min(in_cutoff - 1);
        let mut block = vec![C64::new(0.0, 0.0); k + 1];
        for n in lo..=hi {
            block[n] = input[[n, k - n]];
        }
        if block.iter().all(|c| c.norm_sqr() == 0.0) {
            continue;
        }
        for (n, c) in propagate_block(&block, theta).into_iter().enumerate() {
            out[[n, k - n]] = c;
        }
    }
    TwoModeState { amplitudes: out }
}

/// `exp(iθH) v` on the block of `k = v.len() - 1` photons, where `v[n]` is
/// the amplitude on `|n, k - n⟩`.
fn propagate_block(v: &[C64], theta: f64) -> Vec<C64> {
    let k = v.len() - 1;
    if k == 0 || theta == 0.0 {
        return v.to_vec();
    }
    let kf = k as f64;
    // H/k couples n and n+1 with √((n+1)(k-n))/k
    let hop: Vec<f64> = (0..k)
        .map(|n| (((n + 1) * (k - n)) as f64).sqrt() / kf)
        .collect();
    let apply = |x: &[C64], out: &mut [C64]| {
        for n in 0..=k {
            let mut acc = C64::new(0.0, 0.0);
            if n > 0 {
                acc += x[n - 1] * hop[n - 1];
            }
            if n < k {
                acc += x[n + 1] * hop[n];
            }
            out[n] = acc;
        }
    };

    let bessel = bessel_j_sequence(theta * kf);
    let mut result: Vec<C64> = v.iter().map(|c| c * bessel[0]).collect();
    let mut prev = v.to_vec();
    let mut curr = vec![C64::new(0.0, 0.0); k + 1];
    apply(&prev, &mut curr);
    let mut next = vec![C64::new(0.0, 0.0); k + 1];
    let mut phase = C64::new(0.0, 1.0);
    for (j, &bj) in bessel.iter().enumerate().skip(1) {
        let coeff = phase * (2.0 * bj);
        for (r, c) in result.iter_mut().zip(&curr) {
            *r += c * coeff;
        }
        if j + 1 == bessel.len() {
            break;
        }
        apply(&curr, &mut next);
        for (nx, p) in next.iter_mut().zip(&prev) {
            *nx = *nx * 2.0 - p;
        }
        std::mem::swap(&mut prev, &mut curr);
        std::mem::swap(&mut curr, &mut next);
        phase *= C64::new(0.0, 1.0);
    }
    result
}

/// `J_j(z)` for `j = 0..M`, with `M` past the point where the terms drop
/// below double precision. Miller's backward recurrence, normalized by
/// `J₀ + 2 Σ J_{2j} = 1`.
fn bessel_j_sequence(z: f64) -> Vec<f64> {
    let x = z.abs();
    if x == 0.0 {
        return vec![1.0];
    }
    // beyond n ≈ x the terms decay like an Airy tail of width ~x^{1/3}
    let keep = (x + 16.0 * x.cbrt() + 40.0).ceil() as usize;
    let start = keep + 20 + (keep / 10);
    let mut seq = vec![0.0; start + 2];
    seq[start] = 1e-300;
    for n in (1..=start).rev() {
        seq[n - 1] = 2.0 * n as f64 / x * seq[n] - seq[n + 1];
        if seq[n - 1].abs() > 1e250 {
            for s in &mut seq[n - 1..] {
                *s *= 1e-250;
            }
        }
    }
    let norm = seq[0] + 2.0 * seq.iter().skip(2).step_by(2).sum::<f64>();
    seq.truncate(keep + 1);
    for (j, s) in seq.iter_mut().enumerate() {
        *s /= norm;
        if z < 0.0 && j % 2 == 1 {
            *s = -*s;
        }
    }
    seq
}
