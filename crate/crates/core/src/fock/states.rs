//! Closed-form state constructions.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::{
    check_cutoff, ln_factorials, FockError, Result, SqueezeParams, TwoModeState,
    DEFAULT_TRUNCATION_TOLERANCE,
};

/// Upper bound for automatically selected cutoffs.
pub const MAX_AUTO_CUTOFF: usize = 4096;

/// Probability mass of the two-mode squeezed vacuum above a per-mode cutoff.
///
/// The photon-number distribution is geometric, `(1 - t²) t^{2n}` with
/// `t = tanh r`, so the tail is exactly `t^{2N}`.
pub fn tmsv_truncation_deficit(r: f64, cutoff: usize) -> f64 {
    let t = r.tanh();
    if t == 0.0 {
        return 0.0;
    }
    (2.0 * cutoff as f64 * t.ln()).exp()
}

/// Smallest cutoff `N >= 2` with `tanh(r)^{2N} < target`.
pub fn squeezed_cutoff(r: f64, target: f64) -> Result<usize> {
    if !r.is_finite() || r < 0.0 {
        return Err(FockError::InvalidParam(format!("r must be >= 0, got {r}")));
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(FockError::InvalidParam(format!(
            "truncation target must lie in (0, 1), got {target}"
        )));
    }
    let t = r.tanh();
    if t == 0.0 {
        return Ok(2);
    }
    let estimate = (target.ln() / (2.0 * t.ln())).floor().max(2.0);
    if t >= 1.0 || !estimate.is_finite() || estimate > MAX_AUTO_CUTOFF as f64 {
        return Err(FockError::InvalidParam(format!(
            "r = {r} needs a cutoff above {MAX_AUTO_CUTOFF}"
        )));
    }
    let mut n = estimate as usize;
    while tmsv_truncation_deficit(r, n) >= target {
        n += 1;
    }
    while n > 2 && tmsv_truncation_deficit(r, n - 1) < target {
        n -= 1;
    }
    Ok(n)
}

/// `P(n >= cutoff)` for a Poisson distribution of the given mean, summed
/// directly over the tail in log space.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean <= 0.0 {
        return if cutoff == 0 { 1.0 } else { 0.0 };
    }
    let ln_mean = mean.ln();
    let mut ln_fact: f64 = (1..=cutoff).map(|k| (k as f64).ln()).sum();
    let mut tail = 0.0;
    let mut n = cutoff;
    loop {
        let term = (-mean + n as f64 * ln_mean - ln_fact).exp();
        tail += term;
        if n as f64 > mean && (term <= tail * 1e-17 || term == 0.0) {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    tail.min(1.0)
}

/// Smallest cutoff with both Poisson tails below `target`.
pub fn coherent_cutoff(alpha_a: C64, alpha_b: C64, target: f64) -> Result<usize> {
    if !(target > 0.0 && target < 1.0) {
        return Err(FockError::InvalidParam(format!(
            "truncation target must lie in (0, 1), got {target}"
        )));
    }
    let mean = alpha_a.norm_sqr().max(alpha_b.norm_sqr());
    let mut n = 1;
    while poisson_tail(mean, n) >= target {
        n += 1;
        if n > MAX_AUTO_CUTOFF {
            return Err(FockError::InvalidParam(format!(
                "|α|² = {mean} needs a cutoff above {MAX_AUTO_CUTOFF}"
            )));
        }
    }
    Ok(n)
}

/// Two-mode squeezed vacuum `S(ξ)|0,0⟩` with the default truncation tolerance.
pub fn two_mode_squeezed_vacuum(params: SqueezeParams, cutoff: usize) -> Result<TwoModeState> {
    two_mode_squeezed_vacuum_with(params, cutoff, DEFAULT_TRUNCATION_TOLERANCE)
}

/// Two-mode squeezed vacuum from its Schmidt form
/// `c[n, n] = (e^{iφ} tanh r)^n / cosh r`.
///
/// The amplitudes are not renormalized, so the norm falls short of one by
/// exactly the truncation deficit. Pass `f64::INFINITY` as the tolerance to
/// skip the deficit check.
pub fn two_mode_squeezed_vacuum_with(
    params: SqueezeParams,
    cutoff: usize,
    truncation_tolerance: f64,
) -> Result<TwoModeState> {
    check_cutoff(cutoff, 2)?;
    let deficit = tmsv_truncation_deficit(params.r(), cutoff);
    if deficit > truncation_tolerance {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            deficit,
            tolerance: truncation_tolerance,
        });
    }
    let t = params.r().tanh();
    let ln_sech = -ln_cosh(params.r());
    let mut amps = Array2::zeros((cutoff, cutoff));
    for n in 0..cutoff {
        let magnitude = if n == 0 {
            ln_sech.exp()
        } else if t == 0.0 {
            0.0
        } else {
            (n as f64 * t.ln() + ln_sech).exp()
        };
        amps[[n, n]] = C64::from_polar(magnitude, n as f64 * params.phi());
    }
    TwoModeState::from_amplitudes(amps)
}

/// Product of coherent states `|α_a⟩|α_b⟩` with the default tolerance.
pub fn coherent_product_state(alpha_a: C64, alpha_b: C64, cutoff: usize) -> Result<TwoModeState> {
    coherent_product_state_with(alpha_a, alpha_b, cutoff, DEFAULT_TRUNCATION_TOLERANCE)
}

pub fn coherent_product_state_with(
    alpha_a: C64,
    alpha_b: C64,
    cutoff: usize,
    truncation_tolerance: f64,
) -> Result<TwoModeState> {
    check_cutoff(cutoff, 1)?;
    for alpha in [alpha_a, alpha_b] {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(FockError::InvalidParam(format!(
                "non-finite amplitude {alpha}"
            )));
        }
    }
    let deficit =
        poisson_tail(alpha_a.norm_sqr(), cutoff).max(poisson_tail(alpha_b.norm_sqr(), cutoff));
    if deficit > truncation_tolerance {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            deficit,
            tolerance: truncation_tolerance,
        });
    }
    let a = coherent_amplitudes(alpha_a, cutoff);
    let b = coherent_amplitudes(alpha_b, cutoff);
    Ok(product_state(&a, &b))
}

/// Single-mode coherent amplitudes `e^{-|α|²/2} αⁿ / √n!`.
pub fn coherent_amplitudes(alpha: C64, cutoff: usize) -> Vec<C64> {
    let ln_fact = ln_factorials(cutoff);
    let prefactor = -0.5 * alpha.norm_sqr();
    let (radius, arg) = alpha.to_polar();
    (0..cutoff)
        .map(|n| {
            if n == 0 {
                C64::new(prefactor.exp(), 0.0)
            } else if radius == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                let ln_mag = prefactor + n as f64 * radius.ln() - 0.5 * ln_fact[n];
                C64::from_polar(ln_mag.exp(), n as f64 * arg)
            }
        })
        .collect()
}

/// Single-mode squeezed vacuum `exp[½(ξ a†² - ξ* a²)]|0⟩`:
/// `c[2n] = (e^{iφ} tanh r / 2)ⁿ √(2n)! / n! / √cosh r`, odd entries zero.
pub fn single_mode_squeezed_vacuum(params: SqueezeParams, cutoff: usize) -> Result<Vec<C64>> {
    check_cutoff(cutoff, 1)?;
    let ln_fact = ln_factorials(cutoff);
    let t = params.r().tanh();
    let ln_norm = -0.5 * ln_cosh(params.r());
    let mut amps = vec![C64::new(0.0, 0.0); cutoff];
    for (n, slot) in amps.iter_mut().step_by(2).enumerate() {
        let magnitude = if n == 0 {
            ln_norm.exp()
        } else if t == 0.0 {
            0.0
        } else {
            let ln_mag = n as f64 * (0.5 * t).ln() + 0.5 * ln_fact[2 * n] - ln_fact[n] + ln_norm;
            ln_mag.exp()
        };
        *slot = C64::from_polar(magnitude, n as f64 * params.phi());
    }
    Ok(amps)
}

/// Tensor product `c[n, m] = a[n] b[m]` on a grid of the longer length.
pub fn product_state(a: &[C64], b: &[C64]) -> TwoModeState {
    let cutoff = a.len().max(b.len()).max(1);
    let mut amps = Array2::zeros((cutoff, cutoff));
    for (n, &an) in a.iter().enumerate() {
        for (m, &bm) in b.iter().enumerate() {
            amps[[n, m]] = an * bm;
        }
    }
    TwoModeState { amplitudes: amps }
}

fn ln_cosh(r: f64) -> f64 {
    let r = r.abs();
    r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(r: f64, phi: f64) -> SqueezeParams {
        SqueezeParams::new(r, phi).unwrap()
    }

    #[test]
    fn zero_squeezing_is_vacuum() {
        let s = two_mode_squeezed_vacuum(params(0.0, 0.0), 8).unwrap();
        assert_eq!(s, TwoModeState::vacuum(8).unwrap());
    }

    #[test]
    fn tmsv_first_pair_amplitude() {
        let s = two_mode_squeezed_vacuum(params(0.3, 0.0), 20).unwrap();
        let expected = 0.3f64.tanh() / 0.3f64.cosh();
        assert!((s.amplitude(1, 1).re - expected).abs() < 1e-15);
        assert!((s.amplitude(1, 1).re - 0.27868).abs() < 5e-6);
        assert_eq!(s.amplitude(1, 0), C64::new(0.0, 0.0));
    }

    #[test]
    fn tmsv_norm_matches_geometric_tail() {
        let s = two_mode_squeezed_vacuum(params(0.3, 0.0), 20).unwrap();
        // Σ_{n<N} t^{2n}/cosh² = 1 - t^{2N}
        let tail = 0.3f64.tanh().powi(40);
        assert!((1.0 - s.norm_sqr() - tail).abs() < 1e-15);
        assert!(s.norm_sqr() >= 1.0 - 1e-10);
    }

    #[test]
    fn tmsv_phase_winds_with_pair_number() {
        let s = two_mode_squeezed_vacuum(params(0.5, 0.7), 40).unwrap();
        for n in 1..5 {
            let arg = s.amplitude(n, n).arg();
            let expected = (n as f64 * 0.7 + std::f64::consts::PI)
                .rem_euclid(std::f64::consts::TAU)
                - std::f64::consts::PI;
            assert!((arg - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn tmsv_rejects_small_cutoff() {
        let err = two_mode_squeezed_vacuum(params(0.8, 0.0), 4).unwrap_err();
        assert!(matches!(err, FockError::CutoffTooSmall { cutoff: 4, .. }));
        assert!(two_mode_squeezed_vacuum(params(0.3, 0.0), 1).is_err());
        assert!(two_mode_squeezed_vacuum_with(params(0.8, 0.0), 4, f64::INFINITY).is_ok());
    }

    #[test]
    fn auto_cutoff_is_minimal() {
        for r in [0.1, 0.3, 0.8, 2.0] {
            let n = squeezed_cutoff(r, 1e-12).unwrap();
            assert!(tmsv_truncation_deficit(r, n) < 1e-12);
            assert!(n == 2 || tmsv_truncation_deficit(r, n - 1) >= 1e-12);
        }
        assert_eq!(squeezed_cutoff(0.0, 1e-12).unwrap(), 2);
        assert!(squeezed_cutoff(20.0, 1e-12).is_err());
    }

    #[test]
    fn coherent_vacuum_and_means() {
        let s = coherent_product_state(C64::new(0.0, 0.0), C64::new(0.0, 0.0), 4).unwrap();
        assert_eq!(s, TwoModeState::vacuum(4).unwrap());
        let a = coherent_amplitudes(C64::new(1.0, 0.0), 16);
        let mean: f64 = a
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum();
        assert!((mean - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_rejects_short_grid() {
        let err = coherent_product_state(C64::new(2.0, 0.0), C64::new(0.0, 0.0), 5).unwrap_err();
        assert!(matches!(err, FockError::CutoffTooSmall { .. }));
    }

    #[test]
    fn poisson_tail_against_complement() {
        // direct complement 1 - Σ_{n<N} at a cutoff where cancellation is harmless
        let mean: f64 = 2.5;
        let mut head = 0.0;
        let mut term = (-mean).exp();
        for n in 0..4 {
            head += term;
            term *= mean / (n + 1) as f64;
        }
        assert!((poisson_tail(mean, 4) - (1.0 - head)).abs() < 1e-14);
        assert_eq!(poisson_tail(0.0, 1), 0.0);
    }

    #[test]
    fn single_mode_squeezed_only_even() {
        let v = single_mode_squeezed_vacuum(params(0.6, 1.1), 40).unwrap();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!(v.iter().skip(1).step_by(2).all(|c| c.norm_sqr() == 0.0));
        let mean: f64 = v
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum();
        assert!((mean - 0.6f64.sinh().powi(2)).abs() < 1e-9);
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }
}
