//! Closed-form fringe and visibility laws.
//!
//! Every function takes the fringe phase `ΔT` directly, so these forms and
//! the numeric route in [`crate::ramsey`] share one independent variable.
//! The squeezed-light forms assume the two-mode squeezed vacuum has passed
//! a balanced beam splitter; the coherent forms assume `|α|² = ½` per mode.

/// `p_e = 2 p̃_e sinh² r`, independent of the phase.
pub fn squeezed_pe(r: f64, envelope: f64) -> f64 {
    2.0 * envelope * r.sinh().powi(2)
}

/// `p_ee = p̃_e² [½ sinh²2r cos 2ΔT + 8 sinh⁴ r + ½ sinh²2r]`.
pub fn squeezed_pee(r: f64, phase: f64, envelope: f64) -> f64 {
    let half_s2 = 0.5 * (2.0 * r).sinh().powi(2);
    envelope * envelope * (half_s2 * (2.0 * phase).cos() + 8.0 * r.sinh().powi(4) + half_s2)
}

/// The same law factored as `p̃_e² [1 + V cos 2ΔT] (8 sinh⁴ r + ½ sinh²2r)`.
pub fn squeezed_pee_factored(r: f64, phase: f64, envelope: f64) -> f64 {
    let background = 8.0 * r.sinh().powi(4) + 0.5 * (2.0 * r).sinh().powi(2);
    envelope * envelope * (1.0 + visibility(r) * (2.0 * phase).cos()) * background
}

/// Fringe visibility `V = 1/(1 + 4 tanh² r)`; falls from 1 towards 1/5.
pub fn visibility(r: f64) -> f64 {
    1.0 / (1.0 + 4.0 * r.tanh().powi(2))
}

/// `p_e = p̃_e (cos ΔT + 1)`.
pub fn coherent_pe(phase: f64, envelope: f64) -> f64 {
    envelope * (phase.cos() + 1.0)
}

/// `p_ee = p̃_e² (cos ΔT + 1)²`.
pub fn coherent_pee(phase: f64, envelope: f64) -> f64 {
    envelope * envelope * (phase.cos() + 1.0).powi(2)
}

/// `p_ee = p̃_e² (½ cos 2ΔT + 2 cos ΔT + 3/2)`.
pub fn coherent_pee_expanded(phase: f64, envelope: f64) -> f64 {
    envelope * envelope * (0.5 * (2.0 * phase).cos() + 2.0 * phase.cos() + 1.5)
}

/// Moments of the beam-splitter outputs `a₂`, `b₂` of a two-mode squeezed
/// vacuum.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MomentClosedForms {
    /// `⟨a†²a²⟩ = sinh²r + 3 sinh⁴r`
    pub a_pair: f64,
    /// `⟨b†²b²⟩`, equal to `a_pair`
    pub b_pair: f64,
    /// `⟨a†a⟩⟨b†b⟩ = sinh⁴r`
    pub number_product: f64,
    /// `⟨a†²b²⟩ = ⟨b†²a²⟩ = sinh²r cosh²r`
    pub pair_exchange: f64,
    /// `⟨a†b⟩` and every other first-order cross moment vanish
    pub first_order_cross: f64,
}

pub fn moment_closed_forms(r: f64) -> MomentClosedForms {
    let s2 = r.sinh().powi(2);
    let c2 = r.cosh().powi(2);
    MomentClosedForms {
        a_pair: s2 + 3.0 * s2 * s2,
        b_pair: s2 + 3.0 * s2 * s2,
        number_product: s2 * s2,
        pair_exchange: s2 * c2,
        first_order_cross: 0.0,
    }
}

/// Fringe contrast `(max - min)/(max + min)`; `None` for an empty or
/// all-zero fringe.
pub fn fringe_visibility(samples: &[f64]) -> Option<f64> {
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    if samples.is_empty() || max + min <= 0.0 {
        return None;
    }
    Some((max - min) / (max + min))
}

/// Positions of the fringe maxima over the half-open scan `[x₀, x_last)`.
///
/// Interior samples that rise above their left neighbour and are not
/// exceeded by their right one count, as does a first sample above its
/// successor; the final sample is never a candidate (it repeats the first
/// on a periodic scan). Each discrete peak is refined by a parabola through
/// it and its neighbours.
pub fn fringe_maxima(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = ys.len();
    let mut peaks = Vec::new();
    if n < 2 {
        return peaks;
    }
    if ys[0] > ys[1] {
        peaks.push(xs[0]);
    }
    for i in 1..n - 1 {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            peaks.push(refine_peak(xs, ys, i));
        }
    }
    peaks
}

fn refine_peak(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    if curvature >= 0.0 {
        return xs[i];
    }
    // uniform grids only; offset in units of the spacing
    let offset = 0.5 * (y0 - y2) / curvature;
    xs[i] + offset * 0.5 * (xs[i + 1] - xs[i - 1])
}

/// Cosine Fourier coefficients `c_k = (2/P)∫ f(x) cos(k·2πx/P) dx` of a
/// function sampled at `x_j = x₀ + jP/M`, `j = 0..M`, over one period `P`.
pub fn cosine_coefficient(samples: &[f64], harmonic: usize) -> f64 {
    let m = samples.len() as f64;
    let sum: f64 = samples
        .iter()
        .enumerate()
        .map(|(j, y)| y * (std::f64::consts::TAU * (harmonic * j) as f64 / m).cos())
        .sum();
    let scale = if harmonic == 0 { 1.0 } else { 2.0 };
    scale * sum / m
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    #[test]
    fn squeezed_pe_values() {
        assert_eq!(squeezed_pe(0.0, 3.0), 0.0);
        assert!((squeezed_pe(0.3, 1.0) - 2.0 * 0.3f64.sinh().powi(2)).abs() < 1e-16);
        assert!((squeezed_pe(0.3, 1.0) - 0.18547).abs() < 5e-6);
        assert!((squeezed_pe(0.8, 1.0) - 1.57746).abs() < 5e-6);
    }

    #[test]
    fn squeezed_pee_values() {
        assert!((squeezed_pee(0.3, 0.0, 1.0) - 0.47412).abs() < 5e-6);
        assert!((squeezed_pee(0.3, FRAC_PI_2, 1.0) - 0.06879).abs() < 5e-6);
        assert_eq!(squeezed_pee(0.0, 1.3, 1.0), 0.0);
    }

    #[test]
    fn visibility_values() {
        assert_eq!(visibility(0.0), 1.0);
        assert!((visibility(0.3) - 0.74657).abs() < 5e-6);
        let v5 = visibility(5.0);
        assert!(v5 > 0.2 && v5 < 0.2001);
    }

    #[test]
    fn coherent_values() {
        assert!(coherent_pe(PI, 1.0).abs() < 1e-15);
        assert!(coherent_pee(PI, 1.0).abs() < 1e-15);
        assert_eq!(coherent_pe(0.0, 1.0), 2.0);
        assert_eq!(coherent_pee(0.0, 1.0), 4.0);
        assert!((coherent_pe(FRAC_PI_2, 1.0) - 1.0).abs() < 1e-15);
        assert!((coherent_pee(FRAC_PI_2, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moment_values() {
        let zero = moment_closed_forms(0.0);
        assert_eq!(zero.a_pair, 0.0);
        assert_eq!(zero.pair_exchange, 0.0);
        assert_eq!(zero.number_product, 0.0);
        let m = moment_closed_forms(0.3);
        assert!((m.a_pair - 0.11853).abs() < 5e-6);
        assert!((m.pair_exchange - 0.10133).abs() < 5e-6);
        assert!((moment_closed_forms(0.8).number_product - 0.62210).abs() < 5e-6);
    }

    #[test]
    fn contrast_of_constant_fringe_is_zero() {
        assert_eq!(fringe_visibility(&[2.0, 2.0]), Some(0.0));
        assert_eq!(fringe_visibility(&[0.0, 0.0]), None);
        assert_eq!(fringe_visibility(&[]), None);
    }

    #[test]
    fn maxima_of_cosine() {
        let xs: Vec<f64> = (0..=400).map(|k| k as f64 * 4.0 * PI / 400.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
        let peaks = fringe_maxima(&xs, &ys);
        assert_eq!(peaks.len(), 2);
        assert_eq!(peaks[0], 0.0);
        assert!((peaks[1] - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn parabolic_refinement_off_grid() {
        // peak at 0.37 between samples
        let xs: Vec<f64> = (0..11).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -(x - 0.37) * (x - 0.37)).collect();
        let peaks = fringe_maxima(&xs, &ys);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0] - 0.37).abs() < 1e-12);
    }

    #[test]
    fn fourier_coefficients_of_trig_polynomial() {
        let m = 64;
        let ys: Vec<f64> = (0..m)
            .map(|j| {
                let x = std::f64::consts::TAU * j as f64 / m as f64;
                1.5 + 2.0 * x.cos() + 0.5 * (2.0 * x).cos()
            })
            .collect();
        assert!((cosine_coefficient(&ys, 0) - 1.5).abs() < 1e-14);
        assert!((cosine_coefficient(&ys, 1) - 2.0).abs() < 1e-14);
        assert!((cosine_coefficient(&ys, 2) - 0.5).abs() < 1e-14);
        assert!(cosine_coefficient(&ys, 3).abs() < 1e-14);
    }
}
