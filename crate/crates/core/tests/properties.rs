use std::f64::consts::{FRAC_PI_4, PI, TAU};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ramsey_squeeze::analytic;
use ramsey_squeeze::fock::{
    apply_beam_splitter, two_mode_squeezed_vacuum_with, BeamSplitterAngle, SqueezeParams,
    TwoModeState,
};
use ramsey_squeeze::ramsey::JointMoments;

fn state_strategy(max_cutoff: usize) -> impl Strategy<Value = TwoModeState> {
    (2..=max_cutoff)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n),
            )
        })
        .prop_filter_map("zero state", |(n, parts)| {
            let amps = Array2::from_shape_vec(
                (n, n),
                parts.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
            )
            .unwrap();
            TwoModeState::from_amplitudes(amps).ok()?.normalized().ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn splitter_preserves_norm(state in state_strategy(9), theta in -PI..PI) {
        let out = apply_beam_splitter(&state, BeamSplitterAngle(theta));
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn splitter_inverse_round_trips(state in state_strategy(9), theta in -PI..PI) {
        let angle = BeamSplitterAngle(theta);
        let back = apply_beam_splitter(&apply_beam_splitter(&state, angle), angle.inverse());
        prop_assert!((back.fidelity(&state) - 1.0).abs() < 1e-12);
        prop_assert!(back.resized(state.cutoff()).unwrap().fidelity(&state) > 1.0 - 1e-12);
    }

    #[test]
    fn splitter_conserves_total_number(state in state_strategy(9), theta in -PI..PI) {
        let before = state.total_number_distribution();
        let after = apply_beam_splitter(&state, BeamSplitterAngle(theta)).total_number_distribution();
        for (k, p) in before.iter().enumerate() {
            prop_assert!((p - after[k]).abs() < 1e-12, "k={k}: {p} vs {}", after[k]);
        }
        prop_assert!(after[before.len()..].iter().all(|p| *p < 1e-24));
    }

    #[test]
    fn squeezed_pair_law_forms_agree(r in 0.0..2.0f64, phase in 0.0..TAU) {
        let raw = analytic::squeezed_pee(r, phase, 1.0);
        let factored = analytic::squeezed_pee_factored(r, phase, 1.0);
        prop_assert!((raw - factored).abs() <= 1e-12 * raw.abs().max(1.0));
    }

    #[test]
    fn visibility_decreases(r1 in 0.0..6.0f64, dr in 1e-6..1.0f64) {
        let (v1, v2) = (analytic::visibility(r1), analytic::visibility(r1 + dr));
        prop_assert!(v1 > v2);
        prop_assert!(v2 > 0.2 && v1 <= 1.0);
    }

    #[test]
    fn single_excitation_ignores_phase(r in 0.01..1.0f64, phi in 0.0..TAU, phase in 0.0..TAU) {
        let tmsv = two_mode_squeezed_vacuum_with(SqueezeParams::new(r, phi).unwrap(), 48, 1e-10).unwrap();
        let moments = JointMoments::of(&apply_beam_splitter(&tmsv, BeamSplitterAngle(FRAC_PI_4)));
        let expected = 2.0 * r.sinh().powi(2);
        prop_assert!((moments.intensity(phase) - expected).abs() < 1e-9 * expected);
    }
}
