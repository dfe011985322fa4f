use std::f64::consts::FRAC_PI_4;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use ramsey_squeeze::fock::{
    apply_beam_splitter, oracle_unitary, product_state, single_mode_squeezed_vacuum,
    two_mode_squeezed_vacuum_with, BeamSplitterAngle, FockError, Generator, Mode, OracleBudget,
    SqueezeParams, TwoModeState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn infidelity(x: &TwoModeState, y: &TwoModeState) -> f64 {
    1.0 - x.fidelity(y) / (x.norm_sqr() * y.norm_sqr())
}

/// Random state supported on `n_a + n_b < cutoff`, where the truncated
/// splitter generator acts exactly.
fn random_state(rng: &mut ChaCha8Rng, cutoff: usize) -> TwoModeState {
    let mut amps = Array2::zeros((cutoff, cutoff));
    for n in 0..cutoff {
        for m in 0..cutoff - n {
            amps[[n, m]] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    TwoModeState::from_amplitudes(amps)
        .unwrap()
        .normalized()
        .unwrap()
}

#[test]
fn splitter_matches_oracle_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let theta = rng.random_range(-3.0..3.0);
        let state = random_state(&mut rng, 12);
        let closed = apply_beam_splitter(&state, BeamSplitterAngle(theta))
            .resized(12)
            .unwrap();
        let dense = oracle_unitary(
            Generator::BeamSplitter { theta },
            &state,
            OracleBudget::default(),
        )
        .unwrap();
        assert!(infidelity(&closed, &dense) < 1e-12);
    }
}

#[test]
fn tmsv_matches_oracle() {
    for (r, phi) in [(0.1, 0.0), (0.3, 2.0), (0.8, 4.0)] {
        let params = SqueezeParams::new(r, phi).unwrap();
        let closed = two_mode_squeezed_vacuum_with(params, 24, f64::INFINITY).unwrap();
        let vacuum = TwoModeState::vacuum(24).unwrap();
        let dense = oracle_unitary(
            Generator::TwoModeSqueeze { xi: params.xi() },
            &vacuum,
            OracleBudget::default(),
        )
        .unwrap();
        assert!(infidelity(&closed, &dense) < 1e-8, "r={r}");
    }
}

#[test]
fn single_mode_squeezing_matches_oracle() {
    let params = SqueezeParams::new(0.4, 1.3).unwrap();
    let budget = OracleBudget::default();
    let vacuum = TwoModeState::vacuum(24).unwrap();
    let a = oracle_unitary(
        Generator::SingleModeSqueeze {
            mode: Mode::A,
            xi: params.xi(),
        },
        &vacuum,
        budget,
    )
    .unwrap();
    let ab = oracle_unitary(
        Generator::SingleModeSqueeze {
            mode: Mode::B,
            xi: params.xi(),
        },
        &a,
        budget,
    )
    .unwrap();
    let factor = single_mode_squeezed_vacuum(params, 24).unwrap();
    let closed = product_state(&factor, &factor);
    let e = infidelity(&closed, &ab);
    assert!(e < 1e-10, "{e}");
}

#[test]
fn split_tmsv_is_product_of_oracle_squeezers() {
    // the factor phase is φ + π/2 on both outputs
    let r = 0.3;
    let tmsv =
        two_mode_squeezed_vacuum_with(SqueezeParams::new(r, 0.0).unwrap(), 16, 1e-10).unwrap();
    let split = apply_beam_splitter(&tmsv, BeamSplitterAngle(FRAC_PI_4));
    let xi = C64::from_polar(r, std::f64::consts::FRAC_PI_2);
    let budget = OracleBudget::default();
    let vacuum = TwoModeState::vacuum(split.cutoff().min(22)).unwrap();
    let a = oracle_unitary(
        Generator::SingleModeSqueeze { mode: Mode::A, xi },
        &vacuum,
        budget,
    )
    .unwrap();
    let ab = oracle_unitary(
        Generator::SingleModeSqueeze { mode: Mode::B, xi },
        &a,
        budget,
    )
    .unwrap();
    assert!(infidelity(&split.resized(ab.cutoff()).unwrap(), &ab) < 1e-10);
}

#[test]
fn oracle_budget_is_enforced() {
    let small = OracleBudget { max_bytes: 1 << 20 };
    let vacuum = TwoModeState::vacuum(24).unwrap();
    let err = oracle_unitary(Generator::Zero, &vacuum, small).unwrap_err();
    assert!(matches!(err, FockError::BudgetExceeded { cutoff: 24, .. }));
}
