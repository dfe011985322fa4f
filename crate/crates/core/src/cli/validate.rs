//! The validation suite: every numerical invariant the library relies on,
//! checked against its closed form or the dense oracle.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, TAU};
use std::io::Write;

use clap::Args;
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::moments::compare_moments;
use super::{fmt_float, linspace, merge_options, CliError, Result};
use crate::analytic;
use crate::fock::moments::odd_photon_probability;
use crate::fock::oracle::oracle_matrix;
use crate::fock::{
    apply_beam_splitter, check_separability, coherent_cutoff, coherent_product_state,
    oracle_unitary, tmsv_truncation_deficit, two_mode_squeezed_vacuum_with, BeamSplitterAngle,
    Generator, Mode, OracleBudget, SqueezeParams, TwoModeState, AUTO_CUTOFF_TARGET,
    DEFAULT_NORM_TOLERANCE, DEFAULT_TRUNCATION_TOLERANCE,
};
use crate::ramsey::JointMoments;

pub const DEFAULT_R_VALUES: [f64; 3] = [0.1, 0.3, 0.8];
pub const DEFAULT_CUTOFF: usize = 32;
pub const DEFAULT_ORACLE_CUTOFF: usize = 24;
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 20_240_917;

const SEPARABILITY_TOLERANCE: f64 = 1e-10;
const PARITY_TOLERANCE: f64 = 1e-12;
const FOURIER_NULL_TOLERANCE: f64 = 1e-10;
const ORACLE_FIDELITY_TOLERANCE: f64 = 1e-8;
const IDENTITY_TOLERANCE: f64 = 1e-12;
const PEAK_TOLERANCE: f64 = 1e-6;
/// Envelope used for the fringe checks, `(gτ)²` with `gτ = 0.1`.
const ENVELOPE: f64 = 0.01;
const RANDOM_STATES: usize = 4;
const RANDOM_PAIRS: usize = 1000;

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ValidateOptions {
    /// Squeeze magnitudes to check, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    /// Per-mode cutoff of the closed-form checks.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Per-mode cutoff of the dense oracle checks.
    #[arg(long)]
    pub oracle_cutoff: Option<usize>,
    #[arg(long)]
    pub norm_tolerance: Option<f64>,
    #[arg(long)]
    pub truncation_tolerance: Option<f64>,
    #[arg(long)]
    pub relative_tolerance: Option<f64>,
    /// Seed of the random oracle states.
    #[arg(long)]
    pub seed: Option<u64>,
}

merge_options!(ValidateOptions {
    r,
    cutoff,
    oracle_cutoff,
    norm_tolerance,
    truncation_tolerance,
    relative_tolerance,
    seed,
});

impl ValidateOptions {
    pub fn resolve(self) -> Result<ValidateRequest> {
        let request = ValidateRequest {
            r_values: self.r.unwrap_or_else(|| DEFAULT_R_VALUES.to_vec()),
            cutoff: self.cutoff.unwrap_or(DEFAULT_CUTOFF),
            oracle_cutoff: self.oracle_cutoff.unwrap_or(DEFAULT_ORACLE_CUTOFF),
            norm_tolerance: self.norm_tolerance.unwrap_or(DEFAULT_NORM_TOLERANCE),
            truncation_tolerance: self
                .truncation_tolerance
                .unwrap_or(DEFAULT_TRUNCATION_TOLERANCE),
            relative_tolerance: self
                .relative_tolerance
                .unwrap_or(DEFAULT_RELATIVE_TOLERANCE),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        };
        request.validate()?;
        Ok(request)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateRequest {
    pub r_values: Vec<f64>,
    pub cutoff: usize,
    pub oracle_cutoff: usize,
    pub norm_tolerance: f64,
    pub truncation_tolerance: f64,
    pub relative_tolerance: f64,
    pub seed: u64,
}

impl ValidateRequest {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::InvalidRequest(msg));
        if self.r_values.is_empty() {
            return bad("need at least one r".into());
        }
        if let Some(r) = self
            .r_values
            .iter()
            .find(|r| !(r.is_finite() && **r >= 0.0))
        {
            return bad(format!("r must be finite and >= 0, got {r}"));
        }
        if self.cutoff < 2 || self.oracle_cutoff < 2 {
            return bad("cutoffs must be >= 2".into());
        }
        for tol in [
            self.norm_tolerance,
            self.truncation_tolerance,
            self.relative_tolerance,
        ] {
            if !(tol.is_finite() && tol > 0.0) {
                return bad(format!("tolerances must be positive, got {tol}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skip(&'static str),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    /// Passes when `measured <= tolerance`; NaN fails.
    fn bound(name: String, measured: f64, tolerance: f64) -> Self {
        let status = if measured <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name,
            measured: Some(measured),
            tolerance,
            status,
        }
    }

    fn skip(name: String, tolerance: f64, reason: &'static str) -> Self {
        Self {
            name,
            measured: None,
            tolerance,
            status: Status::Skip(reason),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        !self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn count(&self, pred: impl Fn(&Status) -> bool) -> usize {
        self.checks.iter().filter(|c| pred(&c.status)).count()
    }

    pub fn write(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for c in &self.checks {
            let measured = c.measured.map_or_else(|| "-".to_string(), fmt_float);
            let status = match c.status {
                Status::Pass => "PASS".to_string(),
                Status::Fail => "FAIL".to_string(),
                Status::Skip(reason) => format!("SKIP reason={reason}"),
            };
            writeln!(
                out,
                "check={} measured={} tolerance={} status={}",
                c.name,
                measured,
                fmt_float(c.tolerance),
                status
            )?;
        }
        writeln!(
            out,
            "summary checks={} passed={} failed={} skipped={} status={}",
            self.checks.len(),
            self.count(|s| *s == Status::Pass),
            self.count(|s| *s == Status::Fail),
            self.count(|s| matches!(s, Status::Skip(_))),
            if self.all_passed() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn run_validate(request: &ValidateRequest) -> Result<ValidationReport> {
    request.validate()?;
    let mut checks = Vec::new();
    for &r in &request.r_values {
        squeezed_checks(request, r, &mut checks)?;
    }
    coherent_checks(request, &mut checks)?;
    oracle_checks(request, &mut checks)?;
    identity_checks(request, &mut checks);
    Ok(ValidationReport { checks })
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken value fails its check
    values.into_iter().fold(0.0, |acc, x| {
        if x.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(x)
        }
    })
}

fn rel_err(numeric: f64, closed: f64) -> f64 {
    (numeric - closed).abs() / closed.abs()
}

/// `M` phases `x₀ + jP/M`, `j = 0..M`.
fn period_grid(start: f64, period: f64, samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |j| start + period * j as f64 / samples as f64)
}

/// Largest deviation of adjacent-maxima spacing from `period` for a fringe
/// scanned over `ΔT ∈ [0, 4π]`; NaN if the number of maxima is wrong.
fn peak_spacing_error(f: impl Fn(f64) -> f64, period: f64, expected_peaks: usize) -> f64 {
    let xs = linspace(0.0, 4.0 * PI, 4001);
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let peaks = analytic::fringe_maxima(&xs, &ys);
    if peaks.len() != expected_peaks {
        return f64::NAN;
    }
    max_of(peaks.windows(2).map(|w| (w[1] - w[0] - period).abs()))
}

fn squeezed_checks(req: &ValidateRequest, r: f64, checks: &mut Vec<Check>) -> Result<()> {
    let tag = |name: &str| format!("{name}[r={r}]");
    let params = SqueezeParams::new(r, 0.0)?;
    let n = req.cutoff;

    checks.push(Check::bound(
        tag("cutoff-deficit"),
        tmsv_truncation_deficit(r, n),
        req.truncation_tolerance,
    ));

    let sep = check_separability(params, n, f64::INFINITY)?;
    checks.push(Check::bound(
        tag("separability"),
        1.0 - sep.fidelity,
        SEPARABILITY_TOLERANCE,
    ));

    let tmsv = two_mode_squeezed_vacuum_with(params, n, f64::INFINITY)?;
    let split = &sep.split;
    checks.push(Check::bound(
        tag("split-norm"),
        (split.norm_sqr() - tmsv.norm_sqr()).abs(),
        req.norm_tolerance,
    ));
    let back = apply_beam_splitter(split, BeamSplitterAngle(FRAC_PI_4).inverse());
    checks.push(Check::bound(
        tag("split-inverse"),
        (tmsv.inner(&back) - C64::new(tmsv.norm_sqr(), 0.0)).norm(),
        req.norm_tolerance,
    ));

    for row in compare_moments(r, split) {
        checks.push(Check::bound(
            tag(&format!("moment-{}", row.name)),
            row.rel_error,
            req.relative_tolerance,
        ));
    }

    checks.push(Check::bound(
        tag("parity-odd-a"),
        odd_photon_probability(split, Mode::A),
        PARITY_TOLERANCE,
    ));
    checks.push(Check::bound(
        tag("parity-odd-b"),
        odd_photon_probability(split, Mode::B),
        PARITY_TOLERANCE,
    ));

    let fringe_checks: [(&str, f64); 7] = [
        ("pe-closed-form", req.relative_tolerance),
        ("pe-phase-spread", FOURIER_NULL_TOLERANCE),
        ("pee-closed-form", req.relative_tolerance),
        ("pee-cos1-coefficient", FOURIER_NULL_TOLERANCE),
        ("pee-cos2-coefficient", req.relative_tolerance),
        ("fringe-visibility", req.relative_tolerance),
        ("fringe-spacing", PEAK_TOLERANCE * PI),
    ];
    if r == 0.0 {
        for (name, tol) in fringe_checks {
            checks.push(Check::skip(tag(name), tol, "zero-amplitude"));
        }
        return Ok(());
    }
    let moments = JointMoments::of(split);
    let pe: Vec<f64> = period_grid(0.0, TAU, 64)
        .map(|p| ENVELOPE * moments.intensity(p))
        .collect();
    let pe_closed = analytic::squeezed_pe(r, ENVELOPE);
    let pee_at = |p: f64| ENVELOPE * ENVELOPE * moments.pair_intensity(p);
    let pair: Vec<f64> = period_grid(0.0, TAU, 64)
        .map(|p| moments.pair_intensity(p))
        .collect();
    let values = [
        max_of(pe.iter().map(|&v| rel_err(v, pe_closed))),
        (max_of(pe.iter().copied()) - pe.iter().copied().fold(f64::INFINITY, f64::min)) / ENVELOPE,
        max_of(
            period_grid(0.0, TAU, 32)
                .map(|p| rel_err(pee_at(p), analytic::squeezed_pee(r, p, ENVELOPE))),
        ),
        analytic::cosine_coefficient(&pair, 1).abs(),
        rel_err(
            analytic::cosine_coefficient(&pair, 2),
            0.5 * (2.0 * r).sinh().powi(2),
        ),
        {
            let samples: Vec<f64> = period_grid(0.0, TAU, 128)
                .map(|p| moments.pair_intensity(p))
                .collect();
            analytic::fringe_visibility(&samples)
                .map_or(f64::NAN, |v| (v - analytic::visibility(r)).abs())
        },
        peak_spacing_error(|p| moments.pair_intensity(p), PI, 4),
    ];
    for ((name, tol), value) in fringe_checks.into_iter().zip(values) {
        checks.push(Check::bound(tag(name), value, tol));
    }
    Ok(())
}

fn coherent_checks(req: &ValidateRequest, checks: &mut Vec<Check>) -> Result<()> {
    let alpha = C64::new(FRAC_1_SQRT_2, 0.0);
    let cutoff = coherent_cutoff(alpha, alpha, AUTO_CUTOFF_TARGET)?;
    let state = coherent_product_state(alpha, alpha, cutoff)?;
    let moments = JointMoments::of(&state);
    // p_e and p_ee vanish at ΔT = π, so errors are scaled by the fringe maximum
    let pe_scale = analytic::coherent_pe(0.0, ENVELOPE);
    let pee_scale = analytic::coherent_pee(0.0, ENVELOPE);
    let grid: Vec<f64> = period_grid(0.0, TAU, 32).collect();
    checks.push(Check::bound(
        "coherent-pe-closed-form".into(),
        max_of(grid.iter().map(|&p| {
            (ENVELOPE * moments.intensity(p) - analytic::coherent_pe(p, ENVELOPE)).abs() / pe_scale
        })),
        req.relative_tolerance,
    ));
    checks.push(Check::bound(
        "coherent-pee-closed-form".into(),
        max_of(grid.iter().map(|&p| {
            (ENVELOPE * ENVELOPE * moments.pair_intensity(p) - analytic::coherent_pee(p, ENVELOPE))
                .abs()
                / pee_scale
        })),
        req.relative_tolerance,
    ));
    let pee: Vec<f64> = period_grid(0.0, TAU, 64)
        .map(|p| ENVELOPE * ENVELOPE * moments.pair_intensity(p))
        .collect();
    checks.push(Check::bound(
        "coherent-pee-cos1-coefficient".into(),
        rel_err(
            analytic::cosine_coefficient(&pee, 1),
            2.0 * ENVELOPE * ENVELOPE,
        ),
        req.relative_tolerance,
    ));
    checks.push(Check::bound(
        "coherent-fringe-spacing".into(),
        peak_spacing_error(|p| moments.pair_intensity(p), TAU, 2),
        PEAK_TOLERANCE * TAU,
    ));
    Ok(())
}

fn infidelity(x: &TwoModeState, y: &TwoModeState) -> f64 {
    1.0 - x.fidelity(y) / (x.norm_sqr() * y.norm_sqr())
}

fn apply_matrix(unitary: &Array2<C64>, state: &TwoModeState) -> Result<TwoModeState> {
    let n = state.cutoff();
    let flat: Array1<C64> = state.amplitudes().iter().copied().collect();
    let grid = unitary
        .dot(&flat)
        .into_shape_with_order((n, n))
        .expect("dimension is cutoff²");
    Ok(TwoModeState::from_amplitudes(grid)?)
}

/// Random normalized state supported on `n_a + n_b < cutoff`.
fn random_state(rng: &mut ChaCha8Rng, cutoff: usize) -> Result<TwoModeState> {
    let mut amps = Array2::zeros((cutoff, cutoff));
    for n in 0..cutoff {
        for m in 0..cutoff - n {
            amps[[n, m]] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    Ok(TwoModeState::from_amplitudes(amps)?.normalized()?)
}

fn oracle_checks(req: &ValidateRequest, checks: &mut Vec<Check>) -> Result<()> {
    let n = req.oracle_cutoff;
    let budget = OracleBudget::default();
    let balanced = oracle_matrix(Generator::BeamSplitter { theta: FRAC_PI_4 }, n, budget)?;
    let vacuum = TwoModeState::vacuum(n)?;
    for &r in &req.r_values {
        let params = SqueezeParams::new(r, 0.0)?;
        let closed = two_mode_squeezed_vacuum_with(params, n, f64::INFINITY)?;
        let dense = oracle_unitary(
            Generator::TwoModeSqueeze { xi: params.xi() },
            &vacuum,
            budget,
        )?;
        checks.push(Check::bound(
            format!("oracle-tmsv[r={r}]"),
            infidelity(&closed, &dense),
            ORACLE_FIDELITY_TOLERANCE,
        ));

        // half the grid per mode keeps every total photon number the
        // closed-form splitter produces on the oracle grid
        let small = two_mode_squeezed_vacuum_with(params, n.div_ceil(2), f64::INFINITY)?;
        let split = apply_beam_splitter(&small, BeamSplitterAngle(FRAC_PI_4)).resized(n)?;
        let dense = apply_matrix(&balanced, &small.resized(n)?)?;
        checks.push(Check::bound(
            format!("oracle-beam-splitter[r={r}]"),
            infidelity(&split, &dense),
            ORACLE_FIDELITY_TOLERANCE,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let theta = rng.random_range(-PI..PI);
    let unitary = oracle_matrix(Generator::BeamSplitter { theta }, n, budget)?;
    let mut worst = 0.0_f64;
    for _ in 0..RANDOM_STATES {
        let state = random_state(&mut rng, n)?;
        let closed = apply_beam_splitter(&state, BeamSplitterAngle(theta)).resized(n)?;
        worst = max_of([worst, infidelity(&closed, &apply_matrix(&unitary, &state)?)]);
    }
    checks.push(Check::bound(
        "oracle-beam-splitter-random".into(),
        worst,
        ORACLE_FIDELITY_TOLERANCE,
    ));
    Ok(())
}

fn identity_checks(req: &ValidateRequest, checks: &mut Vec<Check>) {
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed ^ 0x5eed);
    let worst = max_of((0..RANDOM_PAIRS).map(|_| {
        let r = rng.random_range(0.0..2.0);
        let phase = rng.random_range(0.0..TAU);
        let raw = analytic::squeezed_pee(r, phase, 1.0);
        let factored = analytic::squeezed_pee_factored(r, phase, 1.0);
        if raw == 0.0 {
            factored.abs()
        } else {
            rel_err(factored, raw)
        }
    }));
    checks.push(Check::bound(
        "analytic-factored-form".into(),
        worst,
        IDENTITY_TOLERANCE,
    ));

    let worst =
        max_of(period_grid(0.0, TAU, 256).map(|p| {
            (analytic::coherent_pee(p, 1.0) - analytic::coherent_pee_expanded(p, 1.0)).abs()
        }));
    checks.push(Check::bound(
        "analytic-coherent-expanded-form".into(),
        worst,
        IDENTITY_TOLERANCE,
    ));

    let rs = linspace(0.0, 5.0, 2001);
    let vs: Vec<f64> = rs.iter().map(|&r| analytic::visibility(r)).collect();
    let violations = vs.windows(2).filter(|w| w[1] >= w[0]).count()
        + vs.iter().filter(|&&v| !(v > 0.2 && v <= 1.0)).count();
    checks.push(Check::bound(
        "visibility-monotone".into(),
        violations as f64,
        0.0,
    ));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(r: Vec<f64>, cutoff: usize) -> ValidateRequest {
        ValidateOptions {
            r: Some(r),
            cutoff: Some(cutoff),
            oracle_cutoff: Some(8),
            ..ValidateOptions::default()
        }
        .resolve()
        .unwrap()
    }

    #[test]
    fn small_cutoff_fails_deficit() {
        let report = run_validate(&request(vec![0.8], 4)).unwrap();
        assert_eq!(
            report.check("cutoff-deficit[r=0.8]").unwrap().status,
            Status::Fail
        );
        assert!(!report.all_passed());
    }

    #[test]
    fn zero_r_skips_fringe_checks() {
        let report = run_validate(&request(vec![0.0], 16)).unwrap();
        let check = report.check("fringe-visibility[r=0]").unwrap();
        assert_eq!(check.status, Status::Skip("zero-amplitude"));
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn report_format() {
        let report = ValidationReport {
            checks: vec![
                Check::bound("a".into(), 0.5, 1.0),
                Check::bound("b".into(), f64::NAN, 1.0),
                Check::skip("c".into(), 1.0, "zero-amplitude"),
            ],
        };
        let mut out = Vec::new();
        report.write(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "check=a measured=0.5 tolerance=1.0 status=PASS");
        assert_eq!(lines[1], "check=b measured=NaN tolerance=1.0 status=FAIL");
        assert_eq!(
            lines[2],
            "check=c measured=- tolerance=1.0 status=SKIP reason=zero-amplitude"
        );
        assert_eq!(
            lines[3],
            "summary checks=3 passed=1 failed=1 skipped=1 status=FAIL"
        );
    }

    #[test]
    fn rejects_bad_options() {
        let opts = ValidateOptions {
            r: Some(vec![-1.0]),
            ..ValidateOptions::default()
        };
        assert!(opts.resolve().is_err());
        let opts = ValidateOptions {
            cutoff: Some(1),
            ..ValidateOptions::default()
        };
        assert!(opts.resolve().is_err());
    }
}
