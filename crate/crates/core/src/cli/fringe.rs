//! Fringe scans: `p_e`, `p_ee` and normalized `p_ee` over a grid of
//! detunings or fringe phases.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Deserialize;

use super::{fmt_float, linspace, merge_options, CliError, Result};
use crate::analytic;
use crate::fock::{
    apply_beam_splitter, coherent_cutoff, coherent_product_state, squeezed_cutoff,
    two_mode_squeezed_vacuum, BeamSplitterAngle, SqueezeParams, TwoModeState, AUTO_CUTOFF_TARGET,
    DEFAULT_NORM_TOLERANCE,
};
use crate::ramsey::{envelope, JointMoments, RamseyConfig, PERTURBATIVE_LIMIT};

/// Per-mode amplitude of the coherent baseline, `|α|² = ½`.
pub const COHERENT_BASELINE_ALPHA: f64 = FRAC_1_SQRT_2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    /// Two-mode squeezed vacuum after the beam splitter.
    Squeezed,
    /// Coherent product state with α = 1/√2 per mode.
    CoherentPaper,
    Vacuum,
    /// Amplitudes read from `--state-file`.
    CustomFile,
}

impl StateKind {
    pub fn label(&self) -> &'static str {
        match self {
            StateKind::Squeezed => "squeezed",
            StateKind::CoherentPaper => "coherent-paper",
            StateKind::Vacuum => "vacuum",
            StateKind::CustomFile => "custom-file",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanVariable {
    /// Dimensionless detuning Δτ, with τ and T = t_ratio·τ fixed.
    Delta,
    /// Fringe phase ΔT, with the envelope held at line centre.
    #[value(name = "delta-t", alias = "deltaT")]
    #[serde(alias = "deltaT")]
    DeltaT,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    Numeric,
    Both,
}

impl Method {
    fn expand(self) -> &'static [Method] {
        match self {
            Method::Analytic => &[Method::Analytic],
            Method::Numeric => &[Method::Numeric],
            Method::Both => &[Method::Analytic, Method::Numeric],
        }
    }

    fn label(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
            Method::Both => "both",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FringePreset {
    /// Squeezed r = 0.3, T = 4τ over Δτ ∈ [-3π, 3π] with the coherent and
    /// single-zone baselines.
    Fig3,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FringeOptions {
    #[arg(long, value_enum)]
    pub preset: Option<FringePreset>,
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    /// Amplitude file for `--state custom-file`.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    /// Squeeze magnitude r.
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeeze phase φ.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Beam-splitter angle θ (π/4 is balanced).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Coupling g.
    #[arg(long)]
    pub g: Option<f64>,
    /// Zone transit time τ.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Zone separation in units of τ.
    #[arg(long)]
    pub t_ratio: Option<f64>,
    #[arg(long, value_enum)]
    pub scan: Option<ScanVariable>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Per-mode Fock cutoff for the numeric method (automatic if omitted).
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Also emit the coherent and single-zone baselines.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub baselines: Option<bool>,
}

merge_options!(FringeOptions {
    preset,
    state,
    state_file,
    r,
    phi,
    theta,
    g,
    tau,
    t_ratio,
    scan,
    lo,
    hi,
    points,
    cutoff,
    method,
    baselines,
});

impl FringeOptions {
    fn preset_values(preset: FringePreset) -> Self {
        match preset {
            FringePreset::Fig3 => Self {
                state: Some(StateKind::Squeezed),
                r: Some(0.3),
                t_ratio: Some(4.0),
                scan: Some(ScanVariable::Delta),
                lo: Some(-3.0 * PI),
                hi: Some(3.0 * PI),
                points: Some(1201),
                method: Some(Method::Both),
                baselines: Some(true),
                ..Self::default()
            },
        }
    }

    fn defaults() -> Self {
        Self {
            state: Some(StateKind::Squeezed),
            r: Some(0.3),
            phi: Some(0.0),
            theta: Some(FRAC_PI_4),
            g: Some(0.1),
            tau: Some(1.0),
            t_ratio: Some(4.0),
            scan: Some(ScanVariable::Delta),
            lo: Some(-3.0 * PI),
            hi: Some(3.0 * PI),
            points: Some(601),
            method: Some(Method::Both),
            baselines: Some(false),
            ..Self::default()
        }
    }

    /// Applies the preset and defaults and validates the result.
    pub fn resolve(self) -> Result<ScanRequest> {
        let layered = match self.preset {
            Some(p) => self.or(Self::preset_values(p)),
            None => self,
        };
        let o = layered.or(Self::defaults());
        let request = ScanRequest {
            state: o.state.unwrap(),
            state_file: o.state_file,
            r: o.r.unwrap(),
            phi: o.phi.unwrap(),
            theta: o.theta.unwrap(),
            g: o.g.unwrap(),
            tau: o.tau.unwrap(),
            t_ratio: o.t_ratio.unwrap(),
            scan: o.scan.unwrap(),
            lo: o.lo.unwrap(),
            hi: o.hi.unwrap(),
            points: o.points.unwrap(),
            cutoff: o.cutoff,
            method: o.method.unwrap(),
            baselines: o.baselines.unwrap(),
        };
        request.validate()?;
        Ok(request)
    }
}

/// A fully resolved fringe scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub state: StateKind,
    pub state_file: Option<PathBuf>,
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
    pub g: f64,
    pub tau: f64,
    pub t_ratio: f64,
    pub scan: ScanVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub cutoff: Option<usize>,
    pub method: Method,
    pub baselines: bool,
}

impl ScanRequest {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::InvalidRequest(msg));
        if self.points < 2 {
            return bad(format!("points must be >= 2, got {}", self.points));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return bad(format!(
                "scan range needs lo < hi, got [{}, {}]",
                self.lo, self.hi
            ));
        }
        if let Some(c) = self.cutoff {
            if c < 2 {
                return bad(format!("cutoff must be >= 2, got {c}"));
            }
        }
        if !(self.r.is_finite() && self.r >= 0.0) {
            return bad(format!("r must be >= 0, got {}", self.r));
        }
        if !self.phi.is_finite() || !self.theta.is_finite() {
            return bad("phi and theta must be finite".into());
        }
        if !(self.t_ratio.is_finite() && self.t_ratio >= 0.0) {
            return bad(format!("t-ratio must be >= 0, got {}", self.t_ratio));
        }
        RamseyConfig::new(self.g, self.tau, self.t_ratio * self.tau, 0.0)?;
        if self.state == StateKind::CustomFile && self.state_file.is_none() {
            return bad("state custom-file needs --state-file".into());
        }
        if self.state == StateKind::CustomFile && self.method != Method::Numeric {
            return bad("custom-file states have no closed form; use --method numeric".into());
        }
        if self.state == StateKind::Squeezed
            && self.method != Method::Numeric
            && (self.theta - FRAC_PI_4).abs() > 1e-12
        {
            return bad("closed forms need the balanced splitter (theta = pi/4)".into());
        }
        Ok(())
    }

    /// `(phase ΔT, envelope p̃_e)` at scan value `x`.
    fn point(&self, x: f64) -> Result<(f64, f64)> {
        match self.scan {
            ScanVariable::Delta => {
                let cfg =
                    RamseyConfig::new(self.g, self.tau, self.t_ratio * self.tau, x / self.tau)?;
                Ok((cfg.phase(), envelope(&cfg)))
            }
            ScanVariable::DeltaT => Ok((x, (self.g * self.tau).powi(2))),
        }
    }

    fn header_comment(&self) -> String {
        match self.scan {
            ScanVariable::Delta => format!(
                "# x = detuning*tau; T = {} tau; g = {}; tau = {}",
                fmt_float(self.t_ratio),
                fmt_float(self.g),
                fmt_float(self.tau)
            ),
            ScanVariable::DeltaT => format!(
                "# x = fringe phase detuning*T; envelope fixed at g^2 tau^2 = {}",
                fmt_float((self.g * self.tau).powi(2))
            ),
        }
    }
}

/// One scan point of one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeSample {
    pub x: f64,
    pub p_e: f64,
    pub p_ee: f64,
    /// `p_ee` over its curve's maximum; exactly one sample per non-zero
    /// curve is 1 (the lowest `x` among ties).
    pub p_ee_norm: f64,
    /// `<state>-<method>`, e.g. `squeezed-numeric`.
    pub method: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub header: String,
    pub samples: Vec<FringeSample>,
    /// Probabilities that were rounding noise below zero and set to 0.
    pub clamped: u32,
    pub warnings: Vec<String>,
}

impl FringeScan {
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.header)?;
        writeln!(out, "x,p_e,p_ee,p_ee_norm,method")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_float(s.x),
                fmt_float(s.p_e),
                fmt_float(s.p_ee),
                fmt_float(s.p_ee_norm),
                s.method
            )?;
        }
        Ok(())
    }

    /// Samples of one curve, in scan order.
    pub fn curve<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a FringeSample> + 'a {
        self.samples.iter().filter(move |s| s.method == tag)
    }
}

enum Source {
    Squeezed { r: f64 },
    Coherent,
    Vacuum,
    SingleZone,
    Grid(Box<JointMoments>),
}

struct Curve {
    tag: String,
    source: Source,
}

impl Curve {
    fn eval(&self, phase: f64, env: f64, clamped: &mut u32) -> Result<(f64, f64)> {
        Ok(match &self.source {
            Source::Squeezed { r } => (
                analytic::squeezed_pe(*r, env),
                analytic::squeezed_pee(*r, phase, env),
            ),
            Source::Coherent => (
                analytic::coherent_pe(phase, env),
                analytic::coherent_pee(phase, env),
            ),
            Source::Vacuum => (0.0, 0.0),
            Source::SingleZone => (env, env * env),
            Source::Grid(moments) => {
                let res = moments.excitation_at(phase, env)?;
                *clamped += res.clamped;
                (res.p_e, res.p_ee)
            }
        })
    }
}

/// Builds the numeric field state for a scan.
pub fn build_state(request: &ScanRequest, kind: StateKind) -> Result<TwoModeState> {
    match kind {
        StateKind::Squeezed => {
            let params = SqueezeParams::new(request.r, request.phi)?;
            let cutoff = match request.cutoff {
                Some(c) => c,
                None => squeezed_cutoff(request.r, AUTO_CUTOFF_TARGET)?,
            };
            let tmsv = two_mode_squeezed_vacuum(params, cutoff)?;
            Ok(apply_beam_splitter(&tmsv, BeamSplitterAngle(request.theta)))
        }
        StateKind::CoherentPaper => {
            let alpha = C64::new(COHERENT_BASELINE_ALPHA, 0.0);
            let cutoff = match request.cutoff {
                Some(c) => c,
                None => coherent_cutoff(alpha, alpha, AUTO_CUTOFF_TARGET)?,
            };
            Ok(coherent_product_state(alpha, alpha, cutoff)?)
        }
        StateKind::Vacuum => Ok(TwoModeState::vacuum(request.cutoff.unwrap_or(2))?),
        StateKind::CustomFile => {
            let path = request
                .state_file
                .as_deref()
                .ok_or_else(|| CliError::InvalidRequest("missing --state-file".into()))?;
            let state = load_state_file(path)?;
            match request.cutoff {
                Some(c) if c > state.cutoff() => Ok(state.resized(c)?),
                _ => Ok(state),
            }
        }
    }
}

fn curves_for(request: &ScanRequest, kind: StateKind, methods: &[Method]) -> Result<Vec<Curve>> {
    let mut curves = Vec::new();
    for &method in methods {
        let tag = format!("{}-{}", kind.label(), method.label());
        let source = match (method, kind) {
            (Method::Analytic, StateKind::Squeezed) => Source::Squeezed { r: request.r },
            (Method::Analytic, StateKind::CoherentPaper) => Source::Coherent,
            (Method::Analytic, StateKind::Vacuum) => Source::Vacuum,
            (Method::Analytic, StateKind::CustomFile) => {
                return Err(CliError::InvalidRequest(
                    "no closed form for custom-file".into(),
                ))
            }
            _ => Source::Grid(Box::new(JointMoments::of(&build_state(request, kind)?))),
        };
        curves.push(Curve { tag, source });
    }
    Ok(curves)
}

/// Evaluates the scan. Output order is scan order, and within one scan
/// value the curves appear in a fixed order.
pub fn run_fringe(request: &ScanRequest) -> Result<FringeScan> {
    request.validate()?;
    let methods = request.method.expand();
    let mut curves = curves_for(request, request.state, methods)?;
    if request.baselines {
        if request.state != StateKind::CoherentPaper {
            curves.extend(curves_for(request, StateKind::CoherentPaper, methods)?);
        }
        curves.push(Curve {
            tag: "single-zone-analytic".into(),
            source: Source::SingleZone,
        });
    }

    let mut warnings = Vec::new();
    if request.g * request.tau > PERTURBATIVE_LIMIT {
        warnings.push(format!(
            "g*tau = {} exceeds {PERTURBATIVE_LIMIT}: second-order results are unreliable",
            request.g * request.tau
        ));
    }

    let mut clamped = 0;
    let mut samples = Vec::with_capacity(request.points * curves.len());
    for x in linspace(request.lo, request.hi, request.points) {
        let (phase, env) = request.point(x)?;
        for curve in &curves {
            let (p_e, p_ee) = curve.eval(phase, env, &mut clamped)?;
            samples.push(FringeSample {
                x,
                p_e,
                p_ee,
                p_ee_norm: 0.0,
                method: curve.tag.clone(),
            });
        }
    }
    for curve in &curves {
        normalize_curve(&mut samples, &curve.tag);
    }
    if clamped > 0 {
        warnings.push(format!(
            "{clamped} probabilities below zero by < 1e-12 were clamped to 0"
        ));
    }
    Ok(FringeScan {
        header: request.header_comment(),
        samples,
        clamped,
        warnings,
    })
}

fn normalize_curve(samples: &mut [FringeSample], tag: &str) {
    let mut peak: Option<(usize, f64)> = None;
    for (i, s) in samples.iter().enumerate().filter(|(_, s)| s.method == tag) {
        // samples arrive in ascending x, so strict > keeps the lowest x on ties
        if peak.is_none_or(|(_, best)| s.p_ee > best) {
            peak = Some((i, s.p_ee));
        }
    }
    let Some((peak_index, max)) = peak else {
        return;
    };
    let below_one = 1.0 - f64::EPSILON / 2.0;
    for (i, s) in samples
        .iter_mut()
        .enumerate()
        .filter(|(_, s)| s.method == tag)
    {
        s.p_ee_norm = if max <= 0.0 {
            0.0
        } else if i == peak_index {
            1.0
        } else {
            (s.p_ee / max).min(below_one)
        };
    }
}

/// Reads `n_a,n_b,re,im` lines (blank lines, `#` comments and a header
/// row are skipped). The grid is sized to the largest index; the state
/// must be normalized.
pub fn load_state_file(path: &Path) -> Result<TwoModeState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::InvalidRequest(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|msg| CliError::InvalidRequest(format!("{}: {msg}", path.display())))
}

pub fn parse_state(text: &str) -> std::result::Result<TwoModeState, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for record in reader.deserialize::<(String, String, String, String)>() {
        let (n, m, re, im) = record.map_err(|e| format!("expected n_a,n_b,re,im: {e}"))?;
        let Ok(n) = n.parse::<usize>() else {
            if entries.is_empty() {
                continue; // header
            }
            return Err(format!("bad photon number {n:?}"));
        };
        let m = m
            .parse::<usize>()
            .map_err(|_| format!("bad photon number {m:?}"))?;
        let re = re
            .parse::<f64>()
            .map_err(|_| format!("bad real part {re:?}"))?;
        let im = im
            .parse::<f64>()
            .map_err(|_| format!("bad imaginary part {im:?}"))?;
        entries.push((n, m, C64::new(re, im)));
    }
    if entries.is_empty() {
        return Err("no amplitudes".into());
    }
    let cutoff = entries.iter().map(|&(n, m, _)| n.max(m)).max().unwrap() + 1;
    let mut amps = Array2::zeros((cutoff, cutoff));
    for (n, m, c) in entries {
        amps[[n, m]] += c;
    }
    let state = TwoModeState::from_amplitudes(amps).map_err(|e| e.to_string())?;
    if !state.is_normalized(DEFAULT_NORM_TOLERANCE) {
        return Err(format!(
            "state is not normalized (norm² = {})",
            state.norm_sqr()
        ));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(state: StateKind) -> ScanRequest {
        FringeOptions {
            state: Some(state),
            ..FringeOptions::default()
        }
        .resolve()
        .unwrap()
    }

    #[test]
    fn flags_beat_preset() {
        let opts = FringeOptions {
            preset: Some(FringePreset::Fig3),
            points: Some(11),
            ..FringeOptions::default()
        };
        let req = opts.resolve().unwrap();
        assert_eq!(req.points, 11);
        assert_eq!(req.t_ratio, 4.0);
        assert!(req.baselines);
    }

    #[test]
    fn invalid_requests() {
        let mut req = request(StateKind::Squeezed);
        req.points = 1;
        assert!(matches!(req.validate(), Err(CliError::InvalidRequest(_))));
        let mut req = request(StateKind::Squeezed);
        req.lo = req.hi;
        assert!(req.validate().is_err());
        let mut req = request(StateKind::Squeezed);
        req.theta = 0.3;
        assert!(req.validate().is_err());
        req.method = Method::Numeric;
        assert!(req.validate().is_ok());
        let opts = FringeOptions {
            state: Some(StateKind::CustomFile),
            ..FringeOptions::default()
        };
        assert!(opts.resolve().is_err());
    }

    #[test]
    fn vacuum_scan_is_zero() {
        let scan = run_fringe(&request(StateKind::Vacuum)).unwrap();
        assert!(scan
            .samples
            .iter()
            .all(|s| s.p_e == 0.0 && s.p_ee == 0.0 && s.p_ee_norm == 0.0));
    }

    #[test]
    fn small_cutoff_is_numeric_error() {
        let mut req = request(StateKind::Squeezed);
        req.r = 0.8;
        req.cutoff = Some(4);
        let err = run_fringe(&req).unwrap_err();
        assert_eq!(err.exit_code(), super::super::EXIT_NUMERIC);
    }

    #[test]
    fn normalization_ties_go_to_lowest_x() {
        let mut samples: Vec<FringeSample> = [1.0, 3.0, 3.0, 2.0]
            .iter()
            .enumerate()
            .map(|(i, &p)| FringeSample {
                x: i as f64,
                p_e: 0.0,
                p_ee: p,
                p_ee_norm: 0.0,
                method: "t".into(),
            })
            .collect();
        normalize_curve(&mut samples, "t");
        let ones = samples.iter().filter(|s| s.p_ee_norm == 1.0).count();
        assert_eq!(ones, 1);
        assert_eq!(samples[1].p_ee_norm, 1.0);
        assert!(samples[2].p_ee_norm < 1.0);
    }

    #[test]
    fn parse_custom_state() {
        let s = parse_state("n_a,n_b,re,im\n# comment\n1,0,0.6,0\n0,1,0,0.8\n").unwrap();
        assert_eq!(s.cutoff(), 2);
        assert!((s.amplitude(0, 1).im - 0.8).abs() < 1e-15);
        assert!(parse_state("0,0,0.5,0\n").is_err());
        assert!(parse_state("0,0,1\n").is_err());
        assert!(parse_state("").is_err());
    }
}
