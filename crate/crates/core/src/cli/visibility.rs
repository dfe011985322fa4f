//! Visibility sweeps over the squeeze magnitude.

use std::f64::consts::{FRAC_PI_4, PI};
use std::io::Write;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use super::{fmt_float, linspace, merge_options, CliError, Result};
use crate::analytic;
use crate::fock::{
    apply_beam_splitter, squeezed_cutoff, two_mode_squeezed_vacuum, BeamSplitterAngle,
    SqueezeParams, AUTO_CUTOFF_TARGET,
};
use crate::ramsey::JointMoments;

/// Phase samples per unit π used to extract the fringe contrast.
pub const PHASE_SAMPLES_PER_PI: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VisibilityPreset {
    /// r ∈ [0, 2], 41 points, numeric fringes.
    Fig4,
}

/// Source of the fringe the contrast is extracted from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FringeSource {
    /// Closed-form `p_ee`.
    Analytic,
    /// Grid moments of the split squeezed vacuum.
    Numeric,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VisibilityOptions {
    #[arg(long, value_enum)]
    pub preset: Option<VisibilityPreset>,
    #[arg(long)]
    pub r_lo: Option<f64>,
    #[arg(long)]
    pub r_hi: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<FringeSource>,
}

merge_options!(VisibilityOptions {
    preset,
    r_lo,
    r_hi,
    points,
    method
});

impl VisibilityOptions {
    fn defaults() -> Self {
        Self {
            preset: None,
            r_lo: Some(0.0),
            r_hi: Some(2.0),
            points: Some(41),
            method: Some(FringeSource::Numeric),
        }
    }

    pub fn resolve(self) -> Result<VisibilityRequest> {
        // the only preset coincides with the defaults
        let o = self.or(Self::defaults());
        let request = VisibilityRequest {
            r_lo: o.r_lo.unwrap(),
            r_hi: o.r_hi.unwrap(),
            points: o.points.unwrap(),
            method: o.method.unwrap(),
        };
        request.validate()?;
        Ok(request)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityRequest {
    pub r_lo: f64,
    pub r_hi: f64,
    pub points: usize,
    pub method: FringeSource,
}

impl VisibilityRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_lo.is_finite()
            && self.r_hi.is_finite()
            && 0.0 <= self.r_lo
            && self.r_lo < self.r_hi)
        {
            return Err(CliError::InvalidRequest(format!(
                "need 0 <= r-lo < r-hi, got [{}, {}]",
                self.r_lo, self.r_hi
            )));
        }
        if self.points < 2 {
            return Err(CliError::InvalidRequest(format!(
                "points must be >= 2, got {}",
                self.points
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityRow {
    pub r: f64,
    /// `1/(1 + 4 tanh² r)`.
    pub visibility: f64,
    /// Contrast of the computed fringe; `None` when there is no fringe.
    pub fringe: Option<f64>,
    pub status: &'static str,
}

/// Contrast of `⟨J†²J²⟩` over one full turn of the fringe phase.
pub fn numeric_fringe_visibility(r: f64) -> Result<Option<f64>> {
    let params = SqueezeParams::new(r, 0.0)?;
    if r == 0.0 {
        return Ok(None);
    }
    // pair moments scale like sinh²r, so the lost tail is kept small
    // relative to the signal rather than in absolute terms
    let target = AUTO_CUTOFF_TARGET * r.sinh().powi(2).min(1.0);
    let cutoff = squeezed_cutoff(r, target)?;
    let tmsv = two_mode_squeezed_vacuum(params, cutoff)?;
    let split = apply_beam_splitter(&tmsv, BeamSplitterAngle(FRAC_PI_4));
    let moments = JointMoments::of(&split);
    let samples: Vec<f64> = phase_grid().map(|p| moments.pair_intensity(p)).collect();
    Ok(analytic::fringe_visibility(&samples))
}

fn phase_grid() -> impl Iterator<Item = f64> {
    (0..2 * PHASE_SAMPLES_PER_PI).map(|j| PI * j as f64 / PHASE_SAMPLES_PER_PI as f64)
}

pub fn run_visibility(request: &VisibilityRequest) -> Result<Vec<VisibilityRow>> {
    request.validate()?;
    let mut rows = Vec::with_capacity(request.points);
    for r in linspace(request.r_lo, request.r_hi, request.points) {
        let fringe = match request.method {
            FringeSource::Numeric => numeric_fringe_visibility(r)?,
            FringeSource::Analytic => {
                let samples: Vec<f64> = phase_grid()
                    .map(|p| analytic::squeezed_pee(r, p, 1.0))
                    .collect();
                analytic::fringe_visibility(&samples)
            }
        };
        // at r = 0 nothing is excited and the fringe does not exist
        let fringe = fringe.filter(|_| r > 0.0);
        rows.push(VisibilityRow {
            r,
            visibility: analytic::visibility(r),
            fringe,
            status: if fringe.is_some() {
                "ok"
            } else {
                "zero-amplitude"
            },
        });
    }
    Ok(rows)
}

pub fn write_csv(
    request: &VisibilityRequest,
    rows: &[VisibilityRow],
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let source = match request.method {
        FringeSource::Analytic => "closed-form p_ee",
        FringeSource::Numeric => "grid moments",
    };
    writeln!(
        out,
        "# fringe_visibility from {source}, {} phase samples per period",
        PHASE_SAMPLES_PER_PI
    )?;
    writeln!(out, "r,visibility,fringe_visibility,status")?;
    for row in rows {
        let fringe = row.fringe.map(fmt_float).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            fmt_float(row.r),
            fmt_float(row.visibility),
            fringe,
            row.status
        )?;
    }
    Ok(())
}
