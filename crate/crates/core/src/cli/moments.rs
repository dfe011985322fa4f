//! Closed-form against grid moments of the split squeezed vacuum.

use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use clap::Args;
use serde::Deserialize;

use super::{fmt_float, merge_options, Result};
use crate::analytic::moment_closed_forms;
use crate::fock::{
    apply_beam_splitter, normally_ordered_moment, squeezed_cutoff, two_mode_squeezed_vacuum,
    BeamSplitterAngle, SqueezeParams, TwoModeState, AUTO_CUTOFF_TARGET,
};

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MomentsOptions {
    /// Squeeze magnitude r.
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeeze phase φ.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Per-mode Fock cutoff (automatic if omitted).
    #[arg(long)]
    pub cutoff: Option<usize>,
}

merge_options!(MomentsOptions { r, phi, cutoff });

impl MomentsOptions {
    pub fn resolve(self) -> Result<MomentsRequest> {
        let r = self.r.unwrap_or(0.3);
        let params = SqueezeParams::new(r, self.phi.unwrap_or(0.0))?;
        let cutoff = match self.cutoff {
            Some(c) => c,
            None => squeezed_cutoff(r, AUTO_CUTOFF_TARGET)?,
        };
        Ok(MomentsRequest { params, cutoff })
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MomentsRequest {
    pub params: SqueezeParams,
    pub cutoff: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub name: &'static str,
    pub closed_form: f64,
    /// Grid value; complex moments are compared through `|numeric - closed|`.
    pub numeric: f64,
    pub abs_error: f64,
    /// `abs_error / |closed_form|`, or `abs_error` when the closed form is 0.
    pub rel_error: f64,
}

impl MomentRow {
    fn new(name: &'static str, closed_form: f64, numeric: num_complex::Complex64) -> Self {
        let abs_error = (numeric - closed_form).norm();
        let rel_error = if closed_form == 0.0 {
            abs_error
        } else {
            abs_error / closed_form.abs()
        };
        Self {
            name,
            closed_form,
            numeric: numeric.re,
            abs_error,
            rel_error,
        }
    }
}

/// Compares the grid moments of `split` (the balanced-split squeezed vacuum
/// of magnitude `r`) with their closed forms.
pub fn compare_moments(r: f64, split: &TwoModeState) -> Vec<MomentRow> {
    let closed = moment_closed_forms(r);
    let m = |p, q, u, v| normally_ordered_moment(split, p, q, u, v);
    let first_order = [m(1, 0, 0, 1), m(0, 1, 1, 0), m(1, 0, 0, 0), m(0, 0, 0, 1)];
    let worst_first = first_order
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap();
    vec![
        MomentRow::new("a_dag2_a2", closed.a_pair, m(2, 2, 0, 0)),
        MomentRow::new("b_dag2_b2", closed.b_pair, m(0, 0, 2, 2)),
        MomentRow::new(
            "n_a_times_n_b",
            closed.number_product,
            m(1, 1, 0, 0) * m(0, 0, 1, 1),
        ),
        MomentRow::new("a_dag2_b2", closed.pair_exchange, m(2, 0, 0, 2)),
        MomentRow::new("b_dag2_a2", closed.pair_exchange, m(0, 2, 2, 0)),
        MomentRow::new("first_order_cross", closed.first_order_cross, worst_first),
    ]
}

pub fn run_moments(request: &MomentsRequest) -> Result<Vec<MomentRow>> {
    let tmsv = two_mode_squeezed_vacuum(request.params, request.cutoff)?;
    let split = apply_beam_splitter(&tmsv, BeamSplitterAngle(FRAC_PI_4));
    Ok(compare_moments(request.params.r(), &split))
}

pub fn write_csv(rows: &[MomentRow], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "moment,closed_form,numeric,abs_error,rel_error")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.name,
            fmt_float(row.closed_form),
            fmt_float(row.numeric),
            fmt_float(row.abs_error),
            fmt_float(row.rel_error)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_at_auto_cutoff() {
        for r in [0.1, 0.3, 0.8] {
            let req = MomentsOptions {
                r: Some(r),
                ..MomentsOptions::default()
            }
            .resolve()
            .unwrap();
            for row in run_moments(&req).unwrap() {
                assert!(
                    row.rel_error < 1e-8,
                    "{} at r={r}: {}",
                    row.name,
                    row.rel_error
                );
            }
        }
    }

    #[test]
    fn phase_does_not_change_moduli() {
        let req = MomentsOptions {
            r: Some(0.5),
            phi: Some(2.0),
            ..MomentsOptions::default()
        }
        .resolve()
        .unwrap();
        let rows = run_moments(&req).unwrap();
        assert!(rows.iter().take(3).all(|row| row.rel_error < 1e-8));
    }
}
